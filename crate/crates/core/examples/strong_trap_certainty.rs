//! Every weight-1 and weight-2 Pauli is rejected by the strong trap code.

use qauth::auth::AuthFamily;
use qauth::purity::{verdict_counts, WeightClass};

fn main() -> qauth::Result<()> {
    let f = AuthFamily::strong_trap_rm(1)?;
    let n = f.total_qubits();
    for class in WeightClass::all_up_to(2) {
        let attacks = class.enumerate(n)?;
        let counts = verdict_counts(&f, &attacks, 1000, 3, 8)?;
        let accepted: u64 = counts.iter().map(|c| c.trials - c.rejected).sum();
        println!("{class}: {} Paulis x 1000 keys, {accepted} accepted", attacks.len());
    }
    Ok(())
}
