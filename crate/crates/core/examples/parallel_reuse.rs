//! Ciphertexts sharing one code key: how often the last one is forged.

use qauth::auth::AuthFamily;
use qauth::protocol::{parallel_reuse, ProbeBases, Strategy};
use qauth::Pauli1;

fn main() -> qauth::Result<()> {
    let strategies = [
        Strategy::Identity { rounds: 2 },
        Strategy::SingleProbe { position: 0, basis: Pauli1::X, follow_up: 1 },
        Strategy::ProbeAllThenForge { bases: ProbeBases::Both, budget: None },
        Strategy::RandomPauli { weight: 3, rounds: 4 },
    ];
    for f in [AuthFamily::trap_rm(1)?, AuthFamily::strong_trap_rm(1)?] {
        for s in &strategies {
            let r = parallel_reuse(&f, s, 2000, 4, 8)?;
            println!(
                "{:<11} {:<60} accept {:.3}, forge {:.3} [{:.4}, {:.4}]",
                f.kind(),
                serde_json::to_string(s).unwrap(),
                r.p_accept_second,
                r.p_forge_second,
                r.ci_forge_second.low,
                r.ci_forge_second.high
            );
        }
    }
    Ok(())
}
