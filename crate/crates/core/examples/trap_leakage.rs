//! Accepting a single-qubit X probe tells the adversary where a trap sits.

use qauth::auth::AuthFamily;
use qauth::protocol::{key_posterior, Condition, KeyStatistic};
use qauth::{Pauli1, PauliOp};

fn main() -> qauth::Result<()> {
    let attack = PauliOp::single(21, 0, Pauli1::X);
    let stat = KeyStatistic::BlockType { position: 0 };

    let trap = AuthFamily::trap_rm(1)?;
    let r = key_posterior(&trap, &attack, Condition::Accept, stat, 20_000, 1, 8)?;
    println!("trap: {} of {} keys accept", r.events, r.n_keys);
    for ((label, prior), post) in r.labels.iter().zip(&r.prior).zip(&r.posterior) {
        println!("  {label:?}: prior {prior:.3}, posterior {post:.3}");
    }
    println!("  TV distance {:.4} (exact {:?})", r.tv_distance, r.exact_tv_distance);

    let strong = AuthFamily::strong_trap_rm(1)?;
    match key_posterior(&strong, &attack, Condition::Accept, stat, 20_000, 1, 8) {
        Err(e) => println!("strong trap: {e}"),
        Ok(r) => println!("strong trap: {} accepting keys", r.events),
    }
    Ok(())
}
