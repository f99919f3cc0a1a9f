//! Probe each position of a reused trap key, map the blocks, then forge.

use qauth::auth::AuthFamily;
use qauth::protocol::{adaptive_probe, adaptive_probe_runs, ProbeBases};

fn main() -> qauth::Result<()> {
    let trap = AuthFamily::trap_rm(1)?;
    let r = adaptive_probe(&trap, 1, ProbeBases::Both)?;
    println!(
        "trap: {} probes, {} accepted, map accuracy {}, forgery {} -> {:?} ({:?})",
        r.probes_used, r.probes_accepted, r.block_map_accuracy, r.forgery_attack, r.forgery_verdict, r.forgery_logical_action
    );

    for f in [trap, AuthFamily::strong_trap_rm(1)?] {
        let s = adaptive_probe_runs(&f, 200, 2, ProbeBases::Both)?;
        println!(
            "{}: {} of {} runs forged, upper CI {:.4}",
            f.kind(),
            s.forgeries,
            s.runs,
            s.forgery_ci.high
        );
    }
    Ok(())
}
