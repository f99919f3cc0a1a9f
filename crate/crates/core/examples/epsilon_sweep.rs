//! Worst-case undetected probability per weight class, as CSV.

use qauth::auth::AuthFamily;
use qauth::purity::{epsilon_sweep, SweepConfig};

fn main() -> qauth::Result<()> {
    let f = AuthFamily::trap_rm(1)?;
    let config = SweepConfig {
        max_weight: 3,
        n_keys: 2000,
        seed: 11,
        ..SweepConfig::default()
    };
    let report = epsilon_sweep(&f, &config)?;
    print!("{}", report.to_csv()?);
    if let (Some(pt), Some(spt)) = (&report.max_pt, &report.max_spt) {
        eprintln!("max PT {:.4}, max SPT {:.4}, PT bound {:?}", pt.value, spt.value, pt.bound);
    }
    Ok(())
}
