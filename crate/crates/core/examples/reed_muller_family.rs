//! Parameters of the punctured Reed-Muller CSS family.

use qauth::codes::{reed_muller, rm_css, sparsity_report};

fn main() -> qauth::Result<()> {
    for i in 1..=2 {
        let rm = reed_muller(i, 2 * i + 1)?;
        println!(
            "R({i}, {}): length {}, rank {}, distance {:?}",
            2 * i + 1,
            rm.n(),
            rm.rank(),
            rm.min_distance()?
        );
        let css = rm_css(i)?;
        let sparsity = sparsity_report(&css)?;
        println!(
            "  member {i}: [[{}, {}, {}]], benign distance {:?}",
            css.n(),
            css.m(),
            css.distance(),
            css.benign_distance()
        );
        println!(
            "  f_X = {}/{} at weight {}; extended bound holds: {}",
            sparsity.f_x_exact.0,
            sparsity.f_x_exact.1,
            sparsity.f_x_weight,
            sparsity.rcw_extended_range.iter().all(|&(_, ok)| ok)
        );
    }
    Ok(())
}
