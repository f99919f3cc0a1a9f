//! Chance that w positions all miss one block of a random trap permutation,
//! against (2/3)^w.

use qauth::purity::trap_block_bound;

fn main() -> qauth::Result<()> {
    let n = 7;
    println!("{:>3} {:>24} {:>12} {:>12} strict", "w", "ratio", "value", "(2/3)^w");
    for w in 0..=3 * n {
        let b = trap_block_bound(n, w)?;
        println!(
            "{w:>3} {:>24} {:>12.6e} {:>12.6e} {:?}",
            format!("{}/{}", b.numerator, b.denominator),
            b.value,
            b.two_thirds_power,
            b.strictly_below
        );
    }
    Ok(())
}
