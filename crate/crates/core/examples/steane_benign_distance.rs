//! The [[7,1,3]] member detects every nonidentity Pauli of weight below 4
//! that is not a logical operator, and no stabiliser has weight below 4.

use qauth::codes::rm_css;
use qauth::symplectic::classify;
use qauth::{DetectionClass, Direction, PauliOp};

fn main() -> qauth::Result<()> {
    let css = rm_css(1)?;
    println!("distance {}, benign distance {:?}", css.distance(), css.benign_distance());
    println!("C1 generator rows: {:?}", css.c1().to_hex_rows());

    let enc = css.encoder();
    let mut tally = [0u32; 3];
    let mut logical_weight3 = 0;
    for mask in 1u32..1 << 14 {
        let bits = |m: u32| (0..7).filter(move |q| m >> q & 1 == 1);
        let p = PauliOp::x_on(7, bits(mask)).mul(&PauliOp::z_on(7, bits(mask >> 7)))?;
        if p.weights().total > 3 {
            continue;
        }
        let class = classify(&enc.conjugate(&p, Direction::Inverse)?, css.layout())?;
        tally[class as usize] += 1;
        if class == DetectionClass::AcceptedForged {
            logical_weight3 += u32::from(p.weights().total == 3);
        }
    }
    println!("weight 1..=3 Paulis: {} rejected, {} accepted as identity, {} forged", tally[0], tally[1], tally[2]);
    println!("all forgeries have weight 3: {}", logical_weight3 == tally[2]);
    Ok(())
}
