//! The Clifford code: uniform random Clifford keys, exact and sampled
//! undetected probabilities.

use qauth::auth::AuthFamily;
use qauth::purity::{exact_clifford_pt, exact_clifford_spt, undetected_prob, AttackSpec, Flavor};
use qauth::PauliOp;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qauth::Result<()> {
    let (m, t) = (1, 6);
    let f = AuthFamily::clifford(m, t)?;
    println!("exact SPT {}, exact PT {}", exact_clifford_spt(m, t), exact_clifford_pt(m, t));

    let key = f.sample_key(&mut ChaCha8Rng::seed_from_u64(0));
    println!("one key synthesises to {} gates", f.encoder(&key)?.gates().len());

    let attack: PauliOp = "XIIZIIY".parse().unwrap();
    for flavor in Flavor::BOTH {
        let e = undetected_prob(&f, &AttackSpec::Pauli(attack.clone()), flavor, 50_000, 2)?;
        println!("{flavor} for {attack}: {:.5} [{:.5}, {:.5}], bound {:?}", e.value, e.ci.low, e.ci.high, e.bound);
    }
    Ok(())
}
