//! Uniform sampling of `n`-qubit Cliffords (modulo Paulis and phases) and
//! synthesis of a `{H, S, CNOT}` gate list for a given symplectic action.
//!
//! Sampling picks the images of `X_0, Z_0, X_1, Z_1, ...` one pair at a
//! time. Each new image is drawn uniformly from the symplectic complement of
//! the pairs chosen so far, by projecting a uniform vector of the full space
//! onto that complement. Every symplectic matrix is produced by exactly one
//! sequence of choices, so the result is uniform over `Sp(2n, 2)`.

use rand::Rng;

use crate::gf2::BitVec;
use crate::symplectic::{is_symplectic_images, Gate, Pauli1, PauliOp, SymplecticCircuit};

fn random_pauli<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PauliOp {
    let mut x = BitVec::zeros(n);
    let mut z = BitVec::zeros(n);
    for q in 0..n {
        if rng.random::<bool>() {
            x.set(q, true);
        }
        if rng.random::<bool>() {
            z.set(q, true);
        }
    }
    PauliOp::from_parts(x, z).expect("equal lengths")
}

/// Projects `v` onto the symplectic complement of the hyperbolic pairs.
fn project(mut v: PauliOp, pairs: &[(PauliOp, PauliOp)]) -> PauliOp {
    for (a, b) in pairs {
        // v ↦ v + <v,b> a + <v,a> b kills both pairings.
        let vb = v.sip_unchecked(b);
        let va = v.sip_unchecked(a);
        if vb {
            v.mul_assign_unchecked(a);
        }
        if va {
            v.mul_assign_unchecked(b);
        }
    }
    v
}

/// Column images `[f(X_0), .., f(X_{n-1}), f(Z_0), .., f(Z_{n-1})]` of a
/// uniformly random symplectic map.
pub fn random_symplectic_images<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<PauliOp> {
    let mut pairs: Vec<(PauliOp, PauliOp)> = Vec::with_capacity(n);
    for _ in 0..n {
        let a = loop {
            let v = project(random_pauli(n, rng), &pairs);
            if !v.is_identity() {
                break v;
            }
        };
        let b = loop {
            let v = project(random_pauli(n, rng), &pairs);
            if v.sip_unchecked(&a) {
                break v;
            }
        };
        pairs.push((a, b));
    }
    let (xs, zs): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    xs.into_iter().chain(zs).collect()
}

/// Gate list whose compiled forward action equals `images`.
///
/// Works qubit by qubit: gates are appended to a reducing circuit `W` until
/// `W ∘ V` fixes `X_j` and `Z_j`; the reversed, inverted list realises `V`.
pub fn synthesize(images: &[PauliOp]) -> Vec<Gate> {
    assert!(is_symplectic_images(images), "images do not form a symplectic map");
    let n = images.len() / 2;
    let mut cols: Vec<PauliOp> = images.to_vec();
    let mut reducer: Vec<Gate> = Vec::new();

    let push = |g: Gate, cols: &mut Vec<PauliOp>, reducer: &mut Vec<Gate>| {
        let c = SymplecticCircuit::new(n, vec![g.clone()]).expect("valid gate");
        for col in cols.iter_mut() {
            *col = c.conjugate_by_gates(col, crate::symplectic::Direction::Forward).unwrap();
        }
        reducer.push(g);
    };

    for j in 0..n {
        // Make the image of X_j purely X-type on qubits >= j.
        for k in j..n {
            match cols[j].get(k) {
                Pauli1::Z => push(Gate::H(k), &mut cols, &mut reducer),
                Pauli1::Y => push(Gate::S(k), &mut cols, &mut reducer),
                _ => {}
            }
        }
        if !cols[j].x_bits().get(j) {
            let k = (j + 1..n)
                .find(|&k| cols[j].x_bits().get(k))
                .expect("image of X_j is nonzero on the remaining qubits");
            push(Gate::Cnot { control: k, target: j }, &mut cols, &mut reducer);
        }
        for k in j + 1..n {
            if cols[j].x_bits().get(k) {
                push(Gate::Cnot { control: j, target: k }, &mut cols, &mut reducer);
            }
        }
        // Now clear the image of Z_j on qubits > j without disturbing X_j.
        let zj = n + j;
        for k in j + 1..n {
            match cols[zj].get(k) {
                Pauli1::X => push(Gate::H(k), &mut cols, &mut reducer),
                Pauli1::Y => {
                    push(Gate::S(k), &mut cols, &mut reducer);
                    push(Gate::H(k), &mut cols, &mut reducer);
                }
                _ => {}
            }
        }
        for k in j + 1..n {
            if cols[zj].z_bits().get(k) {
                push(Gate::Cnot { control: k, target: j }, &mut cols, &mut reducer);
            }
        }
        if cols[zj].get(j) == Pauli1::Y {
            // H S H fixes X and swaps Y with Z.
            push(Gate::H(j), &mut cols, &mut reducer);
            push(Gate::S(j), &mut cols, &mut reducer);
            push(Gate::H(j), &mut cols, &mut reducer);
        }
        debug_assert_eq!(cols[j], PauliOp::single(n, j, Pauli1::X));
        debug_assert_eq!(cols[zj], PauliOp::single(n, j, Pauli1::Z));
    }
    // Every gate used is its own phaseless inverse.
    reducer.reverse();
    reducer
}

/// A uniformly random Clifford, compiled.
pub fn random_clifford<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SymplecticCircuit {
    let images = random_symplectic_images(n, rng);
    let gates = synthesize(&images);
    SymplecticCircuit::new(n, gates).expect("synthesised gates are in range")
}

/// `|Sp(2n, 2)|` for small `n`.
pub fn symplectic_group_order(n: u32) -> u128 {
    (1..=n).map(|k| (4u128.pow(k) - 1) * 2u128.pow(2 * k - 1)).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::Direction;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn group_orders() {
        assert_eq!(symplectic_group_order(1), 6);
        assert_eq!(symplectic_group_order(2), 720);
    }

    #[test]
    fn sampled_maps_are_symplectic_and_synthesis_reproduces_them() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=9 {
            for _ in 0..20 {
                let images = random_symplectic_images(n, &mut rng);
                assert!(is_symplectic_images(&images));
                let c = SymplecticCircuit::new(n, synthesize(&images)).unwrap();
                assert_eq!(c.images(Direction::Forward), images.as_slice());
            }
        }
    }
}
