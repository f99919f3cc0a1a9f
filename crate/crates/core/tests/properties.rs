mod common;

use common::{block_oracle, random_gate};
use proptest::prelude::*;
use qauth::auth::{random_pauli, AuthFamily, BlockType};
use qauth::clifford::random_clifford;
use qauth::protocol::{parallel_reuse, run_session, CiphertextFrame, ProbeBases, Strategy};
use qauth::purity::{epsilon_sweep, verdict_counts, Flavor, SweepConfig, WeightClass};
use qauth::symplectic::{invert_images, is_symplectic_images};
use qauth::{DetectionClass, Direction, Pauli1, PauliOp, SymplecticCircuit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn families() -> Vec<AuthFamily> {
    vec![
        AuthFamily::trap_rm(1).unwrap(),
        AuthFamily::strong_trap_rm(1).unwrap(),
        AuthFamily::clifford(1, 6).unwrap(),
        AuthFamily::clifford(2, 3).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn pauli_text_and_json_round_trip(n in 1usize..=130, seed: u64) {
        let p = random_pauli(n, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(p.to_string().parse::<PauliOp>().unwrap(), p.clone());
        let json = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<PauliOp>(&json).unwrap(), p);
    }

    #[test]
    fn sip_is_symmetric_and_bilinear(n in 1usize..=100, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (random_pauli(n, &mut rng), random_pauli(n, &mut rng), random_pauli(n, &mut rng));
        prop_assert_eq!(a.sip(&b).unwrap(), b.sip(&a).unwrap());
        prop_assert!(!a.sip(&a).unwrap());
        let bc = b.mul(&c).unwrap();
        prop_assert_eq!(a.sip(&bc).unwrap(), a.sip(&b).unwrap() ^ a.sip(&c).unwrap());
    }

    #[test]
    fn cliffords_preserve_commutation_and_invert(n in 1usize..=64, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_clifford(n, &mut rng);
        prop_assert!(c.is_symplectic());
        for _ in 0..4 {
            let (a, b) = (random_pauli(n, &mut rng), random_pauli(n, &mut rng));
            let ca = c.conjugate(&a, Direction::Forward).unwrap();
            let cb = c.conjugate(&b, Direction::Forward).unwrap();
            prop_assert_eq!(a.sip(&b).unwrap(), ca.sip(&cb).unwrap());
            prop_assert_eq!(c.conjugate(&ca, Direction::Inverse).unwrap(), a.clone());
            prop_assert_eq!(c.inverse().conjugate(&ca, Direction::Forward).unwrap(), a);
        }
    }

    #[test]
    fn compiled_images_match_gate_by_gate(n in 1usize..=40, len in 0usize..60, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gates: Vec<_> = (0..len).map(|_| random_gate(n, &mut rng)).collect();
        let c = SymplecticCircuit::new(n, gates).unwrap();
        prop_assert!(is_symplectic_images(c.images(Direction::Forward)));
        prop_assert_eq!(invert_images(c.images(Direction::Forward)), c.images(Direction::Inverse).to_vec());
        for _ in 0..4 {
            let p = random_pauli(n, &mut rng);
            for dir in [Direction::Forward, Direction::Inverse] {
                prop_assert_eq!(c.conjugate(&p, dir).unwrap(), c.conjugate_by_gates(&p, dir).unwrap());
            }
        }
    }

    #[test]
    fn frame_accumulates_like_a_single_pull_back(family in 0usize..4, steps in 1usize..6, seed: u64) {
        let f = &families()[family];
        let n = f.total_qubits();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let key = f.sample_key(&mut rng);
        let mut frame = CiphertextFrame::with_random_otp(f, &key, &mut rng);
        let mut product = PauliOp::identity(n);
        for _ in 0..steps {
            // Sparse attacks so that accepted outcomes are not vanishingly rare.
            let mut a = PauliOp::identity(n);
            for _ in 0..rng.random_range(0..3) {
                a.set(rng.random_range(0..n), [Pauli1::X, Pauli1::Y, Pauli1::Z][rng.random_range(0..3)]);
            }
            frame.apply(&a).unwrap();
            product = product.mul(&a).unwrap();
        }
        let incremental = frame.decrypt();
        prop_assert_eq!(&incremental, &frame.decrypt_composed().unwrap());
        prop_assert_eq!(&product, frame.accumulated());
        prop_assert_eq!(incremental.verdict, f.verdict(&key, &product).unwrap());
    }

    #[test]
    fn pads_never_change_session_verdicts(family in 0usize..4, seed: u64, pad_a: u64, pad_b: u64) {
        let f = &families()[family];
        let key = f.sample_key(&mut ChaCha8Rng::seed_from_u64(seed));
        let strategies = [
            Strategy::RandomPauli { weight: 2, rounds: 4 },
            Strategy::SingleProbe { position: 0, basis: Pauli1::X, follow_up: 1 },
            Strategy::ProbeAllThenForge { bases: ProbeBases::Both, budget: Some(5) },
        ];
        for s in &strategies {
            let a = run_session(f, &key, s, seed, &mut ChaCha8Rng::seed_from_u64(pad_a)).unwrap();
            let b = run_session(f, &key, s, seed, &mut ChaCha8Rng::seed_from_u64(pad_b)).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn trap_verdicts_match_block_oracle(strong: bool, seed: u64) {
        let f = if strong { AuthFamily::strong_trap_rm(1).unwrap() } else { AuthFamily::trap_rm(1).unwrap() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let key = f.sample_key(&mut rng);
        for _ in 0..32 {
            let w = rng.random_range(1..=6);
            let x = rng.random_range(0..=w);
            let y = rng.random_range(0..=w - x);
            let attack = WeightClass::new(x, y, w - x - y).sample(21, &mut rng).unwrap();
            prop_assert_eq!(f.verdict(&key, &attack).unwrap(), block_oracle(&f, &key, &attack).0);
        }
    }

    #[test]
    fn pt_never_exceeds_spt(family in 0usize..4, x in 0usize..3, y in 0usize..3, z in 0usize..3, seed: u64) {
        let f = &families()[family];
        let class = WeightClass::new(x, y, z);
        prop_assume!(!class.is_identity() && class.total() <= f.total_qubits());
        let attack = class.sample(f.total_qubits(), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let counts = verdict_counts(f, std::slice::from_ref(&attack), 200, seed, 3).unwrap()[0];
        prop_assert_eq!(counts.trials, 200);
        prop_assert!(counts.undetected(Flavor::Pt, false) <= counts.undetected(Flavor::Spt, false));
        let pt = counts.estimate(Flavor::Pt, false, None);
        let spt = counts.estimate(Flavor::Spt, false, None);
        prop_assert!(pt.value <= spt.value && pt.ci.high <= spt.ci.high + 1e-12);
    }
}

/// Single-qubit probes reveal the block type: X is accepted only on a `|+⟩`
/// trap position, Z only on a `|0⟩` trap position.
#[test]
fn probes_characterise_block_types() {
    let f = AuthFamily::trap_rm(1).unwrap();
    let n = f.total_qubits();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for _ in 0..1000 {
        let key = f.sample_key(&mut rng);
        for q in 0..n {
            let block = f.block_type_at(&key, q).unwrap();
            for (basis, accepting) in [(Pauli1::X, BlockType::PlusTrap), (Pauli1::Z, BlockType::ZeroTrap)] {
                let probe = PauliOp::single(n, q, basis);
                let v = f.verdict(&key, &probe).unwrap();
                assert_eq!(v, block_oracle(&f, &key, &probe).0);
                assert_eq!(v == DetectionClass::AcceptedIdentity, block == accepting, "{basis:?} at {q} on {block:?}");
                assert_ne!(v, DetectionClass::AcceptedForged);
            }
        }
    }
}

/// With one code key reused across independently padded ciphertexts, the
/// strong trap's forging probability on the last one stays within a small
/// multiple of its single-ciphertext SPT estimate.
#[test]
fn strong_trap_reuse_stays_near_single_shot_bound() {
    let f = AuthFamily::strong_trap_rm(1).unwrap();
    let n_keys = 2000;
    let sweep = epsilon_sweep(
        &f,
        &SweepConfig {
            max_weight: 2,
            n_keys,
            seed: 9,
            ..SweepConfig::default()
        },
    )
    .unwrap();
    let spt_high = sweep.max_spt.unwrap().ci.high;
    let strategies = [
        Strategy::Identity { rounds: 2 },
        Strategy::SingleProbe { position: 3, basis: Pauli1::X, follow_up: 11 },
        Strategy::SingleProbe { position: 3, basis: Pauli1::Z, follow_up: 11 },
        Strategy::ProbeAllThenForge { bases: ProbeBases::Both, budget: None },
        Strategy::ProbeAllThenForge { bases: ProbeBases::XOnly, budget: None },
        Strategy::RandomPauli { weight: 2, rounds: 3 },
    ];
    for s in &strategies {
        let r = parallel_reuse(&f, s, n_keys, 10, 4).unwrap();
        let limit = 2.0 * spt_high + 3.0 * r.ci_forge_second.width();
        assert!(r.p_forge_second <= limit, "{s:?}: {} > {limit}", r.p_forge_second);
    }
}
