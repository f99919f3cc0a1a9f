//! Fast deterministic invariant checks behind `qauth selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::auth::{random_pauli, AuthFamily, BlockType};
use crate::clifford::random_clifford;
use crate::codes::{rm_css, sparsity_report, CssCode, LinearCode};
use crate::gf2::BitVec;
use crate::purity::{verdict_counts, WeightClass};
use crate::symplectic::{DetectionClass, Direction, Gate, Pauli1, PauliOp, SymplecticCircuit};

const SEED: u64 = 0x5eed;

/// Inner-code fixture: a `C1` generator matrix and its expected parameters.
/// The `build-code` descriptor of a family member has this shape.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeFixture {
    pub n: usize,
    pub generator_rows_hex: Vec<String>,
    pub d: usize,
    pub benign_d: Option<usize>,
}

impl CodeFixture {
    pub fn steane() -> Self {
        let d = rm_css(1).expect("i = 1 member").descriptor(Some(1));
        Self {
            n: d.n,
            generator_rows_hex: d.generator_rows_hex,
            d: d.d,
            benign_d: d.benign_d,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: bool,
    pub failures: Vec<&'static str>,
    pub checks: Vec<Check>,
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pauli_roundtrip() -> Outcome {
    let p: PauliOp = "XYZIX".parse().map_err(|e| format!("{e}"))?;
    let json = serde_json::to_string(&p).map_err(|e| e.to_string())?;
    ensure(json == r#"{"n":5,"x":"13","z":"06"}"#, || format!("XYZIX serialised as {json}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for n in [1, 7, 63, 64, 65, 130] {
        let p = random_pauli(n, &mut rng);
        let back: PauliOp = serde_json::from_str(&serde_json::to_string(&p).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure(back == p, || format!("JSON round trip changed a {n}-qubit Pauli"))?;
        let text = p.to_string();
        ensure(text.parse::<PauliOp>().ok() == Some(p), || format!("string round trip failed for {text}"))?;
    }
    Ok("string, hex and JSON forms agree".into())
}

fn gate_actions() -> Outcome {
    let conj = |n: usize, g: Gate, p: &str| -> Result<String, String> {
        let c = SymplecticCircuit::new(n, vec![g]).map_err(|e| e.to_string())?;
        let p: PauliOp = p.parse().map_err(|e| format!("{e}"))?;
        Ok(c.conjugate(&p, Direction::Forward).map_err(|e| e.to_string())?.to_string())
    };
    for (n, g, input, want) in [
        (1, Gate::H(0), "X", "Z"),
        (1, Gate::H(0), "Z", "X"),
        (1, Gate::S(0), "X", "Y"),
        (1, Gate::S(0), "Z", "Z"),
        (2, Gate::Cnot { control: 0, target: 1 }, "XI", "XX"),
        (2, Gate::Cnot { control: 0, target: 1 }, "IZ", "ZZ"),
        (2, Gate::Cnot { control: 0, target: 1 }, "ZI", "ZI"),
    ] {
        let got = conj(n, g.clone(), input)?;
        ensure(got == want, || format!("{g:?} maps {input} to {got}, expected {want}"))?;
    }
    Ok("H, S and CNOT act as expected on the Pauli basis".into())
}

fn commutation_preserved() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut pairs = 0;
    for n in 1..=6 {
        for _ in 0..20 {
            let c = random_clifford(n, &mut rng);
            let inv = c.inverse();
            for _ in 0..10 {
                let (a, b) = (random_pauli(n, &mut rng), random_pauli(n, &mut rng));
                let (ca, cb) = (
                    c.conjugate(&a, Direction::Forward).expect("width"),
                    c.conjugate(&b, Direction::Forward).expect("width"),
                );
                ensure(a.sip(&b).ok() == ca.sip(&cb).ok(), || format!("commutation changed on {n} qubits"))?;
                ensure(inv.conjugate(&ca, Direction::Forward).ok() == Some(a.clone()), || {
                    format!("inverse does not undo a {n}-qubit Clifford")
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} random pairs keep their commutation and round-trip"))
}

fn all_paulis(n: usize) -> impl Iterator<Item = PauliOp> {
    (0u64..1 << (2 * n)).map(move |v| {
        PauliOp::from_parts(BitVec::from_u64(n, v & ((1 << n) - 1)), BitVec::from_u64(n, v >> n)).expect("width")
    })
}

/// Averaging `Q P Q†` over all Paulis `Q` kills every `P ≠ I`: the signs
/// `(-1)^⟨P,Q⟩` sum to `4^n` for the identity and to zero otherwise.
fn twirl_identity() -> Outcome {
    for n in 1..=3 {
        for p in all_paulis(n) {
            let sum: i64 = all_paulis(n).map(|q| if p.sip(&q).expect("width") { -1 } else { 1 }).sum();
            let want = if p.is_identity() { 1i64 << (2 * n) } else { 0 };
            ensure(sum == want, || format!("sign sum {sum} for {p}, expected {want}"))?;
        }
    }
    Ok("exhaustive for n = 1, 2, 3".into())
}

fn inner_code(fixture: &CodeFixture) -> Outcome {
    let rows = fixture
        .generator_rows_hex
        .iter()
        .map(|h| BitVec::from_hex(fixture.n, h))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| format!("fixture row: {e}"))?;
    let c1 = LinearCode::from_rows(fixture.n, &rows).map_err(|e| e.to_string())?;
    let css = CssCode::new(c1.clone(), c1.dual()).map_err(|e| format!("fixture code: {e}"))?;
    ensure(css.distance() == fixture.d, || format!("distance {} != {}", css.distance(), fixture.d))?;
    ensure(css.benign_distance() == fixture.benign_d, || {
        format!("benign distance {:?} != {:?}", css.benign_distance(), fixture.benign_d)
    })?;
    let sparsity = sparsity_report(&css).map_err(|e| e.to_string())?;
    Ok(format!(
        "[[{}, {}, {}]], benign distance {}, f_X = {}",
        css.n(),
        css.m(),
        css.distance(),
        css.benign_distance().map_or("none".into(), |b| b.to_string()),
        sparsity.f_x
    ))
}

fn probe_characterization() -> Outcome {
    let f = AuthFamily::trap_rm(1).map_err(|e| e.to_string())?;
    let n = f.total_qubits();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    for _ in 0..100 {
        let k = f.sample_key(&mut rng);
        for q in 0..n {
            let block = f.block_type_at(&k, q).expect("trap kind");
            let x = f.verdict(&k, &PauliOp::single(n, q, Pauli1::X)).map_err(|e| e.to_string())?;
            let z = f.verdict(&k, &PauliOp::single(n, q, Pauli1::Z)).map_err(|e| e.to_string())?;
            ensure((x == DetectionClass::AcceptedIdentity) == (block == BlockType::PlusTrap), || {
                format!("X probe at {q} gave {x:?} on a {block:?} position")
            })?;
            ensure((z == DetectionClass::AcceptedIdentity) == (block == BlockType::ZeroTrap), || {
                format!("Z probe at {q} gave {z:?} on a {block:?} position")
            })?;
        }
    }
    Ok("100 trap keys, every position, both bases".into())
}

fn shard_independence() -> Outcome {
    let f = AuthFamily::clifford(1, 3).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let attacks: Vec<PauliOp> = (0..4)
        .map(|_| WeightClass::new(1, 1, 0).sample(4, &mut rng).expect("fits"))
        .collect();
    let seed = rng.random();
    let one = verdict_counts(&f, &attacks, 500, seed, 1).map_err(|e| e.to_string())?;
    let many = verdict_counts(&f, &attacks, 500, seed, 7).map_err(|e| e.to_string())?;
    ensure(one == many, || "shard count changed the verdict counts".into())?;
    Ok("1 and 7 shards agree".into())
}

/// Runs every check. Output depends only on the fixture.
pub fn run(fixture: Option<&CodeFixture>) -> Summary {
    let steane = CodeFixture::steane();
    let fixture = fixture.unwrap_or(&steane);
    let results: Vec<(&'static str, Outcome)> = vec![
        ("pauli-roundtrip", pauli_roundtrip()),
        ("gate-actions", gate_actions()),
        ("commutation-preserved", commutation_preserved()),
        ("twirl-identity", twirl_identity()),
        ("inner-code-golden", inner_code(fixture)),
        ("trap-probe-characterization", probe_characterization()),
        ("shard-independence", shard_independence()),
    ];
    let checks: Vec<Check> = results
        .into_iter()
        .map(|(name, r)| match r {
            Ok(detail) => Check { name, passed: true, detail },
            Err(detail) => Check { name, passed: false, detail },
        })
        .collect();
    let failures: Vec<&'static str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    Summary {
        passed: failures.is_empty(),
        failures,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_build_passes_and_is_deterministic() {
        let a = run(None);
        assert!(a.passed, "{a:#?}");
        assert_eq!(a, run(None));
    }

    #[test]
    fn corrupted_fixture_is_named() {
        let mut fx = CodeFixture::steane();
        // Flip one bit of the first generator row.
        let mut row = BitVec::from_hex(fx.n, &fx.generator_rows_hex[0]).unwrap();
        row.flip(fx.n - 1);
        fx.generator_rows_hex[0] = row.to_hex();
        let s = run(Some(&fx));
        assert_eq!(s.failures, vec!["inner-code-golden"]);
    }
}
