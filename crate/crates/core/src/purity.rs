//! Estimates of the probability that an attack slips past verification.
//!
//! Two notions of failure are tracked for a fixed attack `P`:
//!
//! * [`Flavor::Pt`]: `P` is accepted while acting non-trivially on the
//!   message (`ACCEPTED_FORGED`).
//! * [`Flavor::Spt`]: `P ≠ I` is accepted at all. A non-identity attack that
//!   is accepted as identity still counts.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::auth::{AuthFamily, FamilyDescriptor, FamilyKind};
use crate::error::{Error, Result};
use crate::stats::{clopper_pearson, item_rng, shard_ranges, streams, Interval, CONFIDENCE};
use crate::symplectic::{DetectionClass, Pauli1, PauliOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Flavor {
    Pt,
    Spt,
}

impl Flavor {
    pub const BOTH: [Flavor; 2] = [Flavor::Pt, Flavor::Spt];
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Pt => "PT",
            Flavor::Spt => "SPT",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EstimateMode {
    Exact,
    MonteCarlo,
}

/// Counts of the `(x, y, z)` single-qubit factors of a Pauli.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightClass {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl WeightClass {
    pub fn new(x: usize, y: usize, z: usize) -> Self {
        Self { x, y, z }
    }

    pub fn of(p: &PauliOp) -> Self {
        let w = p.weights();
        Self { x: w.x, y: w.y, z: w.z }
    }

    pub fn total(&self) -> usize {
        self.x + self.y + self.z
    }

    /// Weight of the X-type part, `x + y`.
    pub fn x_part(&self) -> usize {
        self.x + self.y
    }

    pub fn is_identity(&self) -> bool {
        self.total() == 0
    }

    /// Every non-identity class of total weight `1..=max_weight`.
    pub fn all_up_to(max_weight: usize) -> Vec<WeightClass> {
        let mut out = Vec::new();
        for w in 1..=max_weight {
            for x in (0..=w).rev() {
                for y in (0..=w - x).rev() {
                    out.push(WeightClass::new(x, y, w - x - y));
                }
            }
        }
        out
    }

    /// Number of `n`-qubit Paulis in the class.
    pub fn size(&self, n: usize) -> u128 {
        if self.total() > n {
            return 0;
        }
        let b = crate::codes::binomial_u128;
        b(n, self.x) * b(n - self.x, self.y) * b(n - self.x - self.y, self.z)
    }

    /// Uniformly random member on `n` qubits.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<PauliOp> {
        self.check_fits(n)?;
        let positions = index::sample(rng, n, self.total());
        let mut p = PauliOp::identity(n);
        for (i, q) in positions.iter().enumerate() {
            let f = if i < self.x {
                Pauli1::X
            } else if i < self.x + self.y {
                Pauli1::Y
            } else {
                Pauli1::Z
            };
            p.set(q, f);
        }
        Ok(p)
    }

    /// All members, in lexicographic order of support.
    pub fn enumerate(&self, n: usize) -> Result<Vec<PauliOp>> {
        self.check_fits(n)?;
        let mut out = Vec::with_capacity(self.size(n) as usize);
        let mut current = PauliOp::identity(n);
        self.fill(0, *self, &mut current, &mut out);
        Ok(out)
    }

    fn fill(&self, from: usize, left: WeightClass, current: &mut PauliOp, out: &mut Vec<PauliOp>) {
        if left.is_identity() {
            out.push(current.clone());
            return;
        }
        let n = current.n();
        if n - from < left.total() {
            return;
        }
        for q in from..n {
            for (f, rest) in [
                (Pauli1::X, left.x.checked_sub(1).map(|x| WeightClass { x, ..left })),
                (Pauli1::Y, left.y.checked_sub(1).map(|y| WeightClass { y, ..left })),
                (Pauli1::Z, left.z.checked_sub(1).map(|z| WeightClass { z, ..left })),
            ] {
                if let Some(rest) = rest {
                    current.set(q, f);
                    self.fill(q + 1, rest, current, out);
                    current.set(q, Pauli1::I);
                }
            }
        }
    }

    fn check_fits(&self, n: usize) -> Result<()> {
        if self.total() > n {
            return Err(Error::ParameterGuard(format!(
                "weight class {self} does not fit on {n} qubits"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for WeightClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

/// A concrete attack, or a uniformly random member of a weight class drawn
/// afresh for each key.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackSpec {
    Pauli(PauliOp),
    Class(WeightClass),
}

impl AttackSpec {
    pub fn is_identity(&self) -> bool {
        match self {
            AttackSpec::Pauli(p) => p.is_identity(),
            AttackSpec::Class(c) => c.is_identity(),
        }
    }
}

/// Tally of verdicts over sampled keys.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictCounts {
    pub trials: u64,
    pub rejected: u64,
    pub accepted_identity: u64,
    pub accepted_forged: u64,
}

impl VerdictCounts {
    pub fn record(&mut self, class: DetectionClass) {
        self.trials += 1;
        match class {
            DetectionClass::Rejected => self.rejected += 1,
            DetectionClass::AcceptedIdentity => self.accepted_identity += 1,
            DetectionClass::AcceptedForged => self.accepted_forged += 1,
        }
    }

    pub fn merge(&mut self, other: &VerdictCounts) {
        self.trials += other.trials;
        self.rejected += other.rejected;
        self.accepted_identity += other.accepted_identity;
        self.accepted_forged += other.accepted_forged;
    }

    pub fn undetected(&self, flavor: Flavor, identity_attack: bool) -> u64 {
        match flavor {
            Flavor::Pt => self.accepted_forged,
            Flavor::Spt if identity_attack => self.accepted_forged,
            Flavor::Spt => self.accepted_forged + self.accepted_identity,
        }
    }

    pub fn estimate(&self, flavor: Flavor, identity_attack: bool, bound: Option<Bound>) -> EpsilonEstimate {
        let k = self.undetected(flavor, identity_attack);
        EpsilonEstimate {
            flavor,
            value: if self.trials == 0 { 0.0 } else { k as f64 / self.trials as f64 },
            ci: clopper_pearson(k, self.trials, CONFIDENCE),
            n_samples: self.trials,
            successes: k,
            mode: EstimateMode::MonteCarlo,
            bound,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub formula: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonEstimate {
    pub flavor: Flavor,
    pub value: f64,
    pub ci: Interval,
    pub n_samples: u64,
    pub successes: u64,
    pub mode: EstimateMode,
    pub bound: Option<Bound>,
}

impl EpsilonEstimate {
    fn exact(flavor: Flavor, value: &BigRational, bound: Option<Bound>) -> Self {
        let v = value.to_f64().unwrap_or(f64::NAN);
        Self {
            flavor,
            value: v,
            ci: Interval { low: v, high: v },
            n_samples: 0,
            successes: 0,
            mode: EstimateMode::Exact,
            bound,
        }
    }
}

/// Analytic security parameter of the family for the given flavor, if it
/// has one.
pub fn family_bound(f: &AuthFamily, flavor: Flavor) -> Option<Bound> {
    match (f.kind(), flavor) {
        (FamilyKind::Trap, Flavor::Spt) => None,
        (FamilyKind::Trap | FamilyKind::StrongTrap, _) => {
            let d = f.inner()?.distance() as f64;
            Some(Bound {
                formula: "(2/3)^(d/2)".into(),
                value: (2.0f64 / 3.0).powf(d / 2.0),
            })
        }
        (FamilyKind::Clifford, _) => Some(Bound {
            formula: "2^-t".into(),
            value: 2f64.powi(-(f.t() as i32)),
        }),
    }
}

pub fn default_shards() -> usize {
    4 * rayon::current_num_threads()
}

/// Verdict counts for several attacks, each judged under the same keys.
///
/// Key `i` is drawn from its own generator derived from `(seed, i)`, so the
/// result is independent of `shards`.
pub fn verdict_counts(
    f: &AuthFamily,
    attacks: &[PauliOp],
    n_keys: u64,
    seed: u64,
    shards: usize,
) -> Result<Vec<VerdictCounts>> {
    for a in attacks {
        if a.n() != f.total_qubits() {
            return Err(Error::DimensionMismatch {
                expected: f.total_qubits(),
                found: a.n(),
            });
        }
    }
    let empty = vec![VerdictCounts::default(); attacks.len()];
    Ok(shard_ranges(n_keys, shards)
        .into_par_iter()
        .map(|range| {
            let mut local = empty.clone();
            for i in range {
                let key = f.sample_key(&mut item_rng(seed, streams::KEYS, i));
                for (c, a) in local.iter_mut().zip(attacks) {
                    c.record(f.verdict_unchecked(&key, a));
                }
            }
            local
        })
        .reduce(
            || empty.clone(),
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(&b) {
                    x.merge(y);
                }
                a
            },
        ))
}

fn class_counts(f: &AuthFamily, class: WeightClass, n_keys: u64, seed: u64, shards: usize) -> Result<VerdictCounts> {
    class.check_fits(f.total_qubits())?;
    let n = f.total_qubits();
    Ok(shard_ranges(n_keys, shards)
        .into_par_iter()
        .map(|range| {
            let mut local = VerdictCounts::default();
            for i in range {
                let key = f.sample_key(&mut item_rng(seed, streams::KEYS, i));
                let attack = class
                    .sample(n, &mut item_rng(seed, streams::ATTACKS, i))
                    .expect("class fits");
                local.record(f.verdict_unchecked(&key, &attack));
            }
            local
        })
        .reduce(VerdictCounts::default, |mut a, b| {
            a.merge(&b);
            a
        }))
}

/// Monte Carlo estimate of the undetected probability over `n_keys` keys.
pub fn undetected_prob(
    f: &AuthFamily,
    attack: &AttackSpec,
    flavor: Flavor,
    n_keys: u64,
    seed: u64,
) -> Result<EpsilonEstimate> {
    let counts = match attack {
        AttackSpec::Pauli(p) => verdict_counts(f, std::slice::from_ref(p), n_keys, seed, default_shards())?[0],
        AttackSpec::Class(c) => class_counts(f, *c, n_keys, seed, default_shards())?,
    };
    Ok(counts.estimate(flavor, attack.is_identity(), family_bound(f, flavor)))
}

/// Exact undetected probabilities `(PT, SPT)` for a trap-kind family.
///
/// Only available when the attack's total weight is below both the code
/// distance and the minimum stabiliser weight, where the verdict depends on
/// nothing but which block each attacked position falls into.
pub fn exact_undetected_prob_trap_ratio(f: &AuthFamily, attack: &PauliOp) -> Result<(BigRational, BigRational)> {
    let code = match (f.kind(), f.inner()) {
        (FamilyKind::Trap | FamilyKind::StrongTrap, Some(code)) => code,
        _ => {
            return Err(Error::KindMismatch {
                family: f.kind().to_string(),
                key: "exact trap calculator".into(),
            })
        }
    };
    if attack.n() != f.total_qubits() {
        return Err(Error::DimensionMismatch {
            expected: f.total_qubits(),
            found: attack.n(),
        });
    }
    let class = WeightClass::of(attack);
    let threshold = code.benign_distance().map_or(code.distance(), |b| b.min(code.distance()));
    if class.total() >= threshold {
        return Err(Error::NotWeightDetermined {
            weight: class.total(),
            distance: threshold,
        });
    }
    let zero = BigRational::zero();
    if class.is_identity() {
        return Ok((zero.clone(), zero));
    }
    // Any nonzero piece on an encoded block is detected, so only attacks
    // living purely on the trap blocks survive, and those leave the message
    // alone.
    let spt = match f.kind() {
        FamilyKind::Trap if class.y == 0 => {
            let n = code.n();
            let num = falling(n, class.x) * falling(n, class.z);
            let den = falling(3 * n, class.x + class.z);
            BigRational::new(num.into(), den.into())
        }
        _ => zero.clone(),
    };
    Ok((zero, spt))
}

pub fn exact_undetected_prob_trap(f: &AuthFamily, attack: &PauliOp, flavor: Flavor) -> Result<EpsilonEstimate> {
    let (pt, spt) = exact_undetected_prob_trap_ratio(f, attack)?;
    let value = match flavor {
        Flavor::Pt => pt,
        Flavor::Spt => spt,
    };
    Ok(EpsilonEstimate::exact(flavor, &value, family_bound(f, flavor)))
}

/// Exact SPT of the uniform Clifford code against any non-identity Pauli:
/// `(4^m 2^t - 1) / (4^(m+t) - 1)`.
pub fn exact_clifford_spt(m: usize, t: usize) -> BigRational {
    let one = BigUint::one();
    let num = (BigUint::one() << (2 * m + t)) - &one;
    let den = (BigUint::one() << (2 * (m + t))) - &one;
    BigRational::new(num.into(), den.into())
}

/// Exact PT of the uniform Clifford code: `(4^m - 1) 2^t / (4^(m+t) - 1)`.
pub fn exact_clifford_pt(m: usize, t: usize) -> BigRational {
    let one = BigUint::one();
    let num = ((BigUint::one() << (2 * m)) - &one) << t;
    let den = (BigUint::one() << (2 * (m + t))) - &one;
    BigRational::new(num.into(), den.into())
}

fn falling(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n.saturating_sub(i)))
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    falling(n, k) / falling(k, k)
}

/// `binom(2n, w) / binom(3n, w)`: the chance that `w` positions of the X-type
/// part all avoid one fixed block of a random permutation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockBound {
    pub n: usize,
    pub w: usize,
    pub numerator: String,
    pub denominator: String,
    pub value: f64,
    pub two_thirds_power: f64,
    /// Strictly below `(2/3)^w`; `None` at `w = 0`, where both sides are 1.
    /// At `w = 1` the two sides are equal.
    pub strictly_below: Option<bool>,
}

pub fn trap_block_bound(n: usize, w: usize) -> Result<BlockBound> {
    if n == 0 || w > 3 * n {
        return Err(Error::ParameterGuard(format!("block bound needs n > 0 and w <= 3n, got n={n}, w={w}")));
    }
    let ratio = BigRational::new(binomial(2 * n, w).into(), binomial(3 * n, w).into());
    let cap = BigRational::new(BigUint::from(2u32).pow(w as u32).into(), BigUint::from(3u32).pow(w as u32).into());
    Ok(BlockBound {
        n,
        w,
        numerator: ratio.numer().to_string(),
        denominator: ratio.denom().to_string(),
        value: ratio.to_f64().unwrap_or(f64::NAN),
        two_thirds_power: cap.to_f64().unwrap_or(f64::NAN),
        strictly_below: (w > 0).then(|| ratio < cap),
    })
}

pub fn trap_block_bound_ratio(n: usize, w: usize) -> BigRational {
    BigRational::new(binomial(2 * n, w).into(), binomial(3 * n, w).into())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepConfig {
    pub max_weight: usize,
    /// Classes up to this weight are enumerated in full.
    pub exhaustive_weight: usize,
    pub representatives: usize,
    pub n_keys: u64,
    pub seed: u64,
    pub shards: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            max_weight: 6,
            exhaustive_weight: 2,
            representatives: 16,
            n_keys: 10_000,
            seed: 0,
            shards: default_shards(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassResult {
    pub class: WeightClass,
    pub exhaustive: bool,
    pub n_attacks: usize,
    /// Worst member of the class per flavor.
    pub pt: EpsilonEstimate,
    pub spt: EpsilonEstimate,
    pub worst_pt_attack: PauliOp,
    pub worst_spt_attack: PauliOp,
    /// Exact values, where the class is weight-determined.
    pub exact_pt: Option<f64>,
    pub exact_spt: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepReport {
    pub family: FamilyDescriptor,
    pub config: SweepConfig,
    pub classes: Vec<ClassResult>,
    pub max_pt: Option<EpsilonEstimate>,
    pub max_spt: Option<EpsilonEstimate>,
}

impl SweepReport {
    /// One row per (class, flavor).
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidConfig(format!("csv: {e}"));
        w.write_record(["family", "class", "flavor", "estimate", "ci_low", "ci_high", "bound", "n_keys", "seed"])
            .map_err(io)?;
        let family = self.family.kind.to_string();
        for c in &self.classes {
            for e in [&c.pt, &c.spt] {
                w.write_record([
                    family.clone(),
                    c.class.to_string(),
                    e.flavor.to_string(),
                    e.value.to_string(),
                    e.ci.low.to_string(),
                    e.ci.high.to_string(),
                    e.bound.as_ref().map(|b| b.value.to_string()).unwrap_or_default(),
                    self.config.n_keys.to_string(),
                    self.config.seed.to_string(),
                ])
                .map_err(io)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidConfig(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

fn worst(estimates: impl Iterator<Item = EpsilonEstimate>) -> Option<(usize, EpsilonEstimate)> {
    estimates
        .enumerate()
        .fold(None, |best: Option<(usize, EpsilonEstimate)>, (i, e)| match best {
            Some((_, ref b)) if b.value >= e.value => best,
            _ => Some((i, e)),
        })
}

/// Worst-case PT and SPT estimates over every weight class up to
/// `config.max_weight`.
///
/// Low-weight classes are enumerated exhaustively; heavier ones are
/// represented by `config.representatives` random members. Every attack in
/// a class is judged under the same sampled keys.
pub fn epsilon_sweep(f: &AuthFamily, config: &SweepConfig) -> Result<SweepReport> {
    let n = f.total_qubits();
    let classes: Vec<WeightClass> = WeightClass::all_up_to(config.max_weight)
        .into_iter()
        .filter(|c| c.total() <= n)
        .collect();
    let mut results = Vec::with_capacity(classes.len());
    for (ci, class) in classes.iter().enumerate() {
        let exhaustive = class.total() <= config.exhaustive_weight;
        let attacks = if exhaustive {
            class.enumerate(n)?
        } else {
            let mut rng = item_rng(config.seed, streams::REPRESENTATIVES, ci as u64);
            (0..config.representatives)
                .map(|_| class.sample(n, &mut rng))
                .collect::<Result<Vec<_>>>()?
        };
        let counts = verdict_counts(f, &attacks, config.n_keys, config.seed, config.shards)?;
        let per = |flavor| {
            worst(counts.iter().map(|c| c.estimate(flavor, false, family_bound(f, flavor)))).expect("class is nonempty")
        };
        let (pi, pt) = per(Flavor::Pt);
        let (si, spt) = per(Flavor::Spt);
        let exact = if f.is_trap_kind() {
            exact_undetected_prob_trap_ratio(f, &attacks[0]).ok()
        } else {
            None
        };
        results.push(ClassResult {
            class: *class,
            exhaustive,
            n_attacks: attacks.len(),
            worst_pt_attack: attacks[pi].clone(),
            worst_spt_attack: attacks[si].clone(),
            pt,
            spt,
            exact_pt: exact.as_ref().and_then(|e| e.0.to_f64()),
            exact_spt: exact.as_ref().and_then(|e| e.1.to_f64()),
        });
    }
    let max_pt = worst(results.iter().map(|r| r.pt.clone())).map(|x| x.1);
    let max_spt = worst(results.iter().map(|r| r.spt.clone())).map(|x| x.1);
    Ok(SweepReport {
        family: f.descriptor(),
        config: config.clone(),
        classes: results,
        max_pt,
        max_spt,
    })
}
