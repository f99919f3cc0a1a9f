//! Encode-then-encrypt sessions against Pauli adversaries.
//!
//! A ciphertext is tracked as a Pauli frame: the one-time pad, the product
//! of every attack applied to it, and that product pulled back through the
//! code key. Verdicts and logical corruption are read off the frame, so no
//! quantum state is ever simulated. Strategies are classical: each round's
//! attack is a deterministic function of the accept/reject history seen so
//! far and a strategy seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::auth::{random_pauli, AuthFamily, BlockType, FamilyDescriptor, Key};
use crate::error::{Error, Result};
use crate::purity::WeightClass;
use crate::stats::{clopper_pearson, derive_seed, item_rng, shard_ranges, streams, total_variation, Interval, CONFIDENCE};
use crate::symplectic::{DetectionClass, Pauli1, PauliOp};

/// Outcome of decrypting one ciphertext.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decryption {
    pub verdict: DetectionClass,
    /// Logical Pauli on the message register; `None` is the reject flag.
    pub logical: Option<PauliOp>,
}

impl Decryption {
    pub fn accepted(&self) -> bool {
        self.verdict.accepted()
    }
}

/// Pauli frame of one ciphertext under a fixed code key.
#[derive(Clone, Debug)]
pub struct CiphertextFrame<'a> {
    family: &'a AuthFamily,
    key: &'a Key,
    otp: PauliOp,
    accumulated: PauliOp,
    pulled: PauliOp,
}

impl<'a> CiphertextFrame<'a> {
    pub fn new(family: &'a AuthFamily, key: &'a Key, otp: PauliOp) -> Result<Self> {
        let n = family.total_qubits();
        if otp.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: otp.n() });
        }
        Ok(Self {
            family,
            key,
            otp,
            accumulated: PauliOp::identity(n),
            pulled: PauliOp::identity(n),
        })
    }

    pub fn with_random_otp<R: Rng + ?Sized>(family: &'a AuthFamily, key: &'a Key, rng: &mut R) -> Self {
        let otp = random_pauli(family.total_qubits(), rng);
        Self::new(family, key, otp).expect("pad has the family width")
    }

    pub fn otp(&self) -> &PauliOp {
        &self.otp
    }

    pub fn accumulated(&self) -> &PauliOp {
        &self.accumulated
    }

    /// Applies one more adversarial Pauli to the ciphertext.
    pub fn apply(&mut self, attack: &PauliOp) -> Result<()> {
        let pulled = self.family.pull_back(self.key, attack)?;
        self.accumulated.mul_assign_unchecked(attack);
        self.pulled.mul_assign_unchecked(&pulled);
        Ok(())
    }

    /// Strips the pad, inverts the encoder and checks the tags.
    pub fn decrypt(&self) -> Decryption {
        // The pad commutes with the attack up to a sign, which the frame drops.
        let layout = self.family.layout();
        let verdict = layout.classify_unchecked(&self.pulled);
        let logical = verdict.accepted().then(|| self.pulled.restrict(layout.message_positions()));
        Decryption { verdict, logical }
    }

    /// Decrypts by pulling the composed attack back in one step, as a check
    /// on the incremental frame.
    pub fn decrypt_composed(&self) -> Result<Decryption> {
        let (effective, _sign) = self.accumulated.conjugated_by_pauli(&self.otp)?;
        let pulled = self.family.pull_back(self.key, &effective)?;
        let layout = self.family.layout();
        let verdict = layout.classify_unchecked(&pulled);
        let logical = verdict.accepted().then(|| pulled.restrict(layout.message_positions()));
        Ok(Decryption { verdict, logical })
    }
}

fn rate(k: u64, n: u64) -> f64 {
    if n == 0 {
        0.0
    } else {
        k as f64 / n as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingleStats {
    pub family: FamilyDescriptor,
    pub attack: PauliOp,
    pub n_trials: u64,
    pub seed: u64,
    pub p_reject: f64,
    pub p_accept_identity: f64,
    pub p_accept_forged: f64,
    pub ci_reject: Interval,
    pub ci_accept_identity: Interval,
    pub ci_accept_forged: Interval,
}

/// Verdict frequencies for one attack, with a fresh code key and pad per trial.
pub fn run_single(f: &AuthFamily, attack: &PauliOp, n_trials: u64, seed: u64, shards: usize) -> Result<SingleStats> {
    if attack.n() != f.total_qubits() {
        return Err(Error::DimensionMismatch {
            expected: f.total_qubits(),
            found: attack.n(),
        });
    }
    let counts = shard_ranges(n_trials, shards)
        .into_par_iter()
        .map(|range| {
            let mut c = [0u64; 3];
            for i in range {
                let key = f.sample_key(&mut item_rng(seed, streams::KEYS, i));
                let mut frame = CiphertextFrame::with_random_otp(f, &key, &mut item_rng(seed, streams::OTP, i));
                frame.apply(attack).expect("dimension checked");
                c[frame.decrypt().verdict as usize] += 1;
            }
            c
        })
        .reduce(|| [0; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
    let [rej, ident, forged] = [
        counts[DetectionClass::Rejected as usize],
        counts[DetectionClass::AcceptedIdentity as usize],
        counts[DetectionClass::AcceptedForged as usize],
    ];
    Ok(SingleStats {
        family: f.descriptor(),
        attack: attack.clone(),
        n_trials,
        seed,
        p_reject: rate(rej, n_trials),
        p_accept_identity: rate(ident, n_trials),
        p_accept_forged: rate(forged, n_trials),
        ci_reject: clopper_pearson(rej, n_trials, CONFIDENCE),
        ci_accept_identity: clopper_pearson(ident, n_trials, CONFIDENCE),
        ci_accept_forged: clopper_pearson(forged, n_trials, CONFIDENCE),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Accept,
    Reject,
}

impl Condition {
    fn holds(self, verdict: DetectionClass) -> bool {
        match self {
            Condition::Accept => verdict.accepted(),
            Condition::Reject => !verdict.accepted(),
        }
    }
}

/// Key statistic whose posterior is reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeyStatistic {
    /// Block type of the input landing on a physical position.
    BlockType { position: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeakageReport {
    pub family: FamilyDescriptor,
    pub attack: PauliOp,
    pub condition: Condition,
    pub statistic: KeyStatistic,
    pub n_keys: u64,
    pub seed: u64,
    pub events: u64,
    /// Labels of the posterior entries, in order.
    pub labels: Vec<BlockType>,
    pub prior: Vec<f64>,
    pub posterior: Vec<f64>,
    pub tv_distance: f64,
    /// Exact posterior and distance, when the attack is a single-qubit
    /// Pauli on the position being asked about.
    pub exact_posterior: Option<Vec<f64>>,
    pub exact_tv_distance: Option<f64>,
}

/// Exact `Pr[condition | block type]` for a weight-one attack at `position`,
/// by trying every input position that could land there.
fn exact_block_likelihoods(f: &AuthFamily, attack: &PauliOp, position: usize, condition: Condition) -> Vec<f64> {
    let n = f.total_qubits();
    let mut hits = [0u64; 3];
    let mut sizes = [0u64; 3];
    for input in 0..n {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(input, position);
        let key = Key::from_permutation(perm).expect("transposition");
        let b = f.input_block(input).expect("trap kind").index();
        sizes[b] += 1;
        if condition.holds(f.verdict_unchecked(&key, attack)) {
            hits[b] += 1;
        }
    }
    (0..3).map(|b| hits[b] as f64 / sizes[b] as f64).collect()
}

/// Posterior of a key statistic among the keys that produce `condition`.
pub fn key_posterior(
    f: &AuthFamily,
    attack: &PauliOp,
    condition: Condition,
    statistic: KeyStatistic,
    n_keys: u64,
    seed: u64,
    shards: usize,
) -> Result<LeakageReport> {
    let n = f.total_qubits();
    if attack.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: attack.n() });
    }
    let KeyStatistic::BlockType { position } = statistic;
    if !f.is_trap_kind() {
        return Err(Error::InvalidConfig("block-type statistics need a trap-kind family".into()));
    }
    if position >= n {
        return Err(Error::InvalidConfig(format!("position {position} outside {n} qubits")));
    }
    let hist = shard_ranges(n_keys, shards)
        .into_par_iter()
        .map(|range| {
            let mut h = [0u64; 3];
            for i in range {
                let key = f.sample_key(&mut item_rng(seed, streams::KEYS, i));
                if condition.holds(f.verdict_unchecked(&key, attack)) {
                    h[f.block_type_at(&key, position).expect("trap kind").index()] += 1;
                }
            }
            h
        })
        .reduce(|| [0; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
    let events: u64 = hist.iter().sum();
    if events == 0 {
        return Err(Error::NoEvent { trials: n_keys as usize });
    }
    let prior = vec![1.0 / 3.0; 3];
    let posterior: Vec<f64> = hist.iter().map(|&h| h as f64 / events as f64).collect();
    let support = attack.support();
    let exact = (support.weight() == 1 && support.get(position)).then(|| {
        let like = exact_block_likelihoods(f, attack, position, condition);
        let z: f64 = like.iter().zip(&prior).map(|(l, p)| l * p).sum();
        like.iter().zip(&prior).map(|(l, p)| l * p / z).collect::<Vec<f64>>()
    });
    Ok(LeakageReport {
        family: f.descriptor(),
        attack: attack.clone(),
        condition,
        statistic,
        n_keys,
        seed,
        events,
        labels: BlockType::ALL.to_vec(),
        tv_distance: total_variation(&prior, &posterior),
        exact_tv_distance: exact.as_ref().map(|e| total_variation(&prior, e)),
        exact_posterior: exact,
        prior,
        posterior,
    })
}

/// Which single-qubit probes the adversary sends.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeBases {
    #[default]
    Both,
    XOnly,
}

/// One scripted round: the attack depends on whether the previous
/// ciphertext was accepted. The first round uses `if_accepted`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptStep {
    pub if_accepted: PauliOp,
    pub if_rejected: PauliOp,
}

/// Adversary against a sequence of ciphertexts sharing one code key.
///
/// Round `r` attacks ciphertext `r`; its verdict is revealed before round
/// `r + 1`. The last ciphertext is the target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strategy {
    Identity {
        rounds: usize,
    },
    /// Probe `position` with `basis`; then attack `follow_up`, keeping the
    /// probe position too if the probe went unnoticed.
    SingleProbe {
        position: usize,
        basis: Pauli1,
        follow_up: usize,
    },
    /// Single-qubit probes at positions `0..budget`, then X on every
    /// position inferred to be data or a `|+⟩` trap.
    ProbeAllThenForge {
        bases: ProbeBases,
        budget: Option<usize>,
    },
    RandomPauli {
        weight: usize,
        rounds: usize,
    },
    Custom {
        steps: Vec<ScriptStep>,
    },
}

impl Strategy {
    pub fn rounds(&self, n: usize) -> usize {
        match self {
            Strategy::Identity { rounds } | Strategy::RandomPauli { rounds, .. } => *rounds,
            Strategy::SingleProbe { .. } => 2,
            Strategy::ProbeAllThenForge { bases, budget } => {
                let b = budget.unwrap_or(n).min(n);
                let per = if *bases == ProbeBases::Both { 2 } else { 1 };
                per * b + 1
            }
            Strategy::Custom { steps } => steps.len(),
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        match self {
            Strategy::Identity { rounds } | Strategy::RandomPauli { rounds, .. } if *rounds == 0 => {
                bad("strategy needs at least one round".into())
            }
            Strategy::RandomPauli { weight, .. } if *weight > n => bad(format!("weight {weight} exceeds {n} qubits")),
            Strategy::SingleProbe { position, follow_up, .. } if *position >= n || *follow_up >= n => {
                bad(format!("probe positions must be below {n}"))
            }
            Strategy::SingleProbe { basis: Pauli1::I, .. } => bad("probe basis must be X, Y or Z".into()),
            Strategy::ProbeAllThenForge { budget: Some(0), .. } => bad("probe budget must be positive".into()),
            Strategy::Custom { steps } if steps.is_empty() => bad("script has no steps".into()),
            Strategy::Custom { steps } if steps.iter().any(|s| s.if_accepted.n() != n || s.if_rejected.n() != n) => {
                bad(format!("script Paulis must act on {n} qubits"))
            }
            _ => Ok(()),
        }
    }

    /// Attack for `round`, given the verdicts of earlier rounds.
    pub fn attack(&self, round: usize, history: &[bool], n: usize, strategy_seed: u64) -> PauliOp {
        debug_assert_eq!(history.len(), round);
        match self {
            Strategy::Identity { .. } => PauliOp::identity(n),
            Strategy::SingleProbe {
                position,
                basis,
                follow_up,
            } => {
                let mut p = PauliOp::identity(n);
                if round == 0 {
                    p.set(*position, *basis);
                } else {
                    if history[0] {
                        p.set(*position, *basis);
                    }
                    p.set(*follow_up, *basis);
                }
                p
            }
            Strategy::ProbeAllThenForge { bases, budget } => {
                let b = budget.unwrap_or(n).min(n);
                match probe_at(round, b, *bases) {
                    Some((q, basis)) => PauliOp::single(n, q, basis),
                    None => forgery(&infer_blocks(history, n, b, *bases), *bases),
                }
            }
            Strategy::RandomPauli { weight, .. } => {
                let hist = history.iter().enumerate().fold(0u64, |acc, (i, &a)| acc | (u64::from(a) << (i % 64)));
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(strategy_seed, round as u64, hist));
                let x = rng.random_range(0..=*weight);
                let y = rng.random_range(0..=*weight - x);
                WeightClass::new(x, y, weight - x - y)
                    .sample(n, &mut rng)
                    .expect("weight validated")
            }
            Strategy::Custom { steps } => {
                let s = &steps[round];
                if round == 0 || history[round - 1] {
                    s.if_accepted.clone()
                } else {
                    s.if_rejected.clone()
                }
            }
        }
    }
}

fn probe_at(round: usize, budget: usize, bases: ProbeBases) -> Option<(usize, Pauli1)> {
    if round < budget {
        Some((round, Pauli1::X))
    } else if bases == ProbeBases::Both && round < 2 * budget {
        Some((round - budget, Pauli1::Z))
    } else {
        None
    }
}

/// Block guess per position from probe verdicts; `None` where the probes
/// do not settle it.
pub fn infer_blocks(history: &[bool], n: usize, budget: usize, bases: ProbeBases) -> Vec<Option<BlockType>> {
    (0..n)
        .map(|q| {
            if q >= budget {
                return None;
            }
            let x_ok = history[q];
            if x_ok {
                return Some(BlockType::PlusTrap);
            }
            match bases {
                ProbeBases::XOnly => None,
                ProbeBases::Both if history[budget + q] => Some(BlockType::ZeroTrap),
                ProbeBases::Both => Some(BlockType::Data),
            }
        })
        .collect()
}

/// X on every position believed to hold data or a `|+⟩` trap. With X-only
/// probes the data block cannot be told from the `|0⟩` traps, so only the
/// `|+⟩` positions are hit. Unsettled positions are treated as data.
pub fn forgery(inferred: &[Option<BlockType>], bases: ProbeBases) -> PauliOp {
    let hit = |b: &Option<BlockType>| {
        matches!(
            (bases, b),
            (_, Some(BlockType::PlusTrap)) | (ProbeBases::Both, Some(BlockType::Data) | None)
        )
    };
    PauliOp::x_on(inferred.len(), inferred.iter().enumerate().filter(|(_, b)| hit(b)).map(|(q, _)| q))
}

/// Plays `strategy` against one shared code key, with a fresh pad drawn
/// from `otp_rng` for each ciphertext.
pub fn run_session<R: Rng + ?Sized>(
    f: &AuthFamily,
    key: &Key,
    strategy: &Strategy,
    strategy_seed: u64,
    otp_rng: &mut R,
) -> Result<Vec<Decryption>> {
    let n = f.total_qubits();
    strategy.validate(n)?;
    let rounds = strategy.rounds(n);
    let mut history = Vec::with_capacity(rounds);
    let mut out = Vec::with_capacity(rounds);
    for r in 0..rounds {
        let attack = strategy.attack(r, &history, n, strategy_seed);
        let mut frame = CiphertextFrame::with_random_otp(f, key, otp_rng);
        frame.apply(&attack)?;
        let d = frame.decrypt();
        history.push(d.accepted());
        out.push(d);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub family: FamilyDescriptor,
    pub seed: u64,
    pub bases: ProbeBases,
    pub probes_used: usize,
    pub probes_accepted: usize,
    pub inferred: Vec<Option<BlockType>>,
    pub block_map_accuracy: f64,
    pub forgery_attack: PauliOp,
    pub forgery_verdict: DetectionClass,
    pub forgery_logical_action: Option<Pauli1>,
}

impl ProbeReport {
    pub fn forged(&self) -> bool {
        self.forgery_verdict == DetectionClass::AcceptedForged
    }
}

/// Probe every position once per basis, each on a fresh ciphertext under
/// one code key, then submit the forgery.
pub fn adaptive_probe(f: &AuthFamily, seed: u64, bases: ProbeBases) -> Result<ProbeReport> {
    if !f.is_trap_kind() {
        return Err(Error::InvalidConfig("adaptive probing needs a trap-kind family".into()));
    }
    let n = f.total_qubits();
    let key = f.sample_key(&mut item_rng(seed, streams::KEYS, 0));
    let strategy = Strategy::ProbeAllThenForge { bases, budget: None };
    let run = run_session(f, &key, &strategy, derive_seed(seed, streams::STRATEGY, 0), &mut item_rng(seed, streams::OTP, 0))?;
    let (probes, last) = run.split_at(run.len() - 1);
    let history: Vec<bool> = probes.iter().map(Decryption::accepted).collect();
    let inferred = infer_blocks(&history, n, n, bases);
    let correct = inferred
        .iter()
        .enumerate()
        .filter(|(q, b)| b.unwrap_or(BlockType::Data) == f.block_type_at(&key, *q).expect("trap kind"))
        .count();
    let forgery_attack = forgery(&inferred, bases);
    let last = &last[0];
    Ok(ProbeReport {
        family: f.descriptor(),
        seed,
        bases,
        probes_used: probes.len(),
        probes_accepted: history.iter().filter(|&&a| a).count(),
        block_map_accuracy: correct as f64 / n as f64,
        forgery_verdict: last.verdict,
        forgery_logical_action: last.logical.as_ref().map(|p| p.get(0)),
        forgery_attack,
        inferred,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeSummary {
    pub family: FamilyDescriptor,
    pub seed: u64,
    pub runs: u64,
    pub bases: ProbeBases,
    pub mean_accuracy: f64,
    pub min_accuracy: f64,
    pub probes_accepted: u64,
    pub forgeries: u64,
    pub forgery_rate: f64,
    pub forgery_ci: Interval,
}

/// [`adaptive_probe`] repeated over independently seeded runs.
pub fn adaptive_probe_runs(f: &AuthFamily, runs: u64, seed: u64, bases: ProbeBases) -> Result<ProbeSummary> {
    let reports = (0..runs)
        .into_par_iter()
        .map(|r| adaptive_probe(f, derive_seed(seed, streams::TRIALS, r), bases))
        .collect::<Result<Vec<_>>>()?;
    let forgeries = reports.iter().filter(|r| r.forged()).count() as u64;
    Ok(ProbeSummary {
        family: f.descriptor(),
        seed,
        runs,
        bases,
        mean_accuracy: reports.iter().map(|r| r.block_map_accuracy).sum::<f64>() / runs.max(1) as f64,
        min_accuracy: reports.iter().map(|r| r.block_map_accuracy).fold(1.0, f64::min),
        probes_accepted: reports.iter().map(|r| r.probes_accepted as u64).sum(),
        forgeries,
        forgery_rate: rate(forgeries, runs),
        forgery_ci: clopper_pearson(forgeries, runs, CONFIDENCE),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReuseStats {
    pub family: FamilyDescriptor,
    pub strategy: Strategy,
    pub n_trials: u64,
    pub seed: u64,
    pub shards: usize,
    pub ciphertexts: usize,
    pub p_accept_second: f64,
    pub p_forge_second: f64,
    pub ci_accept_second: Interval,
    pub ci_forge_second: Interval,
}

/// Ciphertexts sharing one code key with independent pads; reports how
/// often the last one is accepted, and accepted with its message altered.
pub fn parallel_reuse(f: &AuthFamily, strategy: &Strategy, n_trials: u64, seed: u64, shards: usize) -> Result<ReuseStats> {
    let n = f.total_qubits();
    strategy.validate(n)?;
    let (accepted, forged) = shard_ranges(n_trials, shards)
        .into_par_iter()
        .map(|range| {
            let (mut a, mut g) = (0u64, 0u64);
            for i in range {
                let key = f.sample_key(&mut item_rng(seed, streams::KEYS, i));
                let run = run_session(
                    f,
                    &key,
                    strategy,
                    derive_seed(seed, streams::STRATEGY, i),
                    &mut item_rng(seed, streams::OTP, i),
                )
                .expect("strategy validated");
                let last = run.last().expect("at least one round");
                a += u64::from(last.accepted());
                g += u64::from(last.verdict == DetectionClass::AcceptedForged);
            }
            (a, g)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    Ok(ReuseStats {
        family: f.descriptor(),
        strategy: strategy.clone(),
        n_trials,
        seed,
        shards,
        ciphertexts: strategy.rounds(n),
        p_accept_second: rate(accepted, n_trials),
        p_forge_second: rate(forged, n_trials),
        ci_accept_second: clopper_pearson(accepted, n_trials, CONFIDENCE),
        ci_forge_second: clopper_pearson(forged, n_trials, CONFIDENCE),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x1(n: usize) -> PauliOp {
        PauliOp::single(n, 0, Pauli1::X)
    }

    #[test]
    fn single_probe_frequencies() {
        let trap = AuthFamily::trap_rm(1).unwrap();
        let s = run_single(&trap, &x1(21), 3000, 1, 4).unwrap();
        assert!(s.ci_accept_identity.contains(1.0 / 3.0), "{s:?}");
        assert_eq!(s.p_accept_forged, 0.0);
        assert!((s.p_reject + s.p_accept_identity + s.p_accept_forged - 1.0).abs() < 1e-12);

        let id = run_single(&trap, &PauliOp::identity(21), 100, 1, 2).unwrap();
        assert_eq!(id.p_accept_identity, 1.0);

        let strong = AuthFamily::strong_trap_rm(1).unwrap();
        assert_eq!(run_single(&strong, &x1(21), 500, 1, 3).unwrap().p_reject, 1.0);
    }

    #[test]
    fn leakage_examples() {
        let trap = AuthFamily::trap_rm(1).unwrap();
        let stat = KeyStatistic::BlockType { position: 0 };
        let r = key_posterior(&trap, &x1(21), Condition::Accept, stat, 2000, 3, 4).unwrap();
        assert_eq!(r.posterior, vec![0.0, 0.0, 1.0]);
        assert!((r.tv_distance - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.exact_posterior, Some(vec![0.0, 0.0, 1.0]));

        let strong = AuthFamily::strong_trap_rm(1).unwrap();
        assert!(matches!(
            key_posterior(&strong, &x1(21), Condition::Accept, stat, 2000, 3, 4),
            Err(Error::NoEvent { .. })
        ));
    }

    #[test]
    fn probing_breaks_trap_but_not_strong_trap() {
        let trap = AuthFamily::trap_rm(1).unwrap();
        let r = adaptive_probe(&trap, 1, ProbeBases::Both).unwrap();
        assert_eq!(r.block_map_accuracy, 1.0);
        assert_eq!(r.probes_used, 42);
        assert_eq!(r.forgery_verdict, DetectionClass::AcceptedForged);
        assert_eq!(r.forgery_logical_action, Some(Pauli1::X));

        let x_only = adaptive_probe(&trap, 1, ProbeBases::XOnly).unwrap();
        assert_eq!(x_only.forgery_verdict, DetectionClass::AcceptedIdentity);

        let strong = AuthFamily::strong_trap_rm(1).unwrap();
        let s = adaptive_probe(&strong, 1, ProbeBases::Both).unwrap();
        assert_eq!(s.probes_accepted, 0);
        assert_eq!(s.forgery_verdict, DetectionClass::Rejected);
    }

    #[test]
    fn identity_reuse_always_accepts() {
        let f = AuthFamily::clifford(1, 3).unwrap();
        let s = parallel_reuse(&f, &Strategy::Identity { rounds: 2 }, 200, 0, 3).unwrap();
        assert_eq!(s.p_accept_second, 1.0);
        assert_eq!(s.p_forge_second, 0.0);
    }
}
