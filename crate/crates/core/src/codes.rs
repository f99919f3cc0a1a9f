//! Binary linear codes, the punctured self-dual Reed–Muller family and the
//! CSS quantum codes built from it.
//!
//! Distances, weight distributions and sparsity tables are all computed by
//! exhaustive enumeration of the code, so every routine that enumerates is
//! guarded by [`MAX_ENUM_RANK`].
//!
//! The `[[7,1,3]]` member is the Steane code, built on the `[7,4]` Hamming
//! code. Quantum parameters are always written `[[n, 1, d]]`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{null_space, rref, BitVec, Echelon};
use crate::symplectic::{Gate, SymplecticCircuit, TagLayout};

/// Largest rank enumerated exhaustively.
pub const MAX_ENUM_RANK: usize = 24;

/// Largest number of Reed–Muller variables accepted.
pub const MAX_RM_VARIABLES: usize = 16;

/// A binary linear code held as a generator matrix in reduced row echelon
/// form.
#[derive(Clone, Debug)]
pub struct LinearCode {
    n: usize,
    echelon: Echelon,
}

impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.echelon.rows == other.echelon.rows
    }
}

impl Eq for LinearCode {}

impl LinearCode {
    /// Row space of `rows`; dependent rows are dropped.
    pub fn from_rows(n: usize, rows: &[BitVec]) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Ok(Self {
            n,
            echelon: rref(rows, n),
        })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            echelon: rref(&[], n),
        }
    }

    pub fn full_space(n: usize) -> Self {
        let rows: Vec<BitVec> = (0..n).map(|i| BitVec::with_ones(n, [i])).collect();
        Self::from_rows(n, &rows).expect("unit rows have length n")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn generator(&self) -> &[BitVec] {
        &self.echelon.rows
    }

    /// Pivot column of each generator row.
    pub fn pivots(&self) -> &[usize] {
        &self.echelon.pivots
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        v.len() == self.n && self.echelon.contains(v)
    }

    /// Every row of `other` lies in `self`.
    pub fn contains_code(&self, other: &LinearCode) -> bool {
        other.n == self.n && other.generator().iter().all(|r| self.contains(r))
    }

    pub fn dual(&self) -> LinearCode {
        let basis = null_space(self.generator(), self.n);
        LinearCode::from_rows(self.n, &basis).expect("null space rows have length n")
    }

    pub fn is_self_dual(&self) -> bool {
        2 * self.rank() == self.n && self.is_self_orthogonal()
    }

    pub fn is_self_orthogonal(&self) -> bool {
        let g = self.generator();
        g.iter().enumerate().all(|(i, a)| g[i..].iter().all(|b| !a.dot(b)))
    }

    fn check_rank(&self) -> Result<()> {
        if self.rank() > MAX_ENUM_RANK {
            return Err(Error::RankGuard {
                rank: self.rank(),
                limit: MAX_ENUM_RANK,
            });
        }
        Ok(())
    }

    /// Calls `f` on every codeword, in Gray-code order within each of the
    /// independent chunks the enumeration is split into.
    fn par_fold<T, F, G>(&self, init: G, f: F) -> Vec<T>
    where
        T: Send,
        G: Fn() -> T + Sync,
        F: Fn(&mut T, &BitVec) + Sync,
    {
        let k = self.rank();
        let g = self.generator();
        let chunk_bits = k.min(6);
        let low = k - chunk_bits;
        (0u64..1 << chunk_bits)
            .into_par_iter()
            .map(|hi| {
                let mut acc = init();
                let mut word = BitVec::zeros(self.n);
                for (j, row) in g[low..].iter().enumerate() {
                    if (hi >> j) & 1 == 1 {
                        word.xor_assign(row);
                    }
                }
                f(&mut acc, &word);
                for step in 1u64..1 << low {
                    word.xor_assign(&g[step.trailing_zeros() as usize]);
                    f(&mut acc, &word);
                }
                acc
            })
            .collect()
    }

    /// Number of codewords of each weight `0..=n`.
    pub fn weight_distribution(&self) -> Result<WeightDistribution> {
        self.check_rank()?;
        let n = self.n;
        let parts = self.par_fold(|| vec![0u64; n + 1], |acc, w| acc[w.weight()] += 1);
        let mut counts = vec![0u64; n + 1];
        for p in parts {
            for (c, v) in counts.iter_mut().zip(p) {
                *c += v;
            }
        }
        Ok(WeightDistribution { counts })
    }

    /// Minimum nonzero weight, `None` for the zero code.
    pub fn min_distance(&self) -> Result<Option<usize>> {
        Ok(self.weight_distribution()?.min_nonzero_weight())
    }

    /// Exact distance where enumeration is allowed, otherwise the smallest
    /// generator-row weight as an upper bound.
    pub fn distance_estimate(&self) -> DistanceEstimate {
        match self.min_distance() {
            Ok(d) => DistanceEstimate {
                value: d,
                method: DistanceMethod::Exhaustive,
            },
            Err(_) => DistanceEstimate {
                value: self.generator().iter().map(BitVec::weight).min(),
                method: DistanceMethod::GeneratorRowUpperBound,
            },
        }
    }

    /// Minimum weight over `self \ sub`, `None` when `sub` is all of `self`.
    pub fn min_weight_outside(&self, sub: &LinearCode) -> Result<Option<usize>> {
        self.check_rank()?;
        let parts = self.par_fold(
            || None::<usize>,
            |best, w| {
                let wt = w.weight();
                if best.is_none_or(|b| wt < b) && !sub.contains(w) {
                    *best = Some(wt);
                }
            },
        );
        Ok(parts.into_iter().flatten().min())
    }

    /// Drops the last coordinate.
    ///
    /// Refused when every codeword ends in 0 (puncture elsewhere instead),
    /// when the code has distance 1 or less, and when the punctured code
    /// would be the whole space `F_2^{n-1}`, which leaves no room for tags.
    pub fn puncture_last(&self) -> Result<LinearCode> {
        if self.n < 2 {
            return Err(Error::PunctureRejected(format!("length {} too short", self.n)));
        }
        let last = self.n - 1;
        if self.generator().iter().all(|r| !r.get(last)) {
            return Err(Error::PunctureRejected(
                "every codeword ends in 0; puncture a different position".into(),
            ));
        }
        let d = self.distance_estimate();
        if d.method == DistanceMethod::Exhaustive && d.value.is_none_or(|d| d <= 1) {
            return Err(Error::PunctureRejected(format!(
                "distance {:?} must exceed 1",
                d.value
            )));
        }
        let rows: Vec<BitVec> = self.generator().iter().map(|r| r.truncated(last)).collect();
        let punctured = LinearCode::from_rows(last, &rows)?;
        if punctured.rank() != self.rank() {
            return Err(Error::PunctureRejected(
                "two codewords differ only in the punctured bit".into(),
            ));
        }
        if punctured.rank() == last {
            return Err(Error::PunctureRejected(format!(
                "punctured code is all of F_2^{last}"
            )));
        }
        Ok(punctured)
    }

    pub fn to_hex_rows(&self) -> Vec<String> {
        self.generator().iter().map(BitVec::to_hex).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMethod {
    Exhaustive,
    GeneratorRowUpperBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceEstimate {
    pub value: Option<usize>,
    pub method: DistanceMethod,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDistribution {
    pub counts: Vec<u64>,
}

impl WeightDistribution {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn count(&self, w: usize) -> u64 {
        self.counts.get(w).copied().unwrap_or(0)
    }

    pub fn min_nonzero_weight(&self) -> Option<usize> {
        self.counts.iter().enumerate().skip(1).find(|(_, &c)| c > 0).map(|(w, _)| w)
    }
}

/// Reed–Muller code `R(r, a)`: evaluations of all monomials of degree at
/// most `r` in `a` variables. Evaluation point `u` has variable `j` equal to
/// bit `j` of `u`.
pub fn reed_muller(r: usize, a: usize) -> Result<LinearCode> {
    if r > a {
        return Err(Error::ParameterGuard(format!("degree {r} exceeds variable count {a}")));
    }
    if a > MAX_RM_VARIABLES {
        return Err(Error::ParameterGuard(format!(
            "{a} variables exceeds the limit of {MAX_RM_VARIABLES}"
        )));
    }
    let n = 1usize << a;
    let rows: Vec<BitVec> = (0u32..1 << a)
        .filter(|mask| mask.count_ones() as usize <= r)
        .map(|mask| {
            let mut row = BitVec::zeros(n);
            for u in 0..n {
                if u as u32 & mask == mask {
                    row.set(u, true);
                }
            }
            row
        })
        .collect();
    LinearCode::from_rows(n, &rows)
}

/// Quantum CSS code `CSS(C1, C2)` with `C2 = C1^⊥ ⊂ C1`.
///
/// The encoder takes the message on input qubit 0 and `|0⟩` tags on inputs
/// `1..n`; X-type stabilisers carry patterns from `C2` and, because the code
/// is weakly self-dual, so do the Z-type ones.
#[derive(Clone, Debug)]
pub struct CssCode {
    c1: LinearCode,
    c2: LinearCode,
    encoder: SymplecticCircuit,
    layout: TagLayout,
    logical_x: BitVec,
    distance: usize,
    benign_distance: Option<usize>,
}

impl CssCode {
    pub fn new(c1: LinearCode, c2: LinearCode) -> Result<Self> {
        if c1.n() != c2.n() {
            return Err(Error::DimensionMismatch {
                expected: c1.n(),
                found: c2.n(),
            });
        }
        if !c1.contains_code(&c2) {
            return Err(Error::Containment("C2 is not contained in C1".into()));
        }
        if c1.dual() != c2 {
            return Err(Error::Containment("C2 is not the dual of C1".into()));
        }
        let n = c1.n();
        let m = c1.rank() - c2.rank();
        if m != 1 {
            return Err(Error::Containment(format!(
                "encoder supports one logical qubit, code has {m}"
            )));
        }
        let logical_x = c1
            .generator()
            .iter()
            .map(|r| c2.echelon.reduce(r))
            .find(|r| !r.is_zero())
            .expect("rank difference guarantees a coset representative");
        let encoder = css_encoder(&c2, &logical_x)?;
        let distance = c1
            .min_weight_outside(&c2)?
            .expect("C1 strictly contains C2");
        let benign_distance = c2.min_distance()?;
        Ok(Self {
            c1,
            c2,
            encoder,
            layout: TagLayout::leading_message(1, n - 1),
            logical_x,
            distance,
            benign_distance,
        })
    }

    pub fn n(&self) -> usize {
        self.c1.n()
    }

    pub fn m(&self) -> usize {
        self.c1.rank() - self.c2.rank()
    }

    pub fn c1(&self) -> &LinearCode {
        &self.c1
    }

    pub fn c2(&self) -> &LinearCode {
        &self.c2
    }

    pub fn encoder(&self) -> &SymplecticCircuit {
        &self.encoder
    }

    pub fn layout(&self) -> &TagLayout {
        &self.layout
    }

    /// The coset representative of `C1 \ C2` the encoder maps to logical X.
    pub fn logical_x_pattern(&self) -> &BitVec {
        &self.logical_x
    }

    pub fn distance(&self) -> usize {
        self.distance
    }

    /// `None` when there is no nonidentity stabiliser.
    pub fn benign_distance(&self) -> Option<usize> {
        self.benign_distance
    }

    /// `X(pattern)` or `Z(pattern)` passes the stabiliser checks.
    pub fn syndrome_free(&self, pattern: &BitVec) -> bool {
        self.c1.contains(pattern)
    }

    /// `X(pattern)` (or `Z(pattern)`) for a syndrome-free pattern acts as a
    /// stabiliser rather than a logical operator.
    pub fn is_stabilizer_pattern(&self, pattern: &BitVec) -> bool {
        self.c2.contains(pattern)
    }

    pub fn descriptor(&self, index: Option<usize>) -> CodeDescriptor {
        CodeDescriptor {
            family: "rm-css".into(),
            index,
            n: self.n(),
            m: self.m(),
            d: self.distance,
            benign_d: self.benign_distance,
            generator_rows_hex: self.c1.to_hex_rows(),
        }
    }
}

/// JSON code descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDescriptor {
    pub family: String,
    pub index: Option<usize>,
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub benign_d: Option<usize>,
    /// Rows of the `C1` generator matrix.
    pub generator_rows_hex: Vec<String>,
}

/// Standard-form CSS encoder.
///
/// `G(C2)` is kept in reduced echelon form with pivot set `P`, and the
/// logical representative `L` is reduced against it so `L` vanishes on `P`.
/// The message is routed to the first column `p` of `L` and fanned out over
/// the rest of `L`; then every pivot of `P` gets a Hadamard and fans out
/// over its row. Pivots in `P` are never CNOT targets, so their values stay
/// put and the output is `|x·L + span(C2)⟩`.
fn css_encoder(c2: &LinearCode, logical_x: &BitVec) -> Result<SymplecticCircuit> {
    let n = c2.n();
    let logical_pivot = logical_x
        .first_one()
        .expect("logical representative is nonzero");
    debug_assert!(c2.pivots().iter().all(|&p| !logical_x.get(p)));

    // Input 0 (message) goes to the logical pivot; the rest fill in order.
    let mut perm = vec![0usize; n];
    perm[0] = logical_pivot;
    for (slot, q) in (0..n).filter(|&q| q != logical_pivot).enumerate() {
        perm[slot + 1] = q;
    }

    let mut gates = vec![Gate::Perm(perm)];
    gates.extend(
        logical_x
            .iter_ones()
            .filter(|&t| t != logical_pivot)
            .map(|t| Gate::Cnot { control: logical_pivot, target: t }),
    );
    gates.extend(c2.pivots().iter().map(|&p| Gate::H(p)));
    for (row, &p) in c2.generator().iter().zip(c2.pivots()) {
        gates.extend(
            row.iter_ones()
                .filter(|&t| t != p)
                .map(|t| Gate::Cnot { control: p, target: t }),
        );
    }
    SymplecticCircuit::new(n, gates)
}

/// Punctures a self-dual code to get `C1`, then builds `CSS(C1, C1^⊥)`.
pub fn css_from_selfdual(c: &LinearCode) -> Result<CssCode> {
    if !c.is_self_dual() {
        return Err(Error::NotSelfDual(format!(
            "[{}, {}] code is not equal to its dual",
            c.n(),
            c.rank()
        )));
    }
    let c1 = c.puncture_last()?;
    let c2 = c1.dual();
    if c2.rank() + 1 != c1.rank() {
        return Err(Error::Containment(format!(
            "rank(C2) = {} but rank(C1) = {}",
            c2.rank(),
            c1.rank()
        )));
    }
    CssCode::new(c1, c2)
}

/// `i`-th family member: punctured `R(i, 2i+1)`.
pub fn rm_css(index: usize) -> Result<CssCode> {
    if index == 0 {
        return Err(Error::ParameterGuard("family index starts at 1".into()));
    }
    let a = 2 * index + 1;
    css_from_selfdual(&reed_muller(index, a)?)
}

pub fn benign_distance(css: &CssCode) -> Option<usize> {
    css.benign_distance()
}

/// Weight-sparsity table for the X-type stabilisers of a CSS code.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SparsityReport {
    pub n: usize,
    pub d: usize,
    /// `B^X(w) = |C2(w)|`, identity excluded (so `B^X(0) = 0`).
    pub benign_counts: Vec<u64>,
    /// `r(w) = B^X(w) / binom(n, w)`.
    pub ratios: Vec<f64>,
    pub f_x: f64,
    pub f_x_weight: usize,
    /// Exact `f_X` as `(numerator, denominator)` of the maximising ratio.
    pub f_x_exact: (u64, u128),
    /// Weights `d <= w < n/8`, each paired with `|C2(w)| <= binom(n, floor(w - d/2))`.
    pub rcw_middle_range: Vec<(usize, bool)>,
    /// The same inequality over `d <= w <= (n-1)/2`.
    pub rcw_extended_range: Vec<(usize, bool)>,
    pub all_ones_benign_free: bool,
    /// `h(1/8)` and whether it exceeds 1/2.
    pub entropy_h_eighth: f64,
    pub entropy_check: bool,
}

pub fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

pub fn sparsity_report(css: &CssCode) -> Result<SparsityReport> {
    let n = css.n();
    let d = css.distance();
    let mut counts = css.c2().weight_distribution()?.counts;
    counts[0] = 0;
    let ratios: Vec<f64> = counts
        .iter()
        .enumerate()
        .map(|(w, &c)| c as f64 / binomial_u128(n, w) as f64)
        .collect();
    // Compare exactly via cross-multiplication.
    let (mut best_w, mut best) = (0usize, (0u64, 1u128));
    for (w, &c) in counts.iter().enumerate() {
        let den = binomial_u128(n, w);
        if (c as u128) * best.1 > (best.0 as u128) * den {
            best = (c, den);
            best_w = w;
        }
    }
    let rcw = |w: usize| {
        let k = (2 * w).saturating_sub(d) / 2;
        (w, counts[w] as u128 <= binomial_u128(n, k))
    };
    let rcw_middle_range = (d..n).filter(|&w| 8 * w < n).map(rcw).collect();
    let rcw_extended_range = (d..=(n - 1) / 2).map(rcw).collect();
    let h = binary_entropy(0.125);
    Ok(SparsityReport {
        n,
        d,
        f_x: ratios.iter().cloned().fold(0.0, f64::max),
        f_x_weight: best_w,
        f_x_exact: best,
        ratios,
        all_ones_benign_free: counts[n] == 0,
        benign_counts: counts,
        rcw_middle_range,
        rcw_extended_range,
        entropy_h_eighth: h,
        entropy_check: h > 0.5,
    })
}
