//! Binary-symplectic Paulis and Clifford circuits.
//!
//! A Pauli on `n` qubits is the pair `(x, z)` of `n`-bit vectors; qubit `i`
//! carries `X` when only `x[i]` is set, `Z` when only `z[i]` is set and `Y`
//! when both are. Qubit indices are little-endian: index 0 is bit 0 of the
//! first word. Global phases are never tracked; every Clifford acts here as
//! a linear map on `(x ∥ z)` that preserves the symplectic form.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitVec;

/// Single-qubit Pauli, phase dropped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli1 {
    I,
    X,
    Y,
    Z,
}

impl Pauli1 {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli1::I,
            (true, false) => Pauli1::X,
            (true, true) => Pauli1::Y,
            (false, true) => Pauli1::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli1::I => (false, false),
            Pauli1::X => (true, false),
            Pauli1::Y => (true, true),
            Pauli1::Z => (false, true),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli1::I => 'I',
            Pauli1::X => 'X',
            Pauli1::Y => 'Y',
            Pauli1::Z => 'Z',
        }
    }
}

impl fmt::Display for Pauli1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliWeights {
    /// Positions carrying `X` only.
    pub x: usize,
    /// Positions carrying `Y`.
    pub y: usize,
    /// Positions carrying `Z` only.
    pub z: usize,
    pub total: usize,
    /// Weight of the `X` part, `x + y`.
    pub x_part: usize,
    /// Weight of the `Z` part, `z + y`.
    pub z_part: usize,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOp {
    x: BitVec,
    z: BitVec,
}

impl PauliOp {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
        }
    }

    pub fn from_parts(x: BitVec, z: BitVec) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: z.len(),
            });
        }
        Ok(Self { x, z })
    }

    pub fn single(n: usize, qubit: usize, p: Pauli1) -> Self {
        let mut out = Self::identity(n);
        out.set(qubit, p);
        out
    }

    pub fn x_on(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        Self {
            x: BitVec::with_ones(n, qubits),
            z: BitVec::zeros(n),
        }
    }

    pub fn z_on(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        Self {
            x: BitVec::zeros(n),
            z: BitVec::with_ones(n, qubits),
        }
    }

    /// The basis element `X_i` (`i < n`) or `Z_{i-n}` (`i >= n`) of the
    /// `2n`-dimensional symplectic space.
    pub fn basis(n: usize, i: usize) -> Self {
        if i < n {
            Self::single(n, i, Pauli1::X)
        } else {
            Self::single(n, i - n, Pauli1::Z)
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    #[inline]
    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    pub fn get(&self, q: usize) -> Pauli1 {
        Pauli1::from_bits(self.x.get(q), self.z.get(q))
    }

    pub fn set(&mut self, q: usize, p: Pauli1) {
        let (x, z) = p.bits();
        self.x.set(q, x);
        self.z.set(q, z);
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn support(&self) -> BitVec {
        self.x.or(&self.z)
    }

    pub fn weights(&self) -> PauliWeights {
        let y = self.x.and(&self.z).weight();
        let x_part = self.x.weight();
        let z_part = self.z.weight();
        PauliWeights {
            x: x_part - y,
            y,
            z: z_part - y,
            total: x_part + z_part - y,
            x_part,
            z_part,
        }
    }

    fn check_dim(&self, other: &PauliOp) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        Ok(())
    }

    /// Symplectic inner product: `false` iff the two Paulis commute.
    pub fn sip(&self, other: &PauliOp) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self.sip_unchecked(other))
    }

    #[inline]
    pub(crate) fn sip_unchecked(&self, other: &PauliOp) -> bool {
        self.x.dot(&other.z) ^ self.z.dot(&other.x)
    }

    /// Product with the phase discarded.
    pub fn mul(&self, other: &PauliOp) -> Result<PauliOp> {
        self.check_dim(other)?;
        Ok(PauliOp {
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
        })
    }

    pub(crate) fn mul_assign_unchecked(&mut self, other: &PauliOp) {
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// Conjugation `Q P Q†` by another Pauli: the operator is unchanged and
    /// only a sign appears, returned as `true` for `-1`.
    pub fn conjugated_by_pauli(&self, q: &PauliOp) -> Result<(PauliOp, bool)> {
        Ok((self.clone(), self.sip(q)?))
    }

    /// Restriction to an ordered list of positions.
    pub fn restrict(&self, positions: &[usize]) -> PauliOp {
        let mut out = PauliOp::identity(positions.len());
        for (j, &q) in positions.iter().enumerate() {
            out.set(j, self.get(q));
        }
        out
    }

    /// Qubit `i` moves to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> PauliOp {
        PauliOp {
            x: self.x.permuted(perm),
            z: self.z.permuted(perm),
        }
    }

    /// Hex serialisation of `(x_bits, z_bits)`.
    pub fn to_hex_pair(&self) -> (String, String) {
        (self.x.to_hex(), self.z.to_hex())
    }

    pub fn from_hex_pair(n: usize, x: &str, z: &str) -> Result<Self> {
        let x = BitVec::from_hex(n, x).map_err(Error::InvalidConfig)?;
        let z = BitVec::from_hex(n, z).map_err(Error::InvalidConfig)?;
        Ok(Self { x, z })
    }

    /// Embeds `self` into `n` qubits starting at `offset`.
    pub fn embed(&self, n: usize, offset: usize) -> PauliOp {
        let mut out = PauliOp::identity(n);
        for q in self.support().iter_ones() {
            out.set(offset + q, self.get(q));
        }
        out
    }

    fn apply_gate(&mut self, gate: &Gate, inverse: bool) {
        match gate {
            Gate::H(q) => {
                let (a, b) = (self.x.get(*q), self.z.get(*q));
                self.x.set(*q, b);
                self.z.set(*q, a);
            }
            // S and S† share one phaseless action.
            Gate::S(q) => {
                if self.x.get(*q) {
                    self.z.flip(*q);
                }
            }
            Gate::Cnot { control, target } => {
                if self.x.get(*control) {
                    self.x.flip(*target);
                }
                if self.z.get(*target) {
                    self.z.flip(*control);
                }
            }
            Gate::Perm(perm) => {
                if inverse {
                    let inv = invert_permutation(perm);
                    *self = self.permuted(&inv);
                } else {
                    *self = self.permuted(perm);
                }
            }
        }
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOp({self})")
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n() {
            write!(f, "{}", self.get(q))?;
        }
        Ok(())
    }
}

impl FromStr for PauliOp {
    type Err = Error;

    /// `"XIZY"`: qubit 0 first.
    fn from_str(s: &str) -> Result<Self> {
        let n = s.chars().count();
        let mut p = PauliOp::identity(n);
        for (q, c) in s.chars().enumerate() {
            let s1 = match c.to_ascii_uppercase() {
                'I' | '_' => Pauli1::I,
                'X' => Pauli1::X,
                'Y' => Pauli1::Y,
                'Z' => Pauli1::Z,
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "unknown Pauli symbol {other:?}"
                    )))
                }
            };
            p.set(q, s1);
        }
        Ok(p)
    }
}

#[derive(Serialize, Deserialize)]
struct PauliHex {
    n: usize,
    x: String,
    z: String,
}

impl Serialize for PauliOp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (x, z) = self.to_hex_pair();
        PauliHex { n: self.n(), x, z }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PauliOp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let h = PauliHex::deserialize(d)?;
        PauliOp::from_hex_pair(h.n, &h.x, &h.z).map_err(serde::de::Error::custom)
    }
}

/// Free function form of [`PauliOp::sip`].
pub fn sip(a: &PauliOp, b: &PauliOp) -> Result<bool> {
    a.sip(b)
}

pub fn weights(p: &PauliOp) -> PauliWeights {
    p.weights()
}

pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

pub fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    H(usize),
    S(usize),
    Cnot { control: usize, target: usize },
    /// Input qubit `i` is moved to position `perm[i]`.
    Perm(Vec<usize>),
}

impl Gate {
    fn validate(&self, n: usize) -> Result<()> {
        match self {
            Gate::H(q) | Gate::S(q) if *q >= n => {
                Err(Error::InvalidGate(format!("{self:?} acts outside {n} qubits")))
            }
            Gate::Cnot { control, target } if *control >= n || *target >= n => {
                Err(Error::InvalidGate(format!("{self:?} acts outside {n} qubits")))
            }
            Gate::Cnot { control, target } if control == target => {
                Err(Error::InvalidGate(format!("{self:?} has control equal to target")))
            }
            Gate::Perm(p) if p.len() != n || !is_permutation(p) => Err(Error::InvalidGate(
                format!("permutation {p:?} is not a bijection on {n} qubits"),
            )),
            _ => Ok(()),
        }
    }

    fn inverted(&self) -> Gate {
        match self {
            Gate::Perm(p) => Gate::Perm(invert_permutation(p)),
            g => g.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `V P V†`: input frame to output frame.
    Forward,
    /// `V† P V`: output frame back to input frame.
    Inverse,
}

/// A gate list together with its compiled `2n × 2n` symplectic action.
///
/// The action is stored column-wise: `forward[i]` is the image of basis
/// element `i` (see [`PauliOp::basis`]), and likewise for `inverse`.
#[derive(Clone, Debug)]
pub struct SymplecticCircuit {
    n: usize,
    gates: Vec<Gate>,
    forward: Vec<PauliOp>,
    inverse: Vec<PauliOp>,
}

impl SymplecticCircuit {
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            g.validate(n)?;
        }
        let forward = (0..2 * n)
            .map(|i| {
                let mut p = PauliOp::basis(n, i);
                for g in &gates {
                    p.apply_gate(g, false);
                }
                p
            })
            .collect();
        let inverse = (0..2 * n)
            .map(|i| {
                let mut p = PauliOp::basis(n, i);
                for g in gates.iter().rev() {
                    p.apply_gate(g, true);
                }
                p
            })
            .collect();
        Ok(Self {
            n,
            gates,
            forward,
            inverse,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, Vec::new()).expect("empty circuit is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Columns of the compiled action in the requested direction.
    pub fn images(&self, direction: Direction) -> &[PauliOp] {
        match direction {
            Direction::Forward => &self.forward,
            Direction::Inverse => &self.inverse,
        }
    }

    /// The compiled action as `2n` rows of `2n` bits, acting on `(x ∥ z)`
    /// column vectors.
    pub fn action_matrix(&self, direction: Direction) -> Vec<BitVec> {
        let n = self.n;
        let cols = self.images(direction);
        (0..2 * n)
            .map(|r| {
                let mut row = BitVec::zeros(2 * n);
                for (c, img) in cols.iter().enumerate() {
                    let bit = if r < n {
                        img.x_bits().get(r)
                    } else {
                        img.z_bits().get(r - n)
                    };
                    if bit {
                        row.set(c, true);
                    }
                }
                row
            })
            .collect()
    }

    pub fn conjugate(&self, p: &PauliOp, direction: Direction) -> Result<PauliOp> {
        if p.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.n(),
            });
        }
        Ok(apply_images(self.images(direction), p))
    }

    /// Conjugates gate by gate, bypassing the compiled action.
    pub fn conjugate_by_gates(&self, p: &PauliOp, direction: Direction) -> Result<PauliOp> {
        if p.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.n(),
            });
        }
        let mut out = p.clone();
        match direction {
            Direction::Forward => self.gates.iter().for_each(|g| out.apply_gate(g, false)),
            Direction::Inverse => self.gates.iter().rev().for_each(|g| out.apply_gate(g, true)),
        }
        Ok(out)
    }

    pub fn inverse(&self) -> SymplecticCircuit {
        SymplecticCircuit {
            n: self.n,
            gates: self.gates.iter().rev().map(Gate::inverted).collect(),
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    /// `other ∘ self`: `self` runs first.
    pub fn then(&self, other: &SymplecticCircuit) -> Result<SymplecticCircuit> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().cloned());
        let forward = self.forward.iter().map(|p| apply_images(&other.forward, p)).collect();
        let inverse = other.inverse.iter().map(|p| apply_images(&self.inverse, p)).collect();
        Ok(SymplecticCircuit {
            n: self.n,
            gates,
            forward,
            inverse,
        })
    }

    /// Tensor product: `self` on qubits `0..n`, `other` on `n..n+m`.
    pub fn tensor(&self, other: &SymplecticCircuit) -> SymplecticCircuit {
        let n = self.n;
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().map(|g| shift_gate(g, n, n + other.n)));
        SymplecticCircuit::new(n + other.n, gates).expect("shifted gates stay in range")
    }

    pub fn is_symplectic(&self) -> bool {
        is_symplectic_images(&self.forward)
    }
}

/// Relabels a gate acting on `0..k` to act on `offset..offset+k` inside a
/// register of `total` qubits.
pub fn shift_gate(g: &Gate, offset: usize, total: usize) -> Gate {
    match g {
        Gate::H(q) => Gate::H(q + offset),
        Gate::S(q) => Gate::S(q + offset),
        Gate::Cnot { control, target } => Gate::Cnot {
            control: control + offset,
            target: target + offset,
        },
        Gate::Perm(p) => {
            let mut full: Vec<usize> = (0..total).collect();
            for (i, &t) in p.iter().enumerate() {
                full[i + offset] = t + offset;
            }
            Gate::Perm(full)
        }
    }
}

#[inline]
pub(crate) fn apply_images(images: &[PauliOp], p: &PauliOp) -> PauliOp {
    let n = p.n();
    let mut out = PauliOp::identity(n);
    for i in p.x_bits().iter_ones() {
        out.mul_assign_unchecked(&images[i]);
    }
    for i in p.z_bits().iter_ones() {
        out.mul_assign_unchecked(&images[n + i]);
    }
    out
}

/// Checks that column images `(f(X_0..), f(Z_0..))` preserve the form.
pub fn is_symplectic_images(images: &[PauliOp]) -> bool {
    let n = images.len() / 2;
    if images.len() != 2 * n || images.iter().any(|p| p.n() != n) {
        return false;
    }
    for i in 0..2 * n {
        for j in i + 1..2 * n {
            let expected = j == i + n;
            if images[i].sip_unchecked(&images[j]) != expected {
                return false;
            }
        }
    }
    true
}

/// Images of the inverse map, read off through the form:
/// `f⁻¹(P)` has X on `j` iff `⟨P, f(Z_j)⟩ = 1` and Z on `j` iff `⟨P, f(X_j)⟩ = 1`.
pub fn invert_images(images: &[PauliOp]) -> Vec<PauliOp> {
    let n = images.len() / 2;
    (0..2 * n)
        .map(|i| {
            let e = PauliOp::basis(n, i);
            let mut out = PauliOp::identity(n);
            for j in 0..n {
                if e.sip_unchecked(&images[n + j]) {
                    out.x.set(j, true);
                }
                if e.sip_unchecked(&images[j]) {
                    out.z.set(j, true);
                }
            }
            out
        })
        .collect()
}

/// Free function form of [`SymplecticCircuit::conjugate`].
pub fn conjugate(p: &PauliOp, c: &SymplecticCircuit, direction: Direction) -> Result<PauliOp> {
    c.conjugate(p, direction)
}

/// Input-side split of `m + t` qubits into message and tag registers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLayout")]
pub struct TagLayout {
    n_total: usize,
    message: Vec<usize>,
    tags: Vec<usize>,
    #[serde(skip)]
    tag_mask: BitVec,
    #[serde(skip)]
    message_mask: BitVec,
}

#[derive(Deserialize)]
struct RawLayout {
    n_total: usize,
    message: Vec<usize>,
    tags: Vec<usize>,
}

impl TryFrom<RawLayout> for TagLayout {
    type Error = Error;

    fn try_from(raw: RawLayout) -> Result<Self> {
        TagLayout::new(raw.n_total, raw.message, raw.tags)
    }
}

impl TagLayout {
    pub fn new(n_total: usize, message: Vec<usize>, tags: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; n_total];
        for &q in message.iter().chain(&tags) {
            if q >= n_total {
                return Err(Error::InvalidLayout(format!("position {q} outside {n_total} qubits")));
            }
            if seen[q] {
                return Err(Error::InvalidLayout(format!("position {q} listed twice")));
            }
            seen[q] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidLayout("message and tag positions do not cover every qubit".into()));
        }
        let tag_mask = BitVec::with_ones(n_total, tags.iter().copied());
        let message_mask = BitVec::with_ones(n_total, message.iter().copied());
        Ok(Self {
            n_total,
            message,
            tags,
            tag_mask,
            message_mask,
        })
    }

    /// Message on `0..m`, tags on `m..m+t`.
    pub fn leading_message(m: usize, t: usize) -> Self {
        Self::new(m + t, (0..m).collect(), (m..m + t).collect()).expect("contiguous layout")
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn message_positions(&self) -> &[usize] {
        &self.message
    }

    pub fn tag_positions(&self) -> &[usize] {
        &self.tags
    }

    pub fn classify(&self, p: &PauliOp) -> Result<DetectionClass> {
        if p.n() != self.n_total {
            return Err(Error::DimensionMismatch {
                expected: self.n_total,
                found: p.n(),
            });
        }
        Ok(self.classify_unchecked(p))
    }

    #[inline]
    pub(crate) fn classify_unchecked(&self, p: &PauliOp) -> DetectionClass {
        let tag_flips = p.x_bits().words().iter().zip(self.tag_mask.words()).any(|(a, b)| a & b != 0);
        if tag_flips {
            return DetectionClass::Rejected;
        }
        let touches_message = p
            .x_bits()
            .words()
            .iter()
            .zip(p.z_bits().words())
            .zip(self.message_mask.words())
            .any(|((x, z), m)| (x | z) & m != 0);
        if touches_message {
            DetectionClass::AcceptedForged
        } else {
            DetectionClass::AcceptedIdentity
        }
    }
}

/// Outcome of decoding a conjugated Pauli against the tag register.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DetectionClass {
    /// Some tag is bit-flipped.
    Rejected,
    /// Tags untouched up to `Z`, message untouched.
    AcceptedIdentity,
    /// Tags untouched up to `Z`, message altered.
    AcceptedForged,
}

impl DetectionClass {
    pub fn accepted(self) -> bool {
        self != DetectionClass::Rejected
    }
}

pub fn classify(p: &PauliOp, layout: &TagLayout) -> Result<DetectionClass> {
    layout.classify(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOp {
        s.parse().unwrap()
    }

    #[test]
    fn hadamard_swaps_x_and_z() {
        let c = SymplecticCircuit::new(1, vec![Gate::H(0)]).unwrap();
        assert_eq!(c.conjugate(&p("X"), Direction::Forward).unwrap(), p("Z"));
    }

    #[test]
    fn cnot_spreads_x_to_target() {
        let c = SymplecticCircuit::new(2, vec![Gate::Cnot { control: 0, target: 1 }]).unwrap();
        assert_eq!(c.conjugate(&p("XI"), Direction::Forward).unwrap(), p("XX"));
        assert_eq!(c.conjugate(&p("IZ"), Direction::Forward).unwrap(), p("ZZ"));
    }

    #[test]
    fn phase_gate_maps_x_to_y() {
        let c = SymplecticCircuit::new(1, vec![Gate::S(0)]).unwrap();
        let out = c.conjugate(&p("X"), Direction::Forward).unwrap();
        assert!(out.x_bits().get(0) && out.z_bits().get(0));
    }

    #[test]
    fn permutation_moves_qubits() {
        let c = SymplecticCircuit::new(3, vec![Gate::Perm(vec![2, 0, 1])]).unwrap();
        assert_eq!(c.conjugate(&p("XZI"), Direction::Forward).unwrap(), p("ZIX"));
        assert_eq!(c.conjugate(&p("ZIX"), Direction::Inverse).unwrap(), p("XZI"));
    }

    #[test]
    fn sip_examples() {
        assert!(sip(&p("X"), &p("Z")).unwrap());
        assert!(!sip(&p("X"), &p("X")).unwrap());
        assert!(!sip(&p("XZ"), &p("ZX")).unwrap());
        assert!(matches!(sip(&p("X"), &p("XX")), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn weight_examples() {
        let w = weights(&p("III"));
        assert_eq!((w.x, w.y, w.z, w.total), (0, 0, 0, 0));
        let w = weights(&p("XYZ"));
        assert_eq!((w.x, w.y, w.z, w.total), (1, 1, 1, 3));
        let q = PauliOp::from_parts(
            BitVec::from_bit_str("110").unwrap(),
            BitVec::from_bit_str("011").unwrap(),
        )
        .unwrap();
        let w = q.weights();
        assert_eq!((w.x, w.y, w.z, w.total, w.x_part, w.z_part), (1, 1, 1, 3, 2, 2));
    }

    #[test]
    fn classify_examples() {
        let layout = TagLayout::leading_message(1, 3);
        assert_eq!(layout.classify(&p("IIII")).unwrap(), DetectionClass::AcceptedIdentity);
        assert_eq!(layout.classify(&p("IIZI")).unwrap(), DetectionClass::AcceptedIdentity);
        assert_eq!(layout.classify(&p("XIII")).unwrap(), DetectionClass::AcceptedForged);
        assert_eq!(layout.classify(&p("IYII")).unwrap(), DetectionClass::Rejected);
        assert!(layout.classify(&p("XII")).is_err());
    }

    #[test]
    fn layout_rejects_overlap_and_gaps() {
        assert!(TagLayout::new(3, vec![0], vec![0, 1, 2]).is_err());
        assert!(TagLayout::new(3, vec![0], vec![1]).is_err());
        assert!(TagLayout::new(3, vec![0], vec![1, 3]).is_err());
    }

    #[test]
    fn invalid_gates_rejected() {
        assert!(SymplecticCircuit::new(2, vec![Gate::H(2)]).is_err());
        assert!(SymplecticCircuit::new(2, vec![Gate::Cnot { control: 1, target: 1 }]).is_err());
        assert!(SymplecticCircuit::new(2, vec![Gate::Perm(vec![0, 0])]).is_err());
    }

    #[test]
    fn otp_conjugation_only_flips_sign() {
        let a = p("XYZI");
        let (same, sign) = a.conjugated_by_pauli(&p("ZIII")).unwrap();
        assert_eq!(same, a);
        assert!(sign);
    }

    #[test]
    fn serde_roundtrip_uses_hex() {
        let a = p("XYZIX");
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"n":5,"x":"13","z":"06"}"#);
        let back: PauliOp = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn then_matches_concatenated_gates() {
        let a = SymplecticCircuit::new(3, vec![Gate::H(0), Gate::Cnot { control: 0, target: 2 }]).unwrap();
        let b = SymplecticCircuit::new(3, vec![Gate::S(2), Gate::Perm(vec![1, 2, 0])]).unwrap();
        let ab = a.then(&b).unwrap();
        let flat = SymplecticCircuit::new(3, ab.gates().to_vec()).unwrap();
        for i in 0..6 {
            let e = PauliOp::basis(3, i);
            assert_eq!(ab.conjugate(&e, Direction::Forward).unwrap(), flat.conjugate(&e, Direction::Forward).unwrap());
            assert_eq!(ab.conjugate(&e, Direction::Inverse).unwrap(), flat.conjugate(&e, Direction::Inverse).unwrap());
        }
    }

    #[test]
    fn inverted_images_match_reversed_gates() {
        let c = SymplecticCircuit::new(
            3,
            vec![
                Gate::H(0),
                Gate::Cnot { control: 0, target: 2 },
                Gate::S(1),
                Gate::Perm(vec![2, 0, 1]),
                Gate::Cnot { control: 1, target: 0 },
            ],
        )
        .unwrap();
        assert_eq!(invert_images(c.images(Direction::Forward)), c.images(Direction::Inverse));
    }
}
