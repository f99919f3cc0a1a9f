//! Test-side oracles built without the library's symplectic machinery.
#![allow(dead_code)]

use num_complex::Complex64;
use qauth::auth::{AuthFamily, FamilyKind, Key};
use qauth::codes::CssCode;
use qauth::{DetectionClass, Gate, Pauli1, PauliOp};
use rand::Rng;

// ---------------------------------------------------------------------------
// Dense matrices

#[derive(Clone, Debug)]
pub struct Mat {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl Mat {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn at(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        let d = self.dim;
        let mut out = Mat::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self.at(r, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..d {
                    out.data[r * d + c] += a * other.at(k, c);
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Mat {
        let d = self.dim;
        let mut out = Mat::zeros(d);
        for r in 0..d {
            for c in 0..d {
                out.data[c * d + r] = self.at(r, c).conj();
            }
        }
        out
    }

    pub fn add_assign(&mut self, other: &Mat) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.data.iter().all(|z| z.norm() < tol)
    }

    /// `self = c * other` for some unit-modulus `c`.
    pub fn equals_up_to_phase(&self, other: &Mat, tol: f64) -> bool {
        let Some(i) = other.data.iter().position(|z| z.norm() > 0.5) else {
            return false;
        };
        let c = self.data[i] / other.data[i];
        if (c.norm() - 1.0).abs() > tol {
            return false;
        }
        self.data.iter().zip(&other.data).all(|(a, b)| (a - c * b).norm() < tol)
    }
}

fn single_pauli(p: Pauli1) -> [[Complex64; 2]; 2] {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match p {
        Pauli1::I => [[l, o], [o, l]],
        Pauli1::X => [[o, l], [l, o]],
        Pauli1::Y => [[o, -i], [i, o]],
        Pauli1::Z => [[l, o], [o, -l]],
    }
}

/// Dense matrix of a Pauli; qubit `q` is bit `q` of the basis index.
pub fn pauli_matrix(p: &PauliOp) -> Mat {
    let n = p.n();
    let dim = 1 << n;
    let mut m = Mat::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            let mut v = Complex64::new(1.0, 0.0);
            for q in 0..n {
                v *= single_pauli(p.get(q))[(r >> q) & 1][(c >> q) & 1];
            }
            m.data[r * dim + c] = v;
        }
    }
    m
}

/// Dense unitary of one gate.
pub fn gate_matrix(n: usize, g: &Gate) -> Mat {
    let dim = 1 << n;
    let mut m = Mat::zeros(dim);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for b in 0..dim {
        match g {
            Gate::H(q) => {
                let bit = (b >> q) & 1;
                let flipped = b ^ (1 << q);
                // Column b: H|0> = (|0> + |1>)/√2, H|1> = (|0> - |1>)/√2.
                m.data[b * dim + b] += Complex64::new(if bit == 0 { h } else { -h }, 0.0);
                m.data[flipped * dim + b] += Complex64::new(h, 0.0);
            }
            Gate::S(q) => {
                let phase = if (b >> q) & 1 == 1 { Complex64::new(0.0, 1.0) } else { Complex64::new(1.0, 0.0) };
                m.data[b * dim + b] = phase;
            }
            Gate::Cnot { control, target } => {
                let out = if (b >> control) & 1 == 1 { b ^ (1 << target) } else { b };
                m.data[out * dim + b] = Complex64::new(1.0, 0.0);
            }
            Gate::Perm(perm) => {
                let mut out = 0;
                for (i, &to) in perm.iter().enumerate() {
                    out |= ((b >> i) & 1) << to;
                }
                m.data[out * dim + b] = Complex64::new(1.0, 0.0);
            }
        }
    }
    m
}

/// `G_k ... G_1` for gates applied in list order.
pub fn circuit_matrix(n: usize, gates: &[Gate]) -> Mat {
    gates
        .iter()
        .fold(Mat::identity(1 << n), |acc, g| gate_matrix(n, g).mul(&acc))
}

pub fn random_gate<R: Rng>(n: usize, rng: &mut R) -> Gate {
    match rng.random_range(0..if n > 1 { 4 } else { 2 }) {
        0 => Gate::H(rng.random_range(0..n)),
        1 => Gate::S(rng.random_range(0..n)),
        2 => {
            let control = rng.random_range(0..n);
            let mut target = rng.random_range(0..n - 1);
            if target >= control {
                target += 1;
            }
            Gate::Cnot { control, target }
        }
        _ => {
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.random_range(0..=i));
            }
            Gate::Perm(perm)
        }
    }
}

pub fn random_pauli<R: Rng>(n: usize, rng: &mut R) -> PauliOp {
    let mut p = PauliOp::identity(n);
    for q in 0..n {
        p.set(q, [Pauli1::I, Pauli1::X, Pauli1::Y, Pauli1::Z][rng.random_range(0..4)]);
    }
    p
}

pub fn all_paulis(n: usize) -> Vec<PauliOp> {
    (0..1usize << (2 * n))
        .map(|v| {
            let mut p = PauliOp::identity(n);
            for q in 0..n {
                p.set(q, [Pauli1::I, Pauli1::X, Pauli1::Y, Pauli1::Z][(v >> (2 * q)) & 3]);
            }
            p
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Code membership by parity checks

/// `v ∈ C1` iff `v` is orthogonal to every row of a generator of `C1^⊥ = C2`.
fn in_c1(code: &CssCode, v: &[bool]) -> bool {
    code.c2().generator().iter().all(|h| {
        v.iter().enumerate().filter(|(i, &b)| b && h.get(*i)).count() % 2 == 0
    })
}

/// `v ∈ C2` iff orthogonal to a spanning set of `C2^⊥ = C1`.
fn in_c2(code: &CssCode, v: &[bool]) -> bool {
    code.c1().generator().iter().all(|h| {
        v.iter().enumerate().filter(|(i, &b)| b && h.get(*i)).count() % 2 == 0
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BlockCheck {
    Detected,
    /// Undetected, with the logical X and Z components it carries.
    Passes { logical_x: bool, logical_z: bool },
}

fn encoded_block(code: &CssCode, xs: &[bool], zs: &[bool]) -> BlockCheck {
    if !in_c1(code, xs) || !in_c1(code, zs) {
        return BlockCheck::Detected;
    }
    BlockCheck::Passes {
        logical_x: !in_c2(code, xs),
        logical_z: !in_c2(code, zs),
    }
}

/// Verdict and message action predicted from the block structure alone:
/// which input each attacked position came from, and code membership of
/// the per-block X and Z patterns.
pub fn block_oracle(f: &AuthFamily, key: &Key, attack: &PauliOp) -> (DetectionClass, Option<Pauli1>) {
    let code = f.inner().expect("trap kind");
    let n = code.n();
    let perm = key.permutation().expect("permutation key");
    let block = |b: usize| -> (Vec<bool>, Vec<bool>) {
        (0..n)
            .map(|i| {
                let (x, z) = attack.get(perm[b * n + i]).bits();
                (x, z)
            })
            .unzip()
    };
    let (dx, dz) = block(0);
    let (zx, zz) = block(1);
    let (px, pz) = block(2);
    let data = encoded_block(code, &dx, &dz);
    let zero_ok;
    let plus_ok;
    match f.kind() {
        FamilyKind::Trap => {
            zero_ok = zx.iter().all(|b| !b);
            plus_ok = pz.iter().all(|b| !b);
        }
        FamilyKind::StrongTrap => {
            zero_ok = matches!(encoded_block(code, &zx, &zz), BlockCheck::Passes { logical_x: false, .. });
            plus_ok = matches!(encoded_block(code, &px, &pz), BlockCheck::Passes { logical_z: false, .. });
        }
        FamilyKind::Clifford => unreachable!(),
    }
    match data {
        BlockCheck::Passes { logical_x, logical_z } if zero_ok && plus_ok => {
            let p = Pauli1::from_bits(logical_x, logical_z);
            let class = if p == Pauli1::I {
                DetectionClass::AcceptedIdentity
            } else {
                DetectionClass::AcceptedForged
            };
            (class, Some(p))
        }
        _ => (DetectionClass::Rejected, None),
    }
}

// ---------------------------------------------------------------------------
// Steane stabilizer group by brute force

/// All 64 elements of the stabilizer group of the [[7,1,3]] member, as
/// `X(a) Z(b)` for `a, b` in the even-weight words of punctured `R(1, 3)`.
pub fn steane_stabilizers() -> Vec<PauliOp> {
    let words: Vec<u64> = span(&rm_rows(1, 3))
        .into_iter()
        .map(|w| w & 0x7f)
        .filter(|w| w.count_ones() % 2 == 0)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    assert_eq!(words.len(), 8);
    let mut out = Vec::with_capacity(64);
    for &a in &words {
        for &b in &words {
            let mut p = PauliOp::identity(7);
            for q in 0..7 {
                p.set(q, Pauli1::from_bits(a >> q & 1 == 1, b >> q & 1 == 1));
            }
            out.push(p);
        }
    }
    out
}

/// Commutes with every element of `group`.
pub fn in_normalizer(p: &PauliOp, group: &[PauliOp]) -> bool {
    group.iter().all(|s| !p.sip(s).unwrap())
}

// ---------------------------------------------------------------------------
// Reed–Muller codewords from monomial evaluations

/// Generator rows of `R(r, a)` as bit masks over the `2^a` points, from
/// products of coordinate functions.
pub fn rm_rows(r: usize, a: usize) -> Vec<u64> {
    assert!(a <= 6);
    let n = 1usize << a;
    let mut rows = Vec::new();
    for subset in 0u32..1 << a {
        if subset.count_ones() as usize > r {
            continue;
        }
        let mut row = 0u64;
        for point in 0..n {
            let value = (0..a).filter(|i| (subset >> i) & 1 == 1).all(|i| (point >> i) & 1 == 1);
            if value {
                row |= 1 << point;
            }
        }
        rows.push(row);
    }
    rows
}

/// Every codeword spanned by `rows`, duplicates included.
pub fn span(rows: &[u64]) -> Vec<u64> {
    let k = rows.len();
    let mut out = Vec::with_capacity(1 << k);
    let mut word = 0u64;
    out.push(word);
    for i in 1u64..1 << k {
        // Gray code: flip the lowest set bit position of i.
        word ^= rows[i.trailing_zeros() as usize];
        out.push(word);
    }
    out
}

pub mod schema;
