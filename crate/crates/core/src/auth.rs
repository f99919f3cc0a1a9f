//! Keyed authentication code families: trap code, strong trap code and
//! Clifford code.
//!
//! Every family encodes `m` message qubits with `t` tag qubits through a
//! keyed Clifford `V_k`. An attack `P` is judged by pulling it back,
//! `V_k† P V_k`, and classifying the result against the input-side
//! [`TagLayout`]. The one-time pad that normally follows `V_k` never enters
//! the verdict: conjugating a Pauli by another Pauli only changes its sign.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::clifford;
use crate::codes::{rm_css, CssCode};
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::symplectic::{
    apply_images, invert_images, invert_permutation, is_permutation, is_symplectic_images, shift_gate, DetectionClass, Direction, Gate,
    Pauli1, PauliOp, SymplecticCircuit, TagLayout,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Trap,
    StrongTrap,
    Clifford,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Trap => "trap",
            FamilyKind::StrongTrap => "strong-trap",
            FamilyKind::Clifford => "clifford",
        })
    }
}

/// Which of the three encoded blocks an input position belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockType {
    Data,
    ZeroTrap,
    PlusTrap,
}

impl BlockType {
    pub const ALL: [BlockType; 3] = [BlockType::Data, BlockType::ZeroTrap, BlockType::PlusTrap];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Debug)]
pub struct AuthFamily {
    kind: FamilyKind,
    inner: Option<Arc<CssCode>>,
    index: Option<usize>,
    m: usize,
    t: usize,
    layout: TagLayout,
    /// Key-independent part of `V_k` for trap kinds.
    block: Option<SymplecticCircuit>,
}

impl AuthFamily {
    /// `V_k = π_k (E ⊗ I^{⊗n} ⊗ H^{⊗n})`.
    pub fn trap(inner: Arc<CssCode>, index: Option<usize>) -> Self {
        let n = inner.n();
        let total = 3 * n;
        let mut gates: Vec<Gate> = inner.encoder().gates().iter().map(|g| shift_gate(g, 0, total)).collect();
        gates.extend((2 * n..3 * n).map(Gate::H));
        Self::trap_kind(FamilyKind::Trap, inner, index, gates)
    }

    /// `V_k = π_k E^{⊗3} H_{2n}`, with `H_{2n}` hitting the message input of
    /// the third block so it encodes `|+⟩`.
    pub fn strong_trap(inner: Arc<CssCode>, index: Option<usize>) -> Self {
        let n = inner.n();
        let total = 3 * n;
        let mut gates = vec![Gate::H(2 * n)];
        for b in 0..3 {
            gates.extend(inner.encoder().gates().iter().map(|g| shift_gate(g, b * n, total)));
        }
        Self::trap_kind(FamilyKind::StrongTrap, inner, index, gates)
    }

    fn trap_kind(kind: FamilyKind, inner: Arc<CssCode>, index: Option<usize>, gates: Vec<Gate>) -> Self {
        assert_eq!(inner.m(), 1, "trap kinds wrap a single-logical-qubit code");
        let n = inner.n();
        let block = SymplecticCircuit::new(3 * n, gates).expect("block gates are in range");
        Self {
            kind,
            inner: Some(inner),
            index,
            m: 1,
            t: 3 * n - 1,
            layout: TagLayout::leading_message(1, 3 * n - 1),
            block: Some(block),
        }
    }

    /// Trap code over the `index`-th punctured Reed–Muller CSS code.
    pub fn trap_rm(index: usize) -> Result<Self> {
        Ok(Self::trap(Arc::new(rm_css(index)?), Some(index)))
    }

    pub fn strong_trap_rm(index: usize) -> Result<Self> {
        Ok(Self::strong_trap(Arc::new(rm_css(index)?), Some(index)))
    }

    /// Uniformly random Clifford on `m + t` qubits.
    pub fn clifford(m: usize, t: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidConfig("Clifford code needs at least one message qubit".into()));
        }
        Ok(Self {
            kind: FamilyKind::Clifford,
            inner: None,
            index: None,
            m,
            t,
            layout: TagLayout::leading_message(m, t),
            block: None,
        })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn inner(&self) -> Option<&CssCode> {
        self.inner.as_deref()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn total_qubits(&self) -> usize {
        self.m + self.t
    }

    pub fn layout(&self) -> &TagLayout {
        &self.layout
    }

    /// Inner block length for trap kinds.
    pub fn block_len(&self) -> Option<usize> {
        self.inner.as_ref().map(|c| c.n())
    }

    pub fn is_trap_kind(&self) -> bool {
        self.kind != FamilyKind::Clifford
    }

    /// Block containing an input (pre-permutation) position.
    pub fn input_block(&self, input_pos: usize) -> Option<BlockType> {
        let n = self.block_len()?;
        BlockType::ALL.get(input_pos / n).copied()
    }

    pub fn descriptor(&self) -> FamilyDescriptor {
        FamilyDescriptor {
            kind: self.kind,
            inner_code_ref: self
                .inner
                .as_ref()
                .map(|c| match self.index {
                    Some(i) => format!("rm-css:{i}"),
                    None => format!("css:[[{},{},{}]]", c.n(), c.m(), c.distance()),
                }),
            n: self.block_len().unwrap_or(self.m + self.t),
            m: self.m,
            t: self.t,
        }
    }

    pub fn sample_key<R: Rng + ?Sized>(&self, rng: &mut R) -> Key {
        let payload = match self.kind {
            FamilyKind::Trap | FamilyKind::StrongTrap => {
                let mut perm: Vec<usize> = (0..self.total_qubits()).collect();
                perm.shuffle(rng);
                KeyPayload::permutation(perm)
            }
            FamilyKind::Clifford => {
                KeyPayload::Clifford(Arc::new(CliffordKey::new(clifford::random_symplectic_images(
                    self.total_qubits(),
                    rng,
                ))))
            }
        };
        Key { payload, otp: None }
    }

    fn check_key(&self, k: &Key) -> Result<()> {
        let ok = match (&k.payload, self.kind) {
            (KeyPayload::Permutation { perm, .. }, FamilyKind::Trap | FamilyKind::StrongTrap) => {
                perm.len() == self.total_qubits()
            }
            (KeyPayload::Clifford(c), FamilyKind::Clifford) => c.n == self.total_qubits(),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::KindMismatch {
                family: self.kind.to_string(),
                key: k.payload.kind_name().into(),
            })
        }
    }

    /// The full encoding circuit `V_k`.
    pub fn encoder(&self, k: &Key) -> Result<SymplecticCircuit> {
        self.check_key(k)?;
        match &k.payload {
            KeyPayload::Permutation { perm, .. } => {
                let block = self.block.as_ref().expect("trap kinds carry a block circuit");
                let p = SymplecticCircuit::new(self.total_qubits(), vec![Gate::Perm(perm.clone())])?;
                block.then(&p)
            }
            KeyPayload::Clifford(c) => Ok(c.circuit()),
        }
    }

    /// `V_k† P V_k`, without materialising the encoder.
    pub fn pull_back(&self, k: &Key, attack: &PauliOp) -> Result<PauliOp> {
        self.check_key(k)?;
        if attack.n() != self.total_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.total_qubits(),
                found: attack.n(),
            });
        }
        Ok(self.pull_back_unchecked(k, attack))
    }

    #[inline]
    pub(crate) fn pull_back_unchecked(&self, k: &Key, attack: &PauliOp) -> PauliOp {
        match &k.payload {
            KeyPayload::Permutation { inverse, .. } => {
                let block = self.block.as_ref().expect("trap kinds carry a block circuit");
                apply_images(block.images(Direction::Inverse), &attack.permuted(inverse))
            }
            KeyPayload::Clifford(c) => apply_images(&c.inverse, attack),
        }
    }

    pub fn verdict(&self, k: &Key, attack: &PauliOp) -> Result<DetectionClass> {
        let pulled = self.pull_back(k, attack)?;
        Ok(self.layout.classify_unchecked(&pulled))
    }

    #[inline]
    pub(crate) fn verdict_unchecked(&self, k: &Key, attack: &PauliOp) -> DetectionClass {
        self.layout.classify_unchecked(&self.pull_back_unchecked(k, attack))
    }

    /// Message-register component of the pulled-back attack.
    pub fn logical_action(&self, k: &Key, attack: &PauliOp) -> Result<PauliOp> {
        let pulled = self.pull_back(k, attack)?;
        if self.layout.classify_unchecked(&pulled) == DetectionClass::Rejected {
            return Err(Error::RejectedAttack);
        }
        Ok(pulled.restrict(self.layout.message_positions()))
    }

    /// Block type of the input position that lands on physical `pos`.
    pub fn block_type_at(&self, k: &Key, pos: usize) -> Option<BlockType> {
        match &k.payload {
            KeyPayload::Permutation { inverse, .. } => self.input_block(*inverse.get(pos)?),
            KeyPayload::Clifford(_) => None,
        }
    }
}

/// JSON family descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub kind: FamilyKind,
    pub inner_code_ref: Option<String>,
    /// Inner block length for trap kinds, `m + t` for the Clifford code.
    pub n: usize,
    pub m: usize,
    pub t: usize,
}

#[derive(Clone, Debug)]
pub enum KeyPayload {
    /// Input position `i` is sent to physical position `perm[i]`.
    Permutation { perm: Vec<usize>, inverse: Vec<usize> },
    Clifford(Arc<CliffordKey>),
}

/// Symplectic action of a sampled Clifford; gates are synthesised on demand.
#[derive(Clone, Debug)]
pub struct CliffordKey {
    n: usize,
    forward: Vec<PauliOp>,
    inverse: Vec<PauliOp>,
}

impl CliffordKey {
    pub fn new(forward: Vec<PauliOp>) -> Self {
        assert!(is_symplectic_images(&forward), "Clifford key images must be symplectic");
        let inverse = invert_images(&forward);
        Self {
            n: forward.len() / 2,
            forward,
            inverse,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn images(&self, direction: Direction) -> &[PauliOp] {
        match direction {
            Direction::Forward => &self.forward,
            Direction::Inverse => &self.inverse,
        }
    }

    pub fn circuit(&self) -> SymplecticCircuit {
        SymplecticCircuit::new(self.n, clifford::synthesize(&self.forward)).expect("synthesised gates are in range")
    }
}

impl KeyPayload {
    pub fn permutation(perm: Vec<usize>) -> Self {
        assert!(is_permutation(&perm), "key permutation must be a bijection");
        let inverse = invert_permutation(&perm);
        KeyPayload::Permutation { perm, inverse }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            KeyPayload::Permutation { .. } => "permutation",
            KeyPayload::Clifford(_) => "clifford",
        }
    }
}

/// Code key `k1`, plus the optional one-time-pad key `k2`.
#[derive(Clone, Debug)]
pub struct Key {
    pub payload: KeyPayload,
    pub otp: Option<PauliOp>,
}

impl Key {
    pub fn from_permutation(perm: Vec<usize>) -> Result<Self> {
        if !is_permutation(&perm) {
            return Err(Error::InvalidConfig(format!("{perm:?} is not a permutation")));
        }
        Ok(Key {
            payload: KeyPayload::permutation(perm),
            otp: None,
        })
    }

    pub fn identity_permutation(n: usize) -> Self {
        Key {
            payload: KeyPayload::permutation((0..n).collect()),
            otp: None,
        }
    }

    pub fn with_otp<R: Rng + ?Sized>(mut self, n: usize, rng: &mut R) -> Self {
        self.otp = Some(random_pauli(n, rng));
        self
    }

    pub fn permutation(&self) -> Option<&[usize]> {
        match &self.payload {
            KeyPayload::Permutation { perm, .. } => Some(perm),
            KeyPayload::Clifford(_) => None,
        }
    }

    pub fn descriptor(&self) -> KeyDescriptor {
        match &self.payload {
            KeyPayload::Permutation { perm, .. } => KeyDescriptor::Permutation {
                permutation: perm.clone(),
                otp: self.otp.clone(),
            },
            KeyPayload::Clifford(c) => KeyDescriptor::Clifford {
                n: c.n,
                gates: clifford::synthesize(&c.forward),
                otp: self.otp.clone(),
            },
        }
    }

    pub fn from_descriptor(d: &KeyDescriptor) -> Result<Self> {
        match d {
            KeyDescriptor::Permutation { permutation, otp } => {
                let mut k = Key::from_permutation(permutation.clone())?;
                k.otp = otp.clone();
                Ok(k)
            }
            KeyDescriptor::Clifford { n, gates, otp } => Ok(Key {
                payload: KeyPayload::Clifford(Arc::new(CliffordKey::new(
                    SymplecticCircuit::new(*n, gates.clone())?.images(Direction::Forward).to_vec(),
                ))),
                otp: otp.clone(),
            }),
        }
    }
}

/// Serialised key: permutation array or Clifford gate list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KeyDescriptor {
    Permutation {
        permutation: Vec<usize>,
        otp: Option<PauliOp>,
    },
    Clifford {
        n: usize,
        gates: Vec<Gate>,
        otp: Option<PauliOp>,
    },
}

pub fn random_pauli<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PauliOp {
    let mut x = BitVec::zeros(n);
    let mut z = BitVec::zeros(n);
    for q in 0..n {
        match rng.random_range(0..4u8) {
            1 => x.set(q, true),
            2 => {
                x.set(q, true);
                z.set(q, true)
            }
            3 => z.set(q, true),
            _ => {}
        }
    }
    PauliOp::from_parts(x, z).expect("equal lengths")
}

pub fn sample_key<R: Rng + ?Sized>(f: &AuthFamily, rng: &mut R) -> Key {
    f.sample_key(rng)
}

pub fn encoder(f: &AuthFamily, k: &Key) -> Result<SymplecticCircuit> {
    f.encoder(k)
}

pub fn verdict(f: &AuthFamily, k: &Key, attack: &PauliOp) -> Result<DetectionClass> {
    f.verdict(k, attack)
}

/// Single-qubit logical action for `m = 1` families.
pub fn logical_action(f: &AuthFamily, k: &Key, attack: &PauliOp) -> Result<Pauli1> {
    let p = f.logical_action(k, attack)?;
    if p.n() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: p.n() });
    }
    Ok(p.get(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trap_identity_key_examples() {
        let f = AuthFamily::trap_rm(1).unwrap();
        let k = Key::identity_permutation(21);
        let enc = f.encoder(&k).unwrap();

        // 1-indexed position 8 is the first |0⟩-trap input.
        let x8 = PauliOp::single(21, 7, Pauli1::X);
        let back = enc.conjugate(&x8, Direction::Inverse).unwrap();
        assert_eq!(back, x8);
        assert_eq!(f.verdict(&k, &x8).unwrap(), DetectionClass::Rejected);

        // 1-indexed position 15 is the first |+⟩-trap input.
        let x15 = PauliOp::single(21, 14, Pauli1::X);
        let back = enc.conjugate(&x15, Direction::Inverse).unwrap();
        assert_eq!(back, PauliOp::single(21, 14, Pauli1::Z));
        assert_eq!(f.verdict(&k, &x15).unwrap(), DetectionClass::AcceptedIdentity);
    }

    #[test]
    fn trap_logical_x_forgery() {
        let f = AuthFamily::trap_rm(1).unwrap();
        let k = Key::identity_permutation(21);
        let attack = PauliOp::x_on(21, (0..7).chain(14..21));
        assert_eq!(f.verdict(&k, &attack).unwrap(), DetectionClass::AcceptedForged);
        assert_eq!(logical_action(&f, &k, &attack).unwrap(), Pauli1::X);
    }

    #[test]
    fn identity_attack_accepted_everywhere() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in [
            AuthFamily::trap_rm(1).unwrap(),
            AuthFamily::strong_trap_rm(1).unwrap(),
            AuthFamily::clifford(1, 3).unwrap(),
        ] {
            for _ in 0..5 {
                let k = f.sample_key(&mut rng);
                let id = PauliOp::identity(f.total_qubits());
                assert_eq!(f.verdict(&k, &id).unwrap(), DetectionClass::AcceptedIdentity);
                assert_eq!(logical_action(&f, &k, &id).unwrap(), Pauli1::I);
            }
        }
    }

    #[test]
    fn strong_trap_rejects_weight_one_x() {
        let f = AuthFamily::strong_trap_rm(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let k = f.sample_key(&mut rng);
            for q in 0..21 {
                let a = PauliOp::single(21, q, Pauli1::X);
                assert_eq!(f.verdict(&k, &a).unwrap(), DetectionClass::Rejected);
            }
        }
    }

    #[test]
    fn keys_are_reproducible_and_seed_dependent() {
        let f = AuthFamily::trap_rm(1).unwrap();
        let a = f.sample_key(&mut ChaCha8Rng::seed_from_u64(1));
        let b = f.sample_key(&mut ChaCha8Rng::seed_from_u64(1));
        let c = f.sample_key(&mut ChaCha8Rng::seed_from_u64(2));
        assert_eq!(a.permutation(), b.permutation());
        assert_ne!(a.permutation(), c.permutation());
        assert_eq!(a.permutation().unwrap().len(), 21);
    }

    #[test]
    fn clifford_key_is_symplectic() {
        let f = AuthFamily::clifford(1, 3).unwrap();
        let k = f.sample_key(&mut ChaCha8Rng::seed_from_u64(9));
        let enc = f.encoder(&k).unwrap();
        assert_eq!(enc.n(), 4);
        assert!(enc.is_symplectic());
    }

    #[test]
    fn kind_mismatch_and_rejected_logical_action() {
        let trap = AuthFamily::trap_rm(1).unwrap();
        let cliff = AuthFamily::clifford(1, 20).unwrap();
        let ck = cliff.sample_key(&mut ChaCha8Rng::seed_from_u64(0));
        assert!(matches!(trap.encoder(&ck), Err(Error::KindMismatch { .. })));
        let k = Key::identity_permutation(21);
        let a = PauliOp::single(21, 7, Pauli1::X);
        assert!(matches!(trap.logical_action(&k, &a), Err(Error::RejectedAttack)));
        assert!(matches!(trap.verdict(&k, &PauliOp::identity(20)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn key_descriptor_roundtrip() {
        let f = AuthFamily::clifford(1, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let k = f.sample_key(&mut rng).with_otp(3, &mut rng);
        let json = serde_json::to_string(&k.descriptor()).unwrap();
        let back = Key::from_descriptor(&serde_json::from_str(&json).unwrap()).unwrap();
        let a = random_pauli(3, &mut rng);
        assert_eq!(f.pull_back(&k, &a).unwrap(), f.pull_back(&back, &a).unwrap());
        assert_eq!(back.otp, k.otp);
    }
}
