//! Word-packed GF(2) vectors and the handful of row-reduction routines the
//! rest of the crate is built on.
//!
//! Bit `i` of a [`BitVec`] lives in bit `i % 64` of word `i / 64`. Bits past
//! `len` are always zero; every mutating method preserves that.

use std::fmt;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: vec![!0; len.div_ceil(WORD)],
        };
        v.mask_tail();
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a string of `0`/`1` characters, index 0 first.
    pub fn from_bit_str(s: &str) -> Option<Self> {
        let bits: Option<Vec<bool>> = s
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect();
        bits.map(|b| Self::from_bools(&b))
    }

    /// Builds a vector from the low `len` bits of `value` (`len <= 64`).
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= WORD);
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = value;
            v.mask_tail();
        }
        v
    }

    pub fn with_ones(len: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for p in positions {
            v.set(p, true);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitVec) -> BitVec {
        debug_assert_eq!(self.len, other.len);
        BitVec {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn or(&self, other: &BitVec) -> BitVec {
        debug_assert_eq!(self.len, other.len);
        BitVec {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    /// `self & !other`.
    pub fn and_not(&self, other: &BitVec) -> BitVec {
        debug_assert_eq!(self.len, other.len);
        BitVec {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
        }
    }

    #[inline]
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Inner product over GF(2).
    #[inline]
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones();
        }
        acc & 1 == 1
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + t)
            })
        })
    }

    /// Copy of `self` with bit `i` moved to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> BitVec {
        debug_assert_eq!(perm.len(), self.len);
        let mut out = BitVec::zeros(self.len);
        for i in self.iter_ones() {
            out.set(perm[i], true);
        }
        out
    }

    /// Bits `range` as a new vector.
    pub fn slice(&self, start: usize, end: usize) -> BitVec {
        assert!(start <= end && end <= self.len);
        let mut out = BitVec::zeros(end - start);
        for i in self.iter_ones().filter(|&i| i >= start && i < end) {
            out.set(i - start, true);
        }
        out
    }

    /// Drops the last bit.
    pub fn truncated(&self, len: usize) -> BitVec {
        self.slice(0, len)
    }

    /// Little-endian byte hex: byte `j` carries bits `8j..8j+8`.
    pub fn to_hex(&self) -> String {
        let n_bytes = self.len.div_ceil(8);
        let mut bytes = Vec::with_capacity(n_bytes);
        for j in 0..n_bytes {
            bytes.push((self.words[j / 8] >> ((j % 8) * 8)) as u8);
        }
        hex::encode(bytes)
    }

    pub fn from_hex(len: usize, s: &str) -> Result<BitVec, String> {
        let bytes = hex::decode(s).map_err(|e| e.to_string())?;
        if bytes.len() != len.div_ceil(8) {
            return Err(format!(
                "hex string carries {} bytes, expected {} for {len} bits",
                bytes.len(),
                len.div_ceil(8)
            ));
        }
        let mut v = BitVec::zeros(len);
        for (j, b) in bytes.iter().enumerate() {
            v.words[j / 8] |= (*b as u64) << ((j % 8) * 8);
        }
        let before = v.clone();
        v.mask_tail();
        if v != before {
            return Err("hex string sets bits beyond the vector length".into());
        }
        Ok(v)
    }

    fn mask_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec(")?;
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Reduced row echelon form of a set of equal-length rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<BitVec>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; zero result means `v` lies in the span.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut r = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if r.get(p) {
                r.xor_assign(row);
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }
}

/// Gauss–Jordan elimination; zero rows are dropped and pivots come out sorted.
pub fn rref(rows: &[BitVec], len: usize) -> Echelon {
    let mut m: Vec<BitVec> = rows.to_vec();
    for r in &m {
        assert_eq!(r.len(), len, "row length mismatch");
    }
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..len {
        let Some(found) = (top..m.len()).find(|&r| m[r].get(col)) else {
            continue;
        };
        m.swap(top, found);
        let pivot_row = m[top].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != top && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(col);
        top += 1;
        if top == m.len() {
            break;
        }
    }
    m.truncate(top);
    Echelon { rows: m, pivots }
}

/// Basis of `{v : v·r = 0 for every row r}`.
pub fn null_space(rows: &[BitVec], len: usize) -> Vec<BitVec> {
    let e = rref(rows, len);
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; len];
        for &p in &e.pivots {
            s[p] = true;
        }
        s
    };
    let mut basis = Vec::with_capacity(len - e.rank());
    for free in (0..len).filter(|&c| !pivot_set[c]) {
        let mut v = BitVec::zeros(len);
        v.set(free, true);
        for (row, &p) in e.rows.iter().zip(&e.pivots) {
            if row.get(free) {
                v.set(p, true);
            }
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_bits_stay_clear() {
        let v = BitVec::ones(70);
        assert_eq!(v.weight(), 70);
        assert_eq!(v.words()[1], (1u64 << 6) - 1);
    }

    #[test]
    fn hex_is_little_endian_per_byte() {
        let v = BitVec::from_bit_str("1000000001").unwrap();
        assert_eq!(v.to_hex(), "0102");
        assert_eq!(BitVec::from_hex(10, "0102").unwrap(), v);
        assert!(BitVec::from_hex(10, "0104").is_err());
        assert!(BitVec::from_hex(10, "01").is_err());
    }

    #[test]
    fn iter_ones_across_words() {
        let v = BitVec::with_ones(130, [0, 63, 64, 129]);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(v.first_one(), Some(0));
    }

    #[test]
    fn null_space_is_orthogonal() {
        let rows = vec![
            BitVec::from_bit_str("1101000").unwrap(),
            BitVec::from_bit_str("0110100").unwrap(),
            BitVec::from_bit_str("0011010").unwrap(),
        ];
        let ns = null_space(&rows, 7);
        assert_eq!(ns.len(), 4);
        for a in &ns {
            for r in &rows {
                assert!(!a.dot(r));
            }
        }
        assert_eq!(rref(&ns, 7).rank(), 4);
    }

    #[test]
    fn rref_drops_dependent_rows() {
        let a = BitVec::from_bit_str("1100").unwrap();
        let b = BitVec::from_bit_str("0110").unwrap();
        let e = rref(&[a.clone(), b.clone(), a.xor(&b)], 4);
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&a.xor(&b)));
        assert!(!e.contains(&BitVec::from_bit_str("0001").unwrap()));
    }
}
