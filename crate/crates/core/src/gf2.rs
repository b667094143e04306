//! Bit-packed vectors and matrices over GF(2).
//!
//! A [`BitVector`] stores `n` bits in 64-bit words, coordinate `i` at bit
//! `i % 64` of word `i / 64`. Padding bits past `n` are always zero, so
//! word-wise equality, hashing and popcounts need no masking.
//!
//! A [`ParityMatrix`] holds `k` parity rows in one flat word buffer. Applying
//! it to `x` produces the `k` parities `<row_i, x>`, which is the linear
//! sketch of `x`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};

/// Largest basis dimension [`span_enumerate`] will expand.
pub const MAX_SPAN_DIM: usize = 20;

/// Serialization format version for [`ParityMatrix`].
pub const MATRIX_FORMAT_VERSION: u32 = 1;

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    n: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for BitVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitVector({})", self.to_bit_string())
    }
}

impl BitVector {
    pub fn zeros(n: usize) -> Self {
        BitVector {
            n,
            words: vec![0; words_for(n)],
        }
    }

    pub fn ones(n: usize) -> Self {
        let mut v = BitVector {
            n,
            words: vec![u64::MAX; words_for(n)],
        };
        v.clear_padding();
        v
    }

    /// Vector with the listed coordinates set. Repeated indices are set once.
    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self> {
        let mut v = Self::zeros(n);
        for &i in indices {
            if i >= n {
                return Err(Error::param(format!("index {i} out of range for n = {n}")));
            }
            v.set(i, true);
        }
        Ok(v)
    }

    /// Low `n` bits of `value`, coordinate `i` taken from bit `i`.
    pub fn from_u64(n: usize, value: u64) -> Self {
        assert!(n <= 64, "from_u64 needs n <= 64");
        let mut v = Self::zeros(n);
        if n > 0 {
            v.words[0] = value;
            v.clear_padding();
        }
        v
    }

    pub(crate) fn from_words(n: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(n));
        let mut v = BitVector { n, words };
        v.clear_padding();
        v
    }

    /// Callers must keep the padding bits beyond `n` zero.
    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    /// Parses `"0110..."` where character `i` is coordinate `i`.
    pub fn from_bit_string(s: &str) -> Result<Self> {
        let mut v = Self::zeros(s.len());
        for (i, c) in s.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => v.set(i, true),
                _ => return Err(Error::Parse(format!("invalid bit character {:?}", c as char))),
            }
        }
        Ok(v)
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.n).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }

    /// Hex encoding of the bytes holding the bits, bits little-endian within each byte.
    pub fn to_hex(&self) -> String {
        let nbytes = self.n.div_ceil(8);
        let bytes: Vec<u8> = (0..nbytes)
            .map(|b| (self.words[b / 8] >> ((b % 8) * 8)) as u8)
            .collect();
        hex::encode(bytes)
    }

    /// Inverse of [`to_hex`](Self::to_hex). Rejects wrong lengths and set padding bits.
    pub fn from_hex(n: usize, s: &str) -> Result<Self> {
        let bytes = hex::decode(s).map_err(|e| Error::Parse(format!("bad hex row: {e}")))?;
        if bytes.len() != n.div_ceil(8) {
            return Err(Error::Parse(format!(
                "hex row has {} bytes, expected {} for n = {n}",
                bytes.len(),
                n.div_ceil(8)
            )));
        }
        let mut words = vec![0u64; words_for(n)];
        for (b, byte) in bytes.iter().enumerate() {
            words[b / 8] |= (*byte as u64) << ((b % 8) * 8);
        }
        let v = BitVector { n, words };
        let mut masked = v.clone();
        masked.clear_padding();
        if masked != v {
            return Err(Error::Parse("hex row has bits set beyond n".into()));
        }
        Ok(v)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.n, "bit index {i} out of range for n = {}", self.n);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.n, "bit index {i} out of range for n = {}", self.n);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.n, "bit index {i} out of range for n = {}", self.n);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// `self ^= other`; panics on length mismatch.
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.n, other.n, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// `self |= other`; panics on length mismatch.
    pub fn or_assign(&mut self, other: &BitVector) {
        assert_eq!(self.n, other.n, "or of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        check_dim(self.n, other.n)?;
        let mut out = self.clone();
        out.xor_assign(other);
        Ok(out)
    }

    /// Parity of `popcount(self AND other)`; lengths must already match.
    #[inline]
    pub(crate) fn dot(&self, other: &BitVector) -> bool {
        dot_words(&self.words, &other.words)
    }

    /// True if `self AND other` is nonzero; lengths must already match.
    #[inline]
    pub fn intersects(&self, other: &BitVector) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }

    /// The vector as an integer, coordinate `i` at bit `i`. Requires `n <= 64`.
    pub fn to_u64(&self) -> u64 {
        assert!(self.n <= 64, "to_u64 needs n <= 64");
        self.words.first().copied().unwrap_or(0)
    }

    /// Bits `start..start + len` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        assert!(start + len <= self.n);
        let mut out = BitVector::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
    }

    /// True if any bit in `start..start + len` is set.
    pub fn any_in(&self, start: usize, len: usize) -> bool {
        let end = start + len;
        debug_assert!(end <= self.n);
        let mut i = start;
        while i < end {
            let w = i / 64;
            let lo = i % 64;
            let hi = (end - w * 64).min(64);
            let width = hi - lo;
            let mask = if width == 64 { u64::MAX } else { ((1u64 << width) - 1) << lo };
            if self.words[w] & mask != 0 {
                return true;
            }
            i = w * 64 + hi;
        }
        false
    }

    /// Number of set bits in `start..start + len`.
    pub fn count_in(&self, start: usize, len: usize) -> usize {
        let end = start + len;
        debug_assert!(end <= self.n);
        let mut count = 0;
        let mut i = start;
        while i < end {
            let w = i / 64;
            let lo = i % 64;
            let hi = (end - w * 64).min(64);
            let width = hi - lo;
            let mask = if width == 64 { u64::MAX } else { ((1u64 << width) - 1) << lo };
            count += (self.words[w] & mask).count_ones() as usize;
            i = w * 64 + hi;
        }
        count
    }

    fn clear_padding(&mut self) {
        let rem = self.n % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

#[inline]
pub(crate) fn dot_words(a: &[u64], b: &[u64]) -> bool {
    let mut acc = 0u64;
    for (x, y) in a.iter().zip(b) {
        acc ^= x & y;
    }
    acc.count_ones() & 1 == 1
}

/// `chi_S(x)`: parity of the coordinates of `x` selected by `s`.
pub fn parity_eval(s: &BitVector, x: &BitVector) -> Result<bool> {
    check_dim(s.len(), x.len())?;
    Ok(s.dot(x))
}

/// `k` parity rows over `n` coordinates, stored row-major in one buffer.
#[derive(Clone, PartialEq, Eq)]
pub struct ParityMatrix {
    n: usize,
    k: usize,
    row_words: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for ParityMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ParityMatrix")
            .field("n", &self.n)
            .field("k", &self.k)
            .finish()
    }
}

impl ParityMatrix {
    pub fn new(n: usize) -> Self {
        ParityMatrix {
            n,
            k: 0,
            row_words: words_for(n),
            data: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n);
        for i in 0..n {
            let mut row = BitVector::zeros(n);
            row.set(i, true);
            m.push_row(&row).expect("identity row length");
        }
        m
    }

    pub fn from_rows(n: usize, rows: &[BitVector]) -> Result<Self> {
        let mut m = Self::new(n);
        for r in rows {
            m.push_row(r)?;
        }
        Ok(m)
    }

    pub fn push_row(&mut self, row: &BitVector) -> Result<()> {
        check_dim(self.n, row.len())?;
        self.data.extend_from_slice(row.words());
        self.k += 1;
        Ok(())
    }

    /// Appends a row given as packed words; padding bits are cleared.
    pub(crate) fn push_row_words(&mut self, words: &[u64]) {
        debug_assert_eq!(words.len(), self.row_words);
        let start = self.data.len();
        self.data.extend_from_slice(words);
        let rem = self.n % 64;
        if rem != 0 && self.row_words > 0 {
            self.data[start + self.row_words - 1] &= (1u64 << rem) - 1;
        }
        self.k += 1;
    }

    pub(crate) fn push_zero_rows(&mut self, count: usize) {
        self.data.resize(self.data.len() + count * self.row_words, 0);
        self.k += count;
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.row_words..(i + 1) * self.row_words]
    }

    pub fn row(&self, i: usize) -> BitVector {
        BitVector::from_words(self.n, self.row_words(i).to_vec())
    }

    pub fn rows(&self) -> impl Iterator<Item = BitVector> + '_ {
        (0..self.k).map(move |i| self.row(i))
    }

    /// The sketch of `x`: bit `i` is `chi_{row_i}(x)`.
    pub fn apply(&self, x: &BitVector) -> Result<BitVector> {
        check_dim(self.n, x.len())?;
        let mut out = BitVector::zeros(self.k);
        for i in 0..self.k {
            if dot_words(self.row_words(i), x.words()) {
                out.words[i / 64] |= 1u64 << (i % 64);
            }
        }
        Ok(out)
    }

    pub(crate) fn to_wire(&self) -> MatrixWire {
        MatrixWire {
            version: MATRIX_FORMAT_VERSION,
            n: self.n,
            k: self.k,
            rows: self.rows().map(|r| r.to_hex()).collect(),
        }
    }

    pub(crate) fn from_wire(w: MatrixWire) -> Result<Self> {
        if w.version != MATRIX_FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported matrix format version {}",
                w.version
            )));
        }
        if w.rows.len() != w.k {
            return Err(Error::Parse(format!(
                "matrix declares k = {} but lists {} rows",
                w.k,
                w.rows.len()
            )));
        }
        let mut m = Self::new(w.n);
        for (i, r) in w.rows.iter().enumerate() {
            let row = BitVector::from_hex(w.n, r)
                .map_err(|e| Error::Parse(format!("row {i}: {e}")))?;
            m.push_row(&row)?;
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_wire()).expect("matrix serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: MatrixWire = serde_json::from_str(s)?;
        Self::from_wire(wire)
    }
}

/// `sketch_apply(M, x)`.
pub fn sketch_apply(m: &ParityMatrix, x: &BitVector) -> Result<BitVector> {
    m.apply(x)
}

#[derive(Serialize, Deserialize)]
pub(crate) struct MatrixWire {
    pub version: u32,
    pub n: usize,
    pub k: usize,
    pub rows: Vec<String>,
}

impl Serialize for ParityMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_wire().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ParityMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = MatrixWire::deserialize(d)?;
        ParityMatrix::from_wire(wire).map_err(serde::de::Error::custom)
    }
}

/// Rank over GF(2) by Gaussian elimination.
pub fn gf2_rank(vectors: &[BitVector]) -> Result<usize> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    let n = first.len();
    for v in vectors {
        check_dim(n, v.len())?;
    }
    let mut rows: Vec<Vec<u64>> = vectors.iter().map(|v| v.words().to_vec()).collect();
    let mut rank = 0;
    for col in 0..n {
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] & b != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[w] & b != 0 {
                for (a, p) in row.iter_mut().zip(&pivot_row) {
                    *a ^= p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    Ok(rank)
}

/// Linearly independent vectors spanning a subspace of GF(2)^n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BasisWire")]
pub struct SubspaceBasis {
    n: usize,
    #[serde(with = "hex_rows")]
    basis: Vec<BitVector>,
}

impl SubspaceBasis {
    pub fn new(n: usize, basis: Vec<BitVector>) -> Result<Self> {
        for v in &basis {
            check_dim(n, v.len())?;
        }
        if gf2_rank(&basis)? != basis.len() {
            return Err(Error::param("basis vectors are linearly dependent"));
        }
        Ok(SubspaceBasis { n, basis })
    }

    pub fn empty(n: usize) -> Self {
        SubspaceBasis {
            n,
            basis: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn vectors(&self) -> &[BitVector] {
        &self.basis
    }
}

#[derive(Deserialize)]
struct BasisWire {
    n: usize,
    #[serde(with = "hex_rows")]
    basis: Vec<BitVector>,
}

impl TryFrom<BasisWire> for SubspaceBasis {
    type Error = Error;

    fn try_from(w: BasisWire) -> Result<Self> {
        SubspaceBasis::new(w.n, w.basis)
    }
}

/// Every XOR combination of the basis, zero first, in Gray-code order:
/// entry `g` is the combination selected by the bits of `g ^ (g >> 1)`.
pub fn span_enumerate(basis: &SubspaceBasis) -> Result<Vec<BitVector>> {
    let d = basis.dim();
    if d > MAX_SPAN_DIM {
        return Err(Error::capacity("span dimension", d as u64, MAX_SPAN_DIM as u64));
    }
    let mut out = Vec::with_capacity(1 << d);
    let mut cur = BitVector::zeros(basis.n());
    out.push(cur.clone());
    for g in 1usize..(1 << d) {
        cur.xor_assign(&basis.vectors()[g.trailing_zeros() as usize]);
        out.push(cur.clone());
    }
    Ok(out)
}

pub(crate) mod hex_rows {
    use super::BitVector;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Row {
        n: usize,
        hex: String,
    }

    pub fn serialize<S: Serializer>(v: &[BitVector], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|r| Row {
                n: r.len(),
                hex: r.to_hex(),
            })
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BitVector>, D::Error> {
        Vec::<Row>::deserialize(d)?
            .into_iter()
            .map(|r| BitVector::from_hex(r.n, &r.hex).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bv(s: &str) -> BitVector {
        BitVector::from_bit_string(s).unwrap()
    }

    #[test]
    fn parity_examples() {
        assert!(!parity_eval(&bv("0000"), &bv("1011")).unwrap());
        assert!(parity_eval(&bv("1100"), &bv("1000")).unwrap());
        assert!(!parity_eval(&bv("1110"), &bv("1010")).unwrap());
        assert!(matches!(
            parity_eval(&bv("110"), &bv("1000")),
            Err(Error::DimensionMismatch { expected: 3, found: 4 })
        ));
    }

    #[test]
    fn apply_empty_and_identity() {
        let x = bv("1011001110");
        let empty = ParityMatrix::new(10);
        assert_eq!(sketch_apply(&empty, &x).unwrap().len(), 0);
        assert_eq!(sketch_apply(&ParityMatrix::identity(10), &x).unwrap(), x);
        assert!(sketch_apply(&empty, &bv("1")).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(gf2_rank(&[]).unwrap(), 0);
        assert_eq!(gf2_rank(&[bv("100"), bv("010"), bv("110")]).unwrap(), 2);
        let id: Vec<_> = ParityMatrix::identity(70).rows().collect();
        assert_eq!(gf2_rank(&id).unwrap(), 70);
        assert!(gf2_rank(&[bv("10"), bv("100")]).is_err());
    }

    #[test]
    fn span_examples() {
        let zero = span_enumerate(&SubspaceBasis::empty(3)).unwrap();
        assert_eq!(zero, vec![bv("000")]);
        let b = SubspaceBasis::new(3, vec![bv("100"), bv("010")]).unwrap();
        let mut got: Vec<String> = span_enumerate(&b)
            .unwrap()
            .iter()
            .map(|v| v.to_bit_string())
            .collect();
        got.sort();
        assert_eq!(got, vec!["000", "010", "100", "110"]);
        assert!(SubspaceBasis::new(3, vec![bv("110"), bv("110")]).is_err());
    }

    #[test]
    fn span_guard() {
        let rows: Vec<_> = ParityMatrix::identity(21).rows().collect();
        let b = SubspaceBasis::new(21, rows).unwrap();
        assert!(matches!(span_enumerate(&b), Err(Error::Capacity { .. })));
    }

    #[test]
    fn linearity_exhaustive_small_n() {
        let n = 6;
        let rows: Vec<_> = (0..9u64)
            .map(|i| BitVector::from_u64(n, i.wrapping_mul(0x9e37_79b9) >> 3))
            .collect();
        let m = ParityMatrix::from_rows(n, &rows).unwrap();
        for a in 0..64u64 {
            for b in 0..64u64 {
                let (x, y) = (BitVector::from_u64(n, a), BitVector::from_u64(n, b));
                let lhs = m.apply(&x.xor(&y).unwrap()).unwrap();
                let rhs = m.apply(&x).unwrap().xor(&m.apply(&y).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn hex_layout_is_lsb_first() {
        let v = BitVector::from_indices(12, &[0, 9]).unwrap();
        assert_eq!(v.to_hex(), "0102");
        assert_eq!(BitVector::from_hex(12, "0102").unwrap(), v);
        assert!(BitVector::from_hex(12, "0110").is_err(), "padding bit 12 set");
        assert!(BitVector::from_hex(12, "01").is_err());
    }

    #[test]
    fn range_helpers() {
        let v = BitVector::from_indices(200, &[3, 63, 64, 130, 199]).unwrap();
        assert!(v.any_in(60, 5));
        assert!(!v.any_in(65, 60));
        assert_eq!(v.count_in(0, 200), 5);
        assert_eq!(v.count_in(63, 2), 2);
        assert_eq!(v.count_in(131, 68), 0);
        assert_eq!(v.slice(62, 4).to_bit_string(), "0110");
    }

    fn arb_vec(n: usize) -> impl Strategy<Value = BitVector> {
        proptest::collection::vec(any::<bool>(), n).prop_map(move |bits| {
            let idx: Vec<usize> = bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i).collect();
            BitVector::from_indices(n, &idx).unwrap()
        })
    }

    fn arb_matrix_and_pair() -> impl Strategy<Value = (ParityMatrix, BitVector, BitVector)> {
        (1usize..150, 0usize..40).prop_flat_map(|(n, k)| {
            (
                proptest::collection::vec(arb_vec(n), k),
                arb_vec(n),
                arb_vec(n),
            )
                .prop_map(move |(rows, x, y)| (ParityMatrix::from_rows(n, &rows).unwrap(), x, y))
        })
    }

    proptest! {
        #[test]
        fn sketch_is_linear((m, x, y) in arb_matrix_and_pair()) {
            let lhs = m.apply(&x.xor(&y).unwrap()).unwrap();
            let rhs = m.apply(&x).unwrap().xor(&m.apply(&y).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn matrix_json_round_trip((m, _x, _y) in arb_matrix_and_pair()) {
            let back = ParityMatrix::from_json(&m.to_json()).unwrap();
            prop_assert_eq!(back, m);
        }

        #[test]
        fn span_closed_and_full_rank(seed in any::<u64>(), d in 0usize..5) {
            let n = 8;
            let mut basis = Vec::new();
            let mut s = seed;
            while basis.len() < d {
                s = crate::hash::splitmix64(s);
                let cand = BitVector::from_u64(n, s);
                let mut trial = basis.clone();
                trial.push(cand);
                if gf2_rank(&trial).unwrap() == trial.len() {
                    basis = trial;
                }
            }
            let b = SubspaceBasis::new(n, basis).unwrap();
            let span = span_enumerate(&b).unwrap();
            prop_assert_eq!(span.len(), 1 << d);
            let set: std::collections::HashSet<_> = span.iter().cloned().collect();
            prop_assert_eq!(set.len(), span.len());
            for a in &span {
                for c in &span {
                    prop_assert!(set.contains(&a.xor(c).unwrap()));
                }
            }
            prop_assert_eq!(gf2_rank(&span).unwrap(), d);
        }
    }
}
