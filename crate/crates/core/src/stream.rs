//! XOR-update streams: each update flips one input coordinate, and the
//! sketch is maintained by XOR-ing that coordinate's column of the matrix.

use std::io::BufRead;

use crate::error::{Error, Result};
use crate::gf2::{words_for, BitVector, ParityMatrix};
use crate::sketch::{estimate, SketchPlan};

/// Sparse columns of a parity matrix: for each coordinate, the nonzero
/// 64-row words of its column.
#[derive(Clone, Debug)]
pub struct ColumnMasks {
    k: usize,
    offsets: Vec<usize>,
    entries: Vec<(u32, u64)>,
}

impl ColumnMasks {
    pub fn from_matrix(m: &ParityMatrix) -> Self {
        let n = m.n();
        let k = m.k();
        let mut per_col: Vec<Vec<(u32, u64)>> = vec![Vec::new(); n];
        for r in 0..k {
            let (w, bit) = ((r / 64) as u32, 1u64 << (r % 64));
            for (wi, &word) in m.row_words(r).iter().enumerate() {
                let mut rest = word;
                while rest != 0 {
                    let i = wi * 64 + rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    let col = &mut per_col[i];
                    // rows are visited in order, so a column's last entry is its current word
                    match col.last_mut() {
                        Some(last) if last.0 == w => last.1 |= bit,
                        _ => col.push((w, bit)),
                    }
                }
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut entries = Vec::new();
        for col in per_col {
            entries.extend(col);
            offsets.push(entries.len());
        }
        ColumnMasks { k, offsets, entries }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Column `i` as a `k`-bit vector.
    pub fn column(&self, i: usize) -> BitVector {
        let mut v = BitVector::zeros(self.k);
        self.apply(i, v.words_mut());
        v
    }

    /// `bits ^= column(i)`; `bits` holds `k` bits.
    #[inline]
    pub fn apply(&self, i: usize, bits: &mut [u64]) {
        for &(w, mask) in &self.entries[self.offsets[i]..self.offsets[i + 1]] {
            bits[w as usize] ^= mask;
        }
    }
}

/// Running sketch of the input obtained by folding all updates so far.
#[derive(Clone, Debug)]
pub struct StreamState<'p> {
    plan: &'p SketchPlan,
    masks: ColumnMasks,
    bits: BitVector,
    updates: u64,
}

impl<'p> StreamState<'p> {
    /// Starts from `x = 0`.
    pub fn new(plan: &'p SketchPlan) -> Self {
        StreamState {
            plan,
            masks: ColumnMasks::from_matrix(&plan.matrix),
            bits: BitVector::zeros(plan.k()),
            updates: 0,
        }
    }

    pub fn plan(&self) -> &SketchPlan {
        self.plan
    }

    pub fn masks(&self) -> &ColumnMasks {
        &self.masks
    }

    /// Flips coordinate `i`.
    pub fn update(&mut self, i: usize) -> Result<()> {
        let n = self.plan.n();
        if i >= n {
            return Err(Error::param(format!("update coordinate {i} out of range for n = {n}")));
        }
        self.masks.apply(i, self.bits.words_mut());
        self.updates += 1;
        Ok(())
    }

    pub fn update_all<I: IntoIterator<Item = usize>>(&mut self, coords: I) -> Result<()> {
        coords.into_iter().try_for_each(|i| self.update(i))
    }

    pub fn bits(&self) -> &BitVector {
        &self.bits
    }

    pub fn update_count(&self) -> u64 {
        self.updates
    }

    pub fn query(&self) -> f64 {
        estimate(self.plan, &self.bits).expect("stream bits have length k")
    }
}

pub fn stream_init(plan: &SketchPlan) -> StreamState<'_> {
    StreamState::new(plan)
}

pub fn stream_update(state: &mut StreamState<'_>, i: usize) -> Result<()> {
    state.update(i)
}

pub fn stream_query(state: &StreamState<'_>) -> f64 {
    state.query()
}

/// Parses one line of a stream file: a 0-based coordinate, or `None` for
/// blank lines and `#` comments.
pub fn parse_stream_line(line: &str) -> Result<Option<usize>> {
    let body = line.split('#').next().unwrap_or("").trim();
    if body.is_empty() {
        return Ok(None);
    }
    body.parse::<usize>()
        .map(Some)
        .map_err(|e| Error::Parse(format!("bad coordinate {body:?}: {e}")))
}

/// Lazily reads coordinates from a stream file, one per line.
pub struct StreamReader<R> {
    inner: R,
    line: String,
    line_no: usize,
}

impl<R: BufRead> StreamReader<R> {
    pub fn new(inner: R) -> Self {
        StreamReader {
            inner,
            line: String::new(),
            line_no: 0,
        }
    }
}

impl<R: BufRead> Iterator for StreamReader<R> {
    type Item = Result<usize>;

    fn next(&mut self) -> Option<Result<usize>> {
        loop {
            self.line.clear();
            match self.inner.read_line(&mut self.line) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(e.into())),
            }
            self.line_no += 1;
            match parse_stream_line(&self.line) {
                Ok(Some(i)) => return Some(Ok(i)),
                Ok(None) => continue,
                Err(Error::Parse(msg)) => {
                    return Some(Err(Error::Parse(format!("line {}: {msg}", self.line_no))))
                }
                Err(e) => return Some(Err(e)),
            }
        }
    }
}

/// Folds a coordinate stream into the input it produces.
pub fn fold_stream<I: IntoIterator<Item = usize>>(n: usize, coords: I) -> Result<BitVector> {
    let mut x = BitVector::zeros(n);
    for i in coords {
        if i >= n {
            return Err(Error::param(format!("update coordinate {i} out of range for n = {n}")));
        }
        x.flip(i);
    }
    Ok(x)
}

/// Visits the sketch of every `x ∈ {0,1}^n` (as an integer) in Gray-code
/// order, paying one column XOR per step.
pub fn for_each_input_sketch(masks: &ColumnMasks, visit: impl FnMut(u64, &BitVector)) -> Result<()> {
    let all: Vec<usize> = (0..masks.n()).collect();
    for_each_subset_sketch(masks, &all, visit)
}

/// Like [`for_each_input_sketch`], restricted to inputs supported on
/// `coords`. Bit `j` of the visited pattern is coordinate `coords[j]`.
pub fn for_each_subset_sketch(
    masks: &ColumnMasks,
    coords: &[usize],
    mut visit: impl FnMut(u64, &BitVector),
) -> Result<()> {
    let s = coords.len();
    if s > 30 {
        return Err(Error::capacity("exhaustive input dimension", s as u64, 30));
    }
    if let Some(&i) = coords.iter().find(|&&i| i >= masks.n()) {
        return Err(Error::param(format!("coordinate {i} out of range for n = {}", masks.n())));
    }
    let mut bits = BitVector::zeros(masks.k());
    let mut x = 0u64;
    visit(x, &bits);
    for step in 1u64..1 << s {
        let j = step.trailing_zeros() as usize;
        x ^= 1 << j;
        masks.apply(coords[j], bits.words_mut());
        visit(x, &bits);
    }
    debug_assert_eq!(bits.words().len(), words_for(masks.k()));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hash::rng;
    use crate::sketch::{build_rank2_sketch, build_zero_test, sampler_for_additive, build_l1_sampler};
    use crate::valuations::Rank2Matroid;
    use rand::Rng;

    #[test]
    fn columns_match_matrix() {
        let plan = build_zero_test(130, 1e-30, 3).unwrap();
        let masks = ColumnMasks::from_matrix(&plan.matrix);
        for i in 0..130 {
            let col = masks.column(i);
            for r in 0..plan.k() {
                assert_eq!(col.get(r), plan.matrix.row(r).get(i));
            }
        }
    }

    #[test]
    fn double_update_cancels_and_empty_stream_is_zero() {
        let plan = build_zero_test(20, 0.01, 1).unwrap();
        let mut s = stream_init(&plan);
        assert!(s.bits().is_zero());
        assert_eq!(stream_query(&s), 0.0);
        stream_update(&mut s, 5).unwrap();
        let once = s.bits().clone();
        stream_update(&mut s, 7).unwrap();
        stream_update(&mut s, 7).unwrap();
        assert_eq!(s.bits(), &once);
        assert_eq!(s.update_count(), 3);
        assert!(s.update(20).is_err());
    }

    #[test]
    fn long_stream_matches_folded_input() {
        let n = 1 << 10;
        let plan = build_l1_sampler(&sampler_for_additive(&vec![1.0; n]).unwrap(), 4096.0, 9).unwrap();
        let mut r = rng(5);
        let ups: Vec<usize> = (0..100_000).map(|_| r.random_range(0..n)).collect();
        let mut s = stream_init(&plan);
        s.update_all(ups.iter().copied()).unwrap();
        let x = fold_stream(n, ups).unwrap();
        assert_eq!(s.bits(), &plan.sketch(&x).unwrap());
        assert_eq!(s.query(), estimate(&plan, &plan.sketch(&x).unwrap()).unwrap());
    }

    #[test]
    fn insert_then_delete_returns_to_zero_output() {
        let plan = build_rank2_sketch(&Rank2Matroid::uniform(6), false, 0.2, 2).unwrap();
        let mut s = stream_init(&plan);
        s.update_all(0..6).unwrap();
        s.update_all(0..6).unwrap();
        assert_eq!(s.query(), 0.0);
    }

    #[test]
    fn gray_walk_visits_every_input() {
        let plan = build_zero_test(6, 0.01, 4).unwrap();
        let masks = ColumnMasks::from_matrix(&plan.matrix);
        let mut seen = vec![false; 64];
        for_each_input_sketch(&masks, |x, bits| {
            seen[x as usize] = true;
            assert_eq!(bits, &plan.sketch(&BitVector::from_u64(6, x)).unwrap());
        })
        .unwrap();
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn stream_file_parsing() {
        let text = "3\n\n# comment\n  7  # trailing\n0\n";
        let got: Vec<usize> = StreamReader::new(text.as_bytes()).collect::<Result<_>>().unwrap();
        assert_eq!(got, vec![3, 7, 0]);
        let err = StreamReader::new("1\nx\n".as_bytes()).collect::<Result<Vec<_>>>().unwrap_err();
        assert!(err.to_string().contains("line 2"));
        assert!(parse_stream_line("-1").is_err());
    }
}
