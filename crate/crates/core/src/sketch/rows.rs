//! Shared plumbing for builders: random row generation and a matrix sink
//! that records which component produced which rows.

use rand::RngCore;
use rand_distr::{Distribution, Geometric};

use super::plan::{ErrorKind, PlanMeta, PostProcessor, Rows, SizeTerm, SketchPlan};
use crate::error::Result;
use crate::gf2::{words_for, BitVector, ParityMatrix};
use crate::hash::PlanRng;

/// Hard cap on rows in any plan.
pub const MAX_ROWS: usize = 1 << 22;

pub(crate) struct RowSink {
    matrix: ParityMatrix,
    terms: Vec<SizeTerm>,
}

impl RowSink {
    pub fn new(n: usize) -> Self {
        RowSink {
            matrix: ParityMatrix::new(n),
            terms: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn k(&self) -> usize {
        self.matrix.k()
    }

    pub fn push_words(&mut self, words: &[u64]) {
        self.matrix.push_row_words(words);
    }

    pub fn push_zero_rows(&mut self, count: usize) {
        self.matrix.push_zero_rows(count);
    }

    /// Records the rows pushed since `start` under `name`.
    pub fn close(&mut self, name: &str, start: usize) -> Rows {
        let rows = Rows::new(start, self.k() - start);
        self.terms.push(SizeTerm {
            name: name.to_string(),
            rows: rows.len,
        });
        rows
    }

    pub fn finish(
        self,
        builder: &str,
        seed: u64,
        params: serde_json::Value,
        error_kind: ErrorKind,
        claimed_error: impl Into<Option<f64>>,
        post: PostProcessor,
    ) -> Result<SketchPlan> {
        let meta = PlanMeta {
            builder: builder.to_string(),
            seed,
            params,
            error_kind,
            claimed_error: claimed_error.into(),
            size_bits: self.matrix.k(),
            size_terms: self.terms,
        };
        SketchPlan::new(meta, self.matrix, post)
    }
}

/// Each coordinate of `support` independently with probability 1/2.
pub(crate) fn uniform_row(support: &BitVector, rng: &mut PlanRng) -> Vec<u64> {
    support.words().iter().map(|&m| rng.next_u64() & m).collect()
}

/// Each coordinate in `coords` independently with probability `p`.
pub(crate) fn biased_row(n: usize, coords: &[usize], p: f64, rng: &mut PlanRng) -> Vec<u64> {
    let mut words = vec![0u64; words_for(n)];
    if p >= 1.0 {
        for &i in coords {
            words[i / 64] |= 1 << (i % 64);
        }
        return words;
    }
    // geometric skipping: number of coordinates passed over before the next hit
    let geo = Geometric::new(p).expect("0 < p < 1");
    let mut pos = 0usize;
    loop {
        let skip = geo.sample(rng);
        pos = match usize::try_from(skip).ok().and_then(|s| pos.checked_add(s)) {
            Some(p) if p < coords.len() => p,
            _ => break,
        };
        let i = coords[pos];
        words[i / 64] |= 1 << (i % 64);
        pos += 1;
    }
    words
}

/// `⌈x⌉`, treating values within a relative 1e-9 of an integer as that integer.
pub(crate) fn ceil_tol(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hash::rng;

    #[test]
    fn biased_row_density() {
        let mut r = rng(1);
        let coords: Vec<usize> = (0..1000).map(|i| 2 * i).collect();
        let mut hits = 0;
        for _ in 0..200 {
            let row = BitVector::from_words(2000, biased_row(2000, &coords, 0.1, &mut r));
            assert!(row.iter_ones().all(|i| i % 2 == 0));
            hits += row.count_ones();
        }
        let rate = hits as f64 / 200_000.0;
        assert!((rate - 0.1).abs() < 0.005, "{rate}");
    }

    #[test]
    fn uniform_row_respects_support() {
        let mut r = rng(2);
        let support = BitVector::from_indices(130, &[0, 64, 129]).unwrap();
        for _ in 0..50 {
            let w = uniform_row(&support, &mut r);
            let row = BitVector::from_words(130, w);
            assert!(row.iter_ones().all(|i| support.get(i)));
        }
    }

    #[test]
    fn ceil_tolerates_rounding_noise() {
        assert_eq!(ceil_tol(1024.0000000001), 1024.0);
        assert_eq!(ceil_tol(3.2), 4.0);
        assert_eq!(ceil_tol(0.0), 0.0);
    }
}
