use std::collections::HashMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{check_dim, Error, Result};
use crate::gf2::{BitVector, ParityMatrix};

pub const PLAN_FORMAT_VERSION: u32 = 1;

/// Upper bound on `Σ_{j ≤ ⌈d/2⌉} C(s, j)` entries in a compact LTF decode table.
pub const MAX_DECODE_TABLE: u64 = 1 << 20;

/// A contiguous block of sketch rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rows {
    pub start: usize,
    pub len: usize,
}

impl Rows {
    pub fn new(start: usize, len: usize) -> Self {
        Rows { start, len }
    }

    pub fn end(&self) -> usize {
        self.start + self.len
    }

    #[inline]
    pub fn any(&self, bits: &BitVector) -> bool {
        self.len > 0 && bits.any_in(self.start, self.len)
    }

    #[inline]
    pub fn count(&self, bits: &BitVector) -> usize {
        bits.count_in(self.start, self.len)
    }

    fn check(&self, k: usize, what: &str) -> Result<()> {
        match self.start.checked_add(self.len) {
            Some(end) if end <= k => Ok(()),
            _ => Err(Error::invalid(format!(
                "{what} rows {}..+{} fall outside k = {k}",
                self.start, self.len
            ))),
        }
    }
}

/// Gap-Hamming test: "heavy" iff the fraction of set rows exceeds `threshold`.
/// A fraction exactly at the threshold reads as light.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapTest {
    pub rows: Rows,
    pub threshold: f64,
}

impl GapTest {
    #[inline]
    pub fn heavy(&self, bits: &BitVector) -> bool {
        self.rows.len > 0 && self.rows.count(bits) as f64 > self.threshold * self.rows.len as f64
    }
}

/// One hashed bucket of disjunctions, tested for being nonzero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrBucket {
    pub weight: f64,
    pub rows: Rows,
}

/// Threshold over bucket indicators: 1 if at least `needed_count` buckets are
/// nonzero, otherwise `[Σ weight·nonzero ≥ theta]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrCount {
    /// Buckets with at least one disjunction; the remaining buckets are
    /// allocated as all-zero rows and never read.
    pub buckets: Vec<OrBucket>,
    pub total_buckets: usize,
    pub rows_per_bucket: usize,
    pub needed_count: usize,
    pub theta: f64,
}

impl OrCount {
    pub fn decide(&self, bits: &BitVector) -> bool {
        let mut count = 0;
        let mut sum = 0.0;
        for b in &self.buckets {
            if b.rows.any(bits) {
                count += 1;
                sum += b.weight;
            }
        }
        count >= self.needed_count || sum >= self.theta
    }

    fn check(&self, k: usize) -> Result<()> {
        for b in &self.buckets {
            b.rows.check(k, "bucket")?;
            check_finite("bucket weight", b.weight)?;
        }
        check_finite("theta", self.theta)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LtfDirect {
    pub gap: Option<GapTest>,
    pub trigger: Option<Rows>,
    /// One row per nonempty (weight class, bucket) slot.
    pub slots: Rows,
    pub slot_weights: Vec<f64>,
    pub theta: f64,
}

impl LtfDirect {
    fn decide(&self, bits: &BitVector) -> bool {
        if self.trigger.is_some_and(|t| t.any(bits)) {
            return true;
        }
        if self.gap.as_ref().is_some_and(|g| g.heavy(bits)) {
            return true;
        }
        let sum: f64 = self
            .slot_weights
            .iter()
            .enumerate()
            .filter(|&(i, _)| bits.get(self.slots.start + i))
            .map(|(_, w)| w)
            .sum();
        sum >= self.theta
    }
}

/// LTF sketch whose slot bits are compressed by `code` random parities; the
/// decoder finds the lowest-weight slot pattern of weight at most
/// `max_weight` consistent with the code bits.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LtfCompact {
    pub gap: Option<GapTest>,
    pub trigger: Option<Rows>,
    pub code: Rows,
    /// Column of the code matrix for each nonempty slot (`code.len` bits).
    #[serde(with = "crate::gf2::hex_rows")]
    pub slot_codes: Vec<BitVector>,
    pub slot_weights: Vec<f64>,
    pub max_weight: usize,
    pub theta: f64,
    #[serde(skip)]
    table: OnceLock<DecodeTable>,
}

impl PartialEq for LtfCompact {
    fn eq(&self, o: &Self) -> bool {
        self.gap == o.gap
            && self.trigger == o.trigger
            && self.code == o.code
            && self.slot_codes == o.slot_codes
            && self.slot_weights == o.slot_weights
            && self.max_weight == o.max_weight
            && self.theta == o.theta
    }
}

#[derive(Clone, Debug)]
struct DecodeTable {
    // all slot subsets of size ≤ ⌈d/2⌉, smallest first
    subsets: Vec<Vec<u32>>,
    codes: Vec<BitVector>,
    by_code: HashMap<BitVector, Vec<u32>>,
    // subsets[..low] have size ≤ ⌊d/2⌋
    low: usize,
}

/// Number of subsets of an `s`-set with size at most `h`, saturating.
pub(crate) fn subsets_up_to(s: usize, h: usize) -> u64 {
    let mut total: u128 = 0;
    let mut c: u128 = 1;
    for j in 0..=h.min(s) {
        total += c;
        if total >= u64::MAX as u128 {
            return u64::MAX;
        }
        // c stays below 2^64 here, so the product fits in u128
        c = c * (s - j) as u128 / (j as u128 + 1);
    }
    total as u64
}

fn subsets_by_size(s: usize, h: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..h.min(s) {
        let mut next = Vec::new();
        for set in &frontier {
            let from = set.last().map_or(0, |&l| l + 1);
            for i in from..s as u32 {
                let mut t = set.clone();
                t.push(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

impl LtfCompact {
    pub(crate) fn new(
        gap: Option<GapTest>,
        trigger: Option<Rows>,
        code: Rows,
        slot_codes: Vec<BitVector>,
        slot_weights: Vec<f64>,
        max_weight: usize,
        theta: f64,
    ) -> Self {
        LtfCompact {
            gap,
            trigger,
            code,
            slot_codes,
            slot_weights,
            max_weight,
            theta,
            table: OnceLock::new(),
        }
    }

    fn table(&self) -> &DecodeTable {
        self.table.get_or_init(|| {
            let s = self.slot_codes.len();
            let hi = self.max_weight.div_ceil(2);
            let lo = self.max_weight / 2;
            let subsets = subsets_by_size(s, hi);
            let codes: Vec<BitVector> = subsets
                .iter()
                .map(|set| {
                    let mut c = BitVector::zeros(self.code.len);
                    for &i in set {
                        c.xor_assign(&self.slot_codes[i as usize]);
                    }
                    c
                })
                .collect();
            let mut by_code: HashMap<BitVector, Vec<u32>> = HashMap::new();
            for (idx, c) in codes.iter().enumerate() {
                by_code.entry(c.clone()).or_default().push(idx as u32);
            }
            let low = subsets.iter().take_while(|t| t.len() <= lo).count();
            DecodeTable {
                subsets,
                codes,
                by_code,
                low,
            }
        })
    }

    /// Lowest-weight slot pattern of weight ≤ `max_weight` matching `code_bits`.
    pub fn decode_slots(&self, code_bits: &BitVector) -> Option<Vec<u32>> {
        let t = self.table();
        let mut best: Option<Vec<u32>> = None;
        for a in 0..t.low {
            let mut target = code_bits.clone();
            target.xor_assign(&t.codes[a]);
            let Some(hits) = t.by_code.get(&target) else {
                continue;
            };
            for &b in hits {
                let y = symmetric_difference(&t.subsets[a], &t.subsets[b as usize]);
                if y.len() <= self.max_weight && best.as_ref().is_none_or(|cur| y.len() < cur.len()) {
                    best = Some(y);
                }
            }
        }
        best
    }

    fn decide(&self, bits: &BitVector) -> bool {
        if self.trigger.is_some_and(|t| t.any(bits)) {
            return true;
        }
        if self.gap.as_ref().is_some_and(|g| g.heavy(bits)) {
            return true;
        }
        match self.decode_slots(&bits.slice(self.code.start, self.code.len)) {
            Some(y) => y.iter().map(|&i| self.slot_weights[i as usize]).sum::<f64>() >= self.theta,
            // no light pattern explains the bits, so more than max_weight
            // significant coordinates are set and the sum exceeds theta
            None => true,
        }
    }
}

fn symmetric_difference(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push(*x);
                i += 1;
            }
            (Some(_), Some(y)) => {
                out.push(*y);
                j += 1;
            }
            (Some(x), None) => {
                out.push(*x);
                i += 1;
            }
            (None, Some(y)) => {
                out.push(*y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// The decoder `g`: maps sketch bits (and nothing else) to an output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PostProcessor {
    Constant {
        value: f64,
    },
    /// Mean over rows of `sign_r · (−1)^{bit_r} · scale`.
    L1Mean {
        #[serde(rename = "signs", with = "sign_string")]
        negative: BitVector,
        scale: f64,
    },
    /// `min(b, inner)`; `b = null` means no clamp.
    BudgetClamp {
        inner: Box<PostProcessor>,
        b: Option<f64>,
    },
    /// 1 for "at most d ones", 0 for "at least 2d ones".
    HamGap {
        gap: GapTest,
        d: usize,
    },
    /// 0 iff every row is zero.
    ZeroTest {
        rows: Rows,
    },
    LtfDirect(LtfDirect),
    LtfCompact(LtfCompact),
    OrCount(OrCount),
    /// 0 if the zero test passes, else 2 or 1 by the pair test; times `scale`.
    Rank2 {
        zero: Rows,
        pairs: OrCount,
        scale: f64,
    },
    /// `Σ_c coeffs[c] · (−1)^{popcount(c & bits)}` over all `2^k` masks `c`.
    TopSubspace {
        coeffs: Vec<f64>,
    },
}

fn check_finite(what: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} must be finite, got {v}")))
    }
}

fn bool_out(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

impl PostProcessor {
    pub fn eval(&self, bits: &BitVector) -> f64 {
        match self {
            PostProcessor::Constant { value } => *value,
            PostProcessor::L1Mean { negative, scale } => {
                let k = negative.len();
                if k == 0 {
                    return 0.0;
                }
                let disagree: u32 = negative
                    .words()
                    .iter()
                    .zip(bits.words())
                    .map(|(a, b)| (a ^ b).count_ones())
                    .sum();
                scale * (k as f64 - 2.0 * disagree as f64) / k as f64
            }
            PostProcessor::BudgetClamp { inner, b } => {
                let v = inner.eval(bits);
                match b {
                    Some(b) => v.min(*b),
                    None => v,
                }
            }
            PostProcessor::HamGap { gap, .. } => bool_out(!gap.heavy(bits)),
            PostProcessor::ZeroTest { rows } => bool_out(rows.any(bits)),
            PostProcessor::LtfDirect(p) => bool_out(p.decide(bits)),
            PostProcessor::LtfCompact(p) => bool_out(p.decide(bits)),
            PostProcessor::OrCount(p) => bool_out(p.decide(bits)),
            PostProcessor::Rank2 { zero, pairs, scale } => {
                if !zero.any(bits) {
                    0.0
                } else if pairs.decide(bits) {
                    2.0 * scale
                } else {
                    *scale
                }
            }
            PostProcessor::TopSubspace { coeffs } => {
                let b = if bits.is_empty() { 0 } else { bits.to_u64() };
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(c, v)| {
                        if (c as u64 & b).count_ones() % 2 == 0 {
                            *v
                        } else {
                            -v
                        }
                    })
                    .sum()
            }
        }
    }

    /// Checks that the descriptor only refers to rows `0..k`.
    pub fn validate(&self, k: usize) -> Result<()> {
        match self {
            PostProcessor::Constant { value } => check_finite("constant value", *value),
            PostProcessor::L1Mean { negative, scale } => {
                check_dim(k, negative.len())?;
                check_finite("scale", *scale)
            }
            PostProcessor::BudgetClamp { inner, b } => {
                if b.is_some_and(|b| b.is_nan()) {
                    return Err(Error::invalid("budget is NaN"));
                }
                inner.validate(k)
            }
            PostProcessor::HamGap { gap, .. } => {
                gap.rows.check(k, "gap")?;
                check_finite("gap threshold", gap.threshold)
            }
            PostProcessor::ZeroTest { rows } => rows.check(k, "zero test"),
            PostProcessor::LtfDirect(p) => {
                if let Some(g) = &p.gap {
                    g.rows.check(k, "gap")?;
                }
                if let Some(t) = &p.trigger {
                    t.check(k, "trigger")?;
                }
                p.slots.check(k, "slot")?;
                check_dim(p.slots.len, p.slot_weights.len())?;
                check_finite("theta", p.theta)
            }
            PostProcessor::LtfCompact(p) => {
                if let Some(g) = &p.gap {
                    g.rows.check(k, "gap")?;
                }
                if let Some(t) = &p.trigger {
                    t.check(k, "trigger")?;
                }
                p.code.check(k, "code")?;
                check_dim(p.slot_codes.len(), p.slot_weights.len())?;
                for c in &p.slot_codes {
                    check_dim(p.code.len, c.len())?;
                }
                let entries = subsets_up_to(p.slot_codes.len(), p.max_weight.div_ceil(2));
                if entries > MAX_DECODE_TABLE {
                    return Err(Error::capacity("compact decode table", entries, MAX_DECODE_TABLE));
                }
                check_finite("theta", p.theta)
            }
            PostProcessor::OrCount(p) => p.check(k),
            PostProcessor::Rank2 { zero, pairs, scale } => {
                zero.check(k, "zero test")?;
                check_finite("scale", *scale)?;
                pairs.check(k)
            }
            PostProcessor::TopSubspace { coeffs } => {
                if k > 20 || coeffs.len() != 1usize << k {
                    return Err(Error::invalid(format!(
                        "top-subspace decoder needs 2^k = 2^{k} coefficients, found {}",
                        coeffs.len()
                    )));
                }
                coeffs.iter().try_for_each(|c| check_finite("coefficient", *c))
            }
        }
    }
}

mod sign_string {
    use super::BitVector;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BitVector, s: S) -> Result<S::Ok, S::Error> {
        let text: String = (0..v.len()).map(|i| if v.get(i) { '-' } else { '+' }).collect();
        s.serialize_str(&text)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BitVector, D::Error> {
        let text = String::deserialize(d)?;
        let mut v = BitVector::zeros(text.len());
        for (i, c) in text.bytes().enumerate() {
            match c {
                b'+' => {}
                b'-' => v.set(i, true),
                _ => return Err(serde::de::Error::custom(format!("invalid sign {:?}", c as char))),
            }
        }
        Ok(v)
    }
}

/// Kind of guarantee a plan claims.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    /// Worst-case expected squared error.
    Mse,
    /// Probability of a wrong output on any fixed input.
    ErrorRate,
    /// Expected squared error under uniform inputs.
    UniformMse,
    /// No error: the plan is exact.
    Exact,
}

/// Rows contributed by one component of a composite plan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizeTerm {
    pub name: String,
    pub rows: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanMeta {
    pub builder: String,
    pub seed: u64,
    pub params: serde_json::Value,
    pub error_kind: ErrorKind,
    /// `None` when the builder cannot bound the error.
    pub claimed_error: Option<f64>,
    pub size_bits: usize,
    pub size_terms: Vec<SizeTerm>,
}

/// A parity matrix plus the decoder for its bits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PlanWire", into = "PlanWire")]
pub struct SketchPlan {
    pub meta: PlanMeta,
    pub matrix: ParityMatrix,
    pub post: PostProcessor,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanWire {
    version: u32,
    meta: PlanMeta,
    matrix: ParityMatrix,
    post: PostProcessor,
}

impl TryFrom<PlanWire> for SketchPlan {
    type Error = Error;

    fn try_from(w: PlanWire) -> Result<Self> {
        if w.version != PLAN_FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported plan format version {}", w.version)));
        }
        SketchPlan::new(w.meta, w.matrix, w.post)
    }
}

impl From<SketchPlan> for PlanWire {
    fn from(p: SketchPlan) -> Self {
        PlanWire {
            version: PLAN_FORMAT_VERSION,
            meta: p.meta,
            matrix: p.matrix,
            post: p.post,
        }
    }
}

impl SketchPlan {
    /// Assembles a plan, checking that sizes and row references agree.
    pub fn new(meta: PlanMeta, matrix: ParityMatrix, post: PostProcessor) -> Result<Self> {
        let k = matrix.k();
        if meta.size_bits != k {
            return Err(Error::invalid(format!(
                "meta.size_bits = {} but the matrix has {k} rows",
                meta.size_bits
            )));
        }
        let term_total: usize = meta.size_terms.iter().map(|t| t.rows).sum();
        if !meta.size_terms.is_empty() && term_total != k {
            return Err(Error::invalid(format!(
                "size terms add up to {term_total}, not k = {k}"
            )));
        }
        post.validate(k)?;
        Ok(SketchPlan { meta, matrix, post })
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn k(&self) -> usize {
        self.matrix.k()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plan serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Hex SHA-256 of the compact JSON serialization.
    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    pub fn sketch(&self, x: &BitVector) -> Result<BitVector> {
        self.matrix.apply(x)
    }
}

/// The decoder applied to sketch bits; never sees the input itself.
pub fn estimate(plan: &SketchPlan, bits: &BitVector) -> Result<f64> {
    check_dim(plan.k(), bits.len())?;
    Ok(plan.post.eval(bits))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta(k: usize) -> PlanMeta {
        PlanMeta {
            builder: "test".into(),
            seed: 0,
            params: serde_json::Value::Null,
            error_kind: ErrorKind::Exact,
            claimed_error: Some(0.0),
            size_bits: k,
            size_terms: vec![],
        }
    }

    fn bv(s: &str) -> BitVector {
        BitVector::from_bit_string(s).unwrap()
    }

    #[test]
    fn constant_ignores_bits() {
        let p = PostProcessor::Constant { value: 2.5 };
        assert_eq!(p.eval(&BitVector::zeros(0)), 2.5);
    }

    #[test]
    fn l1_mean_single_row() {
        let plus = PostProcessor::L1Mean {
            negative: bv("0"),
            scale: 3.0,
        };
        assert_eq!(plus.eval(&bv("0")), 3.0);
        assert_eq!(plus.eval(&bv("1")), -3.0);
        let minus = PostProcessor::L1Mean {
            negative: bv("1"),
            scale: 3.0,
        };
        assert_eq!(minus.eval(&bv("0")), -3.0);
        let mixed = PostProcessor::L1Mean {
            negative: bv("0101"),
            scale: 2.0,
        };
        // rows: +1, -1, -1, +1 → mean 0
        assert_eq!(mixed.eval(&bv("0011")), 0.0);
        assert_eq!(mixed.eval(&bv("0101")), 2.0);
    }

    #[test]
    fn rank2_zero_bits_give_zero() {
        let p = PostProcessor::Rank2 {
            zero: Rows::new(0, 3),
            pairs: OrCount {
                buckets: vec![],
                total_buckets: 0,
                rows_per_bucket: 0,
                needed_count: 3,
                theta: 1.5,
            },
            scale: 1.0,
        };
        assert_eq!(p.eval(&BitVector::zeros(3)), 0.0);
        assert_eq!(p.eval(&bv("010")), 1.0);
    }

    #[test]
    fn top_subspace_is_inverse_transform() {
        // g = 1 + 2χ_1 − χ_2 + 0.5χ_{12} on two bits
        let p = PostProcessor::TopSubspace {
            coeffs: vec![1.0, 2.0, -1.0, 0.5],
        };
        assert_eq!(p.eval(&bv("00")), 2.5);
        assert_eq!(p.eval(&bv("10")), 1.0 - 2.0 - 1.0 - 0.5);
        assert_eq!(p.eval(&bv("11")), 1.0 - 2.0 + 1.0 + 0.5);
    }

    #[test]
    fn symmetric_difference_merges() {
        assert_eq!(symmetric_difference(&[1, 3, 5], &[2, 3]), vec![1, 2, 5]);
        assert_eq!(symmetric_difference(&[], &[4]), vec![4]);
    }

    #[test]
    fn subset_counts() {
        assert_eq!(subsets_up_to(5, 2), 1 + 5 + 10);
        assert_eq!(subsets_by_size(5, 2).len(), 16);
        assert_eq!(subsets_up_to(3, 9), 8);
        assert_eq!(subsets_up_to(1 << 30, 8), u64::MAX);
    }

    #[test]
    fn plan_json_round_trip_and_validation() {
        let mut m = ParityMatrix::new(4);
        m.push_row(&bv("1100")).unwrap();
        m.push_row(&bv("0011")).unwrap();
        let post = PostProcessor::BudgetClamp {
            inner: Box::new(PostProcessor::L1Mean {
                negative: bv("01"),
                scale: 2.0,
            }),
            b: None,
        };
        let plan = SketchPlan::new(meta(2), m.clone(), post).unwrap();
        let back = SketchPlan::from_json(&plan.to_json()).unwrap();
        assert_eq!(plan, back);
        assert_eq!(plan.fingerprint(), back.fingerprint());
        assert!(plan.to_json().contains(r#""signs":"+-""#));

        let bad = PostProcessor::ZeroTest { rows: Rows::new(1, 2) };
        assert!(SketchPlan::new(meta(2), m.clone(), bad).is_err());
        assert!(SketchPlan::new(meta(3), m, PostProcessor::Constant { value: 0.0 }).is_err());
        let text = plan.to_json().replace(r#""version":1"#, r#""version":9"#);
        assert!(SketchPlan::from_json(&text).is_err());
    }

    #[test]
    fn estimate_checks_arity() {
        let plan = SketchPlan::new(meta(0), ParityMatrix::new(3), PostProcessor::Constant { value: 1.0 }).unwrap();
        assert_eq!(estimate(&plan, &BitVector::zeros(0)).unwrap(), 1.0);
        assert!(estimate(&plan, &BitVector::zeros(1)).is_err());
    }
}
