//! Sketches for threshold functions: gap-Hamming, zero tests, LTFs with a
//! margin, thresholds of disjunctions, and the matroid rank sketches built
//! on top of them.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::plan::{
    subsets_up_to, ErrorKind, GapTest, LtfCompact, LtfDirect, OrBucket, OrCount, PostProcessor,
    Rows, SketchPlan, MAX_DECODE_TABLE,
};
use super::rows::{biased_row, ceil_tol, uniform_row, RowSink, MAX_ROWS};
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::hash::{derive, rng, BucketHash, PlanRng};
use crate::valuations::{GraphicMatroid, Ltf, LtfOr, OrTerm, Rank2Matroid};

/// Default cap on `θ/m` for LTF and LTF∘OR builders.
pub const MAX_THETA_OVER_M: f64 = 64.0;

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("delta must lie in (0, 1), got {delta}")))
    }
}

fn check_positive(theta: f64, margin: f64) -> Result<f64> {
    if !(theta > 0.0) || !(margin > 0.0) || !theta.is_finite() || !margin.is_finite() {
        return Err(Error::param(format!(
            "theta and m must be positive and finite, got theta = {theta}, m = {margin}"
        )));
    }
    Ok(theta / margin)
}

fn check_theta_margin(theta: f64, margin: f64) -> Result<f64> {
    let ratio = check_positive(theta, margin)?;
    if ratio > MAX_THETA_OVER_M {
        return Err(Error::capacity("theta/m", ratio.ceil() as u64, MAX_THETA_OVER_M as u64));
    }
    Ok(ratio)
}

/// Parameters of the biased-parity gap test separating `≤ d` from `≥ 2d` ones.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapParams {
    pub d: usize,
    /// Inclusion probability of each coordinate in a row.
    pub p: f64,
    pub beta_d: f64,
    pub beta_2d: f64,
    /// Midpoint `(β(d) + β(2d))/2`.
    pub tau: f64,
    pub rows: usize,
}

/// `β(k) = (1 − (1−2p)^k)/2`, the chance a `p`-biased row hits `x` with `|x| = k` oddly.
pub fn beta(p: f64, k: usize) -> f64 {
    (1.0 - (1.0 - 2.0 * p).powi(k as i32)) / 2.0
}

pub fn gap_params(d: usize, delta: f64) -> Result<GapParams> {
    check_delta(delta)?;
    if d == 0 {
        return Err(Error::param("gap test needs d >= 1"));
    }
    // p = 1/2 at d = 1 would make β(1) = β(2)
    let p = if d == 1 { 0.25 } else { 1.0 / (2.0 * d as f64) };
    let beta_d = beta(p, d);
    let beta_2d = beta(p, 2 * d);
    let gap = beta_2d - beta_d;
    let rows = ceil_tol(2.0 * (2.0 / delta).ln() / (gap * gap));
    if rows > MAX_ROWS as f64 {
        return Err(Error::capacity("gap test rows", rows as u64, MAX_ROWS as u64));
    }
    Ok(GapParams {
        d,
        p,
        beta_d,
        beta_2d,
        tau: (beta_d + beta_2d) / 2.0,
        rows: rows as usize,
    })
}

fn push_gap(sink: &mut RowSink, coords: &[usize], params: &GapParams, rng: &mut PlanRng) -> GapTest {
    let start = sink.k();
    for _ in 0..params.rows {
        let row = biased_row(sink.n(), coords, params.p, rng);
        sink.push_words(&row);
    }
    GapTest {
        rows: sink.close("gap", start),
        threshold: params.tau,
    }
}

/// Sketch for the promise problem "`|x| ≤ d` or `|x| ≥ 2d`".
///
/// Outputs 1 for "at most d" and 0 for "at least 2d".
pub fn build_ham_gap_sketch(n: usize, d: usize, delta: f64, seed: u64) -> Result<SketchPlan> {
    if d == 0 || 2 * d > n {
        return Err(Error::param(format!("gap test needs 1 <= d and 2d <= n, got d = {d}, n = {n}")));
    }
    let params = gap_params(d, delta)?;
    let coords: Vec<usize> = (0..n).collect();
    let mut sink = RowSink::new(n);
    let gap = push_gap(&mut sink, &coords, &params, &mut rng(derive(seed, "gap")));
    sink.finish(
        "ham_gap",
        seed,
        json!({ "n": n, "d": d, "delta": delta, "gap": params }),
        ErrorKind::ErrorRate,
        delta,
        PostProcessor::HamGap { gap, d },
    )
}

/// Rows for a one-sided zero test with error `delta`: `⌈log₂(1/δ)⌉`.
pub fn zero_test_rows(delta: f64) -> Result<usize> {
    check_delta(delta)?;
    Ok(ceil_tol((1.0 / delta).log2()).max(1.0) as usize)
}

fn push_zero_test(
    sink: &mut RowSink,
    name: &str,
    support: &BitVector,
    rows: usize,
    rng: &mut PlanRng,
) -> Rows {
    let start = sink.k();
    for _ in 0..rows {
        let row = uniform_row(support, rng);
        sink.push_words(&row);
    }
    sink.close(name, start)
}

/// Uniform random parities; outputs 0 iff every sketch bit is 0.
pub fn build_zero_test(n: usize, delta: f64, seed: u64) -> Result<SketchPlan> {
    let rows = zero_test_rows(delta)?;
    let mut sink = RowSink::new(n);
    let rows = push_zero_test(&mut sink, "zero_test", &BitVector::ones(n), rows, &mut rng(derive(seed, "zero")));
    sink.finish(
        "zero_test",
        seed,
        json!({ "n": n, "delta": delta }),
        ErrorKind::ErrorRate,
        delta,
        PostProcessor::ZeroTest { rows },
    )
}

/// Zeroes every weight below `2m`; the function is unchanged on all inputs.
pub fn prune_weights(spec: &Ltf) -> Ltf {
    let cut = 2.0 * spec.margin;
    Ltf {
        theta: spec.theta,
        margin: spec.margin,
        weights: spec.weights.iter().map(|&w| if w < cut { 0.0 } else { w }).collect(),
    }
}

/// The geometric weight grid `W = {2m(1+ε)^i : 0 ≤ i ≤ t}` with `ε = m/(10θ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightGrid {
    pub theta: f64,
    pub margin: f64,
    pub epsilon: f64,
    pub classes: Vec<f64>,
}

impl WeightGrid {
    pub fn new(theta: f64, margin: f64) -> Result<Self> {
        let ratio = check_positive(theta, margin)?;
        let epsilon = margin / (10.0 * theta);
        let t = if ratio <= 1.0 {
            0.0
        } else {
            ceil_tol(ratio.ln() / epsilon.ln_1p())
        };
        if t >= MAX_ROWS as f64 {
            return Err(Error::capacity("weight classes", t as u64, MAX_ROWS as u64));
        }
        let classes = (0..=t as usize)
            .map(|i| 2.0 * margin * (1.0 + epsilon).powi(i as i32))
            .collect();
        Ok(WeightGrid {
            theta,
            margin,
            epsilon,
            classes,
        })
    }

    /// Class of a weight after clamping to `2θ`; `None` below `2m`.
    pub fn class_of(&self, w: f64) -> Option<usize> {
        let w = w.min(2.0 * self.theta);
        if w < self.classes[0] {
            return None;
        }
        let mut i = ((w / self.classes[0]).ln() / self.epsilon.ln_1p()).floor() as usize;
        i = i.min(self.classes.len() - 1);
        while i > 0 && self.classes[i] > w {
            i -= 1;
        }
        while i + 1 < self.classes.len() && self.classes[i + 1] <= w {
            i += 1;
        }
        Some(i)
    }
}

/// Result of rounding a pruned LTF onto its weight grid.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundedLtf {
    /// Rounded weights; the recorded margin is the guaranteed `(4/5)m`.
    pub ltf: Ltf,
    pub grid: WeightGrid,
    pub class_of: Vec<Option<usize>>,
    /// Coordinates with `w_i ≥ 2θ`: setting any of them forces output 1.
    pub triggers: Vec<usize>,
}

/// Clamps weights at `2θ` and rounds each down onto the grid.
pub fn round_weights(pruned: &Ltf) -> Result<RoundedLtf> {
    let grid = WeightGrid::new(pruned.theta, pruned.margin)?;
    let cut = 2.0 * pruned.margin;
    if let Some(i) = pruned.weights.iter().position(|&w| w != 0.0 && w < cut) {
        return Err(Error::param(format!(
            "weight w[{i}] = {} is below 2m = {cut}; prune first",
            pruned.weights[i]
        )));
    }
    let class_of: Vec<Option<usize>> = pruned
        .weights
        .iter()
        .map(|&w| if w == 0.0 { None } else { grid.class_of(w) })
        .collect();
    let triggers = (0..pruned.n())
        .filter(|&i| pruned.weights[i] >= 2.0 * pruned.theta)
        .collect();
    let weights = class_of.iter().map(|c| c.map_or(0.0, |c| grid.classes[c])).collect();
    Ok(RoundedLtf {
        ltf: Ltf {
            theta: pruned.theta,
            margin: 0.8 * pruned.margin,
            weights,
        },
        grid,
        class_of,
        triggers,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LtfMode {
    /// One sketch bit per nonempty slot.
    Direct,
    /// Slot bits compressed by random parities, decoded by low-weight search.
    Compact,
}

/// `log₂ Σ_{j ≤ h} C(s, j)` without overflow.
fn log2_subsets_up_to(s: usize, h: usize) -> f64 {
    let mut terms = Vec::with_capacity(h.min(s) + 1);
    let mut lc = 0.0f64;
    for j in 0..=h.min(s) {
        terms.push(lc);
        lc += ((s - j) as f64).log2() - ((j + 1) as f64).log2();
    }
    let top = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    top + terms.iter().map(|t| (t - top).exp2()).sum::<f64>().log2()
}

/// Sketch for an LTF with margin `m`.
///
/// Decode order: any trigger coordinate set gives 1; a heavy gap test gives
/// 1; otherwise the rounded weights of the set slots are summed against `θ`.
pub fn build_ltf_sketch(spec: &Ltf, delta: f64, seed: u64, mode: LtfMode) -> Result<SketchPlan> {
    check_delta(delta)?;
    let ratio = check_theta_margin(spec.theta, spec.margin)?;
    let n = spec.n();
    let rounded = round_weights(&prune_weights(spec))?;
    let sig: Vec<usize> = (0..n).filter(|&i| rounded.class_of[i].is_some()).collect();
    let builder = match mode {
        LtfMode::Direct => "ltf_direct",
        LtfMode::Compact => "ltf_compact",
    };
    if sig.is_empty() {
        // every weight is below 2m, so f ≡ [0 ≥ θ] = 0
        return RowSink::new(n).finish(
            builder,
            seed,
            json!({ "theta": spec.theta, "m": spec.margin, "significant": 0 }),
            ErrorKind::ErrorRate,
            0.0,
            PostProcessor::Constant { value: 0.0 },
        );
    }
    let d = ceil_tol(ratio / 2.0) as usize;
    let use_gap = sig.len() > d;
    let use_trigger = !rounded.triggers.is_empty();
    let use_code = mode == LtfMode::Compact;
    let parts = 1 + use_gap as usize + use_trigger as usize + use_code as usize;
    let share = delta / parts as f64;

    let m_buckets = ceil_tol(5.0 * ratio * ratio) as usize;
    let used_classes: std::collections::BTreeSet<usize> =
        sig.iter().map(|&i| rounded.class_of[i].unwrap()).collect();
    let hash = BucketHash::new(derive(seed, "ltf/slots"), m_buckets);
    let mut slots: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for &i in &sig {
        slots.entry((rounded.class_of[i].unwrap(), hash.bucket(i))).or_default().push(i);
    }
    let slot_weights: Vec<f64> = slots.keys().map(|&(c, _)| rounded.grid.classes[c]).collect();
    let slot_masks = slots
        .values()
        .map(|coords| BitVector::from_indices(n, coords))
        .collect::<Result<Vec<_>>>()?;

    // a light input leaves at most 2d − 1 significant ones unseen by the gap
    // test, and only collisions among those can corrupt the slot sum
    let live = (2 * d - 1).min(sig.len()) as f64;
    let collision_bound = (live * (live - 1.0) / 2.0 / m_buckets as f64).min(1.0);

    let mut sink = RowSink::new(n);
    let gap_params_used = if use_gap { Some(gap_params(d, share)?) } else { None };
    let gap = gap_params_used
        .as_ref()
        .map(|p| push_gap(&mut sink, &sig, p, &mut rng(derive(seed, "ltf/gap"))));
    let trigger = if use_trigger {
        let support = BitVector::from_indices(n, &rounded.triggers)?;
        let rows = zero_test_rows(share)?;
        Some(push_zero_test(&mut sink, "trigger", &support, rows, &mut rng(derive(seed, "ltf/trigger"))))
    } else {
        None
    };

    let mut params = json!({
        "theta": spec.theta,
        "m": spec.margin,
        "delta": delta,
        "mode": mode,
        "d": d,
        "significant": sig.len(),
        "triggers": rounded.triggers.len(),
        "epsilon": rounded.grid.epsilon,
        "weight_classes": rounded.grid.classes.len(),
        "used_classes": used_classes.len(),
        "buckets_per_class": m_buckets,
        "nonempty_slots": slots.len(),
        "component_delta": share,
        "collision_bound": collision_bound,
        "gap": gap_params_used,
    });
    let mut claimed = collision_bound + share * (use_gap as u8 + use_trigger as u8) as f64;

    let post = match mode {
        LtfMode::Direct => {
            let start = sink.k();
            for mask in &slot_masks {
                sink.push_words(mask.words());
            }
            PostProcessor::LtfDirect(LtfDirect {
                gap,
                trigger,
                slots: sink.close("slots", start),
                slot_weights,
                theta: spec.theta,
            })
        }
        LtfMode::Compact => {
            let s_total = used_classes.len() * m_buckets;
            let code_len = ceil_tol(log2_subsets_up_to(s_total, d) + (1.0 / share).log2()) as usize;
            let entries = subsets_up_to(slot_masks.len(), d.div_ceil(2));
            if entries > MAX_DECODE_TABLE {
                return Err(Error::capacity("compact decode table", entries, MAX_DECODE_TABLE));
            }
            if code_len > MAX_ROWS {
                return Err(Error::capacity("compact code rows", code_len as u64, MAX_ROWS as u64));
            }
            let mut r = rng(derive(seed, "ltf/code"));
            let mut slot_codes = vec![BitVector::zeros(code_len); slot_masks.len()];
            let start = sink.k();
            for row in 0..code_len {
                let mut acc = BitVector::zeros(n);
                for (s, mask) in slot_masks.iter().enumerate() {
                    if r.random::<bool>() {
                        acc.xor_assign(mask);
                        slot_codes[s].set(row, true);
                    }
                }
                sink.push_words(acc.words());
            }
            let code = sink.close("code", start);
            claimed += share;
            params["code_rows"] = json!(code_len);
            PostProcessor::LtfCompact(LtfCompact::new(
                gap,
                trigger,
                code,
                slot_codes,
                slot_weights,
                d,
                spec.theta,
            ))
        }
    };
    sink.finish(builder, seed, params, ErrorKind::ErrorRate, claimed.min(1.0), post)
}

/// Bucketed disjunction counting shared by the LTF∘OR, rank-2 and graphic builders.
fn push_or_count(
    sink: &mut RowSink,
    spec: &LtfOr,
    delta: f64,
    seed: u64,
) -> Result<(Option<OrCount>, serde_json::Value)> {
    let ratio = check_theta_margin(spec.theta, spec.margin)?;
    let grid = WeightGrid::new(spec.theta, spec.margin)?;
    let n = spec.n();
    let live: Vec<(usize, &BitVector)> = spec
        .terms()
        .iter()
        .zip(spec.masks())
        .filter(|(_, m)| !m.is_zero())
        .filter_map(|(t, m)| grid.class_of(t.weight).map(|c| (c, m)))
        .collect();
    let m_buckets = ceil_tol(50.0 * ratio * ratio) as usize;
    let used_classes: std::collections::BTreeSet<usize> = live.iter().map(|&(c, _)| c).collect();
    let total_buckets = used_classes.len() * m_buckets;
    let mut params = json!({
        "theta": spec.theta,
        "m": spec.margin,
        "delta": delta,
        "epsilon": grid.epsilon,
        "weight_classes": grid.classes.len(),
        "used_classes": used_classes.len(),
        "buckets_per_class": m_buckets,
        "total_buckets": total_buckets,
        "live_terms": live.len(),
    });
    if live.is_empty() {
        return Ok((None, params));
    }
    let rows_per_bucket = ceil_tol((2.0 * total_buckets as f64 / delta).log2()) as usize;
    let total_rows = total_buckets as u64 * rows_per_bucket as u64;
    if total_rows + sink.k() as u64 > MAX_ROWS as u64 {
        return Err(Error::capacity("bucket test rows", total_rows, MAX_ROWS as u64));
    }
    params["rows_per_bucket"] = json!(rows_per_bucket);

    let hash = BucketHash::new(derive(seed, "or/buckets"), m_buckets);
    let mut unions: BTreeMap<(usize, usize), BitVector> = BTreeMap::new();
    for (t, &(c, mask)) in live.iter().enumerate() {
        unions
            .entry((c, hash.bucket(t)))
            .or_insert_with(|| BitVector::zeros(n))
            .or_assign(mask);
    }
    let mut r = rng(derive(seed, "or/rows"));
    let start = sink.k();
    let mut buckets = Vec::with_capacity(unions.len());
    // every bucket of every used class gets its rows, empty ones as zeros, so
    // the row count depends only on the weights and never on the term layout
    for &c in &used_classes {
        for j in 0..m_buckets {
            match unions.get(&(c, j)) {
                Some(support) => {
                    let from = sink.k();
                    for _ in 0..rows_per_bucket {
                        let row = uniform_row(support, &mut r);
                        sink.push_words(&row);
                    }
                    buckets.push(OrBucket {
                        weight: grid.classes[c],
                        rows: Rows::new(from, rows_per_bucket),
                    });
                }
                None => sink.push_zero_rows(rows_per_bucket),
            }
        }
    }
    sink.close("buckets", start);
    Ok((
        Some(OrCount {
            buckets,
            total_buckets,
            rows_per_bucket,
            needed_count: ceil_tol(ratio) as usize,
            theta: spec.theta,
        }),
        params,
    ))
}

/// Sketch for `[Σ_j w_j · OR(x_{A_j}) ≥ θ]` with margin `m`.
pub fn build_ltf_or_sketch(spec: &LtfOr, delta: f64, seed: u64) -> Result<SketchPlan> {
    check_delta(delta)?;
    let mut sink = RowSink::new(spec.n());
    let (count, params) = push_or_count(&mut sink, spec, delta, derive(seed, "ltf_or"))?;
    let post = match count {
        Some(c) => PostProcessor::OrCount(c),
        None => PostProcessor::Constant { value: 0.0 },
    };
    sink.finish("ltf_or", seed, params, ErrorKind::ErrorRate, delta, post)
}

/// Threshold "more than `d` of the sets are hit": unit weights, `θ = d + ½`,
/// `m = ½`. Outputs 1 when more than `d` sets meet `x`, 0 when at most `d` do.
pub fn build_ham_threshold_of_ors(
    n: usize,
    d: usize,
    sets: &[Vec<usize>],
    delta: f64,
    seed: u64,
) -> Result<SketchPlan> {
    if d == 0 {
        return Err(Error::param("d must be at least 1"));
    }
    let terms = sets
        .iter()
        .map(|s| OrTerm {
            weight: 1.0,
            indices: s.clone(),
        })
        .collect();
    let spec = LtfOr::new(n, d as f64 + 0.5, 0.5, terms)?;
    let mut plan = build_ltf_or_sketch(&spec, delta, seed)?;
    plan.meta.builder = "ham_threshold_of_ors".into();
    plan.meta.params["d"] = json!(d);
    Ok(plan)
}

fn unit_terms(sets: &[Vec<usize>]) -> Vec<OrTerm> {
    sets.iter()
        .map(|s| OrTerm {
            weight: 1.0,
            indices: s.clone(),
        })
        .collect()
}

/// Rank sketch for a rank-2 matroid given by its clique partition.
///
/// A zero test separates rank 0; a "at least two cliques hit" test over the
/// cliques separates rank 2 from rank 1.
pub fn build_rank2_sketch(m: &Rank2Matroid, scaled: bool, delta: f64, seed: u64) -> Result<SketchPlan> {
    check_delta(delta)?;
    let n = m.n();
    let half = delta / 2.0;
    let mut sink = RowSink::new(n);
    let zero_rows = ceil_tol((2.0 / delta).log2()) as usize;
    let zero = push_zero_test(&mut sink, "zero_test", &BitVector::ones(n), zero_rows, &mut rng(derive(seed, "rank2/zero")));
    let spec = LtfOr::new(n, 1.5, 0.5, unit_terms(m.cliques()))?;
    let (pairs, mut params) = push_or_count(&mut sink, &spec, half, derive(seed, "rank2/pairs"))?;
    let scale = if scaled && m.full_rank() > 0 {
        1.0 / m.full_rank() as f64
    } else {
        1.0
    };
    params["zero_rows"] = json!(zero_rows);
    params["cliques"] = json!(m.cliques().len());
    params["scaled"] = json!(scaled);
    let post = match pairs {
        Some(pairs) => PostProcessor::Rank2 { zero, pairs, scale },
        // n = 0: the only input is the empty set
        None => PostProcessor::Constant { value: 0.0 },
    };
    sink.finish("rank2", seed, params, ErrorKind::ErrorRate, delta, post)
}

/// Sketch of `[at least r forests are hit]` over a greedy forest decomposition,
/// where `r` is the rank of the whole edge set.
///
/// This is an indicator, not the rank itself; it agrees with `[rank(x) = r]`
/// only on graphs where hitting `r` forests forces full rank.
pub fn build_graphic_sketch(m: &GraphicMatroid, delta: f64, seed: u64) -> Result<SketchPlan> {
    check_delta(delta)?;
    let n = m.n();
    let r = m.full_rank();
    let forests = m.forest_decomposition();
    let mut params = json!({ "rank": r, "forests": forests.len(), "delta": delta });
    if r == 0 {
        // at least zero forests are always hit
        return RowSink::new(n).finish("graphic", seed, params, ErrorKind::ErrorRate, 0.0, PostProcessor::Constant { value: 1.0 });
    }
    let spec = LtfOr::new(n, r as f64 - 0.5, 0.5, unit_terms(&forests))?;
    let mut sink = RowSink::new(n);
    let (count, inner) = push_or_count(&mut sink, &spec, delta, derive(seed, "graphic"))?;
    params["or_count"] = inner;
    let post = match count {
        Some(c) => PostProcessor::OrCount(c),
        None => PostProcessor::Constant { value: 0.0 },
    };
    sink.finish("graphic", seed, params, ErrorKind::ErrorRate, delta, post)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sketch::plan::estimate;
    use crate::valuations::{graphic_rank_eval, rank2_eval, validate_ltf};
    use proptest::prelude::{prop_assert_eq, proptest, ProptestConfig, Strategy};

    fn run(plan: &SketchPlan, x: &BitVector) -> f64 {
        estimate(plan, &plan.sketch(x).unwrap()).unwrap()
    }

    #[test]
    fn gap_params_example() {
        let g = gap_params(2, 0.1).unwrap();
        assert_eq!(g.p, 0.25);
        assert_eq!(g.beta_d, 0.375);
        assert_eq!(g.beta_2d, 0.46875);
        assert!((g.tau - 0.421875).abs() < 1e-15);
        let expect = (2.0 * 20f64.ln() / (0.09375f64 * 0.09375)).ceil() as usize;
        assert_eq!(g.rows, expect);
    }

    #[test]
    fn beta_matches_exhaustive_row_probability() {
        // P[|row ∩ x| odd] for a p-biased row, summed over all row masks on 6 coordinates
        let p: f64 = 0.25;
        for k in 0..=6usize {
            let x = (1u32 << k) - 1;
            let mut prob = 0.0;
            for row in 0u32..64 {
                let ones = row.count_ones() as i32;
                let pr = p.powi(ones) * (1.0 - p).powi(6 - ones);
                if (row & x).count_ones() % 2 == 1 {
                    prob += pr;
                }
            }
            assert!((prob - beta(p, k)).abs() < 1e-12);
        }
    }

    #[test]
    fn d_one_is_not_degenerate() {
        let g = gap_params(1, 0.1).unwrap();
        assert!(g.beta_2d > g.beta_d);
    }

    #[test]
    fn ham_gap_zero_input_is_light() {
        let plan = build_ham_gap_sketch(16, 2, 0.1, 4).unwrap();
        assert_eq!(run(&plan, &BitVector::zeros(16)), 1.0);
        assert_eq!(plan.k(), gap_params(2, 0.1).unwrap().rows);
        assert!(build_ham_gap_sketch(3, 2, 0.1, 0).is_err());
        assert!(build_ham_gap_sketch(8, 2, 1.0, 0).is_err());
    }

    #[test]
    fn ham_gap_monte_carlo() {
        let n = 16;
        let mut wrong = 0;
        let trials = 400;
        for t in 0..trials {
            let plan = build_ham_gap_sketch(n, 2, 0.1, t).unwrap();
            let light = BitVector::from_indices(n, &[(t % 16) as usize, ((t + 5) % 16) as usize]).unwrap();
            let heavy = BitVector::from_indices(n, &[0, 3, 7, (8 + t % 8) as usize]).unwrap();
            wrong += (run(&plan, &light) != 1.0) as usize;
            wrong += (run(&plan, &heavy) != 0.0) as usize;
        }
        assert!(wrong as f64 / (2 * trials) as f64 <= 0.12, "{wrong}");
    }

    #[test]
    fn zero_test_is_one_sided() {
        let plan = build_zero_test(10, 0.125, 1).unwrap();
        assert_eq!(plan.k(), 3);
        for s in 0..50 {
            let plan = build_zero_test(10, 0.125, s).unwrap();
            assert_eq!(run(&plan, &BitVector::zeros(10)), 0.0);
        }
        let x = BitVector::from_indices(10, &[4]).unwrap();
        let misses = (0..4000)
            .filter(|&s| run(&build_zero_test(10, 0.5, s).unwrap(), &x) == 0.0)
            .count();
        assert!((misses as f64 / 4000.0 - 0.5).abs() < 0.03);
    }

    #[test]
    fn prune_example() {
        let l = Ltf::new(3.0, 1.0, vec![4.0, 4.0, 0.5]).unwrap();
        let p = prune_weights(&l);
        assert_eq!(p.weights, vec![4.0, 4.0, 0.0]);
        for x in 0..8u64 {
            let xv = BitVector::from_u64(3, x);
            assert_eq!(l.eval(&xv).unwrap(), p.eval(&xv).unwrap());
        }
    }

    #[test]
    fn grid_size_at_ratio_eight() {
        let g = WeightGrid::new(8.0, 1.0).unwrap();
        let t = (8f64.ln() / (1.0125f64).ln()).ceil() as usize;
        assert_eq!(t, 168);
        assert_eq!(g.classes.len(), 169);
        assert!(*g.classes.last().unwrap() >= 16.0);
    }

    #[test]
    fn grid_classes_round_down() {
        let g = WeightGrid::new(3.0, 1.0).unwrap();
        for w in [2.0, 2.0001, 3.3, 5.9, 6.0, 100.0] {
            let c = g.class_of(w).unwrap();
            assert!(g.classes[c] <= w.min(6.0) + 1e-12);
            assert!(c + 1 == g.classes.len() || g.classes[c + 1] > w.min(6.0));
        }
        assert_eq!(g.class_of(1.99), None);
    }

    #[test]
    fn round_example() {
        let l = Ltf::new(3.0, 1.0, vec![4.0, 4.0]).unwrap();
        let r = round_weights(&l).unwrap();
        for x in 0..4u64 {
            let xv = BitVector::from_u64(2, x);
            assert_eq!(l.eval(&xv).unwrap(), r.ltf.eval(&xv).unwrap());
        }
        assert!(round_weights(&Ltf::new(3.0, 1.0, vec![1.0]).unwrap()).is_err());
    }

    fn random_ltf() -> impl Strategy<Value = Ltf> {
        (2usize..=10, 1u64..1000).prop_map(|(n, s)| {
            let mut r = rng(s);
            let w: Vec<f64> = (0..n).map(|_| (r.random_range(0..40) as f64) / 4.0).collect();
            let theta = r.random_range(1..60) as f64 / 4.0 + 0.125;
            let probe = Ltf::new(theta, 1e-9, w.clone()).unwrap();
            let m = validate_ltf(&probe).unwrap().true_margin.unwrap();
            Ltf::new(theta, m, w).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn prune_and_round_preserve_outputs(l in random_ltf()) {
            let p = prune_weights(&l);
            let r = round_weights(&p).unwrap();
            for x in 0..1u64 << l.n() {
                let xv = BitVector::from_u64(l.n(), x);
                let want = l.eval(&xv).unwrap();
                prop_assert_eq!(p.eval(&xv).unwrap(), want);
                prop_assert_eq!(r.ltf.eval(&xv).unwrap(), want);
            }
        }
    }

    #[test]
    fn ltf_zero_input_and_triggers() {
        let l = Ltf::new(2.5, 0.5, vec![1.0, 1.0, 1.0, 1.0, 6.0, 1.0]).unwrap();
        for mode in [LtfMode::Direct, LtfMode::Compact] {
            for s in 0..20 {
                let plan = build_ltf_sketch(&l, 1.0 / 3.0, s, mode).unwrap();
                assert_eq!(run(&plan, &BitVector::zeros(6)), 0.0);
                let x = BitVector::from_indices(6, &[4]).unwrap();
                assert_eq!(run(&plan, &x), 1.0, "trigger seed {s}");
            }
        }
    }

    #[test]
    fn ltf_all_small_weights_is_constant() {
        let l = Ltf::new(3.0, 1.0, vec![0.5; 4]).unwrap();
        let plan = build_ltf_sketch(&l, 0.1, 0, LtfMode::Direct).unwrap();
        assert_eq!(plan.k(), 0);
        assert_eq!(run(&plan, &BitVector::ones(4)), 0.0);
    }

    #[test]
    fn ltf_capacity() {
        let l = Ltf::new(100.0, 1.0, vec![2.0; 4]).unwrap();
        assert!(matches!(build_ltf_sketch(&l, 0.1, 0, LtfMode::Direct), Err(Error::Capacity { .. })));
    }

    #[test]
    fn ltf_ham_error_rate() {
        let n = 12;
        let l = Ltf::new(2.5, 0.5, vec![1.0; n]).unwrap();
        for mode in [LtfMode::Direct, LtfMode::Compact] {
            let mut wrong = 0usize;
            let mut total = 0usize;
            for s in 0..12u64 {
                let plan = build_ltf_sketch(&l, 1.0 / 3.0, s, mode).unwrap();
                for x in (0..1u64 << n).step_by(7) {
                    let xv = BitVector::from_u64(n, x);
                    wrong += (run(&plan, &xv) != l.eval(&xv).unwrap() as u8 as f64) as usize;
                    total += 1;
                }
            }
            assert!((wrong as f64 / total as f64) <= 1.0 / 3.0, "{mode:?}: {wrong}/{total}");
        }
    }

    #[test]
    fn compact_decodes_light_patterns() {
        let l = Ltf::new(2.5, 0.5, vec![1.0; 8]).unwrap();
        let plan = build_ltf_sketch(&l, 0.05, 3, LtfMode::Compact).unwrap();
        let PostProcessor::LtfCompact(p) = &plan.post else {
            panic!("expected compact decoder")
        };
        let x = BitVector::from_indices(8, &[1]).unwrap();
        let bits = plan.sketch(&x).unwrap();
        let y = p.decode_slots(&bits.slice(p.code.start, p.code.len)).unwrap();
        assert_eq!(y.len(), 1);
    }

    #[test]
    fn ltf_or_basics() {
        let spec = LtfOr::new(
            6,
            2.0,
            1.0,
            vec![
                OrTerm { weight: 5.0, indices: vec![0, 1] },
                OrTerm { weight: 2.0, indices: vec![2] },
                OrTerm { weight: 0.5, indices: vec![3] },
            ],
        )
        .unwrap();
        for s in 0..10 {
            let plan = build_ltf_or_sketch(&spec, 0.1, s).unwrap();
            assert_eq!(run(&plan, &BitVector::zeros(6)), 0.0);
            assert_eq!(run(&plan, &BitVector::from_indices(6, &[4, 5]).unwrap()), 0.0);
            let hit = BitVector::from_indices(6, &[1]).unwrap();
            assert_eq!(run(&plan, &hit), 1.0);
        }
    }

    #[test]
    fn ham_of_ors_small() {
        let sets = vec![vec![0], vec![1]];
        let mut wrong = 0;
        for s in 0..200u64 {
            let plan = build_ham_threshold_of_ors(2, 1, &sets, 0.1, s).unwrap();
            for x in 0..4u64 {
                let want = (x.count_ones() > 1) as u8 as f64;
                wrong += (run(&plan, &BitVector::from_u64(2, x)) != want) as usize;
            }
        }
        assert!(wrong as f64 / 800.0 <= 0.1, "{wrong}");
    }

    #[test]
    fn rank2_size_is_independent_of_n() {
        let small = build_rank2_sketch(&Rank2Matroid::uniform(8), false, 1.0 / 3.0, 0).unwrap();
        let large = build_rank2_sketch(&Rank2Matroid::uniform(500), false, 1.0 / 3.0, 0).unwrap();
        assert_eq!(small.k(), large.k());
    }

    #[test]
    fn rank2_agrees_with_eval() {
        let m = Rank2Matroid::new(8, vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]]).unwrap();
        let mut wrong = 0;
        for s in 0..20u64 {
            let plan = build_rank2_sketch(&m, false, 1.0 / 3.0, s).unwrap();
            assert_eq!(run(&plan, &BitVector::zeros(8)), 0.0);
            for x in 0..256u64 {
                let xv = BitVector::from_u64(8, x);
                wrong += (run(&plan, &xv) != rank2_eval(&m, &xv).unwrap() as f64) as usize;
            }
        }
        assert!(wrong as f64 / (20.0 * 256.0) <= 1.0 / 3.0);
        let scaled = build_rank2_sketch(&m, true, 0.2, 1).unwrap();
        assert_eq!(run(&scaled, &BitVector::from_indices(8, &[0, 7]).unwrap()), 1.0);
    }

    #[test]
    fn graphic_single_edge_and_empty() {
        let m = GraphicMatroid::new(2, vec![(0, 1)]).unwrap();
        let plan = build_graphic_sketch(&m, 0.1, 0).unwrap();
        assert_eq!(run(&plan, &BitVector::ones(1)), 1.0);
        assert_eq!(run(&plan, &BitVector::zeros(1)), 0.0);
        let empty = GraphicMatroid::new(3, vec![]).unwrap();
        assert_eq!(run(&build_graphic_sketch(&empty, 0.1, 0).unwrap(), &BitVector::zeros(0)), 1.0);
    }

    #[test]
    fn graphic_triangle_matches_full_rank_indicator() {
        let m = GraphicMatroid::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let plan = build_graphic_sketch(&m, 0.05, 2).unwrap();
        for x in 0..8u64 {
            let xv = BitVector::from_u64(3, x);
            let full = graphic_rank_eval(&m, &xv).unwrap() == 2;
            // forests {e0, e1} and {e2}: full rank iff both forests are hit
            let forests_hit = (x & 3 != 0) as u8 + (x & 4 != 0) as u8;
            // {e0, e1} has full rank yet misses the second forest
            if x == 3 {
                assert!(full && forests_hit == 1);
            }
            assert_eq!(run(&plan, &xv), (forests_hit >= 2) as u8 as f64);
        }
    }
}
