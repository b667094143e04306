//! ℓ1 sampling: rows are characters drawn with probability `|f̂(α)|/L`, and
//! the decoder averages `sgn(f̂(α))·χ_α(x)·L`.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde_json::json;

use super::plan::{ErrorKind, PostProcessor, SketchPlan};
use super::rows::{ceil_tol, RowSink};
use crate::error::{Error, Result};
use crate::fourier::Spectrum;
use crate::gf2::{words_for, BitVector};
use crate::hash::{derive, rng, PlanRng};
use crate::valuations::Coverage;

/// Default cap on the number of sampled rows.
pub const MAX_L1_ROWS: usize = 1 << 20;

/// Source of characters for ℓ1 sampling, each with a known total mass `L`.
#[derive(Clone, Debug)]
pub enum ImplicitSampler {
    /// `f(x) = Σ w_i x_i`: `f̂(∅) = Σw/2`, `f̂({i}) = −w_i/2`.
    Additive { w: Vec<f64> },
    /// Mixture over universe elements of `w_i · OR_{T_i}`.
    Coverage(Coverage),
    /// Any function given by its full spectrum.
    Explicit(Spectrum),
}

/// One sampled character and the sign of its coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Draw {
    pub alpha: BitVector,
    pub negative: bool,
}

impl ImplicitSampler {
    pub fn n(&self) -> usize {
        match self {
            ImplicitSampler::Additive { w } => w.len(),
            ImplicitSampler::Coverage(c) => c.n(),
            ImplicitSampler::Explicit(s) => s.n(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ImplicitSampler::Additive { .. } => "additive",
            ImplicitSampler::Coverage(_) => "coverage",
            ImplicitSampler::Explicit(_) => "explicit",
        }
    }

    /// `L`, the ℓ1 mass of the sampled decomposition (`‖f̂‖₁` for additive
    /// and explicit samplers, an upper bound on it for coverage).
    pub fn total_mass(&self) -> f64 {
        match self {
            ImplicitSampler::Additive { w } => {
                w.iter().sum::<f64>().abs() / 2.0 + w.iter().map(|v| v.abs()).sum::<f64>() / 2.0
            }
            ImplicitSampler::Coverage(c) => c
                .universe_weights()
                .iter()
                .zip(c.element_masks())
                .map(|(w, t)| w * or_mass(t.count_ones()))
                .sum(),
            ImplicitSampler::Explicit(s) => s.coeffs().iter().map(|c| c.abs()).sum(),
        }
    }

    /// Draws `count` characters; empty when the mass is zero.
    pub fn draw(&self, count: usize, rng: &mut PlanRng) -> Result<Vec<Draw>> {
        let n = self.n();
        if self.total_mass() == 0.0 || count == 0 {
            return Ok(Vec::new());
        }
        let weighted = |weights: &[f64]| {
            WeightedIndex::new(weights).map_err(|e| Error::param(format!("sampler weights: {e}")))
        };
        match self {
            ImplicitSampler::Additive { w } => {
                let mut weights = Vec::with_capacity(n + 1);
                weights.push(w.iter().sum::<f64>().abs());
                weights.extend(w.iter().map(|v| v.abs()));
                let dist = weighted(&weights)?;
                let total: f64 = w.iter().sum();
                Ok((0..count)
                    .map(|_| match dist.sample(rng) {
                        0 => Draw {
                            alpha: BitVector::zeros(n),
                            negative: total < 0.0,
                        },
                        j => {
                            let mut alpha = BitVector::zeros(n);
                            alpha.set(j - 1, true);
                            Draw {
                                alpha,
                                negative: w[j - 1] > 0.0,
                            }
                        }
                    })
                    .collect())
            }
            ImplicitSampler::Coverage(c) => {
                let sizes: Vec<usize> = c.element_masks().iter().map(|t| t.count_ones()).collect();
                let weights: Vec<f64> = c
                    .universe_weights()
                    .iter()
                    .zip(&sizes)
                    .map(|(w, &s)| w * or_mass(s))
                    .collect();
                let dist = weighted(&weights)?;
                Ok((0..count)
                    .map(|_| {
                        let t = &c.element_masks()[dist.sample(rng)];
                        // within OR_T: ∅ carries half the mass, the rest is
                        // spread evenly over nonempty subsets with sign −
                        if rng.random::<bool>() {
                            Draw {
                                alpha: BitVector::zeros(n),
                                negative: false,
                            }
                        } else {
                            Draw {
                                alpha: nonempty_subset(t, rng),
                                negative: true,
                            }
                        }
                    })
                    .collect())
            }
            ImplicitSampler::Explicit(s) => {
                let support = s.support();
                let weights: Vec<f64> = support.iter().map(|&a| s.coeff(a).abs()).collect();
                let dist = weighted(&weights)?;
                Ok((0..count)
                    .map(|_| {
                        let a = support[dist.sample(rng)];
                        Draw {
                            alpha: s.alpha_vector(a),
                            negative: s.coeff(a) < 0.0,
                        }
                    })
                    .collect())
            }
        }
    }
}

/// `‖ĝ‖₁` for `g = OR` over `t` variables: `2 − 2^{1−t}` (0 for `t = 0`).
fn or_mass(t: usize) -> f64 {
    if t == 0 {
        0.0
    } else {
        2.0 - 2f64.powi(1 - t.min(1100) as i32)
    }
}

fn nonempty_subset(t: &BitVector, rng: &mut PlanRng) -> BitVector {
    loop {
        let words: Vec<u64> = t.words().iter().map(|&m| rng.next_u64_masked(m)).collect();
        let v = BitVector::from_words(t.len(), words);
        if !v.is_zero() {
            return v;
        }
    }
}

trait MaskedDraw {
    fn next_u64_masked(&mut self, mask: u64) -> u64;
}

impl MaskedDraw for PlanRng {
    fn next_u64_masked(&mut self, mask: u64) -> u64 {
        self.random::<u64>() & mask
    }
}

pub fn sampler_for_additive(w: &[f64]) -> Result<ImplicitSampler> {
    if let Some(i) = w.iter().position(|v| !v.is_finite()) {
        return Err(Error::param(format!("w[{i}] is not finite")));
    }
    Ok(ImplicitSampler::Additive { w: w.to_vec() })
}

pub fn sampler_for_coverage(c: &Coverage) -> ImplicitSampler {
    ImplicitSampler::Coverage(c.clone())
}

/// Rows needed for squared error `eps`: `⌈L²/eps⌉`.
pub fn l1_rows(mass: f64, eps: f64) -> Result<usize> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::param(format!("eps must be positive and finite, got {eps}")));
    }
    if !mass.is_finite() {
        return Err(Error::param("sampler mass is not finite"));
    }
    let k = ceil_tol(mass * mass / eps);
    if k > MAX_L1_ROWS as f64 {
        return Err(Error::capacity("l1 sample rows", k.min(u64::MAX as f64) as u64, MAX_L1_ROWS as u64));
    }
    Ok(k as usize)
}

/// ℓ1-sampling plan with `k = ⌈L²/eps⌉` rows, so the error is at most `eps`.
pub fn build_l1_sampler(sampler: &ImplicitSampler, eps: f64, seed: u64) -> Result<SketchPlan> {
    let k = l1_rows(sampler.total_mass(), eps)?;
    build_l1_inner(sampler, k, Some(eps), seed)
}

/// ℓ1-sampling plan with an explicit row count.
pub fn build_l1_sampler_with_k(sampler: &ImplicitSampler, k: usize, seed: u64) -> Result<SketchPlan> {
    if k > MAX_L1_ROWS {
        return Err(Error::capacity("l1 sample rows", k as u64, MAX_L1_ROWS as u64));
    }
    build_l1_inner(sampler, k, None, seed)
}

fn build_l1_inner(sampler: &ImplicitSampler, k: usize, eps: Option<f64>, seed: u64) -> Result<SketchPlan> {
    let n = sampler.n();
    let mass = sampler.total_mass();
    let k = if mass == 0.0 { 0 } else { k };
    let mut r = rng(derive(seed, "l1"));
    let draws = sampler.draw(k, &mut r)?;
    let mut sink = RowSink::new(n);
    let mut negative = BitVector::zeros(draws.len());
    for (i, d) in draws.iter().enumerate() {
        debug_assert_eq!(d.alpha.words().len(), words_for(n));
        sink.push_words(d.alpha.words());
        negative.set(i, d.negative);
    }
    sink.close("samples", 0);
    let bound = if k == 0 { 0.0 } else { mass * mass / k as f64 };
    sink.finish(
        "l1_sampler",
        seed,
        json!({ "sampler": sampler.kind(), "eps": eps, "mass": mass, "k": k }),
        ErrorKind::Mse,
        eps.unwrap_or(bound),
        PostProcessor::L1Mean {
            negative,
            scale: mass,
        },
    )
}

/// Wraps the decoder in `min(b, ·)`; `b = +∞` leaves outputs unchanged.
pub fn compose_budget(plan: SketchPlan, b: f64) -> Result<SketchPlan> {
    if b.is_nan() {
        return Err(Error::param("budget is NaN"));
    }
    let SketchPlan {
        mut meta,
        matrix,
        post,
    } = plan;
    meta.builder = format!("budget_clamp({})", meta.builder);
    if let serde_json::Value::Object(map) = &mut meta.params {
        map.insert("budget".into(), if b.is_finite() { json!(b) } else { serde_json::Value::Null });
    }
    let post = PostProcessor::BudgetClamp {
        inner: Box::new(post),
        b: b.is_finite().then_some(b).or(if b == f64::NEG_INFINITY { Some(b) } else { None }),
    };
    SketchPlan::new(meta, matrix, post)
}
