//! Monte Carlo measurement of sketch error, plus exact cross-checks.
//!
//! Each measurement rebuilds the plan once per trial from
//! `trial_seed(seed, t)` and evaluates it on every input in an [`InputSet`].

use std::fmt::Write as _;
use std::thread;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{best_subspace, wht, DimensionMethod};
use crate::gf2::BitVector;
use crate::hash::{rng, trial_seed};
use crate::input::format_input;
use crate::sketch::{
    build_l1_sampler_with_k, build_subspace_sketch, estimate, ImplicitSampler, PostProcessor,
    SketchPlan,
};
use crate::stream::{for_each_input_sketch, ColumnMasks};
use crate::valuations::{graphic_rank_eval, FunctionSpec, GraphicMatroid};

/// Largest `n` measured over all inputs by default.
pub const EXHAUSTIVE_X_N: usize = 20;
/// Number of sampled inputs above [`EXHAUSTIVE_X_N`].
pub const SAMPLED_X: usize = 10_000;

/// Plan factory: seed in, plan out.
pub type Builder<'a> = dyn Fn(u64) -> Result<SketchPlan> + Sync + 'a;

/// Count, sum and sum of squares; merging is associative and commutative.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Accumulator {
    pub count: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Accumulator {
    #[inline]
    pub fn push(&mut self, v: f64) {
        self.count += 1;
        self.sum += v;
        self.sum_sq += v * v;
    }

    pub fn merge(&mut self, o: &Accumulator) {
        self.count += o.count;
        self.sum += o.sum;
        self.sum_sq += o.sum_sq;
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.sum / self.count as f64
        }
    }

    /// Sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let c = self.count as f64;
        ((self.sum_sq - self.sum * self.sum / c) / (c - 1.0)).max(0.0)
    }

    /// Standard error of the mean.
    pub fn se(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

/// Which inputs to evaluate.
#[derive(Clone, Debug, PartialEq)]
pub enum InputSet {
    /// All `2^n` inputs up to [`EXHAUSTIVE_X_N`], else [`SAMPLED_X`] uniform samples.
    Auto,
    All,
    List(Vec<BitVector>),
    Sample { count: usize, seed: u64 },
}

enum Resolved {
    All(usize),
    List(Vec<BitVector>),
}

impl Resolved {
    fn len(&self) -> usize {
        match self {
            Resolved::All(n) => 1 << n,
            Resolved::List(v) => v.len(),
        }
    }

    fn label(&self, i: usize) -> String {
        match self {
            Resolved::All(n) => format_input(&BitVector::from_u64(*n, i as u64)),
            Resolved::List(v) => format_input(&v[i]),
        }
    }

    fn input(&self, i: usize) -> BitVector {
        match self {
            Resolved::All(n) => BitVector::from_u64(*n, i as u64),
            Resolved::List(v) => v[i].clone(),
        }
    }
}

fn uniform_inputs(n: usize, count: usize, seed: u64) -> Vec<BitVector> {
    use rand::Rng;
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let idx: Vec<usize> = (0..n).filter(|_| r.random::<bool>()).collect();
            BitVector::from_indices(n, &idx).expect("indices below n")
        })
        .collect()
}

fn resolve(inputs: &InputSet, n: usize) -> Result<(Resolved, bool)> {
    Ok(match inputs {
        InputSet::Auto if n <= EXHAUSTIVE_X_N => (Resolved::All(n), false),
        InputSet::Auto => (Resolved::List(uniform_inputs(n, SAMPLED_X, 0)), true),
        InputSet::All => {
            if n > EXHAUSTIVE_X_N {
                return Err(Error::capacity("exhaustive input dimension", n as u64, EXHAUSTIVE_X_N as u64));
            }
            (Resolved::All(n), false)
        }
        InputSet::List(v) => {
            if let Some(x) = v.iter().find(|x| x.len() != n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: x.len(),
                });
            }
            (Resolved::List(v.clone()), false)
        }
        InputSet::Sample { count, seed } => (Resolved::List(uniform_inputs(n, *count, *seed)), true),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub trials: usize,
    pub seed: u64,
    /// Worker threads; trials are split evenly among them.
    pub jobs: usize,
    pub inputs: InputSet,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            trials: 1000,
            seed: 0,
            jobs: 1,
            inputs: InputSet::Auto,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    WorstCaseMse,
    DistributionalMse,
    ErrorRate,
}

/// Per-input result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputStat {
    pub x: String,
    pub f: f64,
    /// Mean squared error or error rate, per the report's metric.
    pub value: f64,
    pub se: f64,
    pub mean_estimate: f64,
    pub mean_estimate_se: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub builder: String,
    pub params: serde_json::Value,
    pub metric: Metric,
    pub trials: usize,
    pub inputs: usize,
    /// Inputs were sampled rather than enumerated.
    pub sampled_inputs: bool,
    pub k_min: usize,
    pub k_max: usize,
    /// Largest per-input value and its standard error.
    pub worst: f64,
    pub worst_se: f64,
    pub worst_x: String,
    /// Average over inputs, with the standard error across trials.
    pub average: f64,
    pub average_se: f64,
    /// Analytic value where the plan has one (uniform MSE of a top-subspace plan).
    pub analytic: Option<f64>,
    pub per_input: Vec<InputStat>,
}

impl ErrorReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per input.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,f,value,se,mean_estimate,mean_estimate_se\n");
        for s in &self.per_input {
            let _ = writeln!(out, "{},{},{},{},{},{}", s.x, s.f, s.value, s.se, s.mean_estimate, s.mean_estimate_se);
        }
        out
    }
}

#[derive(Clone, Default)]
struct Partial {
    per_x_err: Vec<Accumulator>,
    per_x_est: Vec<Accumulator>,
    per_trial: Accumulator,
    k_min: usize,
    k_max: usize,
    first: Option<SketchPlan>,
}

impl Partial {
    fn new(len: usize) -> Self {
        Partial {
            per_x_err: vec![Accumulator::default(); len],
            per_x_est: vec![Accumulator::default(); len],
            per_trial: Accumulator::default(),
            k_min: usize::MAX,
            k_max: 0,
            first: None,
        }
    }

    fn merge(&mut self, o: Partial) {
        for (a, b) in self.per_x_err.iter_mut().zip(&o.per_x_err) {
            a.merge(b);
        }
        for (a, b) in self.per_x_est.iter_mut().zip(&o.per_x_est) {
            a.merge(b);
        }
        self.per_trial.merge(&o.per_trial);
        self.k_min = self.k_min.min(o.k_min);
        self.k_max = self.k_max.max(o.k_max);
        if self.first.is_none() {
            self.first = o.first;
        }
    }
}

fn run_range(
    builder: &Builder<'_>,
    inputs: &Resolved,
    truth: &[f64],
    seed: u64,
    trials: std::ops::Range<usize>,
    loss: fn(f64, f64) -> f64,
) -> Result<Partial> {
    let mut p = Partial::new(inputs.len());
    for t in trials {
        let plan = builder(trial_seed(seed, t as u64))?;
        p.k_min = p.k_min.min(plan.k());
        p.k_max = p.k_max.max(plan.k());
        let mut trial_sum = 0.0;
        let mut visit = |i: usize, bits: &BitVector| {
            let est = plan.post.eval(bits);
            let e = loss(est, truth[i]);
            p.per_x_err[i].push(e);
            p.per_x_est[i].push(est);
            trial_sum += e;
        };
        match inputs {
            Resolved::All(n) => {
                if plan.n() != *n {
                    return Err(Error::DimensionMismatch {
                        expected: *n,
                        found: plan.n(),
                    });
                }
                let masks = ColumnMasks::from_matrix(&plan.matrix);
                for_each_input_sketch(&masks, |x, bits| visit(x as usize, bits))?;
            }
            Resolved::List(v) => {
                for (i, x) in v.iter().enumerate() {
                    visit(i, &plan.sketch(x)?);
                }
            }
        }
        p.per_trial.push(trial_sum / inputs.len() as f64);
        if p.first.is_none() {
            p.first = Some(plan);
        }
    }
    Ok(p)
}

fn run(builder: &Builder<'_>, spec: &FunctionSpec, cfg: &RunConfig, metric: Metric) -> Result<ErrorReport> {
    if cfg.trials == 0 {
        return Err(Error::param("trials must be positive"));
    }
    if metric == Metric::ErrorRate && !spec.is_discrete() {
        return Err(Error::param(format!("error rate needs a discrete-valued spec, got {}", spec.kind())));
    }
    let n = spec.n();
    let (inputs, sampled) = resolve(&cfg.inputs, n)?;
    if inputs.len() == 0 {
        return Err(Error::param("no inputs to measure"));
    }
    let truth = (0..inputs.len())
        // `+ 0.0` normalizes a negative zero
        .map(|i| spec.eval(&inputs.input(i)).map(|v| v + 0.0))
        .collect::<Result<Vec<f64>>>()?;
    let loss: fn(f64, f64) -> f64 = match metric {
        Metric::ErrorRate => |est, f| (est != f) as u8 as f64,
        _ => |est, f| (est - f) * (est - f),
    };
    let jobs = cfg.jobs.clamp(1, cfg.trials);
    let chunk = cfg.trials.div_ceil(jobs);
    let parts: Vec<Result<Partial>> = thread::scope(|s| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                let range = (j * chunk).min(cfg.trials)..((j + 1) * chunk).min(cfg.trials);
                let (inputs, truth) = (&inputs, &truth);
                s.spawn(move || run_range(builder, inputs, truth, cfg.seed, range, loss))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut total = Partial::new(inputs.len());
    for p in parts {
        total.merge(p?);
    }
    let per_input: Vec<InputStat> = (0..inputs.len())
        .map(|i| {
            let (err, est) = (&total.per_x_err[i], &total.per_x_est[i]);
            let se = match metric {
                // binomial standard error
                Metric::ErrorRate => (err.mean() * (1.0 - err.mean()) / err.count as f64).sqrt(),
                _ => err.se(),
            };
            InputStat {
                x: inputs.label(i),
                f: truth[i],
                value: err.mean(),
                se,
                mean_estimate: est.mean(),
                mean_estimate_se: est.se(),
            }
        })
        .collect();
    let worst = per_input
        .iter()
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .expect("at least one input");
    let first = total.first.as_ref().expect("at least one trial");
    let analytic = match (&first.post, metric) {
        (PostProcessor::TopSubspace { .. }, Metric::DistributionalMse) => first.meta.claimed_error,
        _ => None,
    };
    Ok(ErrorReport {
        builder: first.meta.builder.clone(),
        params: first.meta.params.clone(),
        metric,
        trials: cfg.trials,
        inputs: inputs.len(),
        sampled_inputs: sampled,
        k_min: total.k_min,
        k_max: total.k_max,
        worst: worst.value,
        worst_se: worst.se,
        worst_x: worst.x.clone(),
        average: total.per_trial.mean(),
        average_se: total.per_trial.se(),
        analytic,
        per_input,
    })
}

/// `max_x E[(estimate − f(x))²]` over the input set.
pub fn measure_worst_case_mse(builder: &Builder<'_>, spec: &FunctionSpec, cfg: &RunConfig) -> Result<ErrorReport> {
    run(builder, spec, cfg, Metric::WorstCaseMse)
}

/// `E_x E[(estimate − f(x))²]` with `x` uniform over the input set.
pub fn measure_distributional_mse(builder: &Builder<'_>, spec: &FunctionSpec, cfg: &RunConfig) -> Result<ErrorReport> {
    run(builder, spec, cfg, Metric::DistributionalMse)
}

/// `max_x Pr[estimate ≠ f(x)]` for discrete-valued specs.
pub fn measure_error_rate(builder: &Builder<'_>, spec: &FunctionSpec, cfg: &RunConfig) -> Result<ErrorReport> {
    run(builder, spec, cfg, Metric::ErrorRate)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    /// ℓ1 sampling from the full spectrum with `k` rows; worst-case MSE.
    L1,
    /// Best `k`-dimensional Fourier subspace; uniform MSE.
    TopSubspace,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub k: usize,
    pub mse: f64,
    pub se: f64,
    /// `‖f̂‖₁²/k` for ℓ1 points, the excluded Fourier mass for subspace points.
    pub bound: f64,
}

/// Achieved error as a function of sketch size `k`.
pub fn dimension_error_curve(
    spec: &FunctionSpec,
    kind: CurveKind,
    k_grid: &[usize],
    cfg: &RunConfig,
) -> Result<Vec<CurvePoint>> {
    let spectrum = wht(&spec.truth_table()?)?;
    let mut out = Vec::with_capacity(k_grid.len());
    for &k in k_grid {
        match kind {
            CurveKind::L1 => {
                let sampler = match spec {
                    FunctionSpec::Additive { w } => crate::sketch::sampler_for_additive(w)?,
                    FunctionSpec::Coverage(c) => crate::sketch::sampler_for_coverage(c),
                    _ => ImplicitSampler::Explicit(spectrum.clone()),
                };
                let mass = sampler.total_mass();
                let r = measure_worst_case_mse(&|s| build_l1_sampler_with_k(&sampler, k, s), spec, cfg)?;
                out.push(CurvePoint {
                    k,
                    mse: r.worst,
                    se: r.worst_se,
                    bound: if k == 0 { f64::INFINITY } else { mass * mass / k as f64 },
                });
            }
            CurveKind::TopSubspace => {
                if k > spectrum.n() {
                    return Err(Error::param(format!("subspace dimension {k} exceeds n = {}", spectrum.n())));
                }
                let method = if spectrum.n() <= crate::fourier::MAX_EXHAUSTIVE_N {
                    DimensionMethod::Exhaustive
                } else {
                    DimensionMethod::Greedy
                };
                let basis = best_subspace(&spectrum, k, method)?.basis;
                let plan = build_subspace_sketch(&spectrum, &basis)?;
                let bound = plan.meta.claimed_error.unwrap_or(f64::NAN);
                let r = measure_distributional_mse(&|_| Ok(plan.clone()), spec, &RunConfig { trials: 1, ..cfg.clone() })?;
                out.push(CurvePoint {
                    k: plan.k(),
                    mse: r.average,
                    se: r.average_se,
                    bound,
                });
            }
        }
    }
    Ok(out)
}

pub fn curve_to_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from("k,mse,se,bound\n");
    for p in points {
        let _ = writeln!(out, "{},{},{},{}", p.k, p.mse, p.se, p.bound);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphicFormulaReport {
    pub edges: usize,
    pub rank: usize,
    pub forests: Vec<Vec<usize>>,
    pub checked: usize,
    /// Inputs where "at least `rank` forests hit" differs from "`rank(x) = rank`".
    pub disagreements: Vec<String>,
}

impl GraphicFormulaReport {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Largest edge count [`check_graphic_formula`] enumerates.
pub const MAX_GRAPHIC_CHECK_EDGES: usize = 24;

/// Compares the forest-hitting indicator with the full-rank indicator on
/// every edge subset.
pub fn check_graphic_formula(m: &GraphicMatroid) -> Result<GraphicFormulaReport> {
    let n = m.n();
    if n > MAX_GRAPHIC_CHECK_EDGES {
        return Err(Error::capacity("graphic check edges", n as u64, MAX_GRAPHIC_CHECK_EDGES as u64));
    }
    let r = m.full_rank();
    let forests = m.forest_decomposition();
    let forest_masks: Vec<u64> = forests
        .iter()
        .map(|f| f.iter().fold(0u64, |acc, &e| acc | 1 << e))
        .collect();
    let mut disagreements = Vec::new();
    for x in 0u64..1 << n {
        let hit = forest_masks.iter().filter(|&&f| f & x != 0).count();
        let xv = BitVector::from_u64(n, x);
        let full = graphic_rank_eval(m, &xv)? == r;
        if (hit >= r) != full {
            disagreements.push(format_input(&xv));
        }
    }
    Ok(GraphicFormulaReport {
        edges: n,
        rank: r,
        forests,
        checked: 1 << n,
        disagreements,
    })
}

/// Plain evaluation on every input, for checks that need no sketch.
pub fn exhaustive_table(plan: &SketchPlan) -> Result<Vec<f64>> {
    let masks = ColumnMasks::from_matrix(&plan.matrix);
    let mut out = vec![0.0; 1usize.checked_shl(plan.n() as u32).unwrap_or(0)];
    for_each_input_sketch(&masks, |x, bits| out[x as usize] = estimate(plan, bits).expect("k bits"))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sketch::{build_constant_sketch, build_expectation_sketch, build_l1_sampler, build_rank2_sketch, sampler_for_additive};
    use crate::valuations::Rank2Matroid;
    use proptest::prelude::*;

    #[test]
    fn accumulator_merge_is_order_free() {
        let vals = [1.0, 4.0, 2.5, -3.0, 0.0];
        let mut all = Accumulator::default();
        vals.iter().for_each(|v| all.push(*v));
        let (mut a, mut b) = (Accumulator::default(), Accumulator::default());
        vals[..2].iter().for_each(|v| a.push(*v));
        vals[2..].iter().for_each(|v| b.push(*v));
        b.merge(&a);
        assert_eq!(b.count, all.count);
        assert!((b.mean() - all.mean()).abs() < 1e-15);
        assert!((b.variance() - all.variance()).abs() < 1e-12);
    }

    #[test]
    fn constant_plan_on_constant_function_is_exact() {
        let spec = FunctionSpec::Table { n: 3, values: vec![2.0; 8] };
        let r = measure_worst_case_mse(&|_| build_constant_sketch(3, 2.0), &spec, &RunConfig { trials: 5, ..Default::default() }).unwrap();
        assert_eq!(r.worst, 0.0);
        assert_eq!(r.worst_se, 0.0);
        assert_eq!(r.k_max, 0);
    }

    #[test]
    fn l1_additive_worst_case() {
        let spec = FunctionSpec::Additive { w: vec![1.0; 4] };
        let sampler = sampler_for_additive(&[1.0; 4]).unwrap();
        let cfg = RunConfig { trials: 2000, seed: 3, jobs: 2, ..Default::default() };
        let r = measure_worst_case_mse(&|s| build_l1_sampler(&sampler, 1.0, s), &spec, &cfg).unwrap();
        assert_eq!(r.k_max, 16);
        assert!(r.worst <= 1.0 + 3.0 * r.worst_se, "{} ± {}", r.worst, r.worst_se);
    }

    #[test]
    fn jobs_do_not_change_results() {
        let spec = FunctionSpec::Additive { w: vec![1.0, 2.0, 0.5] };
        let sampler = sampler_for_additive(&[1.0, 2.0, 0.5]).unwrap();
        let b = |s| build_l1_sampler(&sampler, 0.5, s);
        let one = measure_worst_case_mse(&b, &spec, &RunConfig { trials: 40, jobs: 1, ..Default::default() }).unwrap();
        let three = measure_worst_case_mse(&b, &spec, &RunConfig { trials: 40, jobs: 3, ..Default::default() }).unwrap();
        for (a, b) in one.per_input.iter().zip(&three.per_input) {
            assert!((a.value - b.value).abs() < 1e-9);
        }
    }

    #[test]
    fn expectation_plan_distributional_is_variance() {
        let values: Vec<f64> = (0..16).map(|x: u32| x.count_ones() as f64).collect();
        let spec = FunctionSpec::Table { n: 4, values: values.clone() };
        let r = measure_distributional_mse(&|_| build_expectation_sketch(&values), &spec, &RunConfig { trials: 1, ..Default::default() }).unwrap();
        assert!((r.average - 1.0).abs() < 1e-12);
    }

    #[test]
    fn error_rate_rejects_real_specs_and_zero_is_exact_for_rank2() {
        let spec = FunctionSpec::Additive { w: vec![1.0] };
        assert!(measure_error_rate(&|_| build_constant_sketch(1, 0.0), &spec, &RunConfig::default()).is_err());
        let m = Rank2Matroid::uniform(8);
        let spec = FunctionSpec::Rank2Matroid { matroid: m.clone(), scaled: false };
        let cfg = RunConfig { trials: 30, ..Default::default() };
        let r = measure_error_rate(&|s| build_rank2_sketch(&m, false, 1.0 / 3.0, s), &spec, &cfg).unwrap();
        assert_eq!(r.per_input[0].value, 0.0);
        assert!(r.worst <= 1.0 / 3.0 + 3.0 * r.worst_se.max(1.0 / 30.0));
    }

    #[test]
    fn curve_endpoints_for_subspace() {
        let spec = FunctionSpec::HockeyStick { n: 5, alpha: 1.0 };
        let table = spec.truth_table().unwrap();
        let mean = table.iter().sum::<f64>() / 32.0;
        let var = table.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 32.0;
        let pts = dimension_error_curve(&spec, CurveKind::TopSubspace, &[0, 5], &RunConfig::default()).unwrap();
        assert!((pts[0].mse - var).abs() < 1e-12);
        assert!(pts[1].mse < 1e-20);
    }

    #[test]
    fn graphic_formula_examples() {
        let edge = GraphicMatroid::new(2, vec![(0, 1)]).unwrap();
        assert!(check_graphic_formula(&edge).unwrap().agrees());
        // a tree is a single forest, so at most one OR can fire while r = 3
        let tree = GraphicMatroid::new(4, vec![(0, 1), (1, 2), (1, 3)]).unwrap();
        assert_eq!(check_graphic_formula(&tree).unwrap().disagreements, vec!["0b111".to_string()]);
        let tri = GraphicMatroid::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let r = check_graphic_formula(&tri).unwrap();
        assert_eq!(r.checked, 8);
        assert_eq!(r.disagreements, vec!["0b110".to_string()]);
    }

    #[test]
    fn sampled_inputs_are_flagged() {
        let spec = FunctionSpec::Additive { w: vec![1.0; 3] };
        let cfg = RunConfig { trials: 2, inputs: InputSet::Sample { count: 5, seed: 1 }, ..Default::default() };
        let r = measure_worst_case_mse(&|_| build_constant_sketch(3, 1.0), &spec, &cfg).unwrap();
        assert!(r.sampled_inputs);
        assert_eq!(r.inputs, 5);
        assert!(r.to_csv().lines().count() == 6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn distributional_below_worst(seed in any::<u64>(), w in proptest::collection::vec(0.0f64..3.0, 1..5)) {
            let spec = FunctionSpec::Additive { w: w.clone() };
            let sampler = sampler_for_additive(&w).unwrap();
            let b = |s| build_l1_sampler_with_k(&sampler, 2, s);
            let cfg = RunConfig { trials: 50, seed, ..Default::default() };
            let worst = measure_worst_case_mse(&b, &spec, &cfg).unwrap();
            let dist = measure_distributional_mse(&b, &spec, &cfg).unwrap();
            prop_assert!(dist.average <= worst.worst + 3.0 * (worst.worst_se + dist.average_se) + 1e-12);
        }
    }
}
