//! Sketch builders and decoders.
//!
//! Every builder returns a [`SketchPlan`]: a parity matrix plus a
//! [`PostProcessor`] that maps the sketch bits to an estimate. Builders are
//! deterministic in their seed.

mod plan;
mod rows;
mod sampler;
mod subspace;
mod threshold;

use serde::{Deserialize, Serialize};

pub use plan::{
    estimate, ErrorKind, GapTest, LtfCompact, LtfDirect, OrBucket, OrCount, PlanMeta,
    PostProcessor, Rows, SizeTerm, SketchPlan, MAX_DECODE_TABLE, PLAN_FORMAT_VERSION,
};
pub use rows::MAX_ROWS;
pub use sampler::{
    build_l1_sampler, build_l1_sampler_with_k, compose_budget, l1_rows, sampler_for_additive,
    sampler_for_coverage, Draw, ImplicitSampler, MAX_L1_ROWS,
};
pub use subspace::{
    build_constant_sketch, build_expectation_sketch, build_subspace_sketch, build_top_subspace_sketch,
};
pub use threshold::{
    beta, build_graphic_sketch, build_ham_gap_sketch, build_ham_threshold_of_ors,
    build_ltf_or_sketch, build_ltf_sketch, build_rank2_sketch, build_zero_test, gap_params,
    prune_weights, round_weights, zero_test_rows, GapParams, LtfMode, RoundedLtf, WeightGrid,
    MAX_THETA_OVER_M,
};

use crate::error::{Error, Result};
use crate::fourier::{wht, DimensionMethod};
use crate::valuations::FunctionSpec;

/// How to sketch a spec when more than one builder applies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// The natural builder for the spec's kind.
    #[default]
    Auto,
    /// ℓ1 sampling (implicit for additive and coverage, from the full spectrum otherwise).
    L1,
    /// Top Fourier subspace; uniform-distribution guarantee.
    TopSubspace,
    /// Constant at the uniform mean.
    Expectation,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildOptions {
    /// Squared-error target for real-valued plans.
    pub eps: f64,
    /// Failure probability for threshold plans.
    pub delta: f64,
    pub ltf_mode: LtfMode,
    pub strategy: Strategy,
    pub method: DimensionMethod,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            eps: 0.1,
            delta: 1.0 / 3.0,
            ltf_mode: LtfMode::Direct,
            strategy: Strategy::Auto,
            method: DimensionMethod::Exhaustive,
        }
    }
}

fn explicit_l1(spec: &FunctionSpec, eps: f64, seed: u64) -> Result<SketchPlan> {
    let s = wht(&spec.truth_table()?)?;
    build_l1_sampler(&ImplicitSampler::Explicit(s), eps, seed)
}

/// Builds the plan `opts.strategy` selects for `spec`.
pub fn build_for_spec(spec: &FunctionSpec, opts: &BuildOptions, seed: u64) -> Result<SketchPlan> {
    match opts.strategy {
        Strategy::TopSubspace => {
            let s = wht(&spec.truth_table()?)?;
            return build_top_subspace_sketch(&s, opts.eps, opts.method);
        }
        Strategy::Expectation => return build_expectation_sketch(&spec.truth_table()?),
        Strategy::L1 | Strategy::Auto => {}
    }
    let l1 = opts.strategy == Strategy::L1;
    match spec {
        FunctionSpec::Additive { w } => build_l1_sampler(&sampler_for_additive(w)?, opts.eps, seed),
        FunctionSpec::BudgetAdditive { b, w } => {
            compose_budget(build_l1_sampler(&sampler_for_additive(w)?, opts.eps, seed)?, *b)
        }
        FunctionSpec::HockeyStick { n, alpha } => {
            let w = vec![2.0 * alpha / *n as f64; *n];
            compose_budget(build_l1_sampler(&sampler_for_additive(&w)?, opts.eps, seed)?, *alpha)
        }
        FunctionSpec::Coverage(c) => build_l1_sampler(&sampler_for_coverage(c), opts.eps, seed),
        FunctionSpec::Table { .. } => explicit_l1(spec, opts.eps, seed),
        _ if l1 => explicit_l1(spec, opts.eps, seed),
        FunctionSpec::Ltf(l) => build_ltf_sketch(l, opts.delta, seed, opts.ltf_mode),
        FunctionSpec::LtfOr(l) => build_ltf_or_sketch(l, opts.delta, seed),
        FunctionSpec::Rank2Matroid { matroid, scaled } => {
            build_rank2_sketch(matroid, *scaled, opts.delta, seed)
        }
        FunctionSpec::GraphicMatroid { matroid, scaled } => {
            if *scaled {
                return Err(Error::param(
                    "the graphic sketch outputs a 0/1 indicator; scaling does not apply",
                ));
            }
            build_graphic_sketch(matroid, opts.delta, seed)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BitVector;

    #[test]
    fn every_kind_builds() {
        let docs = [
            r#"{"kind":"additive","n":3,"w":[1,2,0.5]}"#,
            r#"{"kind":"budget_additive","n":2,"b":1.5,"w":[1,1]}"#,
            r#"{"kind":"hockey_stick","n":5,"alpha":1}"#,
            r#"{"kind":"table","n":2,"values":[0,1,1,3]}"#,
        ];
        for d in docs {
            let spec = FunctionSpec::from_json(d).unwrap();
            for strategy in [Strategy::Auto, Strategy::L1, Strategy::TopSubspace, Strategy::Expectation] {
                let opts = BuildOptions { strategy, ..Default::default() };
                let plan = build_for_spec(&spec, &opts, 7).unwrap();
                let bits = plan.sketch(&BitVector::zeros(spec.n())).unwrap();
                assert!(estimate(&plan, &bits).unwrap().is_finite());
                assert_eq!(plan, SketchPlan::from_json(&plan.to_json()).unwrap());
            }
        }
    }

    #[test]
    fn hockey_stick_compose_is_clamped() {
        let spec = FunctionSpec::HockeyStick { n: 5, alpha: 1.0 };
        let plan = build_for_spec(&spec, &BuildOptions { eps: 0.25, ..Default::default() }, 1).unwrap();
        for x in 0..32u64 {
            let bits = plan.sketch(&BitVector::from_u64(5, x)).unwrap();
            assert!(estimate(&plan, &bits).unwrap() <= 1.0);
        }
    }
}
