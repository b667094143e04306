//! Plans for the uniform distribution: keep the Fourier mass on a small
//! subspace, or output a constant.

use serde_json::json;

use super::plan::{ErrorKind, PostProcessor, SketchPlan};
use super::rows::RowSink;
use crate::error::{Error, Result};
use crate::fourier::{approx_fourier_dimension, DimensionMethod, Spectrum};
use crate::gf2::{BitVector, SubspaceBasis, MAX_SPAN_DIM};

/// Reads `d` parities spanning a subspace `A` and outputs
/// `Σ_{α ∈ A} f̂(α) χ_α(x)`, choosing the smallest `A` (per `method`) with
/// uniform squared error at most `eps`.
pub fn build_top_subspace_sketch(spectrum: &Spectrum, eps: f64, method: DimensionMethod) -> Result<SketchPlan> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::param(format!("eps must be finite and nonnegative, got {eps}")));
    }
    let total = spectrum.l2_squared();
    let target = total - eps;
    let basis: Vec<usize> = if target <= 1e-12 * (1.0 + total) {
        Vec::new()
    } else {
        let r = approx_fourier_dimension(spectrum, target, method)?;
        r.basis.vectors().iter().map(|v| v.to_u64() as usize).collect()
    };
    let mut plan = subspace_plan(spectrum, &basis)?;
    plan.meta.params["eps"] = json!(eps);
    plan.meta.params["method"] = json!(method);
    Ok(plan)
}

/// Top-subspace plan for a given basis of the subspace.
pub fn build_subspace_sketch(spectrum: &Spectrum, basis: &SubspaceBasis) -> Result<SketchPlan> {
    if basis.n() != spectrum.n() {
        return Err(Error::DimensionMismatch {
            expected: spectrum.n(),
            found: basis.n(),
        });
    }
    let b: Vec<usize> = basis.vectors().iter().map(|v| v.to_u64() as usize).collect();
    subspace_plan(spectrum, &b)
}

fn subspace_plan(spectrum: &Spectrum, basis: &[usize]) -> Result<SketchPlan> {
    let n = spectrum.n();
    let total = spectrum.l2_squared();
    let d = basis.len();
    if d > MAX_SPAN_DIM {
        return Err(Error::capacity("subspace dimension", d as u64, MAX_SPAN_DIM as u64));
    }
    let mut sink = RowSink::new(n);
    let start = sink.k();
    let mut coeffs = vec![0.0; 1 << d];
    let mut alpha = 0usize;
    coeffs[0] = spectrum.coeff(0);
    // Gray order: mask c holds α_c = XOR of basis[j] over the bits j of c
    for g in 1usize..1 << d {
        alpha ^= basis[g.trailing_zeros() as usize];
        coeffs[g ^ (g >> 1)] = spectrum.coeff(alpha);
    }
    for &b in basis {
        sink.push_words(BitVector::from_u64(n, b as u64).words());
    }
    sink.close("basis", start);
    let captured: f64 = coeffs.iter().map(|c| c * c).sum();
    let mse = (total - captured).max(0.0);
    sink.finish(
        "top_subspace",
        0,
        json!({ "dim": d, "captured_energy": captured }),
        ErrorKind::UniformMse,
        mse,
        PostProcessor::TopSubspace { coeffs },
    )
}

/// A plan with no rows that always outputs `value`.
pub fn build_constant_sketch(n: usize, value: f64) -> Result<SketchPlan> {
    if !value.is_finite() {
        return Err(Error::param(format!("constant must be finite, got {value}")));
    }
    RowSink::new(n).finish(
        "constant",
        0,
        json!({ "value": value }),
        ErrorKind::UniformMse,
        None,
        PostProcessor::Constant { value },
    )
}

/// Constant plan at `E[f]` under uniform inputs, claiming `Var[f]`.
pub fn build_expectation_sketch(table: &[f64]) -> Result<SketchPlan> {
    let s = crate::fourier::wht(table)?;
    let mean = s.coeff(0);
    let mut plan = build_constant_sketch(s.n(), mean)?;
    plan.meta.builder = "expectation".into();
    plan.meta.claimed_error = Some((s.l2_squared() - mean * mean).max(0.0));
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{hockey_stick_table, wht};
    use crate::sketch::plan::estimate;

    fn uniform_mse(plan: &SketchPlan, table: &[f64]) -> f64 {
        let n = plan.n();
        table
            .iter()
            .enumerate()
            .map(|(x, v)| {
                let bits = plan.sketch(&BitVector::from_u64(n, x as u64)).unwrap();
                (estimate(plan, &bits).unwrap() - v).powi(2)
            })
            .sum::<f64>()
            / table.len() as f64
    }

    #[test]
    fn large_eps_gives_constant_mean() {
        let table = hockey_stick_table(5, 1.0);
        let s = wht(&table).unwrap();
        let plan = build_top_subspace_sketch(&s, s.l2_squared(), DimensionMethod::Exhaustive).unwrap();
        assert_eq!(plan.k(), 0);
        assert_eq!(estimate(&plan, &BitVector::zeros(0)).unwrap(), s.coeff(0));
    }

    #[test]
    fn single_character_is_exact() {
        let table: Vec<f64> = (0..16u32).map(|x| if (x & 0b1010).count_ones() % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let s = wht(&table).unwrap();
        let plan = build_top_subspace_sketch(&s, 0.0, DimensionMethod::Exhaustive).unwrap();
        assert_eq!(plan.k(), 1);
        assert!(uniform_mse(&plan, &table) < 1e-24);
    }

    #[test]
    fn hockey_stick_mse_matches_excluded_mass() {
        let table = hockey_stick_table(5, 1.0);
        let s = wht(&table).unwrap();
        let plan = build_top_subspace_sketch(&s, 0.05, DimensionMethod::Exhaustive).unwrap();
        let claimed = plan.meta.claimed_error.unwrap();
        assert!(claimed <= 0.05 + 1e-12);
        assert!((uniform_mse(&plan, &table) - claimed).abs() < 1e-12);
    }

    #[test]
    fn constant_mse_decomposes() {
        let table: Vec<f64> = (0..8).map(|x| (x as f64).sqrt()).collect();
        let mean = table.iter().sum::<f64>() / 8.0;
        let var = table.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 8.0;
        let exp = build_expectation_sketch(&table).unwrap();
        assert!((uniform_mse(&exp, &table) - var).abs() < 1e-12);
        assert!((exp.meta.claimed_error.unwrap() - var).abs() < 1e-12);
        let off = build_constant_sketch(3, mean + 0.5).unwrap();
        assert!((uniform_mse(&off, &table) - (var + 0.25)).abs() < 1e-12);
        assert!(build_constant_sketch(3, f64::NAN).is_err());
    }
}
