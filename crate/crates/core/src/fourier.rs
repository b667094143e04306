//! Exact Fourier analysis over GF(2)^n for small n.
//!
//! Coefficients use the expectation normalisation
//! `f̂(α) = 2^-n Σ_x f(x) (-1)^{α·x}`, so Parseval reads
//! `Σ_α f̂(α)² = 2^-n Σ_x f(x)²`. Index `α` is an integer whose bit `i`
//! is coordinate `i`, matching [`BitVector::to_u64`].

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::gf2::{span_enumerate, BitVector, SubspaceBasis, MAX_SPAN_DIM};

/// Largest `n` accepted by [`wht`].
pub const MAX_WHT_N: usize = 24;
/// Largest `n` for which exhaustive dimension search is allowed.
pub const MAX_EXHAUSTIVE_N: usize = 8;
/// Largest odd `n` accepted by [`hockey_stick_spectrum_stats`].
pub const MAX_HOCKEY_N: usize = 40;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    n: usize,
    coeffs: Vec<f64>,
}

impl Spectrum {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: usize) -> f64 {
        self.coeffs[alpha]
    }

    /// `‖f‖₂² = Σ f̂(α)²`.
    pub fn l2_squared(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Indices with a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&a| self.coeffs[a] != 0.0).collect()
    }

    pub fn alpha_vector(&self, alpha: usize) -> BitVector {
        BitVector::from_u64(self.n, alpha as u64)
    }
}

fn log2_len(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::param(format!("table length {len} is not a power of two")));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_WHT_N {
        return Err(Error::capacity("transform dimension n", n as u64, MAX_WHT_N as u64));
    }
    Ok(n)
}

fn butterfly(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Fast Walsh–Hadamard transform of a truth table of length `2^n`.
pub fn wht(values: &[f64]) -> Result<Spectrum> {
    let n = log2_len(values.len())?;
    let mut coeffs = values.to_vec();
    butterfly(&mut coeffs);
    let scale = 1.0 / values.len() as f64;
    coeffs.iter_mut().for_each(|c| *c *= scale);
    Ok(Spectrum { n, coeffs })
}

/// Truth table `f(x) = Σ_α f̂(α) χ_α(x)`.
pub fn inverse_wht(s: &Spectrum) -> Vec<f64> {
    let mut v = s.coeffs.clone();
    butterfly(&mut v);
    v
}

/// `Σ_α |f̂(α)|`.
pub fn spectral_norm(s: &Spectrum) -> f64 {
    s.coeffs.iter().map(|c| c.abs()).sum()
}

/// Fourier energy `Σ_{α ∈ span(basis)} f̂(α)²`.
pub fn energy_on_subspace(s: &Spectrum, basis: &SubspaceBasis) -> Result<f64> {
    check_dim(s.n, basis.n())?;
    Ok(span_enumerate(basis)?
        .iter()
        .map(|v| {
            let c = s.coeffs[v.to_u64() as usize];
            c * c
        })
        .sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DimensionMethod {
    /// Exact minimum over all subspaces (n ≤ 8).
    Exhaustive,
    /// Upper bound from greedy basis growth over the Fourier support.
    Greedy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionResult {
    pub dim: usize,
    pub basis: SubspaceBasis,
    pub captured_energy: f64,
    pub method: DimensionMethod,
}

fn tolerance(s: &Spectrum) -> f64 {
    1e-12 * (1.0 + s.l2_squared())
}

/// Sum of squared coefficients over the span of `basis` (given as integers).
fn span_energy(sq: &[f64], basis: &[usize]) -> f64 {
    let mut cur = 0usize;
    let mut total = sq[0];
    for g in 1usize..(1 << basis.len()) {
        cur ^= basis[g.trailing_zeros() as usize];
        total += sq[cur];
    }
    total
}

/// Calls `visit` with one basis per `d`-dimensional subspace of GF(2)^n.
///
/// Bases are in reduced echelon form keyed on each row's highest set bit, so
/// every subspace is produced exactly once.
fn for_each_subspace(n: usize, d: usize, visit: &mut dyn FnMut(&[usize])) {
    fn rows(
        pivots: &[usize],
        pivot_mask: usize,
        j: usize,
        basis: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if j == pivots.len() {
            visit(basis);
            return;
        }
        let p = pivots[j];
        let free = ((1usize << p) - 1) & !pivot_mask;
        // iterate all submasks of `free`
        let mut sub = free;
        loop {
            basis.push((1 << p) | sub);
            rows(pivots, pivot_mask, j + 1, basis, visit);
            basis.pop();
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
    }
    for mask in 0usize..(1 << n) {
        if mask.count_ones() as usize != d {
            continue;
        }
        let pivots: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        rows(&pivots, mask, 0, &mut Vec::with_capacity(d), visit);
    }
}

/// Best `d`-dimensional subspace found by exhaustive enumeration.
fn best_exhaustive(sq: &[f64], n: usize, d: usize) -> (Vec<usize>, f64) {
    let mut best = (Vec::new(), f64::NEG_INFINITY);
    for_each_subspace(n, d, &mut |b| {
        let e = span_energy(sq, b);
        if e > best.1 {
            best = (b.to_vec(), e);
        }
    });
    best
}

/// Greedy basis growth: repeatedly adds the support vector whose inclusion
/// captures the most energy, until `stop` says enough or `max_dim` is hit.
fn greedy_basis(
    sq: &[f64],
    n: usize,
    max_dim: usize,
    stop: &dyn Fn(f64) -> bool,
) -> (Vec<usize>, f64) {
    let support: Vec<usize> = (1..sq.len()).filter(|&a| sq[a] > 0.0).collect();
    let mut in_span = vec![false; 1 << n];
    in_span[0] = true;
    let mut span = vec![0usize];
    let mut basis = Vec::new();
    let mut captured = sq[0];
    while basis.len() < max_dim && !stop(captured) {
        let mut best: Option<(usize, f64)> = None;
        for &v in &support {
            if in_span[v] {
                continue;
            }
            let gain: f64 = span.iter().map(|&s| sq[s ^ v]).sum();
            if best.is_none_or(|(_, g)| gain > g) {
                best = Some((v, gain));
            }
        }
        let Some((v, gain)) = best else { break };
        let shifted: Vec<usize> = span.iter().map(|&s| s ^ v).collect();
        for &s in &shifted {
            in_span[s] = true;
        }
        span.extend(shifted);
        basis.push(v);
        captured += gain;
    }
    (basis, captured)
}

fn to_basis(n: usize, b: &[usize]) -> Result<SubspaceBasis> {
    SubspaceBasis::new(
        n,
        b.iter().map(|&a| BitVector::from_u64(n, a as u64)).collect(),
    )
}

/// Smallest `d` such that some `d`-dimensional subspace captures at least
/// `target_energy` of the Fourier mass.
///
/// `Exhaustive` is exact and limited to `n ≤ 8`; `Greedy` returns an upper
/// bound on the minimum and says so in the result.
pub fn approx_fourier_dimension(
    s: &Spectrum,
    target_energy: f64,
    method: DimensionMethod,
) -> Result<DimensionResult> {
    let total = s.l2_squared();
    let tol = tolerance(s);
    if !(target_energy > 0.0) || target_energy > total + 1e-12 {
        return Err(Error::Domain(format!(
            "target energy {target_energy} outside (0, {total}]"
        )));
    }
    let sq: Vec<f64> = s.coeffs.iter().map(|c| c * c).collect();
    let reached = |e: f64| e >= target_energy - tol;
    let basis = match method {
        DimensionMethod::Exhaustive => {
            if s.n > MAX_EXHAUSTIVE_N {
                return Err(Error::capacity(
                    "exhaustive search dimension n",
                    s.n as u64,
                    MAX_EXHAUSTIVE_N as u64,
                ));
            }
            let mut found = None;
            for d in 0..=s.n {
                let (b, e) = best_exhaustive(&sq, s.n, d);
                if reached(e) {
                    found = Some(b);
                    break;
                }
            }
            // d = n captures everything, so only rounding can get here
            found.unwrap_or_else(|| (0..s.n).map(|i| 1 << i).collect())
        }
        DimensionMethod::Greedy => greedy_basis(&sq, s.n, s.n, &reached).0,
    };
    if basis.len() > MAX_SPAN_DIM {
        return Err(Error::capacity("subspace dimension", basis.len() as u64, MAX_SPAN_DIM as u64));
    }
    let basis = to_basis(s.n, &basis)?;
    let captured_energy = energy_on_subspace(s, &basis)?;
    if !reached(captured_energy) {
        return Err(Error::Domain(format!(
            "target energy {target_energy} unreachable (best {captured_energy})"
        )));
    }
    Ok(DimensionResult {
        dim: basis.dim(),
        basis,
        captured_energy,
        method,
    })
}

/// Highest-energy subspace of dimension at most `dim` (exactly `dim` for
/// the exhaustive method).
pub fn best_subspace(s: &Spectrum, dim: usize, method: DimensionMethod) -> Result<DimensionResult> {
    if dim > s.n {
        return Err(Error::param(format!("dimension {dim} exceeds n = {}", s.n)));
    }
    let sq: Vec<f64> = s.coeffs.iter().map(|c| c * c).collect();
    let basis = match method {
        DimensionMethod::Exhaustive => {
            if s.n > MAX_EXHAUSTIVE_N {
                return Err(Error::capacity(
                    "exhaustive search dimension n",
                    s.n as u64,
                    MAX_EXHAUSTIVE_N as u64,
                ));
            }
            best_exhaustive(&sq, s.n, dim).0
        }
        DimensionMethod::Greedy => greedy_basis(&sq, s.n, dim, &|_| false).0,
    };
    let basis = to_basis(s.n, &basis)?;
    let captured_energy = energy_on_subspace(s, &basis)?;
    Ok(DimensionResult {
        dim: basis.dim(),
        basis,
        captured_energy,
        method,
    })
}

/// Exact spectrum statistics of `hs_α(x) = min(α, (2α/n)|x|)` for odd `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HockeyStickStats {
    /// `‖hs‖₂²`.
    pub l2_sq: f64,
    /// `ĥs(∅)`.
    pub c_empty: f64,
    /// `ĥs([n])`, zero for odd `n`.
    pub c_full: f64,
    /// `‖hs‖₂² − ĥs(∅)² − ĥs([n])²`.
    pub middle_energy: f64,
}

fn binomial(n: u32, k: u32) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Closed-form spectrum statistics of the hockey-stick function, from exact
/// integer binomial sums (no floating-point cancellation).
pub fn hockey_stick_spectrum_stats(n: usize, alpha: f64) -> Result<HockeyStickStats> {
    // at n = 1 the full set is a singleton and ĥs([n]) = −α/2
    if n % 2 == 0 || n < 3 {
        return Err(Error::param(format!("hockey stick needs odd n >= 3, got {n}")));
    }
    if n > MAX_HOCKEY_N {
        return Err(Error::capacity("hockey stick n", n as u64, MAX_HOCKEY_N as u64));
    }
    let nn = n as u32;
    let half = nn / 2;
    // S1 = Σ_{i ≤ ⌊n/2⌋} i·C(n,i),  S2 = Σ_{i ≤ ⌊n/2⌋} i²·C(n,i)
    let (s1, s2) = (0..=half).fold((0u128, 0u128), |(a, b), i| {
        let c = binomial(nn, i);
        (a + i as u128 * c, b + (i as u128) * (i as u128) * c)
    });
    let n128 = n as u128;
    let pow_n = 1u128 << n;
    let half_pow = pow_n / 2;
    // ‖hs‖² = α² (2^{n-1} n² + 4 S2) / (n² 2^n)
    let l2_num = half_pow * n128 * n128 + 4 * s2;
    let l2_den = n128 * n128 * pow_n;
    // ĥs(∅) = α (n 2^{n-1} + 2 S1) / (n 2^n)
    let c_num = n128 * half_pow + 2 * s1;
    let c_den = n128 * pow_n;
    // middle = α² [l2_num·2^n − c_num²] / (n² 2^{2n})
    let mid_num = l2_num as i128 * pow_n as i128 - (c_num * c_num) as i128;
    let mid_den = (n128 * n128) as f64 * (pow_n as f64) * (pow_n as f64);
    let a2 = alpha * alpha;
    Ok(HockeyStickStats {
        l2_sq: a2 * (l2_num as f64 / l2_den as f64),
        c_empty: alpha * (c_num as f64 / c_den as f64),
        c_full: 0.0,
        middle_energy: a2 * (mid_num as f64 / mid_den),
    })
}

/// Truth table of the hockey-stick function, index bit `i` = coordinate `i`.
pub fn hockey_stick_table(n: usize, alpha: f64) -> Vec<f64> {
    (0..1u64 << n)
        .map(|x| alpha.min(2.0 * alpha * x.count_ones() as f64 / n as f64))
        .collect()
}
