//! Exact distribution of the time-averaged mean square displacement as a
//! weighted chi-square (positive Gaussian quadratic) form, expanded in a
//! uniformly convergent gamma-mixture series.
//!
//! With `lambda_1 <= ... <= lambda_M` the eigenvalues of the increment
//! covariance matrix, the scaled statistic `Q = M * TAMSD` satisfies
//! `Q = sum_j lambda_j U_j` in law, `U_j` iid chi-square with one degree of
//! freedom.  Writing `lambda_1` for the smallest eigenvalue, the density of
//! `Q` expands as
//!
//! ```text
//! f_Q(x) = sum_{k>=0} w_k * GammaPdf(M/2 + k, 2 lambda_1; x),
//! w_k = C * delta_k,    C = prod_j sqrt(lambda_1 / lambda_j),
//! ```
//!
//! where the `delta_k` follow the recursion
//! `delta_{k+1} = (1/(k+1)) sum_{j=1}^{k+1} j gamma_j delta_{k+1-j}`,
//! `delta_0 = 1`, with moment coefficients
//! `gamma_k = sum_j (1 - lambda_1/lambda_j)^k / (2k)`.
//!
//! The mixture weights `w_k` are nonnegative and sum to one, so truncating
//! the series after enough terms to absorb mass `1 - tol` bounds every
//! distributional quantity computed from it by `tol` in absolute error.
//! Weights are accumulated with a shared power-of-two exponent so the
//! recursion cannot overflow even when the raw `delta_k` exceed the `f64`
//! range.
//!
//! All evaluation functions speak in TAMSD units: the argument `x` refers to
//! `TAMSD = Q / M`, a gamma mixture with shape `M/2 + k` and scale
//! `2 lambda_1 / M`.

use crate::error::{Error, Result};
use crate::special::{gamma_pq, ln_gamma};
use crate::toeplitz::SpectrumSummary;
use num_complex::Complex64;

/// Default residual-mass tolerance for series truncation.
pub const DEFAULT_MASS_TOLERANCE: f64 = 1e-12;

/// Hard cap on the number of series terms before giving up.
pub const MAX_SERIES_TERMS: usize = 200_000;

/// Rescaling threshold for the shared-exponent delta recursion.
const RESCALE_LIMIT: f64 = 8.988465674311579e307 * 1e-16; // ~2^1019, headroom for convolution sums
const RESCALE_SHIFT: i32 = 900;

/// Truncated gamma-mixture representation of the TAMSD law for one
/// increment covariance spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct GChi2Series {
    lambda1: f64,
    lambda_max: f64,
    m: usize,
    mean: f64,
    log_c: f64,
    ratios: Vec<f64>,
    gamma_coeffs: Vec<f64>,
    weights: Vec<f64>,
    mass_deficit: f64,
}

impl GChi2Series {
    /// Smallest eigenvalue `lambda_1` (the base scale of the expansion).
    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    /// Largest eigenvalue (MGF domain boundary `1 / (2 lambda_max)`).
    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    /// Quadratic form dimension `M`.
    pub fn dim(&self) -> usize {
        self.m
    }

    /// `E[TAMSD]` (= trace / M).
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Logarithm of the leading constant `C = prod_j sqrt(lambda_1/lambda_j)`.
    pub fn log_c(&self) -> f64 {
        self.log_c
    }

    /// Moment coefficients `gamma_1 ... gamma_K` of the expansion.
    pub fn gamma_coeffs(&self) -> &[f64] {
        &self.gamma_coeffs
    }

    /// Mixture weights `w_k = C * delta_k`, `k = 0 ..= K`.  Nonnegative,
    /// summing to `1 - mass_deficit()`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Truncation index `K` (the series keeps terms `0 ..= K`).
    pub fn truncation_index(&self) -> usize {
        self.weights.len() - 1
    }

    /// Raw series coefficients `delta_k = w_k / C`, `delta_0 = 1`.
    ///
    /// For strongly spread spectra the raw coefficients can exceed the
    /// `f64` range (they are the stable `weights()` divided by a tiny
    /// constant); prefer the weights for computation.
    pub fn delta_coeffs(&self) -> Vec<f64> {
        self.weights
            .iter()
            .map(|&w| if w == 0.0 { 0.0 } else { (w.ln() - self.log_c).exp() })
            .collect()
    }

    /// Probability mass not captured by the truncated series
    /// (`0 <= deficit <= requested tolerance` on success).
    pub fn mass_deficit(&self) -> f64 {
        self.mass_deficit
    }
}

/// Build the gamma-mixture series for a spectrum, keeping terms until the
/// captured probability mass reaches `1 - mass_tolerance`.
///
/// Fails with [`Error::TruncationFailure`] (carrying the residual mass and
/// the term count) if [`MAX_SERIES_TERMS`] terms do not reach the tolerance.
pub fn build_series(spectrum: &SpectrumSummary, mass_tolerance: f64) -> Result<GChi2Series> {
    if !(mass_tolerance > 0.0 && mass_tolerance < 1.0) {
        return Err(Error::Domain(format!(
            "mass tolerance must lie strictly in (0, 1), got {mass_tolerance}"
        )));
    }
    let eigenvalues = spectrum.eigenvalues();
    let m = eigenvalues.len();
    let lambda1 = spectrum.lambda_min();
    let lambda_max = spectrum.lambda_max();

    // log C = (1/2) sum_j ln(lambda_1 / lambda_j)  (<= 0).
    let log_c: f64 = eigenvalues.iter().map(|&l| 0.5 * (lambda1 / l).ln()).sum();

    // Expansion ratios q_j = 1 - lambda_1/lambda_j in [0, 1); zero ratios
    // contribute nothing to any gamma_k and are skipped in the power sums.
    let ratios: Vec<f64> = eigenvalues.iter().map(|&l| 1.0 - lambda1 / l).collect();
    let active: Vec<f64> = ratios.iter().copied().filter(|&q| q > 0.0).collect();

    // Shared-exponent representation: delta_k = dscaled[k] * 2^{exp2}.
    let mut dscaled: Vec<f64> = vec![1.0];
    let mut exp2: i64 = 0;
    let mut sum_scaled: f64 = 1.0;
    let mut powers = active.clone(); // q_j^k, currently k = 1
    let mut half_power_sums: Vec<f64> = Vec::new(); // k * gamma_k = (1/2) sum_j q_j^k
    let mut gamma_coeffs: Vec<f64> = Vec::new();

    let target = (-mass_tolerance).ln_1p(); // ln(1 - tol)
    let mut ln_mass = log_c; // mass of the k = 0 term alone
    let mut k = 0usize;
    while ln_mass < target {
        if k == MAX_SERIES_TERMS {
            let deficit = (-ln_mass.exp_m1()).max(0.0);
            return Err(Error::TruncationFailure { deficit, terms: k });
        }
        k += 1;
        // gamma_k from the running power sums (powers currently hold q^k).
        let s: f64 = powers.iter().sum();
        for (p, &q) in powers.iter_mut().zip(active.iter()) {
            *p *= q;
        }
        let half_s = 0.5 * s;
        half_power_sums.push(half_s);
        gamma_coeffs.push(half_s / k as f64);

        // delta_k = (1/k) sum_{j=1}^{k} (j gamma_j) delta_{k-j}.
        let mut acc = 0.0;
        for j in 1..=k {
            acc += half_power_sums[j - 1] * dscaled[k - j];
        }
        let dk = acc / k as f64;
        dscaled.push(dk);
        sum_scaled += dk;
        if dk > RESCALE_LIMIT {
            let scale = (2.0_f64).powi(-RESCALE_SHIFT);
            for d in dscaled.iter_mut() {
                *d *= scale;
            }
            sum_scaled *= scale;
            exp2 += RESCALE_SHIFT as i64;
        }
        ln_mass = log_c + exp2 as f64 * std::f64::consts::LN_2 + sum_scaled.ln();
    }

    let mass_deficit = (-ln_mass.exp_m1()).max(0.0);
    let ln_c_scaled = log_c + exp2 as f64 * std::f64::consts::LN_2;
    let weights: Vec<f64> = dscaled
        .iter()
        .map(|&d| if d == 0.0 { 0.0 } else { (ln_c_scaled + d.ln()).exp() })
        .collect();

    Ok(GChi2Series {
        lambda1,
        lambda_max,
        m,
        mean: spectrum.sum_lambda() / m as f64,
        log_c,
        ratios,
        gamma_coeffs,
        weights,
        mass_deficit,
    })
}

/// Shape parameter of the leading gamma component.
fn base_shape(series: &GChi2Series) -> f64 {
    series.m as f64 / 2.0
}

/// Scale parameter of every gamma component, in TAMSD units.
fn base_scale(series: &GChi2Series) -> f64 {
    2.0 * series.lambda1 / series.m as f64
}

fn check_eval_point(x: f64) -> Result<()> {
    if x.is_nan() {
        return Err(Error::Domain("evaluation point is NaN".to_string()));
    }
    Ok(())
}

/// Largest log-magnitude the gamma increment terms may reach before the
/// recurrences switch from log-space tracking to plain multiplication.
///
/// Far in the upper tail the leading increment `z^a0 e^{-z} / Gamma(a0 + 1)`
/// underflows (its logarithm drops below roughly -745) even though
/// mid-series components are order one: the term ratio `z / (a0 + k)`
/// regrows the increment by hundreds of orders of magnitude before it peaks
/// near `k ~ z`. Tracking the logarithm until the term re-enters the normal
/// range keeps the recurrences exact where they matter; the skipped
/// contributions are below `exp(LN_TERM_FLOOR)` each and are negligible
/// against any mass tolerance.
const LN_TERM_FLOOR: f64 = -700.0;

/// Probability density of the TAMSD at `x` (zero for `x <= 0`).
pub fn tamsd_pdf(series: &GChi2Series, x: f64) -> Result<f64> {
    check_eval_point(x)?;
    if x <= 0.0 || x.is_infinite() {
        return Ok(0.0);
    }
    let a0 = base_shape(series);
    let theta = base_scale(series);
    let z = x / theta;
    let ln_z = z.ln();
    // Leading gamma density, then the exact term ratio
    // f_{k+1}(x) / f_k(x) = x / (theta (a0 + k)) = z / (a0 + k).
    let ln_f0 = (a0 - 1.0) * x.ln() - x / theta - ln_gamma(a0)? - a0 * theta.ln();
    let mut ln_term = ln_f0;
    let mut log_mode = ln_f0 < LN_TERM_FLOOR;
    let mut term = if log_mode { 0.0 } else { ln_f0.exp() };
    let mut acc = 0.0;
    for (kk, &w) in series.weights.iter().enumerate() {
        acc += w * term;
        if log_mode {
            ln_term += ln_z - (a0 + kk as f64).ln();
            if ln_term >= LN_TERM_FLOOR {
                term = ln_term.exp();
                log_mode = false;
            }
        } else {
            term *= z / (a0 + kk as f64);
        }
    }
    Ok(acc)
}

/// CDF and upper tail of the TAMSD at `x`, sharing one evaluation pass.
///
/// Both columns of the regularized incomplete gamma pair are advanced with
/// the stable upward recurrence
/// `Q(a + 1, z) = Q(a, z) + z^a e^{-z} / Gamma(a + 1)`,
/// so the whole mixture costs one continued-fraction/series evaluation.
///
/// The truncated mixture components all have shape parameters above the
/// truncation index, so at any fixed `x` their mass lies almost entirely in
/// the upper tail; crediting the mass deficit to the tail keeps
/// `cdf + tail = 1` to rounding while misattributing at most the mass
/// tolerance.
fn cdf_tail(series: &GChi2Series, x: f64) -> Result<(f64, f64)> {
    check_eval_point(x)?;
    if x <= 0.0 {
        return Ok((0.0, 1.0));
    }
    if x.is_infinite() {
        return Ok((1.0, 0.0));
    }
    let a0 = base_shape(series);
    let theta = base_scale(series);
    let z = x / theta;
    let ln_z = z.ln();
    let (p0, q0) = gamma_pq(a0, z)?;
    // Increment term z^a e^{-z} / Gamma(a+1) at a = a0, advanced by
    // term <- term * z / (a + 1). Track its logarithm while it is below
    // the representable floor (see LN_TERM_FLOOR): the frozen p/q carry
    // errors below exp(LN_TERM_FLOOR) per component, and the recurrence
    // resumes exactly once the term re-enters the normal range.
    let ln_t0 = a0 * ln_z - z - ln_gamma(a0 + 1.0)?;
    let mut ln_bridge = ln_t0;
    let mut log_mode = ln_t0 < LN_TERM_FLOOR;
    let mut bridge = if log_mode { 0.0 } else { ln_t0.exp() };
    let mut q = q0;
    let mut p = p0;
    let mut cdf = 0.0;
    let mut tail = 0.0;
    for (kk, &w) in series.weights.iter().enumerate() {
        cdf += w * p;
        tail += w * q;
        if log_mode {
            ln_bridge += ln_z - (a0 + kk as f64 + 1.0).ln();
            if ln_bridge >= LN_TERM_FLOOR {
                bridge = ln_bridge.exp();
                log_mode = false;
            }
            continue;
        }
        q += bridge;
        p -= bridge;
        if p < 0.0 {
            p = 0.0;
        }
        if q > 1.0 {
            q = 1.0;
        }
        bridge *= z / (a0 + kk as f64 + 1.0);
    }
    tail += series.mass_deficit;
    Ok((cdf.clamp(0.0, 1.0), tail.clamp(0.0, 1.0)))
}

/// Exact CDF `P(TAMSD <= x)` of the TAMSD law.
pub fn tamsd_cdf(series: &GChi2Series, x: f64) -> Result<f64> {
    cdf_tail(series, x).map(|(c, _)| c)
}

/// Exact upper tail `P(TAMSD > x)`, computed from the regularized upper
/// incomplete gamma functions directly (not as `1 - cdf`), so small tails
/// keep relative accuracy.
pub fn tamsd_tail(series: &GChi2Series, x: f64) -> Result<f64> {
    cdf_tail(series, x).map(|(_, t)| t)
}

/// Quantile `inf { x : CDF(x) >= p }` of the TAMSD law, by bisection on the
/// monotone CDF.
pub fn tamsd_quantile(series: &GChi2Series, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!(
            "quantile level must lie strictly in (0, 1), got {p}"
        )));
    }
    // Bracket: the mean bounds the median scale well; double until covered.
    let mut hi = series.mean.max(f64::MIN_POSITIVE);
    let mut doublings = 0;
    while tamsd_cdf(series, hi)? < p {
        hi *= 2.0;
        doublings += 1;
        if doublings > 400 {
            return Err(Error::SpecialFunction(
                "quantile bracketing failed to enclose the target level".to_string(),
            ));
        }
    }
    let mut lo = 0.0;
    for _ in 0..160 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if tamsd_cdf(series, mid)? < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Moment generating function `E exp(s Q)` of the *scaled* statistic
/// `Q = M * TAMSD` (the Gaussian quadratic form itself), valid on
/// `s < 1 / (2 lambda_max)`.
///
/// Evaluated from the series representation
/// `C (1 - 2 lambda_1 s)^{-M/2} exp( sum_k gamma_k y^k )`,
/// `y = 1 / (1 - 2 lambda_1 s)`; the gamma power series is extended on the
/// fly from the stored eigenvalue ratios until it converges to machine
/// precision, so the evaluation works on the entire domain, not just up to
/// the stored truncation index.  (The MGF of the TAMSD itself at `s` is
/// this function at `s / M`.)
pub fn tamsd_mgf(series: &GChi2Series, s: f64) -> Result<f64> {
    if s.is_nan() {
        return Err(Error::Domain("MGF argument is NaN".to_string()));
    }
    let boundary = 1.0 / (2.0 * series.lambda_max);
    if s >= boundary {
        return Err(Error::Domain(format!(
            "MGF argument {s} is outside the convergence domain (must be < {boundary:e})"
        )));
    }
    let y = 1.0 / (1.0 - 2.0 * series.lambda1 * s);
    // sum_k gamma_k y^k = sum_k (1/2k) sum_j (q_j y)^k, with every
    // q_j y in [0, 1) inside the domain: term-by-term until convergence.
    let mut factors: Vec<f64> = series
        .ratios
        .iter()
        .map(|&q| q * y)
        .filter(|&r| r != 0.0)
        .collect();
    let mut powers = factors.clone();
    let mut total = 0.0;
    if !factors.is_empty() {
        let mut k = 1usize;
        loop {
            let s_k: f64 = powers.iter().sum();
            let term = 0.5 * s_k / k as f64;
            total += term;
            if term <= 1e-17 * (1.0 + total) {
                break;
            }
            if k >= 100_000_000 {
                return Err(Error::SpecialFunction(
                    "MGF series failed to converge inside its domain".to_string(),
                ));
            }
            // Drop exhausted factors to keep the inner loop tight.
            let mut idx = 0;
            while idx < powers.len() {
                powers[idx] *= factors[idx];
                if powers[idx] < 1e-320 {
                    powers.swap_remove(idx);
                    factors.swap_remove(idx);
                } else {
                    idx += 1;
                }
            }
            if powers.is_empty() {
                break;
            }
            k += 1;
        }
    }
    Ok((series.log_c - series.m as f64 / 2.0 * (1.0 - 2.0 * series.lambda1 * s).ln() + total)
        .exp())
}

/// Characteristic function `E exp(i u Q)` of the scaled statistic
/// `Q = M * TAMSD`, as the exact product `prod_j (1 - 2 i lambda_j u)^{-1/2}`.
///
/// Every factor has real part 1, so the principal complex logarithm is
/// continuous in `u` and the product can be accumulated in log space.
pub fn tamsd_cf(spectrum: &SpectrumSummary, u: f64) -> Result<Complex64> {
    if u.is_nan() {
        return Err(Error::Domain("CF argument is NaN".to_string()));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for &l in spectrum.eigenvalues() {
        let z = Complex64::new(1.0, -2.0 * l * u);
        acc -= 0.5 * z.ln();
    }
    Ok(acc.exp())
}
