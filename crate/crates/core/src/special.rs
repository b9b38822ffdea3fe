//! Scalar special functions used by the distribution series and the
//! binomial confidence intervals: log-gamma, regularized incomplete gamma
//! functions, and the regularized incomplete beta function with its inverse.
//!
//! All routines target near-double accuracy (absolute error around 1e-14 on
//! the parameter ranges exercised here) and fail with an explicit error
//! instead of silently returning a non-converged value.

use crate::error::{Error, Result};

/// Lanczos coefficients (g = 7, 9 terms), giving ~15 correct digits for
/// real arguments.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural logarithm of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "ln_gamma requires a finite positive argument, got {x}"
        )));
    }
    if x < 0.5 {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
        let s = (std::f64::consts::PI * x).sin();
        return Ok(std::f64::consts::PI.ln() - s.ln() - ln_gamma_core(1.0 - x));
    }
    Ok(ln_gamma_core(x))
}

fn ln_gamma_core(x: f64) -> f64 {
    // Lanczos approximation evaluated at x (valid for x >= 0.5).
    let xm1 = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (xm1 + i as f64);
    }
    let t = xm1 + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (xm1 + 0.5) * t.ln() - t + acc.ln()
}

const GAMMA_MAX_ITER: usize = 20_000;
const GAMMA_EPS: f64 = 1e-16;
/// Smallest safe denominator for Lentz continued fractions.
const LENTZ_FLOOR: f64 = 1e-300;

/// Regularized incomplete gamma pair `(P(a, x), Q(a, x))` with
/// `P + Q = 1`, for `a > 0`, `x >= 0`.
///
/// `P(a, x) = gamma(a, x) / Gamma(a)` is the CDF of a Gamma(shape `a`,
/// scale 1) variable at `x`; `Q` is its upper tail.  The member of the pair
/// that is computed directly (series for `x < a + 1`, continued fraction
/// otherwise) is accurate in *relative* terms; its complement is accurate
/// absolutely.
pub fn gamma_pq(a: f64, x: f64) -> Result<(f64, f64)> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!(
            "gamma_pq requires shape a > 0, got {a}"
        )));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "gamma_pq requires a finite x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    // ln of the prefactor x^a e^{-x} / Gamma(a).
    let ln_prefactor = a * x.ln() - x - ln_gamma(a)?;
    if x < a + 1.0 {
        // Series: P(a,x) = prefactor * sum_{n>=0} x^n / (a (a+1) ... (a+n)).
        let mut term = 1.0 / a;
        let mut sum = term;
        for n in 1..=GAMMA_MAX_ITER {
            term *= x / (a + n as f64);
            sum += term;
            if term.abs() < sum.abs() * GAMMA_EPS {
                let p = (sum.ln() + ln_prefactor).exp();
                let p = p.min(1.0);
                return Ok((p, 1.0 - p));
            }
        }
        Err(Error::SpecialFunction(format!(
            "incomplete gamma series did not converge for a = {a}, x = {x}"
        )))
    } else {
        // Modified Lentz continued fraction for Q(a,x).
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / LENTZ_FLOOR;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..=GAMMA_MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < LENTZ_FLOOR {
                d = LENTZ_FLOOR;
            }
            c = b + an / c;
            if c.abs() < LENTZ_FLOOR {
                c = LENTZ_FLOOR;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < GAMMA_EPS {
                let q = (h.ln() + ln_prefactor).exp();
                let q = q.min(1.0);
                return Ok((1.0 - q, q));
            }
        }
        Err(Error::SpecialFunction(format!(
            "incomplete gamma continued fraction did not converge for a = {a}, x = {x}"
        )))
    }
}

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn gamma_p(a: f64, x: f64) -> Result<f64> {
    gamma_pq(a, x).map(|(p, _)| p)
}

/// Regularized upper incomplete gamma `Q(a, x)`.
pub fn gamma_q(a: f64, x: f64) -> Result<f64> {
    gamma_pq(a, x).map(|(_, q)| q)
}

/// Natural log of the beta function `B(a, b)`.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    Ok(ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?)
}

/// Regularized incomplete beta function `I_x(a, b)` for `a, b > 0` and
/// `0 <= x <= 1`, via the symmetry-split Lentz continued fraction.
pub fn inc_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "inc_beta requires positive shape parameters, got a = {a}, b = {b}"
        )));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "inc_beta requires x in [0, 1], got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let ln_front = a * x.ln() + b * (1.0 - x).ln() - ln_beta(a, b)?;
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok(((ln_front).exp() * beta_cf(a, b, x)? / a).min(1.0))
    } else {
        Ok((1.0 - (ln_front).exp() * beta_cf(b, a, 1.0 - x)? / b).max(0.0))
    }
}

/// Lentz continued fraction for the incomplete beta function.
fn beta_cf(a: f64, b: f64, x: f64) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < LENTZ_FLOOR {
        d = LENTZ_FLOOR;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=GAMMA_MAX_ITER {
        let m_f = m as f64;
        let m2 = 2.0 * m_f;
        // Even step.
        let aa = m_f * (b - m_f) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < LENTZ_FLOOR {
            d = LENTZ_FLOOR;
        }
        c = 1.0 + aa / c;
        if c.abs() < LENTZ_FLOOR {
            c = LENTZ_FLOOR;
        }
        d = 1.0 / d;
        h *= d * c;
        // Odd step.
        let aa = -(a + m_f) * (qab + m_f) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < LENTZ_FLOOR {
            d = LENTZ_FLOOR;
        }
        c = 1.0 + aa / c;
        if c.abs() < LENTZ_FLOOR {
            c = LENTZ_FLOOR;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < GAMMA_EPS {
            return Ok(h);
        }
    }
    Err(Error::SpecialFunction(format!(
        "incomplete beta continued fraction did not converge for a = {a}, b = {b}, x = {x}"
    )))
}

/// Inverse of the regularized incomplete beta function in `x`:
/// the unique `x` in `[0, 1]` with `I_x(a, b) = p`.
///
/// Uses robust bisection (the integrand is strictly positive, so `I_x` is
/// strictly increasing); 200 halvings take `x` below 1 ulp of spacing.
pub fn inv_inc_beta(a: f64, b: f64, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!(
            "inv_inc_beta requires p in [0, 1], got {p}"
        )));
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    if p == 1.0 {
        return Ok(1.0);
    }
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inc_beta(a, b, mid)? < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
