//! Gaussian process models and the exact second-order structure of their
//! lag-`tau` increments.
//!
//! The processes are centered Gaussian with stationary increments, scaled so
//! that `Var X(t) = 2 D t^{2H}` (with `H = 1/2` for Brownian motion).  For the
//! increment sequence `Y_j = X(j + tau) - X(j)` observed at integer times,
//! the autocovariance `sigma_tau(j) = Cov(Y_i, Y_{i+j})` is:
//!
//! * Brownian motion: `sigma_tau(j) = 2 D (tau - j)` for `j <= tau - 1`,
//!   and `0` for `j >= tau` (increments at distance `>= tau` do not overlap);
//! * fractional Brownian motion with Hurst index `H`:
//!   `sigma_tau(j) = D [ (j + tau)^{2H} - 2 j^{2H} + |j - tau|^{2H} ]`,
//!   with the convention `0^{2H} = 0`.
//!
//! At `j = 0` both reduce to the mean square displacement of a single lag-`tau`
//! increment, `2 D tau^{2H}`.

use crate::error::{Error, Result};

/// Which Gaussian process family a model belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProcessKind {
    /// Standard Brownian motion (scaled so `Var X(t) = 2 D t`).
    Bm,
    /// Fractional Brownian motion (scaled so `Var X(t) = 2 D t^{2H}`).
    Fbm,
}

/// A validated Gaussian process model: family, diffusivity `D`, and (for
/// fractional Brownian motion) Hurst index `H`.
///
/// Construction enforces `D > 0` and `0 < H < 1`; a value of this type is
/// always internally consistent.  Brownian motion behaves exactly as the
/// `H = 1/2` member of the fractional family, and [`ProcessModel::hurst`]
/// reports `1/2` for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessModel {
    kind: ProcessKind,
    diffusion: f64,
    hurst: f64,
}

impl ProcessModel {
    /// Brownian motion with diffusivity `diffusion`.
    pub fn bm(diffusion: f64) -> Result<Self> {
        validate_diffusion(diffusion)?;
        Ok(Self {
            kind: ProcessKind::Bm,
            diffusion,
            hurst: 0.5,
        })
    }

    /// Fractional Brownian motion with diffusivity `diffusion` and Hurst
    /// index `hurst`.
    pub fn fbm(diffusion: f64, hurst: f64) -> Result<Self> {
        validate_diffusion(diffusion)?;
        if !(hurst > 0.0 && hurst < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "Hurst index must lie strictly in (0, 1), got {hurst}"
            )));
        }
        Ok(Self {
            kind: ProcessKind::Fbm,
            diffusion,
            hurst,
        })
    }

    /// Process family.
    pub fn kind(&self) -> ProcessKind {
        self.kind
    }

    /// Diffusivity `D` (strictly positive).
    pub fn diffusion(&self) -> f64 {
        self.diffusion
    }

    /// Hurst index `H` in `(0, 1)`; `1/2` for Brownian motion.
    pub fn hurst(&self) -> f64 {
        self.hurst
    }
}

fn validate_diffusion(diffusion: f64) -> Result<()> {
    if !(diffusion > 0.0 && diffusion.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "diffusivity must be a finite positive number, got {diffusion}"
        )));
    }
    Ok(())
}

/// A validated pair (trajectory length `N`, lag `tau`) with `1 <= tau <= N - 1`.
///
/// A trajectory consists of positions `X(0), X(1), ..., X(N)` (so `N` is the
/// number of unit time steps), and the lag-`tau` increment vector has dimension
/// `M = N - tau >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LagSpec {
    n: usize,
    tau: usize,
}

impl LagSpec {
    /// Validate and build a `(N, tau)` pair.
    pub fn new(n: usize, tau: usize) -> Result<Self> {
        if tau == 0 {
            return Err(Error::InvalidParameter(
                "lag tau must be at least 1".to_string(),
            ));
        }
        if n < tau + 1 {
            return Err(Error::InvalidParameter(format!(
                "trajectory length N = {n} must satisfy N >= tau + 1 (tau = {tau}), \
                 otherwise there are no lag-{tau} increments"
            )));
        }
        Ok(Self { n, tau })
    }

    /// Trajectory length `N` (number of unit steps).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Lag `tau`.
    pub fn tau(&self) -> usize {
        self.tau
    }

    /// Dimension `M = N - tau` of the lag-`tau` increment vector.
    pub fn m(&self) -> usize {
        self.n - self.tau
    }
}

/// `x^{2H}` with the convention `0^{2H} = 0` (the exponent is positive).
#[inline]
fn pow_2h(x: f64, two_h: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.powf(two_h)
    }
}

/// Exact autocovariance `sigma_tau(j) = Cov(X(i+tau) - X(i), X(i+j+tau) - X(i+j))`
/// of the lag-`tau` increment sequence at integer separation `j >= 0`.
///
/// Requires `tau >= 1`.  For Brownian motion this is `2 D max(tau - j, 0)`;
/// for fractional Brownian motion it is
/// `D [ (j + tau)^{2H} - 2 j^{2H} + |j - tau|^{2H} ]`.
pub fn increment_autocov(model: &ProcessModel, tau: usize, j: usize) -> Result<f64> {
    if tau == 0 {
        return Err(Error::InvalidParameter(
            "lag tau must be at least 1".to_string(),
        ));
    }
    let d = model.diffusion();
    match model.kind() {
        ProcessKind::Bm => {
            if j <= tau - 1 {
                Ok(2.0 * d * (tau - j) as f64)
            } else {
                Ok(0.0)
            }
        }
        ProcessKind::Fbm => {
            let two_h = 2.0 * model.hurst();
            let jp = (j + tau) as f64;
            let jm = (j as isize - tau as isize).unsigned_abs() as f64;
            Ok(d * (pow_2h(jp, two_h) - 2.0 * pow_2h(j as f64, two_h) + pow_2h(jm, two_h)))
        }
    }
}

/// Mean square displacement `E[(X(t + tau) - X(t))^2] = 2 D tau^{2H}` of a
/// single lag-`tau` increment.  Equals `increment_autocov(model, tau, 0)`.
pub fn increment_mean_square(model: &ProcessModel, tau: usize) -> Result<f64> {
    if tau == 0 {
        return Err(Error::InvalidParameter(
            "lag tau must be at least 1".to_string(),
        ));
    }
    let two_h = 2.0 * model.hurst();
    Ok(2.0 * model.diffusion() * pow_2h(tau as f64, two_h))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn model_validation() {
        assert!(ProcessModel::bm(1.0).is_ok());
        assert!(ProcessModel::bm(0.0).is_err());
        assert!(ProcessModel::bm(-1.0).is_err());
        assert!(ProcessModel::bm(f64::NAN).is_err());
        assert!(ProcessModel::bm(f64::INFINITY).is_err());
        assert!(ProcessModel::fbm(1.0, 0.5).is_ok());
        assert!(ProcessModel::fbm(1.0, 0.0).is_err());
        assert!(ProcessModel::fbm(1.0, 1.0).is_err());
        assert!(ProcessModel::fbm(1.0, -0.3).is_err());
        assert!(ProcessModel::fbm(1.0, f64::NAN).is_err());
        assert_eq!(ProcessModel::bm(2.0).unwrap().hurst(), 0.5);
    }

    #[test]
    fn lag_validation() {
        assert!(LagSpec::new(2, 1).is_ok());
        assert_eq!(LagSpec::new(9, 2).unwrap().m(), 7);
        assert!(LagSpec::new(5, 0).is_err());
        assert!(LagSpec::new(5, 5).is_err());
        assert!(LagSpec::new(5, 6).is_err());
        assert!(LagSpec::new(0, 1).is_err());
    }

    #[test]
    fn bm_autocov_triangular_band() {
        let model = ProcessModel::bm(0.5).unwrap();
        // 2 D (tau - j) inside the band, zero outside.
        assert_eq!(increment_autocov(&model, 3, 0).unwrap(), 3.0);
        assert_eq!(increment_autocov(&model, 3, 1).unwrap(), 2.0);
        assert_eq!(increment_autocov(&model, 3, 2).unwrap(), 1.0);
        assert_eq!(increment_autocov(&model, 3, 3).unwrap(), 0.0);
        assert_eq!(increment_autocov(&model, 3, 100).unwrap(), 0.0);
        assert_eq!(increment_autocov(&model, 1, 0).unwrap(), 1.0);
        assert_eq!(increment_autocov(&model, 1, 1).unwrap(), 0.0);
    }

    #[test]
    fn fbm_autocov_frozen_values() {
        // Reference values computed with 50-digit arithmetic (mpmath):
        //   D = 1/2, H = 0.7:
        //   sigma_1(2) = [4^1.4 - 2*2^1.4 + 1] / 2   = 0.188752539327250992662
        //   sigma_2(1) = [3^1.4 - 2 + 1] / 2          = 1.82776836087303951141
        //   sigma_1(1) = [2^1.4 - 2] / 2              = 0.319507910772894259374
        let model = ProcessModel::fbm(0.5, 0.7).unwrap();
        let cases = [
            (1usize, 2usize, 0.188752539327250992662_f64),
            (2, 1, 1.82776836087303951141),
            (1, 1, 0.319507910772894259374),
        ];
        for (tau, j, expect) in cases {
            let got = increment_autocov(&model, tau, j).unwrap();
            assert!(
                rel_err(got, expect) < 1e-14,
                "sigma_{tau}({j}) = {got}, expected {expect}"
            );
        }
    }

    #[test]
    fn fbm_autocov_negative_correlation_below_half() {
        // Anti-persistent increments: sigma_tau(j) < 0 for j >= tau when H < 1/2.
        let model = ProcessModel::fbm(1.0, 0.3).unwrap();
        for j in 1..6 {
            let v = increment_autocov(&model, 1, j).unwrap();
            assert!(v < 0.0, "expected negative autocovariance, got {v} at j={j}");
        }
    }

    #[test]
    fn fbm_at_half_matches_bm_closely() {
        // The H = 1/2 member of the fractional family must reproduce the
        // Brownian branch to near machine precision over a parameter sweep.
        let bm = ProcessModel::bm(0.37).unwrap();
        let fbm = ProcessModel::fbm(0.37, 0.5).unwrap();
        for tau in 1..=8 {
            for j in 0..20 {
                let a = increment_autocov(&bm, tau, j).unwrap();
                let b = increment_autocov(&fbm, tau, j).unwrap();
                if a == 0.0 {
                    assert!(
                        b.abs() < 1e-12,
                        "tau={tau} j={j}: fbm gave {b}, bm gave exact zero"
                    );
                } else {
                    assert!(
                        rel_err(b, a) < 1e-12,
                        "tau={tau} j={j}: fbm {b} vs bm {a}"
                    );
                }
            }
            let a = increment_mean_square(&bm, tau).unwrap();
            let b = increment_mean_square(&fbm, tau).unwrap();
            assert!(rel_err(b, a) < 1e-12);
        }
    }

    #[test]
    fn mean_square_matches_lag_zero_autocov() {
        for model in [
            ProcessModel::bm(0.5).unwrap(),
            ProcessModel::fbm(0.5, 0.7).unwrap(),
            ProcessModel::fbm(2.0, 0.3).unwrap(),
        ] {
            for tau in 1..=6 {
                let a = increment_mean_square(&model, tau).unwrap();
                let b = increment_autocov(&model, tau, 0).unwrap();
                assert!(rel_err(a, b) < 1e-15, "tau={tau}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn zero_lag_rejected() {
        let model = ProcessModel::bm(1.0).unwrap();
        assert!(increment_autocov(&model, 0, 0).is_err());
        assert!(increment_mean_square(&model, 0).is_err());
    }

    #[test]
    fn fbm_mean_square_frozen_value() {
        // D = 1/2, H = 0.7, tau = 4: 4^1.4 = 6.96440450636899311309 (mpmath).
        let model = ProcessModel::fbm(0.5, 0.7).unwrap();
        let got = increment_mean_square(&model, 4).unwrap();
        assert!(rel_err(got, 6.96440450636899311309) < 1e-15);
    }
}
