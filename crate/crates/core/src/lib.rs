//! Exact finite-sample distribution and sub-gamma large-deviation bounds for
//! the time-averaged mean square displacement (TAMSD) of discretely observed
//! Gaussian processes, plus a Monte Carlo engine to validate both.
//!
//! # What this crate computes
//!
//! For a centered Gaussian process `X` with stationary increments —
//! Brownian motion or fractional Brownian motion, scaled so that
//! `Var X(t) = 2 D t^{2H}` — observed at integer times `0..=N`, the lag-`tau`
//! time-averaged mean square displacement is the random variable
//!
//! ```text
//! TAMSD(tau) = (1 / (N - tau)) * sum_{j} ( X(j + tau) - X(j) )^2 .
//! ```
//!
//! The scaled statistic `(N - tau) * TAMSD` is a Gaussian quadratic form, so
//! its law is a weighted chi-square combination determined by the spectrum of
//! the increment covariance matrix (a symmetric Toeplitz matrix).  This crate
//! provides:
//!
//! * [`models`] — process models and exact increment autocovariances;
//! * [`toeplitz`] — the covariance matrix, its spectrum, closed-form trace
//!   identities, and a largest-eigenvalue sandwich;
//! * [`eigen`] — the dense symmetric eigensolver behind [`toeplitz`];
//! * [`gchi2`] — the exact TAMSD density/CDF/tail/quantiles via a gamma-series
//!   expansion of the weighted chi-square law, plus its MGF and CF;
//! * [`bounds`] — explicit sub-gamma (Bernstein-type) deviation inequalities
//!   for the TAMSD and for the log-regression scaling-exponent estimator;
//! * [`simulate`] — an exact circulant-embedding path sampler and a
//!   deterministic parallel Monte Carlo tail estimator with binomial
//!   confidence intervals;
//! * [`special`] — the scalar special functions backing the above.
//!
//! All public numerical routines return [`error::Result`] and make failure
//! modes explicit (domain violations, non-convergence, truncation deficits,
//! positive-definiteness failures).

pub mod bounds;
pub mod eigen;
pub mod error;
pub mod gchi2;
pub mod models;
pub mod simulate;
pub mod special;
pub mod toeplitz;

pub use bounds::{
    beta_bound_from_params, beta_estimator_bound, bm_deviation_bound, chernoff_tail,
    fbm_deviation_bound, h_function, subgamma_params, tamsd_bound_from_params,
    tamsd_deviation_bound, BoundResult, Sided, SubGammaParams,
};
pub use error::{Error, Result};
pub use gchi2::{
    build_series, tamsd_cdf, tamsd_cf, tamsd_mgf, tamsd_pdf, tamsd_quantile, tamsd_tail,
    GChi2Series,
};
pub use models::{
    increment_autocov, increment_mean_square, LagSpec, ProcessKind, ProcessModel,
};
pub use simulate::{
    beta_hat, clopper_pearson, mc_tail, mc_tail_sweep, sample_path, tamsd, BetaCentering,
    McTailEstimate, PathSampler, SamplerMethod, TailStatistic, Trajectory,
};
pub use toeplitz::{
    build_toeplitz, max_eigenvalue_sandwich, spectrum, sum_lambda_sq_closed_form, SandwichBounds,
    SpectrumSummary, ToeplitzSpec,
};
