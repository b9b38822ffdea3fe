//! Benchmark-only crate: shared fixtures for the criterion benches.

use tamsdld_core::{build_toeplitz, spectrum, LagSpec, ProcessModel, SpectrumSummary};

/// Spectrum of the displacement covariance for a standard benchmark case.
pub fn bench_spectrum(hurst: f64, n: usize, tau: usize) -> SpectrumSummary {
    let model = if hurst == 0.5 {
        ProcessModel::bm(0.5).unwrap()
    } else {
        ProcessModel::fbm(0.5, hurst).unwrap()
    };
    let lag = LagSpec::new(n, tau).unwrap();
    spectrum(&build_toeplitz(&model, lag).unwrap()).unwrap()
}
