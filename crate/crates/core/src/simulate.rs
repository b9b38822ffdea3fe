//! Exact trajectory sampling and deterministic parallel Monte Carlo
//! estimation of TAMSD tail probabilities.
//!
//! # Sampling
//!
//! Unit-lag increments of the process (stationary fractional Gaussian noise;
//! plain white noise for Brownian motion) are drawn exactly by circulant
//! embedding: the length-`L` autocovariance sequence is embedded in a
//! circulant of size `m = 2L` (`L` = next power of two at or above `N`),
//! whose FFT gives nonnegative spectral weights; coloring complex Gaussian
//! spectral coefficients and transforming back yields increments with
//! exactly the target covariance.  If the embedding produces a meaningfully
//! negative spectral value the sampler falls back to a dense Cholesky
//! factorization of the `N x N` increment covariance (exact as well, at
//! `O(N^2)` per path) and records that in its [`SamplerMethod`].
//!
//! # Reproducibility
//!
//! Every trial draws from its own counter-mode stream: the master seed is
//! expanded into a 256-bit ChaCha key, and trial `i` reads stream `i` of
//! that keyed generator.  A trial's randomness therefore depends only on
//! `(master_seed, trial_index)` — never on thread scheduling — and the
//! number of standard normal draws per trial is a fixed function of the
//! sampler configuration.  Monte Carlo runs assign trials to fixed blocks
//! of [`MC_BLOCK_TRIALS`], workers claim whole blocks, and block results
//! are folded in block order, so every reported number is bit-identical
//! for any worker count.

use crate::error::{Error, Result};
use crate::models::{increment_autocov, increment_mean_square, LagSpec, ProcessModel};
use crate::special::inv_inc_beta;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rustfft::{Fft, FftPlanner};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

/// Trials per scheduling block in Monte Carlo runs.  Fixed (never derived
/// from the worker count) so that results are reproducible bit-for-bit at
/// any parallelism.
pub const MC_BLOCK_TRIALS: u64 = 1024;

/// Relative tolerance on negative circulant spectral values before the
/// sampler abandons the embedding for the dense factorization.
const EMBEDDING_NEGATIVITY_TOL: f64 = 1e-8;

/// How a [`PathSampler`] generates increments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerMethod {
    /// FFT circulant embedding (exact, `O(N log N)` per path).
    CirculantEmbedding,
    /// Dense Cholesky factorization (exact, `O(N^2)` per path), used when
    /// the embedding is not nonnegative definite.
    DenseFactorization,
}

/// A sampled (or user-supplied) trajectory of positions `X(0), ..., X(N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    values: Vec<f64>,
}

impl Trajectory {
    /// Wrap an explicit position sequence (at least two positions, all
    /// finite).  `values[j]` is `X(j)`; the trajectory length is
    /// `N = values.len() - 1` steps.
    pub fn from_positions(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Dimension(
                "a trajectory needs at least two positions".to_string(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "trajectory contains a non-finite position".to_string(),
            ));
        }
        Ok(Self { values })
    }

    /// Positions `X(0) ..= X(N)`.
    pub fn positions(&self) -> &[f64] {
        &self.values
    }

    /// Number of unit time steps `N`.
    pub fn n(&self) -> usize {
        self.values.len() - 1
    }
}

/// SplitMix64 step, used to expand a 64-bit master seed into a 256-bit key.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-mode generator for one trial: master seed keys the cipher,
/// the trial index selects the stream.
fn rng_for_trial(master_seed: u64, trial: u64) -> ChaCha12Rng {
    let mut state = master_seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha12Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

/// Reusable exact sampler for one `(model, N)` configuration.
pub struct PathSampler {
    n: usize,
    method: SamplerMethod,
    /// Circulant state: spectral standard deviations with the inverse-size
    /// normalization folded in (`sqrt(e_k / m)`, halved variance on paired
    /// frequencies), plus the planned FFT of size `m = 2L`.
    spectral_sd: Vec<f64>,
    fft: Option<Arc<dyn Fft<f64>>>,
    /// Dense state: lower Cholesky factor of the `N x N` unit-lag increment
    /// covariance.
    chol: Option<Vec<f64>>,
}

impl PathSampler {
    /// Plan a sampler for `n`-step trajectories of `model`.
    pub fn new(model: &ProcessModel, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "trajectory length N must be at least 1".to_string(),
            ));
        }
        // Unit-lag increment autocovariance r(0 ..= L).
        let l = n.next_power_of_two();
        let m = 2 * l;
        let mut r = Vec::with_capacity(l + 1);
        for j in 0..=l {
            r.push(increment_autocov(model, 1, j)?);
        }
        // Circulant first row c_k = r(min(k, m - k)).
        let mut buf: Vec<Complex64> = (0..m)
            .map(|k| Complex64::new(r[k.min(m - k)], 0.0))
            .collect();
        let mut planner = FftPlanner::<f64>::new();
        let fft = planner.plan_fft_forward(m);
        fft.process(&mut buf);
        let max_e = buf.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        let min_e = buf.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        if min_e < -EMBEDDING_NEGATIVITY_TOL * max_e.max(0.0) {
            // Embedding failed; build the dense factorization instead.
            let chol = dense_increment_cholesky(model, n)?;
            return Ok(Self {
                n,
                method: SamplerMethod::DenseFactorization,
                spectral_sd: Vec::new(),
                fft: None,
                chol: Some(chol),
            });
        }
        let m_f = m as f64;
        let spectral_sd: Vec<f64> = buf
            .iter()
            .enumerate()
            .map(|(k, z)| {
                let e = z.re.max(0.0);
                // Paired frequencies split their variance across the real
                // and imaginary coefficient.
                if k == 0 || k == m / 2 {
                    (e / m_f).sqrt()
                } else {
                    (e / (2.0 * m_f)).sqrt()
                }
            })
            .collect();
        Ok(Self {
            n,
            method: SamplerMethod::CirculantEmbedding,
            spectral_sd,
            fft: Some(fft),
            chol: None,
        })
    }

    /// Trajectory length `N` this sampler produces.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Which exact sampling method this configuration uses.
    pub fn method(&self) -> SamplerMethod {
        self.method
    }

    /// Draw the `N` unit-lag increments for `(master_seed, trial)` into
    /// `out`, reusing `scratch` for the spectral buffer.
    fn sample_increments_into(
        &self,
        master_seed: u64,
        trial: u64,
        out: &mut Vec<f64>,
        scratch: &mut Vec<Complex64>,
    ) {
        let mut rng = rng_for_trial(master_seed, trial);
        out.clear();
        match self.method {
            SamplerMethod::CirculantEmbedding => {
                let m = self.spectral_sd.len();
                scratch.clear();
                scratch.resize(m, Complex64::new(0.0, 0.0));
                // Fixed draw order: DC, then (re, im) per paired frequency,
                // then Nyquist — exactly m standard normals per trial.
                let g: f64 = rng.sample(StandardNormal);
                scratch[0] = Complex64::new(self.spectral_sd[0] * g, 0.0);
                for k in 1..m / 2 {
                    let a: f64 = rng.sample(StandardNormal);
                    let b: f64 = rng.sample(StandardNormal);
                    let z = Complex64::new(self.spectral_sd[k] * a, self.spectral_sd[k] * b);
                    scratch[k] = z;
                    scratch[m - k] = z.conj();
                }
                let g: f64 = rng.sample(StandardNormal);
                scratch[m / 2] = Complex64::new(self.spectral_sd[m / 2] * g, 0.0);
                self.fft
                    .as_ref()
                    .expect("circulant sampler always plans an FFT")
                    .process(scratch);
                out.extend(scratch[..self.n].iter().map(|z| z.re));
            }
            SamplerMethod::DenseFactorization => {
                let n = self.n;
                let chol = self.chol.as_ref().expect("dense sampler stores a factor");
                let g: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
                for i in 0..n {
                    let mut acc = 0.0;
                    for (k, gk) in g.iter().enumerate().take(i + 1) {
                        acc += chol[i * n + k] * gk;
                    }
                    out.push(acc);
                }
            }
        }
    }

    /// Sample the full position trajectory `X(0) = 0, X(1), ..., X(N)` for
    /// `(master_seed, trial)`.
    pub fn sample_path(&self, master_seed: u64, trial: u64) -> Trajectory {
        let mut fgn = Vec::with_capacity(self.n);
        let mut scratch = Vec::new();
        self.sample_increments_into(master_seed, trial, &mut fgn, &mut scratch);
        let mut values = Vec::with_capacity(self.n + 1);
        values.push(0.0);
        let mut acc = 0.0;
        for inc in fgn {
            acc += inc;
            values.push(acc);
        }
        Trajectory { values }
    }
}

/// Dense lower Cholesky factor of the `n x n` unit-lag increment covariance.
fn dense_increment_cholesky(model: &ProcessModel, n: usize) -> Result<Vec<f64>> {
    let mut row = Vec::with_capacity(n);
    for j in 0..n {
        row.push(increment_autocov(model, 1, j)?);
    }
    let mut l = vec![0.0_f64; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = row[i - j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 {
                    return Err(Error::NotPositiveDefinite { value: s });
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Ok(l)
}

/// Convenience one-shot sampler: plan, draw trial `trial`, return the path.
pub fn sample_path(
    model: &ProcessModel,
    n: usize,
    master_seed: u64,
    trial: u64,
) -> Result<Trajectory> {
    Ok(PathSampler::new(model, n)?.sample_path(master_seed, trial))
}

/// Time-averaged mean square displacement of a trajectory at lag `tau`:
/// `(1/(N - tau)) sum_{j=1}^{N-tau} (X(j + tau) - X(j))^2`.
pub fn tamsd(traj: &Trajectory, tau: usize) -> Result<f64> {
    let n = traj.n();
    if tau == 0 || tau >= n {
        return Err(Error::InvalidParameter(format!(
            "tamsd needs 1 <= tau <= N - 1, got tau = {tau}, N = {n}"
        )));
    }
    let v = traj.positions();
    let m = n - tau;
    let mut acc = 0.0;
    for j in 1..=m {
        let d = v[j + tau] - v[j];
        acc += d * d;
    }
    Ok(acc / m as f64)
}

/// Log-regression scaling-exponent estimator
/// `beta_hat = ln TAMSD(tau) / ln tau` (meaningful under the `D = 1/2`
/// normalization, where `E TAMSD(tau) = tau^{2H}`).
///
/// Requires `tau >= 2`; at `tau = 1` the estimator divides by `ln 1 = 0`.
pub fn beta_hat(traj: &Trajectory, tau: usize) -> Result<f64> {
    if tau < 2 {
        return Err(Error::Domain(
            "beta_hat needs tau >= 2: at tau = 1 it divides by ln(tau) = 0".to_string(),
        ));
    }
    let m = tamsd(traj, tau)?;
    if m <= 0.0 {
        return Err(Error::DegeneratePath(format!(
            "TAMSD is {m}; the log-regression estimator needs a strictly positive TAMSD"
        )));
    }
    Ok(m.ln() / (tau as f64).ln())
}

/// Which tail event a Monte Carlo run counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailStatistic {
    /// `|TAMSD - E TAMSD| > epsilon` (exact analytic centering).
    TamsdTwoSided,
    /// `TAMSD - E TAMSD > epsilon`.
    TamsdRight,
    /// `beta_hat - 2H > epsilon` (analytic centering at the true exponent),
    /// with the ensemble-centered count reported alongside.
    BetaRight,
}

impl TailStatistic {
    /// Stable lowercase label used in CLI output.
    pub fn label(&self) -> &'static str {
        match self {
            TailStatistic::TamsdTwoSided => "tamsd_two_sided",
            TailStatistic::TamsdRight => "tamsd_right",
            TailStatistic::BetaRight => "beta_right",
        }
    }
}

/// Ensemble-centered companion numbers for [`TailStatistic::BetaRight`] runs.
///
/// The analytic centering compares `beta_hat` against the true exponent
/// `2H`; the ensemble centering compares against the Monte Carlo mean of
/// `beta_hat` itself, which isolates the estimator's spread from its bias.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaCentering {
    /// Ensemble mean of `beta_hat` across all trials.
    pub beta_mean: f64,
    /// Standard error of that mean.
    pub beta_se: f64,
    /// Hits for `beta_hat - beta_mean > epsilon`.
    pub hits_ensemble: u64,
    /// `hits_ensemble / trials`.
    pub p_hat_ensemble: f64,
}

/// Result of a Monte Carlo tail estimation at one deviation `epsilon`.
#[derive(Debug, Clone, PartialEq)]
pub struct McTailEstimate {
    /// Which event was counted.
    pub statistic: TailStatistic,
    /// Deviation threshold.
    pub epsilon: f64,
    /// Trials performed.
    pub trials: u64,
    /// Trials in which the event occurred (analytic centering).
    pub hits: u64,
    /// `hits / trials`.
    pub p_hat: f64,
    /// Lower end of the 99% equal-tailed binomial confidence interval.
    pub ci_low: f64,
    /// Upper end of the 99% equal-tailed binomial confidence interval.
    pub ci_high: f64,
    /// Extra centering data for [`TailStatistic::BetaRight`] runs.
    pub beta: Option<BetaCentering>,
}

/// Equal-tailed Clopper-Pearson binomial confidence interval for `hits`
/// successes in `trials` trials at the given confidence level.
pub fn clopper_pearson(hits: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::InvalidParameter(
            "confidence interval needs at least one trial".to_string(),
        ));
    }
    if hits > trials {
        return Err(Error::InvalidParameter(format!(
            "hits ({hits}) cannot exceed trials ({trials})"
        )));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Domain(format!(
            "confidence level must lie strictly in (0, 1), got {confidence}"
        )));
    }
    let alpha = 1.0 - confidence;
    let h = hits as f64;
    let n = trials as f64;
    let low = if hits == 0 {
        0.0
    } else {
        inv_inc_beta(h, n - h + 1.0, alpha / 2.0)?
    };
    let high = if hits == trials {
        1.0
    } else {
        inv_inc_beta(h + 1.0, n - h, 1.0 - alpha / 2.0)?
    };
    Ok((low, high))
}

/// Per-block partial result: either per-epsilon hit counts, or the raw
/// estimator values (folded in block order afterward).
enum BlockResult {
    TamsdHits(Vec<u64>),
    BetaValues(Vec<f64>),
}

/// Monte Carlo estimate of the tail probability at a single `epsilon`.
/// Equivalent to `mc_tail_sweep` with a one-element grid.
pub fn mc_tail(
    model: &ProcessModel,
    lag: LagSpec,
    epsilon: f64,
    statistic: TailStatistic,
    trials: u64,
    master_seed: u64,
    threads: usize,
) -> Result<McTailEstimate> {
    let mut v = mc_tail_sweep(model, lag, &[epsilon], statistic, trials, master_seed, threads)?;
    Ok(v.pop().expect("one epsilon in, one estimate out"))
}

/// Monte Carlo estimate of tail probabilities on a grid of deviations,
/// sharing one set of sampled trajectories across the whole grid.
///
/// Deterministic for fixed `(model, lag, epsilons, statistic, trials,
/// master_seed)`: the worker count `threads` (0 = use all available cores)
/// changes only the wall-clock time, never any reported number.
pub fn mc_tail_sweep(
    model: &ProcessModel,
    lag: LagSpec,
    epsilons: &[f64],
    statistic: TailStatistic,
    trials: u64,
    master_seed: u64,
    threads: usize,
) -> Result<Vec<McTailEstimate>> {
    if epsilons.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one deviation epsilon is required".to_string(),
        ));
    }
    for &e in epsilons {
        if !(e > 0.0 && e.is_finite()) {
            return Err(Error::Domain(format!(
                "deviation epsilon must be a finite positive number, got {e}"
            )));
        }
    }
    if trials == 0 {
        return Err(Error::InvalidParameter(
            "at least one trial is required".to_string(),
        ));
    }
    if statistic == TailStatistic::BetaRight && lag.tau() < 2 {
        return Err(Error::Domain(
            "beta_right needs tau >= 2: at tau = 1 the estimator divides by ln(tau) = 0"
                .to_string(),
        ));
    }
    let center = increment_mean_square(model, lag.tau())?;
    let beta_true = 2.0 * model.hurst();
    let sampler = PathSampler::new(model, lag.n())?;

    let nblocks = trials.div_ceil(MC_BLOCK_TRIALS);
    let worker_count = if threads == 0 {
        std::thread::available_parallelism()
            .map(|p| p.get())
            .unwrap_or(1)
    } else {
        threads
    }
    .min(nblocks as usize)
    .max(1);

    let next_block = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let results: Mutex<Vec<Option<BlockResult>>> = Mutex::new((0..nblocks).map(|_| None).collect());
    let first_error: Mutex<Option<Error>> = Mutex::new(None);

    std::thread::scope(|scope| {
        for _ in 0..worker_count {
            scope.spawn(|| {
                let mut fgn: Vec<f64> = Vec::new();
                let mut scratch: Vec<Complex64> = Vec::new();
                loop {
                    if abort.load(Ordering::Relaxed) {
                        break;
                    }
                    let b = next_block.fetch_add(1, Ordering::Relaxed) as u64;
                    if b >= nblocks {
                        break;
                    }
                    let start = b * MC_BLOCK_TRIALS;
                    let count = MC_BLOCK_TRIALS.min(trials - start);
                    let block = run_block(
                        &sampler,
                        lag,
                        center,
                        epsilons,
                        statistic,
                        master_seed,
                        start,
                        count,
                        &mut fgn,
                        &mut scratch,
                    );
                    match block {
                        Ok(res) => {
                            results.lock().expect("result store poisoned")[b as usize] = Some(res);
                        }
                        Err(e) => {
                            abort.store(true, Ordering::Relaxed);
                            let mut slot = first_error.lock().expect("error store poisoned");
                            if slot.is_none() {
                                *slot = Some(e);
                            }
                            break;
                        }
                    }
                }
            });
        }
    });

    let results = results.into_inner().expect("result store poisoned");
    if let Some(err) = first_error.into_inner().expect("error store poisoned") {
        let completed: u64 = results
            .iter()
            .zip(0..nblocks)
            .filter(|(r, _)| r.is_some())
            .map(|(_, b)| MC_BLOCK_TRIALS.min(trials - b * MC_BLOCK_TRIALS))
            .sum();
        return Err(Error::PartialResult {
            completed,
            reason: err.to_string(),
        });
    }

    // Fold blocks in block order (deterministic reduction).
    match statistic {
        TailStatistic::TamsdTwoSided | TailStatistic::TamsdRight => {
            let mut hits = vec![0u64; epsilons.len()];
            for r in results {
                match r.expect("all blocks completed") {
                    BlockResult::TamsdHits(h) => {
                        for (dst, src) in hits.iter_mut().zip(h) {
                            *dst += src;
                        }
                    }
                    BlockResult::BetaValues(_) => unreachable!("statistic mismatch"),
                }
            }
            epsilons
                .iter()
                .zip(hits)
                .map(|(&epsilon, h)| {
                    let (ci_low, ci_high) = clopper_pearson(h, trials, 0.99)?;
                    Ok(McTailEstimate {
                        statistic,
                        epsilon,
                        trials,
                        hits: h,
                        p_hat: h as f64 / trials as f64,
                        ci_low,
                        ci_high,
                        beta: None,
                    })
                })
                .collect()
        }
        TailStatistic::BetaRight => {
            let mut values: Vec<f64> = Vec::with_capacity(trials as usize);
            for r in results {
                match r.expect("all blocks completed") {
                    BlockResult::BetaValues(v) => values.extend(v),
                    BlockResult::TamsdHits(_) => unreachable!("statistic mismatch"),
                }
            }
            let nf = values.len() as f64;
            let mean = values.iter().sum::<f64>() / nf;
            let var = if values.len() > 1 {
                values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (nf - 1.0)
            } else {
                0.0
            };
            let se = (var / nf).sqrt();
            epsilons
                .iter()
                .map(|&epsilon| {
                    let hits = values.iter().filter(|&&v| v - beta_true > epsilon).count() as u64;
                    let hits_ens = values.iter().filter(|&&v| v - mean > epsilon).count() as u64;
                    let (ci_low, ci_high) = clopper_pearson(hits, trials, 0.99)?;
                    Ok(McTailEstimate {
                        statistic,
                        epsilon,
                        trials,
                        hits,
                        p_hat: hits as f64 / trials as f64,
                        ci_low,
                        ci_high,
                        beta: Some(BetaCentering {
                            beta_mean: mean,
                            beta_se: se,
                            hits_ensemble: hits_ens,
                            p_hat_ensemble: hits_ens as f64 / trials as f64,
                        }),
                    })
                })
                .collect()
        }
    }
}

/// Run one scheduling block of trials and reduce it locally.
#[allow(clippy::too_many_arguments)]
fn run_block(
    sampler: &PathSampler,
    lag: LagSpec,
    center: f64,
    epsilons: &[f64],
    statistic: TailStatistic,
    master_seed: u64,
    start: u64,
    count: u64,
    fgn: &mut Vec<f64>,
    scratch: &mut Vec<Complex64>,
) -> Result<BlockResult> {
    let tau = lag.tau();
    let m = lag.m();
    match statistic {
        TailStatistic::TamsdTwoSided | TailStatistic::TamsdRight => {
            let mut hits = vec![0u64; epsilons.len()];
            for t in 0..count {
                sampler.sample_increments_into(master_seed, start + t, fgn, scratch);
                let value = tamsd_from_increments(fgn, tau, m);
                let dev = value - center;
                for (h, &e) in hits.iter_mut().zip(epsilons) {
                    let hit = match statistic {
                        TailStatistic::TamsdTwoSided => dev.abs() > e,
                        _ => dev > e,
                    };
                    if hit {
                        *h += 1;
                    }
                }
            }
            Ok(BlockResult::TamsdHits(hits))
        }
        TailStatistic::BetaRight => {
            let mut values = Vec::with_capacity(count as usize);
            for t in 0..count {
                sampler.sample_increments_into(master_seed, start + t, fgn, scratch);
                let value = tamsd_from_increments(fgn, tau, m);
                if value <= 0.0 {
                    return Err(Error::DegeneratePath(format!(
                        "trial {} produced TAMSD {value}; cannot take its logarithm",
                        start + t
                    )));
                }
                values.push(value.ln() / (tau as f64).ln());
            }
            Ok(BlockResult::BetaValues(values))
        }
    }
}

/// TAMSD computed directly from unit-lag increments (positions are their
/// prefix sums; the lag-`tau` displacement from `X(j)` to `X(j+tau)` is the
/// window sum of `tau` consecutive increments starting at index `j`).
fn tamsd_from_increments(fgn: &[f64], tau: usize, m: usize) -> f64 {
    // Window sum over increments [j, j + tau) for j = 1 .. m (0-based: the
    // displacement X(j+tau) - X(j) sums fgn[j .. j+tau]).
    let mut window: f64 = fgn[1..1 + tau].iter().sum();
    let mut acc = window * window;
    for j in 2..=m {
        window += fgn[j + tau - 1] - fgn[j - 1];
        acc += window * window;
    }
    acc / m as f64
}
