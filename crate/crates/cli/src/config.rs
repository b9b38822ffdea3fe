//! Run configuration resolution.
//!
//! Values come from three layers with strict precedence:
//! command-line flags and `TAMSDLD_*` environment variables (the flag wins
//! over the variable; both are handled by the argument parser) override an
//! optional JSON config file, which overrides built-in defaults.  All
//! validation failures are reported before any computation or output starts.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use tamsdld_core::ProcessModel;

/// Defaults applied when neither flags nor the config file set a value.
pub const DEFAULT_DIFFUSION: f64 = 0.5;
pub const DEFAULT_TRIALS: u64 = 10_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_THREADS: usize = 0; // one worker per available core
pub const DEFAULT_MASS_TOL: f64 = 1e-12;
pub const DEFAULT_QUANTILE_GRID: &str = "0.001:0.999:41";
/// Monte Carlo validation below this sample count is too noisy to be
/// meaningful; `verify` and `beta` reject smaller values.
pub const MIN_VALIDATION_TRIALS: u64 = 1_000;

/// A configuration or usage problem; reported on stderr with exit status 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Process {
    Bm,
    Fbm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Bound,
    Dist,
    Verify,
    Beta,
}

/// Flag/environment values as collected by the argument parser.  `None` (or
/// an empty list) means "not given", so the config-file value applies.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    pub process: Option<Process>,
    pub hurst: Option<f64>,
    pub diffusion: Option<f64>,
    pub n: Option<u64>,
    pub tau: Vec<u64>,
    pub eps: Vec<f64>,
    pub eps_grid: Option<String>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub mass_tol: Option<f64>,
    pub x: Vec<f64>,
    pub x_grid: Option<String>,
    pub q_grid: Option<String>,
}

/// Accepts either a scalar or an array in the config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

/// JSON config file schema; field names mirror the long flag names, with the
/// conventional parameter letters accepted as aliases.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub process: Option<String>,
    #[serde(alias = "H")]
    pub hurst: Option<f64>,
    #[serde(alias = "D")]
    pub diffusion: Option<f64>,
    #[serde(alias = "N")]
    pub n: Option<u64>,
    pub tau: Option<OneOrMany<u64>>,
    #[serde(alias = "epsilon")]
    pub eps: Option<OneOrMany<f64>>,
    pub eps_grid: Option<String>,
    pub trials: Option<u64>,
    #[serde(alias = "master_seed")]
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub format: Option<String>,
    #[serde(alias = "output")]
    pub out: Option<PathBuf>,
    pub mass_tol: Option<f64>,
    pub x: Option<OneOrMany<f64>>,
    pub x_grid: Option<String>,
    pub q_grid: Option<String>,
}

/// Where the `dist` command evaluates the distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum DistGrid {
    /// Explicit TAMSD values.
    Values(Vec<f64>),
    /// Probabilities; evaluation points are the distribution quantiles.
    Quantiles(Vec<f64>),
}

/// Fully validated run configuration.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub model: ProcessModel,
    pub n: usize,
    pub taus: Vec<usize>,
    pub epsilons: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub threads: usize,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub mass_tol: f64,
    pub grid: DistGrid,
}

pub fn load_file(path: Option<&Path>) -> Result<FileConfig, UsageError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config file {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| usage(format!("invalid config file {}: {e}", path.display())))
}

/// Parse an inclusive linear grid written as `LO:HI:STEPS`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, UsageError> {
    let bad = |why: &str| usage(format!("invalid grid \"{spec}\": {why} (expected LO:HI:STEPS)"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad("need exactly three colon-separated fields"));
    }
    let lo: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| bad("LO is not a number"))?;
    let hi: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| bad("HI is not a number"))?;
    let steps: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| bad("STEPS is not a positive integer"))?;
    if !lo.is_finite() || !hi.is_finite() {
        return Err(bad("endpoints must be finite"));
    }
    if steps == 0 {
        return Err(bad("STEPS must be at least 1"));
    }
    if steps == 1 {
        if lo != hi {
            return Err(bad("a one-point grid needs LO = HI"));
        }
        return Ok(vec![lo]);
    }
    if hi <= lo {
        return Err(bad("need LO < HI"));
    }
    Ok((0..steps)
        .map(|i| {
            if i + 1 == steps {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (steps - 1) as f64
            }
        })
        .collect())
}

fn parse_process(s: &str) -> Result<Process, UsageError> {
    match s.to_ascii_lowercase().as_str() {
        "bm" => Ok(Process::Bm),
        "fbm" => Ok(Process::Fbm),
        other => Err(usage(format!(
            "unknown process \"{other}\" in config file; use \"bm\" or \"fbm\""
        ))),
    }
}

fn parse_format(s: &str) -> Result<OutputFormat, UsageError> {
    match s.to_ascii_lowercase().as_str() {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(usage(format!(
            "unknown format \"{other}\" in config file; use \"csv\" or \"json\""
        ))),
    }
}

/// Merge flags/environment over the config file over defaults, then validate
/// everything the command will rely on.
pub fn resolve(kind: CommandKind, raw: RawConfig, file: FileConfig) -> Result<Resolved, UsageError> {
    // Borrows raw/file, so resolve it before the field-by-field moves below.
    let grid = resolve_dist_grid(kind, &raw, &file)?;

    let process = match raw.process {
        Some(p) => p,
        None => match &file.process {
            Some(s) => parse_process(s)?,
            None => {
                return Err(usage(
                    "missing process: pass --process bm or --process fbm (or set \"process\" in the config file)",
                ))
            }
        },
    };

    let diffusion = raw.diffusion.or(file.diffusion).unwrap_or(DEFAULT_DIFFUSION);
    let hurst = raw.hurst.or(file.hurst);

    let model = match process {
        Process::Bm => {
            if hurst.is_some() {
                return Err(usage(
                    "a Hurst index applies only to --process fbm (Brownian motion has H = 1/2 \
                     implicitly); drop --hurst or switch to fbm",
                ));
            }
            ProcessModel::bm(diffusion).map_err(|e| usage(e.to_string()))?
        }
        Process::Fbm => {
            let h = hurst.ok_or_else(|| {
                usage("fractional Brownian motion needs --hurst H with H in (0, 1)")
            })?;
            ProcessModel::fbm(diffusion, h).map_err(|e| usage(e.to_string()))?
        }
    };

    let n = raw
        .n
        .or(file.n)
        .ok_or_else(|| usage("missing trajectory length: pass -N <steps> (observations at times 1..N)"))?;
    if n < 2 {
        return Err(usage(format!(
            "trajectory length N must be at least 2 so that some lag satisfies tau <= N - 1; got {n}"
        )));
    }
    let n = usize::try_from(n).map_err(|_| usage("trajectory length does not fit in memory"))?;

    let taus_u64: Vec<u64> = if !raw.tau.is_empty() {
        raw.tau
    } else {
        file.tau.map(OneOrMany::into_vec).unwrap_or_default()
    };
    if taus_u64.is_empty() {
        return Err(usage(
            "missing lag: pass --tau T (repeatable or comma-separated) or set \"tau\" in the config file",
        ));
    }
    let mut taus = Vec::with_capacity(taus_u64.len());
    for t in taus_u64 {
        if t < 1 || t as usize > n - 1 {
            return Err(usage(format!(
                "lag tau = {t} out of range: the time average needs 1 <= tau <= N - 1 = {}",
                n - 1
            )));
        }
        if kind == CommandKind::Beta && t < 2 {
            return Err(usage(
                "the scaling-exponent estimator is undefined at tau = 1: it divides by \
                 ln(tau) = ln 1 = 0; use tau >= 2",
            ));
        }
        taus.push(t as usize);
    }

    let flag_eps_given = !raw.eps.is_empty() || raw.eps_grid.is_some();
    let (eps_list, eps_grid) = if flag_eps_given {
        (raw.eps, raw.eps_grid)
    } else {
        if file.eps.is_some() && file.eps_grid.is_some() {
            return Err(usage(
                "config file sets both \"eps\" and \"eps_grid\"; keep exactly one",
            ));
        }
        (
            file.eps.map(OneOrMany::into_vec).unwrap_or_default(),
            file.eps_grid,
        )
    };
    let epsilons = if !eps_list.is_empty() {
        eps_list
    } else if let Some(g) = &eps_grid {
        parse_grid(g)?
    } else {
        Vec::new()
    };
    if kind != CommandKind::Dist {
        if epsilons.is_empty() {
            return Err(usage(
                "missing deviation levels: pass --eps E (repeatable) or --eps-grid LO:HI:STEPS",
            ));
        }
        for &e in &epsilons {
            if !(e.is_finite() && e > 0.0) {
                return Err(usage(format!(
                    "epsilon must be a positive finite number; got {e}"
                )));
            }
        }
    }

    let trials = raw.trials.or(file.trials).unwrap_or(DEFAULT_TRIALS);
    if matches!(kind, CommandKind::Verify | CommandKind::Beta) && trials < MIN_VALIDATION_TRIALS {
        return Err(usage(format!(
            "Monte Carlo validation needs --trials >= {MIN_VALIDATION_TRIALS}; got {trials}"
        )));
    }

    let seed = raw.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
    let threads = raw.threads.or(file.threads).unwrap_or(DEFAULT_THREADS);

    let format = match raw.format {
        Some(f) => f,
        None => match &file.format {
            Some(s) => parse_format(s)?,
            None => OutputFormat::Csv,
        },
    };

    let out = raw.out.or(file.out);

    let mass_tol = raw.mass_tol.or(file.mass_tol).unwrap_or(DEFAULT_MASS_TOL);
    if !(mass_tol.is_finite() && mass_tol > 0.0 && mass_tol <= 1e-3) {
        return Err(usage(format!(
            "mass tolerance must lie in (0, 1e-3]; got {mass_tol}"
        )));
    }

    if kind == CommandKind::Beta {
        if process != Process::Fbm {
            return Err(usage(
                "the scaling-exponent check applies to fractional Brownian motion only \
                 (the estimator targets beta = 2H); pass --process fbm with --hurst",
            ));
        }
        if model.diffusion() != 0.5 {
            return Err(usage(format!(
                "the scaling-exponent bound needs the normalization D = 1/2 exactly \
                 (so that E TAMSD = tau^(2H)); got D = {}",
                model.diffusion()
            )));
        }
    }

    Ok(Resolved {
        model,
        n,
        taus,
        epsilons,
        trials,
        seed,
        threads,
        format,
        out,
        mass_tol,
        grid,
    })
}

fn resolve_dist_grid(
    kind: CommandKind,
    raw: &RawConfig,
    file: &FileConfig,
) -> Result<DistGrid, UsageError> {
    if kind != CommandKind::Dist {
        return Ok(DistGrid::Values(Vec::new()));
    }
    let flag_given = !raw.x.is_empty() || raw.x_grid.is_some() || raw.q_grid.is_some();
    let (x, x_grid, q_grid) = if flag_given {
        (raw.x.clone(), raw.x_grid.clone(), raw.q_grid.clone())
    } else {
        let sources = usize::from(file.x.is_some())
            + usize::from(file.x_grid.is_some())
            + usize::from(file.q_grid.is_some());
        if sources > 1 {
            return Err(usage(
                "config file sets more than one of \"x\", \"x_grid\", \"q_grid\"; keep exactly one",
            ));
        }
        (
            file.x.clone().map(OneOrMany::into_vec).unwrap_or_default(),
            file.x_grid.clone(),
            file.q_grid.clone(),
        )
    };
    if !x.is_empty() {
        for &v in &x {
            if !(v.is_finite() && v >= 0.0) {
                return Err(usage(format!(
                    "evaluation points must be nonnegative finite numbers; got {v}"
                )));
            }
        }
        return Ok(DistGrid::Values(x));
    }
    if let Some(g) = &x_grid {
        let v = parse_grid(g)?;
        if v[0] < 0.0 {
            return Err(usage("x-grid values must be nonnegative"));
        }
        return Ok(DistGrid::Values(v));
    }
    let spec = q_grid.as_deref().unwrap_or(DEFAULT_QUANTILE_GRID);
    let probs = parse_grid(spec)?;
    for &p in &probs {
        if !(p > 0.0 && p < 1.0) {
            return Err(usage(format!(
                "quantile-grid probabilities must lie strictly inside (0, 1); got {p}"
            )));
        }
    }
    Ok(DistGrid::Quantiles(probs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_raw() -> RawConfig {
        RawConfig {
            process: Some(Process::Bm),
            n: Some(16),
            tau: vec![2],
            eps: vec![1.0],
            ..RawConfig::default()
        }
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("2:2:1").unwrap(), vec![2.0]);
        let g = parse_grid("0.1:0.9:41").unwrap();
        assert_eq!(g.len(), 41);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[40], 0.9); // last point is exactly HI
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("2:1:5").is_err());
        assert!(parse_grid("1:2:0").is_err());
        assert!(parse_grid("a:2:3").is_err());
        assert!(parse_grid("1:3:1").is_err());
    }

    #[test]
    fn defaults_apply_when_nothing_is_given() {
        let r = resolve(CommandKind::Bound, base_raw(), FileConfig::default()).unwrap();
        assert_eq!(r.model.diffusion(), DEFAULT_DIFFUSION);
        assert_eq!(r.trials, DEFAULT_TRIALS);
        assert_eq!(r.seed, DEFAULT_SEED);
        assert_eq!(r.threads, DEFAULT_THREADS);
        assert_eq!(r.format, OutputFormat::Csv);
        assert_eq!(r.mass_tol, DEFAULT_MASS_TOL);
    }

    #[test]
    fn file_fills_gaps_and_flags_override() {
        let file: FileConfig = serde_json::from_str(
            r#"{"process": "fbm", "H": 0.7, "N": 32, "tau": [1, 2], "eps": 0.5, "seed": 99}"#,
        )
        .unwrap();
        // Only flags: process/eps given on the command line win; the rest
        // comes from the file.
        let raw = RawConfig {
            eps: vec![2.0],
            ..RawConfig::default()
        };
        let r = resolve(CommandKind::Bound, raw, file).unwrap();
        assert_eq!(r.model.hurst(), 0.7);
        assert_eq!(r.n, 32);
        assert_eq!(r.taus, vec![1, 2]);
        assert_eq!(r.epsilons, vec![2.0]); // flag beat the file's 0.5
        assert_eq!(r.seed, 99);
    }

    #[test]
    fn file_aliases_and_scalar_lists() {
        let file: FileConfig = serde_json::from_str(
            r#"{"process": "bm", "D": 1.5, "N": 8, "tau": 3, "epsilon": [1.0, 2.0], "master_seed": 7}"#,
        )
        .unwrap();
        let r = resolve(CommandKind::Bound, RawConfig::default(), file).unwrap();
        assert_eq!(r.model.diffusion(), 1.5);
        assert_eq!(r.taus, vec![3]);
        assert_eq!(r.epsilons, vec![1.0, 2.0]);
        assert_eq!(r.seed, 7);
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let parsed: Result<FileConfig, _> = serde_json::from_str(r#"{"procss": "bm"}"#);
        assert!(parsed.is_err());
    }

    #[test]
    fn validation_messages_are_actionable() {
        let err = resolve(CommandKind::Bound, RawConfig::default(), FileConfig::default())
            .unwrap_err();
        assert!(err.0.contains("--process"), "got: {}", err.0);

        let mut raw = base_raw();
        raw.eps = vec![0.0];
        let err = resolve(CommandKind::Bound, raw, FileConfig::default()).unwrap_err();
        assert!(err.0.contains("positive"), "got: {}", err.0);

        let mut raw = base_raw();
        raw.tau = vec![16];
        let err = resolve(CommandKind::Bound, raw, FileConfig::default()).unwrap_err();
        assert!(err.0.contains("N - 1"), "got: {}", err.0);

        let mut raw = base_raw();
        raw.hurst = Some(0.7);
        let err = resolve(CommandKind::Bound, raw, FileConfig::default()).unwrap_err();
        assert!(err.0.contains("fbm"), "got: {}", err.0);

        let raw = RawConfig {
            process: Some(Process::Fbm),
            n: Some(16),
            tau: vec![2],
            eps: vec![1.0],
            ..RawConfig::default()
        };
        let err = resolve(CommandKind::Bound, raw, FileConfig::default()).unwrap_err();
        assert!(err.0.contains("--hurst"), "got: {}", err.0);
    }

    #[test]
    fn beta_preconditions() {
        // tau = 1 names the vanishing logarithm.
        let raw = RawConfig {
            process: Some(Process::Fbm),
            hurst: Some(0.7),
            n: Some(16),
            tau: vec![1],
            eps: vec![0.5],
            trials: Some(2000),
            ..RawConfig::default()
        };
        let err = resolve(CommandKind::Beta, raw, FileConfig::default()).unwrap_err();
        assert!(err.0.contains("ln"), "got: {}", err.0);

        // Only fbm is accepted.
        let raw = RawConfig {
            trials: Some(2000),
            tau: vec![2],
            ..base_raw()
        };
        let err = resolve(CommandKind::Beta, raw, FileConfig::default()).unwrap_err();
        assert!(err.0.contains("fbm"), "got: {}", err.0);

        // D must be exactly 1/2.
        let raw = RawConfig {
            process: Some(Process::Fbm),
            hurst: Some(0.7),
            diffusion: Some(0.6),
            n: Some(16),
            tau: vec![2],
            eps: vec![0.5],
            trials: Some(2000),
            ..RawConfig::default()
        };
        let err = resolve(CommandKind::Beta, raw, FileConfig::default()).unwrap_err();
        assert!(err.0.contains("D = 1/2"), "got: {}", err.0);

        // Too few trials for a meaningful check.
        let raw = RawConfig {
            process: Some(Process::Fbm),
            hurst: Some(0.7),
            n: Some(16),
            tau: vec![2],
            eps: vec![0.5],
            trials: Some(999),
            ..RawConfig::default()
        };
        let err = resolve(CommandKind::Beta, raw, FileConfig::default()).unwrap_err();
        assert!(err.0.contains("1000"), "got: {}", err.0);
    }

    #[test]
    fn dist_grid_resolution() {
        let mut raw = base_raw();
        raw.eps = vec![];
        let r = resolve(CommandKind::Dist, raw.clone(), FileConfig::default()).unwrap();
        match r.grid {
            DistGrid::Quantiles(ps) => {
                assert_eq!(ps.len(), 41);
                assert_eq!(ps[0], 0.001);
                assert_eq!(ps[40], 0.999);
            }
            other => panic!("expected default quantile grid, got {other:?}"),
        }

        raw.x = vec![0.5, 1.0];
        let r = resolve(CommandKind::Dist, raw.clone(), FileConfig::default()).unwrap();
        assert_eq!(r.grid, DistGrid::Values(vec![0.5, 1.0]));

        raw.x = vec![];
        raw.q_grid = Some("0.5:1.5:3".to_string());
        let err = resolve(CommandKind::Dist, raw, FileConfig::default()).unwrap_err();
        assert!(err.0.contains("(0, 1)"), "got: {}", err.0);
    }

    #[test]
    fn eps_grid_expands() {
        let mut raw = base_raw();
        raw.eps = vec![];
        raw.eps_grid = Some("1:3:3".to_string());
        let r = resolve(CommandKind::Bound, raw, FileConfig::default()).unwrap();
        assert_eq!(r.epsilons, vec![1.0, 2.0, 3.0]);
    }
}
