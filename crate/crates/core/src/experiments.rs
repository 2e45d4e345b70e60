//! Monte Carlo measurement of root-finding success rates.
//!
//! Trial `i` of an experiment seeded with `s` draws everything (the tree and
//! the label shuffle) from `RngStream::for_trial(s, i)`. Outcomes are
//! collected in trial order, so results do not depend on the worker count.

use std::io::{self, Write};
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::estimators::{select_smallest, Estimator};
use crate::generators::{GeneratorError, ModelSpec, RngStream};
use crate::tree::forget_labels;

/// Default ceiling on `n` for the quadratic-memory likelihood estimators.
pub const EXACT_ESTIMATOR_CAP: usize = 2000;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error("invalid experiment: {0}")]
    BadConfig(String),
    #[error("{estimator} is capped at n = {cap} (got {n}); set allow_large to override")]
    TooLargeForExactEstimator {
        estimator: Estimator,
        n: usize,
        cap: usize,
    },
    #[error("sweep file line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub estimator: Estimator,
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    /// Lift [`EXACT_ESTIMATOR_CAP`] for `zeta` and `xi`.
    pub allow_large: bool,
}

impl ExperimentConfig {
    pub fn new(model: ModelSpec, estimator: Estimator, n: usize, k: usize, trials: usize, seed: u64) -> Self {
        ExperimentConfig {
            model,
            estimator,
            n,
            k,
            trials,
            seed,
            allow_large: false,
        }
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        if self.trials == 0 {
            return Err(ExperimentError::BadConfig("trials must be at least 1".into()));
        }
        if self.k == 0 {
            return Err(ExperimentError::BadConfig("k must be at least 1".into()));
        }
        if self.n < 2 {
            return Err(ExperimentError::BadConfig("n must be at least 2".into()));
        }
        if self.estimator.is_exact_likelihood() && self.n > EXACT_ESTIMATOR_CAP && !self.allow_large {
            return Err(ExperimentError::TooLargeForExactEstimator {
                estimator: self.estimator,
                n: self.n,
                cap: EXACT_ESTIMATOR_CAP,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub successes: usize,
    pub trials: usize,
    pub rate: f64,
    pub lo95: f64,
    pub hi95: f64,
    pub seconds: f64,
    /// Per-trial success flags, in trial order.
    pub outcomes: Vec<bool>,
}

impl ExperimentResult {
    pub fn from_outcomes(outcomes: Vec<bool>, seconds: f64) -> Self {
        let trials = outcomes.len();
        let successes = outcomes.iter().filter(|&&x| x).count();
        let (lo95, hi95) = wilson_interval(successes, trials);
        ExperimentResult {
            successes,
            trials,
            rate: successes as f64 / trials as f64,
            lo95,
            hi95,
            seconds,
            outcomes,
        }
    }

    /// Half the width of the 95% Wilson interval.
    pub fn half_width(&self) -> f64 {
        (self.hi95 - self.lo95) / 2.0
    }

    /// Equal up to wall time.
    pub fn same_outcomes(&self, other: &ExperimentResult) -> bool {
        self.outcomes == other.outcomes
    }
}

/// 95% Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    assert!(trials > 0 && successes <= trials);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0).min(p), (center + half).min(1.0).max(p))
}

fn run_indexed<T, F>(trials: usize, jobs: usize, f: F) -> Result<Vec<T>, ExperimentError>
where
    T: Send,
    F: Fn(u64) -> Result<T, ExperimentError> + Sync + Send,
{
    if jobs <= 1 {
        return (0..trials as u64).map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| ExperimentError::BadConfig(format!("thread pool: {e}")))?;
    pool.install(|| (0..trials as u64).into_par_iter().map(&f).collect())
}

/// Position of the true root in the estimator's ranking, truncated at
/// `k_max` (`None` when it falls outside the first `k_max`).
fn trial_rank(
    model: ModelSpec,
    estimator: Estimator,
    n: usize,
    k_max: usize,
    seed: u64,
    trial: u64,
) -> Result<Option<usize>, ExperimentError> {
    let mut rng = RngStream::for_trial(seed, trial);
    let tree = model.sample(n, &mut rng)?;
    let (shape, root) = forget_labels(&tree, &mut rng);
    let scores = estimator.scores(&shape);
    let set = select_smallest(&shape, &scores, k_max);
    Ok(set.vertices.iter().position(|&v| v == root))
}

/// Runs `config.trials` independent trials on `jobs` workers.
pub fn run_trials(config: &ExperimentConfig, jobs: usize) -> Result<ExperimentResult, ExperimentError> {
    Ok(run_trials_for_ks(config, &[config.k], jobs)?.remove(0))
}

/// Runs one batch of trials and scores it for several set sizes at once.
/// Every `k` sees the same trees, so success is monotone in `k`.
pub fn run_trials_for_ks(
    config: &ExperimentConfig,
    ks: &[usize],
    jobs: usize,
) -> Result<Vec<ExperimentResult>, ExperimentError> {
    config.validate()?;
    if ks.is_empty() || ks.contains(&0) {
        return Err(ExperimentError::BadConfig("k values must be positive".into()));
    }
    let k_max = *ks.iter().max().unwrap();
    let start = Instant::now();
    let ranks = run_indexed(config.trials, jobs, |t| {
        trial_rank(config.model, config.estimator, config.n, k_max, config.seed, t)
    })?;
    let seconds = start.elapsed().as_secs_f64();
    Ok(ks
        .iter()
        .map(|&k| {
            let outcomes = ranks.iter().map(|r| r.is_some_and(|r| r < k)).collect();
            ExperimentResult::from_outcomes(outcomes, seconds)
        })
        .collect())
}

/// Frequency with which vertex 1 is a leaf of the sampled growth tree.
pub fn root_leaf_frequency(
    model: ModelSpec,
    n: usize,
    trials: usize,
    seed: u64,
    jobs: usize,
) -> Result<ExperimentResult, ExperimentError> {
    if n < 3 {
        return Err(ExperimentError::BadConfig("n must be at least 3".into()));
    }
    if trials == 0 {
        return Err(ExperimentError::BadConfig("trials must be at least 1".into()));
    }
    let start = Instant::now();
    let outcomes = run_indexed(trials, jobs, |t| {
        let tree = model.sample(n, &mut RngStream::for_trial(seed, t))?;
        Ok(tree.parents().filter(|&p| p == 1).count() == 1)
    })?;
    Ok(ExperimentResult::from_outcomes(outcomes, start.elapsed().as_secs_f64()))
}

/// A cartesian grid of experiment cells.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub models: Vec<ModelSpec>,
    pub estimators: Vec<Estimator>,
    pub ns: Vec<usize>,
    pub ks: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub allow_large: bool,
}

impl SweepGrid {
    /// Parses `key = value` lines; list values are comma separated.
    ///
    /// ```text
    /// model = ua, pa
    /// estimator = psi, phi
    /// n = 1000, 10000
    /// k = 1, 2, 4, 8
    /// trials = 200
    /// seed = 7
    /// ```
    ///
    /// `model`, `estimator`, `n` and `k` are required; `trials` defaults to
    /// 100, `seed` to 1 and `allow_large` to false.
    pub fn parse(text: &str) -> Result<SweepGrid, ExperimentError> {
        let mut grid = SweepGrid {
            models: Vec::new(),
            estimators: Vec::new(),
            ns: Vec::new(),
            ks: Vec::new(),
            trials: 100,
            seed: 1,
            allow_large: false,
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let err = |msg: String| ExperimentError::Parse { line, msg };
            let (key, value) = l
                .split_once('=')
                .ok_or_else(|| err("expected key = value".into()))?;
            let items: Vec<&str> = value.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            if items.is_empty() {
                return Err(err(format!("no value for {}", key.trim())));
            }
            let single = || -> Result<&str, ExperimentError> {
                match items.as_slice() {
                    [one] => Ok(one),
                    _ => Err(err(format!("{} takes a single value", key.trim()))),
                }
            };
            let num = |s: &str| s.parse::<usize>().map_err(|_| err(format!("bad integer {s:?}")));
            match key.trim() {
                "model" => {
                    grid.models = items
                        .iter()
                        .map(|s| s.parse().map_err(|e: GeneratorError| err(e.to_string())))
                        .collect::<Result<_, _>>()?
                }
                "estimator" => {
                    grid.estimators = items
                        .iter()
                        .map(|s| s.parse().map_err(|e: crate::estimators::EstimatorError| err(e.to_string())))
                        .collect::<Result<_, _>>()?
                }
                "n" => grid.ns = items.iter().map(|s| num(s)).collect::<Result<_, _>>()?,
                "k" => grid.ks = items.iter().map(|s| num(s)).collect::<Result<_, _>>()?,
                "trials" => grid.trials = num(single()?)?,
                "seed" => {
                    let s = single()?;
                    grid.seed = s.parse().map_err(|_| err(format!("bad seed {s:?}")))?
                }
                "allow_large" => {
                    let s = single()?;
                    grid.allow_large = s.parse().map_err(|_| err(format!("bad boolean {s:?}")))?
                }
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        for (name, empty) in [
            ("model", grid.models.is_empty()),
            ("estimator", grid.estimators.is_empty()),
            ("n", grid.ns.is_empty()),
            ("k", grid.ks.is_empty()),
        ] {
            if empty {
                return Err(ExperimentError::Parse {
                    line: 0,
                    msg: format!("missing required key {name}"),
                });
            }
        }
        Ok(grid)
    }
}

/// One row of a sweep table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub config: ExperimentConfig,
    pub result: ExperimentResult,
}

/// Runs every `(model, estimator, n)` cell once and scores it for every `k`.
/// Rows come out in model, estimator, n, k order.
pub fn sweep(grid: &SweepGrid, jobs: usize) -> Result<Vec<SweepRow>, ExperimentError> {
    let mut rows = Vec::new();
    for &model in &grid.models {
        for &estimator in &grid.estimators {
            for &n in &grid.ns {
                let mut config = ExperimentConfig::new(model, estimator, n, grid.ks[0], grid.trials, grid.seed);
                config.allow_large = grid.allow_large;
                let results = run_trials_for_ks(&config, &grid.ks, jobs)?;
                for (&k, result) in grid.ks.iter().zip(results) {
                    rows.push(SweepRow {
                        config: ExperimentConfig { k, ..config.clone() },
                        result,
                    });
                }
            }
        }
    }
    Ok(rows)
}

pub const CSV_HEADER: &str = "model,estimator,n,k,trials,successes,rate,lo95,hi95,seconds";

/// Writes the header and one line per row.
pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        let (c, r) = (&row.config, &row.result);
        writeln!(
            out,
            "{},{},{},{},{},{},{:.6},{:.6},{:.6},{:.3}",
            c.model, c.estimator, c.n, c.k, r.trials, r.successes, r.rate, r.lo95, r.hi95, r.seconds
        )?;
    }
    Ok(())
}
