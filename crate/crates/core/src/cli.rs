//! Command line front end. Each subcommand parses its flags, prints the
//! resolved configuration to stderr, calls into the library and formats the
//! result.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing check, 2 on
//! usage or input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::estimators::{select_smallest, Estimator};
use crate::experiments::{self, ExperimentConfig, SweepGrid, SweepRow};
use crate::generators::{ModelSpec, RngStream};
use crate::oracle::{self, Suite, SuiteOptions};
use crate::tree::parse_edge_list;

pub const DEFAULT_SEED: u64 = 1;
pub const JOBS_ENV: &str = "ROOTFINDER_JOBS";

#[derive(Debug, Parser)]
#[command(name = "rootfinder", version, about = "Find the first vertex of a randomly grown tree")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Ua,
    Pa,
    Alpha,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Psi,
    Phi,
    Zeta,
    Xi,
}

impl From<EstimatorArg> for Estimator {
    fn from(e: EstimatorArg) -> Self {
        match e {
            EstimatorArg::Psi => Estimator::Psi,
            EstimatorArg::Phi => Estimator::Phi,
            EstimatorArg::Zeta => Estimator::Zeta,
            EstimatorArg::Xi => Estimator::Xi,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScoreFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Counting,
    PlaneCounting,
    Posterior,
    Partitions,
    Gamma,
    ProductTail,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Counting => Suite::Counting,
            SuiteArg::PlaneCounting => Suite::PlaneCounting,
            SuiteArg::Posterior => Suite::Posterior,
            SuiteArg::Partitions => Suite::Partitions,
            SuiteArg::Gamma => Suite::Gamma,
            SuiteArg::ProductTail => Suite::ProductTail,
        }
    }
}

#[derive(Debug, clap::Args)]
struct ModelFlags {
    /// Attachment model.
    #[arg(long, value_enum)]
    model: ModelArg,
    /// Exponent for `--model alpha`.
    #[arg(long)]
    alpha: Option<f64>,
}

impl ModelFlags {
    fn resolve(&self) -> Result<ModelSpec, String> {
        match (self.model, self.alpha) {
            (ModelArg::Ua, None) => Ok(ModelSpec::UniformAttachment),
            (ModelArg::Pa, None) => Ok(ModelSpec::PreferentialAttachment),
            (ModelArg::Alpha, Some(a)) if a.is_finite() => Ok(ModelSpec::AlphaAttachment(a)),
            (ModelArg::Alpha, Some(a)) => Err(format!("--alpha must be finite, got {a}")),
            (ModelArg::Alpha, None) => Err("--model alpha requires --alpha".into()),
            (_, Some(_)) => Err("--alpha is only valid with --model alpha".into()),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a growth tree and write it in the parent-array format.
    Generate {
        #[command(flatten)]
        model: ModelFlags,
        #[arg(long)]
        n: usize,
        /// Integer seed, or `random` to draw one from the OS.
        #[arg(long, default_value_t = DEFAULT_SEED.to_string())]
        seed: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score every vertex of an edge-list tree and report the best K.
    Score {
        #[arg(long, value_enum)]
        estimator: EstimatorArg,
        #[arg(long)]
        k: usize,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: ScoreFormat,
    },
    /// Measure the success rate of one (model, estimator, n, K) cell.
    Experiment {
        #[command(flatten)]
        model: ModelFlags,
        #[arg(long, value_enum)]
        estimator: EstimatorArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED.to_string())]
        seed: String,
        /// Worker threads (falls back to ROOTFINDER_JOBS, then 1).
        #[arg(long)]
        jobs: Option<usize>,
        /// Allow zeta/xi above the default size cap.
        #[arg(long)]
        allow_large: bool,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a grid of experiments described by a key=value file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run exact or Monte Carlo self-checks.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED.to_string())]
        seed: String,
        /// Monte Carlo trials per grid point.
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
    },
    /// List every recursive (ua) or plane-oriented recursive (pa) tree.
    Enumerate {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        n: usize,
        /// Print only the number of trees.
        #[arg(long)]
        count_only: bool,
    },
}

enum Failure {
    Usage(String),
    ChecksFailed,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{rendered}")
            } else {
                write!(stdout, "{rendered}")
            };
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(Failure::ChecksFailed) => 1,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}

fn parse_seed(s: &str) -> Result<u64, String> {
    if s == "random" {
        Ok(rand::random())
    } else {
        s.parse().map_err(|_| format!("--seed expects an integer or `random`, got {s:?}"))
    }
}

fn resolve_jobs(flag: Option<usize>) -> Result<usize, String> {
    let jobs = match flag {
        Some(j) => j,
        None => match std::env::var(JOBS_ENV) {
            Ok(v) => v
                .parse()
                .map_err(|_| format!("{JOBS_ENV} expects a positive integer, got {v:?}"))?,
            Err(_) => 1,
        },
    };
    if jobs == 0 {
        return Err("--jobs must be at least 1".into());
    }
    Ok(jobs)
}

fn emit(out: &Option<PathBuf>, stdout: &mut dyn Write, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| format!("{}: {e}", path.display()))?,
        None => stdout.write_all(bytes)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct ScoreReport<'a> {
    estimator: &'a str,
    n: usize,
    k: usize,
    vertices: Vec<u64>,
    scores: Vec<f64>,
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Generate { model, n, seed, out } => {
            let model = model.resolve()?;
            let seed = parse_seed(&seed)?;
            writeln!(stderr, "# generate model={model} n={n} seed={seed}")?;
            let tree = model.sample(n, &mut RngStream::new(seed, 0))?;
            let mut buf = Vec::new();
            tree.write_to(&mut buf)?;
            emit(&out, stdout, &buf)
        }
        Command::Score {
            estimator,
            k,
            input,
            format,
        } => {
            let estimator = Estimator::from(estimator);
            if k == 0 {
                return Err("--k must be at least 1".into());
            }
            writeln!(stderr, "# score estimator={estimator} k={k} in={}", input.display())?;
            let text = fs::read_to_string(&input).map_err(|e| format!("{}: {e}", input.display()))?;
            let labeled = parse_edge_list(&text)?;
            let scores = estimator.scores(&labeled.shape);
            let set = select_smallest(&labeled.shape, &scores, k);
            let label = |v: usize| labeled.labels[v - 1];
            match format {
                ScoreFormat::Json => {
                    let report = ScoreReport {
                        estimator: estimator.name(),
                        n: labeled.shape.n(),
                        k,
                        vertices: set.vertices.iter().map(|&v| label(v)).collect(),
                        scores: set.vertices.iter().map(|&v| scores.get(v)).collect(),
                    };
                    serde_json::to_writer(&mut *stdout, &report)?;
                    writeln!(stdout)?;
                }
                ScoreFormat::Csv => {
                    writeln!(stdout, "vertex,score")?;
                    for &v in &set.vertices {
                        writeln!(stdout, "{},{}", label(v), scores.get(v))?;
                    }
                }
            }
            Ok(())
        }
        Command::Experiment {
            model,
            estimator,
            n,
            k,
            trials,
            seed,
            jobs,
            allow_large,
            out,
        } => {
            let model = model.resolve()?;
            let seed = parse_seed(&seed)?;
            let jobs = resolve_jobs(jobs)?;
            let mut config = ExperimentConfig::new(model, estimator.into(), n, k, trials, seed);
            config.allow_large = allow_large;
            writeln!(
                stderr,
                "# experiment model={model} estimator={} n={n} k={k} trials={trials} seed={seed} jobs={jobs} allow_large={allow_large}",
                config.estimator
            )?;
            let result = experiments::run_trials(&config, jobs)?;
            let mut buf = Vec::new();
            experiments::write_csv(&[SweepRow { config, result }], &mut buf)?;
            emit(&out, stdout, &buf)
        }
        Command::Sweep { config, jobs, out } => {
            let jobs = resolve_jobs(jobs)?;
            let text = fs::read_to_string(&config).map_err(|e| format!("{}: {e}", config.display()))?;
            let grid = SweepGrid::parse(&text)?;
            writeln!(
                stderr,
                "# sweep models={:?} estimators={:?} n={:?} k={:?} trials={} seed={} jobs={jobs}",
                grid.models.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                grid.estimators.iter().map(|e| e.name()).collect::<Vec<_>>(),
                grid.ns,
                grid.ks,
                grid.trials,
                grid.seed
            )?;
            let rows = experiments::sweep(&grid, jobs)?;
            let mut buf = Vec::new();
            experiments::write_csv(&rows, &mut buf)?;
            emit(&out, stdout, &buf)
        }
        Command::Verify {
            suite,
            n_max,
            seed,
            trials,
        } => {
            let suite = Suite::from(suite);
            let seed = parse_seed(&seed)?;
            writeln!(
                stderr,
                "# verify suite={} n_max={} seed={seed} trials={trials}",
                suite.name(),
                n_max.map_or("default".to_string(), |n| n.to_string())
            )?;
            let checks = oracle::run_suite(suite, SuiteOptions { n_max, seed, trials })?;
            for c in &checks {
                writeln!(stdout, "{c}")?;
            }
            if checks.iter().all(|c| c.passed) {
                Ok(())
            } else {
                Err(Failure::ChecksFailed)
            }
        }
        Command::Enumerate { model, n, count_only } => {
            let name = match model {
                ModelArg::Ua => "ua",
                ModelArg::Pa => "pa",
                ModelArg::Alpha => "alpha",
            };
            writeln!(stderr, "# enumerate model={name} n={n}")?;
            match model {
                ModelArg::Ua => {
                    let trees = oracle::enumerate_recursive(n)?;
                    if count_only {
                        writeln!(stdout, "{}", trees.count())?;
                    } else {
                        for t in trees {
                            let p: Vec<String> = t.parents().map(|p| p.to_string()).collect();
                            writeln!(stdout, "{}", p.join(" "))?;
                        }
                    }
                }
                ModelArg::Pa => {
                    let trees = oracle::enumerate_plane_recursive(n)?;
                    if count_only {
                        writeln!(stdout, "{}", trees.count())?;
                    } else {
                        for t in trees {
                            let p: Vec<String> = t.tree.parents().map(|p| p.to_string()).collect();
                            let orders: Vec<String> = t
                                .children
                                .iter()
                                .enumerate()
                                .filter(|(_, c)| !c.is_empty())
                                .map(|(v, c)| {
                                    let c: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                                    format!("{v}:{}", c.join(","))
                                })
                                .collect();
                            writeln!(stdout, "{} | {}", p.join(" "), orders.join(" "))?;
                        }
                    }
                }
                ModelArg::Alpha => return Err("enumerate supports --model ua or pa".into()),
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("rootfinder").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_capture(&["generate", "--model", "ua"]).0, 2);
        assert_eq!(run_capture(&["generate", "--model", "ua", "--n", "5", "--bogus"]).0, 2);
        assert_eq!(run_capture(&["generate", "--model", "alpha", "--n", "5"]).0, 2);
        assert_eq!(run_capture(&["generate", "--model", "ua", "--alpha", "1", "--n", "5"]).0, 2);
        assert_eq!(run_capture(&["generate", "--model", "ua", "--n", "1"]).0, 2);
        assert_eq!(run_capture(&["generate", "--model", "ua", "--n", "5", "--seed", "x"]).0, 2);
        assert_eq!(run_capture(&["enumerate", "--model", "ua", "--n", "12"]).0, 2);
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("generate"));
    }

    #[test]
    fn generate_prints_config_and_tree() {
        let (code, out, err) = run_capture(&["generate", "--model", "pa", "--n", "4", "--seed", "7"]);
        assert_eq!(code, 0);
        assert!(err.contains("seed=7"));
        assert_eq!(out.lines().next(), Some("4"));
        assert_eq!(out.lines().count(), 4);
    }

    #[test]
    fn enumerate_counts() {
        let (code, out, _) = run_capture(&["enumerate", "--model", "pa", "--n", "4", "--count-only"]);
        assert_eq!((code, out.trim()), (0, "15"));
        let (_, out, _) = run_capture(&["enumerate", "--model", "ua", "--n", "3"]);
        assert_eq!(out, "1 1\n1 2\n");
        let (_, out, _) = run_capture(&["enumerate", "--model", "pa", "--n", "3"]);
        assert_eq!(out.lines().count(), 3);
    }
}
