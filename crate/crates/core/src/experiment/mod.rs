//! Monte Carlo experiments over ω ~ Uniform(1, 2): sample sets, moments,
//! normality distance and covariance against the H^{1/2} Gram matrix.
//!
//! Sample i draws its ω from ChaCha20 seeded with `seed_from_u64(seed)` on
//! stream i, so every draw is independent of thread count and order.
//! Samples are computed in parallel but collected in index order, and all
//! reductions run sequentially over that order.

mod config;
mod stats;

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use config::{ConfigDocument, ExperimentConfig, LambdaRule, Normalize, Side, DEFAULT_SEED};
pub use stats::{ks_statistic, normal_cdf, SummaryStats};

use crate::error::{Error, Result};
use crate::linstat::{PrimeSide, ZeroSide};
use crate::primes::PrimeTable;
use crate::summation::CompensatedSum;
use crate::testfns::{check_hypotheses, h_half_inner, norms, sigma_t_sq, HHalf, TestFunction};
use crate::zeros::ZeroTable;

/// Column names of every sample CSV, in order.
pub const CSV_HEADER: &str = "omega,t,lambda,u,zero_side,prime_full,prime_primes,prime_powers,residual,normalized";

/// Identity of the ω generator, recorded in manifests.
pub const GENERATOR: &str =
    "ChaCha20 (rand_chacha 0.3): seed_from_u64(seed), stream i for sample i, omega = 1 + U[0,1)";

/// ω for sample `index`.
pub fn draw_omega(seed: u64, index: u64) -> f64 {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    loop {
        // 1 + u rounds to 2 for u within 2⁻⁵³ of 1
        let w = 1.0 + rng.gen::<f64>();
        if w > 1.0 && w < 2.0 {
            return w;
        }
    }
}

pub fn omega_draws(seed: u64, n: usize) -> Vec<f64> {
    (0..n as u64).map(|i| draw_omega(seed, i)).collect()
}

/// Tables an experiment may draw on.
#[derive(Clone, Copy, Default)]
pub struct Tables<'a> {
    pub zeros: Option<&'a ZeroTable>,
    pub primes: Option<&'a PrimeTable>,
}

/// One CSV row. Sides that were not computed are NaN.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleRow {
    pub omega: f64,
    pub t: f64,
    pub lambda: f64,
    pub u: f64,
    pub zero_side: f64,
    pub prime_full: f64,
    pub prime_primes: f64,
    pub prime_powers: f64,
    pub residual: f64,
    /// The sampled statistic (zero side unless only the prime side was
    /// computed), divided by σ_t when normalizing.
    pub normalized: f64,
}

impl SampleRow {
    fn csv_line(&self) -> String {
        [
            self.omega,
            self.t,
            self.lambda,
            self.u,
            self.zero_side,
            self.prime_full,
            self.prime_primes,
            self.prime_powers,
            self.residual,
            self.normalized,
        ]
        .iter()
        .map(|x| format!("{x:.16e}"))
        .collect::<Vec<_>>()
        .join(",")
    }
}

/// Rows for one test function, across every t of the config.
#[derive(Debug, Clone, Serialize)]
pub struct SampleSet {
    pub function: String,
    pub rows: Vec<SampleRow>,
}

impl SampleSet {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        let io = |e| Error::io(path, e);
        writeln!(w, "{CSV_HEADER}").map_err(io)?;
        for r in &self.rows {
            writeln!(w, "{}", r.csv_line()).map_err(io)?;
        }
        w.flush().map_err(io)
    }

    /// The `normalized` column restricted to one t.
    pub fn statistic(&self, t: f64) -> Vec<f64> {
        self.rows.iter().filter(|r| r.t == t).map(|r| r.normalized).collect()
    }
}

/// Evaluates every requested side at fixed (f, t).
struct Evaluator<'a> {
    zero: Option<ZeroSide<'a>>,
    prime: Option<PrimeSide>,
    t: f64,
    lambda: f64,
    u: f64,
    divisor: f64,
}

impl<'a> Evaluator<'a> {
    fn new(f: &'a TestFunction, config: &ExperimentConfig, tables: Tables<'a>, t: f64) -> Result<Self> {
        let lambda = config.lambda_rule.at(t);
        let u = t.powf(config.alpha);
        let zero = if config.side.needs_zeros() {
            let zeros = require_zeros(config, tables)?;
            Some(ZeroSide::new(f, zeros, lambda)?)
        } else {
            None
        };
        let prime = if config.side.needs_primes() {
            let table = require_primes(config, tables)?;
            Some(PrimeSide::new(f, t, lambda, u, table)?)
        } else {
            None
        };
        let divisor = match config.normalize {
            Normalize::None => 1.0,
            Normalize::SigmaT => {
                let s = sigma_t_sq(f, lambda)?;
                if !(s > 0.0) {
                    return Err(Error::Domain(format!("σ_t vanishes for {f}; cannot normalize")));
                }
                s.sqrt()
            }
        };
        Ok(Self { zero, prime, t, lambda, u, divisor })
    }

    fn row(&self, omega: f64) -> Result<SampleRow> {
        let z = match &self.zero {
            Some(z) => z.eval(omega, self.t)?.value,
            None => f64::NAN,
        };
        let (full, primes, powers) = match &self.prime {
            Some(p) => {
                let v = p.eval(omega)?;
                (v.full, v.primes_only, v.powers_only)
            }
            None => (f64::NAN, f64::NAN, f64::NAN),
        };
        let stat = if self.zero.is_some() { z } else { full };
        Ok(SampleRow {
            omega,
            t: self.t,
            lambda: self.lambda,
            u: self.u,
            zero_side: z,
            prime_full: full,
            prime_primes: primes,
            prime_powers: powers,
            residual: z - full,
            normalized: stat / self.divisor,
        })
    }
}

fn require_zeros<'a>(config: &ExperimentConfig, tables: Tables<'a>) -> Result<&'a ZeroTable> {
    let required = config.zero_height()?;
    match tables.zeros {
        Some(z) if z.lower() <= 0.0 && z.height() >= required => Ok(z),
        Some(z) => Err(Error::Coverage { required, lower: z.lower(), height: z.height() }),
        None => Err(Error::Coverage { required, lower: 0.0, height: 0.0 }),
    }
}

fn require_primes<'a>(config: &ExperimentConfig, tables: Tables<'a>) -> Result<&'a PrimeTable> {
    let required = config.sieve_limit();
    match tables.primes {
        Some(p) if p.limit() >= required => Ok(p),
        other => Err(Error::SieveLimit { limit: other.map_or(0, |p| p.limit()), required }),
    }
}

/// Samples for every function and t, all sharing the same ω draws.
fn sample_sets(config: &ExperimentConfig, fs: &[TestFunction], tables: Tables<'_>) -> Result<Vec<SampleSet>> {
    let omegas = omega_draws(config.seed, config.n_samples);
    fs.iter()
        .zip(&config.functions)
        .map(|(f, name)| {
            let mut rows = Vec::with_capacity(omegas.len() * config.t_list.len());
            for &t in &config.t_list {
                let ev = Evaluator::new(f, config, tables, t)?;
                rows.extend(omegas.par_iter().map(|&w| ev.row(w)).collect::<Result<Vec<_>>>()?);
            }
            Ok(SampleSet { function: name.clone(), rows })
        })
        .collect()
}

fn file_name(stem: &str, index: usize, count: usize) -> String {
    if count == 1 {
        format!("{stem}.csv")
    } else {
        format!("{stem}_{index}.csv")
    }
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Config(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_sample_sets(sets: &[SampleSet], dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        let name = file_name("samples", i, sets.len());
        s.write_csv(&dir.join(&name))?;
        out.push(PathBuf::from(name));
    }
    Ok(out)
}

/// Summary of one (function, t) cell.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryRecord {
    pub function: String,
    pub file: String,
    pub t: f64,
    pub lambda: f64,
    pub u: f64,
    pub side: Side,
    pub normalize: Normalize,
    pub sigma_t_sq: f64,
    pub h_half: HHalf,
    #[serde(flatten)]
    pub stats: SummaryStats,
}

#[derive(Debug, Clone)]
pub struct CltOutcome {
    pub samples: Vec<SampleSet>,
    pub summaries: Vec<SummaryRecord>,
}

impl CltOutcome {
    /// Sample CSVs and `summary.json`; returns the file names written.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        ensure_dir(dir)?;
        let mut out = write_sample_sets(&self.samples, dir)?;
        write_json(&dir.join("summary.json"), &self.summaries)?;
        out.push(PathBuf::from("summary.json"));
        Ok(out)
    }

    pub fn summary(&self, function: &str, t: f64) -> Option<&SummaryStats> {
        self.summaries.iter().find(|s| s.function == function && s.t == t).map(|s| &s.stats)
    }
}

/// Sample the statistic and compare its law with the centered Gaussian of
/// the theoretical variance: ‖f‖²_{H^{1/2}} for the raw zero side (σ_t²
/// when that norm diverges), σ_t² for the raw prime side, 1 after
/// normalizing by σ_t.
pub fn run_clt(config: &ExperimentConfig, tables: Tables<'_>) -> Result<CltOutcome> {
    config.validate()?;
    let fs = config.test_functions()?;
    let samples = sample_sets(config, &fs, tables)?;
    let mut summaries = Vec::new();
    for (i, (f, set)) in fs.iter().zip(&samples).enumerate() {
        let h_half = h_half_inner(f, f)?;
        for &t in &config.t_list {
            let lambda = config.lambda_rule.at(t);
            let s2 = sigma_t_sq(f, lambda)?;
            let theory = match (config.normalize, config.side, h_half) {
                (Normalize::SigmaT, _, _) => 1.0,
                (_, Side::Prime, _) => s2,
                (_, _, HHalf::Finite { value }) => value,
                _ => s2,
            };
            summaries.push(SummaryRecord {
                function: set.function.clone(),
                file: file_name("samples", i, fs.len()),
                t,
                lambda,
                u: t.powf(config.alpha),
                side: config.side,
                normalize: config.normalize,
                sigma_t_sq: s2,
                h_half,
                stats: SummaryStats::from_samples(&set.statistic(t), theory)?,
            });
        }
    }
    Ok(CltOutcome { samples, summaries })
}

/// Empirical against theoretical covariance at one t.
#[derive(Debug, Clone, Serialize)]
pub struct CovarianceReport {
    pub t: f64,
    pub lambda: f64,
    pub n: usize,
    pub functions: Vec<String>,
    pub empirical: Vec<Vec<f64>>,
    pub theoretical: Vec<Vec<f64>>,
    /// `‖empirical - theoretical‖_F / ‖theoretical‖_F`.
    pub frobenius_distance: f64,
}

#[derive(Debug, Clone)]
pub struct CovarianceOutcome {
    pub samples: Vec<SampleSet>,
    pub reports: Vec<CovarianceReport>,
}

impl CovarianceOutcome {
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        ensure_dir(dir)?;
        let mut out = write_sample_sets(&self.samples, dir)?;
        write_json(&dir.join("covariance.json"), &self.reports)?;
        out.push(PathBuf::from("covariance.json"));
        Ok(out)
    }
}

/// Unbiased sample covariance, summed in index order.
fn covariance(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    if a.len() < 2 {
        return 0.0;
    }
    let ma = a.iter().copied().collect::<CompensatedSum>().value() / n;
    let mb = b.iter().copied().collect::<CompensatedSum>().value() / n;
    a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).collect::<CompensatedSum>().value() / (n - 1.0)
}

fn frobenius(m: &[Vec<f64>]) -> f64 {
    m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

/// Covariance of the vector statistic over the config's functions against
/// the Gram matrix of ⟨f_h, f_l⟩_{H^{1/2}} (scaled by σ_t(f_h)σ_t(f_l)
/// when normalizing). Every function must meet the covariance hypotheses.
pub fn run_covariance(config: &ExperimentConfig, tables: Tables<'_>) -> Result<CovarianceOutcome> {
    config.validate()?;
    let fs = config.test_functions()?;
    for (f, name) in fs.iter().zip(&config.functions) {
        let report = check_hypotheses(f);
        if !report.covariance_admissible() {
            return Err(Error::Config(format!(
                "{name} does not meet the covariance theorem's hypotheses: {}",
                report.covariance_failures().join(", ")
            )));
        }
    }
    let k = fs.len();
    let mut gram = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let v = h_half_inner(&fs[i], &fs[j])?
                .value()
                .ok_or_else(|| Error::Config(format!("H^1/2 pairing of {} and {} diverges", fs[i], fs[j])))?;
            gram[i][j] = v;
            gram[j][i] = v;
        }
    }
    let samples = sample_sets(config, &fs, tables)?;
    let mut reports = Vec::new();
    for &t in &config.t_list {
        let lambda = config.lambda_rule.at(t);
        let scale: Vec<f64> = match config.normalize {
            Normalize::None => vec![1.0; k],
            Normalize::SigmaT => fs.iter().map(|f| sigma_t_sq(f, lambda).map(f64::sqrt)).collect::<Result<_>>()?,
        };
        let stats: Vec<Vec<f64>> = samples.iter().map(|s| s.statistic(t)).collect();
        let mut empirical = vec![vec![0.0; k]; k];
        let mut theoretical = vec![vec![0.0; k]; k];
        for i in 0..k {
            for j in i..k {
                let c = covariance(&stats[i], &stats[j]);
                empirical[i][j] = c;
                empirical[j][i] = c;
                let g = gram[i][j] / (scale[i] * scale[j]);
                theoretical[i][j] = g;
                theoretical[j][i] = g;
            }
        }
        let diff: Vec<Vec<f64>> =
            empirical.iter().zip(&theoretical).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect();
        reports.push(CovarianceReport {
            t,
            lambda,
            n: config.n_samples,
            functions: config.functions.clone(),
            frobenius_distance: frobenius(&diff) / frobenius(&theoretical),
            empirical,
            theoretical,
        });
    }
    Ok(CovarianceOutcome { samples, reports })
}

/// Residual statistics of the explicit formula at one (function, t).
#[derive(Debug, Clone, Serialize)]
pub struct ResidualRow {
    pub function: String,
    pub t: f64,
    pub lambda: f64,
    pub u: f64,
    pub samples: usize,
    pub mean_abs_residual: f64,
    pub max_abs_residual: f64,
    pub mean_residual: f64,
    /// `(λ/log t)` times the norm combination bounding the error term.
    pub envelope: f64,
    pub lambda_over_log_t: f64,
}

pub const RESIDUAL_HEADER: &str =
    "function,t,lambda,u,samples,mean_abs_residual,max_abs_residual,mean_residual,envelope,lambda_over_log_t";

#[derive(Debug, Clone)]
pub struct ExplicitOutcome {
    pub samples: Vec<SampleSet>,
    pub table: Vec<ResidualRow>,
}

impl ExplicitOutcome {
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        ensure_dir(dir)?;
        let mut out = write_sample_sets(&self.samples, dir)?;
        let path = dir.join("residuals.csv");
        let mut text = format!("{RESIDUAL_HEADER}\n");
        for r in &self.table {
            let nums = [
                r.t,
                r.lambda,
                r.u,
                r.mean_abs_residual,
                r.max_abs_residual,
                r.mean_residual,
                r.envelope,
                r.lambda_over_log_t,
            ]
            .map(|x| format!("{x:.16e}"));
            // function specs contain commas
            text.push_str(&format!(
                "\"{}\",{},{},{},{},{},{},{},{},{}\n",
                r.function, nums[0], nums[1], nums[2], r.samples, nums[3], nums[4], nums[5], nums[6], nums[7]
            ));
        }
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        out.push(PathBuf::from("residuals.csv"));
        Ok(out)
    }
}

/// Mean and largest |residual| of the explicit formula at each t, next to
/// the predicted envelope.
pub fn run_explicit_check(config: &ExperimentConfig, tables: Tables<'_>) -> Result<ExplicitOutcome> {
    if config.side != Side::Both {
        return Err(Error::Config("the explicit-formula check needs side = both".into()));
    }
    config.validate()?;
    let fs = config.test_functions()?;
    let samples = sample_sets(config, &fs, tables)?;
    let mut table = Vec::new();
    for (f, set) in fs.iter().zip(&samples) {
        let bundle = norms(f)?;
        for &t in &config.t_list {
            let rows: Vec<&SampleRow> = set.rows.iter().filter(|r| r.t == t).collect();
            let n = rows.len() as f64;
            let lambda = config.lambda_rule.at(t);
            table.push(ResidualRow {
                function: set.function.clone(),
                t,
                lambda,
                u: t.powf(config.alpha),
                samples: rows.len(),
                mean_abs_residual: rows.iter().map(|r| r.residual.abs()).collect::<CompensatedSum>().value() / n,
                max_abs_residual: rows.iter().map(|r| r.residual.abs()).fold(0.0, f64::max),
                mean_residual: rows.iter().map(|r| r.residual).collect::<CompensatedSum>().value() / n,
                envelope: bundle.envelope(t, lambda),
                lambda_over_log_t: lambda / t.ln(),
            });
        }
    }
    Ok(ExplicitOutcome { samples, table })
}

/// Resolved configuration plus provenance, written beside the outputs. It
/// parses back as a [`ConfigDocument`], so `--config manifest.json`
/// repeats the run.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    #[serde(flatten)]
    pub config: ExperimentConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeros_file: Option<PathBuf>,
    pub command: String,
    pub version: String,
    pub generator: String,
    pub outputs: Vec<PathBuf>,
}

impl Manifest {
    pub fn new(command: &str, config: &ExperimentConfig, zeros_file: Option<PathBuf>, outputs: Vec<PathBuf>) -> Self {
        Self {
            config: config.clone(),
            zeros_file,
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            generator: GENERATOR.to_string(),
            outputs,
        }
    }

    /// Write `manifest.json` into `dir` and return its path.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        ensure_dir(dir)?;
        let path = dir.join("manifest.json");
        write_json(&path, self)?;
        Ok(path)
    }
}
