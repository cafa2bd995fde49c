use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linstat::{MAX_T, MIN_T};
use crate::testfns::{self, TestFunction};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_100_531;

/// How λ_t depends on t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LambdaRule {
    Fixed {
        lambda: f64,
    },
    /// `λ_t = c (log t)^β`.
    Power {
        c: f64,
        beta: f64,
    },
}

impl LambdaRule {
    pub fn at(&self, t: f64) -> f64 {
        match *self {
            LambdaRule::Fixed { lambda } => lambda,
            LambdaRule::Power { c, beta } => c * t.ln().powf(beta),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            LambdaRule::Fixed { lambda } if !(lambda > 0.0) || !lambda.is_finite() => {
                Err(Error::Config(format!("fixed lambda must be positive, got {lambda}")))
            }
            LambdaRule::Power { c, beta } if !(c > 0.0) || !c.is_finite() || !(beta > 0.0 && beta < 1.0) => {
                Err(Error::Config(format!("power rule needs c > 0 and 0 < beta < 1, got c = {c}, beta = {beta}")))
            }
            _ => Ok(()),
        }
    }
}

impl Default for LambdaRule {
    fn default() -> Self {
        LambdaRule::Power { c: 1.0, beta: 0.7 }
    }
}

/// `fixed:4`, `power:1,0.7`, or a bare number for a fixed λ.
impl FromStr for LambdaRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("cannot parse lambda rule {s:?}; expected fixed:<λ> or power:<c>,<β>"));
        let num = |x: &str| x.trim().parse::<f64>().map_err(|_| bad());
        let rule = match s.split_once(':') {
            None => LambdaRule::Fixed { lambda: num(s)? },
            Some(("fixed", v)) => LambdaRule::Fixed { lambda: num(v)? },
            Some(("power", v)) => {
                let (c, beta) = v.split_once(',').ok_or_else(bad)?;
                LambdaRule::Power { c: num(c)?, beta: num(beta)? }
            }
            _ => return Err(bad()),
        };
        rule.validate()?;
        Ok(rule)
    }
}

impl fmt::Display for LambdaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaRule::Fixed { lambda } => write!(f, "fixed:{lambda}"),
            LambdaRule::Power { c, beta } => write!(f, "power:{c},{beta}"),
        }
    }
}

/// Which side of the explicit formula an experiment samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Zero,
    Prime,
    Both,
}

impl Side {
    pub fn needs_zeros(self) -> bool {
        self != Side::Prime
    }

    pub fn needs_primes(self) -> bool {
        self != Side::Zero
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(Side::Zero),
            "prime" => Ok(Side::Prime),
            "both" => Ok(Side::Both),
            _ => Err(Error::Config(format!("side must be zero, prime or both, got {s:?}"))),
        }
    }
}

/// Raw statistic, or divided by σ_t.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalize {
    None,
    SigmaT,
}

impl FromStr for Normalize {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Normalize::None),
            "sigma_t" => Ok(Normalize::SigmaT),
            _ => Err(Error::Config(format!("normalize must be none or sigma_t, got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub t_list: Vec<f64>,
    pub lambda_rule: LambdaRule,
    /// Smoothing height u = t^alpha.
    pub alpha: f64,
    pub n_samples: usize,
    pub seed: u64,
    /// Test functions in `name:params` syntax.
    pub functions: Vec<String>,
    pub side: Side,
    pub normalize: Normalize,
    /// Output directory.
    pub output: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            t_list: vec![1e4],
            lambda_rule: LambdaRule::default(),
            alpha: 0.5,
            n_samples: 1000,
            seed: DEFAULT_SEED,
            functions: vec!["gaussian".into()],
            side: Side::Both,
            normalize: Normalize::None,
            output: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::Config("n_samples must be at least 1".into()));
        }
        if self.t_list.is_empty() {
            return Err(Error::Config("t_list is empty".into()));
        }
        if self.functions.is_empty() {
            return Err(Error::Config("no test functions given".into()));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::Config(format!("alpha must lie in (0, 1], got {}", self.alpha)));
        }
        self.lambda_rule.validate()?;
        for &t in &self.t_list {
            if !(MIN_T..=MAX_T).contains(&t) {
                return Err(Error::Config(format!("t must lie in [{MIN_T}, {MAX_T:e}], got {t}")));
            }
            let lambda = self.lambda_rule.at(t);
            if !(lambda < t.ln()) {
                return Err(Error::Config(format!(
                    "lambda({t}) = {lambda} is not below log t = {:.4}; the rule {} leaves the mesoscopic regime",
                    t.ln(),
                    self.lambda_rule
                )));
            }
        }
        self.test_functions()?;
        Ok(())
    }

    pub fn test_functions(&self) -> Result<Vec<TestFunction>> {
        self.functions
            .iter()
            .map(|s| testfns::parse(s).map_err(|e| Error::Config(format!("function {s:?}: {e}"))))
            .collect()
    }

    pub fn t_max(&self) -> f64 {
        self.t_list.iter().copied().fold(0.0, f64::max)
    }

    /// Sieve bound u² needed by the prime side.
    pub fn sieve_limit(&self) -> u64 {
        self.t_max().powf(2.0 * self.alpha).floor() as u64
    }

    /// Zero ordinates needed by the zero side: 2·max t plus the widest
    /// window reach of any test function.
    pub fn zero_height(&self) -> Result<f64> {
        let fs = self.test_functions()?;
        let reach = fs
            .iter()
            .map(|f| {
                let lambda = self.t_list.iter().map(|&t| self.lambda_rule.at(t)).fold(f64::INFINITY, f64::min);
                f.support(crate::linstat::WINDOW_TOL).1.max(0.0) / lambda
            })
            .fold(0.0, f64::max);
        Ok(2.0 * self.t_max() + reach)
    }
}

/// A config file or manifest as read from disk: every field optional, so
/// it can sit under flags given on the command line. Manifests add the
/// keys after `output`, which are accepted and otherwise ignored.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub t_list: Option<Vec<f64>>,
    pub lambda_rule: Option<LambdaRule>,
    pub alpha: Option<f64>,
    pub n_samples: Option<usize>,
    pub seed: Option<u64>,
    pub functions: Option<Vec<String>>,
    pub side: Option<Side>,
    pub normalize: Option<Normalize>,
    pub output: Option<PathBuf>,
    pub zeros_file: Option<PathBuf>,
    pub command: Option<String>,
    pub version: Option<String>,
    pub generator: Option<String>,
    pub outputs: Option<Vec<PathBuf>>,
}

impl ConfigDocument {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Fill an [`ExperimentConfig`], taking defaults for missing fields.
    pub fn resolve(&self) -> ExperimentConfig {
        let d = ExperimentConfig::default();
        ExperimentConfig {
            t_list: self.t_list.clone().unwrap_or(d.t_list),
            lambda_rule: self.lambda_rule.unwrap_or(d.lambda_rule),
            alpha: self.alpha.unwrap_or(d.alpha),
            n_samples: self.n_samples.unwrap_or(d.n_samples),
            seed: self.seed.unwrap_or(d.seed),
            functions: self.functions.clone().unwrap_or(d.functions),
            side: self.side.unwrap_or(d.side),
            normalize: self.normalize.unwrap_or(d.normalize),
            output: self.output.clone().unwrap_or(d.output),
        }
    }
}
