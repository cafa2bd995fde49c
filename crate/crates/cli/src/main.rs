use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use mesoszeta::experiment::{self, ConfigDocument, ExperimentConfig, LambdaRule, Manifest, Normalize, Side, Tables};
use mesoszeta::primes::{self, PrimeTable};
use mesoszeta::testfns::{self, check_hypotheses, h_half_inner, norms, sigma_t_sq, CATALOG};
use mesoszeta::zeros::{self, ZeroTable};
use mesoszeta::zeta::{selberg_decomposition, ComplexPoint};
use mesoszeta::{Error, Result};

/// Zero tables up to this height are computed on demand into the data
/// directory; taller ones must be supplied with --zeros-file.
const AUTO_ZERO_HEIGHT: f64 = 2.5e5;

#[derive(Parser, Debug)]
#[command(name = "mesoszeta", version, about = "Mesoscopic linear statistics of Riemann zeta zeros")]
struct Cli {
    /// Cap on worker threads
    #[arg(long, global = true, value_parser = parse_count)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute, verify or import zero tables
    #[command(subcommand)]
    Zeros(ZerosCommand),
    /// Inspect built-in test functions
    #[command(subcommand, name = "fn")]
    Function(FnCommand),
    /// Compare Selberg's decomposition of zeta'/zeta with a direct evaluation
    SelbergCheck(SelbergArgs),
    /// Residual of the explicit formula across t
    ExplicitCheck(ExperimentArgs),
    /// Sample a linear statistic and compare it with its Gaussian limit
    Clt(ExperimentArgs),
    /// Covariance of several statistics against the H^1/2 Gram matrix
    Cov(ExperimentArgs),
    /// sigma_t^2 and the H^1/2 norm of a test function
    Variance(VarianceArgs),
}

#[derive(Subcommand, Debug)]
enum ZerosCommand {
    /// Find all zero ordinates in [from, to]
    Compute {
        /// Lower end of the range
        #[arg(long, value_parser = parse_real)]
        from: f64,
        /// Upper end of the range
        #[arg(long, value_parser = parse_real)]
        to: f64,
        /// Absolute accuracy of each ordinate
        #[arg(long, value_parser = parse_real, default_value = "1e-9")]
        precision: f64,
        /// Output file
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a table's count against the certified zero count
    Verify {
        /// Zero table file
        #[arg(long)]
        table: PathBuf,
    },
    /// Ingest an external table, verify it and store it
    Import {
        /// Table to ingest, one ordinate per line
        #[arg(long = "zeros-file")]
        zeros_file: PathBuf,
        /// Declared coverage height (overrides the file)
        #[arg(long, value_parser = parse_real)]
        height: Option<f64>,
        /// Declared precision (overrides the file)
        #[arg(long, value_parser = parse_real)]
        precision: Option<f64>,
        /// Skip the certified count check
        #[arg(long)]
        no_verify: bool,
        /// Destination (default: the data directory)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum FnCommand {
    /// List the built-in test functions
    List,
    /// Smoothness, norms and hypothesis checks for one function
    Describe {
        /// Test function as name:params
        #[arg(long = "fn")]
        function: String,
        /// Also report sigma_t^2 at this lambda
        #[arg(long, value_parser = parse_real)]
        lambda: Option<f64>,
    },
}

#[derive(Args, Debug)]
struct SelbergArgs {
    /// Real part of s
    #[arg(long, value_parser = parse_real)]
    sigma: f64,
    /// Imaginary part of s
    #[arg(long, value_parser = parse_real)]
    tau: f64,
    /// Smoothing height
    #[arg(long, value_parser = parse_real, default_value = "10")]
    u: f64,
    /// Zero table to use instead of the cache
    #[arg(long = "zeros-file")]
    zeros_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    /// Heights, comma-separated or repeated
    #[arg(long = "t", value_parser = parse_real, value_delimiter = ',')]
    t: Vec<f64>,
    /// Fixed lambda (shorthand for --lambda-rule fixed:<value>)
    #[arg(long, value_parser = parse_real, conflicts_with = "lambda_rule")]
    lambda: Option<f64>,
    /// fixed:<lambda> or power:<c>,<beta> meaning lambda = c (log t)^beta
    #[arg(long)]
    lambda_rule: Option<LambdaRule>,
    /// Smoothing exponent, u = t^alpha [default: 0.5]
    #[arg(long, value_parser = parse_real)]
    alpha: Option<f64>,
    /// Number of omega draws [default: 1000]
    #[arg(long, value_parser = parse_count)]
    samples: Option<usize>,
    /// Random seed [default: 20100531]
    #[arg(long, value_parser = parse_seed)]
    seed: Option<u64>,
    /// Test function as name:params, repeated for several
    #[arg(long = "fn")]
    functions: Vec<String>,
    /// zero, prime or both
    #[arg(long)]
    side: Option<Side>,
    /// none or sigma_t
    #[arg(long)]
    normalize: Option<Normalize>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Zero table to use instead of the cache
    #[arg(long = "zeros-file")]
    zeros_file: Option<PathBuf>,
    /// JSON config or manifest; explicit flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VarianceArgs {
    /// Test function as name:params
    #[arg(long = "fn")]
    function: String,
    /// Scale lambda
    #[arg(long, value_parser = parse_real)]
    lambda: f64,
}

fn parse_real(s: &str) -> std::result::Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("not a number: {s:?}"))
}

/// Non-negative integers, also in scientific notation (`1e4`).
fn parse_count(s: &str) -> std::result::Result<usize, String> {
    let x = parse_real(s)?;
    if x >= 0.0 && x.fract() == 0.0 && x <= 2f64.powi(53) {
        Ok(x as usize)
    } else {
        Err(format!("not a non-negative integer: {s:?}"))
    }
}

/// 64-bit seeds, exact as integers, or in scientific notation below 2⁵³.
fn parse_seed(s: &str) -> std::result::Result<u64, String> {
    s.trim().parse::<u64>().or_else(|_| parse_count(s).map(|n| n as u64))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn resolve(args: &ExperimentArgs) -> Result<(ExperimentConfig, Option<PathBuf>)> {
    let doc = match &args.config {
        Some(p) => ConfigDocument::load(p)?,
        None => ConfigDocument::default(),
    };
    let mut config = doc.resolve();
    if !args.t.is_empty() {
        config.t_list = args.t.clone();
    }
    if let Some(l) = args.lambda {
        config.lambda_rule = LambdaRule::Fixed { lambda: l };
    }
    if let Some(r) = args.lambda_rule {
        config.lambda_rule = r;
    }
    if let Some(a) = args.alpha {
        config.alpha = a;
    }
    if let Some(n) = args.samples {
        config.n_samples = n;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if !args.functions.is_empty() {
        config.functions = args.functions.clone();
    }
    if let Some(s) = args.side {
        config.side = s;
    }
    if let Some(n) = args.normalize {
        config.normalize = n;
    }
    if let Some(o) = &args.out {
        config.output = o.clone();
    }
    config.validate()?;
    Ok((config, args.zeros_file.clone().or(doc.zeros_file)))
}

fn zero_table(zeros_file: Option<&Path>, height: f64) -> Result<ZeroTable> {
    let table = match zeros_file {
        Some(p) => zeros::load_zero_table(p, None, None)?,
        None if height <= AUTO_ZERO_HEIGHT => {
            let h = height.ceil();
            eprintln!("using zeros up to {h} from {}", zeros::data_dir().display());
            zeros::cached_zeros(&zeros::data_dir(), h)?
        }
        None => return Err(Error::Coverage { required: height, lower: 0.0, height: 0.0 }),
    };
    if table.lower() > 0.0 || table.height() < height {
        return Err(Error::Coverage { required: height, lower: table.lower(), height: table.height() });
    }
    Ok(table)
}

fn run_experiment(verb: &str, args: &ExperimentArgs) -> Result<()> {
    let (mut config, zeros_file) = resolve(args)?;
    if verb == "explicit-check" && args.side.is_none() {
        config.side = Side::Both;
    }
    let zeros =
        if config.side.needs_zeros() { Some(zero_table(zeros_file.as_deref(), config.zero_height()?)?) } else { None };
    let table: Option<PrimeTable> =
        if config.side.needs_primes() { Some(primes::sieve(config.sieve_limit().max(2))?) } else { None };
    let tables = Tables { zeros: zeros.as_ref(), primes: table.as_ref() };
    let dir = config.output.clone();
    let outputs = match verb {
        "clt" => {
            let out = experiment::run_clt(&config, tables)?;
            for s in &out.summaries {
                println!(
                    "{} t={} lambda={:.6}: mean={:.6} variance={:.6} theory={:.6} skew={:.4} kurt={:.4} ks={:.4}",
                    s.function,
                    s.t,
                    s.lambda,
                    s.stats.mean,
                    s.stats.variance,
                    s.stats.theoretical_variance,
                    s.stats.skewness,
                    s.stats.excess_kurtosis,
                    s.stats.ks_distance
                );
            }
            out.write(&dir)?
        }
        "cov" => {
            let out = experiment::run_covariance(&config, tables)?;
            for r in &out.reports {
                println!("t={} lambda={:.6}: frobenius distance {:.6}", r.t, r.lambda, r.frobenius_distance);
            }
            out.write(&dir)?
        }
        _ => {
            let out = experiment::run_explicit_check(&config, tables)?;
            for r in &out.table {
                println!(
                    "{} t={} lambda={:.6}: mean|residual|={:.6} max={:.6} envelope={:.6}",
                    r.function, r.t, r.lambda, r.mean_abs_residual, r.max_abs_residual, r.envelope
                );
            }
            out.write(&dir)?
        }
    };
    let manifest = Manifest::new(verb, &config, zeros_file, outputs).write(&dir)?;
    eprintln!("wrote {}", manifest.display());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("cannot size the thread pool: {e}")))?;
    }
    match cli.command {
        Command::Zeros(ZerosCommand::Compute { from, to, precision, out }) => {
            let table = zeros::find_zeros(from, to, precision)?;
            zeros::save_zero_table(&table, &out)?;
            println!("{} zeros on [{from}, {to}] written to {}", table.len(), out.display());
        }
        Command::Zeros(ZerosCommand::Verify { table }) => {
            let t = zeros::load_zero_table(&table, None, None)?;
            let n = zeros::verify_table(&t)?;
            println!("verified {n} zeros on ({}, {}]", t.lower(), t.height());
        }
        Command::Zeros(ZerosCommand::Import { zeros_file, height, precision, no_verify, out }) => {
            let t = zeros::load_zero_table(&zeros_file, height, precision)?;
            if !no_verify {
                zeros::verify_table(&t)?;
            }
            let dest = out.unwrap_or_else(|| {
                zeros::data_dir().join(zeros_file.file_name().unwrap_or_else(|| "zeros_import.txt".as_ref()))
            });
            if let Some(parent) = dest.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| Error::Io { path: parent.to_path_buf(), source: e })?;
            }
            zeros::save_zero_table(&t, &dest)?;
            println!("imported {} zeros on ({}, {}] to {}", t.len(), t.lower(), t.height(), dest.display());
        }
        Command::Function(FnCommand::List) => {
            for (name, about, defaults) in CATALOG {
                let d: Vec<String> = defaults.iter().map(|v| v.to_string()).collect();
                println!("{name:<20} {about} [default {}]", d.join(","));
            }
        }
        Command::Function(FnCommand::Describe { function, lambda }) => {
            let f = testfns::parse(&function)?;
            let (lo, hi) = f.support(1e-16);
            let mut v = json!({
                "function": f.to_string(),
                "smoothness": f.smoothness(),
                "closed_form_fourier": f.has_closed_form_fourier(),
                "support": [lo, hi],
                "integral": f.integral(),
                "norms": norms(&f)?,
                "h_half": h_half_inner(&f, &f)?,
                "hypotheses": check_hypotheses(&f),
            });
            if let Some(l) = lambda {
                v["sigma_t_sq"] = json!(sigma_t_sq(&f, l)?);
            }
            print_json(&v);
        }
        Command::SelbergCheck(a) => {
            let s = ComplexPoint::new(a.sigma, a.tau);
            let height = (2.0 * a.tau.abs()).max(100.0);
            let zeros = zero_table(a.zeros_file.as_deref(), height)?;
            let d = selberg_decomposition(s, a.u, &zeros)?;
            print_json(&json!({ "sigma": a.sigma, "tau": a.tau, "u": a.u, "decomposition": d }));
        }
        Command::ExplicitCheck(a) => run_experiment("explicit-check", &a)?,
        Command::Clt(a) => run_experiment("clt", &a)?,
        Command::Cov(a) => run_experiment("cov", &a)?,
        Command::Variance(a) => {
            let f = testfns::parse(&a.function)?;
            let s2 = sigma_t_sq(&f, a.lambda)?;
            let h = h_half_inner(&f, &f)?;
            println!("sigma_t^2 = {s2:.12}");
            match h.value() {
                Some(v) => println!("H^1/2 norm squared = {v:.12} (finite)"),
                None => println!("H^1/2 norm diverges: {h:?}"),
            }
        }
    }
    Ok(())
}

fn hint(e: &Error) -> Option<&'static str> {
    match e {
        Error::Coverage { .. } => Some(
            "compute a table with `mesoszeta zeros compute --from 10 --to <height> --out <file>` and pass --zeros-file",
        ),
        Error::SieveLimit { .. } => Some("lower --alpha or t; the sieve must reach u^2 = t^(2 alpha)"),
        _ => None,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(h) = hint(&e) {
                eprintln!("hint: {h}");
            }
            ExitCode::from(if e.is_resource() { 2 } else { 1 })
        }
    }
}
