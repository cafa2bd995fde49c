//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.
//!
//! Zero tables are cached in `$MESOSZETA_DATA` when set, else under the
//! cargo target directory, so only the first run pays for them.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use mesoszeta::experiment::{
    run_clt, run_covariance, run_explicit_check, ConfigDocument, ExperimentConfig, LambdaRule, Manifest, Normalize,
    Side, Tables, DEFAULT_SEED,
};
use mesoszeta::linstat::{diagonal_report, mv_check, prime_power_share};
use mesoszeta::primes::sieve;
use mesoszeta::testfns::{h_half_inner, h_half_logkernel, hs_reconstruct, ibp_identity, parse};
use mesoszeta::zeros::{cached_zeros, count_zeros, find_zeros, main_terms, ZeroTable, DATA_DIR_VAR};
use mesoszeta::zeta::{selberg_decomposition_with, ComplexPoint};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

type Outcome = Result<(bool, String), mesoszeta::Error>;
type Check = fn() -> Outcome;

fn data_dir() -> PathBuf {
    std::env::var_os(DATA_DIR_VAR)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_TARGET_TMPDIR")).join("zeros"))
}

fn zeros_to(height: f64) -> ZeroTable {
    let dir = data_dir();
    std::fs::create_dir_all(&dir).expect("create zero cache directory");
    cached_zeros(&dir, height).expect("zero table")
}

fn within(limit: Duration, elapsed: Duration) -> (bool, String) {
    (elapsed <= limit, format!("{:.1}s of {}s", elapsed.as_secs_f64(), limit.as_secs()))
}

fn oracle_zeros() -> Vec<f64> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/first_100_zeros.txt");
    std::fs::read_to_string(path)
        .expect("oracle zero file")
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.trim().parse().expect("oracle ordinate"))
        .collect()
}

fn zeros() -> Outcome {
    let start = Instant::now();
    let oracle = oracle_zeros();
    let table = find_zeros(10.0, 237.0, 1e-9)?;
    let got = table.ordinates();
    let worst = got.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let (n100, n1000) = (count_zeros(100.0)?, count_zeros(1000.0)?);
    let (fast, time) = within(Duration::from_secs(60), start.elapsed());
    let ok = got.len() == 100 && oracle.len() == 100 && worst <= 1e-8 && n100 == 29 && n1000 == 649 && fast;
    Ok((ok, format!("{} zeros, max error {worst:.1e}, N(100) = {n100}, N(1000) = {n1000}, {time}", got.len())))
}

fn zero_count() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for t in [1e2, 1e3, 1e4] {
        let dev = (count_zeros(t)? as f64 - main_terms(t)).abs();
        ok &= dev <= 3.0 * t.ln();
        parts.push(format!("T = {t:e}: {dev:.3} vs {:.2}", 3.0 * t.ln()));
    }
    Ok((ok, parts.join("; ")))
}

fn selberg() -> Outcome {
    let zeros = zeros_to(2100.0);
    let start = Instant::now();
    let table = sieve(10_000)?;
    let grid = [
        (0.6, 20.0),
        (0.8, 47.5),
        (1.0, 101.3),
        (1.2, 250.0),
        (1.5, 500.0),
        (2.0, 1000.0),
        (0.7, 777.7),
        (0.9, 321.0),
        (3.0, 64.0),
        (1.1, 14.5),
    ];
    let mut ok = true;
    let mut worst = f64::NEG_INFINITY;
    for u in [10.0, 100.0] {
        for &(sigma, tau) in &grid {
            let d = selberg_decomposition_with(ComplexPoint::new(sigma, tau), u, &zeros, &table)?;
            let slack = d.defect - d.b_u_tail_bound;
            worst = worst.max(slack);
            ok &= slack <= 1e-4;
        }
    }
    let (fast, time) = within(Duration::from_secs(60), start.elapsed());
    Ok((ok && fast, format!("max(defect - tail bound) = {worst:.2e} over 20 points, {time}")))
}

fn helffer_sjostrand() -> Outcome {
    let mut worst_hs = 0.0f64;
    let mut worst_ibp = 0.0f64;
    for name in ["gaussian:0,1", "tent:-1,1"] {
        let f = parse(name)?;
        for q in [-0.4, 0.0, 0.7] {
            worst_hs = worst_hs.max((hs_reconstruct(&f, q, 1e-6)? - f.eval(q)).abs());
        }
        for delta in [0.1, 0.5, 1.0] {
            worst_ibp = worst_ibp.max(ibp_identity(&f, delta)?.defect());
        }
    }
    Ok((
        worst_hs <= 1e-5 && worst_ibp <= 1e-5,
        format!("reconstruction error {worst_hs:.1e}, integration by parts defect {worst_ibp:.1e}"),
    ))
}

fn h_half_forms() -> Outcome {
    let smooth = ["gaussian:0,1", "gaussian:0.5,0.7", "c2_bump:0,1", "mollified_indicator:0,1,0.2"];
    let mut worst = 0.0f64;
    for (i, a) in smooth.iter().enumerate() {
        for b in &smooth[i..] {
            let (f, g) = (parse(a)?, parse(b)?);
            let fourier = h_half_inner(&f, &g)?.value().unwrap_or(f64::NAN);
            let kernel = h_half_logkernel(&f, &g)?.value().unwrap_or(f64::NAN);
            worst = worst.max((fourier - kernel).abs() / fourier.abs());
        }
    }
    let g = parse("gaussian:0,1")?;
    let gg = h_half_inner(&g, &g)?.value().unwrap_or(f64::NAN);
    let ok = worst <= 1e-5 && (gg - 2.0 / PI).abs() <= 1e-6;
    Ok((ok, format!("max relative gap {worst:.1e}, <g,g> - 2/pi = {:.1e}", gg - 2.0 / PI)))
}

fn explicit_formula() -> Outcome {
    let config = ExperimentConfig {
        t_list: vec![1e3, 1e4, 1e5],
        lambda_rule: LambdaRule::Fixed { lambda: 3.0 },
        n_samples: 200,
        seed: DEFAULT_SEED,
        functions: vec!["gaussian:0,1".into()],
        side: Side::Both,
        ..Default::default()
    };
    let zeros = zeros_to(config.zero_height()?);
    let start = Instant::now();
    let primes = sieve(config.sieve_limit())?;
    let out = run_explicit_check(&config, Tables { zeros: Some(&zeros), primes: Some(&primes) })?;
    let (fast, time) = within(Duration::from_secs(600), start.elapsed());
    let means: Vec<f64> = out.table.iter().map(|r| r.mean_abs_residual).collect();
    let monotone = means.windows(2).all(|w| w[1] < w[0]);
    let enveloped = out.table.iter().all(|r| r.mean_abs_residual <= 20.0 * r.envelope);
    let rows: Vec<String> = out
        .table
        .iter()
        .map(|r| {
            format!(
                "t = {:e}: mean |r| = {:.4} (mean r = {:.4}, envelope {:.3})",
                r.t, r.mean_abs_residual, r.mean_residual, r.envelope
            )
        })
        .collect();
    Ok((
        monotone && enveloped && fast,
        format!("monotone {monotone}, within 20x envelope {enveloped}; {}; {time}", rows.join("; ")),
    ))
}

fn diagonal() -> Outcome {
    let start = Instant::now();
    let table = sieve(1_000_000)?;
    let r = diagonal_report(&parse("gaussian:0,1")?, 1e6, 4.0, 1e3, &table)?;
    let (fast, time) = within(Duration::from_secs(120), start.elapsed());
    let ok = (0.9..=1.1).contains(&r.ratio) && fast;
    Ok((ok, format!("ratio {:.4} (remainder integral {:.4}), {time}", r.ratio, r.remainder_integral)))
}

fn prime_powers() -> Outcome {
    let table = sieve(1_000_000)?;
    let f = parse("gaussian:0,1")?;
    let low = prime_power_share(&f, 4.0, 1e2, &table)?.ratio;
    let high = prime_power_share(&f, 4.0, 1e3, &table)?.ratio;
    Ok((high <= 0.05 && low > high, format!("share {low:.4} at t = 1e4, {high:.4} at t = 1e6")))
}

fn prime_clt() -> Outcome {
    let config = ExperimentConfig {
        t_list: vec![1e6],
        lambda_rule: LambdaRule::Fixed { lambda: 4.0 },
        n_samples: 10_000,
        functions: vec!["gaussian:0,1".into()],
        side: Side::Prime,
        ..Default::default()
    };
    let start = Instant::now();
    let primes = sieve(config.sieve_limit())?;
    let out = run_clt(&config, Tables { zeros: None, primes: Some(&primes) })?;
    let (fast, time) = within(Duration::from_secs(300), start.elapsed());
    let s = &out.summaries[0].stats;
    let rel = s.variance / s.theoretical_variance - 1.0;
    let ok = rel.abs() <= 0.15
        && s.ks_distance <= 0.05
        && s.skewness.abs() <= 0.15
        && s.excess_kurtosis.abs() <= 0.3
        && fast;
    Ok((
        ok,
        format!(
            "variance {:.4} vs sigma_t^2 {:.4} ({:+.1}%), KS {:.4}, skewness {:.3}, excess kurtosis {:.3}, {time}",
            s.variance,
            s.theoretical_variance,
            100.0 * rel,
            s.ks_distance,
            s.skewness,
            s.excess_kurtosis
        ),
    ))
}

fn zero_clt() -> Outcome {
    let config = ExperimentConfig {
        t_list: vec![1e4],
        lambda_rule: LambdaRule::Fixed { lambda: 3.0 },
        n_samples: 2000,
        functions: vec!["gaussian:0,1".into()],
        side: Side::Zero,
        ..Default::default()
    };
    let pair = ExperimentConfig { functions: vec!["gaussian:0,1".into(), "tent:-1,1".into()], ..config.clone() };
    let zeros = zeros_to(pair.zero_height()?);
    let tables = Tables { zeros: Some(&zeros), primes: None };
    let clt = run_clt(&config, tables)?;
    let s = &clt.summaries[0].stats;
    let rel = s.variance / (2.0 / PI) - 1.0;
    let frob = run_covariance(&pair, tables)?.reports[0].frobenius_distance;
    Ok((
        rel.abs() <= 0.25 && frob <= 0.25,
        format!("variance {:.4} vs 2/pi ({:+.1}%), covariance distance {frob:.3}", s.variance, 100.0 * rel),
    ))
}

fn montgomery_vaughan() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(DEFAULT_SEED);
    let mut failures = 0;
    let mut tightest = 0.0f64;
    for _ in 0..1000 {
        let r = rng.gen_range(1..=20);
        let t = rng.gen_range(1.0..300.0);
        let mut freqs: Vec<f64> = Vec::with_capacity(r);
        while freqs.len() < r {
            let l = rng.gen_range(-4.0..4.0);
            if freqs.iter().all(|&m| (m - l).abs() > 1e-3) {
                freqs.push(l);
            }
        }
        let coeffs: Vec<Complex64> =
            (0..r).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let check = mv_check(&coeffs, &freqs, t)?;
        tightest = tightest.max(check.lhs / check.rhs);
        if !check.holds {
            failures += 1;
        }
    }
    Ok((failures == 0, format!("{failures} failures in 1000 instances, max lhs/rhs {tightest:.3}")))
}

fn determinism() -> Outcome {
    let config = ExperimentConfig {
        t_list: vec![1e4, 1e5],
        lambda_rule: LambdaRule::Fixed { lambda: 3.0 },
        n_samples: 500,
        functions: vec!["gaussian:0,1".into(), "tent:-1,1".into()],
        side: Side::Prime,
        normalize: Normalize::SigmaT,
        ..Default::default()
    };
    let dir = tempfile::tempdir().map_err(|e| mesoszeta::Error::io(Path::new("tempdir"), e))?;
    let primes = sieve(config.sieve_limit())?;
    let tables = Tables { zeros: None, primes: Some(&primes) };
    let first = dir.path().join("first");
    let outputs = run_clt(&config, tables)?.write(&first)?;
    let manifest = Manifest::new("clt", &config, None, outputs.clone()).write(&first)?;
    let again = run_clt(&config, tables)?.write(&dir.path().join("again"))?;
    let replayed = ConfigDocument::load(&manifest)?.resolve();
    let replay = run_clt(&replayed, tables)?.write(&dir.path().join("replay"))?;
    let read = |p: PathBuf| std::fs::read(&p).map_err(|e| mesoszeta::Error::io(p, e));
    let mut identical = replayed == config && outputs == again && outputs == replay;
    for name in &outputs {
        let x = read(first.join(name))?;
        identical &=
            x == read(dir.path().join("again").join(name))? && x == read(dir.path().join("replay").join(name))?;
    }
    Ok((
        identical && outputs.len() == 3,
        format!("{} files compared across a rerun and a manifest replay", outputs.len()),
    ))
}

fn main() {
    let criteria: [(&str, Check); 12] = [
        ("zeros against oracle", zeros),
        ("zero-count asymptotic", zero_count),
        ("Selberg decomposition", selberg),
        ("Helffer-Sjostrand reconstruction", helffer_sjostrand),
        ("H^1/2 two forms", h_half_forms),
        ("explicit formula residual", explicit_formula),
        ("prime diagonal", diagonal),
        ("prime-power share", prime_powers),
        ("prime-side CLT", prime_clt),
        ("zero-side CLT and covariance", zero_clt),
        ("Montgomery-Vaughan", montgomery_vaughan),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({:.1}s) {detail}",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
