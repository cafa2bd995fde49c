use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::PrimeSide;
use crate::error::{Error, Result};
use crate::primes::{self, PrimeTable};
use crate::quad::{panels, Integrator};
use crate::summation::CompensatedSum;
use crate::testfns::{sigma_t_sq, TestFunction};

/// Constant in the Montgomery–Vaughan mean-value inequality.
pub const MV_CONSTANT: f64 = 3.0 * PI;

fn check_table(table: &PrimeTable, u: f64) -> Result<u64> {
    if !(u > 1.0) || !u.is_finite() {
        return Err(Error::Domain(format!("smoothing height u must exceed 1, got {u}")));
    }
    let x = (u * u).floor() as u64;
    if table.limit() < x {
        return Err(Error::SieveLimit { limit: table.limit(), required: x });
    }
    Ok(x)
}

/// `|Λ_u(n)/(λ√n) f̂(log n/λ)|²` for each prime power n ≤ u², tagged by
/// whether n is prime.
fn diagonal_terms(f: &TestFunction, lambda: f64, u: f64, table: &PrimeTable) -> Result<Vec<(u64, bool, f64)>> {
    let x = check_table(table, u)?;
    let mut out = Vec::new();
    for pp in table.prime_powers_up_to(x)? {
        let w = primes::taper(pp.n, u) * pp.log_p();
        if w == 0.0 {
            continue;
        }
        let n = pp.n as f64;
        let b = w / (lambda * n.sqrt()) * f.fourier(n.ln() / lambda).norm();
        out.push((pp.n, pp.k == 1, b * b));
    }
    Ok(out)
}

fn xi_f_sq(f: &TestFunction, a: f64, b: f64) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let (lo, hi) = f.support(1e-8);
    let pts = panels(a, b, PI / (hi - lo).max(f.scale()));
    let integ = Integrator::new(1e-14, 1e-10).with_max_segments(pts.len() + 4000);
    Ok(integ.integrate_breaks(|x| x * f.fourier(x).norm_sqr(), &pts)?.value)
}

/// Σ_p |b_pt|² against ∫ ξ|f̂|² over [0, log t/(2λ)] and [log t/(2λ), log t/λ].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DiagonalReport {
    pub sum_bpt_sq: f64,
    pub main_integral: f64,
    pub remainder_integral: f64,
    /// `sum_bpt_sq / main_integral`.
    pub ratio: f64,
}

pub fn diagonal_report(f: &TestFunction, t: f64, lambda: f64, u: f64, table: &PrimeTable) -> Result<DiagonalReport> {
    if !(t > 1.0) || !(lambda > 0.0) {
        return Err(Error::Domain(format!("need t > 1 and lambda > 0, got t = {t}, lambda = {lambda}")));
    }
    let sum: CompensatedSum = diagonal_terms(f, lambda, u, table)?.into_iter().filter(|d| d.1).map(|d| d.2).collect();
    let mid = t.ln() / (2.0 * lambda);
    let main_integral = xi_f_sq(f, 0.0, mid)?;
    let remainder_integral = xi_f_sq(f, mid, 2.0 * mid)?;
    let sum_bpt_sq = sum.value();
    Ok(DiagonalReport { sum_bpt_sq, main_integral, remainder_integral, ratio: sum_bpt_sq / main_integral })
}

/// Share of the higher prime powers in the prime sum.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PowerShare {
    pub ratio: f64,
    pub primes: f64,
    pub powers: f64,
    /// Set when the prime part vanishes and the ratio is reported as 0.
    pub degenerate: bool,
}

impl PowerShare {
    fn new(primes: f64, powers: f64) -> Self {
        if primes == 0.0 {
            PowerShare { ratio: 0.0, primes, powers, degenerate: true }
        } else {
            PowerShare { ratio: powers / primes, primes, powers, degenerate: false }
        }
    }
}

/// Diagonal proxy Σ_{p^k, k≥2} |c_n|² / Σ_p |c_p|² with
/// `c_n = Λ_u(n)/(λ√n) f̂(log n/λ)`.
pub fn prime_power_share(f: &TestFunction, lambda: f64, u: f64, table: &PrimeTable) -> Result<PowerShare> {
    let terms = diagonal_terms(f, lambda, u, table)?;
    let primes: CompensatedSum = terms.iter().filter(|d| d.1).map(|d| d.2).collect();
    let powers: CompensatedSum = terms.iter().filter(|d| !d.1).map(|d| d.2).collect();
    Ok(PowerShare::new(primes.value(), powers.value()))
}

/// `E|powers_only|² / E|primes_only|²` over the given ω.
pub fn prime_power_share_sampled(side: &PrimeSide, omegas: &[f64]) -> Result<PowerShare> {
    let mut p = CompensatedSum::new();
    let mut q = CompensatedSum::new();
    for &w in omegas {
        let v = side.eval(w)?;
        p.add(v.primes_only * v.primes_only);
        q.add(v.powers_only * v.powers_only);
    }
    Ok(PowerShare::new(p.value(), q.value()))
}

/// `m_t = exp(log t / σ_t)`.
pub fn m_t(f: &TestFunction, t: f64, lambda: f64) -> Result<f64> {
    let s = sigma_t_sq(f, lambda)?;
    if s <= 0.0 {
        return Err(Error::Domain(format!("σ_t vanishes for {f}")));
    }
    Ok((t.ln() / s.sqrt()).exp())
}

/// `Σ_{m<p≤u²} |a_pt|² (1 + p/t)` with `a_pt = b_pt/σ_t`.
pub fn tail_condition(f: &TestFunction, t: f64, lambda: f64, u: f64, m: f64, table: &PrimeTable) -> Result<f64> {
    let s = sigma_t_sq(f, lambda)?;
    if s <= 0.0 {
        return Err(Error::Domain(format!("σ_t vanishes for {f}")));
    }
    let sum: CompensatedSum = diagonal_terms(f, lambda, u, table)?
        .into_iter()
        .filter(|&(n, prime, _)| prime && n as f64 > m)
        .map(|(n, _, b)| b / s * (1.0 + n as f64 / t))
        .collect();
    Ok(sum.value())
}

/// Mean square of a Dirichlet polynomial over [t, 2t] against the
/// Montgomery–Vaughan bound.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MvCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `lhs = (1/t) ∫_t^{2t} |Σ a_r e^{iλ_r s}|² ds` by quadrature and
/// `rhs = Σ |a_r|² (1 + c/(t δ_r))` with δ_r the distance from λ_r to the
/// nearest other frequency and c = 3π.
pub fn mv_check(coefficients: &[Complex64], frequencies: &[f64], t: f64) -> Result<MvCheck> {
    if coefficients.len() != frequencies.len() || coefficients.is_empty() {
        return Err(Error::Parameter("need equally many coefficients and frequencies, at least one".into()));
    }
    if !(t > 0.0) || !t.is_finite() || frequencies.iter().any(|l| !l.is_finite()) {
        return Err(Error::Parameter(format!("need finite frequencies and t > 0, got t = {t}")));
    }
    let mut sorted: Vec<f64> = frequencies.to_vec();
    sorted.sort_by(f64::total_cmp);
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Parameter(format!("duplicate frequency {}: δ_r = 0", w[0])));
    }
    let rhs: f64 = frequencies
        .iter()
        .zip(coefficients)
        .map(|(&l, a)| {
            let delta = frequencies.iter().filter(|&&m| m != l).map(|&m| (m - l).abs()).fold(f64::INFINITY, f64::min);
            a.norm_sqr() * (1.0 + MV_CONSTANT / (t * delta))
        })
        .sum();
    let spread = sorted[sorted.len() - 1] - sorted[0];
    let width = if spread > 0.0 { PI / spread } else { t };
    let pts = panels(t, 2.0 * t, width);
    let mass: f64 = coefficients.iter().map(|a| a.norm_sqr()).sum();
    let integ = Integrator::new(1e-13 * mass * t, 1e-11).with_max_segments(pts.len() + 4000);
    let integral = integ
        .integrate_breaks(
            |s| {
                coefficients
                    .iter()
                    .zip(frequencies)
                    .map(|(a, &l)| a * Complex64::from_polar(1.0, l * s))
                    .sum::<Complex64>()
                    .norm_sqr()
            },
            &pts,
        )?
        .value;
    let lhs = integral / t;
    // equality cases (a single term) must not fail on quadrature rounding
    Ok(MvCheck { lhs, rhs, holds: lhs <= rhs * (1.0 + 1e-9) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfns::parse;

    #[test]
    fn mv_closed_forms() {
        let one = mv_check(&[Complex64::new(0.6, -0.8)], &[2.5], 10.0).unwrap();
        assert!((one.lhs - 1.0).abs() < 1e-12 && one.holds);
        // |1 + e^{2πis}|² = 2 + 2cos 2πs integrates to exactly 2t over [t, 2t] for integer t
        let two = mv_check(&[Complex64::new(1.0, 0.0); 2], &[0.0, 2.0 * PI], 10.0).unwrap();
        assert!((two.lhs - 2.0).abs() < 1e-10 && two.holds);
        assert!(mv_check(&[Complex64::new(1.0, 0.0); 2], &[1.0, 1.0], 10.0).is_err());
    }

    #[test]
    fn tail_condition_edges() {
        let table = primes::sieve(10_000).unwrap();
        let f = parse("gaussian").unwrap();
        assert_eq!(tail_condition(&f, 1e4, 3.0, 100.0, 1e4, &table).unwrap(), 0.0);
        let a = tail_condition(&f, 1e4, 3.0, 100.0, 10.0, &table).unwrap();
        let b = tail_condition(&f, 1e4, 3.0, 100.0, 100.0, &table).unwrap();
        assert!(a >= b && b > 0.0);
    }

    #[test]
    fn degenerate_share() {
        let table = primes::sieve(10_000).unwrap();
        let zero = parse("gaussian").unwrap().scaled(0.0);
        let s = prime_power_share(&zero, 3.0, 100.0, &table).unwrap();
        assert!(s.degenerate && s.ratio == 0.0);
    }
}
