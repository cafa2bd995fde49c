//! Riemann–Siegel theta and Z, Euler–Maclaurin evaluation of ζ and ζ′/ζ,
//! and Selberg's smoothed decomposition of ζ′/ζ.
#![allow(clippy::excessive_precision)]

mod selberg;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::summation::CompensatedComplexSum;

pub use selberg::{selberg_decomposition, selberg_decomposition_with, SelbergDecomposition};

include!("rs_coeffs.rs");

/// Smallest height accepted by [`theta`] and the Z evaluators.
pub const MIN_HEIGHT: f64 = 10.0;

/// Below this height Z is evaluated through Euler–Maclaurin, above it
/// through the Riemann–Siegel series.
pub const RS_CROSSOVER: f64 = 1000.0;

/// |ζ(s)| below which ζ′/ζ is refused.
pub const SINGULAR_MODULUS: f64 = 1e-12;

/// A point `s = sigma + i tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPoint {
    pub sigma: f64,
    pub tau: f64,
}

impl ComplexPoint {
    pub fn new(sigma: f64, tau: f64) -> Self {
        Self { sigma, tau }
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(p: ComplexPoint) -> Self {
        Complex64::new(p.sigma, p.tau)
    }
}

fn check_height(t: f64) -> Result<()> {
    if !(t >= MIN_HEIGHT) || !t.is_finite() {
        return Err(Error::Domain(format!(
            "height {t} is below {MIN_HEIGHT}, where the theta asymptotic series is not used"
        )));
    }
    Ok(())
}

/// Riemann–Siegel theta function by its asymptotic expansion.
///
/// The truncation error is below 1e-13 for `t >= 10`. For large `t` the
/// attainable absolute accuracy is limited by the magnitude of θ itself
/// (about `1e-16 * t log t`).
pub fn theta(t: f64) -> Result<f64> {
    check_height(t)?;
    Ok(theta_unchecked(t))
}

pub(crate) fn theta_unchecked(t: f64) -> f64 {
    let r = 1.0 / t;
    let r2 = r * r;
    let tail = r
        * (1.0 / 48.0
            + r2 * (7.0 / 5760.0 + r2 * (31.0 / 80640.0 + r2 * (127.0 / 430080.0 + r2 * (511.0 / 1216512.0)))));
    0.5 * t * ((t / TAU).ln() - 1.0) - PI / 8.0 + tail
}

/// Derivative of theta, accurate enough for Newton steps.
pub(crate) fn theta_prime(t: f64) -> f64 {
    0.5 * (t / TAU).ln() - 1.0 / (48.0 * t * t)
}

fn horner(c: &[f64], z: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * z + v)
}

/// Z(t) from the Riemann–Siegel formula with corrections C0..C3.
pub fn riemann_siegel_series(t: f64) -> Result<f64> {
    check_height(t)?;
    Ok(rs_series(t))
}

fn rs_series(t: f64) -> f64 {
    let a = (t / TAU).sqrt();
    let n = a.floor() as usize;
    let p = a - n as f64;
    let th = theta_unchecked(t);
    let mut sum = 0.0;
    let mut carry = 0.0;
    for k in 1..=n {
        let kf = k as f64;
        let term = (th - t * kf.ln()).cos() / kf.sqrt();
        // Neumaier
        let s = sum + term;
        carry += if sum.abs() >= term.abs() { (sum - s) + term } else { (term - s) + sum };
        sum = s;
    }
    let z = 1.0 - 2.0 * p;
    let ia = 1.0 / a;
    let rem = horner(&C0_COEFFS, z)
        + ia * (horner(&C1_COEFFS, z) + ia * (horner(&C2_COEFFS, z) + ia * horner(&C3_COEFFS, z)));
    let sign = if (n - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    2.0 * (sum + carry) + sign * a.powf(-0.5) * rem
}

/// Hardy's Z function, `Z(t) = e^{iθ(t)} ζ(1/2 + it)`, real for real `t`.
///
/// Uses Euler–Maclaurin below [`RS_CROSSOVER`] and the Riemann–Siegel
/// series above it.
pub fn riemann_siegel_z(t: f64) -> Result<f64> {
    check_height(t)?;
    Ok(z_unchecked(t))
}

pub(crate) fn z_unchecked(t: f64) -> f64 {
    if t < RS_CROSSOVER {
        let zeta = em_sum(Complex64::new(0.5, t), false).0;
        (Complex64::from_polar(1.0, theta_unchecked(t)) * zeta).re
    } else {
        rs_series(t)
    }
}

/// `B_{2k} / (2k)!` for k = 1..=6.
const BERNOULLI_OVER_FACTORIAL: [f64; 6] =
    [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0, 1.0 / 47900160.0, -691.0 / 1307674368000.0];

fn check_em_domain(s: Complex64) -> Result<()> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {s}")));
    }
    if s.re == 1.0 && s.im == 0.0 {
        return Err(Error::Pole);
    }
    if s.re <= 0.0 {
        return Err(Error::Domain(format!("Euler–Maclaurin evaluation needs Re(s) > 0, got {s}")));
    }
    Ok(())
}

/// ζ(s) and optionally ζ′(s) by Euler–Maclaurin summation.
fn em_sum(s: Complex64, with_derivative: bool) -> (Complex64, Complex64) {
    let cutoff = ((1.5 * s.norm()).ceil() as usize).max(16);
    let mut zeta = CompensatedComplexSum::new();
    let mut dzeta = CompensatedComplexSum::new();
    for k in 1..cutoff {
        let ln = (k as f64).ln();
        let term = (-s * ln).exp();
        zeta.add(term);
        if with_derivative {
            dzeta.add(-term * ln);
        }
    }
    let nf = cutoff as f64;
    let ln_n = nf.ln();
    let n_pow = (-s * ln_n).exp();
    let one = Complex64::new(1.0, 0.0);
    let sm1 = s - one;
    let head = n_pow * nf / sm1;
    zeta.add(head);
    zeta.add(n_pow * 0.5);
    if with_derivative {
        dzeta.add(-head * ln_n - n_pow * nf / (sm1 * sm1));
        dzeta.add(-n_pow * 0.5 * ln_n);
    }
    // rising product s(s+1)...(s+2k-2) and its derivative
    let mut prod = s;
    let mut dprod = one;
    let mut power = n_pow / nf;
    for (k, &c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if k > 0 {
            for j in [2 * k - 1, 2 * k] {
                let f = s + j as f64;
                dprod = dprod * f + prod;
                prod *= f;
            }
            power /= nf * nf;
        }
        zeta.add(prod * power * c);
        if with_derivative {
            dzeta.add((dprod - prod * ln_n) * power * c);
        }
    }
    (zeta.value(), dzeta.value())
}

/// ζ(s) for `Re(s) > 0`, `s != 1`.
///
/// Accurate to about 1e-13 for `|Im s| <= 1e4`; the cost grows linearly
/// with `|s|` and rounding in the phases slowly degrades accuracy beyond.
pub fn euler_maclaurin_zeta(s: impl Into<Complex64>) -> Result<Complex64> {
    let s = s.into();
    check_em_domain(s)?;
    Ok(em_sum(s, false).0)
}

/// ζ(s) and ζ′(s) together.
pub fn zeta_and_derivative(s: impl Into<Complex64>) -> Result<(Complex64, Complex64)> {
    let s = s.into();
    check_em_domain(s)?;
    Ok(em_sum(s, true))
}

/// ζ′(s)/ζ(s), refusing points where |ζ(s)| < [`SINGULAR_MODULUS`].
pub fn zeta_logderiv(s: impl Into<Complex64>) -> Result<Complex64> {
    let (z, dz) = zeta_and_derivative(s)?;
    let modulus = z.norm();
    if modulus < SINGULAR_MODULUS {
        return Err(Error::Singularity { modulus });
    }
    Ok(dz / z)
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath, 30 digits
    const ZETA_HALF: f64 = -1.4603545088095868;
    const GRAM_0: f64 = 17.845599540410860817;
    const GRAM_1: f64 = 23.170282701246309279;
    const THETA_10: f64 = -3.0670743962898952917;
    const Z_10: f64 = -1.5491945461810223891;
    const LOGDERIV_2: f64 = -0.56996099309453280640;

    #[test]
    fn theta_values() {
        assert!((theta(10.0).unwrap() - THETA_10).abs() < 1e-12);
        assert!(theta(GRAM_0).unwrap().abs() < 1e-10);
        assert!((theta(GRAM_1).unwrap() - PI).abs() < 1e-10);
        assert!(matches!(theta(9.99), Err(Error::Domain(_))));
    }

    #[test]
    fn theta_derivative_matches_leading_term() {
        let h = 1e-4;
        let d = (theta(1000.0 + h).unwrap() - theta(1000.0 - h).unwrap()) / (2.0 * h);
        assert!((d - 0.5 * (1000.0 / TAU).ln()).abs() < 1e-6);
    }

    #[test]
    fn zeta_closed_forms() {
        let z2 = euler_maclaurin_zeta(ComplexPoint::new(2.0, 0.0)).unwrap();
        assert!((z2.re - PI * PI / 6.0).abs() < 1e-12 && z2.im.abs() < 1e-15);
        let zh = euler_maclaurin_zeta(ComplexPoint::new(0.5, 0.0)).unwrap();
        assert!((zh.re - ZETA_HALF).abs() < 1e-10);
        let z4 = euler_maclaurin_zeta(Complex64::new(4.0, 0.0)).unwrap();
        assert!((z4.re - PI.powi(4) / 90.0).abs() < 1e-13);
    }

    #[test]
    fn zeta_domain_errors() {
        assert!(matches!(euler_maclaurin_zeta(Complex64::new(1.0, 0.0)), Err(Error::Pole)));
        assert!(matches!(euler_maclaurin_zeta(Complex64::new(0.0, 5.0)), Err(Error::Domain(_))));
        assert!(matches!(euler_maclaurin_zeta(Complex64::new(-1.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn first_zero_is_small() {
        let z = euler_maclaurin_zeta(Complex64::new(0.5, 14.1347251417)).unwrap();
        assert!(z.norm() < 1e-6);
    }

    #[test]
    fn z_at_ten() {
        assert!((riemann_siegel_z(10.0).unwrap() - Z_10).abs() < 1e-10);
    }

    #[test]
    fn z_modulus_matches_zeta() {
        for t in [30.0, 150.0, 999.0, 1000.0, 4321.5] {
            let z = riemann_siegel_z(t).unwrap();
            let zeta = euler_maclaurin_zeta(Complex64::new(0.5, t)).unwrap();
            assert!((z.abs() - zeta.norm()).abs() < 1e-6, "t = {t}");
        }
    }

    #[test]
    fn series_agrees_with_euler_maclaurin() {
        for t in [100.0, 250.0, 500.0, 2000.0] {
            let rs = riemann_siegel_series(t).unwrap();
            let em = (Complex64::from_polar(1.0, theta(t).unwrap())
                * euler_maclaurin_zeta(Complex64::new(0.5, t)).unwrap())
            .re;
            assert!((rs - em).abs() < 1e-6, "t = {t}: {rs} vs {em}");
        }
    }

    #[test]
    fn first_zero_bracket() {
        assert!(riemann_siegel_z(14.0).unwrap() * riemann_siegel_z(15.0).unwrap() < 0.0);
    }

    #[test]
    fn logderiv_values() {
        let v = zeta_logderiv(Complex64::new(2.0, 0.0)).unwrap();
        assert!((v.re - LOGDERIV_2).abs() < 1e-10);
        let eps = 1e-3;
        let near_pole = zeta_logderiv(Complex64::new(1.0 + eps, 0.0)).unwrap();
        assert!((near_pole.re * eps + 1.0).abs() < 0.01);
    }

    #[test]
    fn logderiv_refuses_zero() {
        let err = zeta_logderiv(Complex64::new(0.5, 14.134725141734693790)).unwrap_err();
        assert!(matches!(err, Error::Singularity { modulus } if modulus < 1e-12));
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let s = Complex64::new(0.7, 40.0);
        let (_, d) = zeta_and_derivative(s).unwrap();
        let h = 1e-5;
        let fd = (euler_maclaurin_zeta(s + h).unwrap() - euler_maclaurin_zeta(s - h).unwrap()) / (2.0 * h);
        assert!((d - fd).norm() < 1e-7 * d.norm().max(1.0));
    }
}
