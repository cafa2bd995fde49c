use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::primes::{self, PrimeTable};
use crate::summation::CompensatedComplexSum;
use crate::zeros::{s_bound, ZeroTable};

use super::zeta_logderiv;

/// Selberg's four-term expression `ζ′/ζ(s) = A_u + B_u + C_u + D_u` at one point.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SelbergDecomposition {
    #[serde(serialize_with = "ser_complex")]
    pub a_u: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub b_u: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub c_u: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub d_u: Complex64,
    /// Ordinates with |γ| up to this height enter `b_u`.
    pub b_u_truncation_height: f64,
    /// Bound on the omitted part of the zero sum.
    pub b_u_tail_bound: f64,
    #[serde(serialize_with = "ser_complex")]
    pub reference_logderiv: Complex64,
    /// |A + B + C + D - ζ′/ζ(s)|.
    pub defect: f64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

use serde::Serialize as _;

impl SelbergDecomposition {
    pub fn total(&self) -> Complex64 {
        self.a_u + self.b_u + self.c_u + self.d_u
    }
}

/// Bound on `Σ_{|γ| > h} 1/(|γ| - a)^2` over zeros above height `h > a`,
/// integrating against dN with N from the Riemann–von Mangoldt formula
/// and the S(T) bound.
fn zero_tail_sum(h: f64, a: f64) -> f64 {
    let d = h - a;
    let smooth = if a > 0.0 {
        ((h / (2.0 * PI)).ln() / d + (h / d).ln() / a) / (2.0 * PI)
    } else {
        ((h / (2.0 * PI)).ln() + 1.0) / (2.0 * PI * h)
    };
    // the fluctuation S contributes at most 2 max|S| / d^2 after parts
    smooth + 3.0 * s_bound(h) / (d * d)
}

/// Selberg decomposition with primes sieved internally up to u².
pub fn selberg_decomposition(s: impl Into<Complex64>, u: f64, zeros: &ZeroTable) -> Result<SelbergDecomposition> {
    check_u(u)?;
    let limit = (u * u).floor().max(2.0) as u64;
    let table = primes::sieve(limit)?;
    selberg_decomposition_with(s, u, zeros, &table)
}

fn check_u(u: f64) -> Result<()> {
    if !(u > 1.0) || !u.is_finite() {
        return Err(Error::Domain(format!("smoothing height u must exceed 1, got {u}")));
    }
    Ok(())
}

/// Selberg decomposition using a caller-supplied prime table.
pub fn selberg_decomposition_with(
    s: impl Into<Complex64>,
    u: f64,
    zeros: &ZeroTable,
    table: &PrimeTable,
) -> Result<SelbergDecomposition> {
    let s = s.into();
    check_u(u)?;
    let required = 2.0 * s.im.abs();
    if zeros.lower() > 0.0 || zeros.height() < required {
        return Err(Error::Coverage { required, lower: zeros.lower(), height: zeros.height() });
    }
    let reference = zeta_logderiv(s)?;
    let log_u = u.ln();
    let one = Complex64::new(1.0, 0.0);
    let u_pow = |w: Complex64| (w * log_u).exp();

    // A_u: smoothed Dirichlet series
    let x = (u * u).floor() as u64;
    let mut a = CompensatedComplexSum::new();
    for pp in table.prime_powers_up_to(x)? {
        let w = primes::taper(pp.n, u) * pp.log_p();
        if w != 0.0 {
            a.add(-(-s * (pp.n as f64).ln()).exp() * w);
        }
    }

    // B_u: zero sum over ρ = 1/2 ± iγ
    let mut b = CompensatedComplexSum::new();
    for &g in zeros.ordinates() {
        for rho in [Complex64::new(0.5, g), Complex64::new(0.5, -g)] {
            let w = rho - s;
            b.add((u_pow(w) - u_pow(2.0 * w)) / (w * w));
        }
    }
    let b_u = b.value() / log_u;
    let h = zeros.height();
    let numerator = u.powf(0.5 - s.re) + u.powf(1.0 - 2.0 * s.re);
    let tail = 2.0 * numerator / log_u * zero_tail_sum(h, s.im.abs());

    // C_u: trivial zeros at -2n
    let mut c = CompensatedComplexSum::new();
    let mut n = 1u32;
    loop {
        let w = s + 2.0 * n as f64;
        let term = (u_pow(-w) - u_pow(-2.0 * w)) / (w * w);
        c.add(term);
        if term.norm() < 1e-16 * c.value().norm().max(1e-300) || n > 100_000 {
            break;
        }
        n += 1;
    }
    let c_u = c.value() / log_u;

    // D_u: pole at 1
    let w = one - s;
    let d_u = (u_pow(2.0 * w) - u_pow(w)) / (w * w) / log_u;

    let a_u = a.value();
    let defect = (a_u + b_u + c_u + d_u - reference).norm();
    Ok(SelbergDecomposition {
        a_u,
        b_u,
        c_u,
        d_u,
        b_u_truncation_height: h,
        b_u_tail_bound: tail,
        reference_logderiv: reference,
        defect,
    })
}
