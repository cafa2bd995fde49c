//! The two sides of the approximate explicit formula: the zero-side linear
//! statistic `S_t(f) = Σ_γ f(λ(γ - ωt)) - (log t)/(2πλ) ∫f` and the smoothed
//! prime sum, plus the diagnostics used in the proofs of the limit theorems.
//!
//! The prime side is evaluated as
//!
//! `-(1/2λ) Σ_n Λ_u(n)/√n (f̂(log n/λ) n^{-iωt} + f̂(-log n/λ) n^{iωt})`,
//!
//! which is what the Weil explicit formula gives under the normalization
//! `f̂(ξ) = (1/π) ∫ f e^{-iξx}`. Phases are `e^{∓iωt log n}` in double
//! precision, so the phase error grows like `ωt log n` ulps (about 10⁻⁶ rad
//! at t = 10⁸); heights are capped at [`MAX_T`].

mod diagnostics;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::primes::{self, PrimeTable};
use crate::summation::{CompensatedComplexSum, CompensatedSum};
use crate::testfns::{norms, NormBundle, TestFunction};
use crate::zeros::{count_bound, ZeroTable};

pub use diagnostics::{
    diagonal_report, m_t, mv_check, prime_power_share, prime_power_share_sampled, tail_condition, DiagonalReport,
    MvCheck, PowerShare, MV_CONSTANT,
};

/// Largest height accepted by the prime side.
pub const MAX_T: f64 = 1e8;
/// Smallest height of a scale point.
pub const MIN_T: f64 = 100.0;
/// |f| below this outside the zero-side window.
pub const WINDOW_TOL: f64 = 1e-16;
/// Largest imaginary part tolerated in the combined prime sum.
pub const IMAG_TOL: f64 = 1e-10;

/// The point `(ω, t)` with its scaling λ_t and smoothing height u = t^α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalePoint {
    pub omega: f64,
    pub t: f64,
    pub lambda: f64,
    pub u: f64,
    pub alpha: f64,
}

impl ScalePoint {
    pub fn new(omega: f64, t: f64, lambda: f64, alpha: f64) -> Result<Self> {
        if !(omega > 1.0 && omega < 2.0) {
            return Err(Error::Domain(format!("omega must lie in (1, 2), got {omega}")));
        }
        if !(t >= MIN_T) || !t.is_finite() {
            return Err(Error::Domain(format!("t must be at least {MIN_T}, got {t}")));
        }
        if !(lambda > 0.0 && lambda < t.ln()) {
            return Err(Error::Domain(format!("lambda must lie in (0, log t) = (0, {:.4}), got {lambda}", t.ln())));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Domain(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        Ok(Self { omega, t, lambda, u: t.powf(alpha), alpha })
    }

    /// The same scale at a different ω.
    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(omega, self.t, self.lambda, self.alpha)
    }
}

/// Zero-side value with the bound on what the window left out.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ZeroSideValue {
    pub value: f64,
    pub truncation_bound: f64,
    pub zeros_used: usize,
}

/// Zero-side evaluator for one test function and scaling λ.
pub struct ZeroSide<'a> {
    f: &'a TestFunction,
    zeros: &'a ZeroTable,
    lambda: f64,
    integral: f64,
    window: (f64, f64),
}

impl<'a> ZeroSide<'a> {
    pub fn new(f: &'a TestFunction, zeros: &'a ZeroTable, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
        }
        let window = f.support(WINDOW_TOL);
        Ok(Self { f, zeros, lambda, integral: f.integral(), window })
    }

    /// Ordinate range the table must cover for heights up to `t_max`.
    pub fn required_height(&self, t_max: f64) -> f64 {
        t_max + self.window.1.max(0.0) / self.lambda
    }

    fn window(&self, omega: f64, t: f64) -> (f64, f64) {
        let c = omega * t;
        (c + self.window.0 / self.lambda, c + self.window.1 / self.lambda)
    }

    /// `Σ f(λ(±γ - ωt))` over whatever ordinates of the table fall in the
    /// window, with no coverage check and no centering.
    pub fn window_sum(&self, omega: f64, t: f64) -> (f64, usize) {
        let c = omega * t;
        let (lo, hi) = self.window(omega, t);
        let mut sum = CompensatedSum::new();
        let mut used = 0;
        for &g in self.zeros.range(lo, hi) {
            sum.add(self.f.eval(self.lambda * (g - c)));
            used += 1;
        }
        // mirrored ordinates -γ falling in the window
        if lo < 0.0 {
            for &g in self.zeros.range(-hi, -lo) {
                sum.add(self.f.eval(self.lambda * (-g - c)));
                used += 1;
            }
        }
        (sum.value(), used)
    }

    /// The centering term `(log t)/(2πλ) ∫f`.
    pub fn centering(&self, t: f64) -> f64 {
        t.ln() / (2.0 * PI * self.lambda) * self.integral
    }

    pub fn eval(&self, omega: f64, t: f64) -> Result<ZeroSideValue> {
        let (lo, hi) = self.window(omega, t);
        self.zeros.require(lo, hi)?;
        if lo < 0.0 {
            self.zeros.require(-hi, -lo)?;
        }
        let (sum, used) = self.window_sum(omega, t);
        Ok(ZeroSideValue {
            value: sum - self.centering(t),
            truncation_bound: self.truncation_bound(omega * t),
            zeros_used: used,
        })
    }

    /// Bound on Σ |f(λ(γ - c))| over ordinates outside the window, from
    /// shells of the window's width: the zero count of each shell times
    /// the size of f at its inner edge (tails of the built-ins are monotone).
    fn truncation_bound(&self, c: f64) -> f64 {
        if self.f.compact_support() {
            return 0.0;
        }
        let (a, b) = self.window;
        let w = b - a;
        let mut total = 0.0;
        for k in 1..10_000 {
            let inner = [b + (k - 1) as f64 * w, a - (k - 1) as f64 * w];
            let outer = [b + k as f64 * w, a - k as f64 * w];
            let mut shell = 0.0;
            for side in 0..2 {
                let size = self.f.eval(inner[side]).abs();
                // ordinates y = c + x/λ over the shell, both signs of γ
                let (y0, y1) = {
                    let p = c + inner[side] / self.lambda;
                    let q = c + outer[side] / self.lambda;
                    (p.min(q), p.max(q))
                };
                let count = if y1 <= 0.0 {
                    count_bound(-y1, -y0)
                } else if y0 >= 0.0 {
                    count_bound(y0, y1)
                } else {
                    count_bound(0.0, -y0) + count_bound(0.0, y1)
                };
                shell += size * count;
            }
            total += shell;
            if shell <= 1e-30 || shell <= 1e-17 * total {
                break;
            }
        }
        total
    }
}

/// S_t(f) at one scale point.
pub fn zero_side_stat(f: &TestFunction, zeros: &ZeroTable, scale: &ScalePoint) -> Result<ZeroSideValue> {
    ZeroSide::new(f, zeros, scale.lambda)?.eval(scale.omega, scale.t)
}

/// Which terms of the prime sum to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeMode {
    All,
    PrimesOnly,
    PowersOnly,
}

/// The prime side split into primes and higher prime powers.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PrimeSideValue {
    pub full: f64,
    pub primes_only: f64,
    pub powers_only: f64,
    pub imag_defect: f64,
}

impl PrimeSideValue {
    pub fn get(&self, mode: PrimeMode) -> f64 {
        match mode {
            PrimeMode::All => self.full,
            PrimeMode::PrimesOnly => self.primes_only,
            PrimeMode::PowersOnly => self.powers_only,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Term {
    log_n: f64,
    /// `Λ_u(n)/(2λ√n) f̂(±log n/λ)`.
    plus: Complex64,
    minus: Complex64,
    prime: bool,
}

/// Prime-side evaluator with the ω-independent coefficients precomputed.
pub struct PrimeSide {
    t: f64,
    terms: Vec<Term>,
    scale: f64,
}

impl PrimeSide {
    /// Coefficients for height t, scaling λ and smoothing height u.
    pub fn new(f: &TestFunction, t: f64, lambda: f64, u: f64, table: &PrimeTable) -> Result<Self> {
        if !(t > 0.0) || t > MAX_T {
            return Err(Error::Domain(format!("t must lie in (0, {MAX_T:e}], got {t}")));
        }
        if !(u > 1.0) || !(lambda > 0.0) {
            return Err(Error::Domain(format!("need u > 1 and lambda > 0, got u = {u}, lambda = {lambda}")));
        }
        let x = (u * u).floor() as u64;
        if table.limit() < x {
            return Err(Error::SieveLimit { limit: table.limit(), required: x });
        }
        let mut terms = Vec::new();
        let mut scale = 0.0;
        for pp in table.prime_powers_up_to(x)? {
            let w = primes::taper(pp.n, u) * pp.log_p();
            if w == 0.0 {
                continue;
            }
            let log_n = (pp.n as f64).ln();
            let c = w / (2.0 * lambda * (pp.n as f64).sqrt());
            let plus = f.fourier(log_n / lambda) * c;
            let minus = f.fourier(-log_n / lambda) * c;
            scale += plus.norm() + minus.norm();
            terms.push(Term { log_n, plus, minus, prime: pp.k == 1 });
        }
        Ok(Self { t, terms, scale })
    }

    pub fn for_scale(f: &TestFunction, scale: &ScalePoint, table: &PrimeTable) -> Result<Self> {
        Self::new(f, scale.t, scale.lambda, scale.u, table)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, omega: f64) -> Result<PrimeSideValue> {
        let wt = omega * self.t;
        let mut p = CompensatedComplexSum::new();
        let mut q = CompensatedComplexSum::new();
        for term in &self.terms {
            let phase = Complex64::from_polar(1.0, -wt * term.log_n);
            let z = -(term.plus * phase + term.minus * phase.conj());
            if term.prime {
                p.add(z);
            } else {
                q.add(z);
            }
        }
        let (p, q) = (p.value(), q.value());
        let full = p + q;
        let imag_defect = full.im.abs().max(p.im.abs()).max(q.im.abs());
        if imag_defect > IMAG_TOL * (1.0 + self.scale) {
            return Err(Error::Accuracy(format!(
                "prime sum has imaginary part {imag_defect:e}; the test function is not real"
            )));
        }
        Ok(PrimeSideValue { full: p.re + q.re, primes_only: p.re, powers_only: q.re, imag_defect })
    }
}

/// The prime side at one scale point.
pub fn prime_side_stat(f: &TestFunction, scale: &ScalePoint, mode: PrimeMode, table: &PrimeTable) -> Result<f64> {
    Ok(PrimeSide::for_scale(f, scale, table)?.eval(scale.omega)?.get(mode))
}

/// Bounds attached to a sample.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TruncationReport {
    /// Bound on zeros left out of the zero-side window.
    pub zero_window: f64,
    pub zeros_used: usize,
    pub prime_terms: usize,
}

/// Both sides of the explicit formula at one scale point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LinStatSample {
    pub scale: ScalePoint,
    pub zero_side: f64,
    pub prime_side_full: f64,
    pub prime_side_primes_only: f64,
    pub prime_side_powers_only: f64,
    pub residual: f64,
    pub truncation_report: TruncationReport,
    /// `(λ/log t)(‖f‖₁ + ‖f′‖₁ + ‖f″‖₁ + weighted norms/(t log t))`.
    pub envelope: f64,
}

/// Evaluator for both sides at fixed (t, λ, u) and varying ω.
pub struct ExplicitFormula<'a> {
    zero: ZeroSide<'a>,
    prime: PrimeSide,
    norms: NormBundle,
    t: f64,
    lambda: f64,
    alpha: f64,
}

impl<'a> ExplicitFormula<'a> {
    pub fn new(
        f: &'a TestFunction,
        zeros: &'a ZeroTable,
        table: &PrimeTable,
        t: f64,
        lambda: f64,
        alpha: f64,
    ) -> Result<Self> {
        let scale = ScalePoint::new(1.5, t, lambda, alpha)?;
        Ok(Self {
            zero: ZeroSide::new(f, zeros, lambda)?,
            prime: PrimeSide::for_scale(f, &scale, table)?,
            norms: norms(f)?,
            t,
            lambda,
            alpha,
        })
    }

    pub fn norms(&self) -> &NormBundle {
        &self.norms
    }

    pub fn sample(&self, omega: f64) -> Result<LinStatSample> {
        let scale = ScalePoint::new(omega, self.t, self.lambda, self.alpha)?;
        let z = self.zero.eval(omega, self.t)?;
        let p = self.prime.eval(omega)?;
        Ok(LinStatSample {
            scale,
            zero_side: z.value,
            prime_side_full: p.full,
            prime_side_primes_only: p.primes_only,
            prime_side_powers_only: p.powers_only,
            residual: z.value - p.full,
            truncation_report: TruncationReport {
                zero_window: z.truncation_bound,
                zeros_used: z.zeros_used,
                prime_terms: self.prime.len(),
            },
            envelope: self.norms.envelope(self.t, self.lambda),
        })
    }
}

/// Zero side, prime side and their difference at one scale point.
pub fn explicit_residual(
    f: &TestFunction,
    zeros: &ZeroTable,
    table: &PrimeTable,
    scale: &ScalePoint,
) -> Result<LinStatSample> {
    ExplicitFormula::new(f, zeros, table, scale.t, scale.lambda, scale.alpha)?.sample(scale.omega)
}
