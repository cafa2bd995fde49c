use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{bump, TestFunction};
use crate::error::{Error, Result};
use crate::quad::{with_interior, Integrator};

/// f(q) rebuilt from the Helffer–Sjöstrand integral
///
/// `Re (1/π) ∬_{y>0} [i y f″(x) χ(y) + i (f(x) + i y f′(x)) χ′(y)] / (q - x - iy) dx dy`
///
/// with the cutoff χ of [`bump::chi`]. Taking real parts, the integrand is
/// `-[y² f″ χ + y χ′ (f + (q - x) f′)] / ((q - x)² + y²)`. Corners of f
/// (jumps of f′) enter as point masses of f″.
pub fn hs_reconstruct(f: &TestFunction, q: f64, tol: f64) -> Result<f64> {
    if !(tol >= 1e-6) {
        return Err(Error::Parameter(format!("reconstruction tolerance must be at least 1e-6, got {tol}")));
    }
    if !f.jumps().is_empty() {
        return Err(Error::Parameter(format!(
            "{f} has jumps; the reconstruction needs f continuous with f″ a measure"
        )));
    }
    let (lo, hi) = f.support(1e-17);
    let mut extra = f.breakpoints();
    extra.push(q);
    let pts = with_interior(lo, hi, &extra);
    let atoms = f.derivative_jumps();
    let inner = Integrator::new(1e-3 * tol, 1e-10).with_max_segments(pts.len() + 4000);
    let outer = Integrator::new(1e-2 * tol, 1e-10);

    let mut failure = None;
    let slice = |y: f64| -> Result<f64> {
        let (c, c1) = (bump::chi(y), bump::chi_d1(y));
        let y2 = y * y;
        let ac = inner
            .integrate_breaks(
                |x| {
                    let d = q - x;
                    let den = d * d + y2;
                    -(y2 * f.d2(x) * c + y * c1 * (f.eval(x) + d * f.d1(x))) / den
                },
                &pts,
            )?
            .value;
        let point: f64 = atoms.iter().map(|&(x, j)| -j * y2 * c / ((q - x).powi(2) + y2)).sum();
        Ok(ac + point)
    };
    let est = outer.estimate(
        |y| match slice(y) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        &[0.0, 0.25, 0.5, 0.75, 1.0],
    );
    if let Some(e) = failure {
        return Err(e);
    }
    if !est.converged {
        return Err(Error::Accuracy(format!(
            "reconstruction of {f} at {q} exceeded the quadrature budget (error {:e})",
            est.error
        )));
    }
    Ok(est.value / PI)
}

/// Both sides of
///
/// `(1/π) ∬ (y f″ χ(y) + (f - i y f′) χ′(y)) e^{-iδx} e^{-δy} dx dy = -(1/π) ∫ f e^{-iδx} dx`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IbpCheck {
    pub delta: f64,
    #[serde(serialize_with = "ser_complex")]
    pub lhs: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub rhs: Complex64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

impl IbpCheck {
    pub fn defect(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }
}

/// Evaluate the left side by quadrature (it factors into x- and
/// y-integrals) and the right side from the closed-form transform.
pub fn ibp_identity(f: &TestFunction, delta: f64) -> Result<IbpCheck> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::Parameter(format!("delta must be positive, got {delta}")));
    }
    if !f.jumps().is_empty() {
        return Err(Error::Parameter(format!("{f} has jumps; the identity needs f″ to be a measure")));
    }
    let (lo, hi) = f.support(1e-17);
    let pts = crate::quad::panels(lo, hi, (PI / delta).min(hi - lo));
    let pts = with_interior(lo, hi, &[&pts[..], &f.breakpoints()].concat());
    let integ = Integrator::new(1e-11, 1e-12).with_max_segments(pts.len() + 4000);
    let phase = |x: f64| Complex64::from_polar(1.0, -delta * x);
    let fx =
        |h: &dyn Fn(f64) -> f64| -> Result<Complex64> { Ok(integ.integrate_breaks(|x| phase(x) * h(x), &pts)?.value) };
    let f0 = fx(&|x| f.eval(x))?;
    let f1 = fx(&|x| f.d1(x))?;
    let f2 = fx(&|x| f.d2(x))? + f.derivative_jumps().iter().map(|&(x, j)| phase(x) * j).sum::<Complex64>();

    let ys = [0.0, 0.5, 1.0];
    let yint = |h: &dyn Fn(f64) -> f64| -> Result<f64> {
        Ok(Integrator::new(1e-14, 1e-13).integrate_breaks(|y| h(y) * (-delta * y).exp(), &ys)?.value)
    };
    let y1 = yint(&|y| y * bump::chi(y))?;
    let c0 = yint(&bump::chi_d1)?;
    let c1 = yint(&|y| y * bump::chi_d1(y))?;

    let i = Complex64::new(0.0, 1.0);
    let lhs = (f2 * y1 + f0 * c0 - i * f1 * c1) / PI;
    Ok(IbpCheck { delta, lhs, rhs: -f.fourier(delta) })
}
