//! Test functions, their transforms under `f̂(ξ) = (1/π) ∫ f(x) e^{-iξx} dx`,
//! and the norms and hypotheses of the limit theorems.

mod analysis;
pub mod bump;
mod hs;
mod sampled;

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use analysis::{
    check_hypotheses, h_half_inner, h_half_logkernel, norms, quadrature_fourier, sigma_t_sq, variation, weighted_tv,
    HHalf, HypothesisReport, NormBundle, Variation, Which,
};
pub use hs::{hs_reconstruct, ibp_identity, IbpCheck};
pub use sampled::SampledFunction;

/// Regularity class, used to pick quadrature breakpoints and to decide
/// which derivatives are functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Smoothness {
    /// f, f′, f″ continuous.
    C2,
    /// f continuous, f′ of bounded variation with jumps.
    Lipschitz,
    /// f of bounded variation with jumps.
    BoundedVariation,
}

#[derive(Debug, Clone)]
enum Shape {
    Gaussian { mean: f64, sd: f64 },
    Bump { center: f64, halfwidth: f64 },
    Indicator { a: f64, b: f64 },
    Tent { a: f64, b: f64 },
    MollifiedIndicator { a: f64, b: f64, eps: f64 },
    Mollified { inner: Box<TestFunction>, eps: f64 },
    Combination(Vec<(f64, TestFunction)>),
    Sampled(SampledFunction),
}

/// A real test function with derivatives and Fourier transform.
#[derive(Debug, Clone)]
pub struct TestFunction {
    name: String,
    shape: Shape,
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Names accepted by [`builtin`] with their default parameters.
pub const CATALOG: [(&str, &str, &[f64]); 5] = [
    ("gaussian", "exp(-(x-m)^2/(2s^2)); params m,s", &[0.0, 1.0]),
    ("c2_bump", "C² quintic bump of height 1; params center,halfwidth", &[0.0, 1.0]),
    ("indicator", "indicator of [a,b]; params a,b", &[0.0, 1.0]),
    ("tent", "triangle of height 1 on [a,b]; params a,b", &[-1.0, 1.0]),
    (
        "mollified_indicator",
        "indicator of [a,b] convolved with the bump at scale eps; params a,b,eps",
        &[0.0, 1.0, 0.05],
    ),
];

fn fmt_params(p: &[f64]) -> String {
    p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// Built-in test function by name.
pub fn builtin(name: &str, params: &[f64]) -> Result<TestFunction> {
    let need = |n: usize| -> Result<()> {
        if params.len() != n {
            return Err(Error::Parameter(format!("{name} takes {n} parameters, got {}", params.len())));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::Parameter(format!("{name}: parameters must be finite")));
        }
        Ok(())
    };
    let interval = |a: f64, b: f64| -> Result<()> {
        if a >= b {
            Err(Error::Parameter(format!("{name}: need a < b, got a = {a}, b = {b}")))
        } else {
            Ok(())
        }
    };
    let positive = |what: &str, v: f64| -> Result<()> {
        if v > 0.0 {
            Ok(())
        } else {
            Err(Error::Parameter(format!("{name}: {what} must be positive, got {v}")))
        }
    };
    let shape = match name {
        "gaussian" => {
            need(2)?;
            positive("s", params[1])?;
            Shape::Gaussian { mean: params[0], sd: params[1] }
        }
        "c2_bump" => {
            need(2)?;
            positive("halfwidth", params[1])?;
            Shape::Bump { center: params[0], halfwidth: params[1] }
        }
        "indicator" => {
            need(2)?;
            interval(params[0], params[1])?;
            Shape::Indicator { a: params[0], b: params[1] }
        }
        "tent" => {
            need(2)?;
            interval(params[0], params[1])?;
            Shape::Tent { a: params[0], b: params[1] }
        }
        "mollified_indicator" => {
            need(3)?;
            interval(params[0], params[1])?;
            positive("eps", params[2])?;
            Shape::MollifiedIndicator { a: params[0], b: params[1], eps: params[2] }
        }
        _ => return Err(Error::Parameter(format!("unknown test function {name:?}"))),
    };
    Ok(TestFunction { name: format!("{name}:{}", fmt_params(params)), shape })
}

/// Parse `name` or `name:p1,p2,...`.
pub fn parse(spec: &str) -> Result<TestFunction> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let name = name.trim();
    let params: Vec<f64> = if rest.trim().is_empty() {
        CATALOG
            .iter()
            .find(|(n, _, _)| *n == name)
            .map(|(_, _, d)| d.to_vec())
            .ok_or_else(|| Error::Parameter(format!("unknown test function {name:?}")))?
    } else {
        rest.split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| Error::Parameter(format!("bad parameter {p:?} in {spec:?}"))))
            .collect::<Result<_>>()?
    };
    builtin(name, &params)
}

/// f_ε = f * φ_ε with the fixed bump φ.
pub fn mollify(f: &TestFunction, eps: f64) -> Result<TestFunction> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::Parameter(format!("mollification scale must be positive, got {eps}")));
    }
    let name = format!("mollify({},{eps})", f.name);
    let shape = match f.shape {
        Shape::Indicator { a, b } => Shape::MollifiedIndicator { a, b, eps },
        _ => Shape::Mollified { inner: Box::new(f.clone()), eps },
    };
    Ok(TestFunction { name, shape })
}

fn gauss(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    (-0.5 * z * z).exp()
}

/// Quadrature nodes for ∫ h(y) φ(y) dy on [-1, 1].
fn against_bump(mut h: impl FnMut(f64) -> f64, kernel: fn(f64) -> f64) -> f64 {
    let integ = crate::quad::Integrator::new(1e-14, 1e-12);
    integ.estimate(|y| h(y) * kernel(y), &[-1.0, -0.5, 0.0, 0.5, 1.0]).value
}

impl TestFunction {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// `a·f`.
    pub fn scaled(&self, a: f64) -> TestFunction {
        TestFunction { name: format!("{a}*{}", self.name), shape: Shape::Combination(vec![(a, self.clone())]) }
    }

    /// `Σ c_i f_i`.
    pub fn combination(terms: &[(f64, TestFunction)]) -> TestFunction {
        let name = terms.iter().map(|(c, f)| format!("{c}*{}", f.name)).collect::<Vec<_>>().join("+");
        TestFunction { name, shape: Shape::Combination(terms.to_vec()) }
    }

    /// A function from samples; see [`SampledFunction`].
    pub fn sampled(name: &str, samples: SampledFunction) -> TestFunction {
        TestFunction { name: name.to_string(), shape: Shape::Sampled(samples) }
    }

    pub fn smoothness(&self) -> Smoothness {
        match &self.shape {
            Shape::Gaussian { .. } | Shape::Bump { .. } | Shape::MollifiedIndicator { .. } => Smoothness::C2,
            Shape::Mollified { .. } => Smoothness::C2,
            Shape::Tent { .. } => Smoothness::Lipschitz,
            Shape::Indicator { .. } => Smoothness::BoundedVariation,
            Shape::Combination(terms) => {
                let classes: Vec<Smoothness> = terms.iter().map(|(_, f)| f.smoothness()).collect();
                if classes.contains(&Smoothness::BoundedVariation) {
                    Smoothness::BoundedVariation
                } else if classes.contains(&Smoothness::Lipschitz) {
                    Smoothness::Lipschitz
                } else {
                    Smoothness::C2
                }
            }
            Shape::Sampled(_) => Smoothness::C2,
        }
    }

    /// True when the transform is evaluated in closed form.
    pub fn has_closed_form_fourier(&self) -> bool {
        match &self.shape {
            Shape::Sampled(_) => false,
            Shape::Mollified { inner, .. } => inner.has_closed_form_fourier(),
            Shape::Combination(terms) => terms.iter().all(|(_, f)| f.has_closed_form_fourier()),
            _ => true,
        }
    }

    /// f(x). At a jump the value is the average of the one-sided limits.
    pub fn eval(&self, x: f64) -> f64 {
        match &self.shape {
            Shape::Gaussian { mean, sd } => gauss(x, *mean, *sd),
            Shape::Bump { center, halfwidth } => bump::phi((x - center) / halfwidth),
            Shape::Indicator { a, b } => {
                if x > *a && x < *b {
                    1.0
                } else if x == *a || x == *b {
                    0.5
                } else {
                    0.0
                }
            }
            Shape::Tent { a, b } => {
                let c = 0.5 * (a + b);
                let h = 0.5 * (b - a);
                (1.0 - (x - c).abs() / h).max(0.0)
            }
            Shape::MollifiedIndicator { a, b, eps } => {
                bump::phi_cumulative((x - a) / eps) - bump::phi_cumulative((x - b) / eps)
            }
            Shape::Mollified { inner, eps } => against_bump(|y| inner.eval(x - eps * y), bump::phi),
            Shape::Combination(terms) => terms.iter().map(|(c, f)| c * f.eval(x)).sum(),
            Shape::Sampled(s) => s.eval(x),
        }
    }

    /// f′(x) where it exists as a function (jumps of f are excluded; see
    /// [`jumps`](Self::jumps)).
    pub fn d1(&self, x: f64) -> f64 {
        match &self.shape {
            Shape::Gaussian { mean, sd } => -(x - mean) / (sd * sd) * gauss(x, *mean, *sd),
            Shape::Bump { center, halfwidth } => bump::phi_d1((x - center) / halfwidth) / halfwidth,
            Shape::Indicator { .. } => 0.0,
            Shape::Tent { a, b } => {
                let c = 0.5 * (a + b);
                let h = 0.5 * (b - a);
                if x <= *a || x >= *b || x == c {
                    0.0
                } else if x < c {
                    1.0 / h
                } else {
                    -1.0 / h
                }
            }
            Shape::MollifiedIndicator { a, b, eps } => (bump::phi((x - a) / eps) - bump::phi((x - b) / eps)) / eps,
            Shape::Mollified { inner, eps } => against_bump(|y| inner.eval(x - eps * y), bump::phi_d1) / eps,
            Shape::Combination(terms) => terms.iter().map(|(c, f)| c * f.d1(x)).sum(),
            Shape::Sampled(s) => s.d1(x),
        }
    }

    /// f″(x) where it exists as a function.
    pub fn d2(&self, x: f64) -> f64 {
        match &self.shape {
            Shape::Gaussian { mean, sd } => {
                let z = (x - mean) / sd;
                (z * z - 1.0) / (sd * sd) * gauss(x, *mean, *sd)
            }
            Shape::Bump { center, halfwidth } => bump::phi_d2((x - center) / halfwidth) / (halfwidth * halfwidth),
            Shape::Indicator { .. } | Shape::Tent { .. } => 0.0,
            Shape::MollifiedIndicator { a, b, eps } => {
                (bump::phi_d1((x - a) / eps) - bump::phi_d1((x - b) / eps)) / (eps * eps)
            }
            Shape::Mollified { inner, eps } => against_bump(|y| inner.eval(x - eps * y), bump::phi_d2) / (eps * eps),
            Shape::Combination(terms) => terms.iter().map(|(c, f)| c * f.d2(x)).sum(),
            Shape::Sampled(s) => s.d2(x),
        }
    }

    /// Jumps `(x, f(x+) - f(x-))` of f.
    pub fn jumps(&self) -> Vec<(f64, f64)> {
        match &self.shape {
            Shape::Indicator { a, b } => vec![(*a, 1.0), (*b, -1.0)],
            Shape::Combination(terms) => merge_jumps(terms.iter().map(|(c, f)| (*c, f.jumps()))),
            _ => Vec::new(),
        }
    }

    /// Jumps of f′ (corners of f). Meaningless when f itself jumps.
    pub fn derivative_jumps(&self) -> Vec<(f64, f64)> {
        match &self.shape {
            Shape::Tent { a, b } => {
                let h = 0.5 * (b - a);
                vec![(*a, 1.0 / h), (0.5 * (a + b), -2.0 / h), (*b, 1.0 / h)]
            }
            Shape::Combination(terms) => merge_jumps(terms.iter().map(|(c, f)| (*c, f.derivative_jumps()))),
            _ => Vec::new(),
        }
    }

    /// Points where f, f′ or f″ are not smooth, for use as quadrature breakpoints.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = match &self.shape {
            Shape::Gaussian { mean, .. } => vec![*mean],
            Shape::Bump { center, halfwidth } => vec![center - halfwidth, *center, center + halfwidth],
            Shape::Indicator { a, b } => vec![*a, *b],
            Shape::Tent { a, b } => vec![*a, 0.5 * (a + b), *b],
            Shape::MollifiedIndicator { a, b, eps } => vec![a - eps, *a, a + eps, b - eps, *b, b + eps],
            Shape::Mollified { inner, eps } => {
                inner.breakpoints().iter().flat_map(|&p| [p - eps, p, p + eps]).collect()
            }
            Shape::Combination(terms) => terms.iter().flat_map(|(_, f)| f.breakpoints()).collect(),
            Shape::Sampled(s) => {
                let (a, b) = s.grid_ends();
                vec![a, b]
            }
        };
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// Interval outside which |f|, |f′|, |f″| are below `tol` (relative to
    /// their peak sizes); exact for compactly supported functions.
    pub fn support(&self, tol: f64) -> (f64, f64) {
        match &self.shape {
            Shape::Gaussian { mean, sd } => {
                // |x² - 1| e^{-x²/2} <= tol needs a slightly wider window than e^{-x²/2}
                let r = (2.0 * (1.0 / tol.clamp(1e-300, 0.5)).ln()).sqrt() + 2.0;
                (mean - r * sd, mean + r * sd)
            }
            Shape::Bump { center, halfwidth } => (center - halfwidth, center + halfwidth),
            Shape::Indicator { a, b } | Shape::Tent { a, b } => (*a, *b),
            Shape::MollifiedIndicator { a, b, eps } => (a - eps, b + eps),
            Shape::Mollified { inner, eps } => {
                let (lo, hi) = inner.support(tol);
                (lo - eps, hi + eps)
            }
            Shape::Combination(terms) => {
                let (lo, hi) = terms
                    .iter()
                    .filter(|(c, _)| *c != 0.0)
                    .map(|(_, f)| f.support(tol))
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), (a, b)| (l.min(a), h.max(b)));
                if lo > hi {
                    (0.0, 0.0)
                } else {
                    (lo, hi)
                }
            }
            Shape::Sampled(s) => s.grid_ends(),
        }
    }

    /// Characteristic length: the smallest feature width of f.
    pub fn scale(&self) -> f64 {
        match &self.shape {
            Shape::Gaussian { sd, .. } => *sd,
            Shape::Bump { halfwidth, .. } => *halfwidth,
            Shape::Indicator { a, b } | Shape::Tent { a, b } => 0.5 * (b - a),
            Shape::MollifiedIndicator { a, b, eps } => eps.min(0.5 * (b - a)),
            Shape::Mollified { inner, eps } => inner.scale().min(*eps),
            Shape::Combination(terms) => {
                terms.iter().map(|(_, f)| f.scale()).fold(f64::INFINITY, f64::min).min(f64::MAX)
            }
            Shape::Sampled(s) => 4.0 * s.spacing(),
        }
    }

    /// True when f vanishes identically outside a bounded interval.
    pub fn compact_support(&self) -> bool {
        match &self.shape {
            Shape::Gaussian { .. } => false,
            Shape::Mollified { inner, .. } => inner.compact_support(),
            Shape::Combination(terms) => terms.iter().all(|(c, f)| *c == 0.0 || f.compact_support()),
            _ => true,
        }
    }

    /// ∫ f.
    pub fn integral(&self) -> f64 {
        PI * self.fourier(0.0).re
    }

    /// f̂(ξ) = (1/π) ∫ f(x) e^{-iξx} dx.
    pub fn fourier(&self, xi: f64) -> Complex64 {
        let phase = |c: f64| Complex64::from_polar(1.0, -xi * c);
        match &self.shape {
            Shape::Gaussian { mean, sd } => {
                let m = sd * (2.0 * PI).sqrt() * (-0.5 * sd * sd * xi * xi).exp() / PI;
                phase(*mean) * m
            }
            Shape::Bump { center, halfwidth } => {
                phase(*center) * (halfwidth * bump::phi_transform(halfwidth * xi) / PI)
            }
            Shape::Indicator { a, b } => indicator_fourier(*a, *b, xi),
            Shape::Tent { a, b } => {
                let h = 0.5 * (b - a);
                let c = 0.5 * (a + b);
                let half = 0.5 * h * xi;
                let sinc = if half.abs() < 1e-4 { 1.0 - half * half / 6.0 } else { half.sin() / half };
                phase(c) * (h * sinc * sinc / PI)
            }
            Shape::MollifiedIndicator { a, b, eps } => indicator_fourier(*a, *b, xi) * bump::phi_transform(eps * xi),
            Shape::Mollified { inner, eps } => inner.fourier(xi) * bump::phi_transform(eps * xi),
            Shape::Combination(terms) => terms.iter().map(|(c, f)| f.fourier(xi) * *c).sum(),
            Shape::Sampled(_) => quadrature_fourier(self, xi).unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
        }
    }
}

fn indicator_fourier(a: f64, b: f64, xi: f64) -> Complex64 {
    // (e^{-iξa} - e^{-iξb}) / (iπξ) = (b-a)/π · e^{-iξc} · sinc(ξh)
    let h = 0.5 * (b - a);
    let c = 0.5 * (a + b);
    let w = xi * h;
    let sinc = if w.abs() < 1e-4 { 1.0 - w * w / 6.0 } else { w.sin() / w };
    Complex64::from_polar(1.0, -xi * c) * (2.0 * h * sinc / PI)
}

fn merge_jumps(parts: impl Iterator<Item = (f64, Vec<(f64, f64)>)>) -> Vec<(f64, f64)> {
    let mut all: Vec<(f64, f64)> = parts.flat_map(|(c, js)| js.into_iter().map(move |(x, j)| (x, c * j))).collect();
    all.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (x, j) in all {
        match out.last_mut() {
            Some(last) if last.0 == x => last.1 += j,
            _ => out.push((x, j)),
        }
    }
    out.retain(|&(_, j)| j != 0.0);
    out
}
