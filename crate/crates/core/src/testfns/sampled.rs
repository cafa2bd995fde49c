use crate::error::{Error, Result};

/// A user-supplied function given by samples of f, f′ and f″ on an
/// increasing grid, interpolated by piecewise quintic Hermite polynomials
/// (so the result is C²). It is taken to be zero outside the grid, which
/// requires f, f′ and f″ to vanish at both ends.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    x: Vec<f64>,
    f: Vec<f64>,
    d1: Vec<f64>,
    d2: Vec<f64>,
}

const END_TOL: f64 = 1e-12;

impl SampledFunction {
    pub fn new(x: Vec<f64>, f: Vec<f64>, d1: Vec<f64>, d2: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 2 || f.len() != n || d1.len() != n || d2.len() != n {
            return Err(Error::Parameter(format!(
                "sampled function needs at least 2 nodes and equal lengths, got {}/{}/{}/{}",
                n,
                f.len(),
                d1.len(),
                d2.len()
            )));
        }
        if x.iter().chain(&f).chain(&d1).chain(&d2).any(|v| !v.is_finite()) {
            return Err(Error::Parameter("sampled function has non-finite entries".into()));
        }
        if x.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter("sample nodes must be strictly increasing".into()));
        }
        let scale = f.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        for i in [0, n - 1] {
            if f[i].abs() > END_TOL * scale || d1[i].abs() > END_TOL * scale || d2[i].abs() > END_TOL * scale {
                return Err(Error::Parameter(format!("f, f′, f″ must vanish at the end node x = {}", x[i])));
            }
        }
        Ok(Self { x, f, d1, d2 })
    }

    pub fn grid_ends(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    /// Smallest node spacing.
    pub fn spacing(&self) -> f64 {
        self.x.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }

    /// Interval index and local coordinate, or None outside the grid.
    fn locate(&self, x: f64) -> Option<(usize, f64, f64)> {
        let (lo, hi) = self.grid_ends();
        if !(x > lo && x < hi) {
            return None;
        }
        let i = self.x.partition_point(|&v| v <= x).saturating_sub(1).min(self.x.len() - 2);
        let h = self.x[i + 1] - self.x[i];
        Some((i, (x - self.x[i]) / h, h))
    }

    /// Derivative `order` (0, 1 or 2) of the interpolant.
    fn value(&self, x: f64, order: usize) -> f64 {
        let Some((i, s, h)) = self.locate(x) else { return 0.0 };
        let b = basis(s, order);
        let (f0, f1) = (self.f[i], self.f[i + 1]);
        let (p0, p1) = (self.d1[i] * h, self.d1[i + 1] * h);
        let (q0, q1) = (self.d2[i] * h * h, self.d2[i + 1] * h * h);
        let v = b[0] * f0 + b[1] * p0 + b[2] * q0 + b[3] * f1 + b[4] * p1 + b[5] * q1;
        v / h.powi(order as i32)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.value(x, 0)
    }

    pub fn d1(&self, x: f64) -> f64 {
        self.value(x, 1)
    }

    pub fn d2(&self, x: f64) -> f64 {
        self.value(x, 2)
    }
}

/// Quintic Hermite basis on [0, 1] and its first two derivatives, ordered
/// as (value, slope, curvature) at 0 then at 1.
fn basis(s: f64, order: usize) -> [f64; 6] {
    let s2 = s * s;
    let s3 = s2 * s;
    let s4 = s3 * s;
    let s5 = s4 * s;
    match order {
        0 => [
            1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5,
            s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5,
            0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5,
            10.0 * s3 - 15.0 * s4 + 6.0 * s5,
            -4.0 * s3 + 7.0 * s4 - 3.0 * s5,
            0.5 * s3 - s4 + 0.5 * s5,
        ],
        1 => [
            -30.0 * s2 + 60.0 * s3 - 30.0 * s4,
            1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4,
            s - 4.5 * s2 + 6.0 * s3 - 2.5 * s4,
            30.0 * s2 - 60.0 * s3 + 30.0 * s4,
            -12.0 * s2 + 28.0 * s3 - 15.0 * s4,
            1.5 * s2 - 4.0 * s3 + 2.5 * s4,
        ],
        _ => [
            -60.0 * s + 180.0 * s2 - 120.0 * s3,
            -36.0 * s + 96.0 * s2 - 60.0 * s3,
            1.0 - 9.0 * s + 18.0 * s2 - 10.0 * s3,
            60.0 * s - 180.0 * s2 + 120.0 * s3,
            -24.0 * s + 84.0 * s2 - 60.0 * s3,
            3.0 * s - 12.0 * s2 + 10.0 * s3,
        ],
    }
}
