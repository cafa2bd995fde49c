//! The fixed C² bump φ and cutoff χ, both built from the quintic
//! smoothstep `S(x) = 10x³ - 15x⁴ + 6x⁵` (S, S′, S″ vanish or equal 1 at
//! the ends of [0, 1]).
//!
//! φ(x) = 1 - S(|x|) on [-1, 1], zero outside. It has unit mass, φ(0) = 1,
//! and is C² with a bounded third derivative.
//!
//! χ(y) = 1 on [0, 1/2], 1 - S(2y - 1) on [1/2, 1], 0 beyond.

fn smoothstep(x: f64) -> f64 {
    x * x * x * (10.0 + x * (-15.0 + 6.0 * x))
}

fn smoothstep_d1(x: f64) -> f64 {
    30.0 * x * x * (1.0 - x) * (1.0 - x)
}

fn smoothstep_d2(x: f64) -> f64 {
    60.0 * x * (1.0 - x) * (1.0 - 2.0 * x)
}

/// φ(x).
pub fn phi(x: f64) -> f64 {
    let a = x.abs();
    if a >= 1.0 {
        0.0
    } else {
        1.0 - smoothstep(a)
    }
}

/// φ′(x).
pub fn phi_d1(x: f64) -> f64 {
    let a = x.abs();
    if a >= 1.0 {
        0.0
    } else {
        -x.signum() * smoothstep_d1(a)
    }
}

/// φ″(x).
pub fn phi_d2(x: f64) -> f64 {
    let a = x.abs();
    if a >= 1.0 {
        0.0
    } else {
        -smoothstep_d2(a)
    }
}

/// ∫_{-1}^{x} φ.
pub fn phi_cumulative(x: f64) -> f64 {
    if x <= -1.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    // ∫_0^a (1 - S) = a - a⁴(5/2 - 3a + a²)
    let a = x.abs();
    let half = a - a.powi(4) * (2.5 + a * (-3.0 + a));
    0.5 + x.signum() * half
}

/// ∫_0^1 x^j φ(x) dx.
fn moment(j: i32) -> f64 {
    let j = j as f64;
    1.0 / (j + 1.0) - (6.0 / (j + 6.0) - 15.0 / (j + 5.0) + 10.0 / (j + 4.0))
}

/// Standard transform ∫ φ(x) e^{-iξx} dx (real and even).
pub fn phi_transform(xi: f64) -> f64 {
    let x = xi.abs();
    if x < 1.5 {
        // Taylor series: 2 Σ (-1)^k ξ^{2k}/(2k)! m_{2k}
        let mut sum = 0.0;
        let mut coef = 1.0;
        for k in 0..20 {
            sum += coef * moment(2 * k);
            coef *= -x * x / ((2 * k + 1) as f64 * (2 * k + 2) as f64);
        }
        return 2.0 * sum;
    }
    // integration by parts; boundary terms of g = 1 - S vanish up to g″
    let (s, c) = x.sin_cos();
    let x2 = x * x;
    2.0 / (x2 * x2) * (60.0 * (c - 1.0) - 360.0 * s / x + 720.0 * (1.0 - c) / x2)
}

/// χ(y) for y >= 0.
pub fn chi(y: f64) -> f64 {
    if y <= 0.5 {
        1.0
    } else if y >= 1.0 {
        0.0
    } else {
        1.0 - smoothstep(2.0 * y - 1.0)
    }
}

/// χ′(y).
pub fn chi_d1(y: f64) -> f64 {
    if y <= 0.5 || y >= 1.0 {
        0.0
    } else {
        -2.0 * smoothstep_d1(2.0 * y - 1.0)
    }
}
