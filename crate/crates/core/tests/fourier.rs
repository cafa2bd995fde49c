use std::f64::consts::PI;

use mesoszeta::quad::Integrator;
use mesoszeta::testfns::{parse, quadrature_fourier, TestFunction};
use num_complex::Complex64;

fn grid() -> impl Iterator<Item = f64> {
    (-40..=40).map(|k| 0.25 * k as f64)
}

#[test]
fn linearity() {
    let f = parse("gaussian:0.3,0.8").unwrap();
    let g = parse("tent:-1,2").unwrap();
    let h = TestFunction::combination(&[(2.0, f.clone()), (-0.5, g.clone())]);
    for xi in grid() {
        let want = 2.0 * f.fourier(xi) - 0.5 * g.fourier(xi);
        assert!((h.fourier(xi) - want).norm() < 1e-8, "xi = {xi}");
    }
}

#[test]
fn dilation_and_translation() {
    for (wide, unit, c) in [
        ("gaussian:0,2.5", "gaussian:0,1", 2.5),
        ("tent:-0.5,0.5", "tent:-1,1", 0.5),
        ("c2_bump:0,3", "c2_bump:0,1", 3.0),
        ("indicator:0,4", "indicator:0,1", 4.0),
    ] {
        let (fc, f1) = (parse(wide).unwrap(), parse(unit).unwrap());
        for xi in grid() {
            assert!((fc.fourier(xi) - c * f1.fourier(c * xi)).norm() < 1e-8, "{wide} at {xi}");
        }
    }
    let shifted = parse("gaussian:1.7,1").unwrap();
    let base = parse("gaussian:0,1").unwrap();
    for xi in grid() {
        let want = Complex64::from_polar(1.0, -1.7 * xi) * base.fourier(xi);
        assert!((shifted.fourier(xi) - want).norm() < 1e-12);
    }
}

#[test]
fn elementary_transforms() {
    let ind = parse("indicator:-1,1").unwrap();
    let tent = parse("tent:-1,1").unwrap();
    assert!((ind.fourier(0.0).re - 2.0 / PI).abs() < 1e-15);
    for xi in [0.3, 1.0, 2.7, 10.0] {
        assert!((ind.fourier(xi) - 2.0 * xi.sin() / (PI * xi)).norm() < 1e-13);
        assert!((tent.fourier(xi) - 2.0 * (1.0 - xi.cos()) / (PI * xi * xi)).norm() < 1e-13);
    }
    for spec in ["gaussian:0.2,0.6", "c2_bump:-0.4,1.5", "tent:-2,1", "mollified_indicator:0,1,0.1"] {
        let f = parse(spec).unwrap();
        assert!((f.fourier(0.0).re - f.integral() / PI).abs() < 1e-12, "{spec}");
    }
}

#[test]
fn closed_forms_agree_with_quadrature() {
    for spec in ["gaussian:0.4,1.2", "c2_bump:0.5,2", "tent:-1,3", "mollified_indicator:-1,1,0.3"] {
        let f = parse(spec).unwrap();
        for xi in [0.0, 0.7, 2.0, 5.5] {
            let q = quadrature_fourier(&f, xi).unwrap();
            assert!((q - f.fourier(xi)).norm() < 1e-8, "{spec} at {xi}");
        }
    }
}

#[test]
fn plancherel() {
    // ∫|f̂|² = (2/π) ∫|f|² in this normalization
    let g = parse("gaussian:0,1").unwrap();
    let integ = Integrator::new(1e-13, 1e-12);
    let lhs = integ.integrate(|x| g.fourier(x).norm_sqr(), -12.0, 12.0).unwrap().value;
    assert!((lhs - 2.0 / PI.sqrt()).abs() < 1e-6);

    for (spec, reach) in [("c2_bump:0,1", 400.0), ("tent:-1,1", 2000.0)] {
        let f = parse(spec).unwrap();
        let pts: Vec<f64> = (0..=400).map(|k| -reach + 2.0 * reach * k as f64 / 400.0).collect();
        let spectral = Integrator::new(1e-12, 1e-11)
            .with_max_segments(20_000)
            .integrate_breaks(|x| f.fourier(x).norm_sqr(), &pts)
            .unwrap()
            .value;
        let spatial = integ.integrate_breaks(|x| f.eval(x).powi(2), &[-1.0, 0.0, 1.0]).unwrap().value;
        assert!((spectral / (2.0 / PI * spatial) - 1.0).abs() < 1e-5, "{spec}: {spectral} vs {}", 2.0 / PI * spatial);
    }
}
