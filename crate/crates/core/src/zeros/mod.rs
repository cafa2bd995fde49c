//! Zero ordinates of ζ on the critical line: Gram points, Turing-certified
//! counting, bracketing and refinement, and the on-disk table format.

mod table;

use std::env;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::zeta::{self, theta_prime, theta_unchecked, z_unchecked};

pub use table::{load_zero_table, save_zero_table, Provenance, ZeroTable};

/// Largest height at which zeros are computed.
pub const MAX_HEIGHT: f64 = 1e7;

/// Finest precision accepted by [`find_zeros`].
pub const MIN_PRECISION: f64 = 1e-9;

/// Environment variable naming the directory of cached zero tables.
pub const DATA_DIR_VAR: &str = "MESOSZETA_DATA";

/// Subdivision factor per escalation when a Gram block shows too few sign changes.
const SUBDIVISION: usize = 64;
const ESCALATIONS: usize = 2;

/// No zero of ζ has ordinate in (0, 14]; the first is 14.1347...
const ZERO_FREE_BELOW: f64 = 14.0;

/// The Gram point g_n, the solution of θ(g) = nπ, for n >= 0.
pub fn gram_point(n: u64) -> f64 {
    let target = n as f64 * PI;
    // invert θ(t) ≈ (t/2) log(t/2πe) through Lambert W
    let x = (n as f64 + 0.125) / std::f64::consts::E;
    let mut w = (1.0 + x).ln();
    for _ in 0..50 {
        let ew = w.exp();
        let step = (w * ew - x) / (ew * (w + 1.0));
        w -= step;
        if step.abs() < 1e-15 * w.abs().max(1.0) {
            break;
        }
    }
    let mut t = (2.0 * PI * (n as f64 + 0.125) / w).max(zeta::MIN_HEIGHT + 1.0);
    for _ in 0..100 {
        let step = (theta_unchecked(t) - target) / theta_prime(t);
        t -= step;
        if step.abs() <= 4.0 * f64::EPSILON * t {
            break;
        }
    }
    t
}

/// Index n of the Gram interval [g_n, g_{n+1}) containing `t`; -1 below g_0.
pub fn gram_index(t: f64) -> i64 {
    let mut n = (theta_unchecked(t) / PI).floor() as i64;
    // guard against rounding at the interval ends
    while n >= 0 && gram_point(n as u64) > t {
        n -= 1;
    }
    while gram_point((n + 1) as u64) <= t {
        n += 1;
    }
    n
}

/// Number of consecutive Rosser blocks needed for Turing's bound at height `g`.
pub fn turing_blocks(g: f64) -> usize {
    let l = g.ln();
    (0.0061 * l * l + 0.08 * l).ceil().max(1.0) as usize
}

/// A Gram-indexed sample point; index -1 is the start point t = 10.
#[derive(Debug, Clone, Copy)]
struct Anchor {
    index: i64,
    t: f64,
    z: f64,
}

impl Anchor {
    fn at(index: i64) -> Anchor {
        let t = if index < 0 { zeta::MIN_HEIGHT } else { gram_point(index as u64) };
        Anchor { index, t, z: z_unchecked(t) }
    }

    /// Good Gram point: (-1)^n Z(g_n) > 0. The start point counts as good
    /// because Z(10) < 0 and no zero lies below 14.
    fn is_good(&self) -> bool {
        self.index < 0 || (self.z > 0.0) == (self.index % 2 == 0)
    }
}

/// Sign-change bracket of Z.
#[derive(Debug, Clone, Copy)]
struct Bracket {
    a: f64,
    b: f64,
    za: f64,
}

/// Samples between two good Gram points, refined until the expected
/// number of sign changes appears.
struct Block {
    start: Anchor,
    end: Anchor,
    brackets: Vec<Bracket>,
}

fn same_sign(x: f64, y: f64) -> bool {
    (x >= 0.0) == (y >= 0.0)
}

fn brackets_of(samples: &[(f64, f64)]) -> Vec<Bracket> {
    samples
        .windows(2)
        .filter(|w| !same_sign(w[0].1, w[1].1))
        .map(|w| Bracket { a: w[0].0, b: w[1].0, za: w[0].1 })
        .collect()
}

fn subdivide(samples: &[(f64, f64)], parts: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(samples.len() * parts);
    for w in samples.windows(2) {
        let (a, za) = w[0];
        let b = w[1].0;
        out.push((a, za));
        let h = (b - a) / parts as f64;
        out.extend(
            (1..parts)
                .into_par_iter()
                .map(|j| {
                    let t = a + h * j as f64;
                    (t, z_unchecked(t))
                })
                .collect::<Vec<_>>(),
        );
    }
    if let Some(&last) = samples.last() {
        out.push(last);
    }
    out
}

impl Block {
    fn expected(&self) -> usize {
        (self.end.index - self.start.index) as usize
    }

    /// Sample the block at its Gram points, subdividing up to twice when
    /// fewer than `expected` sign changes are visible.
    fn resolve(start: Anchor, interior: &[Anchor], end: Anchor) -> Result<Block> {
        let mut samples: Vec<(f64, f64)> = Vec::with_capacity(interior.len() + 2);
        samples.push((start.t, start.z));
        samples.extend(interior.iter().map(|a| (a.t, a.z)));
        samples.push((end.t, end.z));
        let expected = (end.index - start.index) as usize;
        let mut brackets = brackets_of(&samples);
        let mut level = 0;
        while brackets.len() < expected && level < ESCALATIONS {
            samples = subdivide(&samples, SUBDIVISION);
            brackets = brackets_of(&samples);
            level += 1;
        }
        if brackets.len() < expected {
            return Err(Error::Incomplete { start: start.t, end: end.t, found: brackets.len(), expected });
        }
        Ok(Block { start, end, brackets })
    }
}

/// Certified scan: every zero in (start.t, end.t] lies in exactly one bracket.
struct Scan {
    /// N(start.t), known exactly.
    base: usize,
    start: f64,
    brackets: Vec<Bracket>,
}

/// Walk from a Gram index to the nearest good Gram point in direction `step`.
fn nearest_good(from: i64, step: i64) -> Anchor {
    let mut idx = from;
    loop {
        if idx < 0 {
            return Anchor::at(-1);
        }
        let a = Anchor::at(idx);
        if a.is_good() {
            return a;
        }
        idx += step;
    }
}

/// Good Gram points delimiting `blocks` consecutive Gram blocks starting
/// at `from` and moving in direction `step`; stops early at the start point.
fn block_ends(from: Anchor, blocks: usize, step: i64) -> Anchor {
    let mut current = from;
    for _ in 0..blocks {
        if current.index < 0 {
            break;
        }
        current = nearest_good(current.index + step, step);
    }
    current
}

fn scan(t1: f64, t2: f64) -> Result<Scan> {
    if !(t1 >= zeta::MIN_HEIGHT) || !(t2 >= t1) || t2 > MAX_HEIGHT {
        return Err(Error::Domain(format!(
            "zero scan needs {} <= t1 <= t2 <= {MAX_HEIGHT:e}, got [{t1}, {t2}]",
            zeta::MIN_HEIGHT
        )));
    }
    // lower certification point: a good Gram point at or below t1 preceded
    // by a Rosser window, or the start point t = 10 when that window would
    // reach below g_0 (no zeros lie under 14)
    let low = nearest_good(gram_index(t1), -1);
    let window_start = block_ends(low, turing_blocks(low.t.max(20.0)), -1);
    let from_start = window_start.index < 0;
    let low = if from_start { Anchor::at(-1) } else { low };
    let first = if from_start { low } else { window_start };
    // upper certification point: a good Gram point above t2 followed by a
    // Rosser window
    let high = nearest_good(gram_index(t2) + 1, 1);
    let mut window_end = high;
    for _ in 0..turing_blocks(high.t) {
        window_end = nearest_good(window_end.index + 1, 1);
    }

    let indices: Vec<i64> = (first.index.max(-1) + 1..window_end.index).filter(|&i| i >= 0).collect();
    let anchors: Vec<Anchor> = indices.par_iter().map(|&i| Anchor::at(i)).collect();
    let mut all = Vec::with_capacity(anchors.len() + 2);
    all.push(first);
    all.extend(anchors);
    all.push(window_end);

    // good points split the range into Gram blocks
    let cuts: Vec<usize> = (0..all.len()).filter(|&i| all[i].is_good()).collect();
    let blocks: Vec<Block> = cuts
        .par_windows(2)
        .map(|w| Block::resolve(all[w[0]], &all[w[0] + 1..w[1]], all[w[1]]))
        .collect::<Result<_>>()?;

    // Turing: Rosser windows on both sides pin N(g_low) >= low+1 and
    // N(g_high) <= high+1; finding high-low changes in between makes both
    // equalities and every bracket a simple zero.
    for b in &blocks {
        let in_window = (!from_start && b.end.index <= low.index) || b.start.index >= high.index;
        if in_window && b.brackets.len() != b.expected() {
            return Err(Error::Certification {
                near: b.start.t,
                reason: format!(
                    "Rosser's rule fails on [{}, {}]: {} sign changes for a block of length {}",
                    b.start.t,
                    b.end.t,
                    b.brackets.len(),
                    b.expected()
                ),
            });
        }
    }
    let inner: Vec<Bracket> = blocks
        .iter()
        .filter(|b| b.start.index >= low.index && b.end.index <= high.index)
        .flat_map(|b| b.brackets.iter().copied())
        .collect();
    let expected = (high.index - low.index) as usize;
    if inner.len() != expected {
        return Err(Error::Certification {
            near: high.t,
            reason: format!(
                "found {} sign changes on [{}, {}] but Turing's bound allows exactly {expected}",
                inner.len(),
                low.t,
                high.t
            ),
        });
    }
    let base = (low.index + 1) as usize;
    Ok(Scan { base, start: low.t, brackets: inner })
}

/// The main terms `(T/2π) log T - (1 + log 2π) T/(2π)` of N(T).
pub fn main_terms(t: f64) -> f64 {
    t / (2.0 * PI) * t.ln() - (1.0 + (2.0 * PI).ln()) * t / (2.0 * PI)
}

/// Upper bound for |S(T)| with S(T) = N(T) - θ(T)/π - 1, valid for T >= e
/// (Trudgian's explicit bound).
pub fn s_bound(t: f64) -> f64 {
    let t = t.max(std::f64::consts::E);
    0.112 * t.ln() + 0.278 * t.ln().ln() + 2.51
}

/// Upper bound on the number of ordinates in [a, b].
pub fn count_bound(a: f64, b: f64) -> f64 {
    let a = a.max(ZERO_FREE_BELOW);
    if b <= a {
        return 0.0;
    }
    let smooth = |t: f64| theta_unchecked(t) / PI;
    // one extra for a zero sitting exactly at a
    (smooth(b) - smooth(a) + 2.0 * s_bound(b) + 1.0).max(0.0)
}

/// Certified count N(T) of zeros with ordinate in (0, T].
pub fn count_zeros(t: f64) -> Result<usize> {
    let s = scan(t, t)?;
    let mut n = s.base;
    for b in &s.brackets {
        // a bracket straddling t counts when its zero lies below t
        if b.b <= t || (b.a < t && !same_sign(z_unchecked(t), b.za)) {
            n += 1;
        }
    }
    debug_assert!(s.start <= t);
    Ok(n)
}

/// Root of Z in a sign-change bracket by the Illinois variant of regula falsi.
fn refine(br: Bracket, tol: f64) -> f64 {
    let (mut a, mut b) = (br.a, br.b);
    let (mut fa, mut fb) = (br.za, z_unchecked(br.b));
    if fa == 0.0 {
        return a;
    }
    let mut side = 0;
    for _ in 0..200 {
        if (b - a).abs() <= 2.0 * tol {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !(c > a.min(b) && c < a.max(b)) {
            c = 0.5 * (a + b);
        }
        let fc = z_unchecked(c);
        if fc == 0.0 {
            return c;
        }
        if same_sign(fc, fb) {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        // bisection guard keeps the bracket shrinking geometrically
        if side != 0 && (b - a).abs() > 0.5 * (br.b - br.a).abs() {
            let m = 0.5 * (a + b);
            let fm = z_unchecked(m);
            if same_sign(fm, fa) {
                a = m;
                fa = fm;
            } else {
                b = m;
                fb = fm;
            }
        }
    }
    0.5 * (a + b)
}

/// All zero ordinates in [t1, t2], each to within `precision`, certified
/// complete by Turing's method.
pub fn find_zeros(t1: f64, t2: f64, precision: f64) -> Result<ZeroTable> {
    if !(precision >= MIN_PRECISION) {
        return Err(Error::Parameter(format!("precision must be at least {MIN_PRECISION:e}, got {precision:e}")));
    }
    if !(t2 > t1) {
        return Err(Error::Domain(format!("empty range [{t1}, {t2}]")));
    }
    let s = scan(t1, t2)?;
    let mut ordinates: Vec<f64> =
        s.brackets.par_iter().filter(|b| b.b >= t1 && b.a <= t2).map(|&b| refine(b, 0.25 * precision)).collect();
    ordinates.retain(|&g| g >= t1 && g <= t2);
    let lower = if t1 <= ZERO_FREE_BELOW { 0.0 } else { t1 };
    ZeroTable::new(ordinates, lower, t2, precision, Provenance::Computed)
}

/// Check a table's count against N(height), and N(lower) when it starts
/// above the first zero.
pub fn verify_table(table: &ZeroTable) -> Result<usize> {
    let top = count_zeros(table.height())?;
    let bottom = if table.lower() > 0.0 { count_zeros(table.lower())? } else { 0 };
    let expected = top - bottom;
    if table.len() != expected {
        return Err(Error::Certification {
            near: table.height(),
            reason: format!(
                "table holds {} ordinates on ({}, {}] but the certified count is {expected}",
                table.len(),
                table.lower(),
                table.height()
            ),
        });
    }
    Ok(top)
}

/// Directory for cached tables: `$MESOSZETA_DATA`, else `./data`.
pub fn data_dir() -> PathBuf {
    env::var_os(DATA_DIR_VAR).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("data"))
}

fn cache_name(height: f64) -> String {
    format!("zeros_{height}.txt")
}

/// Cached heights in `dir` that reach `height`, smallest first.
fn cached_heights(dir: &Path, height: f64) -> Vec<f64> {
    let Ok(entries) = std::fs::read_dir(dir) else { return Vec::new() };
    let mut hs: Vec<f64> = entries
        .filter_map(|e| e.ok()?.file_name().to_str()?.strip_prefix("zeros_")?.strip_suffix(".txt")?.parse().ok())
        .filter(|&h: &f64| h >= height)
        .collect();
    hs.sort_by(f64::total_cmp);
    hs
}

/// Zeros on (0, height], from the smallest cached table in `dir` that
/// covers it, otherwise computed and stored. A cached table may reach
/// beyond `height`.
pub fn cached_zeros(dir: &Path, height: f64) -> Result<ZeroTable> {
    for h in cached_heights(dir, height) {
        let t = load_zero_table(&dir.join(cache_name(h)), None, None)?;
        if t.lower() == 0.0 && t.height() >= height {
            return Ok(t);
        }
    }
    let path = dir.join(cache_name(height));
    let t = find_zeros(zeta::MIN_HEIGHT, height, MIN_PRECISION)?;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    save_zero_table(&t, &path)?;
    Ok(t)
}
