//! Scalar root finding and 1-D minimization used by the solvers.

use crate::error::{Error, Result};

const MAX_BRENT_ITER: usize = 200;

/// Result of a bracketed root search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub iterations: usize,
}

/// Brent's method on a sign-changing bracket `[a, b]`.
///
/// Stops when the bracket half-width falls below `rel_tol·|x| + 4ε|x|` (with a
/// tiny absolute floor) or an exact zero is hit.
pub fn brent<F>(mut f: F, a: f64, b: f64, rel_tol: f64) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(Root { x: a, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, iterations: 0 });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NotBracketed { lo: a, hi: b });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for iter in 1..=MAX_BRENT_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * rel_tol * b.abs() + f64::MIN_POSITIVE;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(Root { x: b, iterations: iter });
        }

        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                // secant
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                // inverse quadratic interpolation
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Err(Error::NoConvergence(MAX_BRENT_ITER))
}

/// Golden-section search for a local minimum of `f` on `[a, b]`.
///
/// Returns `(x, f(x))` for the best point seen after `iterations` reductions.
pub fn golden_section_min<F>(mut f: F, a: f64, b: f64, iterations: usize) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iterations {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Sign-change roots of `f` found by sampling `n` uniform points on `[a, b]`
/// and refining every crossing with [`brent`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SignChangeScan {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub roots: Vec<f64>,
    pub brackets: usize,
    pub iterations: usize,
}

pub fn scan_sign_changes<F>(mut f: F, a: f64, b: f64, n: usize, rel_tol: f64) -> Result<SignChangeScan>
where
    F: FnMut(f64) -> f64,
{
    let grid: Vec<f64> = linspace(a, b, n).collect();
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(if grid[i].is_finite() { "scan value" } else { "scan grid" }));
    }
    let mut scan = SignChangeScan {
        grid,
        values,
        ..Default::default()
    };
    for i in 0..scan.grid.len() - 1 {
        let (v0, v1) = (scan.values[i], scan.values[i + 1]);
        if v0 == 0.0 && i > 0 && scan.values[i - 1] * v1 < 0.0 {
            scan.roots.push(scan.grid[i]);
        } else if v0 * v1 < 0.0 {
            scan.brackets += 1;
            let root = brent(&mut f, scan.grid[i], scan.grid[i + 1], rel_tol)?;
            scan.iterations += root.iterations;
            scan.roots.push(root.x);
        }
    }
    Ok(scan)
}

/// Uniform grid of `n ≥ 2` points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    let n = n.max(2);
    let step = (b - a) / (n - 1) as f64;
    (0..n).map(move |i| if i == n - 1 { b } else { a + step * i as f64 })
}
