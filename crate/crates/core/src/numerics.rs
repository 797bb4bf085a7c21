//! Small numerical kernels shared across modules: Cauchy-integral
//! differentiation, argument-principle winding numbers, Richardson
//! extrapolation, golden-section search and evaluation grids.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperbolic::DiscPoint;

pub fn circle_point(center: Complex64, radius: f64, k: usize, n: usize) -> Complex64 {
    center + Complex64::from_polar(radius, TAU * k as f64 / n as f64)
}

/// `f'(center)` from the trapezoid rule applied to the Cauchy integral over
/// the circle `|ζ − center| = radius`. Exponentially accurate when `f` is
/// holomorphic on a larger disc.
pub fn cauchy_derivative<F>(f: F, center: Complex64, radius: f64, nodes: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let f0 = f(center)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..nodes {
        let unit = Complex64::from_polar(1.0, TAU * k as f64 / nodes as f64);
        acc += (f(center + radius * unit)? - f0) * unit.conj();
    }
    Ok(acc / (nodes as f64 * radius))
}

/// Net winding of a closed sampled curve around the origin, and the largest
/// single-step argument jump (a resolution diagnostic).
pub fn winding(values: &[Complex64]) -> (i64, f64) {
    let mut total = 0.0;
    let mut max_jump: f64 = 0.0;
    for (k, v) in values.iter().enumerate() {
        let next = values[(k + 1) % values.len()];
        let step = (next / v).arg();
        max_jump = max_jump.max(step.abs());
        total += step;
    }
    ((total / TAU).round() as i64, max_jump)
}

/// Evaluation grid of the disc: `min(8, n)` radii `1 − 0.9·2⁻ᵏ` times
/// staggered angles, truncated to `n` points.
pub fn radial_angular_grid(n: usize) -> Vec<DiscPoint> {
    if n == 0 {
        return Vec::new();
    }
    let radii = n.min(8);
    let angles = n.div_ceil(radii);
    let mut out = Vec::with_capacity(n);
    for k in 0..radii {
        let r = 1.0 - 0.9 * 0.5f64.powi(k as i32);
        for j in 0..angles {
            let theta = TAU * (j as f64 + 0.5) / angles as f64 + 0.37 * k as f64;
            out.push(DiscPoint::new(Complex64::from_polar(r, theta)).expect("grid radius < 1"));
        }
    }
    out.truncate(n);
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct Extrapolation {
    pub limit: Complex64,
    pub error_estimate: f64,
    /// Diagonal of the Richardson table, one entry per input value.
    pub estimates: Vec<Complex64>,
}

/// Richardson extrapolation of `values[k] ≈ L + Σⱼ aⱼ δₖʲ` with `δₖ ∝ 2⁻ᵏ`.
/// The error estimate is the spread of the last three diagonal entries.
pub fn richardson(values: &[Complex64], max_order: usize) -> Result<Extrapolation> {
    if values.is_empty() {
        return Err(Error::InvalidParameter("empty sequence".into()));
    }
    let mut prev: Vec<Complex64> = Vec::new();
    let mut estimates = Vec::with_capacity(values.len());
    for (k, &v) in values.iter().enumerate() {
        let levels = k.min(max_order);
        let mut row = vec![v];
        for j in 1..=levels {
            let factor = 2f64.powi(j as i32) - 1.0;
            let next = row[j - 1] + (row[j - 1] - prev[j - 1]) / factor;
            row.push(next);
        }
        estimates.push(*row.last().unwrap());
        prev = row;
    }
    let tail = &estimates[estimates.len().saturating_sub(3)..];
    let mut spread: f64 = 0.0;
    for a in tail {
        for b in tail {
            spread = spread.max((a - b).norm());
        }
    }
    if estimates.len() < 3 {
        spread = f64::INFINITY;
    }
    Ok(Extrapolation {
        limit: *estimates.last().unwrap(),
        error_estimate: spread,
        estimates,
    })
}

/// Maximizes a unimodal `f` on `[a, b]` until the bracket is shorter than `tol`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > tol {
        if f1 >= f2 {
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
    let x = 0.5 * (a + b);
    let fx = f(x);
    [(x1, f1), (x2, f2), (x, fx)]
        .into_iter()
        .max_by(|p, q| p.1.total_cmp(&q.1))
        .unwrap()
}
