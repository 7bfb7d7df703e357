//! Maximizers of the discrete quotient `N(u) / G(u)` over the free cells.
//!
//! For `p = 2` both forms are quadratic and the maximum is the top
//! eigenvalue of the pencil `(M, L)`, found by inverse iteration. For other
//! `p` a preconditioned ascent on the quotient is used; with unit step at
//! `p = 2` it coincides with one inverse iteration step.

use super::operator::{pcg, Ic0, RayleighProblem};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Relative eigen residual at which inverse iteration stops.
    pub tol: f64,
    pub max_iter: usize,
    pub inner_tol: f64,
    pub inner_max_iter: usize,
    /// Spectral shift `σ` (in units of the gradient-to-mass ratio); must stay
    /// below the smallest eigenvalue of `L` relative to `M`.
    pub shift: f64,
    /// Ascent stops when the quotient moves by less than `ascent_tol`
    /// (relative) over `ascent_window` steps.
    pub ascent_tol: f64,
    pub ascent_window: usize,
    pub ascent_max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-10,
            max_iter: 10_000,
            inner_tol: 1e-13,
            inner_max_iter: 20_000,
            shift: 0.0,
            ascent_tol: 1e-8,
            ascent_window: 50,
            ascent_max_iter: 20_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Maximizer {
    pub value: f64,
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub inner_iterations: usize,
    pub residual: f64,
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Sign-fixed so the entry of largest magnitude is positive, scaled to max 1.
pub fn canonical(mut x: Vec<f64>) -> Vec<f64> {
    let (mut m, mut s) = (0.0f64, 1.0);
    for &v in &x {
        if v.abs() > m {
            m = v.abs();
            s = v.signum();
        }
    }
    if m > 0.0 {
        x.iter_mut().for_each(|v| *v *= s / m);
    }
    x
}

/// Top eigenpair of `M x = c L x` with `M` diagonal and positive. Stops when
/// the relative residual drops below `tol`, or below the rounding floor of
/// applying `L` when that is larger (fine grids).
pub fn inverse_iteration(prob: &RayleighProblem, x0: Option<&[f64]>, opts: &SolverOptions) -> Result<Maximizer> {
    let n = prob.len();
    let lap = prob.laplacian();
    let m = prob.mass();
    let mut shifted = lap.clone();
    if opts.shift != 0.0 {
        for i in 0..n {
            for k in shifted.row_ptr[i]..shifted.row_ptr[i + 1] {
                if shifted.col[k] as usize == i {
                    shifted.val[k] -= opts.shift * m[i];
                }
            }
        }
    }
    let pre = Ic0::new(&shifted);
    let mut abs_lap = lap.clone();
    abs_lap.val.iter_mut().for_each(|v| *v = v.abs());
    let mut x: Vec<f64> = match x0 {
        Some(v) => v.to_vec(),
        None => vec![1.0; n],
    };
    let mut inner = 0;
    let mut lx = vec![0.0; n];
    let mut residual = f64::INFINITY;
    let mut value = 0.0;
    let mut y = x.clone();
    for it in 1..=opts.max_iter {
        let b: Vec<f64> = x.iter().zip(&m).map(|(v, w)| v * w).collect();
        let out = pcg(&shifted, &pre, &b, &mut y, opts.inner_tol, opts.inner_max_iter);
        inner += out.iterations;
        let s = norm(&y);
        if !s.is_finite() || s == 0.0 {
            return Err(Error::NoConvergence { iterations: it, residual, estimate: value, iterate: x });
        }
        x.iter_mut().zip(&y).for_each(|(xi, yi)| *xi = yi / s);
        lap.matvec(&x, &mut lx);
        let xmx: f64 = x.iter().zip(&m).map(|(v, w)| w * v * v).sum();
        let xlx: f64 = x.iter().zip(&lx).map(|(a, b)| a * b).sum();
        value = xmx / xlx;
        let mx: Vec<f64> = x.iter().zip(&m).map(|(v, w)| v * w).collect();
        let r: f64 = mx.iter().zip(&lx).map(|(a, b)| (a - value * b).powi(2)).sum::<f64>().sqrt();
        residual = r / norm(&mx);
        // rounding floor of `L x`: entrywise |L||x| against |L x|
        let absx: Vec<f64> = x.iter().map(|v| v.abs()).collect();
        abs_lap.matvec(&absx, &mut lx);
        let floor = 8.0 * f64::EPSILON * value * norm(&lx) / norm(&mx);
        // warm start for the next solve: y ≈ x·value / (1 − σ·value)
        let scale = value / (1.0 - opts.shift * value);
        y.iter_mut().zip(&x).for_each(|(yi, xi)| *yi = xi * scale);
        if residual < opts.tol.max(floor) {
            return Ok(Maximizer { value, vector: canonical(x), iterations: it, inner_iterations: inner, residual });
        }
    }
    Err(Error::NoConvergence { iterations: opts.max_iter, residual, estimate: value, iterate: x })
}

/// Quotient and its gradient pieces at `x`.
struct Eval {
    n: f64,
    g: f64,
}

fn eval(prob: &RayleighProblem, x: &[f64], p: f64) -> Eval {
    Eval { n: prob.numerator(x, p), g: prob.gradient_energy(x, p) }
}

fn normalize(prob: &RayleighProblem, x: &mut [f64], p: f64) {
    let g = prob.gradient_energy(x, p);
    let s = g.powf(-1.0 / p);
    x.iter_mut().for_each(|v| *v *= s);
}

/// Ascent on `N/G` for general `p`, started from `x0`. Each direction solves
/// with the Hessian-like matrix of `Q·G` (face weights `(g² + δ²)^{(p−2)/2}`),
/// then a backtracking search keeps the quotient increasing.
pub fn ascent(prob: &RayleighProblem, p: f64, x0: &[f64], opts: &SolverOptions) -> Result<Maximizer> {
    let n = prob.len();
    let h = prob.h;
    let vol = prob.vol;
    let mut x = x0.to_vec();
    normalize(prob, &mut x, p);
    let mut q = eval(prob, &x, p).n;
    let mut history = vec![q];
    let mut step: f64 = 1.0;
    let mut inner = 0;
    let window = opts.ascent_window.max(1);
    let rel_change = |hist: &[f64]| {
        let k = hist.len() - 1;
        let j = k.saturating_sub(window);
        (hist[k] - hist[j]).abs() / hist[k].abs().max(f64::MIN_POSITIVE)
    };
    for it in 1..=opts.ascent_max_iter {
        // gradients of N and G at x (G = 1 after normalization)
        let mut grad_n: Vec<f64> =
            x.iter().zip(&prob.weight).map(|(v, w)| vol * p * w * v.abs().powf(p - 1.0) * v.signum()).collect();
        let mut grad_g = vec![0.0; n];
        let gmax = prob
            .edges
            .iter()
            .map(|&(a, b)| ((x[a as usize] - x[b as usize]) / h).abs())
            .chain(x.iter().zip(&prob.anchors).filter(|(_, &k)| k > 0).map(|(v, _)| (v / h).abs()))
            .fold(0.0, f64::max);
        let delta2 = (1e-3 * gmax).powi(2).max(f64::MIN_POSITIVE);
        let c = q * p * (p - 1.0) * vol / (h * h);
        let mut face_w = Vec::with_capacity(prob.edges.len());
        for &(a, b) in &prob.edges {
            let g = (x[a as usize] - x[b as usize]) / h;
            let t = vol * p * g.abs().powf(p - 1.0) * g.signum() / h;
            grad_g[a as usize] += t;
            grad_g[b as usize] -= t;
            face_w.push(c * (g * g + delta2).powf((p - 2.0) / 2.0));
        }
        let mut anchor_w = vec![0.0; n];
        for i in 0..n {
            let k = prob.anchors[i] as f64;
            if k > 0.0 {
                let g = x[i] / h;
                grad_g[i] += k * vol * p * g.abs().powf(p - 1.0) * g.signum() / h;
                anchor_w[i] = k * c * (g * g + delta2).powf((p - 2.0) / 2.0);
            }
        }
        for i in 0..n {
            grad_n[i] -= q * grad_g[i];
        }
        let a = prob.stiffness(&face_w, &anchor_w);
        let pre = Ic0::new(&a);
        let mut d = vec![0.0; n];
        inner += pcg(&a, &pre, &grad_n, &mut d, 1e-10, opts.inner_max_iter).iterations;

        let mut t = (2.0 * step).min(1.0);
        let mut accepted = None;
        for _ in 0..60 {
            let mut y: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + t * di).collect();
            let e = eval(prob, &y, p);
            if e.g > 0.0 && e.n / e.g > q {
                normalize(prob, &mut y, p);
                accepted = Some((y, e.n / e.g));
                break;
            }
            t *= 0.5;
        }
        let Some((y, qn)) = accepted else {
            // no increase along the direction: numerically at a critical point
            let k = history.len() - 1;
            let residual = if k > 0 { (history[k] - history[k - 1]).abs() / q } else { 0.0 };
            return Ok(Maximizer { value: q, vector: canonical(x), iterations: it, inner_iterations: inner, residual });
        };
        step = t;
        x = y;
        q = qn;
        history.push(q);
        if history.len() > window {
            let r = rel_change(&history);
            if r < opts.ascent_tol {
                return Ok(Maximizer { value: q, vector: canonical(x), iterations: it, inner_iterations: inner, residual: r });
            }
        }
    }
    let residual = rel_change(&history);
    Err(Error::NoConvergence { iterations: opts.ascent_max_iter, residual, estimate: q, iterate: x })
}
