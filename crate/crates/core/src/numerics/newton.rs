use nalgebra::{DMatrix, DVector};

use super::{SolveReport, DEFAULT_SOLVER_TOL};
use crate::error::{MslvError, Result};

/// How the Jacobian of a Newton system is obtained.
pub enum Jacobian<'a> {
    Analytic(&'a dyn Fn(&[f64]) -> Result<DMatrix<f64>>),
    /// Central differences, one-sided next to a box face.
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonOptions {
    /// Convergence threshold on the Euclidean residual norm.
    pub tol: f64,
    pub max_iter: usize,
    /// Step halvings allowed per iteration before giving up.
    pub max_halvings: usize,
    /// Open box the iterates are confined to; empty means unbounded.
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub keep_trace: bool,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_SOLVER_TOL,
            max_iter: 100,
            max_halvings: 30,
            lower: Vec::new(),
            upper: Vec::new(),
            keep_trace: false,
        }
    }
}

impl NewtonOptions {
    pub fn with_box(mut self, lower: Vec<f64>, upper: Vec<f64>) -> Self {
        self.lower = lower;
        self.upper = upper;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    fn bounds(&self, i: usize) -> (f64, f64) {
        (
            self.lower.get(i).copied().unwrap_or(f64::NEG_INFINITY),
            self.upper.get(i).copied().unwrap_or(f64::INFINITY),
        )
    }
}

fn norm(r: &[f64]) -> f64 {
    r.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn fd_jacobian<F>(residual: &F, x: &[f64], r0: &[f64], opts: &NewtonOptions) -> Result<DMatrix<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let n = x.len();
    let m = r0.len();
    let mut jac = DMatrix::zeros(m, n);
    let mut xp = x.to_vec();
    for j in 0..n {
        let (lo, hi) = opts.bounds(j);
        let h = 1e-7 * x[j].abs().max(1.0);
        let fwd_ok = x[j] + h < hi;
        let bwd_ok = x[j] - h > lo;
        let col: Vec<f64> = if fwd_ok && bwd_ok {
            xp[j] = x[j] + h;
            let rp = residual(&xp)?;
            xp[j] = x[j] - h;
            let rm = residual(&xp)?;
            rp.iter().zip(&rm).map(|(a, b)| (a - b) / (2.0 * h)).collect()
        } else {
            let hs = if fwd_ok { h } else { -h };
            xp[j] = x[j] + hs;
            let rp = residual(&xp)?;
            rp.iter().zip(r0).map(|(a, b)| (a - b) / hs).collect()
        };
        xp[j] = x[j];
        for (i, v) in col.into_iter().enumerate() {
            jac[(i, j)] = v;
        }
    }
    Ok(jac)
}

/// Damped Newton iteration for a square nonlinear system.
///
/// Each full step is first shortened so the iterate stays strictly inside the
/// box, then halved until the residual norm decreases. Accepted steps are
/// therefore monotone in the residual norm. A residual evaluation that fails
/// (for example a domain error) counts as a non-decrease.
pub fn newton_nd<F>(
    residual: F,
    jacobian: Jacobian<'_>,
    x0: &[f64],
    opts: &NewtonOptions,
) -> Result<SolveReport<Vec<f64>>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    for (i, &xi) in x0.iter().enumerate() {
        let (lo, hi) = opts.bounds(i);
        if !(xi > lo && xi < hi) || !xi.is_finite() {
            return Err(MslvError::Domain(format!(
                "initial iterate component {i} = {xi} outside box ({lo}, {hi})"
            )));
        }
    }

    let mut x = x0.to_vec();
    let mut r = residual(&x)?;
    if r.len() != x.len() {
        return Err(MslvError::Domain(format!(
            "system is not square: {} unknowns, {} residuals",
            x.len(),
            r.len()
        )));
    }
    let mut rn = norm(&r);
    let mut trace = opts.keep_trace.then(|| vec![x.clone()]);

    for iter in 0..=opts.max_iter {
        if rn < opts.tol {
            return Ok(SolveReport {
                solution: x,
                residual_norm: rn,
                iterations: iter,
                converged: true,
                trace,
            });
        }
        if iter == opts.max_iter {
            break;
        }

        let jac = match &jacobian {
            Jacobian::Analytic(j) => j(&x)?,
            Jacobian::FiniteDifference => fd_jacobian(&residual, &x, &r, opts)?,
        };
        let rhs = DVector::from_iterator(r.len(), r.iter().map(|v| -v));
        let step = jac
            .lu()
            .solve(&rhs)
            .filter(|s| s.iter().all(|v| v.is_finite()))
            .ok_or_else(|| MslvError::SingularJacobian(x.clone()))?;

        // Fraction-to-boundary rule keeps the iterate inside the open box.
        let mut alpha: f64 = 1.0;
        for (i, (&xi, &si)) in x.iter().zip(step.iter()).enumerate() {
            let (lo, hi) = opts.bounds(i);
            if si > 0.0 && hi.is_finite() {
                alpha = alpha.min(0.99 * (hi - xi) / si);
            } else if si < 0.0 && lo.is_finite() {
                alpha = alpha.min(0.99 * (lo - xi) / si);
            }
        }

        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, si)| xi + alpha * si).collect();
            if let Ok(rt) = residual(&trial) {
                let tn = norm(&rt);
                if tn.is_finite() && tn < rn {
                    accepted = Some((trial, rt, tn));
                    break;
                }
            }
            alpha *= 0.5;
        }
        match accepted {
            Some((xt, rt, tn)) => {
                x = xt;
                r = rt;
                rn = tn;
                if let Some(t) = trace.as_mut() {
                    t.push(x.clone());
                }
            }
            None => {
                return Err(MslvError::NoConvergence {
                    iterations: iter + 1,
                    residual: rn,
                    last: x,
                })
            }
        }
    }
    Err(MslvError::NoConvergence {
        iterations: opts.max_iter,
        residual: rn,
        last: x,
    })
}
