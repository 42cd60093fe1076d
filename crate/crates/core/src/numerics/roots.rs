use super::SolveReport;
use crate::error::{MslvError, Result};

const MAX_ITER: usize = 200;

/// Brent's method on a sign-changing bracket `[a, b]`.
///
/// Terminates when `|f(x)| <= tol` or the bracket has shrunk below
/// `tol * max(1, |x|)`. The returned root always lies inside the initial
/// bracket. Errors from `f` are propagated unchanged.
pub fn bracket_root<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<SolveReport<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    let done = |x: f64, fx: f64, iterations| SolveReport {
        solution: x,
        residual_norm: fx.abs(),
        iterations,
        converged: true,
        trace: None,
    };
    if fa == 0.0 {
        return Ok(done(a, fa, 0));
    }
    if fb == 0.0 {
        return Ok(done(b, fb, 0));
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(MslvError::NoBracket { a, b, fa, fb });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=MAX_ITER {
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
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol * b.abs().max(1.0);
        let xm = 0.5 * (c - b);
        if fb.abs() <= tol || xm.abs() <= tol1 || fb == 0.0 {
            return Ok(done(b, fb, iter));
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // Inverse quadratic interpolation, or secant when a == c.
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0)),
                    (qa - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b)?;
    }
    Err(MslvError::NoConvergence {
        iterations: MAX_ITER,
        residual: fb.abs(),
        last: vec![b],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two() {
        let r = bracket_root(|x| Ok(x * x - 2.0), 1.0, 2.0, 1e-12).unwrap();
        assert!((r.solution - std::f64::consts::SQRT_2).abs() < 1e-9);
        assert!(r.converged);
    }

    #[test]
    fn endpoint_root_returns_immediately() {
        let mut calls = 0;
        let r = bracket_root(
            |x| {
                calls += 1;
                Ok(x - 1.0)
            },
            1.0,
            3.0,
            1e-12,
        )
        .unwrap();
        assert_eq!(r.solution, 1.0);
        assert_eq!(r.iterations, 0);
        assert_eq!(calls, 2);
    }

    #[test]
    fn same_sign_is_no_bracket() {
        let err = bracket_root(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(err, MslvError::NoBracket { .. }));
    }

    #[test]
    fn stays_inside_bracket_for_steep_function() {
        let r = bracket_root(|x: f64| Ok((x - 0.3).powi(3) * 1e6 + 1e-3), 0.0, 1.0, 1e-14).unwrap();
        assert!((0.0..=1.0).contains(&r.solution));
        assert!((r.solution - (0.3 - 1e-3)).abs() < 1e-9);
    }
}
