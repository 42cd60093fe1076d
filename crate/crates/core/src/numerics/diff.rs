use crate::error::{MslvError, Result};

/// Derivative order for central differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdOrder {
    First,
    Second,
}

fn base_step(x: f64, order: FdOrder, scale: f64) -> f64 {
    let rel = match order {
        FdOrder::First => 1e-6,
        FdOrder::Second => 1e-4,
    };
    scale * x.abs().max(1.0) * rel
}

fn central<F>(f: &mut F, x: f64, h: f64, order: FdOrder) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let fp = f(x + h)?;
    let fm = f(x - h)?;
    Ok(match order {
        FdOrder::First => (fp - fm) / (2.0 * h),
        FdOrder::Second => {
            let f0 = f(x)?;
            (fp - 2.0 * f0 + fm) / (h * h)
        }
    })
}

/// Central finite-difference derivative of `f` at `x`.
///
/// The step is `scale * max(1, |x|) * 1e-6` for first derivatives and
/// `... * 1e-4` for second derivatives. Pass `scale < 1` to keep the stencil
/// clear of a nearby singularity.
pub fn fd_derivative<F>(mut f: F, x: f64, order: FdOrder, scale: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(scale > 0.0) {
        return Err(MslvError::Domain(format!("finite-difference scale must be positive, got {scale}")));
    }
    central(&mut f, x, base_step(x, order, scale), order)
}

/// One Richardson extrapolation on top of [`fd_derivative`]: fourth-order
/// accurate, at the cost of twice the evaluations.
pub fn fd_derivative_richardson<F>(mut f: F, x: f64, order: FdOrder, scale: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(scale > 0.0) {
        return Err(MslvError::Domain(format!("finite-difference scale must be positive, got {scale}")));
    }
    let h = base_step(x, order, scale);
    let coarse = central(&mut f, x, h, order)?;
    let fine = central(&mut f, x, 0.5 * h, order)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_first_derivative() {
        let d = fd_derivative(|x| Ok(x * x * x), 2.0, FdOrder::First, 1.0).unwrap();
        assert!((d - 12.0).abs() / 12.0 < 1e-6);
    }

    #[test]
    fn log_second_derivative() {
        let d = fd_derivative(|x: f64| Ok(x.ln()), 1.0, FdOrder::Second, 1.0).unwrap();
        assert!((d + 1.0).abs() < 1e-4);
    }

    #[test]
    fn richardson_tightens_the_estimate() {
        let plain = fd_derivative(|x: f64| Ok(x.exp()), 0.5, FdOrder::Second, 10.0).unwrap();
        let rich = fd_derivative_richardson(|x: f64| Ok(x.exp()), 0.5, FdOrder::Second, 10.0).unwrap();
        let exact = 0.5f64.exp();
        assert!((rich - exact).abs() < (plain - exact).abs());
    }

    #[test]
    fn domain_errors_propagate() {
        let err = fd_derivative(
            |x: f64| if x > 0.0 { Ok(x.ln()) } else { Err(MslvError::Domain("ln".into())) },
            0.0,
            FdOrder::First,
            1.0,
        );
        assert!(err.is_err());
    }
}
