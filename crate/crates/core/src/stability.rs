//! Applicable states, the singularity (spinodal) curve and the critical point.

use crate::eos::{Branch, Mslv};
use crate::error::{MslvError, Result};
use crate::numerics::{newton_nd, Jacobian, NewtonOptions};

/// The two applicability inequalities evaluated at one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApplicabilityReport {
    /// `phi_vv < 0`.
    pub mechanical: bool,
    /// `T phi_TT + 2 phi_T > 0`.
    pub caloric: bool,
    pub phi_vv_value: f64,
    pub caloric_value: f64,
}

impl ApplicabilityReport {
    pub fn applicable(&self) -> bool {
        self.mechanical && self.caloric
    }
}

/// Both closed-form roots `t = sqrt(T / T_c)` of `phi_vv(v, T) = 0` at fixed `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinodalRoots {
    pub t1: f64,
    pub t2: f64,
    /// `t1 > 0` and `f'(v) < 0`.
    pub t1_valid: bool,
    pub t2_valid: bool,
}

impl SpinodalRoots {
    /// Spinodal temperature from `t1`, if valid.
    pub fn temperature(&self, t_c: f64) -> Option<f64> {
        self.t1_valid.then_some(self.t1 * self.t1 * t_c)
    }
}

/// Closed-form roots of `T_c t² f' + a (1 + m (1 - t))² g' = 0`.
///
/// A real root needs `f' < 0` and `g' > 0`; otherwise both roots come back
/// NaN and flagged invalid.
pub fn spinodal_closed_form(f_prime: f64, g_prime: f64, a: f64, m: f64, t_c: f64) -> SpinodalRoots {
    if !(f_prime < 0.0 && g_prime > 0.0) {
        return SpinodalRoots { t1: f64::NAN, t2: f64::NAN, t1_valid: false, t2_valid: false };
    }
    let sg = (a * g_prime).sqrt();
    let sf = (-t_c * f_prime).sqrt();
    let t1 = (1.0 + m) * sg / (sf + m * sg);
    let t2 = (1.0 + m) * sg / (m * sg - sf);
    SpinodalRoots { t1, t2, t1_valid: t1 > 0.0 && t1.is_finite(), t2_valid: t2 > 0.0 && t2.is_finite() }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPoint {
    pub v: f64,
    pub t: f64,
    pub p: f64,
    pub branch: Branch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub v: f64,
    pub t: f64,
    pub p: f64,
    /// `phi_vv` and `phi_vvv` at the solution.
    pub residuals: [f64; 2],
    pub iterations: usize,
}

/// How sample volumes are spread over a range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

impl Spacing {
    pub fn points(self, lo: f64, hi: f64, n: usize) -> Vec<f64> {
        if n == 1 {
            return vec![lo];
        }
        let k = (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    return hi;
                }
                let s = i as f64 / k;
                match self {
                    Spacing::Linear => lo + (hi - lo) * s,
                    Spacing::Log => (lo.ln() + (hi.ln() - lo.ln()) * s).exp(),
                }
            })
            .collect()
    }
}

impl Mslv {
    pub fn applicability(&self, v: f64, t: f64) -> Result<ApplicabilityReport> {
        let b = self.potential_bundle(v, t)?;
        let caloric_value = b.caloric_value(t);
        if cfg!(debug_assertions) {
            let from_p = self.pressure_dv(v, t)? / (self.r * t);
            let size = self.repulsive_terms(v)?.f_prime.abs() / self.r;
            debug_assert!((b.phi_vv - from_p).abs() <= 1e-10 * size, "phi_vv and p_v disagree at ({v}, {t})");
            let direct = self.caloric_condition(v, t)?;
            debug_assert!((caloric_value - direct).abs() <= 1e-10 * direct.abs().max(1.0));
        }
        Ok(ApplicabilityReport {
            mechanical: b.phi_vv < 0.0,
            caloric: caloric_value > 0.0,
            phi_vv_value: b.phi_vv,
            caloric_value,
        })
    }

    /// Closed-form spinodal roots at `v`.
    pub fn spinodal_sqrt_t(&self, v: f64) -> Result<SpinodalRoots> {
        self.branch_of(v)?;
        let fp = self.repulsive_terms(v)?.f_prime;
        let gp = self.attractive_geometry(v)?.g_prime;
        Ok(spinodal_closed_form(fp, gp, self.a, self.m, self.t_c))
    }

    /// Spinodal temperature at `v`, `None` where no real root exists.
    pub fn spinodal_temperature(&self, v: f64) -> Result<Option<f64>> {
        Ok(self.spinodal_sqrt_t(v)?.temperature(self.t_c))
    }

    /// Samples the singularity curve over `[v_min, v_max]` on one branch.
    ///
    /// Volumes without a real root are skipped, so the result may be empty.
    pub fn trace_spinodal(
        &self,
        branch: Branch,
        v_min: f64,
        v_max: f64,
        n_points: usize,
        spacing: Spacing,
    ) -> Result<Vec<SingularPoint>> {
        let (lo, hi) = self.branch_interval(branch);
        if !(v_min > lo && v_max < hi && v_min <= v_max) || n_points == 0 {
            return Err(MslvError::Domain(format!(
                "volume range [{v_min}, {v_max}] not inside the {branch:?} branch ({lo}, {hi})"
            )));
        }
        let mut out = Vec::with_capacity(n_points);
        for v in spacing.points(v_min, v_max, n_points) {
            if let Some(t) = self.spinodal_temperature(v)? {
                out.push(SingularPoint { v, t, p: self.pressure(v, t)?, branch });
            }
        }
        Ok(out)
    }

    /// Solves `phi_vv = phi_vvv = 0` by damped Newton in `(v, T)`.
    ///
    /// Without a guess the search starts from the critical constants of the
    /// instance's unit system.
    pub fn critical_point(&self, guess: Option<(f64, f64)>) -> Result<CriticalPoint> {
        let (v0, t0) = guess.unwrap_or((self.scale().v_c, self.t_c));
        if self.branch_of(v0)? != Branch::Fluid {
            return Err(MslvError::Domain(format!("critical-point guess v = {v0} is not on the fluid branch")));
        }
        let residual = |x: &[f64]| {
            let b = self.potential_bundle(x[0], x[1])?;
            Ok(vec![b.phi_vv, b.phi_vvv])
        };
        let (lo, _) = self.branch_interval(Branch::Fluid);
        let opts = NewtonOptions::default().with_box(vec![lo, 0.0], vec![f64::INFINITY, f64::INFINITY]);
        let rep = newton_nd(residual, Jacobian::FiniteDifference, &[v0, t0], &opts)?;
        let (v, t) = (rep.solution[0], rep.solution[1]);
        let b = self.potential_bundle(v, t)?;
        Ok(CriticalPoint {
            v,
            t,
            p: self.pressure(v, t)?,
            residuals: [b.phi_vv, b.phi_vvv],
            iterations: rep.iterations,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gases;
    use crate::numerics::bracket_root;

    fn methane() -> Mslv {
        Mslv::reduced(&gases::methane_reduced()).unwrap()
    }

    #[test]
    fn supercritical_fluid_is_applicable() {
        let r = methane().applicability(3.0, 1.2).unwrap();
        assert!(r.mechanical && r.caloric && r.applicable());
    }

    #[test]
    fn loop_interior_is_not_applicable() {
        let r = methane().applicability(1.2, 0.8).unwrap();
        assert!(!r.mechanical);
        assert!(r.phi_vv_value > 0.0);
    }

    #[test]
    fn t1_matches_bisection_at_two() {
        let e = methane();
        let roots = e.spinodal_sqrt_t(2.0).unwrap();
        assert!(roots.t1_valid);
        let rep = bracket_root(|t| Ok(e.potential_bundle(2.0, t * t)?.phi_vv), 0.3, 1.0, 1e-15).unwrap();
        assert!((rep.solution - roots.t1).abs() < 1e-10);
        assert!(roots.t2 < 0.0 && !roots.t2_valid);
    }

    #[test]
    fn flat_repulsion_gives_upper_limit() {
        let r = spinodal_closed_form(-1e-30, 1.0, 1.0, 0.4, 1.0);
        assert!((r.t1 - 1.4 / 0.4).abs() < 1e-12);
        assert!(!spinodal_closed_form(0.0, 1.0, 1.0, 0.4, 1.0).t1_valid);
    }

    #[test]
    fn spinodal_trace_lies_on_singularity() {
        let e = methane();
        let pts = e.trace_spinodal(Branch::Fluid, 0.4, 20.0, 50, Spacing::Log).unwrap();
        assert_eq!(pts.len(), 50);
        for s in &pts {
            assert!(e.potential_bundle(s.v, s.t).unwrap().phi_vv.abs() < 1e-10);
            assert_eq!(s.p, e.pressure(s.v, s.t).unwrap());
        }
    }

    #[test]
    fn spinodal_range_must_sit_on_branch() {
        let e = methane();
        assert!(e.trace_spinodal(Branch::Solid, 0.31, 0.5, 10, Spacing::Linear).is_err());
    }

    #[test]
    fn critical_point_of_methane() {
        let e = methane();
        let cp = e.critical_point(None).unwrap();
        assert!(cp.residuals.iter().all(|r| r.abs() < 1e-10));
        let t1 = e.spinodal_sqrt_t(cp.v).unwrap().t1;
        assert!((t1 * t1 - cp.t).abs() < 1e-8);
        let other = e.critical_point(Some((1.2, 1.1))).unwrap();
        assert!((other.v - cp.v).abs() < 1e-8 && (other.t - cp.t).abs() < 1e-8);
    }

    #[test]
    fn spacing_endpoints_are_exact() {
        let pts = Spacing::Log.points(0.4, 30.0, 7);
        assert_eq!(pts[0], 0.4);
        assert_eq!(pts[6], 30.0);
        assert!(pts.windows(2).all(|w| w[1] > w[0]));
    }
}
