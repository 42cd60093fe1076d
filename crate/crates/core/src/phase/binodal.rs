use super::equilibrium::ACCEPT_TOL;
use super::{EquilibriumPoint, Phase, PhasePair, PhaseSolver, CRITICAL_GAP};
use crate::eos::Branch;
use crate::error::{MslvError, Result};
use crate::numerics::{bracket_root, newton_nd, Jacobian, NewtonOptions};
use crate::stability::CriticalPoint;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriplePoint {
    pub t: f64,
    pub p: f64,
    pub v_s: f64,
    pub v_l: f64,
    pub v_v: f64,
    /// Scaled pressure differences (s-l, l-v) and Gibbs differences (s-l, l-v).
    pub residuals: [f64; 4],
}

/// How one end of a traced curve came about.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Terminus {
    CriticalPoint(CriticalPoint),
    TriplePoint(TriplePoint),
    RangeEnd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinodalCurve {
    pub pair: PhasePair,
    /// Ordered by increasing temperature.
    pub points: Vec<EquilibriumPoint>,
    pub start: Terminus,
    pub end: Terminus,
}

fn lerp(x0: f64, y0: f64, x1: f64, y1: f64, x: f64) -> f64 {
    if x1 == x0 {
        y1
    } else {
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

impl PhaseSolver<'_> {
    /// Continuation guess for temperature `t` from the already solved points.
    fn predict(points: &[EquilibriumPoint], t: f64) -> Option<(f64, f64)> {
        match points {
            [] => None,
            [a] => Some((a.v1, a.v2)),
            [.., a, b] => Some((lerp(a.t, a.v1, b.t, b.v1, t), lerp(a.t, a.v2, b.t, b.v2, t))),
        }
    }

    /// Traces the coexistence curve of `pair` over `[t_start, t_end]`.
    ///
    /// `n_points` temperatures are spread evenly; each solve starts from the
    /// extrapolated previous solution. A liquid-vapor trace asked to reach the
    /// critical temperature continues towards it in decade steps until the
    /// volumes merge. Where the third phase would be more stable, the curve is
    /// cut at the triple point.
    pub fn trace_binodal(&self, pair: PhasePair, t_start: f64, t_end: f64, n_points: usize) -> Result<BinodalCurve> {
        if !(t_start > 0.0 && t_end > t_start) || n_points < 2 {
            return Err(MslvError::Domain(format!(
                "need 0 < t_start < t_end and at least two points (got {t_start}, {t_end}, {n_points})"
            )));
        }
        let t_crit = self.critical.t;
        let approach = pair != PhasePair::SolidLiquid && t_end >= t_crit;
        if pair != PhasePair::SolidLiquid && t_start >= t_crit {
            return Err(MslvError::Domain(format!("{pair} curve starts above the critical temperature {t_crit}")));
        }
        let top = if approach { t_crit } else { t_end };
        let k = (n_points - 1) as f64;
        let mut temps: Vec<f64> = (0..n_points).map(|i| t_start + (top - t_start) * i as f64 / k).collect();
        if approach {
            temps.pop();
        } else {
            temps[n_points - 1] = t_end;
        }

        let mut points: Vec<EquilibriumPoint> = Vec::with_capacity(n_points + 16);
        // A metastable extension may stop having a solution; the error only
        // stands if the triple-point cut does not remove that stretch.
        let mut failure = None;
        for &t in &temps {
            let guess = Self::predict(&points, t);
            match self.equilibrium_at_t(t, pair, guess) {
                Ok(pt) => points.push(pt),
                Err(err) if !points.is_empty() => {
                    failure = Some(err);
                    break;
                }
                Err(err) => return Err(err),
            }
        }

        let mut end = Terminus::RangeEnd;
        if approach && pair == PhasePair::LiquidVapor && failure.is_none() {
            let scale = self.eos.scale().v_c;
            let last = points.last().map_or(t_start, |p| p.t);
            // Decades of T_crit - T below the last grid spacing; a decade whose
            // solve fails is skipped.
            for k in 1..=15 {
                let dt = 10f64.powi(-k) * t_crit;
                if dt >= t_crit - last {
                    continue;
                }
                let Ok(pt) = self.equilibrium_at_t(t_crit - dt, pair, None) else {
                    continue;
                };
                points.push(pt);
                if pt.v2 - pt.v1 < CRITICAL_GAP * scale {
                    end = Terminus::CriticalPoint(self.critical);
                    break;
                }
            }
        }

        let mut curve = BinodalCurve { pair, points, start: Terminus::RangeEnd, end };
        self.cut_at_triple_point(&mut curve)?;
        match failure {
            Some(err) if !matches!(curve.end, Terminus::TriplePoint(_)) => Err(err),
            _ => Ok(curve),
        }
    }

    /// Drops the part of the curve where the third phase is more stable and
    /// closes it with the triple point.
    fn cut_at_triple_point(&self, curve: &mut BinodalCurve) -> Result<()> {
        let mut stable = Vec::with_capacity(curve.points.len());
        for pt in &curve.points {
            stable.push(self.third_phase_margin(pt)?.is_none_or(|m| m >= 0.0));
        }
        let Some(i) = stable.windows(2).position(|w| w[0] != w[1]) else {
            return Ok(());
        };
        let (a, b) = (curve.points[i], curve.points[i + 1]);
        let tp = self.triple_point_between(a.t, b.t)?;
        let (v1, v2) = match curve.pair {
            PhasePair::SolidLiquid => (tp.v_s, tp.v_l),
            PhasePair::SolidVapor => (tp.v_s, tp.v_v),
            PhasePair::LiquidVapor => (tp.v_l, tp.v_v),
        };
        let joint = self.eos.equilibrium_point(curve.pair, tp.t, v1, v2)?;
        if stable[i] {
            curve.points.truncate(i + 1);
            curve.points.retain(|p| p.t < tp.t);
            curve.points.push(joint);
            curve.end = Terminus::TriplePoint(tp);
        } else {
            curve.points.drain(..=i);
            curve.points.retain(|p| p.t > tp.t);
            curve.points.insert(0, joint);
            curve.start = Terminus::TriplePoint(tp);
        }
        Ok(())
    }

    /// Temperature where the coexistence pressures of two pairs coincide,
    /// found by bracketing within `[t_lo, t_hi]`.
    pub fn curve_intersection(&self, a: PhasePair, b: PhasePair, t_lo: f64, t_hi: f64) -> Result<(f64, f64)> {
        let gap = |t: f64| -> Result<f64> {
            Ok(self.equilibrium_at_t(t, a, None)?.p - self.equilibrium_at_t(t, b, None)?.p)
        };
        let t = bracket_root(gap, t_lo, t_hi, 0.0)?.solution;
        Ok((t, self.equilibrium_at_t(t, b, None)?.p))
    }

    fn triple_point_between(&self, t_lo: f64, t_hi: f64) -> Result<TriplePoint> {
        let (t, _) = self.curve_intersection(PhasePair::SolidLiquid, PhasePair::LiquidVapor, t_lo, t_hi)
            .or_else(|_| self.curve_intersection(PhasePair::SolidVapor, PhasePair::LiquidVapor, t_lo, t_hi))?;
        let lv = self.equilibrium_at_t(t, PhasePair::LiquidVapor, None)?;
        let iso = self.isotherm(t)?;
        let vs = self.phase_volume(&iso, Phase::Solid, lv.p)?;
        self.triple_point(Some((vs, lv.v1, lv.v2, t)))
    }

    /// Default triple-point guess: the temperature at which the solid
    /// reaches the Gibbs energy of the coexisting liquid and vapor.
    fn triple_guess(&self) -> Result<(f64, f64, f64, f64)> {
        let t_crit = self.critical.t;
        let margin = |t: f64| -> Result<f64> {
            let lv = self.equilibrium_at_t(t, PhasePair::LiquidVapor, None)?;
            let iso = self.isotherm(t)?;
            let vs = self.phase_volume(&iso, Phase::Solid, lv.p)?;
            self.eos.gibbs_difference(vs, lv.v1, t, None)
        };
        let t = bracket_root(margin, 0.3 * t_crit, 0.99 * t_crit, 0.0)?.solution;
        let lv = self.equilibrium_at_t(t, PhasePair::LiquidVapor, None)?;
        let iso = self.isotherm(t)?;
        Ok((self.phase_volume(&iso, Phase::Solid, lv.p)?, lv.v1, lv.v2, t))
    }

    /// Solves the three-phase point by damped Newton in `(v_s, v_l, v_v, T)`.
    pub fn triple_point(&self, guess: Option<(f64, f64, f64, f64)>) -> Result<TriplePoint> {
        let e = self.eos;
        let (vs, vl, vv, t0) = match guess {
            Some(g) => g,
            None => self.triple_guess()?,
        };
        let p_ref = e.pressure(vl, t0)?.abs().max(1e-12 * e.r * e.t_c / e.scale().v_c);
        let residual = |x: &[f64]| -> Result<Vec<f64>> {
            let t = x[3];
            let (ps, pl, pv) = (e.pressure(x[0], t)?, e.pressure(x[1], t)?, e.pressure(x[2], t)?);
            Ok(vec![
                (ps - pl) / p_ref,
                (pl - pv) / p_ref,
                e.gibbs_difference(x[0], x[1], t, None)?,
                e.gibbs_difference(x[1], x[2], t, None)?,
            ])
        };
        let (slo, shi) = e.branch_interval(Branch::Solid);
        let (flo, _) = e.branch_interval(Branch::Fluid);
        let opts = NewtonOptions::default().with_box(
            vec![slo, flo, flo, 0.0],
            vec![shi, f64::INFINITY, f64::INFINITY, self.critical.t],
        );
        let x = match newton_nd(residual, Jacobian::FiniteDifference, &[vs, vl, vv, t0], &opts) {
            Ok(rep) => rep.solution,
            Err(MslvError::NoConvergence { residual, last, .. }) if residual < ACCEPT_TOL => last,
            Err(err) => return Err(err),
        };
        let r = residual(&x)?;
        let (v_s, v_l, v_v, t) = (x[0], x[1], x[2], x[3]);
        if !(v_s < e.d && e.c < v_l && v_l < v_v) {
            return Err(MslvError::BranchViolation(format!(
                "triple point volumes out of order: v_s = {v_s}, v_l = {v_l}, v_v = {v_v}"
            )));
        }
        let p = (e.pressure(v_s, t)? + e.pressure(v_l, t)? + e.pressure(v_v, t)?) / 3.0;
        Ok(TriplePoint { t, p, v_s, v_l, v_v, residuals: [r[0], r[1], r[2], r[3]] })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gases;
    use crate::Mslv;

    #[test]
    fn methane_triple_point() {
        let e = Mslv::reduced(&gases::methane_reduced()).unwrap();
        let s = PhaseSolver::new(&e).unwrap();
        let tp = s.triple_point(None).unwrap();
        assert!(tp.t > 0.4 && tp.t < 0.6, "{tp:?}");
        assert!(tp.residuals.iter().all(|r| r.abs() < 1e-10));
    }

    #[test]
    fn liquid_vapor_curve_reaches_critical_point() {
        let e = Mslv::reduced(&gases::methane_reduced()).unwrap();
        let s = PhaseSolver::new(&e).unwrap();
        let c = s.trace_binodal(PhasePair::LiquidVapor, 0.45, 1.0, 20).unwrap();
        assert!(matches!(c.start, Terminus::TriplePoint(_)), "{:?}", c.start);
        assert!(matches!(c.end, Terminus::CriticalPoint(_)), "{:?}", c.points.last());
        assert!(c.points.windows(2).all(|w| w[1].t > w[0].t && w[1].p > w[0].p));
    }
}
