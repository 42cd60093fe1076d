use nalgebra::DMatrix;

use super::{Phase, PhasePair};
use crate::eos::{Branch, Mslv};
use crate::error::{MslvError, Result};
use crate::numerics::{bracket_root, integrate, newton_nd, Jacobian, NewtonOptions, DEFAULT_QUAD_TOL};
use crate::stability::CriticalPoint;

/// A polished solution is accepted when its scaled residual norm is below this.
pub(crate) const ACCEPT_TOL: f64 = 1e-10;
const MAX_EXPANSIONS: usize = 1100;
/// Guessed volumes closer than this (in units of the volume scale) are ignored.
const GUESS_MIN_GAP: f64 = 0.05;

/// Residuals of a solved two-phase point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumResiduals {
    /// `phi_v(v1) - phi_v(v2)`.
    pub delta_phi_v: f64,
    /// `[phi - v phi_v](v1) - [phi - v phi_v](v2)`.
    pub delta_gibbs: f64,
    /// `|p1 - p2| / max(|p1|, |p2|)`.
    pub pressure_rel: f64,
    /// `|gamma1 - gamma2| / max(|gamma1|, |gamma2|, R T)`.
    pub gibbs_rel: f64,
    /// Normalized equal-area residual; only for pairs on one piece of the volume axis.
    pub maxwell: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumPoint {
    pub t: f64,
    pub p: f64,
    pub v1: f64,
    pub v2: f64,
    pub pair: PhasePair,
    pub residuals: EquilibriumResiduals,
}

/// Two-phase and three-phase solver bound to one equation of state.
///
/// Holds the critical point, which fixes where the fluid branch splits into
/// liquid and vapor.
#[derive(Debug, Clone)]
pub struct PhaseSolver<'a> {
    pub(crate) eos: &'a Mslv,
    pub(crate) critical: CriticalPoint,
}

impl Mslv {
    /// `∫ (p(v, T) - p0) dv / (p0 (v2 - v1))` over `[v1, v2]`, with `p0` the
    /// mean of the end pressures.
    ///
    /// Only defined when both volumes lie on the same branch.
    pub fn maxwell_residual(&self, v1: f64, v2: f64, t: f64) -> Result<f64> {
        let (b1, b2) = (self.branch_of(v1)?, self.branch_of(v2)?);
        if b1 != b2 {
            return Err(MslvError::ForbiddenRegion(self.d));
        }
        if v1 == v2 {
            return Ok(0.0);
        }
        let p0 = 0.5 * (self.pressure(v1, t)? + self.pressure(v2, t)?);
        let q = integrate(|v| Ok(self.pressure(v, t)? - p0), v1, v2, DEFAULT_QUAD_TOL)?;
        Ok(q.value / (p0 * (v2 - v1)).abs())
    }

    /// `gamma / (R T)` up to a term depending on `T` only.
    pub fn reduced_gibbs_energy(&self, v: f64, t: f64) -> Result<f64> {
        self.reduced_gibbs(v, t)
    }

    fn gibbs_slope(&self, v: f64, t: f64) -> Result<f64> {
        Ok(v * self.pressure_dv(v, t)? / (self.r * t))
    }

    /// Evaluates all residuals for a candidate pair of volumes.
    pub fn equilibrium_residuals(&self, pair: PhasePair, t: f64, v1: f64, v2: f64) -> Result<EquilibriumResiduals> {
        let (s1, s2) = (self.state(v1, t)?, self.state(v2, t)?);
        let rt = self.r * t;
        let pmax = s1.p.abs().max(s2.p.abs());
        let gmax = s1.gamma.abs().max(s2.gamma.abs()).max(rt);
        Ok(EquilibriumResiduals {
            delta_phi_v: (s1.p - s2.p) / rt,
            delta_gibbs: self.gibbs_difference(v1, v2, t, None)?,
            pressure_rel: if pmax > 0.0 { (s1.p - s2.p).abs() / pmax } else { 0.0 },
            gibbs_rel: (s1.gamma - s2.gamma).abs() / gmax,
            maxwell: if pair.same_piece() { Some(self.maxwell_residual(v1, v2, t)?) } else { None },
        })
    }

    /// Packs a solution with its residuals; checks the branch of each volume.
    pub fn equilibrium_point(&self, pair: PhasePair, t: f64, v1: f64, v2: f64) -> Result<EquilibriumPoint> {
        let (ph1, ph2) = pair.phases();
        if self.branch_of(v1)? != ph1.branch() || self.branch_of(v2)? != ph2.branch() || v1 >= v2 {
            return Err(MslvError::BranchViolation(format!(
                "{pair} volumes ({v1}, {v2}) do not sit on the expected branches"
            )));
        }
        let p = 0.5 * (self.pressure(v1, t)? + self.pressure(v2, t)?);
        Ok(EquilibriumPoint { t, p, v1, v2, pair, residuals: self.equilibrium_residuals(pair, t, v1, v2)? })
    }
}

/// Isotherm features the root selection depends on.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Isotherm {
    pub t: f64,
    /// Fluid spinodal volumes (local minimum, local maximum of `p`); `None`
    /// above the critical temperature.
    pub spinodals: Option<(f64, f64)>,
}

impl<'a> PhaseSolver<'a> {
    /// Locates the critical point from the default guess.
    pub fn new(eos: &'a Mslv) -> Result<Self> {
        Ok(Self { eos, critical: eos.critical_point(None)? })
    }

    pub fn with_critical(eos: &'a Mslv, critical: CriticalPoint) -> Self {
        Self { eos, critical }
    }

    pub fn eos(&self) -> &Mslv {
        self.eos
    }

    pub fn critical(&self) -> &CriticalPoint {
        &self.critical
    }

    fn pressure_unit(&self) -> f64 {
        self.eos.r * self.eos.t_c / self.eos.scale().v_c
    }

    pub(crate) fn isotherm(&self, t: f64) -> Result<Isotherm> {
        Mslv::check_temperature(t)?;
        let e = self.eos;
        let vc = self.critical.v;
        let peak = e.spinodal_temperature(vc)?.unwrap_or(self.critical.t);
        if t >= peak {
            return Ok(Isotherm { t, spinodals: None });
        }
        let gap = |v: f64| -> Result<f64> { Ok(e.spinodal_temperature(v)?.unwrap_or(0.0) - t) };
        let (lo, _) = e.branch_interval(Branch::Fluid);
        let va = bracket_root(gap, lo, vc, 0.0)?.solution;
        let mut hi = 2.0 * vc;
        let mut n = 0;
        while gap(hi)? > 0.0 {
            hi *= 2.0;
            n += 1;
            if n > MAX_EXPANSIONS {
                return Err(MslvError::NoBracket { a: vc, b: hi, fa: gap(vc)?, fb: gap(hi)? });
            }
        }
        let vb = bracket_root(gap, vc, hi, 0.0)?.solution;
        Ok(Isotherm { t, spinodals: Some((va, vb)) })
    }

    /// Open volume interval a phase may occupy on this isotherm.
    fn phase_interval(&self, iso: &Isotherm, phase: Phase) -> (f64, f64) {
        let e = self.eos;
        let (flo, _) = e.branch_interval(Branch::Fluid);
        match (phase, iso.spinodals) {
            (Phase::Solid, _) => e.branch_interval(Branch::Solid),
            (Phase::Liquid, Some((va, _))) => (flo, va),
            (Phase::Vapor, Some((_, vb))) => (vb, f64::INFINITY),
            (_, None) => (flo, f64::INFINITY),
        }
    }

    /// Volume of `phase` at pressure `p`; pinned to the spinodal when `p`
    /// lies beyond the phase's pressure range on that side.
    pub(crate) fn phase_volume(&self, iso: &Isotherm, phase: Phase, p: f64) -> Result<f64> {
        Ok(self.phase_root(iso, phase, p)?.0)
    }

    /// [`PhaseSolver::phase_volume`] with a flag telling whether the volume was pinned.
    fn phase_root(&self, iso: &Isotherm, phase: Phase, p: f64) -> Result<(f64, bool)> {
        let e = self.eos;
        let t = iso.t;
        let (lo, hi) = self.phase_interval(iso, phase);
        let f = |v: f64| Ok(e.pressure(v, t)? - p);
        if hi.is_finite() {
            if f(hi)? >= 0.0 && phase == Phase::Liquid {
                return Ok((hi, true));
            }
            return Ok((bracket_root(f, lo, hi, 0.0)?.solution, false));
        }
        if f(lo)? <= 0.0 && phase == Phase::Vapor && iso.spinodals.is_some() {
            return Ok((lo, true));
        }
        if !(p > 0.0) {
            return Err(MslvError::Domain(format!("no {phase:?} volume at non-positive pressure {p}")));
        }
        let mut top = (2.0 * e.r * t / p).max(2.0 * lo);
        let mut n = 0;
        while f(top)? > 0.0 {
            top *= 2.0;
            n += 1;
            if n > MAX_EXPANSIONS {
                return Err(MslvError::NoBracket { a: lo, b: top, fa: f(lo)?, fb: f(top)? });
            }
        }
        Ok((bracket_root(f, lo, top, 0.0)?.solution, false))
    }

    /// `mu(a) - mu(b)` with both phases at pressure `p`.
    fn gibbs_gap(&self, iso: &Isotherm, a: Phase, b: Phase, p: f64) -> Result<f64> {
        let (va, pinned_a) = self.phase_root(iso, a, p)?;
        let (vb, pinned_b) = self.phase_root(iso, b, p)?;
        // A pinned volume is not a root of p(v) = p, so the stationary form does not apply.
        let p0 = (!pinned_a && !pinned_b).then_some(p);
        self.eos.gibbs_difference(va, vb, iso.t, p0)
    }

    /// Coexistence pressure by bracketing on `p`, with both volumes.
    ///
    /// `mu1 - mu2` falls strictly with `p` (its slope is `(v1 - v2)/(R T)`),
    /// so the sign change is unique.
    pub(crate) fn seed(&self, pair: PhasePair, iso: &Isotherm) -> Result<(f64, f64, f64)> {
        let (ph1, ph2) = pair.phases();
        let diff = |p: f64| self.gibbs_gap(iso, ph1, ph2, p);
        let e = self.eos;
        let t = iso.t;
        let unit = self.pressure_unit();
        let p = match pair {
            PhasePair::SolidLiquid => {
                let lo = match iso.spinodals {
                    Some((va, _)) => e.pressure(va, t)?,
                    None => 1e-12 * unit,
                };
                let mut hi = lo.max(0.0) + unit;
                let mut n = 0;
                while diff(hi)? > 0.0 {
                    hi *= 2.0;
                    n += 1;
                    if n > 60 {
                        return Err(MslvError::NoBracket { a: lo, b: hi, fa: diff(lo)?, fb: diff(hi)? });
                    }
                }
                bracket_root(diff, lo, hi, 0.0)?.solution
            }
            PhasePair::SolidVapor | PhasePair::LiquidVapor => {
                let (va, vb) = iso.spinodals.ok_or_else(|| {
                    MslvError::Domain(format!("{pair} coexistence needs T below the critical temperature, got {t}"))
                })?;
                let hi = e.pressure(vb, t)?;
                let floor = if pair == PhasePair::LiquidVapor { e.pressure(va, t)? } else { 0.0 };
                let mut lo = if floor > 0.0 { floor } else { 1e-3 * hi };
                let mut n = 0;
                while diff(lo)? < 0.0 && floor <= 0.0 {
                    lo *= 1e-3;
                    n += 1;
                    if n > 90 {
                        return Err(MslvError::NoBracket { a: lo, b: hi, fa: diff(lo)?, fb: diff(hi)? });
                    }
                }
                let x = bracket_root(|x: f64| diff(x.exp()), lo.ln(), hi.ln(), 0.0)?.solution;
                x.exp()
            }
        };
        let v1 = self.phase_volume(iso, ph1, p)?;
        let v2 = self.phase_volume(iso, ph2, p)?;
        Ok((p, v1, v2))
    }

    /// Damped Newton polish of `(v1, v2)` inside the phase intervals.
    ///
    /// Returns the volumes, the scaled residual norm and the smallest norm
    /// the volumes' floating-point spacing allows.
    fn polish(&self, pair: PhasePair, iso: &Isotherm, v1: f64, v2: f64, p_ref: f64) -> Result<(f64, f64, f64, f64)> {
        let e = self.eos;
        let t = iso.t;
        let (ph1, ph2) = pair.phases();
        let (l1, h1) = self.phase_interval(iso, ph1);
        let (l2, h2) = self.phase_interval(iso, ph2);
        let scale = p_ref.abs().max(1e-12 * self.pressure_unit());
        let residual = |x: &[f64]| -> Result<Vec<f64>> {
            Ok(vec![
                (e.pressure(x[0], t)? - e.pressure(x[1], t)?) / scale,
                e.gibbs_difference(x[0], x[1], t, None)?,
            ])
        };
        let jacobian = |x: &[f64]| -> Result<DMatrix<f64>> {
            Ok(DMatrix::from_row_slice(
                2,
                2,
                &[
                    e.pressure_dv(x[0], t)? / scale,
                    -e.pressure_dv(x[1], t)? / scale,
                    e.gibbs_slope(x[0], t)?,
                    -e.gibbs_slope(x[1], t)?,
                ],
            ))
        };
        let floor = |x1: f64, x2: f64| -> Result<f64> {
            let ulp = |x: f64| f64::EPSILON * x.abs();
            Ok(4.0 * (e.pressure_dv(x1, t)?.abs() * ulp(x1) + e.pressure_dv(x2, t)?.abs() * ulp(x2)) / scale)
        };
        let inside = |x: f64, lo: f64, hi: f64| x > lo && x < hi;
        let (x1, x2, r) = if !(inside(v1, l1, h1) && inside(v2, l2, h2)) {
            // A seed pinned to a spinodal edge is already as good as it gets.
            let r = residual(&[v1, v2])?;
            (v1, v2, r[0].hypot(r[1]))
        } else {
            let opts = NewtonOptions::default().with_box(vec![l1, l2], vec![h1, h2]);
            match newton_nd(residual, Jacobian::Analytic(&jacobian), &[v1, v2], &opts) {
                Ok(rep) => (rep.solution[0], rep.solution[1], rep.residual_norm),
                Err(MslvError::NoConvergence { residual, last, .. }) => (last[0], last[1], residual),
                Err(err) => return Err(err),
            }
        };
        Ok((x1, x2, r, floor(x1, x2)?))
    }

    /// Solves one two-phase equilibrium at temperature `t`.
    ///
    /// With a guess, Newton starts there; if that fails the pair is seeded
    /// by bracketing the coexistence pressure and then polished. A solution is
    /// accepted once its scaled residual is below 1e-10, or below the
    /// resolution the floating-point volumes allow when that is coarser (a
    /// liquid volume very close to `c`).
    pub fn equilibrium_at_t(&self, t: f64, pair: PhasePair, guess: Option<(f64, f64)>) -> Result<EquilibriumPoint> {
        let e = self.eos;
        let iso = self.isotherm(t)?;
        if pair != PhasePair::SolidLiquid && iso.spinodals.is_none() {
            return Err(MslvError::Domain(format!(
                "{pair} coexistence needs T below the critical temperature {}, got {t}",
                self.critical.t
            )));
        }
        // Near the critical point both residuals vanish as v2 - v1 -> 0, so a
        // small residual says nothing there; only the sign-based seed is trusted.
        let separated = |g1: f64, g2: f64| g2 - g1 > GUESS_MIN_GAP * e.scale().v_c;
        if let Some((g1, g2)) = guess.filter(|&(g1, g2)| separated(g1, g2)) {
            let p_ref = 0.5 * (e.pressure(g1, t).unwrap_or(0.0) + e.pressure(g2, t).unwrap_or(0.0));
            if let Ok((v1, v2, r, floor)) = self.polish(pair, &iso, g1, g2, p_ref) {
                if r < ACCEPT_TOL.max(floor) {
                    if let Ok(pt) = e.equilibrium_point(pair, t, v1, v2) {
                        return Ok(pt);
                    }
                }
            }
        }
        let (p, s1, s2) = self.seed(pair, &iso)?;
        let (v1, v2, r, floor) = self.polish(pair, &iso, s1, s2, p)?;
        if !(r < ACCEPT_TOL.max(floor)) {
            return Err(MslvError::NoConvergence { iterations: 0, residual: r, last: vec![v1, v2] });
        }
        e.equilibrium_point(pair, t, v1, v2)
    }

    /// `mu(third phase) - mu(coexisting phases)` at the point's pressure;
    /// positive when the coexistence is stable against the third phase, and
    /// minus infinity at non-positive pressure.
    /// `None` when the third phase has no volume at that pressure or is not
    /// distinct from one of the pair.
    pub fn third_phase_margin(&self, pt: &EquilibriumPoint) -> Result<Option<f64>> {
        let iso = self.isotherm(pt.t)?;
        let third = pt.pair.third();
        let (lo, hi) = self.phase_interval(&iso, third);
        let e = self.eos;
        if !(pt.p > 0.0) {
            // Under tension; any state at positive pressure is preferred.
            return Ok(Some(f64::NEG_INFINITY));
        }
        if third != Phase::Solid && iso.spinodals.is_none() {
            // Above the critical temperature liquid and vapor are one phase.
            return Ok(None);
        }
        let reachable = match third {
            Phase::Solid => true,
            Phase::Liquid => iso.spinodals.is_none() || pt.p > e.pressure(hi, pt.t)?,
            Phase::Vapor => pt.p > 0.0 && (iso.spinodals.is_none() || pt.p < e.pressure(lo, pt.t)?),
        };
        if !reachable {
            return Ok(None);
        }
        let (ph1, _) = pt.pair.phases();
        Ok(Some(self.gibbs_gap(&iso, third, ph1, pt.p)?))
    }
}
