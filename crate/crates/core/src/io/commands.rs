//! Table-producing commands behind the `mslv` binary.
//!
//! Every command works on the reduced equation of state. Arguments arrive in
//! the unit system chosen by [`Units`] and results are scaled back by the
//! critical constants, so the reduced and dimensional outputs of one query
//! differ exactly by those factors.

use std::str::FromStr;

use super::gas_file::Gas;
use super::series::{Column, CurveSeries};
use crate::eos::{Branch, CriticalConstants, Mslv};
use crate::error::{MslvError, Result};
use crate::phase::{BinodalCurve, PhasePair, PhaseSolver, Terminus};
use crate::stability::Spacing;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Units {
    #[default]
    Reduced,
    Dimensional,
}

/// Pair of axes a curve is laid out for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plane {
    V1V2,
    VT,
    VP,
    TP,
}

impl FromStr for Plane {
    type Err = MslvError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "v1v2" => Ok(Plane::V1V2),
            "vt" => Ok(Plane::VT),
            "vp" => Ok(Plane::VP),
            "tp" => Ok(Plane::TP),
            _ => Err(MslvError::Domain(format!("unknown plane '{s}' (expected v1v2, vT, vp or Tp)"))),
        }
    }
}

impl FromStr for Spacing {
    type Err = MslvError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" | "lin" => Ok(Spacing::Linear),
            "log" => Ok(Spacing::Log),
            _ => Err(MslvError::Domain(format!("unknown spacing '{s}' (expected linear or log)"))),
        }
    }
}

/// Physical dimension of a column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Volume,
    Temperature,
    Pressure,
    /// `phi_vv`, an inverse squared volume.
    InverseVolumeSquared,
    InverseVolumeCubed,
    Dimensionless,
}

impl Quantity {
    fn factor(self, c: &CriticalConstants) -> f64 {
        match self {
            Quantity::Volume => c.v_c,
            Quantity::Temperature => c.t_c,
            Quantity::Pressure => c.p_c,
            Quantity::InverseVolumeSquared => 1.0 / (c.v_c * c.v_c),
            Quantity::InverseVolumeCubed => 1.0 / (c.v_c * c.v_c * c.v_c),
            Quantity::Dimensionless => 1.0,
        }
    }

    fn unit(self, units: Units) -> &'static str {
        match (self, units) {
            (Quantity::Dimensionless, _) => "1",
            (Quantity::Volume, Units::Reduced) => "v_c",
            (Quantity::Temperature, Units::Reduced) => "T_c",
            (Quantity::Pressure, Units::Reduced) => "p_c",
            (Quantity::InverseVolumeSquared, Units::Reduced) => "v_c^-2",
            (Quantity::InverseVolumeCubed, Units::Reduced) => "v_c^-3",
            (Quantity::Volume, Units::Dimensional) => "cm3/mol",
            (Quantity::Temperature, Units::Dimensional) => "K",
            (Quantity::Pressure, Units::Dimensional) => "MPa",
            (Quantity::InverseVolumeSquared, Units::Dimensional) => "mol2/cm6",
            (Quantity::InverseVolumeCubed, Units::Dimensional) => "mol3/cm9",
        }
    }
}

/// Gas, its reduced equation of state and the output unit system.
#[derive(Debug, Clone)]
pub struct Context {
    pub gas: Gas,
    pub eos: Mslv,
    pub units: Units,
    /// Append `log10_<name>` columns for columns that are positive throughout.
    pub log_columns: bool,
}

struct Schema {
    cols: Vec<(&'static str, Quantity)>,
}

impl Schema {
    fn new(cols: &[(&'static str, Quantity)]) -> Self {
        Self { cols: cols.to_vec() }
    }
}

impl Context {
    pub fn new(gas: Gas, units: Units) -> Result<Self> {
        let eos = gas.eos()?;
        Ok(Self { gas, eos, units, log_columns: false })
    }

    fn scale(&self) -> CriticalConstants {
        match self.units {
            Units::Reduced => CriticalConstants::UNIT,
            Units::Dimensional => self.gas.critical,
        }
    }

    /// Converts a user argument into reduced units.
    pub fn input(&self, q: Quantity, x: f64) -> f64 {
        x / q.factor(&self.scale())
    }

    /// Converts a reduced value into the output units.
    pub fn output(&self, q: Quantity, x: f64) -> f64 {
        x * q.factor(&self.scale())
    }

    fn solver(&self) -> Result<PhaseSolver<'_>> {
        PhaseSolver::new(&self.eos)
    }

    fn series(&self, name: &str, schema: &Schema) -> CurveSeries {
        let units = self.units;
        let columns = schema.cols.iter().map(|&(n, q)| Column::new(n, q.unit(units))).collect();
        let mut s = CurveSeries::new(name, columns);
        s.meta("gas", self.gas.name());
        s.meta("units", if units == Units::Reduced { "reduced" } else { "dimensional" });
        s
    }

    /// Scales reduced rows into output units and appends them as a segment.
    fn push(&self, s: &mut CurveSeries, schema: &Schema, rows: Vec<Vec<f64>>) -> Result<()> {
        let c = self.scale();
        let rows = rows
            .into_iter()
            .map(|r| r.iter().zip(&schema.cols).map(|(x, (_, q))| x * q.factor(&c)).collect())
            .collect();
        s.push_segment(rows)
    }

    fn finish(&self, mut s: CurveSeries) -> CurveSeries {
        if !self.log_columns {
            return s;
        }
        let positive: Vec<usize> = (0..s.columns.len())
            .filter(|&i| s.row_count() > 0 && s.rows().all(|r| r[i] > 0.0 && r[i].is_finite()))
            .filter(|&i| !matches!(s.columns[i].name.as_str(), "branch" | "applicable" | "tag"))
            .collect();
        for &i in &positive {
            let col = s.columns[i].clone();
            s.columns.push(Column::new(&format!("log10_{}", col.name), &col.unit));
        }
        for seg in &mut s.segments {
            for row in seg.iter_mut() {
                let logs: Vec<f64> = positive.iter().map(|&i| row[i].log10()).collect();
                row.extend(logs);
            }
        }
        s
    }

    /// Isotherm `p(v)` at `t` over `[v_min, v_max]`, one segment per branch.
    ///
    /// Sample volumes outside both branches are skipped; their number is
    /// recorded as the `skipped` metadata entry.
    pub fn isotherm(&self, t: f64, v_min: f64, v_max: f64, n: usize, spacing: Spacing) -> Result<CurveSeries> {
        let (t, v_min, v_max) =
            (self.input(Quantity::Temperature, t), self.input(Quantity::Volume, v_min), self.input(Quantity::Volume, v_max));
        Mslv::check_temperature(t)?;
        check_range("v", v_min, v_max, n)?;
        let schema = Schema::new(&[
            ("v", Quantity::Volume),
            ("p", Quantity::Pressure),
            ("phi_vv", Quantity::InverseVolumeSquared),
            ("applicable", Quantity::Dimensionless),
        ]);
        let mut s = self.series("isotherm", &schema);
        s.meta("T", t * self.scale().t_c);
        let mut skipped = 0;
        let mut pieces: Vec<(Branch, Vec<Vec<f64>>)> = Vec::new();
        for v in spacing.points(v_min, v_max, n) {
            let Ok(branch) = self.eos.branch_of(v) else {
                skipped += 1;
                continue;
            };
            let a = self.eos.applicability(v, t)?;
            let row = vec![v, self.eos.pressure(v, t)?, a.phi_vv_value, flag(a.applicable())];
            match pieces.last_mut() {
                Some((b, rows)) if *b == branch => rows.push(row),
                _ => pieces.push((branch, vec![row])),
            }
        }
        s.meta("skipped", skipped);
        for (_, rows) in pieces {
            self.push(&mut s, &schema, rows)?;
        }
        Ok(self.finish(s))
    }

    /// Singularity curve on each branch over `[v_min, v_max]`.
    pub fn singularity(&self, v_min: f64, v_max: f64, n: usize, spacing: Spacing, plane: Plane) -> Result<CurveSeries> {
        let (v_min, v_max) = (self.input(Quantity::Volume, v_min), self.input(Quantity::Volume, v_max));
        check_range("v", v_min, v_max, n)?;
        let schema = match plane {
            Plane::VT => Schema::new(&[("v", Quantity::Volume), ("T", Quantity::Temperature), ("p", Quantity::Pressure)]),
            Plane::VP => Schema::new(&[("v", Quantity::Volume), ("p", Quantity::Pressure), ("T", Quantity::Temperature)]),
            Plane::TP => Schema::new(&[("T", Quantity::Temperature), ("p", Quantity::Pressure), ("v", Quantity::Volume)]),
            Plane::V1V2 => return Err(MslvError::Domain("the singularity curve has no (v1, v2) plane".into())),
        };
        let mut s = self.series("singularity", &schema);
        for (branch, rows) in self.spinodal_rows(v_min, v_max, n, spacing)? {
            s.meta(&format!("{branch:?}_points").to_lowercase(), rows.len());
            let rows = rows
                .into_iter()
                .map(|[v, t, p]| match plane {
                    Plane::VT => vec![v, t, p],
                    Plane::VP => vec![v, p, t],
                    _ => vec![t, p, v],
                })
                .collect();
            self.push(&mut s, &schema, rows)?;
        }
        Ok(self.finish(s))
    }

    /// `(v, T, p)` on the singularity curve, per branch, in reduced units.
    fn spinodal_rows(&self, v_min: f64, v_max: f64, n: usize, spacing: Spacing) -> Result<Vec<(Branch, Vec<[f64; 3]>)>> {
        let mut out = Vec::new();
        for branch in [Branch::Solid, Branch::Fluid] {
            let (lo, hi) = self.eos.branch_interval(branch);
            let (a, b) = (v_min.max(lo * (1.0 + 1e-12)), v_max.min(hi * (1.0 - 1e-12)));
            if a >= b {
                continue;
            }
            let pts = self.eos.trace_spinodal(branch, a, b, n, spacing)?;
            out.push((branch, pts.iter().map(|p| [p.v, p.t, p.p]).collect()));
        }
        Ok(out)
    }

    /// Coexistence curve of `pair` between `t_min` and `t_max`.
    pub fn binodal(&self, pair: PhasePair, t_min: f64, t_max: f64, n: usize, plane: Plane) -> Result<CurveSeries> {
        let (t_min, t_max) = (self.input(Quantity::Temperature, t_min), self.input(Quantity::Temperature, t_max));
        let solver = self.solver()?;
        let curve = solver.trace_binodal(pair, t_min, t_max, n)?;
        let (v, t, p) = (Quantity::Volume, Quantity::Temperature, Quantity::Pressure);
        let schema = match plane {
            Plane::TP => Schema::new(&[("T", t), ("p", p), ("v1", v), ("v2", v)]),
            Plane::V1V2 => Schema::new(&[("v1", v), ("v2", v), ("T", t), ("p", p)]),
            Plane::VT => Schema::new(&[("v", v), ("T", t), ("p", p)]),
            Plane::VP => Schema::new(&[("v", v), ("p", p), ("T", t)]),
        };
        let mut s = self.series(&format!("binodal_{}", pair.code()), &schema);
        s.meta("pair", pair.code());
        s.meta("start", terminus_label(&curve.start));
        s.meta("end", terminus_label(&curve.end));
        let pts = &curve.points;
        match plane {
            Plane::TP => self.push(&mut s, &schema, pts.iter().map(|q| vec![q.t, q.p, q.v1, q.v2]).collect())?,
            Plane::V1V2 => self.push(&mut s, &schema, pts.iter().map(|q| vec![q.v1, q.v2, q.t, q.p]).collect())?,
            Plane::VT => {
                self.push(&mut s, &schema, pts.iter().map(|q| vec![q.v1, q.t, q.p]).collect())?;
                self.push(&mut s, &schema, pts.iter().map(|q| vec![q.v2, q.t, q.p]).collect())?;
            }
            Plane::VP => {
                self.push(&mut s, &schema, pts.iter().map(|q| vec![q.v1, q.p, q.t]).collect())?;
                self.push(&mut s, &schema, pts.iter().map(|q| vec![q.v2, q.p, q.t]).collect())?;
            }
        }
        Ok(self.finish(s))
    }

    pub fn critical(&self) -> Result<CurveSeries> {
        let cp = self.eos.critical_point(None)?;
        let schema = Schema::new(&[
            ("v", Quantity::Volume),
            ("T", Quantity::Temperature),
            ("p", Quantity::Pressure),
            ("phi_vv", Quantity::InverseVolumeSquared),
            ("phi_vvv", Quantity::InverseVolumeCubed),
        ]);
        let mut s = self.series("critical_point", &schema);
        s.meta("iterations", cp.iterations);
        self.push(&mut s, &schema, vec![vec![cp.v, cp.t, cp.p, cp.residuals[0], cp.residuals[1]]])?;
        Ok(self.finish(s))
    }

    pub fn triple(&self) -> Result<CurveSeries> {
        let tp = self.solver()?.triple_point(None)?;
        let (v, d) = (Quantity::Volume, Quantity::Dimensionless);
        let schema = Schema::new(&[
            ("T", Quantity::Temperature),
            ("p", Quantity::Pressure),
            ("v_s", v),
            ("v_l", v),
            ("v_v", v),
            ("r_p_sl", d),
            ("r_p_lv", d),
            ("r_g_sl", d),
            ("r_g_lv", d),
        ]);
        let mut s = self.series("triple_point", &schema);
        let r = tp.residuals;
        self.push(&mut s, &schema, vec![vec![tp.t, tp.p, tp.v_s, tp.v_l, tp.v_v, r[0], r[1], r[2], r[3]]])?;
        Ok(self.finish(s))
    }

    /// Solves `pair` at `t` and reports the equal-area and equality residuals.
    pub fn maxwell_check(&self, pair: PhasePair, t: f64) -> Result<CurveSeries> {
        let t = self.input(Quantity::Temperature, t);
        let pt = self.solver()?.equilibrium_at_t(t, pair, None)?;
        let (v, d) = (Quantity::Volume, Quantity::Dimensionless);
        let schema = Schema::new(&[
            ("T", Quantity::Temperature),
            ("p", Quantity::Pressure),
            ("v1", v),
            ("v2", v),
            ("maxwell", d),
            ("pressure_rel", d),
            ("gibbs_rel", d),
        ]);
        let mut s = self.series(&format!("maxwell_check_{}", pair.code()), &schema);
        let r = pt.residuals;
        let m = r.maxwell.unwrap_or(f64::NAN);
        self.push(&mut s, &schema, vec![vec![pt.t, pt.p, pt.v1, pt.v2, m, r.pressure_rel, r.gibbs_rel]])?;
        Ok(self.finish(s))
    }

    /// Rectangular `(v, T)` mesh on each branch, optionally followed by the
    /// singularity and coexistence curves as tagged overlay segments.
    ///
    /// Tags: 0 mesh, 1 singularity, 2 solid-liquid, 3 solid-vapor, 4 liquid-vapor.
    pub fn manifold(
        &self,
        v_range: (f64, f64),
        t_range: (f64, f64),
        nv: usize,
        nt: usize,
        spacing: Spacing,
        overlays: bool,
    ) -> Result<CurveSeries> {
        let (v_min, v_max) = (self.input(Quantity::Volume, v_range.0), self.input(Quantity::Volume, v_range.1));
        let (t_min, t_max) = (self.input(Quantity::Temperature, t_range.0), self.input(Quantity::Temperature, t_range.1));
        check_range("v", v_min, v_max, nv)?;
        check_range("T", t_min, t_max, nt)?;
        Mslv::check_temperature(t_min)?;
        let d = Quantity::Dimensionless;
        let schema = Schema::new(&[
            ("v", Quantity::Volume),
            ("T", Quantity::Temperature),
            ("p", Quantity::Pressure),
            ("branch", d),
            ("applicable", d),
            ("phi_vv", Quantity::InverseVolumeSquared),
            ("tag", d),
        ]);
        let mut s = self.series("manifold", &schema);
        s.meta("nv", nv);
        s.meta("nT", nt);
        let temps = Spacing::Linear.points(t_min, t_max, nt);
        let mut sheets = 0;
        for branch in [Branch::Solid, Branch::Fluid] {
            let (lo, hi) = self.eos.branch_interval(branch);
            let (a, b) = (v_min.max(lo), v_max.min(hi));
            if a >= b {
                continue;
            }
            let vols = spacing.points(a, b, nv);
            let mut rows = Vec::with_capacity(nv * nt);
            for &t in &temps {
                for &v in &vols {
                    rows.push(self.mesh_row(v, t, 0.0)?);
                }
            }
            self.push(&mut s, &schema, rows)?;
            sheets += 1;
        }
        s.meta("sheets", sheets);
        if overlays {
            for (_, pts) in self.spinodal_rows(v_min, v_max, nv, spacing)? {
                let rows = pts
                    .iter()
                    .filter(|r| r[1] >= t_min && r[1] <= t_max)
                    .map(|&[v, t, _]| self.mesh_row(v, t, 1.0))
                    .collect::<Result<Vec<_>>>()?;
                self.push(&mut s, &schema, rows)?;
            }
            let solver = self.solver()?;
            for (tag, pair) in [(2.0, PhasePair::SolidLiquid), (3.0, PhasePair::SolidVapor), (4.0, PhasePair::LiquidVapor)] {
                let Some(curve) = overlay_curve(&solver, pair, t_min, t_max, nt)? else {
                    continue;
                };
                for side in [0, 1] {
                    let rows = curve
                        .points
                        .iter()
                        .map(|q| if side == 0 { q.v1 } else { q.v2 })
                        .zip(&curve.points)
                        .filter(|(v, _)| *v >= v_min && *v <= v_max)
                        .map(|(v, q)| self.mesh_row(v, q.t, tag))
                        .collect::<Result<Vec<_>>>()?;
                    self.push(&mut s, &schema, rows)?;
                }
            }
        }
        Ok(self.finish(s))
    }

    fn mesh_row(&self, v: f64, t: f64, tag: f64) -> Result<Vec<f64>> {
        let branch = self.eos.branch_of(v)?;
        let a = self.eos.applicability(v, t)?;
        Ok(vec![v, t, self.eos.pressure(v, t)?, branch.code(), flag(a.applicable()), a.phi_vv_value, tag])
    }

    /// Closed-form singularity roots `t1`, `t2` (in `sqrt(T / T_c)`) over a volume range.
    pub fn spinodal_roots(&self, v_min: f64, v_max: f64, n: usize, spacing: Spacing) -> Result<CurveSeries> {
        let (v_min, v_max) = (self.input(Quantity::Volume, v_min), self.input(Quantity::Volume, v_max));
        check_range("v", v_min, v_max, n)?;
        let d = Quantity::Dimensionless;
        let schema = Schema::new(&[("v", Quantity::Volume), ("t1", d), ("t2", d), ("t1_valid", d), ("t2_valid", d)]);
        let mut s = self.series("spinodal_roots", &schema);
        let mut skipped = 0;
        let mut pieces: Vec<(Branch, Vec<Vec<f64>>)> = Vec::new();
        for v in spacing.points(v_min, v_max, n) {
            let Ok(branch) = self.eos.branch_of(v) else {
                skipped += 1;
                continue;
            };
            let r = self.eos.spinodal_sqrt_t(v)?;
            let row = vec![v, r.t1, r.t2, flag(r.t1_valid), flag(r.t2_valid)];
            match pieces.last_mut() {
                Some((b, rows)) if *b == branch => rows.push(row),
                _ => pieces.push((branch, vec![row])),
            }
        }
        s.meta("skipped", skipped);
        for (_, rows) in pieces {
            self.push(&mut s, &schema, rows)?;
        }
        Ok(self.finish(s))
    }

    /// `h` for the volume pair and both closed-form roots `tau = sqrt(T / T_c)`.
    pub fn tau_roots(&self, v1: f64, v2: f64) -> Result<CurveSeries> {
        let (v1, v2) = (self.input(Quantity::Volume, v1), self.input(Quantity::Volume, v2));
        let h = self.eos.h_slope(v1, v2)?;
        let r = self.eos.tau_from_h(h)?;
        let d = Quantity::Dimensionless;
        let schema = Schema::new(&[
            ("v1", Quantity::Volume),
            ("v2", Quantity::Volume),
            ("h", d),
            ("tau1", d),
            ("tau2", d),
            ("T", Quantity::Temperature),
        ]);
        let mut s = self.series("tau_roots", &schema);
        s.meta("tau1_valid", r.tau1_valid);
        s.meta("tau2_valid", r.tau2_valid);
        let t = r.temperature(self.eos.critical_temperature()).unwrap_or(f64::NAN);
        self.push(&mut s, &schema, vec![vec![v1, v2, h, r.tau1, r.tau2, t]])?;
        Ok(self.finish(s))
    }
}

fn overlay_curve(solver: &PhaseSolver<'_>, pair: PhasePair, t_min: f64, t_max: f64, n: usize) -> Result<Option<BinodalCurve>> {
    let t_crit = solver.critical().t;
    if pair != PhasePair::SolidLiquid && t_min >= t_crit {
        return Ok(None);
    }
    let top = if pair == PhasePair::SolidLiquid { t_max } else { t_max.min(t_crit) };
    if top <= t_min {
        return Ok(None);
    }
    solver.trace_binodal(pair, t_min, top, n.max(2)).map(Some)
}

fn terminus_label(t: &Terminus) -> &'static str {
    match t {
        Terminus::CriticalPoint(_) => "critical_point",
        Terminus::TriplePoint(_) => "triple_point",
        Terminus::RangeEnd => "range_end",
    }
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn check_range(what: &str, lo: f64, hi: f64, n: usize) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) || n < 2 {
        return Err(MslvError::Domain(format!(
            "{what} range needs finite min < max and at least two points (got [{lo}, {hi}], n = {n})"
        )));
    }
    Ok(())
}
