//! Acceptance criteria, one report line each.
//!
//! Runs without the libtest harness so every line is printed; the process
//! exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mslv::eos::m_from_omega;
use mslv::io::{Context, CurveSeries, Gas, Plane, Units};
use mslv::numerics::{bracket_root, fd_derivative_richardson, FdOrder};
use mslv::phase::{PhasePair, PhaseSolver, Terminus};
use mslv::stability::Spacing;
use mslv::{gases, Branch, Mslv, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = fn() -> Result<Outcome>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(checks: &[(&str, bool)], extra: String) -> Outcome {
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    let detail = if failed.is_empty() { extra } else { format!("failed: {}; {extra}", failed.join(", ")) };
    Outcome { pass: failed.is_empty(), detail }
}

fn methane() -> Mslv {
    Mslv::reduced(&gases::methane_reduced()).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn c1_constants() -> Result<Outcome> {
    let gas = Gas::methane();
    let r = &gas.reduced;
    let c = &gas.critical;
    let mut near_equal = [r.c_r, r.d_r];
    near_equal.sort_by(f64::total_cmp);
    let m = m_from_omega(0.011);
    Ok(outcome(
        &[
            ("a_r", r.a_r == 0.4902264),
            ("b_r", r.b_r == 0.2989634),
            ("c_r/d_r values", near_equal == [0.3603434, 0.3604034]),
            ("b < d < c", r.b_r < r.d_r && r.d_r < r.c_r),
            ("omega", r.omega == 0.011),
            ("m", r.m == 0.391),
            ("Z", r.z == 0.286),
            ("T_c", c.t_c == 190.56),
            ("p_c", c.p_c == 4.5992),
            ("v_c", c.v_c == 98.63),
            ("m_from_omega", (m - 0.3916).abs() <= 5e-4),
        ],
        format!("m_from_omega(0.011) = {m:.6}"),
    ))
}

fn c2_critical() -> Result<Outcome> {
    let e = methane();
    let start = Instant::now();
    let p11 = e.pressure(1.0, 1.0)?;
    let cp = e.critical_point(None)?;
    let elapsed = start.elapsed();
    let within = |x: f64| (x - 1.0).abs() <= 0.1;
    Ok(outcome(
        &[
            ("p_r(1,1) = 1.0146 +- 1e-4", (p11 - 1.0146).abs() <= 1e-4),
            ("|p_r(1,1) - 1| < 0.05", (p11 - 1.0).abs() < 0.05),
            ("critical point within 10% of (1,1,1)", within(cp.v) && within(cp.t) && within(cp.p)),
            ("residuals < 1e-10", cp.residuals.iter().all(|r| r.abs() < 1e-10)),
            ("runtime < 1 s", elapsed < Duration::from_secs(1)),
        ],
        format!(
            "p_r(1,1) = {p11:.7}; critical (v, T, p) = ({:.6}, {:.6}, {:.6}); residuals {:.1e}, {:.1e}",
            cp.v, cp.t, cp.p, cp.residuals[0], cp.residuals[1]
        ),
    ))
}

/// Random state on either branch, kept clear of `b`, `d` and `c`.
fn random_state(e: &Mslv, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let (b, d, c) = (e.covolume(), e.solid_limit(), e.fluid_limit());
    let v = if rng.random_bool(0.5) {
        b + (d - b) * rng.random_range(0.01..0.99)
    } else {
        c + 10f64.powf(rng.random_range(-2.0..1.3))
    };
    (v, rng.random_range(0.3..3.0))
}

fn c3_derivatives() -> Result<Outcome> {
    let e = methane();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let start = Instant::now();
    let (mut first, mut higher, mut anti) = (0f64, 0f64, 0f64);
    let fd = |f: &dyn Fn(f64) -> Result<f64>, x: f64, scale: f64| fd_derivative_richardson(f, x, FdOrder::First, scale);
    for _ in 0..200 {
        let (v, t) = random_state(&e, &mut rng);
        // Steps of 1e-3 of the distance to the nearest singularity, for first
        // and second differences alike.
        let sv = e.fd_volume_scale(v);
        let st = 1.0;
        let pb = e.potential_bundle(v, t)?;
        let rep = e.repulsive_terms(v)?;
        let geo = e.attractive_geometry(v)?;
        let at = e.attraction(t)?;
        let bundle = |v: f64, t: f64| e.potential_bundle(v, t);
        first = first
            .max(rel(fd(&|x| Ok(bundle(x, t)?.phi), v, sv)?, pb.phi_v))
            .max(rel(fd(&|x| Ok(bundle(v, x)?.phi), t, st)?, pb.phi_t))
            .max(rel(fd(&|x| Ok(e.repulsive_terms(x)?.f), v, sv)?, rep.f_prime))
            .max(rel(fd(&|x| Ok(e.attractive_geometry(x)?.g), v, sv)?, geo.g_prime))
            .max(rel(fd(&|x| Ok(e.attraction(x)?.q), t, st)?, at.q_prime));
        higher = higher
            .max(rel(fd(&|x| Ok(bundle(x, t)?.phi_v), v, sv)?, pb.phi_vv))
            .max(rel(fd(&|x| Ok(bundle(x, t)?.phi_vv), v, sv)?, pb.phi_vvv))
            .max(rel(fd(&|x| Ok(bundle(v, x)?.phi_t), t, st)?, pb.phi_tt))
            .max(rel(fd(&|x| Ok(e.attraction(x)?.q_prime), t, st)?, at.q_second))
            .max(rel(fd_derivative_richardson(|x| Ok(bundle(x, t)?.phi), v, FdOrder::Second, 1e-2 * sv)?, pb.phi_vv));
        anti = anti
            .max(rel(fd(&|x| Ok(e.repulsive_terms(x)?.big_f), v, sv)?, rep.f))
            .max(rel(fd(&|x| Ok(e.attractive_geometry(x)?.big_g), v, sv)?, geo.g));
    }
    let elapsed = start.elapsed();
    Ok(outcome(
        &[
            ("first derivatives < 1e-6", first < 1e-6),
            ("second/third derivatives < 1e-4", higher < 1e-4),
            ("F' = f, G' = g < 1e-8", anti < 1e-8),
            ("runtime < 1 s", elapsed < Duration::from_secs(1)),
        ],
        format!("200 points; max relative error {first:.1e} / {higher:.1e} / {anti:.1e}; {elapsed:.2?}"),
    ))
}

fn c4_spinodal() -> Result<Outcome> {
    let e = methane();
    let start = Instant::now();
    let (mut on_curve, mut vs_bisection, mut t2_negative, mut valid) = (0f64, 0f64, true, true);
    for v in Spacing::Log.points(e.fluid_limit() + 0.05, 20.0, 100) {
        let roots = e.spinodal_sqrt_t(v)?;
        valid &= roots.t1_valid;
        t2_negative &= roots.t2 < 0.0;
        let phi_vv = |t: f64| Ok(e.potential_bundle(v, t * t)?.phi_vv);
        on_curve = on_curve.max(phi_vv(roots.t1)?.abs());
        let hi = (1.0 + 1.0 / e.m()) * (1.0 - 1e-9);
        let root = bracket_root(phi_vv, 1e-3, hi, 0.0)?.solution;
        vs_bisection = vs_bisection.max((root - roots.t1).abs());
    }
    let elapsed = start.elapsed();
    Ok(outcome(
        &[
            ("t1 valid", valid),
            ("phi_vv(v, t1^2) = 0 to 1e-10", on_curve < 1e-10),
            ("t1 matches bracketing root to 1e-10", vs_bisection < 1e-10),
            ("t2 < 0", t2_negative),
            ("runtime < 1 s", elapsed < Duration::from_secs(1)),
        ],
        format!("100 volumes; max |phi_vv| {on_curve:.1e}; max |t1 - root| {vs_bisection:.1e}"),
    ))
}

fn c5_caloric() -> Result<Outcome> {
    let e = methane();
    let start = Instant::now();
    let (slo, shi) = e.branch_interval(Branch::Solid);
    let (flo, _) = e.branch_interval(Branch::Fluid);
    let mut vols = Spacing::Linear.points(slo, shi, 100);
    vols.extend(Spacing::Log.points(flo, 50.0, 100));
    let mut min = f64::INFINITY;
    for t in Spacing::Linear.points(0.3, 3.0, 200) {
        for &v in &vols {
            min = min.min(e.caloric_condition(v, t)?);
        }
    }
    let elapsed = start.elapsed();
    Ok(outcome(
        &[("T phi_TT + 2 phi_T > 0", min > 0.0), ("runtime < 1 s", elapsed < Duration::from_secs(1))],
        format!("200 x 200 grid; minimum {min:.4e}"),
    ))
}

fn c6_liquid_vapor() -> Result<Outcome> {
    let e = methane();
    let start = Instant::now();
    let solver = PhaseSolver::new(&e)?;
    let pt = solver.equilibrium_at_t(0.9, PhasePair::LiquidVapor, None)?;
    let r = pt.residuals;
    let maxwell = r.maxwell.unwrap_or(f64::INFINITY);
    let tau = e.tau_from_h(e.h_slope(pt.v1, pt.v2)?)?.tau1;
    let tau_err = (tau - 0.9f64.sqrt()).abs();
    // Numerator without the (1 + m) factor.
    let h = e.h_slope(pt.v1, pt.v2)?;
    let (sa, sh) = (e.a().sqrt(), (e.critical_temperature() * h).sqrt());
    let uncorrected = e.m() * sa / (sh + e.m() * sa);
    let tp = uncorrected * uncorrected;
    let q = e.attraction(tp)?.q;
    let uncorrected_miss = (q - tp * h).abs() / q;
    let elapsed = start.elapsed();
    Ok(outcome(
        &[
            ("residuals < 1e-10", r.delta_phi_v.abs() < 1e-10 && r.delta_gibbs.abs() < 1e-10),
            ("pressure equality < 1e-9", r.pressure_rel < 1e-9),
            ("Gibbs equality < 1e-8", r.gibbs_rel < 1e-8),
            ("Maxwell residual < 1e-8", maxwell.abs() < 1e-8),
            ("tau closed form to 1e-9", tau_err < 1e-9),
            ("uncorrected numerator misses quadratic by > 1e-2", uncorrected_miss > 1e-2),
            ("runtime < 1 s", elapsed < Duration::from_secs(1)),
        ],
        format!(
            "v1 = {:.6}, v2 = {:.6}, p = {:.6}; residuals {:.1e}, {:.1e}; Maxwell {maxwell:.1e}; |tau - sqrt T| {tau_err:.1e}; uncorrected numerator miss {uncorrected_miss:.2}",
            pt.v1, pt.v2, pt.p, r.delta_phi_v, r.delta_gibbs
        ),
    ))
}

fn c7_topology() -> Result<Outcome> {
    let e = methane();
    let start = Instant::now();
    let solver = PhaseSolver::new(&e)?;
    let t_crit = solver.critical().t;
    let lv = solver.trace_binodal(PhasePair::LiquidVapor, 0.35, 1.0, 60)?;
    let sv = solver.trace_binodal(PhasePair::SolidVapor, 0.35, 1.0, 60)?;
    let sl = solver.trace_binodal(PhasePair::SolidLiquid, 0.35, 1.5, 60)?;
    let near_critical = lv.points.iter().any(|p| p.v2 - p.v1 < 1e-3 && t_crit - p.t <= 1e-4);
    let monotone = |c: &[mslv::phase::EquilibriumPoint]| c.windows(2).all(|w| w[1].t > w[0].t && w[1].p > w[0].p);
    let tp = solver.triple_point(None)?;
    let (lo, hi) = (tp.t - 0.02, tp.t + 0.02);
    let mut worst = 0f64;
    for (a, b) in [
        (PhasePair::SolidLiquid, PhasePair::LiquidVapor),
        (PhasePair::SolidVapor, PhasePair::LiquidVapor),
        (PhasePair::SolidLiquid, PhasePair::SolidVapor),
    ] {
        let (t, p) = solver.curve_intersection(a, b, lo, hi)?;
        worst = worst.max((t - tp.t).abs()).max((p - tp.p).abs());
    }
    let triple_ends = matches!(lv.start, Terminus::TriplePoint(_))
        && matches!(sv.end, Terminus::TriplePoint(_))
        && matches!(sl.start, Terminus::TriplePoint(_));
    let elapsed = start.elapsed();
    let last = lv.points.last().unwrap();
    Ok(outcome(
        &[
            ("L-V ends at the critical point", matches!(lv.end, Terminus::CriticalPoint(_))),
            ("v2 - v1 < 1e-3 within 1e-4 of T_crit", near_critical),
            ("p increasing along all curves", monotone(&lv.points) && monotone(&sv.points) && monotone(&sl.points)),
            ("pairwise intersections within 1e-6 of the triple point", worst < 1e-6),
            ("triple T in (0.4, 0.6)", tp.t > 0.4 && tp.t < 0.6),
            ("curves meet at one triple point", triple_ends),
            ("runtime < 30 s", elapsed < Duration::from_secs(30)),
        ],
        format!(
            "triple (T, p) = ({:.8}, {:.8e}); worst intersection offset {worst:.1e}; last L-V gap {:.1e} at T_crit - T = {:.1e}; {elapsed:.2?}",
            tp.t,
            tp.p,
            last.v2 - last.v1,
            t_crit - last.t
        ),
    ))
}

fn c8_domain() -> Result<Outcome> {
    let e = methane();
    let start = Instant::now();
    let (d, c) = (e.solid_limit(), e.fluid_limit());
    let mut leaks = Vec::new();
    for i in 0..=20 {
        let v = d + (c - d) * i as f64 / 20.0;
        let t = 0.8;
        let results = [
            ("pressure", e.pressure(v, t).ok()),
            ("pressure_dv", e.pressure_dv(v, t).ok()),
            ("caloric_condition", e.caloric_condition(v, t).ok()),
            ("potential_bundle", e.potential_bundle(v, t).ok().map(|b| b.phi)),
            ("state", e.state(v, t).ok().map(|s| s.p)),
            ("applicability", e.applicability(v, t).ok().map(|a| a.phi_vv_value)),
            ("repulsive_terms", e.repulsive_terms(v).ok().map(|r| r.f)),
            ("attractive_geometry", e.attractive_geometry(v).ok().map(|g| g.g)),
            ("spinodal_sqrt_t", e.spinodal_sqrt_t(v).ok().map(|r| r.t1)),
            ("h_limit", e.h_limit(v).ok()),
            ("h_slope", e.h_slope(v, 2.0).ok()),
            ("maxwell_residual", e.maxwell_residual(v, 2.0, t).ok()),
            ("reduced_gibbs_energy", e.reduced_gibbs_energy(v, t).ok()),
        ];
        leaks.extend(results.iter().filter(|(_, r)| r.is_some_and(f64::is_finite)).map(|(n, _)| *n));
    }
    let ctx = Context::new(Gas::methane(), Units::Reduced)?;
    let iso = ctx.isotherm(0.8, 0.3, 10.0, 200, Spacing::Log)?;
    let mesh = ctx.manifold((0.3, 10.0), (0.4, 0.9), 30, 10, Spacing::Log, false)?;
    let in_gap = |s: &CurveSeries| s.rows().any(|r| r[0] >= d && r[0] <= c);
    let elapsed = start.elapsed();
    Ok(outcome(
        &[
            ("no finite value in [d, c]", leaks.is_empty()),
            ("isotherm has two segments", iso.segments.len() == 2),
            ("manifold has two sheets", mesh.segments.len() == 2),
            ("exports avoid [d, c]", !in_gap(&iso) && !in_gap(&mesh)),
            ("runtime < 1 s", elapsed < Duration::from_secs(1)),
        ],
        format!("13 operations x 21 volumes; leaks: {leaks:?}"),
    ))
}

fn c9_h_limit() -> Result<Outcome> {
    let e = methane();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let start = Instant::now();
    let (b, d, c) = (e.covolume(), e.solid_limit(), e.fluid_limit());
    let mut worst = 0f64;
    for branch in [Branch::Solid, Branch::Fluid] {
        for _ in 0..20 {
            let v1 = match branch {
                Branch::Solid => b + (d - b) * rng.random_range(0.1..0.9),
                Branch::Fluid => c + 10f64.powf(rng.random_range(-1.5..1.3)),
            };
            let dv = 1e-5 * v1;
            // Symmetric pair around v1.
            let fd = e.h_slope(v1 - 0.5 * dv, v1 + 0.5 * dv)?;
            worst = worst.max(rel(fd, e.h_limit(v1)?));
        }
    }
    let elapsed = start.elapsed();
    Ok(outcome(
        &[("limit matches -df/dg to 1e-6", worst < 1e-6), ("runtime < 1 s", elapsed < Duration::from_secs(1))],
        format!("20 volumes per branch; max relative difference {worst:.1e}"),
    ))
}

fn all_commands(ctx: &Context) -> Result<Vec<CurveSeries>> {
    Ok(vec![
        ctx.isotherm(0.8, 0.3, 10.0, 100, Spacing::Log)?,
        ctx.singularity(0.3, 10.0, 50, Spacing::Log, Plane::VT)?,
        ctx.binodal(PhasePair::LiquidVapor, 0.35, 1.0, 20, Plane::TP)?,
        ctx.critical()?,
        ctx.triple()?,
        ctx.maxwell_check(PhasePair::LiquidVapor, 0.9)?,
        ctx.manifold((0.3, 10.0), (0.4, 1.5), 20, 10, Spacing::Log, true)?,
        ctx.spinodal_roots(0.3, 10.0, 50, Spacing::Log)?,
        ctx.tau_roots(0.6, 3.6)?,
    ])
}

fn c10_determinism() -> Result<Outcome> {
    let mut ctx = Context::new(Gas::methane(), Units::Reduced)?;
    ctx.log_columns = true;
    let (a, b) = (all_commands(&ctx)?, all_commands(&ctx)?);
    let mut identical = true;
    let mut exact = true;
    for (x, y) in a.iter().zip(&b) {
        identical &= x.to_csv() == y.to_csv() && x.to_json() == y.to_json();
        let back = CurveSeries::from_csv(&x.to_csv())?;
        exact &= back.columns == x.columns
            && back.segments.len() == x.segments.len()
            && back.rows().zip(x.rows()).all(|(p, q)| p.iter().zip(q).all(|(u, w)| u.to_bits() == w.to_bits()));
    }
    Ok(outcome(
        &[("byte-identical repeated exports", identical), ("CSV re-import exact", exact)],
        format!("{} commands, CSV and JSON", a.len()),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("methane constants", c1_constants),
        ("critical consistency", c2_critical),
        ("derivative suite", c3_derivatives),
        ("spinodal closed form", c4_spinodal),
        ("caloric positivity", c5_caloric),
        ("liquid-vapor equilibrium at T = 0.9", c6_liquid_vapor),
        ("binodal topology", c7_topology),
        ("domain discipline", c8_domain),
        ("h-limit identity", c9_h_limit),
        ("export determinism", c10_determinism),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run().unwrap_or_else(|err| Outcome { pass: false, detail: format!("error: {err}") });
        failures += usize::from(!o.pass);
        println!("criterion {:>2} {} ({name}): {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
