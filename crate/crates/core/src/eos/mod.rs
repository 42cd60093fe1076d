//! The modified solid-liquid-vapor equation of state.
//!
//! Pressure is `p = T f(v) + q(T) g(v)` with
//!
//! * `f(v) = R (v - d) / ((v - b)(v - c))`,
//! * `g(v) = -1 / (v² + 2 b v - b²)`,
//! * `q(T) = a (1 + m (1 - sqrt(T / T_c)))²`.
//!
//! The equation is defined on two disjoint pieces of the volume axis: the
//! solid branch `b < v < d` and the fluid branch `v > c`. Everything else
//! (potentials, caloric equation, entropy, enthalpy, Gibbs energy) follows
//! from the Massieu-Plank potential
//! `phi = F(v)/R + q(T) G(v)/(R T) + (n/2) ln T`, with `F` and `G` the
//! antiderivatives of `f` and `g`.
//!
//! [`Mslv`] works in any consistent unit system. [`Mslv::reduced`] uses
//! `R = 1/Z`, `a = a_r/Z²`, `T_c = 1`, so that pressures come out in units of
//! `p_c`, volumes in `v_c`, and molar energies in `p_c v_c`.

mod params;
mod state;
mod terms;

pub use params::{
    m_from_omega, CriticalConstants, GasParameters, ParameterWarning, ReducedParameters, GAS_CONSTANT,
    OMEGA_BRANCH_POINT,
};
pub use state::{PotentialBundle, StatePoint};
pub use terms::{Attraction, AttractiveGeometry, Repulsive};

use crate::error::{MslvError, Result};

/// Evaluations closer than this (in units of `v_c`) to `b`, `d` or `c` are rejected.
pub const DISCONTINUITY_GUARD: f64 = 1e-9;

/// Which piece of the volume axis a molar volume falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Solid,
    Forbidden,
    Fluid,
    OutOfDomain,
}

/// The two sheets of the state surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Solid,
    Fluid,
}

impl Branch {
    /// Numeric code used in exported tables.
    pub fn code(self) -> f64 {
        match self {
            Branch::Solid => 0.0,
            Branch::Fluid => 1.0,
        }
    }
}

/// Raw coefficients of the equation in one consistent unit system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EosCoefficients {
    pub r: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub m: f64,
    pub n: f64,
    pub t_c: f64,
    /// Volume scale the discontinuity guard is measured against.
    pub v_scale: f64,
}

/// An instance of the equation of state for one substance.
#[derive(Debug, Clone, PartialEq)]
pub struct Mslv {
    pub(crate) r: f64,
    pub(crate) a: f64,
    pub(crate) b: f64,
    pub(crate) c: f64,
    pub(crate) d: f64,
    pub(crate) m: f64,
    pub(crate) n: f64,
    pub(crate) t_c: f64,
    scale: CriticalConstants,
    guard: f64,
}

impl Mslv {
    /// Builds from raw coefficients.
    ///
    /// Requires `0 < b < d < c`, or `b = c = d` (which turns off the solid
    /// branch; with `a = b = 0` the equation reduces to the ideal gas).
    pub fn from_coefficients(k: EosCoefficients) -> Result<Self> {
        for (name, v) in [("R", k.r), ("T_c", k.t_c), ("volume scale", k.v_scale)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(MslvError::Validation(format!("{name} must be positive, got {v}")));
            }
        }
        if !(k.a >= 0.0 && k.n >= 0.0 && k.m.is_finite()) {
            return Err(MslvError::Validation(format!(
                "a and n must be non-negative and m finite (a = {}, n = {}, m = {})",
                k.a, k.n, k.m
            )));
        }
        let ordered = k.b > 0.0 && k.b < k.d && k.d < k.c;
        let collapsed = k.b >= 0.0 && k.b == k.c && k.c == k.d;
        if !(ordered || collapsed) {
            return Err(MslvError::Validation(format!(
                "b < d < c violated (b = {}, d = {}, c = {})",
                k.b, k.d, k.c
            )));
        }
        Ok(Self {
            r: k.r,
            a: k.a,
            b: k.b,
            c: k.c,
            d: k.d,
            m: k.m,
            n: k.n,
            t_c: k.t_c,
            scale: CriticalConstants { t_c: k.t_c, p_c: 1.0, v_c: k.v_scale },
            guard: DISCONTINUITY_GUARD * k.v_scale,
        })
    }

    /// Reduced-variable instance: temperatures in `T_c`, pressures in `p_c`,
    /// volumes in `v_c`, molar energies in `p_c v_c`.
    pub fn reduced(p: &ReducedParameters) -> Result<Self> {
        p.validate()?;
        Self::from_coefficients(EosCoefficients {
            r: 1.0 / p.z,
            a: p.a_r / (p.z * p.z),
            b: p.b_r,
            c: p.c_r,
            d: p.d_r,
            m: p.m,
            n: p.n,
            t_c: 1.0,
            v_scale: 1.0,
        })
        .map(|mut e| {
            e.scale = CriticalConstants::UNIT;
            e
        })
    }

    /// Dimensional instance in MPa, cm³/mol, K and J/mol.
    pub fn dimensional(p: &GasParameters) -> Result<Self> {
        p.validate()?;
        Self::from_coefficients(EosCoefficients {
            r: GAS_CONSTANT,
            a: p.a,
            b: p.b,
            c: p.c,
            d: p.d,
            m: p.m,
            n: p.n,
            t_c: p.t_c,
            v_scale: p.v_c,
        })
        .map(|mut e| {
            e.scale = p.critical();
            e
        })
    }

    pub fn coefficients(&self) -> EosCoefficients {
        EosCoefficients {
            r: self.r,
            a: self.a,
            b: self.b,
            c: self.c,
            d: self.d,
            m: self.m,
            n: self.n,
            t_c: self.t_c,
            v_scale: self.scale.v_c,
        }
    }

    /// Critical constants of the unit system this instance works in
    /// (all ones for a reduced instance).
    pub fn scale(&self) -> CriticalConstants {
        self.scale
    }

    pub fn gas_constant(&self) -> f64 {
        self.r
    }

    pub fn covolume(&self) -> f64 {
        self.b
    }

    /// Upper end of the solid branch.
    pub fn solid_limit(&self) -> f64 {
        self.d
    }

    /// Lower end of the fluid branch.
    pub fn fluid_limit(&self) -> f64 {
        self.c
    }

    pub fn critical_temperature(&self) -> f64 {
        self.t_c
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Absolute distance from `b`, `d`, `c` inside which evaluation is refused.
    pub fn guard(&self) -> f64 {
        self.guard
    }

    /// Open interval of admissible volumes on `branch`, shrunk by twice the
    /// guard so that both ends can be evaluated.
    /// The fluid interval is unbounded above.
    pub fn branch_interval(&self, branch: Branch) -> (f64, f64) {
        match branch {
            Branch::Solid => (self.b + 2.0 * self.guard, self.d - 2.0 * self.guard),
            Branch::Fluid => (self.c + 2.0 * self.guard, f64::INFINITY),
        }
    }

    pub fn classify_domain(&self, v: f64) -> Domain {
        if v.is_nan() || v <= self.b {
            Domain::OutOfDomain
        } else if v < self.d {
            Domain::Solid
        } else if v <= self.c {
            Domain::Forbidden
        } else {
            Domain::Fluid
        }
    }

    /// Validates `v` for evaluation and returns its branch.
    pub fn branch_of(&self, v: f64) -> Result<Branch> {
        if !v.is_finite() || v <= self.b + self.guard {
            return Err(MslvError::Domain(format!(
                "molar volume {v} must exceed b = {} by more than {}",
                self.b, self.guard
            )));
        }
        if v >= self.d - self.guard && v <= self.c + self.guard {
            return Err(MslvError::ForbiddenRegion(v));
        }
        Ok(if v < self.d { Branch::Solid } else { Branch::Fluid })
    }

    /// Distance from `v` to the nearest of `b`, `d`, `c`.
    pub fn singular_distance(&self, v: f64) -> f64 {
        [self.b, self.d, self.c]
            .iter()
            .map(|x| (v - x).abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// Finite-difference scale (see [`crate::numerics::fd_derivative`]) whose
    /// volume step is a thousandth of the distance to the nearest singularity.
    pub fn fd_volume_scale(&self, v: f64) -> f64 {
        1e-3 * self.singular_distance(v) / (v.abs().max(1.0) * 1e-6)
    }

    pub(crate) fn check_temperature(t: f64) -> Result<()> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(MslvError::Domain(format!("temperature must be positive, got {t}")));
        }
        Ok(())
    }

    fn check_state(&self, v: f64, t: f64) -> Result<Branch> {
        Self::check_temperature(t)?;
        self.branch_of(v)
    }

    /// Thermic equation of state.
    pub fn pressure(&self, v: f64, t: f64) -> Result<f64> {
        self.check_state(v, t)?;
        Ok(t * self.f_unchecked(v) + self.attraction(t)?.q * self.g_unchecked(v))
    }

    /// Isothermal slope `(dp/dv)_T`.
    pub fn pressure_dv(&self, v: f64, t: f64) -> Result<f64> {
        self.check_state(v, t)?;
        let rep = self.repulsive_terms(v)?;
        let att = self.attractive_geometry(v)?;
        Ok(t * rep.f_prime + self.attraction(t)?.q * att.g_prime)
    }

    /// `T phi_TT + 2 phi_T = q''(T) G(v) / R + n / (2T)`; positive where the
    /// caloric equation is stable.
    pub fn caloric_condition(&self, v: f64, t: f64) -> Result<f64> {
        self.check_state(v, t)?;
        let att = self.attraction(t)?;
        Ok(att.q_second * self.attractive_geometry(v)?.big_g / self.r + self.n / (2.0 * t))
    }

    /// `gamma / (R T)` up to the state-independent `(n/2) ln T` term, i.e.
    /// `v phi_v - F/R - q G / (R T)`. Equal values at two volumes on one
    /// isotherm mean equal molar Gibbs energy.
    pub(crate) fn reduced_gibbs(&self, v: f64, t: f64) -> Result<f64> {
        self.check_state(v, t)?;
        let q = self.attraction(t)?.q;
        let rep = self.repulsive_terms(v)?;
        let att = self.attractive_geometry(v)?;
        let rt = self.r * t;
        let p = t * rep.f + q * att.g;
        Ok(p * v / rt - rep.big_f / self.r - q * att.big_g / rt)
    }

    /// `reduced_gibbs(v1, t) - reduced_gibbs(v2, t)` built from differences,
    /// so it keeps its relative accuracy when the volumes are close.
    ///
    /// When both volumes are known roots of `p(v, T) = p0`, passing `p0` uses
    /// the form `p0 (v1 - v2) / (R T) - ...`, which is stationary in either
    /// volume and so insensitive to their rounding.
    pub(crate) fn gibbs_difference(&self, v1: f64, v2: f64, t: f64, p0: Option<f64>) -> Result<f64> {
        self.check_state(v1, t)?;
        self.check_state(v2, t)?;
        let (b, c, d, r) = (self.b, self.c, self.d, self.r);
        let dv = v1 - v2;
        let rt = r * t;
        let q = self.attraction(t)?.q;
        let pv = match p0 {
            Some(p) => p * dv,
            None => {
                let (p1, p2) = (self.pressure(v1, t)?, self.pressure(v2, t)?);
                p1 * dv + (p1 - p2) * v2
            }
        };
        let ln_ratio = |x1: f64, x2: f64| {
            if x1 * x2 > 0.0 {
                ((x1 - x2) / x2).ln_1p()
            } else {
                (x1 / x2).abs().ln()
            }
        };
        let df = if c == b {
            r * ln_ratio(v1 - b, v2 - b)
        } else {
            r * ((d - b) * ln_ratio(v1 - b, v2 - b) + (c - d) * ln_ratio(v1 - c, v2 - c)) / (c - b)
        };
        let dg = if b == 0.0 {
            1.0 / v1 - 1.0 / v2
        } else {
            let s = std::f64::consts::SQRT_2 * b;
            ((dv / (v2 + b + s)).ln_1p() - (dv / (v2 + b - s)).ln_1p()) / (2.0 * s)
        };
        Ok(pv / rt - df / r - q * dg / rt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gases;

    fn methane() -> Mslv {
        Mslv::reduced(&gases::methane().reduce()).unwrap()
    }

    #[test]
    fn classify_methane_volumes() {
        let e = methane();
        assert_eq!(e.classify_domain(0.32), Domain::Solid);
        assert_eq!(e.classify_domain(0.36035), Domain::Forbidden);
        assert_eq!(e.classify_domain(1.0), Domain::Fluid);
        assert_eq!(e.classify_domain(0.2), Domain::OutOfDomain);
        assert_eq!(e.classify_domain(e.b), Domain::OutOfDomain);
        assert_eq!(e.classify_domain(e.d), Domain::Forbidden);
        assert_eq!(e.classify_domain(e.c), Domain::Forbidden);
    }

    #[test]
    fn forbidden_gap_and_guard_are_rejected() {
        let e = methane();
        for v in [e.d, e.c, 0.5 * (e.c + e.d), e.d - 0.5e-9, e.c + 0.5e-9] {
            assert!(matches!(e.pressure(v, 0.8), Err(MslvError::ForbiddenRegion(_))), "v = {v}");
        }
        assert!(matches!(e.pressure(e.b + 0.5e-9, 0.8), Err(MslvError::Domain(_))));
        assert!(matches!(e.pressure(1.0, 0.0), Err(MslvError::Domain(_))));
        assert!(e.pressure(e.d - 2e-9, 0.8).is_ok());
    }

    #[test]
    fn ideal_gas_limit() {
        let e = Mslv::from_coefficients(EosCoefficients {
            r: GAS_CONSTANT,
            a: 0.0,
            b: 0.0,
            c: 0.0,
            d: 0.0,
            m: 0.4,
            n: 3.0,
            t_c: 190.0,
            v_scale: 100.0,
        })
        .unwrap();
        for (v, t) in [(10.0, 100.0), (2500.0, 300.0), (1e5, 17.0)] {
            let p = e.pressure(v, t).unwrap();
            assert!((p - GAS_CONSTANT * t / v).abs() <= 1e-14 * p);
        }
    }

    #[test]
    fn pressure_vanishes_at_large_volume() {
        let e = methane();
        let p = e.pressure(1e9, 0.7).unwrap();
        assert!(p > 0.0 && p < 1e-8);
    }

    #[test]
    fn reduced_critical_pressure_direct_evaluation() {
        // Reduced equation written out term by term.
        let (a_r, b_r, c_r, d_r, z) = (0.4902264, 0.2989634, 0.3604034, 0.3603434, 0.286);
        let expected = 1.0 / (z * (1.0 - b_r)) * (1.0 - d_r) / (1.0 - c_r) - a_r / (z * z * (1.0 + 2.0 * b_r - b_r * b_r));
        let p = methane().pressure(1.0, 1.0).unwrap();
        assert!((p - expected).abs() < 1e-14);
        assert!((p - 1.0).abs() < 0.05);
    }

    #[test]
    fn gibbs_difference_matches_direct_difference() {
        let e = methane();
        for (v1, v2, t) in [(0.33, 0.5, 0.6), (0.6, 3.6, 0.9), (1.1, 1.3, 0.98), (0.358, 300.0, 0.5)] {
            let direct = e.reduced_gibbs(v1, t).unwrap() - e.reduced_gibbs(v2, t).unwrap();
            let diff = e.gibbs_difference(v1, v2, t, None).unwrap();
            assert!((diff - direct).abs() < 1e-12 * direct.abs().max(1.0), "{v1} {v2}");
        }
    }
}
