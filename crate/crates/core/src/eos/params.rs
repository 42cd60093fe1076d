//! Per-substance constants in dimensional and reduced form.

use crate::error::{MslvError, Result};

/// Universal gas constant, J/(K mol). With pressures in MPa and molar volumes
/// in cm³/mol, `p v` comes out directly in J/mol.
pub const GAS_CONSTANT: f64 = 8.314463;

/// Acentric factor at which the attraction coefficient switches polynomial.
pub const OMEGA_BRANCH_POINT: f64 = 0.491;

/// Relative mismatch between a stated and a derived quantity above which a
/// warning is issued.
const EXACT_MATCH: f64 = 1e-12;
/// Stated `m` may differ from the polynomial in `omega` by this much before a warning.
const M_WARN_TOL: f64 = 1e-3;
/// Stated `Z` further than this (relative) from `p_c v_c / (R T_c)` is rejected.
const Z_REJECT_TOL: f64 = 5e-2;

/// Attraction temperature coefficient from the acentric factor.
///
/// `omega = 0.491` is assigned to the low branch.
pub fn m_from_omega(omega: f64) -> f64 {
    if omega <= OMEGA_BRANCH_POINT {
        0.37464 + 1.54226 * omega - 0.26992 * omega * omega
    } else {
        0.374642 + 1.48504 * omega - 0.164423 * omega * omega + 0.016666 * omega * omega * omega
    }
}

/// Critical constants used to move between reduced and dimensional units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalConstants {
    /// K
    pub t_c: f64,
    /// MPa
    pub p_c: f64,
    /// cm³/mol
    pub v_c: f64,
}

impl CriticalConstants {
    /// Scale factors of reduced units: every reduced quantity is a dimensional
    /// one divided by these.
    pub const UNIT: CriticalConstants = CriticalConstants { t_c: 1.0, p_c: 1.0, v_c: 1.0 };

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("T_c", self.t_c), ("p_c", self.p_c), ("v_c", self.v_c)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(MslvError::Validation(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Molar energy scale `p_c v_c`, J/mol.
    pub fn energy(&self) -> f64 {
        self.p_c * self.v_c
    }

    /// Molar entropy scale `p_c v_c / T_c`, J/(K mol).
    pub fn entropy(&self) -> f64 {
        self.p_c * self.v_c / self.t_c
    }

    /// `p_c v_c / (R T_c)`.
    pub fn compressibility(&self) -> f64 {
        self.p_c * self.v_c / (GAS_CONSTANT * self.t_c)
    }
}

/// Non-fatal findings from parameter validation.
#[derive(Debug, Clone, PartialEq)]
pub enum ParameterWarning {
    /// Stated `m` differs from the acentric-factor polynomial.
    MDiffersFromOmega { stated: f64, derived: f64 },
    /// Stated `Z` differs from `p_c v_c / (R T_c)`.
    ZDiffersFromCritical { stated: f64, derived: f64 },
}

impl std::fmt::Display for ParameterWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParameterWarning::MDiffersFromOmega { stated, derived } => {
                write!(f, "m = {stated} differs from m(omega) = {derived}")
            }
            ParameterWarning::ZDiffersFromCritical { stated, derived } => {
                write!(f, "Z = {stated} differs from p_c v_c / (R T_c) = {derived}")
            }
        }
    }
}

fn check_volumes(b: f64, c: f64, d: f64) -> Result<()> {
    if !(b > 0.0 && b < d && d < c) || ![b, c, d].iter().all(|x| x.is_finite()) {
        return Err(MslvError::Validation(format!(
            "b < d < c violated (b = {b}, d = {d}, c = {c})"
        )));
    }
    Ok(())
}

fn check_positive(items: &[(&str, f64)]) -> Result<()> {
    for &(name, v) in items {
        if !(v > 0.0 && v.is_finite()) {
            return Err(MslvError::Validation(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(())
}

fn check_m(omega: f64, m: f64, warnings: &mut Vec<ParameterWarning>) -> Result<()> {
    if !omega.is_finite() {
        return Err(MslvError::Validation(format!("omega must be finite, got {omega}")));
    }
    let derived = m_from_omega(omega);
    if (m - derived).abs() > M_WARN_TOL {
        warnings.push(ParameterWarning::MDiffersFromOmega { stated: m, derived });
    }
    Ok(())
}

/// Dimensional constants of one substance (MPa, cm³/mol, K).
#[derive(Debug, Clone, PartialEq)]
pub struct GasParameters {
    pub name: String,
    /// Attraction strength, MPa cm⁶/mol².
    pub a: f64,
    /// Minimum molar volume of the solid.
    pub b: f64,
    /// Minimum molar volume of the liquid.
    pub c: f64,
    /// Maximum molar volume of the solid.
    pub d: f64,
    pub omega: f64,
    pub m: f64,
    /// Degrees of freedom in the ideal-gas caloric term.
    pub n: f64,
    pub t_c: f64,
    pub p_c: f64,
    pub v_c: f64,
    /// Critical compressibility used by the reduced equation.
    pub z: f64,
}

impl GasParameters {
    pub fn critical(&self) -> CriticalConstants {
        CriticalConstants { t_c: self.t_c, p_c: self.p_c, v_c: self.v_c }
    }

    /// Checks every invariant; returns the non-fatal warnings.
    ///
    /// `Z` is allowed to deviate from `p_c v_c / (R T_c)` by a few percent
    /// because tabulated equation-of-state constants are fitted, not derived;
    /// any deviation is reported as a warning.
    pub fn validate(&self) -> Result<Vec<ParameterWarning>> {
        check_volumes(self.b, self.c, self.d)?;
        check_positive(&[("a", self.a), ("m", self.m), ("n", self.n), ("Z", self.z)])?;
        self.critical().validate()?;
        let mut warnings = Vec::new();
        check_m(self.omega, self.m, &mut warnings)?;
        let derived = self.critical().compressibility();
        let rel = (self.z - derived).abs() / derived;
        if rel > Z_REJECT_TOL {
            return Err(MslvError::Validation(format!(
                "Z = {} inconsistent with p_c v_c / (R T_c) = {derived}",
                self.z
            )));
        }
        if rel > EXACT_MATCH {
            warnings.push(ParameterWarning::ZDiffersFromCritical { stated: self.z, derived });
        }
        Ok(warnings)
    }

    /// Reduced constants: volumes over `v_c`, `a_r = p_c a / (R T_c)²`.
    pub fn reduce(&self) -> ReducedParameters {
        let rt = GAS_CONSTANT * self.t_c;
        ReducedParameters {
            name: self.name.clone(),
            a_r: self.p_c * self.a / (rt * rt),
            b_r: self.b / self.v_c,
            c_r: self.c / self.v_c,
            d_r: self.d / self.v_c,
            omega: self.omega,
            m: self.m,
            n: self.n,
            z: self.z,
        }
    }
}

/// Dimensionless constants of the reduced equation of state.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedParameters {
    pub name: String,
    pub a_r: f64,
    pub b_r: f64,
    pub c_r: f64,
    pub d_r: f64,
    pub omega: f64,
    pub m: f64,
    pub n: f64,
    pub z: f64,
}

impl ReducedParameters {
    pub fn validate(&self) -> Result<Vec<ParameterWarning>> {
        check_volumes(self.b_r, self.c_r, self.d_r)?;
        check_positive(&[("a_r", self.a_r), ("m", self.m), ("n", self.n), ("Z", self.z)])?;
        let mut warnings = Vec::new();
        check_m(self.omega, self.m, &mut warnings)?;
        Ok(warnings)
    }

    pub fn dimensionalize(&self, crit: &CriticalConstants) -> GasParameters {
        let rt = GAS_CONSTANT * crit.t_c;
        GasParameters {
            name: self.name.clone(),
            a: self.a_r * rt * rt / crit.p_c,
            b: self.b_r * crit.v_c,
            c: self.c_r * crit.v_c,
            d: self.d_r * crit.v_c,
            omega: self.omega,
            m: self.m,
            n: self.n,
            t_c: crit.t_c,
            p_c: crit.p_c,
            v_c: crit.v_c,
            z: self.z,
        }
    }
}
