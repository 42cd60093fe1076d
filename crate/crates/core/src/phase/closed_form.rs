use crate::eos::Mslv;
use crate::error::{MslvError, Result};

/// Relative volume separation below which [`Mslv::h_slope`] switches to its limit.
const H_LIMIT_SWITCH: f64 = 1e-8;

/// Roots `tau = sqrt(T / T_c)` of `q(T_c tau²) = T_c tau² h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauRoots {
    pub tau1: f64,
    pub tau2: f64,
    /// `0 < tau1 < 1 + 1/m`.
    pub tau1_valid: bool,
    pub tau2_valid: bool,
}

impl TauRoots {
    pub fn temperature(&self, t_c: f64) -> Option<f64> {
        self.tau1_valid.then_some(self.tau1 * self.tau1 * t_c)
    }
}

impl Mslv {
    /// `h = -(f(v2) - f(v1)) / (g(v2) - g(v1))`, the value of `q(T)/T` at
    /// which the isotherm takes equal pressures at `v1` and `v2`.
    ///
    /// Falls back to [`Mslv::h_limit`] when the volumes nearly coincide.
    pub fn h_slope(&self, v1: f64, v2: f64) -> Result<f64> {
        self.branch_of(v1)?;
        self.branch_of(v2)?;
        if (v2 - v1).abs() < H_LIMIT_SWITCH * v1.abs() {
            return self.h_limit(v1);
        }
        let dg = self.g_unchecked(v2) - self.g_unchecked(v1);
        if dg == 0.0 {
            return Err(MslvError::Degenerate(format!("g({v1}) = g({v2})")));
        }
        Ok(-(self.f_unchecked(v2) - self.f_unchecked(v1)) / dg)
    }

    /// Limit of [`Mslv::h_slope`] as `v2 -> v1`, written out in closed form.
    pub fn h_limit(&self, v: f64) -> Result<f64> {
        self.branch_of(v)?;
        let (b, c, d) = (self.b, self.c, self.d);
        let w = v * v + 2.0 * b * v - b * b;
        Ok(self.r * (v * (v - 2.0 * d) - b * c + b * d + c * d) * w * w
            / (2.0 * (v + b) * (v - b).powi(2) * (v - c).powi(2)))
    }

    /// Both roots of `q(T) = T h` in `tau = sqrt(T / T_c)`.
    pub fn tau_from_h(&self, h: f64) -> Result<TauRoots> {
        if !(h >= 0.0) {
            return Err(MslvError::Domain(format!("h must be non-negative, got {h}")));
        }
        let sa = self.a.sqrt();
        let sh = (self.t_c * h).sqrt();
        let m = self.m;
        let tau1 = (1.0 + m) * sa / (sh + m * sa);
        let tau2 = (1.0 + m) * sa / (m * sa - sh);
        let upper = 1.0 + 1.0 / m;
        Ok(TauRoots {
            tau1,
            tau2,
            tau1_valid: tau1 > 0.0 && tau1 < upper,
            tau2_valid: tau2 > 0.0 && tau2.is_finite(),
        })
    }
}
