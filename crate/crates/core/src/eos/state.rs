use super::{Branch, CriticalConstants, Mslv};
use crate::error::Result;

/// The Massieu-Plank potential and its partial derivatives at one `(v, T)`.
///
/// `phi` carries the additive constants of `F` and `G` fixed at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialBundle {
    pub phi: f64,
    pub phi_v: f64,
    pub phi_vv: f64,
    pub phi_vvv: f64,
    pub phi_t: f64,
    pub phi_tt: f64,
}

impl PotentialBundle {
    /// `T phi_TT + 2 phi_T`, which must be positive for an applicable state.
    pub fn caloric_value(&self, t: f64) -> f64 {
        t * self.phi_tt + 2.0 * self.phi_t
    }
}

/// A point of the state surface with its derived quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatePoint {
    pub v: f64,
    pub t: f64,
    pub p: f64,
    /// Molar internal energy.
    pub epsilon: f64,
    /// Molar entropy.
    pub sigma: f64,
    /// Molar enthalpy.
    pub eta: f64,
    /// Molar Gibbs energy.
    pub gamma: f64,
    pub branch: Branch,
    /// `phi_vv < 0`.
    pub mechanically_stable: bool,
    /// `T phi_TT + 2 phi_T > 0`.
    pub calorically_stable: bool,
}

impl StatePoint {
    pub fn applicable(&self) -> bool {
        self.mechanically_stable && self.calorically_stable
    }

    /// Converts a reduced state into the dimensional units of `crit`.
    ///
    /// Pressure, volume, temperature, internal energy and enthalpy map
    /// exactly; entropy and Gibbs energy contain logarithms of dimensional
    /// quantities, so their additive constants differ between the two unit
    /// systems and only differences are comparable.
    pub fn dimensionalize(&self, crit: &CriticalConstants) -> StatePoint {
        let e = crit.energy();
        StatePoint {
            v: self.v * crit.v_c,
            t: self.t * crit.t_c,
            p: self.p * crit.p_c,
            epsilon: self.epsilon * e,
            sigma: self.sigma * crit.entropy(),
            eta: self.eta * e,
            gamma: self.gamma * e,
            ..*self
        }
    }

    /// Inverse of [`StatePoint::dimensionalize`].
    pub fn reduce(&self, crit: &CriticalConstants) -> StatePoint {
        let e = crit.energy();
        StatePoint {
            v: self.v / crit.v_c,
            t: self.t / crit.t_c,
            p: self.p / crit.p_c,
            epsilon: self.epsilon / e,
            sigma: self.sigma / crit.entropy(),
            eta: self.eta / e,
            gamma: self.gamma / e,
            ..*self
        }
    }
}

impl Mslv {
    pub fn potential_bundle(&self, v: f64, t: f64) -> Result<PotentialBundle> {
        self.check_state(v, t)?;
        let at = self.attraction(t)?;
        let rep = self.repulsive_terms(v)?;
        let att = self.attractive_geometry(v)?;
        let r = self.r;
        let w = at.q / (r * t);
        // d/dT (q/T) and d²/dT² (q/T).
        let qt1 = (t * at.q_prime - at.q) / (t * t);
        let qt2 = at.q_second / t - 2.0 * at.q_prime / (t * t) + 2.0 * at.q / (t * t * t);
        let half_n = 0.5 * self.n;
        Ok(PotentialBundle {
            phi: rep.big_f / r + w * att.big_g + half_n * t.ln(),
            phi_v: rep.f / r + w * att.g,
            phi_vv: rep.f_prime / r + w * att.g_prime,
            phi_vvv: rep.f_second / r + w * att.g_second,
            phi_t: qt1 * att.big_g / r + half_n / t,
            phi_tt: qt2 * att.big_g / r - half_n / (t * t),
        })
    }

    /// Full state at `(v, T)`: pressure, caloric equation, entropy, enthalpy
    /// and Gibbs energy, with the two applicability flags.
    ///
    /// The Gibbs energy is taken from its definition `epsilon + p v - T sigma`.
    pub fn state(&self, v: f64, t: f64) -> Result<StatePoint> {
        let branch = self.check_state(v, t)?;
        let at = self.attraction(t)?;
        let rep = self.repulsive_terms(v)?;
        let att = self.attractive_geometry(v)?;
        let r = self.r;
        let half_n = 0.5 * self.n;
        let p = t * rep.f + at.q * att.g;
        let epsilon = (t * at.q_prime - at.q) * att.big_g + half_n * r * t;
        let sigma = rep.big_f + at.q_prime * att.big_g + half_n * r * (t.ln() + 1.0);
        let eta = epsilon + p * v;
        let gamma = eta - t * sigma;
        let phi_vv = rep.f_prime / r + at.q / (r * t) * att.g_prime;
        let caloric = at.q_second * att.big_g / r + half_n / t;
        Ok(StatePoint {
            v,
            t,
            p,
            epsilon,
            sigma,
            eta,
            gamma,
            branch,
            mechanically_stable: phi_vv < 0.0,
            calorically_stable: caloric > 0.0,
        })
    }
}
