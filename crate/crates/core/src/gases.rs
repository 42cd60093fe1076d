//! Built-in substances.

use crate::eos::{CriticalConstants, GasParameters, ReducedParameters};

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &["methane"];

/// Reduced constants for methane.
///
/// The two near-equal volumes 0.3603434 and 0.3604034 are assigned so that
/// `b < d < c` holds: `d` (largest solid volume) is the smaller one and `c`
/// (smallest liquid volume) the larger.
pub fn methane_reduced() -> ReducedParameters {
    ReducedParameters {
        name: "methane".into(),
        a_r: 0.4902264,
        b_r: 0.2989634,
        c_r: 0.3604034,
        d_r: 0.3603434,
        omega: 0.011,
        m: 0.391,
        n: 6.0,
        z: 0.286,
    }
}

pub fn methane_critical() -> CriticalConstants {
    CriticalConstants { t_c: 190.56, p_c: 4.5992, v_c: 98.63 }
}

pub fn methane() -> GasParameters {
    methane_reduced().dimensionalize(&methane_critical())
}

pub fn builtin(name: &str) -> Option<GasParameters> {
    match name.to_ascii_lowercase().as_str() {
        "methane" | "ch4" => Some(methane()),
        _ => None,
    }
}
