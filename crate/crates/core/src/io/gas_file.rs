//! Flat `key = value` gas files.
//!
//! ```text
//! # methane, reduced constants
//! name = methane
//! a_r = 0.4902264
//! b_r = 0.2989634
//! c_r = 0.3604034
//! d_r = 0.3603434
//! omega = 0.011
//! m = 0.391        # optional, derived from omega when absent
//! n = 6            # optional, default 6
//! Z = 0.286
//! p_c_MPa = 4.5992
//! v_c_cm3mol = 98.63
//! T_c_K = 190.56
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use crate::eos::{m_from_omega, CriticalConstants, GasParameters, Mslv, ParameterWarning, ReducedParameters};
use crate::error::{MslvError, Result};
use crate::gases;

const REQUIRED: [&str; 9] = ["a_r", "b_r", "c_r", "d_r", "omega", "Z", "p_c_MPa", "v_c_cm3mol", "T_c_K"];
const OPTIONAL: [&str; 3] = ["name", "m", "n"];
const DEFAULT_N: f64 = 6.0;

/// A substance as stored in a gas file: reduced constants plus the critical
/// constants that carry them to dimensional units.
#[derive(Debug, Clone, PartialEq)]
pub struct Gas {
    pub reduced: ReducedParameters,
    pub critical: CriticalConstants,
}

impl Gas {
    pub fn methane() -> Gas {
        Gas { reduced: gases::methane_reduced(), critical: gases::methane_critical() }
    }

    pub fn name(&self) -> &str {
        &self.reduced.name
    }

    pub fn dimensional(&self) -> GasParameters {
        self.reduced.dimensionalize(&self.critical)
    }

    /// Checks every invariant of the reduced and dimensional forms.
    pub fn validate(&self) -> Result<Vec<ParameterWarning>> {
        self.reduced.validate()?;
        self.dimensional().validate()
    }

    /// The reduced-variable equation of state.
    pub fn eos(&self) -> Result<Mslv> {
        Mslv::reduced(&self.reduced)
    }
}

fn parse_value(line: usize, key: &str, raw: &str) -> Result<f64> {
    let v: f64 = raw.parse().map_err(|_| MslvError::Parse {
        line,
        message: format!("value of '{key}' is not a number: '{raw}'"),
    })?;
    if !v.is_finite() {
        return Err(MslvError::Parse { line, message: format!("value of '{key}' must be finite") });
    }
    Ok(v)
}

/// Parses and validates a gas file.
pub fn parse_gas(text: &str) -> Result<(Gas, Vec<ParameterWarning>)> {
    let mut values: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| MslvError::Parse { line, message: format!("expected 'key = value', got '{content}'") })?;
        let (key, value) = (key.trim(), value.trim());
        if !REQUIRED.contains(&key) && !OPTIONAL.contains(&key) {
            return Err(MslvError::Parse { line, message: format!("unknown key '{key}'") });
        }
        if values.insert(key, (line, value)).is_some() {
            return Err(MslvError::Parse { line, message: format!("duplicate key '{key}'") });
        }
    }
    let num = |key: &str| -> Result<f64> {
        let &(line, raw) = values.get(key).ok_or_else(|| MslvError::Parse {
            line: last_line,
            message: format!("missing required key '{key}'"),
        })?;
        parse_value(line, key, raw)
    };
    let optional = |key: &str| -> Result<Option<f64>> {
        values.get(key).map(|&(line, raw)| parse_value(line, key, raw)).transpose()
    };
    let omega = num("omega")?;
    let gas = Gas {
        reduced: ReducedParameters {
            name: values.get("name").map_or("unnamed", |v| v.1).to_string(),
            a_r: num("a_r")?,
            b_r: num("b_r")?,
            c_r: num("c_r")?,
            d_r: num("d_r")?,
            omega,
            m: optional("m")?.unwrap_or_else(|| m_from_omega(omega)),
            n: optional("n")?.unwrap_or(DEFAULT_N),
            z: num("Z")?,
        },
        critical: CriticalConstants { t_c: num("T_c_K")?, p_c: num("p_c_MPa")?, v_c: num("v_c_cm3mol")? },
    };
    let warnings = gas.validate()?;
    Ok((gas, warnings))
}

/// Writes `gas` in the gas-file format; [`parse_gas`] reads it back exactly.
pub fn format_gas(gas: &Gas) -> String {
    let r = &gas.reduced;
    let c = &gas.critical;
    let mut out = String::new();
    for (k, v) in [
        ("a_r", r.a_r),
        ("b_r", r.b_r),
        ("c_r", r.c_r),
        ("d_r", r.d_r),
        ("omega", r.omega),
        ("m", r.m),
        ("n", r.n),
        ("Z", r.z),
        ("p_c_MPa", c.p_c),
        ("v_c_cm3mol", c.v_c),
        ("T_c_K", c.t_c),
    ] {
        out.push_str(&format!("{k} = {v:?}\n"));
    }
    format!("name = {}\n{out}", r.name)
}

/// Loads a built-in gas by name, or a gas file by path.
pub fn load_gas(spec: &str) -> Result<(Gas, Vec<ParameterWarning>)> {
    match spec.to_ascii_lowercase().as_str() {
        "methane" | "ch4" => {
            let gas = Gas::methane();
            let warnings = gas.validate()?;
            Ok((gas, warnings))
        }
        _ => {
            let path = Path::new(spec);
            let text = std::fs::read_to_string(path)
                .map_err(|e| MslvError::Io(format!("cannot read gas file '{}': {e}", path.display())))?;
            parse_gas(&text)
        }
    }
}
