//! First-order phase transitions: two-phase equilibria, binodal curves and
//! the triple point.
//!
//! Two phases at the same temperature coexist when
//! `phi_v(v1) = phi_v(v2)` (equal pressure) and
//! `phi(v1) - v1 phi_v(v1) = phi(v2) - v2 phi_v(v2)` (equal Gibbs energy).

mod binodal;
mod closed_form;
mod equilibrium;

pub use binodal::{BinodalCurve, Terminus, TriplePoint};
pub use closed_form::TauRoots;
pub use equilibrium::{EquilibriumPoint, EquilibriumResiduals, PhaseSolver};

use std::fmt;
use std::str::FromStr;

use crate::eos::Branch;
use crate::error::MslvError;

/// Gap between coexisting volumes, in units of the volume scale, below which
/// the liquid-vapor curve is considered to have reached the critical point.
pub const CRITICAL_GAP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Solid,
    Liquid,
    Vapor,
}

impl Phase {
    pub fn branch(self) -> Branch {
        match self {
            Phase::Solid => Branch::Solid,
            Phase::Liquid | Phase::Vapor => Branch::Fluid,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhasePair {
    SolidLiquid,
    SolidVapor,
    LiquidVapor,
}

impl PhasePair {
    pub const ALL: [PhasePair; 3] = [PhasePair::SolidLiquid, PhasePair::SolidVapor, PhasePair::LiquidVapor];

    /// Denser phase first.
    pub fn phases(self) -> (Phase, Phase) {
        match self {
            PhasePair::SolidLiquid => (Phase::Solid, Phase::Liquid),
            PhasePair::SolidVapor => (Phase::Solid, Phase::Vapor),
            PhasePair::LiquidVapor => (Phase::Liquid, Phase::Vapor),
        }
    }

    /// The phase not taking part.
    pub fn third(self) -> Phase {
        match self {
            PhasePair::SolidLiquid => Phase::Vapor,
            PhasePair::SolidVapor => Phase::Liquid,
            PhasePair::LiquidVapor => Phase::Solid,
        }
    }

    /// Both volumes lie on one continuous piece of the volume axis.
    pub fn same_piece(self) -> bool {
        self == PhasePair::LiquidVapor
    }

    pub fn code(self) -> &'static str {
        match self {
            PhasePair::SolidLiquid => "sl",
            PhasePair::SolidVapor => "sv",
            PhasePair::LiquidVapor => "lv",
        }
    }
}

impl fmt::Display for PhasePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for PhasePair {
    type Err = MslvError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sl" | "solid-liquid" => Ok(PhasePair::SolidLiquid),
            "sv" | "solid-vapor" => Ok(PhasePair::SolidVapor),
            "lv" | "liquid-vapor" => Ok(PhasePair::LiquidVapor),
            other => Err(MslvError::Domain(format!("unknown phase pair '{other}' (expected sl, sv or lv)"))),
        }
    }
}
