//! Modified solid-liquid-vapor (MSLV) equation of state.
//!
//! The crate evaluates the thermic and caloric equations and the
//! thermodynamic potentials ([`eos`]), checks applicability and traces the
//! singularity curve ([`stability`]), solves two- and three-phase equilibria
//! ([`phase`]), and loads gas files and exports curve tables ([`io`]).
//!
//! ```
//! use mslv::{gases, Mslv};
//!
//! let methane = Mslv::reduced(&gases::methane_reduced()).unwrap();
//! let p = methane.pressure(1.0, 1.0).unwrap();
//! assert!((p - 1.0).abs() < 0.05);
//! ```

pub mod eos;
pub mod error;
pub mod gases;
pub mod io;
pub mod numerics;
pub mod phase;
pub mod stability;

pub use eos::{Branch, Domain, GasParameters, Mslv, ReducedParameters, StatePoint};
pub use error::{MslvError, Result};
