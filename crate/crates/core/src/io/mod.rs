//! Gas files, curve tables and the commands that produce them.

mod commands;
mod gas_file;
mod series;

pub use commands::{Context, Plane, Quantity, Units};
pub use gas_file::{format_gas, load_gas, parse_gas, Gas};
pub use series::{Column, CurveSeries, Format};
