//! Steady states, multistability, linear stability and quantum fluctuations
//! of a driven optomechanical cavity with a degenerate parametric amplifier
//! and a Duffing-anharmonic mirror. All internal rates are in units of ω_m.

pub mod config;
pub mod criticality;
pub mod error;
pub mod fluctuations;
pub mod mean_field;
pub mod output;
pub mod params;
pub mod poly;
pub mod presets;
pub mod quadrature;
pub mod stability;
pub mod steady_state;
pub mod sweep;

pub use error::{Error, Result};
pub use params::{NormalizedParams, SystemParams};
