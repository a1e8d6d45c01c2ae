//! Hurricane power-outage hardship simulator.
//!
//! Couples a parametric wind field, a synthetic power grid with fragility
//! based damage and connectivity loss, a resource-constrained restoration
//! scheduler, and a household population whose information, preparation, and
//! outage tolerance follow empirically fitted models. Monte Carlo replication
//! with a confidence-interval stopping rule produces hardship trajectories
//! reported overall and by demographic subgroup.

pub mod diffusion;
pub mod engine;
pub mod error;
pub mod grid;
pub mod hazard;
pub mod population;
pub mod presets;
pub mod report;
pub mod restoration;
pub mod seed;

pub use error::{Error, Result};
