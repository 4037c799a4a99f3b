//! Monte-Carlo simulation and coherence analysis of noise-driven three-node
//! feed-forward-loop oscillator networks.
//!
//! The pipeline: [`model`] defines the coupled lambda-omega units, [`sde`]
//! integrates them with Euler-Maruyama under deterministic counter-based
//! seeding, [`signal`] turns trajectories into filtered series, peaks, and
//! phases, [`measures`] computes the spread/phase-coherence/spike-regularity
//! statistics, and [`sweep`] runs reproducible parallel parameter sweeps
//! over ensembles.

pub mod error;
pub mod measures;
pub mod model;
pub mod rng;
pub mod sde;
pub mod signal;
pub mod sweep;

pub use error::{Error, Result};
