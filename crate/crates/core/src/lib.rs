//! Sensing and communication limits of THz inter-satellite links with
//! impaired transceivers.
//!
//! - [`hardware_impairments`]: PA models, Bussgang linearization, phase
//!   noise and the hardware quality factor.
//! - [`link_channel`]: Friis gain, Doppler terms, pointing loss, noise budget.
//! - [`sensing_bounds`]: Bayesian Fisher information and BCRLBs.
//! - [`comm_capacity`]: SNR/SINR, capacity ceiling, net rate.
//! - [`isac_tradeoff`]: capacity-distortion frontier.

pub mod comm_capacity;
pub mod error;
pub mod hardware_impairments;
pub mod isac_tradeoff;
pub mod link_channel;
pub mod random;
pub mod sensing_bounds;
pub mod stats;
pub mod units;

pub use error::{Error, Result};
