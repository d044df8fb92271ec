//! Simulation and analysis of a probe qubit coupled to the end of an XX
//! spin chain.
//!
//! The qubit starts excited and the chain empty, so all dynamics live in the
//! (N+1)-dimensional single-excitation sector. The crate provides
//!
//! * [`model`]: configuration, sector Hamiltonian, chain eigenmodes and the
//!   bath correlation function;
//! * [`closed`]: exact evolution and the TCL2 rate equation for a closed chain;
//! * [`open`]: dephasing chains (sector Lindblad integrator, full-space
//!   oracle, dephasing TCL2, classical-walk limit);
//! * [`analysis`]: bounce function, critical dephasing, currents, light cones;
//! * [`disorder`]: seeded random fields and ensemble averages;
//! * [`cli`]: experiment drivers writing CSV + JSON.

pub mod analysis;
pub mod cli;
pub mod closed;
pub mod disorder;
pub mod error;
pub mod model;
pub mod open;
pub mod output;
pub mod series;

pub use error::{Error, Result};
pub use model::ModelConfig;
pub use series::{TimeGrid, TimeSeries};
