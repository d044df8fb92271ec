//! Non-Markovianity and transport diagnostics built on the simulated series.

mod bounce;
mod critical;
mod lambert;
mod transport;

pub use bounce::{bounce_function, bounce_is_zero, default_threshold, BounceResult, BounceValue};
pub use critical::{
    bounce_for, gamma_c_numeric, gamma_c_single_mode, search_horizon, GammaCEstimate, GammaCMethod,
    GammaCSearch,
};
pub use lambert::lambert_w;
pub use transport::{
    arrival_time, bond_weight, continuity_constant, current_from_density, current_series,
    lightcone_grid, loglog_slope, max_current_scan, CurrentScanPoint,
};
