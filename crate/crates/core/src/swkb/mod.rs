//! Turning points, quadrature and the SWKB/WKB integrals.

mod integral;
mod quadrature;
mod turning;

pub use integral::{
    relative_error, swkb_integral, swkb_integral_dimensionful, swkb_integral_with, wkb_integral, SwkbOptions,
    SwkbResult,
};
pub use quadrature::{gauss_legendre, quadrature, DEFAULT_TOL, MAX_NODES};
pub use turning::{find_turning_intervals, find_turning_intervals_with, TurningIntervals, SCAN_POINTS};
