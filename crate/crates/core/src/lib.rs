//! Numerical laboratory for the supersymmetric WKB (SWKB) quantization
//! condition on deformed exactly solvable potentials.
//!
//! The three base systems (harmonic oscillator, radial oscillator,
//! Pöschl-Teller) are deformed either by multi-indexed Darboux
//! transformations with virtual-state seeds or by Krein-Adler deletion of an
//! adjacent pair of levels. Ground states are built from exact Wronskians
//! and the SWKB integral is evaluated for every bound state.

pub mod error;
pub mod exact;
pub mod figure;
pub mod deform;
pub mod scenario;
pub mod swkb;
pub mod systems;
pub mod verify;

pub use error::{Error, Result};
