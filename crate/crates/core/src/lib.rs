//! Deflection of nuclear x-ray superradiance by gravitational and
//! special-relativistic time dilation.
//!
//! A photon absorbed by a crystal is stored as a delocalized excitation.
//! When the transition frequency varies across the crystal (gravity, or the
//! speed gradient on a rotor), the stored phase pattern rotates and the
//! re-emitted photon leaves at a growing angle. This crate provides the
//! gradient coefficients, deflection laws, emission dynamics, broadband
//! propagation, detector patterns and the closest-approach geodesic
//! comparison.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod broadband;
pub mod collective;
pub mod constants;
pub mod detector;
pub mod error;
pub mod format;
pub mod geodesic;
pub mod gradient;
pub mod isotope;
pub mod maxwell_bloch;
pub mod ode;
pub mod table1;

pub use constants::{ConstantSet, PhysicalConstants};
pub use error::{Error, Result};
