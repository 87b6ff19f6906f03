//! Forward modeling and regularized inversion of frequency-domain
//! electromagnetic induction (EMI) soundings over a 1D layered earth.
//!
//! A multiconfiguration EMI device records the complex ratio between the
//! secondary and primary magnetic fields for a set of intercoil spacings,
//! heights, frequencies, and coil orientations. This crate evaluates that
//! response for a layered conductivity model (admittance recursion plus a
//! Hankel-transform integral), computes its analytic Jacobian, and inverts
//! measured readings for the conductivity profile with a damped Gauss-Newton
//! scheme regularized by the truncated GSVD, optionally sharpened by a
//! minimum-gradient-support reweighting.
//!
//! The crate is `no_std`-compatible (with `alloc`); file formats and the
//! command-line front end live in the companion `emi-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bessel;
pub mod doi;
mod filter_tables;
pub mod forward;
pub mod hankel;
pub mod inversion;
pub mod model;
pub mod regularization;
pub mod synthdata;

pub use model::{DataVector, DeviceConfig, LayeredEarthModel, Orientation, StackedVector};

/// Magnetic permeability of free space, H/m.
pub const MU_0: f64 = 4.0e-7 * core::f64::consts::PI;
