//! Contour-band monitoring of a correlated 2-D signal field.
//!
//! A fusion center reconstructs an unknown field from the few sensors whose
//! readings fall within a margin of a set of contour levels. It learns the
//! signal range, the level placement (uniform or Lloyd-Max) and the margin
//! as it adds levels, then tracks the field over time with the learned
//! parameters.
//!
//! Modules, bottom up:
//!
//! - [`field`]: synthetic sum-of-Gaussians field, sensors, noisy readings.
//! - [`interpolation`]: bi-harmonic spline fit and grid evaluation.
//! - [`quantization`]: uniform and Lloyd-Max level sets over a histogram pdf.
//! - [`metrics`]: reconstruction error and reporting cost.
//! - [`monitoring`]: the spatial and temporal monitoring loops.
//! - [`scenario`]: configuration, seeded replicates and CSV artifacts.

pub mod error;
pub mod field;
pub mod interpolation;
pub mod metrics;
pub mod monitoring;
pub mod quantization;
pub mod scenario;
pub mod seed;

pub use error::{Error, Result};
