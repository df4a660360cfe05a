//! Newtonian dark bodies: test-particle trajectories around bounded mass
//! distributions, and the closed-form confinement bounds, escape-speed
//! estimates and light-trapping criteria that go with them.
//!
//! The crate is organised bottom-up:
//!
//! - [`distributions`]: the body Ω, its density and its geometry.
//! - [`potential`]: the specific potential U(u) and the acceleration field.
//! - [`dynamics`]: adaptive integration of u″ = ∇U(u) with collapse and
//!   escape detection.
//! - [`theorems`]: escape speeds, confinement radii, radial solutions,
//!   black-hole classifiers and the cosmology estimate.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod distributions;
pub mod dynamics;
pub mod error;
pub mod potential;
pub mod theorems;
mod vector;

pub use constants::PhysicalConstants;
pub use distributions::{Ball, BallUnion, MassDistribution, PointMass, RadialProfile, Shell, UniformBall, VoxelGrid};
pub use dynamics::{IntegrationOptions, State, Termination, Trajectory};
pub use error::{Error, Result};
pub use potential::{QuadratureOptions, VoxelMethod};
pub use theorems::{BlackHoleVerdict, ConfinementBound, Criterion};
pub use vector::Vector3;
