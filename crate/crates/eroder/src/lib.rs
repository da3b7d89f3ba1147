//! Monotone binary cellular automata on `Z^d` with totally asymmetric noise.
//!
//! The crate has four layers:
//!
//! - [`rule`]: standard transition functions stored as antichains of minimal
//!   one-sets, with their combinatorial derivatives (duals, zero-sets).
//! - [`geometry`]: exact convex-geometric certification — front velocities,
//!   sigma emptiness, affine eroder certificates with rational witnesses.
//! - [`lattice`]: finite bit-packed windows evolved synchronously under the
//!   deterministic operator, one-sided noise, or a general stochastic rule,
//!   with counter-based reproducible randomness.
//! - [`droplet`]: exact verification of the growth lemmas and spider claims,
//!   Monte Carlo droplet-probability estimation, and scaling analysis.

pub mod exact;
pub mod simplex;

pub mod rule;

pub mod geometry;

pub mod lattice;

pub mod droplet;

pub use rule::{MonotoneRule, Offset, RuleError};
