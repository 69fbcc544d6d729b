//! Derivative-free optimization with trainable algorithmic parameters.
//!
//! The crate bundles five pieces that together form a small benchmarking and
//! tuning toolkit for a randomized direct-search solver:
//!
//! - [`testbed`]: a registry of analytic box-constrained test problems,
//! - [`solver`]: the direct-search solver, its parameter types, run traces,
//!   and the mixed-integer coordinate search used at the tuning level,
//! - [`profiles`]: performance and data profiles with exact staircase
//!   integration and CSV/SVG emission,
//! - [`training`]: convergence cut-offs, tuning objectives, and the training
//!   loop that optimizes the solver's own parameters,
//! - [`store`]: a content-addressed cache for solver runs plus persistence
//!   for training sessions.
//!
//! Everything is deterministic: a run is a pure function of (problem,
//! parameter configuration, settings), and fan-out over problems reduces in
//! a fixed order, so results are identical for any worker count.

pub mod error;
pub mod exec;
mod hash;
pub mod profiles;
pub mod solver;
pub mod store;
pub mod testbed;
pub mod training;

pub use error::Error;
