//! Experiments and report formats around the `toric-heights` library:
//! problem files, run configuration, convergence / tail / equidistribution
//! rows, and the frozen pilot constants.

pub mod config;
pub mod fixtures;
pub mod problem;
pub mod run;

pub use config::{ExperimentConfig, Model, PrimeRange};
pub use fixtures::{Fixtures, fixtures};
pub use problem::{DivisorSpec, PolySpec, Problem};
