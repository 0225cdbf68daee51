//! Finite-volume laboratory for the tumor-growth model with active motion
//!
//! `∂t n − div(n ∇p) − ν Δn = n G(p)`, `p = k/(k−1) n^(k−1)`,
//!
//! and its stiff-pressure (Hele-Shaw) limit `k → ∞`.

// `!(x > 0.0)` style checks reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod io;
pub mod model;
pub mod solver;

pub use error::{Error, FrontError, Result};
pub use grid::{Field, Geometry, Grid};
pub use model::{GrowthLaw, ModelParams};
pub use solver::{run, InitialData, Reaction, RunConfig, RunResult, RunState, Snapshot};
