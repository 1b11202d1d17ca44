//! Unit-memory MDP convolutional codes over finite field towers: construction
//! from Cauchy matrices, exhaustive verification of the minor criterion,
//! degree bounds, brute-force distances and an instrumented encoder.

pub mod bounds;
pub mod cli;
pub mod codes;
pub mod combin;
pub mod encoder;
pub mod error;
pub mod experiment;
pub mod format;
pub mod gf;
pub mod matrix;
pub mod mdp;

pub use error::{Error, Result};
