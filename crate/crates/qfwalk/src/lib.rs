//! Numerical workbench for quasifree quantum stochastic calculus.
//!
//! Everything is finite-dimensional and dense: operators are
//! [`linalg::CMat`] values, tensor products put the noise factor first, and
//! conjugate spaces share coordinates with their originals.

pub mod algebra;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod qsc;
pub mod quasifree;
pub mod sample;
pub mod verify;
pub mod walk;

pub use error::{QfError, Result};
