//! Truncated signatures and log-signatures of piecewise-linear paths, with
//! tools for probing the radius of convergence of the log-signature.

pub mod error;
pub mod exp_integrals;
pub mod cartan;
pub mod cli;
pub mod free_lie;
pub mod identity;
pub mod path;
pub mod signature;
pub mod tensor;
pub mod winding;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use tensor::GradedTensor;
