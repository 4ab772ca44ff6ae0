//! Form rings, general quadratic and Hermitian groups over small finite rings,
//! their elementary generators, and constructive reductions with exact arithmetic.

pub mod alg;
pub mod error;
pub mod form;
pub mod gens;
pub mod group;
pub mod io;
pub mod matrix;
pub mod reduce;
pub mod ring;
pub mod sample;
pub mod suites;

pub use alg::FormAlg;
pub use error::{Error, Result};
