//! Quaternion matrix algebra for weighted Moore-Penrose inverses.

pub mod cramer;
pub mod error;
pub mod io;
pub mod qmatrix;
pub mod quat;
pub mod rcdet;
pub mod scalar;
pub mod spectral;
pub mod verify;
pub mod weights;
pub mod wmp;

pub use error::{QError, Result};
pub use qmatrix::{complex_embed, complex_unembed, ComplexBlockMatrix, QMatrix};
pub use quat::Quaternion;
pub use scalar::{Rational, Real, DEFAULT_TOL};
