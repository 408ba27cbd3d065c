//! Numerical toolkit for differential inclusions that force invertibility of
//! Sobolev mappings.
//!
//! * [`matrix`]: singular values, distortion, the cone margin and the
//!   bounds satisfied by `A + lambda I`.
//! * [`planar`]: the complex-derivative picture of 2x2 differentials and the
//!   equivalent planar membership criteria.
//! * [`zoo`]: closed-form example mappings with exact derivatives.
//! * [`degree`]: winding numbers, indices and injectivity probes.

pub mod degree;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod planar;
pub mod rng;
pub mod zoo;

pub use error::{Error, Result};
pub use linalg::SquareMatrix;
