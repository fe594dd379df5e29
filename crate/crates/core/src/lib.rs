//! Exact de-Rham cohomology of hyperelliptic curves over finite fields.

pub mod cech;
pub mod codec;
pub mod coordring;
pub mod curve;
pub mod equivariant;
pub mod error;
pub mod gfield;
pub mod linalg;
pub mod places;
pub mod polylab;

pub use error::{Error, Result};
