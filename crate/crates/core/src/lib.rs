//! Convergence of meromorphic maps into projective space.

pub mod convergence;
pub mod dynamics;
pub mod error;
pub mod geom;
pub mod poly;
pub mod projmap;

pub use error::{Error, Result};
