//! Exact sparse polynomials over the Gaussian rationals.

mod eval;
mod exponent;
mod gaussian;
mod gcd;
mod sparse;
mod text;
mod tuple;

pub use eval::{eval_log, eval_poly_log, normalize_log, LogPolar, LogValue};
pub use exponent::Exponents;
pub use gaussian::GaussianRational;
pub(crate) use gaussian::rational_to_f64;
pub use gcd::poly_gcd;
pub use sparse::{poly_arith, ArithOp, SparsePoly};
pub use text::{tuple_from_text, tuple_to_text, tuple_to_text_named};
pub use tuple::{tuple_content, PolyTuple};
