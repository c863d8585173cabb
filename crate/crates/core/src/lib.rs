//! Exact and certified-numeric tools for linear recurrences, exponential
//! polynomials and the fractional parts of their values.

pub mod algebraic;
pub mod ball;
pub mod criterion;
pub mod density;
pub mod engine;
pub mod error;
pub mod expoly;
pub mod lengths;
pub mod lp;
pub mod poly;
pub mod roots;
pub mod scalar;
pub mod words;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use error::{Error, Result};
pub use poly::Poly;

pub type IntPoly = Poly<BigInt>;
pub type RatPoly = Poly<BigRational>;
pub type FloatPoly = Poly<f64>;
pub type Rational = BigRational;
