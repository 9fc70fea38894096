//! Exact rationals, polynomials and rational functions over Q, and
//! arbitrary-precision complex numbers and matrices.

pub mod complex;
pub mod linalg;
pub mod poly;
pub mod ratfunc;
pub mod roots;

pub use complex::{fmt_float, pi, pow2, BigComplex, Precision};
pub use linalg::CMatrix;
pub use poly::{gcd as poly_gcd, Poly};
pub use ratfunc::RatFunc;
pub use roots::{numeric_roots, rational_roots};
pub use rug::{Integer, Rational};
