//! Fuchsian differential operators: exact manipulation of θ-forms, local
//! exponents and Frobenius solutions, numerical monodromy, invariant
//! alternating forms and the exponent-shift criteria built on them.

pub mod arith;
pub mod error;

pub use error::{Error, ErrorKind, Result};
pub mod operator;
pub mod opformat;
pub mod local;
pub mod frobenius;
pub mod monodromy;
pub mod symplectic;
pub mod criteria;
pub mod corpus;
