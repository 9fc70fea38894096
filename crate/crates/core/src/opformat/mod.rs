//! Text and JSON formats for operators and result documents.
//!
//! Grammar (whitespace-insensitive, `T` is Θ = t d/dt, `D` is d/dt):
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' uint)?
//! atom   := 'T' | 'D' | 't' | rational | '(' expr ')'
//! rational := uint ('/' uint)?
//! ```

mod json;
mod parser;
mod printer;

pub use json::{envelope, from_json, from_value, operator_doc, to_json, to_value, CoeffDoc, OperatorDoc};
pub use parser::{parse, parse_expr, OperatorExpr};
pub use printer::print;

use crate::error::Result;
use crate::operator::ThetaOperator;

/// Reads an operator from either JSON (first non-space character `{`) or
/// expression text. A result document carrying an `operator` field is
/// accepted as well.
pub fn read_operator(input: &str) -> Result<ThetaOperator> {
    if input.trim_start().starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(input).map_err(|e| crate::error::Error::Schema {
            pointer: "".into(),
            message: format!("invalid JSON: {e}"),
        })?;
        match v.get("operator") {
            Some(inner) if inner.is_object() => from_value(inner),
            _ => from_value(&v),
        }
    } else {
        parse(input.trim())
    }
}
