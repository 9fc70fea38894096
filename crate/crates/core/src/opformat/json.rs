use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::{Poly, RatFunc};
use crate::error::{Error, Result};
use crate::operator::ThetaOperator;

/// Serialised operator: `theta_coeffs[i]` is the coefficient of `Θⁱ`, each
/// a numerator/denominator pair of ascending integer coefficient lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorDoc {
    pub order: usize,
    pub theta_coeffs: Vec<CoeffDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffDoc {
    pub num: Vec<String>,
    pub den: Vec<String>,
}

fn int_strings(p: &Poly) -> Vec<String> {
    if p.is_zero() {
        return vec!["0".into()];
    }
    p.coeffs()
        .iter()
        .map(|c| {
            debug_assert_eq!(*c.denom(), 1);
            c.numer().to_string()
        })
        .collect()
}

pub fn operator_doc(op: &ThetaOperator) -> OperatorDoc {
    OperatorDoc {
        order: op.order(),
        theta_coeffs: op
            .coeffs()
            .iter()
            .map(|p| CoeffDoc { num: int_strings(p), den: vec!["1".into()] })
            .collect(),
    }
}

pub fn to_value(op: &ThetaOperator) -> Value {
    serde_json::to_value(operator_doc(op)).expect("operator serialisation")
}

/// Compact JSON text of the canonical operator.
pub fn to_json(op: &ThetaOperator) -> String {
    serde_json::to_string(&operator_doc(op)).expect("operator serialisation")
}

fn schema<T>(pointer: impl Into<String>, message: impl Into<String>) -> Result<T> {
    Err(Error::Schema { pointer: pointer.into(), message: message.into() })
}

fn poly_from(v: &Value, pointer: &str) -> Result<Poly> {
    let arr = match v.as_array() {
        Some(a) if !a.is_empty() => a,
        Some(_) => return schema(pointer, "empty coefficient list"),
        None => return schema(pointer, "expected an array of integer strings"),
    };
    let mut coeffs = Vec::with_capacity(arr.len());
    for (k, c) in arr.iter().enumerate() {
        let s = match c.as_str() {
            Some(s) => s,
            None => return schema(format!("{pointer}/{k}"), "expected an integer string"),
        };
        match s.parse::<Integer>() {
            Ok(i) => coeffs.push(Rational::from(i)),
            Err(_) => return schema(format!("{pointer}/{k}"), format!("`{s}` is not an integer")),
        }
    }
    Ok(Poly::new(coeffs))
}

pub fn from_value(v: &Value) -> Result<ThetaOperator> {
    let obj = match v.as_object() {
        Some(o) => o,
        None => return schema("", "expected an object"),
    };
    let order = match obj.get("order") {
        None => return schema("/order", "missing field"),
        Some(o) => match o.as_u64() {
            Some(n) => n as usize,
            None => return schema("/order", "expected a nonnegative integer"),
        },
    };
    let coeffs = match obj.get("theta_coeffs") {
        None => return schema("/theta_coeffs", "missing field"),
        Some(c) => match c.as_array() {
            Some(a) => a,
            None => return schema("/theta_coeffs", "expected an array"),
        },
    };
    if coeffs.len() != order + 1 {
        return schema(
            "/theta_coeffs",
            format!("expected {} coefficients for order {order}, found {}", order + 1, coeffs.len()),
        );
    }
    let mut rfs = Vec::with_capacity(coeffs.len());
    for (i, c) in coeffs.iter().enumerate() {
        let base = format!("/theta_coeffs/{i}");
        let o = match c.as_object() {
            Some(o) => o,
            None => return schema(base, "expected an object with `num` and `den`"),
        };
        let num = match o.get("num") {
            Some(n) => poly_from(n, &format!("{base}/num"))?,
            None => return schema(format!("{base}/num"), "missing field"),
        };
        let den = match o.get("den") {
            Some(d) => poly_from(d, &format!("{base}/den"))?,
            None => return schema(format!("{base}/den"), "missing field"),
        };
        if den.is_zero() {
            return schema(format!("{base}/den"), "denominator is the zero polynomial");
        }
        rfs.push(RatFunc::new(num, den));
    }
    if order > 0 && rfs[order].is_zero() {
        return schema(format!("/theta_coeffs/{order}"), "leading coefficient is zero");
    }
    Ok(ThetaOperator::new(rfs))
}

pub fn from_json(text: &str) -> Result<ThetaOperator> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Error::Schema { pointer: "".into(), message: format!("invalid JSON: {e}") })?;
    from_value(&v)
}

/// Wraps a result document with the tool name and version.
pub fn envelope(kind: &str, body: Value) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("tool".into(), Value::from("fop"));
    m.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
    m.insert("kind".into(), Value::from(kind));
    match body {
        Value::Object(o) => m.extend(o),
        other => {
            m.insert("result".into(), other);
        }
    }
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opformat::parse;

    #[test]
    fn theta_document() {
        let op = parse("T").unwrap();
        assert_eq!(
            to_json(&op),
            r#"{"order":1,"theta_coeffs":[{"num":["0"],"den":["1"]},{"num":["1"],"den":["1"]}]}"#
        );
        assert_eq!(from_json(&to_json(&op)).unwrap(), op);
    }

    #[test]
    fn zero_denominator_rejected() {
        let bad = r#"{"order":1,"theta_coeffs":[{"num":["0"],"den":["1"]},{"num":["1"],"den":["0"]}]}"#;
        match from_json(bad) {
            Err(Error::Schema { pointer, .. }) => assert_eq!(pointer, "/theta_coeffs/1/den"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn schema_pointers() {
        assert!(matches!(from_json("[]"), Err(Error::Schema { .. })));
        let e = from_json(r#"{"order":1,"theta_coeffs":[{"num":["0"],"den":["1"]}]}"#).unwrap_err();
        assert!(matches!(e, Error::Schema { ref pointer, .. } if pointer == "/theta_coeffs"));
        let e = from_json(r#"{"order":0,"theta_coeffs":[{"num":["x"],"den":["1"]}]}"#).unwrap_err();
        assert!(matches!(e, Error::Schema { ref pointer, .. } if pointer == "/theta_coeffs/0/num/0"));
    }

    #[test]
    fn rational_coefficients_canonicalised() {
        // (1/(2t)) Θ + 1  ->  Θ + 2t
        let doc = r#"{"order":1,"theta_coeffs":[{"num":["1"],"den":["1"]},{"num":["1"],"den":["0","2"]}]}"#;
        assert_eq!(from_json(doc).unwrap(), parse("T + 2*t").unwrap());
    }
}
