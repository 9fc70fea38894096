use crate::operator::ThetaOperator;

/// Canonical text: descending Θ-powers, each coefficient an expanded
/// polynomial in ascending powers of `t`, terms joined by ` + `.
pub fn print(op: &ThetaOperator) -> String {
    if op.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (i, p) in op.coeffs().iter().enumerate().rev() {
        if p.is_zero() {
            continue;
        }
        let coeff = format!("({p})");
        parts.push(match i {
            0 => coeff,
            1 => format!("{coeff}*T"),
            _ => format!("{coeff}*T^{i}"),
        });
    }
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opformat::parse;

    #[test]
    fn no2_rendering() {
        let p = parse("T^4 - t*(T+1/2)^4").unwrap();
        let s = print(&p);
        assert_eq!(s, "(-16+16*t)*T^4 + (32*t)*T^3 + (24*t)*T^2 + (8*t)*T + (t)");
        assert_eq!(parse(&s).unwrap(), p);
    }

    #[test]
    fn zero_and_shift_roundtrip() {
        assert_eq!(print(&ThetaOperator::zero()), "0");
        assert!(parse("0").unwrap().is_zero());
        let s = parse("T^4 - t*(T+1/2)^4").unwrap().shift(&rug::Rational::from((1, 2)));
        assert_eq!(parse(&print(&s)).unwrap(), s);
    }
}
