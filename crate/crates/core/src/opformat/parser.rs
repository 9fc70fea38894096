use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::operator::{ThetaExpr, ThetaOperator};

/// Syntax tree of an operator expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OperatorExpr {
    Theta,
    D,
    T,
    Literal(Rational),
    Neg(Box<OperatorExpr>),
    Add(Box<OperatorExpr>, Box<OperatorExpr>),
    Sub(Box<OperatorExpr>, Box<OperatorExpr>),
    Mul(Box<OperatorExpr>, Box<OperatorExpr>),
    Pow(Box<OperatorExpr>, u32),
}

impl OperatorExpr {
    /// Normal-ordered value with coefficients on the left.
    pub fn eval(&self) -> ThetaExpr {
        match self {
            OperatorExpr::Theta => ThetaExpr::theta(),
            OperatorExpr::D => ThetaExpr::d(),
            OperatorExpr::T => ThetaExpr::t(),
            OperatorExpr::Literal(q) => ThetaExpr::constant(q.clone()),
            OperatorExpr::Neg(a) => -&a.eval(),
            OperatorExpr::Add(a, b) => &a.eval() + &b.eval(),
            OperatorExpr::Sub(a, b) => &a.eval() - &b.eval(),
            OperatorExpr::Mul(a, b) => &a.eval() * &b.eval(),
            OperatorExpr::Pow(a, e) => a.eval().pow(*e),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Theta,
    D,
    T,
    Int(Integer),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Theta => "'T'".into(),
        Tok::D => "'D'".into(),
        Tok::T => "'t'".into(),
        Tok::Int(i) => format!("integer {i}"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Caret => "'^'".into(),
        Tok::Slash => "'/'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            'T' => Tok::Theta,
            'D' => Tok::D,
            't' => Tok::T,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((Tok::Int(s.parse().unwrap()), col));
                continue;
            }
            '.' => {
                return Err(Error::Syntax {
                    column: col,
                    message: "decimal literals are not supported; use a fraction".into(),
                })
            }
            other => {
                return Err(Error::Syntax { column: col, message: format!("unexpected character '{other}'") })
            }
        };
        out.push((tok, col));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { column: self.col(), message: message.into() })
    }

    fn found(&self) -> String {
        self.peek().map_or("end of input".into(), describe)
    }

    fn expr(&mut self) -> Result<OperatorExpr> {
        let mut lhs = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                OperatorExpr::Neg(Box::new(self.term()?))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = OperatorExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = OperatorExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<OperatorExpr> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            lhs = OperatorExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<OperatorExpr> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Int(i)) => {
                    let e = i.to_u32().ok_or(()).or_else(|_| self.err("exponent too large"))?;
                    self.pos += 1;
                    if self.peek() == Some(&Tok::Slash) {
                        return self.err("fractional powers are not supported");
                    }
                    Ok(OperatorExpr::Pow(Box::new(base), e))
                }
                Some(Tok::Minus) => self.err("negative powers are not supported"),
                _ => self.err(format!("expected a nonnegative integer exponent, found {}", self.found())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<OperatorExpr> {
        let tok = match self.peek().cloned() {
            None => return self.err("unexpected end of input"),
            Some(t) => t,
        };
        match tok {
            Tok::Theta => {
                self.pos += 1;
                Ok(OperatorExpr::Theta)
            }
            Tok::D => {
                self.pos += 1;
                Ok(OperatorExpr::D)
            }
            Tok::T => {
                self.pos += 1;
                Ok(OperatorExpr::T)
            }
            Tok::Int(n) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Int(d)) if d != 0 => {
                            self.pos += 1;
                            Ok(OperatorExpr::Literal(Rational::from((n, d))))
                        }
                        Some(Tok::Int(_)) => self.err("zero denominator"),
                        _ => self.err(format!("expected a denominator, found {}", self.found())),
                    }
                } else {
                    Ok(OperatorExpr::Literal(Rational::from(n)))
                }
            }
            Tok::LParen => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err(format!("expected ')', found {}", self.found()));
                }
                self.pos += 1;
                Ok(e)
            }
            _ => self.err(format!("unexpected {}", describe(&tok))),
        }
    }
}

/// Parses operator text into its syntax tree.
pub fn parse_expr(text: &str) -> Result<OperatorExpr> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end_col: text.chars().count() + 1 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err(format!("unexpected {} after expression", p.found()));
    }
    Ok(e)
}

/// Parses operator text into its canonical θ-form.
pub fn parse(text: &str) -> Result<ThetaOperator> {
    Ok(ThetaOperator::from_expr(&parse_expr(text)?.eval()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Poly;

    #[test]
    fn normal_ordering() {
        let p = parse("T*t").unwrap();
        assert_eq!(p.coeffs(), &[Poly::from_ints(&[0, 1]), Poly::from_ints(&[0, 1])]);
    }

    #[test]
    fn fractional_power_rejected() {
        match parse("t^(1/2)") {
            Err(Error::Syntax { column, .. }) => assert_eq!(column, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("T^-1"), Err(Error::Syntax { column: 3, .. })));
        assert!(matches!(parse("T^2/3"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn errors_report_columns() {
        assert!(matches!(parse("T + "), Err(Error::Syntax { column: 5, .. })));
        assert!(matches!(parse("(T"), Err(Error::Syntax { column: 3, .. })));
        assert!(matches!(parse("T x"), Err(Error::Syntax { column: 3, .. })));
        assert!(matches!(parse("1/0"), Err(Error::Syntax { column: 3, .. })));
        assert!(matches!(parse("0.5*T"), Err(Error::Syntax { column: 2, .. })));
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(parse("T^4-t*(T+1/2)^4").unwrap(), parse("  T ^ 4 - t * ( T + 1 / 2 ) ^ 4 ").unwrap());
        assert_eq!(parse("-T + 1").unwrap(), parse("T - 1").unwrap());
    }

    #[test]
    fn d_form_input() {
        // t*D = T
        assert_eq!(parse("t*D").unwrap(), parse("T").unwrap());
        // D^2 + D
        assert_eq!(parse("D^2 + D").unwrap(), parse("T^2 + (t-1)*T").unwrap());
    }
}
