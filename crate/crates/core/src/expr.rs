//! Expressions over integers, square roots, logarithms and `e`.
//!
//! Grammar (whitespace is ignored between tokens):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom
//! atom   := INT | 'e' | ('log' | 'ln' | 'sqrt') '(' expr ')' | '(' expr ')'
//! ```
//!
//! `log` is the natural logarithm. Printing is canonical (`ln` prints as
//! `log`) and always reparses to the same tree.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::interval::{Interval, IntervalError};
use crate::linear_forms::AlgebraicSurd;
use crate::quad_ring::squarefree_decompose;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(BigUint),
    E,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Sqrt(Box<Expr>),
    Log(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl Expr {
    pub fn int(n: impl Into<BigInt>) -> Expr {
        let n: BigInt = n.into();
        let lit = Expr::Int(n.magnitude().clone());
        if n.is_negative() {
            Expr::Neg(Box::new(lit))
        } else {
            lit
        }
    }

    pub fn rational(r: &BigRational) -> Expr {
        let num = Expr::int(r.numer().clone());
        if r.denom() == &BigInt::from(1) {
            num
        } else {
            num.div(Expr::int(r.denom().clone()))
        }
    }

    /// `p + q*sqrt(r)` in the shape the parser reads back.
    pub fn surd(s: &AlgebraicSurd) -> Expr {
        let p = Expr::rational(s.p());
        if s.q().is_zero() {
            return p;
        }
        let root = Expr::Sqrt(Box::new(Expr::int(s.r().clone())));
        let term = if s.q().abs() == BigRational::from_integer(1.into()) {
            root
        } else {
            Expr::rational(&s.q().abs()).mul(root)
        };
        match (s.p().is_zero(), s.q().is_negative()) {
            (true, false) => term,
            (true, true) => Expr::Neg(Box::new(term)),
            (false, false) => p.add(term),
            (false, true) => p.sub(term),
        }
    }

    pub fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }

    pub fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }

    pub fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }

    pub fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(rhs))
    }

    pub fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }

    pub fn log(self) -> Expr {
        Expr::Log(Box::new(self))
    }

    pub fn sqrt(self) -> Expr {
        Expr::Sqrt(Box::new(self))
    }

    /// Enclosure at `prec` fractional bits.
    pub fn eval(&self, prec: u32) -> Result<Interval, IntervalError> {
        Ok(match self {
            Expr::Int(n) => Interval::from_int(&BigInt::from(n.clone()), prec),
            Expr::E => Interval::e(prec),
            Expr::Neg(x) => -x.eval(prec)?,
            Expr::Add(a, b) => &a.eval(prec)? + &b.eval(prec)?,
            Expr::Sub(a, b) => &a.eval(prec)? - &b.eval(prec)?,
            Expr::Mul(a, b) => &a.eval(prec)? * &b.eval(prec)?,
            Expr::Div(a, b) => a.eval(prec)?.checked_div(&b.eval(prec)?)?,
            Expr::Sqrt(x) => x.eval(prec)?.sqrt()?,
            Expr::Log(x) => x.eval(prec)?.ln()?,
        })
    }

    /// Exact value when the expression denotes an element of some `Q(√r)`.
    pub fn to_surd(&self) -> Option<AlgebraicSurd> {
        match self {
            Expr::Int(n) => Some(AlgebraicSurd::rational(BigRational::from_integer(
                BigInt::from(n.clone()),
            ))),
            Expr::E | Expr::Log(_) => None,
            Expr::Neg(x) => Some(x.to_surd()?.neg()),
            Expr::Add(a, b) => a.to_surd()?.add(&b.to_surd()?),
            Expr::Sub(a, b) => a.to_surd()?.add(&b.to_surd()?.neg()),
            Expr::Mul(a, b) => a.to_surd()?.mul(&b.to_surd()?),
            Expr::Div(a, b) => a.to_surd()?.mul(&b.to_surd()?.recip()?),
            Expr::Sqrt(x) => {
                let v = x.to_surd()?;
                if v.degree() != 1 || v.p().is_negative() {
                    return None;
                }
                // √(a/b) = √(ab)/b
                let r = v.p();
                let (f, rad) = squarefree_decompose(&(r.numer() * r.denom()))
                    .or_else(|| r.is_zero().then(|| (BigInt::zero(), BigInt::from(1))))?;
                let coeff = BigRational::new(f, r.denom().clone());
                AlgebraicSurd::new(BigRational::zero(), coeff, rad).ok()
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expr, paren: bool| {
            if paren {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::E => write!(f, "e"),
            Expr::Neg(x) => {
                write!(f, "-")?;
                wrap(f, x, x.precedence() < 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let op = if matches!(self, Expr::Add(..)) { '+' } else { '-' };
                wrap(f, a, false)?;
                write!(f, " {op} ")?;
                wrap(f, b, b.precedence() == 1)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                let op = if matches!(self, Expr::Mul(..)) { '*' } else { '/' };
                wrap(f, a, a.precedence() == 1)?;
                write!(f, "{op}")?;
                wrap(f, b, b.precedence() < 3)
            }
            Expr::Sqrt(x) => write!(f, "sqrt({x})"),
            Expr::Log(x) => write!(f, "log({x})"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn error(&mut self, expected: Vec<&'static str>) -> ParseError {
        let found = match self.peek() {
            Some(c) => format!("'{c}'"),
            None => "end of input".to_string(),
        };
        ParseError {
            offset: self.pos,
            expected,
            found,
        }
    }

    fn expect(&mut self, c: char, what: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(vec![what]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == '+' { lhs.add(rhs) } else { lhs.sub(rhs) };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while let Some(op @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = if op == '*' { lhs.mul(rhs) } else { lhs.div(rhs) };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        const ATOM: [&str; 6] = ["integer", "'e'", "'log('", "'ln('", "'sqrt('", "'('"];
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let len = self.src[start..]
                    .bytes()
                    .take_while(u8::is_ascii_digit)
                    .count();
                self.pos += len;
                let n = self.src[start..self.pos].parse::<BigUint>().expect("digits");
                Ok(Expr::Int(n))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')', "')'")?;
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let len = self.src[start..]
                    .bytes()
                    .take_while(u8::is_ascii_alphabetic)
                    .count();
                let word = &self.src[start..start + len];
                let wrap: fn(Expr) -> Expr = match word {
                    "e" => {
                        self.pos += len;
                        return Ok(Expr::E);
                    }
                    "log" | "ln" => Expr::log,
                    "sqrt" => Expr::sqrt,
                    _ => return Err(self.error(ATOM.to_vec())),
                };
                self.pos += len;
                self.expect('(', "'('")?;
                let e = self.expr()?;
                self.expect(')', "')'")?;
                Ok(wrap(e))
            }
            _ => Err(self.error(ATOM.to_vec())),
        }
    }
}

pub fn parse_surd_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.error(vec!["operator", "end of input"]));
    }
    Ok(e)
}

/// Parse text that must denote a real quadratic surd exactly.
pub fn parse_surd(text: &str) -> Result<AlgebraicSurd, SurdParseError> {
    let e = parse_surd_expr(text)?;
    e.to_surd().ok_or(SurdParseError::NotASurd(text.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SurdParseError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("'{0}' is not a quadratic surd p + q*sqrt(r)")]
    NotASurd(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(e: &Expr, v: f64) -> bool {
        (e.eval(128).unwrap().midpoint_f64() - v).abs() < 1e-12
    }

    #[test]
    fn theta_and_alpha_inputs() {
        let theta = parse_surd_expr("log(2+1*sqrt(3))/log(5+2*sqrt(6))").unwrap();
        let expect = (2.0 + 3f64.sqrt()).ln() / (5.0 + 2.0 * 6f64.sqrt()).ln();
        assert!(close(&theta, expect));
        let alpha = parse_surd_expr("1/log(5+2*sqrt(6))").unwrap();
        assert!(close(&alpha, 1.0 / (5.0 + 2.0 * 6f64.sqrt()).ln()));
        assert_eq!(theta.to_string(), "log(2 + 1*sqrt(3))/log(5 + 2*sqrt(6))");
    }

    #[test]
    fn degenerate_surd() {
        let e = parse_surd_expr("sqrt(4)").unwrap();
        let v = e.eval(64).unwrap();
        assert!(v.contains_rational(&BigRational::from_integer(2.into())));
        assert_eq!(e.to_surd().unwrap(), AlgebraicSurd::from_ints(2, 0, 1).unwrap());
    }

    #[test]
    fn surd_recognition() {
        let s = parse_surd("5+2*sqrt(6)").unwrap();
        assert_eq!(s, AlgebraicSurd::from_ints(5, 2, 6).unwrap());
        let s = parse_surd("sqrt(8)").unwrap();
        assert_eq!(s, AlgebraicSurd::from_ints(0, 2, 2).unwrap());
        let s = parse_surd("1/(2+sqrt(3))").unwrap();
        assert_eq!(s, AlgebraicSurd::from_ints(2, -1, 3).unwrap());
        assert!(parse_surd("sqrt(2)+sqrt(3)").is_err());
        assert!(parse_surd("log(2)").is_err());
        assert!(parse_surd("sqrt(1+sqrt(2))").is_err());
        let s = AlgebraicSurd::from_ints(-7, -3, 22).unwrap();
        assert_eq!(Expr::surd(&s).to_surd().unwrap(), s);
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let err = parse_surd_expr("log(2+)").unwrap_err();
        assert_eq!(err.offset, 6);
        assert!(err.expected.contains(&"integer"));
        let err = parse_surd_expr("2 3").unwrap_err();
        assert_eq!(err.offset, 2);
        let err = parse_surd_expr("log 2").unwrap_err();
        assert_eq!(err.expected, vec!["'('"]);
        let err = parse_surd_expr("").unwrap_err();
        assert_eq!(err.found, "end of input");
        assert!(parse_surd_expr("foo(2)").is_err());
        assert!(parse_surd_expr("(1+2").is_err());
    }

    #[test]
    fn evaluation_errors() {
        let e = parse_surd_expr("log(0)").unwrap();
        assert!(matches!(e.eval(64), Err(IntervalError::Domain(_))));
        let e = parse_surd_expr("1/(2-2)").unwrap();
        assert!(matches!(e.eval(64), Err(IntervalError::Domain(_))));
        let e = parse_surd_expr("sqrt(-1)").unwrap();
        assert!(e.eval(64).is_err());
    }

    #[test]
    fn printer_respects_precedence() {
        for text in ["1 - (2 - 3)", "(1 + 2)*3", "1/(2*3)", "-(1 + 2)", "--e", "2*-3", "1 - -2"] {
            let e = parse_surd_expr(text).unwrap();
            assert_eq!(parse_surd_expr(&e.to_string()).unwrap(), e, "{text}");
        }
        assert_eq!(parse_surd_expr("1 - (2 - 3)").unwrap().to_string(), "1 - (2 - 3)");
        assert_eq!(parse_surd_expr("ln(e)").unwrap().to_string(), "log(e)");
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0u64..1000).prop_map(|n| Expr::Int(n.into())),
            Just(Expr::E),
        ];
        leaf.prop_recursive(5, 48, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Expr::neg),
                inner.clone().prop_map(Expr::sqrt),
                inner.clone().prop_map(Expr::log),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.sub(b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.mul(b)),
                (inner.clone(), inner).prop_map(|(a, b)| a.div(b)),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn print_parse_round_trip(e in arb_expr()) {
            let text = e.to_string();
            prop_assert_eq!(parse_surd_expr(&text).unwrap(), e);
        }
    }

    proptest! {
        #[test]
        fn surd_arithmetic_matches_enclosure(p in -30i64..30, q in -30i64..30,
                                             a in -30i64..30, b in -30i64..30,
                                             r in prop::sample::select(vec![2i64, 3, 6, 22])) {
            let x = AlgebraicSurd::from_ints(p, q, r).unwrap();
            let y = AlgebraicSurd::from_ints(a, b, r).unwrap();
            let e = Expr::surd(&x).mul(Expr::surd(&y)).sub(Expr::surd(&y));
            let exact = e.to_surd().unwrap();
            let v = e.eval(128).unwrap();
            let w = exact.enclosure(128);
            prop_assert!((v.midpoint_f64() - w.midpoint_f64()).abs() < 1e-9);
        }
    }
}
