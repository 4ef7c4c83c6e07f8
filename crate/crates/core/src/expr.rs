//! A small arithmetic expression language for test functions.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | var | func '(' expr ')' | '(' expr ')'
//! number  := digits ('.' digits)? ('/' digits)?
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-2^2` is
//! `-4` and `2^3^2` is `512`. A literal `p/q` written without spaces is a
//! single number, so `2^1/2` is `2^(1/2)`; `2^1 / 2` divides.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactmath::{to_f64, Rational, Ring};

const MAX_EXACT_EXPONENT: i64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Tanh,
    Abs,
}

impl Func {
    pub const ALL: [Func; 10] =
        [Func::Sin, Func::Cos, Func::Tan, Func::Exp, Func::Log, Func::Sqrt, Func::Sinh, Func::Cosh, Func::Tanh, Func::Abs];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Abs => "abs",
        }
    }

    pub fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Exp => x.exp(),
            Func::Log => x.ln(),
            Func::Sqrt => x.sqrt(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Tanh => x.tanh(),
            Func::Abs => x.abs(),
        }
    }
}

impl FromStr for Func {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Func::ALL.into_iter().find(|f| f.name() == s).ok_or(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Rational),
    Var,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected {found}, expected {}", .expected.join(" or "))]
    Unexpected { found: String, expected: Vec<&'static str> },
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("`{0}` has no exact value")]
    Transcendental(&'static str),
    #[error("exponent {0} is not an integer")]
    NonIntegerExponent(String),
    #[error("exponent {0} is too large for exact evaluation")]
    ExponentTooLarge(String),
    #[error("{0} is not invertible")]
    NotInvertible(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(Rational),
    Ident(String),
    Sym(char),
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Num(r) => format!("number `{r}`"),
            Token::Ident(s) => format!("`{s}`"),
            Token::Sym(c) => format!("`{c}`"),
            Token::End => "end of input".to_string(),
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    var: &'a str,
    pos: usize,
    token: Token,
    start: usize,
}

const OPERAND: &[&str] = &["number", "variable", "function", "`(`", "`-`"];

impl<'a> Parser<'a> {
    fn new(text: &'a str, var: &'a str) -> Result<Self, ParseError> {
        let mut p = Parser { text, var, pos: 0, token: Token::End, start: 0 };
        p.advance()?;
        Ok(p)
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError {
            offset: self.start,
            kind: ParseErrorKind::Unexpected { found: self.token.describe(), expected: expected.to_vec() },
        }
    }

    fn advance(&mut self) -> Result<(), ParseError> {
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.start = self.pos;
        let Some(&b) = bytes.get(self.pos) else {
            self.token = Token::End;
            return Ok(());
        };
        let digits = |mut i: usize| {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            i
        };
        if b.is_ascii_digit() || (b == b'.' && bytes.get(self.pos + 1).is_some_and(u8::is_ascii_digit)) {
            let int_end = digits(self.pos);
            let mut value: Rational = Rational::from_integer(parse_int(&self.text[self.pos..int_end]));
            let mut end = int_end;
            if bytes.get(end) == Some(&b'.') {
                let frac_end = digits(end + 1);
                let frac = &self.text[end + 1..frac_end];
                let scale = BigInt::from(10u32).pow(frac.len() as u32);
                value += Rational::new(parse_int(frac), scale);
                end = frac_end;
            }
            if bytes.get(end) == Some(&b'/') && bytes.get(end + 1).is_some_and(u8::is_ascii_digit) {
                let den_end = digits(end + 1);
                let den = parse_int(&self.text[end + 1..den_end]);
                if den.is_zero() {
                    self.token = Token::Num(Rational::zero());
                    return Err(ParseError {
                        offset: end + 1,
                        kind: ParseErrorKind::Unexpected { found: "zero denominator".into(), expected: vec!["nonzero denominator"] },
                    });
                }
                value /= Rational::from_integer(den);
                end = den_end;
            }
            self.pos = end;
            self.token = Token::Num(value);
        } else if b.is_ascii_alphabetic() || b == b'_' {
            let mut end = self.pos;
            while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                end += 1;
            }
            self.token = Token::Ident(self.text[self.pos..end].to_string());
            self.pos = end;
        } else {
            let c = self.text[self.pos..].chars().next().expect("non-empty");
            self.pos += c.len_utf8();
            self.token = Token::Sym(c);
            if !"+-*/^()".contains(c) {
                return Err(self.error(OPERAND));
            }
        }
        Ok(())
    }

    fn eat(&mut self, c: char) -> Result<bool, ParseError> {
        if self.token == Token::Sym(c) {
            self.advance()?;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    fn expect(&mut self, c: char, name: &'static str) -> Result<(), ParseError> {
        if self.eat(c)? {
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.token {
                Token::Sym('+') => BinOp::Add,
                Token::Sym('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.token {
                Token::Sym('*') => BinOp::Mul,
                Token::Sym('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.advance()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-')? {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.primary()?;
        if self.eat('^')? {
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match std::mem::replace(&mut self.token, Token::End) {
            Token::Num(r) => {
                self.advance()?;
                Ok(Expr::Num(r))
            }
            Token::Ident(name) if name == self.var => {
                self.advance()?;
                Ok(Expr::Var)
            }
            Token::Ident(name) => {
                let offset = self.start;
                let func = name
                    .parse::<Func>()
                    .map_err(|_| ParseError { offset, kind: ParseErrorKind::UnknownFunction(name.clone()) })?;
                self.advance()?;
                self.expect('(', "`(`")?;
                let arg = self.expr()?;
                self.expect(')', "`)`")?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            Token::Sym('(') => {
                self.advance()?;
                let inner = self.expr()?;
                self.expect(')', "`)`")?;
                Ok(inner)
            }
            other => {
                self.token = other;
                Err(self.error(OPERAND))
            }
        }
    }
}

fn parse_int(digits: &str) -> BigInt {
    if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().expect("ascii digits")
    }
}

/// Parses an expression in the variable `x`.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    parse_expr_in(text, "x")
}

/// Parses an expression whose variable is named `var`.
pub fn parse_expr_in(text: &str, var: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text, var)?;
    let e = p.expr()?;
    if p.token != Token::End {
        return Err(p.error(&["operator", "end of input"]));
    }
    Ok(e)
}

impl FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_expr(s)
    }
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Num(r) if r.is_negative() => 0,
            Expr::Bin(op, ..) => op.precedence(),
            Expr::Neg(_) => 3,
            _ => 5,
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        match self {
            Expr::Num(r) => to_f64(r),
            Expr::Var => x,
            Expr::Neg(e) => -e.eval_f64(x),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval_f64(x), b.eval_f64(x));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(f, e) => f.apply(e.eval_f64(x)),
        }
    }

    pub fn eval_exact(&self, x: &Rational) -> Result<Rational, EvalError> {
        self.eval_in(x)
    }

    /// Evaluates over any ring. Exponents must be integers; division and
    /// negative powers need an invertible operand; only `abs` is allowed
    /// among the functions, and only for rationals.
    pub fn eval_in<R: Ring + fmt::Display>(&self, x: &R) -> Result<R, EvalError> {
        match self {
            Expr::Num(r) => Ok(R::from_rational(r)),
            Expr::Var => Ok(x.clone()),
            Expr::Neg(e) => Ok(-e.eval_in(x)?),
            Expr::Bin(BinOp::Pow, a, b) => {
                let base = a.eval_in(x)?;
                let k = b.eval_exact_exponent(x)?;
                power(base, k)
            }
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval_in(x)?, b.eval_in(x)?);
                Ok(match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a * invert(&b)?,
                    BinOp::Pow => unreachable!(),
                })
            }
            Expr::Call(Func::Abs, e) => {
                let v = e.eval_in(x)?.to_rational().ok_or(EvalError::Transcendental("abs"))?;
                Ok(R::from_rational(&v.abs()))
            }
            Expr::Call(f, _) => Err(EvalError::Transcendental(f.name())),
        }
    }

    fn eval_exact_exponent<R: Ring + fmt::Display>(&self, x: &R) -> Result<i64, EvalError> {
        let v = self.eval_in(x)?;
        let text = v.to_string();
        let r = match v.to_rational() {
            Some(r) if r.is_integer() => r,
            _ => return Err(EvalError::NonIntegerExponent(text)),
        };
        match r.to_integer().to_i64() {
            Some(k) if k.abs() <= MAX_EXACT_EXPONENT => Ok(k),
            _ => Err(EvalError::ExponentTooLarge(text)),
        }
    }
}

fn invert<R: Ring + fmt::Display>(v: &R) -> Result<R, EvalError> {
    v.try_inverse().ok_or_else(|| EvalError::NotInvertible(v.to_string()))
}

fn power<R: Ring + fmt::Display>(base: R, k: i64) -> Result<R, EvalError> {
    let base = if k < 0 { invert(&base)? } else { base };
    let mut acc = R::one();
    let mut sq = base;
    let mut e = k.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * sq.clone();
        }
        e >>= 1;
        if e > 0 {
            sq = sq.clone() * sq;
        }
    }
    Ok(acc)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool| {
            if parens {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Num(r) if r.is_negative() => write!(f, "(-{})", -r),
            Expr::Num(r) if r.is_one() || r.is_integer() => write!(f, "{}", r.numer()),
            Expr::Num(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Expr::Var => f.write_str("x"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                wrap(f, e, e.precedence() < 3)
            }
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
            Expr::Bin(op, a, b) => {
                let p = op.precedence();
                let (left, right) = if *op == BinOp::Pow {
                    (a.precedence() <= p, b.precedence() < 3)
                } else {
                    (a.precedence() < p, b.precedence() <= p)
                };
                wrap(f, a, left)?;
                // spaced so that `a / b` never lexes as a `p/q` literal
                if p == 1 || *op == BinOp::Div {
                    write!(f, " {} ", op.symbol())?;
                } else {
                    write!(f, "{}", op.symbol())?;
                }
                wrap(f, b, right)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat, PolyM};

    fn eval(text: &str, x: Rational) -> Rational {
        parse_expr(text).unwrap().eval_exact(&x).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(eval("1/(1+x^2)", int(2)), rat(1, 5));
        assert_eq!(eval("2^3^2", int(0)), int(512));
        assert_eq!(parse_expr("sin(0)").unwrap().eval_f64(0.0), 0.0);
    }

    #[test]
    fn precedence() {
        assert_eq!(eval("-2^2", int(0)), int(-4));
        assert_eq!(eval("2^-1", int(0)), rat(1, 2));
        assert_eq!(eval("1 - 2 - 3", int(0)), int(-4));
        assert_eq!(eval("12 / 2 / 3", int(0)), int(2));
        assert_eq!(eval("2 + 3 * x", int(4)), int(14));
        assert_eq!(eval("--x", int(4)), int(4));
        assert_eq!(parse_expr("x^1/2").unwrap().eval_f64(4.0), 2.0);
        assert_eq!(parse_expr("x^1 / 2").unwrap().eval_f64(4.0), 2.0);
        assert_eq!(parse_expr("x^1/2").unwrap().eval_f64(9.0), 3.0);
    }

    #[test]
    fn literals() {
        assert_eq!(eval("0.25", int(0)), rat(1, 4));
        assert_eq!(eval(".5", int(0)), rat(1, 2));
        assert_eq!(eval("3/4", int(0)), rat(3, 4));
        assert_eq!(eval("1.5/3", int(0)), rat(1, 2));
        assert_eq!(parse_expr("1/3").unwrap(), Expr::Num(rat(1, 3)));
        assert!(matches!(parse_expr("1 / 3").unwrap(), Expr::Bin(BinOp::Div, ..)));
    }

    #[test]
    fn exact_mode_rejects_transcendentals() {
        let e = parse_expr("exp(-x/10)").unwrap();
        assert_eq!(e.eval_exact(&int(1)), Err(EvalError::Transcendental("exp")));
        assert!((e.eval_f64(10.0) - (-1f64).exp()).abs() < 1e-15);
        assert_eq!(eval("abs(x - 5)", int(2)), int(3));
        assert!(matches!(parse_expr("x^(1/2)").unwrap().eval_exact(&int(4)), Err(EvalError::NonIntegerExponent(_))));
        assert!(matches!(parse_expr("1/x").unwrap().eval_exact(&int(0)), Err(EvalError::NotInvertible(_))));
    }

    #[test]
    fn errors_carry_offsets() {
        let err = parse_expr("1 + * 2").unwrap_err();
        assert_eq!(err.offset, 4);
        assert!(matches!(&err.kind, ParseErrorKind::Unexpected { expected, .. } if expected.contains(&"number")));
        assert_eq!(parse_expr("foo(x)").unwrap_err().kind, ParseErrorKind::UnknownFunction("foo".into()));
        assert_eq!(parse_expr("(x + 1").unwrap_err().offset, 6);
        assert_eq!(parse_expr("x y").unwrap_err().offset, 2);
        assert_eq!(parse_expr("x $ 1").unwrap_err().offset, 2);
        assert!(parse_expr("").is_err());
        assert!(parse_expr("sin x").is_err());
        assert!(parse_expr("1/0").is_err());
    }

    #[test]
    fn polynomial_variable() {
        let e = parse_expr_in("(m - 1)/2", "m").unwrap();
        let p = e.eval_in(&PolyM::m()).unwrap();
        assert_eq!(p, PolyM::from_coeffs(vec![rat(-1, 2), rat(1, 2)]));
        assert!(parse_expr_in("1/m", "m").unwrap().eval_in(&PolyM::m()).is_err());
    }

    #[test]
    fn display_round_trips() {
        for text in ["-2^2", "(-2)^2", "2^3^2", "(2^3)^2", "1 - (2 - x)", "x*-x", "-(x + 1)", "1/3^2", "sin(x)/cos(x)", "2^-x^2", "1 / 3", "1 / 0", "2^1/3"] {
            let e = parse_expr(text).unwrap();
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e, "{text} -> {e}");
        }
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use crate::exactmath::rat;
    use proptest::prelude::*;

    fn tree() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![(0i64..50, 1i64..6).prop_map(|(n, d)| Expr::Num(rat(n, d))), Just(Expr::Var)];
        leaf.prop_recursive(4, 24, 2, |inner| {
            let op = prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Div), Just(BinOp::Pow)];
            let func = (0..Func::ALL.len()).prop_map(|i| Func::ALL[i]);
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (op, inner.clone(), inner.clone()).prop_map(|(op, a, b)| Expr::Bin(op, Box::new(a), Box::new(b))),
                (func, inner).prop_map(|(f, e)| Expr::Call(f, Box::new(e))),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn print_then_parse(e in tree()) {
            let text = e.to_string();
            prop_assert_eq!(parse_expr(&text).unwrap(), e, "{}", text);
        }
    }
}
