//! Exact scalars, polynomials in the subdivision indeterminate `m`, and the
//! factorial-type products used by the coefficient formulas.
//!
//! Everything here is exact. [`Rational`] is an arbitrary-precision fraction
//! kept in lowest terms; [`PolyM`] is a dense univariate polynomial over
//! [`Rational`] with no trailing zero coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty number")]
    Empty,
    #[error("invalid number `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// `n/d` as a [`Rational`]. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u32) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * int(k as i64))
}

/// `x^k` for a (possibly negative) integer exponent. `0^k` with `k < 0` panics.
pub fn pow_i(x: &Rational, k: i64) -> Rational {
    let base = if k < 0 { x.recip() } else { x.clone() };
    let mut acc = Rational::one();
    for _ in 0..k.unsigned_abs() {
        acc *= &base;
    }
    acc
}

pub fn to_f64(x: &Rational) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        // very large numerator or denominator: scale down by the bit length first
        _ => {
            let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(900) as usize;
            let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Parses an integer, a fraction `p/q`, or a decimal with optional exponent
/// (`-1.25`, `3e-2`). Decimals are converted exactly.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let bad = || ParseRationalError::Invalid(s.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.to_string()));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{whole}{frac}");
    let n = BigInt::from_str(if all_digits.is_empty() { "0" } else { &all_digits }).map_err(|_| bad())?;
    let scale = exponent - frac.len() as i64;
    let value = Rational::from_integer(n) * pow_i(&int(10), scale);
    Ok(if negative { -value } else { value })
}

/// Commutative ring with exact arithmetic, as needed by the series and
/// factorial code. Implemented for [`Rational`] and [`PolyM`].
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;

    /// Multiplicative inverse, if it exists in the ring.
    fn try_inverse(&self) -> Option<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&int(n))
    }

    /// The value as a rational, if it is one.
    fn to_rational(&self) -> Option<Rational>;
}

impl Ring for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn try_inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

/// Polynomial in the subdivision indeterminate `m`, ascending coefficients.
///
/// Canonical form has no trailing zero coefficient; the zero polynomial has
/// no coefficients at all.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyM {
    coeffs: Vec<Rational>,
}

impl PolyM {
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyM { coeffs }
    }

    /// Shorthand for integer-coefficient polynomials in tests and tables.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The indeterminate `m`.
    pub fn m() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `m^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Horner evaluation at `m = v`.
    pub fn eval(&self, v: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * v + c)
    }

    /// Substitutes `m -> p`.
    pub fn compose(&self, p: &PolyM) -> PolyM {
        self.coeffs
            .iter()
            .rev()
            .fold(PolyM::zero(), |acc, c| acc * p.clone() + PolyM::constant(c.clone()))
    }

    pub fn scale(&self, c: &Rational) -> PolyM {
        PolyM::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, k: u32) -> PolyM {
        (0..k).fold(PolyM::one(), |acc, _| acc * self.clone())
    }

    /// Exact division by `m`; `None` when the constant term is nonzero.
    pub fn div_m(&self) -> Option<PolyM> {
        match self.coeffs.first() {
            None => Some(PolyM::zero()),
            Some(c0) if c0.is_zero() => Some(PolyM::from_coeffs(self.coeffs[1..].to_vec())),
            Some(_) => None,
        }
    }

    /// Polynomial long division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &PolyM) -> (PolyM, PolyM) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let q = &rem[rem.len() - 1] * &lead;
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &q * d;
            }
            quot[k] = q;
            rem.pop();
        }
        (PolyM::from_coeffs(quot), PolyM::from_coeffs(rem))
    }

    pub fn is_divisible_by(&self, divisor: &PolyM) -> bool {
        self.div_rem(divisor).1.is_zero()
    }

    /// Ascending coefficient strings, `"p/q"` or `"p"`.
    pub fn to_wire(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }

    pub fn from_wire<S: AsRef<str>>(coeffs: &[S]) -> Result<Self, ParseRationalError> {
        coeffs
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map(Self::from_coeffs)
    }
}

impl fmt::Debug for PolyM {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyM({self})")
    }
}

impl fmt::Display for PolyM {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                (_, false) => write!(f, "{a}*")?,
            }
            match k {
                0 => {}
                1 => f.write_str("m")?,
                _ => write!(f, "m^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for PolyM {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_wire().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PolyM {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(deserializer)?;
        PolyM::from_wire(&raw).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter writing a [`Rational`] as its exact `"p/q"` string.
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let raw = String::deserialize(deserializer)?;
        parse_rational(&raw).map_err(serde::de::Error::custom)
    }
}

impl Zero for PolyM {
    fn zero() -> Self {
        PolyM { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for PolyM {
    fn one() -> Self {
        PolyM::from_ints(&[1])
    }
}

impl Add for PolyM {
    type Output = PolyM;

    fn add(self, rhs: PolyM) -> PolyM {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a += b;
        }
        PolyM::from_coeffs(long)
    }
}

impl Neg for PolyM {
    type Output = PolyM;

    fn neg(self) -> PolyM {
        PolyM { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Sub for PolyM {
    type Output = PolyM;

    fn sub(self, rhs: PolyM) -> PolyM {
        self + (-rhs)
    }
}

impl Mul for PolyM {
    type Output = PolyM;

    fn mul(self, rhs: PolyM) -> PolyM {
        &self * &rhs
    }
}

impl Mul for &PolyM {
    type Output = PolyM;

    fn mul(self, rhs: &PolyM) -> PolyM {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return PolyM::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyM::from_coeffs(out)
    }
}

impl From<Rational> for PolyM {
    fn from(c: Rational) -> Self {
        PolyM::constant(c)
    }
}

impl Ring for PolyM {
    fn from_rational(r: &Rational) -> Self {
        PolyM::constant(r.clone())
    }

    fn try_inverse(&self) -> Option<Self> {
        match self.coeffs.len() {
            1 => Some(PolyM::constant(self.coeffs[0].recip())),
            _ => None,
        }
    }

    fn to_rational(&self) -> Option<Rational> {
        self.constant_value()
    }
}

/// Binomial coefficient `top (top-1) ... (top-k+1) / k!` over any ring.
pub fn binom<R: Ring>(top: &R, k: u32) -> R {
    falling_factorial(top, k, false) * R::from_rational(&factorial(k).recip())
}

/// `z (z-1) ... (z-n+1)`; the reduced form drops the leading factor,
/// giving `(z-1)(z-2) ... (z-n)`.
pub fn falling_factorial<R: Ring>(z: &R, n: u32, reduced: bool) -> R {
    let range = if reduced { 1..=n } else { 0..=n.saturating_sub(1) };
    if n == 0 {
        return R::one();
    }
    range.fold(R::one(), |acc, j| acc * (z.clone() - R::from_i64(j as i64)))
}

/// Central factorial `z * prod_{j=1}^{n-1} (z + n/2 - j)`; the reduced form
/// omits the leading `z`, so it stays finite (and meaningful) at `z = 0`.
pub fn central_factorial<R: Ring>(z: &R, n: u32, reduced: bool) -> R {
    if n == 0 {
        return R::one();
    }
    let half_n = rat(n as i64, 2);
    let lead = if reduced { R::one() } else { z.clone() };
    (1..n).fold(lead, |acc, j| {
        acc * (z.clone() + R::from_rational(&(&half_n - int(j as i64))))
    })
}

/// Factorial sequence of the operator `E^alpha (E^beta - 1) / beta`:
/// `x prod_{k=1}^{nu-1} (x - nu*alpha - k*beta)`.
pub fn gould_poweroid(x: &Rational, nu: u32, alpha: &Rational, beta: &Rational) -> Rational {
    if nu == 0 {
        return Rational::one();
    }
    let shift = int(nu as i64) * alpha;
    (1..nu).fold(x.clone(), |acc, k| acc * (x - &shift - int(k as i64) * beta))
}

/// Smallest nonnegative residue of `a` modulo `m` (`m > 0`).
pub fn mod_floor(a: i64, m: i64) -> i64 {
    a.mod_floor(&m)
}
