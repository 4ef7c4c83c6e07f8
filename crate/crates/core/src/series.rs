//! Truncated formal Laurent series over an exact [`Ring`].
//!
//! A series stores its coefficients densely from its lowest nonzero order up
//! to `trunc`, the highest order whose coefficient is known. Orders above
//! `trunc` are unknown rather than zero, and every operation propagates the
//! tightest order it can guarantee. Principal parts are limited to a single
//! `x^-1` term.

use std::ops::{Add, Neg, Sub};

use thiserror::Error;

use crate::exactmath::{factorial, int, rat, Rational, Ring};

/// Lowest order a series may carry.
pub const MIN_ORDER: i32 = -1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("division by a series that is zero to its known order")]
    DivisionByZero,
    #[error("leading coefficient is not invertible in the coefficient ring; factor the monomial out first")]
    NonInvertibleLeading,
    #[error("inner series of a composition or reversion must have no constant term")]
    ConstantTerm,
    #[error("reversion needs a series starting at order 1")]
    NotReversible,
    #[error("logarithm needs a series with constant term 1")]
    NotUnit,
    #[error("result would have a principal part below order {MIN_ORDER}")]
    PrincipalPart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transcendental {
    Exp,
    Log,
    Sinh,
    Cosh,
    Tanh,
}

#[derive(Debug, Clone)]
pub struct Series<R> {
    low: i32,
    coeffs: Vec<R>,
    trunc: i32,
}

impl<R: Ring> Series<R> {
    /// Builds a series from coefficients of orders `low, low+1, ...`, known
    /// up to order `trunc`. Coefficients past `trunc` are dropped.
    pub fn new(low: i32, coeffs: Vec<R>, trunc: i32) -> Result<Self, SeriesError> {
        let s = Self::normalized(low, coeffs, trunc);
        if !s.is_zero() && s.low < MIN_ORDER {
            return Err(SeriesError::PrincipalPart);
        }
        Ok(s)
    }

    fn normalized(mut low: i32, mut coeffs: Vec<R>, trunc: i32) -> Self {
        let keep = (trunc - low + 1).max(0) as usize;
        coeffs.truncate(keep);
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        coeffs.drain(..lead);
        low += lead as i32;
        while coeffs.last().is_some_and(R::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            low = 0;
        }
        Series { low, coeffs, trunc }
    }

    /// Series with `coeff(k) = f(k)` for `low <= k <= trunc`.
    pub fn from_fn(low: i32, trunc: i32, f: impl FnMut(i32) -> R) -> Result<Self, SeriesError> {
        Self::new(low, (low..=trunc).map(f).collect(), trunc)
    }

    pub fn zero(trunc: i32) -> Self {
        Series { low: 0, coeffs: Vec::new(), trunc }
    }

    pub fn constant(c: R, trunc: i32) -> Self {
        Self::normalized(0, vec![c], trunc)
    }

    /// The indeterminate itself, `x`.
    pub fn variable(trunc: i32) -> Self {
        Self::normalized(1, vec![R::one()], trunc)
    }

    pub fn trunc_order(&self) -> i32 {
        self.trunc
    }

    /// Lowest order with a nonzero coefficient; `trunc + 1` for a series that
    /// is zero to its known order.
    pub fn valuation(&self) -> i32 {
        if self.coeffs.is_empty() {
            self.trunc + 1
        } else {
            self.low
        }
    }

    pub fn low_order(&self) -> i32 {
        self.low
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^k`. Panics when `k` is above the known order.
    pub fn coeff(&self, k: i32) -> R {
        assert!(k <= self.trunc, "coefficient of order {k} unknown (truncated at {})", self.trunc);
        if k < self.low {
            return R::zero();
        }
        self.coeffs.get((k - self.low) as usize).cloned().unwrap_or_else(R::zero)
    }

    /// Coefficients of orders `from..=trunc`.
    pub fn coeffs_from(&self, from: i32) -> Vec<R> {
        (from..=self.trunc).map(|k| self.coeff(k)).collect()
    }

    /// Lowers the known order to `trunc` (never raises it).
    pub fn truncate(&self, trunc: i32) -> Self {
        Self::normalized(self.low, self.coeffs.clone(), trunc.min(self.trunc))
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Series<S> {
        Series::normalized(self.low, self.coeffs.iter().map(f).collect(), self.trunc)
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    /// `f(c x)`: coefficient `k` multiplied by `c^k`. Requires `low >= 0`.
    pub fn scale_variable(&self, c: &R) -> Self {
        assert!(self.low >= 0 || self.is_zero());
        let mut power = R::one();
        for _ in 0..self.low {
            power = power * c.clone();
        }
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.clone() * power.clone());
            power = power * c.clone();
        }
        Series::normalized(self.low, out, self.trunc)
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: i32) -> Result<Self, SeriesError> {
        Self::new(self.low + k, self.coeffs.clone(), self.trunc + k)
    }

    /// Coefficientwise equality up to the smaller of the two known orders.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let top = self.trunc.min(other.trunc);
        let bottom = self.valuation().min(other.valuation()).min(top + 1);
        (bottom..=top).all(|k| self.coeff(k) == other.coeff(k))
    }

    pub fn arith(op: ArithOp, f: &Self, g: &Self) -> Result<Self, SeriesError> {
        match op {
            ArithOp::Add => Ok(f + g),
            ArithOp::Sub => Ok(f - g),
            ArithOp::Mul => f.try_mul(g),
            ArithOp::Div => f.try_div(g),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        let (vf, vg) = (self.valuation(), other.valuation());
        let trunc = (self.trunc + vg).min(other.trunc + vf);
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(trunc));
        }
        let low = vf + vg;
        let len = (trunc - low + 1).max(0) as usize;
        let mut out = vec![R::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(low, out, trunc)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, SeriesError> {
        if other.is_zero() {
            return Err(SeriesError::DivisionByZero);
        }
        let lead_inv = other.coeffs[0].try_inverse().ok_or(SeriesError::NonInvertibleLeading)?;
        let (vf, vg) = (self.valuation(), other.valuation());
        let trunc = (self.trunc - vg).min(other.trunc - 2 * vg + vf);
        if self.is_zero() {
            return Ok(Self::zero(trunc));
        }
        let low = vf - vg;
        let len = (trunc - low + 1).max(0) as usize;
        let mut q: Vec<R> = Vec::with_capacity(len);
        for n in 0..len {
            let mut acc = self.coeffs.get(n).cloned().unwrap_or_else(R::zero);
            for k in 1..=n.min(other.coeffs.len().saturating_sub(1)) {
                acc = acc - other.coeffs[k].clone() * q[n - k].clone();
            }
            q.push(acc * lead_inv.clone());
        }
        Self::new(low, q, trunc)
    }

    /// Multiplicative inverse, `1 / f`.
    pub fn recip(&self) -> Result<Self, SeriesError> {
        // the constant 1 is exact, so give it enough room not to limit the quotient
        Self::constant(R::one(), (self.trunc - self.valuation()).max(0)).try_div(self)
    }

    /// `self(inner(x))`. The inner series must have no constant term and the
    /// outer one no principal part.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        let b = inner.valuation();
        if b < 1 {
            return Err(SeriesError::ConstantTerm);
        }
        if !self.is_zero() && self.low < 0 {
            return Err(SeriesError::PrincipalPart);
        }
        let mut trunc = b * (self.trunc + 1) - 1;
        if let Some(kmin) = (1..=self.trunc).find(|&k| k >= self.low && !self.coeff(k).is_zero()) {
            trunc = trunc.min(inner.trunc + (kmin - 1) * b);
        }
        if trunc < 0 {
            return Ok(Self::zero(trunc));
        }
        let len = (trunc + 1) as usize;
        let inner_dense: Vec<R> = (0..len as i32)
            .map(|k| if k <= inner.trunc { inner.coeff(k) } else { R::zero() })
            .collect();
        let mut acc = vec![R::zero(); len];
        let mut power = vec![R::zero(); len];
        power[0] = R::one();
        let kmax = self.trunc.min(trunc / b);
        for k in 0..=kmax {
            let fk = self.coeff(k);
            if !fk.is_zero() {
                for (a, p) in acc.iter_mut().zip(&power) {
                    *a = a.clone() + fk.clone() * p.clone();
                }
            }
            if k < kmax {
                power = dense_mul(&power, &inner_dense, len);
            }
        }
        Self::new(0, acc, trunc)
    }

    /// Compositional inverse of `c1 x + c2 x^2 + ...`, by Lagrange inversion:
    /// `[x^n] g = (1/n) [x^(n-1)] (x/f)^n`.
    pub fn revert(&self) -> Result<Self, SeriesError> {
        if self.valuation() != 1 {
            return Err(if self.valuation() < 1 { SeriesError::ConstantTerm } else { SeriesError::NotReversible });
        }
        if self.coeffs[0].try_inverse().is_none() {
            return Err(SeriesError::NonInvertibleLeading);
        }
        let trunc = self.trunc;
        let unit = self.shift(-1)?;
        let x_over_f = unit.recip()?.truncate(trunc - 1);
        let mut g = vec![R::zero(); (trunc + 1).max(1) as usize];
        let mut power = Series::constant(R::one(), trunc - 1);
        for n in 1..=trunc {
            power = power.try_mul(&x_over_f)?;
            let c = power.coeff(n - 1) * R::from_rational(&rat(1, n as i64));
            g[n as usize] = c;
        }
        Self::new(0, g, trunc)
    }

    pub fn transcend(&self, kind: Transcendental) -> Result<Self, SeriesError> {
        match kind {
            Transcendental::Log => {
                if self.valuation() != 0 || !self.coeff(0).is_one() {
                    return Err(SeriesError::NotUnit);
                }
                let tail = self - &Self::constant(R::one(), self.trunc);
                maclaurin(kind, self.trunc).compose(&tail)
            }
            Transcendental::Tanh => {
                let s = self.transcend(Transcendental::Sinh)?;
                let c = self.transcend(Transcendental::Cosh)?;
                s.try_div(&c)
            }
            _ => {
                if self.valuation() < 1 {
                    return Err(SeriesError::ConstantTerm);
                }
                maclaurin(kind, self.trunc).compose(self)
            }
        }
    }

    pub fn exp(&self) -> Result<Self, SeriesError> {
        self.transcend(Transcendental::Exp)
    }

    pub fn log(&self) -> Result<Self, SeriesError> {
        self.transcend(Transcendental::Log)
    }

    /// Term-by-term derivative. Requires no principal part.
    pub fn derivative(&self) -> Result<Self, SeriesError> {
        if !self.is_zero() && self.low < 0 {
            return Err(SeriesError::PrincipalPart);
        }
        let coeffs = (1..=self.trunc).map(|k| self.coeff(k) * R::from_i64(k as i64)).collect();
        Self::new(0, coeffs, self.trunc - 1)
    }
}

fn dense_mul<R: Ring>(a: &[R], b: &[R], len: usize) -> Vec<R> {
    let mut out = vec![R::zero(); len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] = out[i + j].clone() + x.clone() * y.clone();
            }
        }
    }
    out
}

/// Maclaurin series of the elementary function in the variable `u`; `Log`
/// gives `log(1 + u)`.
pub fn maclaurin<R: Ring>(kind: Transcendental, trunc: i32) -> Series<R> {
    let coeff = |k: i32| -> Rational {
        let inv_fact = factorial(k as u32).recip();
        match kind {
            Transcendental::Exp => inv_fact,
            Transcendental::Sinh if k % 2 == 1 => inv_fact,
            Transcendental::Cosh if k % 2 == 0 => inv_fact,
            Transcendental::Log if k >= 1 => {
                let sign = if k % 2 == 1 { 1 } else { -1 };
                rat(sign, k as i64)
            }
            _ => int(0),
        }
    };
    assert!(kind != Transcendental::Tanh, "tanh has no simple closed-form coefficient; use sinh/cosh");
    Series::normalized(0, (0..=trunc.max(0)).map(|k| R::from_rational(&coeff(k))).collect(), trunc)
}

impl<R: Ring> Add for &Series<R> {
    type Output = Series<R>;

    fn add(self, rhs: &Series<R>) -> Series<R> {
        let trunc = self.trunc.min(rhs.trunc);
        let low = self.valuation().min(rhs.valuation()).min(trunc + 1);
        let coeffs = (low..=trunc).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Series::normalized(low, coeffs, trunc)
    }
}

impl<R: Ring> Neg for &Series<R> {
    type Output = Series<R>;

    fn neg(self) -> Series<R> {
        self.map(|c| -c.clone())
    }
}

impl<R: Ring> Sub for &Series<R> {
    type Output = Series<R>;

    fn sub(self, rhs: &Series<R>) -> Series<R> {
        self + &(-rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::PolyM;

    type S = Series<Rational>;

    fn ints(low: i32, cs: &[i64], trunc: i32) -> S {
        S::new(low, cs.iter().map(|&c| int(c)).collect(), trunc).unwrap()
    }

    #[test]
    fn arith_examples() {
        let one_plus = ints(0, &[1, 1], 10);
        let one_minus = ints(0, &[1, -1], 10);
        assert!(one_plus.try_mul(&one_minus).unwrap().agrees_with(&ints(0, &[1, 0, -1], 10)));
        let x = S::variable(10);
        assert!(x.try_div(&x).unwrap().agrees_with(&S::constant(int(1), 9)));
        let geo = one_minus.recip().unwrap();
        assert_eq!(geo.coeffs_from(0), vec![int(1); 11]);
    }

    #[test]
    fn principal_part_and_errors() {
        let x = S::variable(8);
        let inv = S::constant(int(1), 8).try_div(&x).unwrap();
        assert_eq!(inv.low_order(), -1);
        assert_eq!(inv.try_mul(&inv).unwrap_err(), SeriesError::PrincipalPart);
        assert_eq!(x.try_div(&S::zero(8)).unwrap_err(), SeriesError::DivisionByZero);
        let mx = Series::<PolyM>::new(1, vec![PolyM::m()], 5).unwrap();
        assert_eq!(mx.try_div(&mx).unwrap_err(), SeriesError::NonInvertibleLeading);
        assert_eq!(x.compose(&ints(0, &[1, 1], 8)).unwrap_err(), SeriesError::ConstantTerm);
        assert_eq!(ints(0, &[2, 1], 8).log().unwrap_err(), SeriesError::NotUnit);
        assert_eq!(ints(0, &[1, 1], 8).exp().unwrap_err(), SeriesError::ConstantTerm);
    }

    #[test]
    fn compose_examples() {
        let x2 = ints(2, &[1], 10);
        let g = ints(1, &[1, 0, 1], 10);
        let r = x2.compose(&g).unwrap();
        assert_eq!(r.coeff(2), int(1));
        assert_eq!(r.coeff(3), int(0));
        assert_eq!(r.coeff(4), int(2));
        let f = ints(0, &[3, 1, 4, 1, 5], 10);
        assert!(f.compose(&S::variable(10)).unwrap().agrees_with(&f));
    }

    #[test]
    fn exp_of_log1p_is_identity() {
        let log1p = maclaurin::<Rational>(Transcendental::Log, 10);
        let r = maclaurin::<Rational>(Transcendental::Exp, 10).compose(&log1p).unwrap();
        assert_eq!(r.trunc_order(), 10);
        assert!(r.agrees_with(&ints(0, &[1, 1], 10)));
    }

    #[test]
    fn revert_examples() {
        assert!(S::variable(9).revert().unwrap().agrees_with(&S::variable(9)));
        // 2 sinh(x/2) reverts to 2 asinh(x/2) = x - x^3/24 + 3x^5/640 - ...
        let half_x = S::variable(9).scale(&rat(1, 2));
        let two_sinh = half_x.transcend(Transcendental::Sinh).unwrap().scale(&int(2));
        let inv = two_sinh.revert().unwrap();
        assert_eq!(inv.coeff(1), int(1));
        assert_eq!(inv.coeff(2), int(0));
        assert_eq!(inv.coeff(3), rat(-1, 24));
        assert_eq!(inv.coeff(5), rat(3, 640));
        assert_eq!(inv.coeff(7), rat(-5, 7168));
        let f = ints(1, &[1, 1, 1], 12);
        let id = f.compose(&f.revert().unwrap()).unwrap();
        assert_eq!(id.trunc_order(), 12);
        assert!(id.agrees_with(&S::variable(12)));
    }

    #[test]
    fn transcendental_examples() {
        assert!(S::zero(6).exp().unwrap().agrees_with(&S::constant(int(1), 6)));
        let log = ints(0, &[1, 1], 6).log().unwrap();
        assert_eq!(log.coeffs_from(0), vec![int(0), int(1), rat(-1, 2), rat(1, 3), rat(-1, 4), rat(1, 5), rat(-1, 6)]);
        let tanh = S::variable(7).scale(&rat(1, 2)).transcend(Transcendental::Tanh).unwrap();
        assert_eq!(tanh.coeff(1), rat(1, 2));
        assert_eq!(tanh.coeff(3), rat(-1, 24));
        assert_eq!(tanh.coeff(5), rat(1, 240));
        assert_eq!(tanh.coeff(7), rat(-17, 40320));
    }

    #[test]
    fn truncation_is_tracked() {
        let f = ints(0, &[1, 2, 3], 3);
        let g = ints(2, &[1], 6);
        // g known to order 6 with valuation 2, f to 3 with valuation 0
        assert_eq!(f.try_mul(&g).unwrap().trunc_order(), 5);
        assert_eq!((&f + &g).trunc_order(), 3);
        let q = g.try_div(&ints(1, &[1, 1], 6)).unwrap();
        assert_eq!(q.low_order(), 1);
        assert_eq!(q.trunc_order(), 5);
        let d = ints(0, &[1, 1, 1, 1], 4).derivative().unwrap();
        assert_eq!(d.coeffs_from(0), vec![int(1), int(2), int(3), int(0)]);
    }

    #[test]
    fn parity_of_sinh_and_cosh() {
        let odd = ints(1, &[1, 0, 3, 0, -2], 11);
        let s = odd.transcend(Transcendental::Sinh).unwrap();
        let c = odd.transcend(Transcendental::Cosh).unwrap();
        for k in 0..=11 {
            if k % 2 == 0 {
                assert_eq!(s.coeff(k), int(0));
            } else {
                assert_eq!(c.coeff(k), int(0));
            }
        }
    }
}
