//! Subdivided summation: a fine-grid sum estimated from coarse samples plus
//! endpoint difference corrections weighted by the Lubbock coefficients at
//! `m = 1/h`.
//!
//! Coarse samples are `f_k = f(x₀ + k)`; the fine grid has step `1/h`.
//!
//! * Forward: `Σ_{j=0}^{hn-1} f(x₀ + j/h) = h Σ_{k=0}^{n-1} f_k
//!   + Σ_ν Λ_ν(1/h) [Δ^{ν-1} f_n - Δ^{ν-1} f_0]`.
//! * Central: the fine trapezoid sum with step `1/h` is
//!   `h T + Σ_ν Q_{2ν}(1/h) [μδ^{2ν-1} f_n - μδ^{2ν-1} f_0]`, `T` being the
//!   coarse trapezoid sum. The midpoint sum `Σ_{j=0}^{hn-1} f(x₀ + (j+½)/h)`
//!   is the step `1/2h` trapezoid sum minus the step `1/h` one, so its
//!   weights are `Q_{2ν}(1/2h) - Q_{2ν}(1/h)`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{int, rat, to_f64, Rational};
use crate::lubbock::coeff_at;
use crate::operators::Family;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;
    fn from_rational(r: &Rational) -> Self;
    fn magnitude(&self) -> f64;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn magnitude(&self) -> f64 {
        to_f64(&self.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Forward,
    Central,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SummationError {
    #[error("insufficient samples: indices {need_from}..={need_to} required, table covers {have_from}..={have_to}")]
    InsufficientSamples { need_from: i64, need_to: i64, have_from: i64, have_to: i64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

/// Coarse samples `f(x₀ + k)` for `k = start, start+1, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleTable<S> {
    pub start: i64,
    pub values: Vec<S>,
}

impl<S: Scalar> SampleTable<S> {
    pub fn new(start: i64, values: Vec<S>) -> Self {
        SampleTable { start, values }
    }

    /// Samples `f(k)` for `from <= k <= to`.
    pub fn from_fn<E>(from: i64, to: i64, mut f: impl FnMut(i64) -> Result<S, E>) -> Result<Self, E> {
        let values = (from..=to).map(&mut f).collect::<Result<Vec<_>, E>>()?;
        Ok(SampleTable { start: from, values })
    }

    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn get(&self, k: i64) -> Option<&S> {
        usize::try_from(k - self.start).ok().and_then(|i| self.values.get(i))
    }

    fn covers(&self, from: i64, to: i64) -> bool {
        from >= self.start && to <= self.end()
    }

    fn at(&self, k: i64) -> S {
        self.get(k).cloned().expect("range checked")
    }

    /// `Δ^r f(p)` from samples `p ..= p+r`.
    fn forward_difference(&self, p: i64, r: u32) -> S {
        let mut acc = S::zero();
        let mut c = int(1);
        for i in 0..=r as i64 {
            let term = S::from_rational(&c) * self.at(p + r as i64 - i);
            acc = acc + term;
            c = -c * int(r as i64 - i) / int(i + 1);
        }
        acc
    }

    /// `μδ^{2ν-1} f(p) = [Δ^{2ν-1} f(p-ν+1) + Δ^{2ν-1} f(p-ν)] / 2`.
    fn mean_odd_central(&self, p: i64, nu: u32) -> S {
        let r = 2 * nu - 1;
        let half = S::from_rational(&rat(1, 2));
        (self.forward_difference(p - nu as i64 + 1, r) + self.forward_difference(p - nu as i64, r)) * half
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummationRequest<S> {
    pub samples: SampleTable<S>,
    /// Number of coarse intervals.
    pub n: u32,
    /// Subdivision: fine points per coarse interval.
    pub h: u32,
    /// Highest correction order `K`.
    pub order: u32,
    pub variant: Variant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummationResult<S> {
    pub estimate: S,
    pub coarse_term: S,
    pub corrections: Vec<S>,
    /// The first neglected correction, when the table has the extra sample
    /// it needs. A heuristic size of the truncation error, not a bound.
    pub error_indicator: Option<S>,
    pub exact: bool,
}

/// Index range `(from, to)` of coarse samples a request needs.
pub fn required_range(variant: Variant, n: u32, order: u32) -> (i64, i64) {
    let (n, k) = (n as i64, order as i64);
    match variant {
        Variant::Forward => (0, n + k - 1),
        Variant::Central => (-k, n + k),
    }
}

fn validate<S: Scalar>(req: &SummationRequest<S>, expected: Variant) -> Result<(), SummationError> {
    if req.variant != expected {
        return Err(SummationError::InvalidParameter("request variant does not match the summation routine"));
    }
    if req.h == 0 {
        return Err(SummationError::InvalidParameter("h must be at least 1"));
    }
    if req.order == 0 {
        return Err(SummationError::InvalidParameter("order must be at least 1"));
    }
    let (from, to) = required_range(req.variant, req.n, req.order);
    if !req.samples.covers(from, to) {
        return Err(SummationError::InsufficientSamples {
            need_from: from,
            need_to: to,
            have_from: req.samples.start,
            have_to: req.samples.end(),
        });
    }
    Ok(())
}

fn assemble<S: Scalar>(coarse_term: S, corrections: Vec<S>, error_indicator: Option<S>) -> SummationResult<S> {
    let estimate = corrections.iter().cloned().fold(coarse_term.clone(), |a, c| a + c);
    SummationResult { estimate, coarse_term, corrections, error_indicator, exact: S::EXACT }
}

/// Unscaled coefficients `c_1 ..= c_{order+1}` of a family at `m = 1/h`; for
/// P and Q entry `ν` is the coefficient of subscript `2ν`.
fn weights(family: Family, h: u32, order: u32) -> Vec<Rational> {
    let m = rat(1, h as i64);
    let step = if family == Family::Lambda { 1 } else { 2 };
    (1..=order + 1).map(|nu| coeff_at(family, step * nu, &m)).collect()
}

fn midpoint_weights(h: u32, order: u32) -> Vec<Rational> {
    let half = weights(Family::Q, 2 * h, order);
    let whole = weights(Family::Q, h, order);
    half.into_iter().zip(whole).map(|(a, b)| a - b).collect()
}

pub fn lubbock_forward_sum<S: Scalar>(req: &SummationRequest<S>) -> Result<SummationResult<S>, SummationError> {
    validate(req, Variant::Forward)?;
    let s = &req.samples;
    let n = req.n as i64;
    let h = S::from_rational(&int(req.h as i64));
    let coarse = (0..n).fold(S::zero(), |a, k| a + s.at(k)) * h;
    let w = weights(Family::Lambda, req.h, req.order);
    let correction = |nu: u32| {
        let c = S::from_rational(&w[nu as usize - 1]);
        c * (s.forward_difference(n, nu - 1) - s.forward_difference(0, nu - 1))
    };
    let corrections = (1..=req.order).map(correction).collect();
    let next = req.order + 1;
    let indicator = s.covers(0, n + next as i64 - 1).then(|| correction(next));
    Ok(assemble(coarse, corrections, indicator))
}

pub fn lubbock_central_sum<S: Scalar>(req: &SummationRequest<S>) -> Result<SummationResult<S>, SummationError> {
    validate(req, Variant::Central)?;
    let s = &req.samples;
    let n = req.n as i64;
    let h = S::from_rational(&int(req.h as i64));
    let half = S::from_rational(&rat(1, 2));
    let trapezoid = (0..n).fold(S::zero(), |a, k| a + (s.at(k) + s.at(k + 1)) * half.clone());
    let coarse = trapezoid * h;
    let w = midpoint_weights(req.h, req.order);
    let correction = |nu: u32| {
        let c = S::from_rational(&w[nu as usize - 1]);
        c * (s.mean_odd_central(n, nu) - s.mean_odd_central(0, nu))
    };
    let corrections = (1..=req.order).map(correction).collect();
    let next = req.order as i64 + 1;
    let indicator = s.covers(-next, n + next).then(|| correction(req.order + 1));
    Ok(assemble(coarse, corrections, indicator))
}

pub fn lubbock_sum<S: Scalar>(req: &SummationRequest<S>) -> Result<SummationResult<S>, SummationError> {
    match req.variant {
        Variant::Forward => lubbock_forward_sum(req),
        Variant::Central => lubbock_central_sum(req),
    }
}

/// The fine sum by brute force: grid points for the forward variant,
/// midpoints for the central one.
pub fn direct_fine_sum<S: Scalar, E>(
    f: impl Fn(&Rational) -> Result<S, E>,
    x0: &Rational,
    n: u32,
    h: u32,
    variant: Variant,
) -> Result<S, E> {
    let hr = int(h as i64);
    let point = |j: u32| x0 + int(j as i64) / &hr;
    let count = n * h;
    match variant {
        Variant::Forward => (0..count).try_fold(S::zero(), |acc, j| Ok(acc + f(&point(j))?)),
        Variant::Central => {
            let offset = rat(1, 2 * h as i64);
            (0..count).try_fold(S::zero(), |acc, j| Ok(acc + f(&(point(j) + &offset))?))
        }
    }
}

/// Samples `f(x₀ + k)` over the range a request needs (plus one more on each
/// side for the error indicator).
pub fn sample<S: Scalar, E>(
    f: impl Fn(&Rational) -> Result<S, E>,
    x0: &Rational,
    variant: Variant,
    n: u32,
    order: u32,
) -> Result<SampleTable<S>, E> {
    let (from, to) = required_range(variant, n, order + 1);
    SampleTable::from_fn(from, to, |k| f(&(x0 + int(k))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn req<S: Scalar>(f: impl Fn(&Rational) -> S, x0: &Rational, n: u32, h: u32, order: u32, variant: Variant) -> SummationRequest<S> {
        let samples = sample(|x| Ok::<_, Infallible>(f(x)), x0, variant, n, order).unwrap();
        SummationRequest { samples, n, h, order, variant }
    }

    fn direct<S: Scalar>(f: impl Fn(&Rational) -> S, x0: &Rational, n: u32, h: u32, variant: Variant) -> S {
        direct_fine_sum(|x| Ok::<_, Infallible>(f(x)), x0, n, h, variant).unwrap()
    }

    #[test]
    fn constant_function() {
        for variant in [Variant::Forward, Variant::Central] {
            for (n, h, k) in [(3, 4, 1), (5, 2, 3), (1, 7, 2)] {
                let r = lubbock_sum(&req(|_| rat(7, 3), &int(0), n, h, k, variant)).unwrap();
                assert_eq!(r.estimate, rat(7, 3) * int((n * h) as i64));
            }
        }
    }

    #[test]
    fn linear_examples() {
        let r = lubbock_forward_sum(&req(|x| x.clone(), &int(0), 4, 3, 2, Variant::Forward)).unwrap();
        assert_eq!(r.estimate, int(22));
        assert_eq!(direct(|x| x.clone(), &int(0), 4, 3, Variant::Forward), int(22));
        let r = lubbock_central_sum(&req(|x| x.clone(), &int(0), 4, 3, 2, Variant::Central)).unwrap();
        assert_eq!(r.estimate, int(3 * 16) / int(2));
        assert!(r.corrections.iter().all(Zero::is_zero));
    }

    #[test]
    fn direct_examples() {
        assert_eq!(direct(|_| int(1), &int(0), 3, 4, Variant::Forward), int(12));
        assert_eq!(direct(|x| x.clone(), &int(0), 2, 2, Variant::Forward), int(3));
        assert_eq!(direct(|x| x.clone(), &int(0), 2, 2, Variant::Central), int(4));
    }

    #[test]
    fn polynomial_exactness() {
        let f = |x: &Rational| x * x * x * x * x - int(3) * x * x + rat(1, 2);
        for variant in [Variant::Forward, Variant::Central] {
            for h in [2, 3, 5] {
                let r = lubbock_sum(&req(f, &rat(-1, 3), 6, h, 6, variant)).unwrap();
                assert_eq!(r.estimate, direct(f, &rat(-1, 3), 6, h, variant), "{variant:?} h={h}");
            }
        }
    }

    #[test]
    fn h_one_is_the_coarse_sum() {
        let f = |x: &Rational| x * x * x;
        let r = lubbock_forward_sum(&req(f, &int(1), 5, 1, 4, Variant::Forward)).unwrap();
        assert_eq!(r.estimate, r.coarse_term);
        assert_eq!(r.estimate, direct(f, &int(1), 5, 1, Variant::Forward));
    }

    #[test]
    fn exponential_accuracy() {
        let f = |x: &Rational| (-to_f64(x) / 10.0).exp();
        let r = lubbock_forward_sum(&req(f, &int(0), 50, 10, 6, Variant::Forward)).unwrap();
        let d = direct(f, &int(0), 50, 10, Variant::Forward);
        assert!((r.estimate - d).abs() / d <= 1e-8);
        assert!(r.error_indicator.unwrap().abs() < 1e-6);
    }

    #[test]
    fn insufficient_samples() {
        let samples = SampleTable::new(0, vec![1.0; 5]);
        let request = SummationRequest { samples, n: 4, h: 2, order: 3, variant: Variant::Forward };
        assert_eq!(
            lubbock_forward_sum(&request),
            Err(SummationError::InsufficientSamples { need_from: 0, need_to: 6, have_from: 0, have_to: 4 })
        );
        let central = SummationRequest { variant: Variant::Central, ..request.clone() };
        assert!(matches!(lubbock_central_sum(&central), Err(SummationError::InsufficientSamples { need_from: -3, .. })));
        assert!(matches!(lubbock_central_sum(&request), Err(SummationError::InvalidParameter(_))));
    }

    #[test]
    fn decomposition_is_exact() {
        let f = |x: &Rational| 1.0 / (1.0 + to_f64(x));
        let r = lubbock_central_sum(&req(f, &int(10), 20, 8, 5, Variant::Central)).unwrap();
        let sum = r.corrections.iter().fold(r.coarse_term, |a, c| a + c);
        assert_eq!(sum.to_bits(), r.estimate.to_bits());
        assert!(!r.exact);
    }
}
