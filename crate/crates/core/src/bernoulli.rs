//! Ordinary and generalized (Nörlund) Bernoulli numbers and polynomials.
//!
//! `B^{(n)}_ν(x | ω)` is `ν!` times the coefficient of `t^ν` in
//! `e^{xt} ∏ ω_i t / (e^{ω_i t} - 1)`. The generating function is the
//! definition used throughout; the convolution and recursion formulas here
//! are independent routes checked against it.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{binom, factorial, int, rational_serde, PolyM, Rational, Ring};
use crate::series::Series;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BernoulliError {
    #[error("order {order} does not match the {len} supplied degrees")]
    OrderMismatch { order: usize, len: usize },
    #[error("degree {0} is neither a positive rational nor the indeterminate m")]
    InvalidDegree(String),
}

/// The degrees `ω_i`. Each is a positive rational constant or `m` itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeVector {
    entries: Vec<PolyM>,
}

impl DegreeVector {
    pub fn new(entries: Vec<PolyM>) -> Result<Self, BernoulliError> {
        for e in &entries {
            let ok = match e.constant_value() {
                Some(c) => c > Rational::zero(),
                None => *e == PolyM::m(),
            };
            if !ok {
                return Err(BernoulliError::InvalidDegree(e.to_string()));
            }
        }
        Ok(DegreeVector { entries })
    }

    /// `n` unit degrees.
    pub fn unit(n: usize) -> Self {
        DegreeVector { entries: vec![PolyM::one(); n] }
    }

    /// `(m, 1, ..., 1)` of length `n`, the degrees of the Barnes residues.
    pub fn barnes(n: usize) -> Self {
        Self::leading(PolyM::m(), n)
    }

    /// `(first, 1, ..., 1)` of length `n`.
    pub fn leading(first: PolyM, n: usize) -> Self {
        assert!(n >= 1);
        let mut entries = vec![PolyM::one(); n];
        entries[0] = first;
        DegreeVector { entries }
    }

    pub fn entries(&self) -> &[PolyM] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The degrees as rationals, when none of them is symbolic.
    pub fn as_rationals(&self) -> Option<Vec<Rational>> {
        self.entries.iter().map(PolyM::constant_value).collect()
    }
}

impl std::fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A computed `B^{(n)}_ν(x | ω)` together with its arguments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BernoulliResult {
    pub order: usize,
    pub index: u32,
    pub argument: PolyM,
    pub degrees: DegreeVector,
    pub value: PolyM,
}

/// Truncated `e^{ct}` known to order `nu`.
fn exp_series<R: Ring>(c: &R, nu: u32) -> Series<R> {
    let mut power = R::one();
    let mut coeffs = Vec::with_capacity(nu as usize + 1);
    for k in 0..=nu {
        coeffs.push(power.clone() * R::from_rational(&factorial(k).recip()));
        power = power * c.clone();
    }
    Series::new(0, coeffs, nu as i32).expect("nonnegative orders")
}

/// `(e^{ωt} - 1) / (ωt)`, a unit series.
fn difference_unit<R: Ring>(omega: &R, nu: u32) -> Series<R> {
    let mut power = R::one();
    let mut coeffs = Vec::with_capacity(nu as usize + 1);
    for k in 0..=nu {
        coeffs.push(power.clone() * R::from_rational(&factorial(k + 1).recip()));
        power = power * omega.clone();
    }
    Series::new(0, coeffs, nu as i32).expect("nonnegative orders")
}

/// `B^{(n)}_ν(x | ω)` over any exact ring, with `n = degrees.len()`.
pub fn gen_bernoulli_in<R: Ring>(nu: u32, x: &R, degrees: &[R]) -> R {
    let t = nu as i32;
    let mut denom = Series::constant(R::one(), t);
    for w in degrees {
        denom = denom.try_mul(&difference_unit(w, nu)).expect("no principal part");
    }
    let gf = exp_series(x, nu).try_div(&denom).expect("unit denominator");
    gf.coeff(t) * R::from_rational(&factorial(nu))
}

pub fn gen_bernoulli(n: usize, nu: u32, x: &PolyM, omega: &DegreeVector) -> Result<PolyM, BernoulliError> {
    if omega.len() != n {
        return Err(BernoulliError::OrderMismatch { order: n, len: omega.len() });
    }
    Ok(gen_bernoulli_in(nu, x, omega.entries()))
}

pub fn evaluate(nu: u32, x: PolyM, degrees: DegreeVector) -> BernoulliResult {
    let value = gen_bernoulli_in(nu, &x, degrees.entries());
    BernoulliResult { order: degrees.len(), index: nu, argument: x, degrees, value }
}

/// `B_s` from the generating function `t / (e^t - 1)`.
pub fn bernoulli_number(s: u32) -> Rational {
    gen_bernoulli_in(s, &Rational::zero(), &[Rational::one()])
}

/// `B_0 ..= B_{s_max}` from `Σ_{j=0}^{k} C(k+1, j) B_j = 0`.
pub fn bernoulli_numbers_recurrence(s_max: u32) -> Vec<Rational> {
    let mut b = vec![Rational::one()];
    for k in 1..=s_max {
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += binom(&int(k as i64 + 1), j as u32) * bj;
        }
        b.push(-acc / int(k as i64 + 1));
    }
    b
}

/// Unit-degree numbers `B^{(n)}_0 ..= B^{(n)}_{nu_max}` as the `n`-fold
/// binomial convolution of the ordinary numbers.
pub fn unit_degree_numbers(n: usize, nu_max: u32) -> Vec<Rational> {
    let b = bernoulli_numbers_recurrence(nu_max);
    let mut cur: Vec<Rational> = (0..=nu_max).map(|k| if k == 0 { int(1) } else { int(0) }).collect();
    for _ in 0..n {
        cur = (0..=nu_max)
            .map(|nu| (0..=nu).map(|s| binom(&int(nu as i64), s) * &b[s as usize] * &cur[(nu - s) as usize]).sum())
            .collect();
    }
    cur
}

/// `B^{(n)}_ν(x)` with unit degrees, as `Σ C(ν,s) x^s B^{(n)}_{ν-s}`.
pub fn unit_degree_polynomial(n: usize, nu: u32, x: &PolyM) -> PolyM {
    let numbers = unit_degree_numbers(n, nu);
    (0..=nu).fold(PolyM::zero(), |acc, s| {
        acc + x.pow(s).scale(&(binom(&int(nu as i64), s) * &numbers[(nu - s) as usize]))
    })
}

/// `B^{(n+1)}_ν(x | m, 1^n) = Σ m^s C(ν,s) B_s B^{(n)}_{ν-s}(x)`.
pub fn gen_bernoulli_convolution(n_plus_1: usize, nu: u32, x: &PolyM) -> PolyM {
    assert!(n_plus_1 >= 1);
    let b = bernoulli_numbers_recurrence(nu);
    (0..=nu).fold(PolyM::zero(), |acc, s| {
        let c = binom(&int(nu as i64), s) * &b[s as usize];
        if c.is_zero() {
            return acc;
        }
        acc + PolyM::m().pow(s) * unit_degree_polynomial(n_plus_1 - 1, nu - s, x).scale(&c)
    })
}

/// m-scaled first-pole residue `(1/(r-1)!) B^{(r)}_{r-1}(a | m, 1^{r-1})`.
///
/// This normalization is the one that reproduces the coefficient families
/// (`mΛ_r` at `r+1, a=1`, `mQ_{2ν}` at `2ν+1, a=ν`).
pub fn n1_residue(r: usize, a: &PolyM) -> PolyM {
    assert!(r >= 1);
    gen_bernoulli_in(r as u32 - 1, a, DegreeVector::barnes(r).entries()).scale(&factorial(r as u32 - 1).recip())
}

/// [`n1_residue`] with the alternating sign `(-1)^{r+1}` of the Barnes
/// residue formula. Differs from it only for even `r`.
pub fn n1_residue_signed(r: usize, a: &PolyM) -> PolyM {
    let v = n1_residue(r, a);
    if r % 2 == 0 {
        -v
    } else {
        v
    }
}

/// One case of the recursion `B^{(n)}_ν = Σ_{s=1}^{ν} (-1)^s C(ν,s) B_s B^{(n)}_{ν-s}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecursionCase {
    pub n: usize,
    pub nu: u32,
    #[serde(with = "rational_serde")]
    pub lhs: Rational,
    #[serde(with = "rational_serde")]
    pub rhs: Rational,
    pub holds: bool,
}

/// Checks the printed unit-degree recursion against the generating function
/// for `1 <= n <= n_max`, `1 <= ν <= nu_max`.
pub fn norlund_recursion_diagnostic(n_max: usize, nu_max: u32) -> Vec<RecursionCase> {
    let b = bernoulli_numbers_recurrence(nu_max);
    let mut out = Vec::new();
    for n in 1..=n_max {
        let numbers = unit_degree_numbers(n, nu_max);
        for nu in 1..=nu_max {
            let rhs: Rational = (1..=nu)
                .map(|s| {
                    let sign = if s % 2 == 0 { int(1) } else { int(-1) };
                    sign * binom(&int(nu as i64), s) * &b[s as usize] * &numbers[(nu - s) as usize]
                })
                .sum();
            let lhs = numbers[nu as usize].clone();
            out.push(RecursionCase { n, nu, holds: lhs == rhs, lhs, rhs });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn c(v: Rational) -> PolyM {
        PolyM::constant(v)
    }

    #[test]
    fn bernoulli_number_examples() {
        assert_eq!(bernoulli_number(0), int(1));
        assert_eq!(bernoulli_number(1), rat(-1, 2));
        assert_eq!(bernoulli_number(2), rat(1, 6));
        assert_eq!(bernoulli_number(3), int(0));
        assert_eq!(bernoulli_number(12), rat(-691, 2730));
        let rec = bernoulli_numbers_recurrence(16);
        for s in 0..=16 {
            assert_eq!(rec[s as usize], bernoulli_number(s));
        }
    }

    #[test]
    fn gen_bernoulli_examples() {
        let m = PolyM::m();
        for n in 0..5 {
            assert_eq!(gen_bernoulli(n, 0, &c(int(3)), &DegreeVector::unit(n)).unwrap(), PolyM::one());
        }
        assert_eq!(gen_bernoulli(2, 2, &PolyM::zero(), &DegreeVector::unit(2)).unwrap(), c(rat(5, 6)));
        let v = gen_bernoulli(3, 2, &PolyM::one(), &DegreeVector::barnes(3)).unwrap();
        assert_eq!(v, (m.pow(2) - PolyM::one()).scale(&rat(1, 6)));
        assert!(matches!(
            gen_bernoulli(2, 1, &PolyM::one(), &DegreeVector::unit(3)),
            Err(BernoulliError::OrderMismatch { order: 2, len: 3 })
        ));
        assert!(DegreeVector::new(vec![c(int(-1))]).is_err());
        assert!(DegreeVector::new(vec![PolyM::m().pow(2)]).is_err());
    }

    #[test]
    fn convolution_examples() {
        let m = PolyM::m();
        assert_eq!(gen_bernoulli_convolution(4, 0, &m), PolyM::one());
        assert_eq!(gen_bernoulli_convolution(3, 2, &PolyM::one()), (m.pow(2) - PolyM::one()).scale(&rat(1, 6)));
        assert_eq!(gen_bernoulli_convolution(2, 1, &PolyM::one()), (PolyM::one() - m).scale(&rat(1, 2)));
    }

    #[test]
    fn convolution_matches_generating_function() {
        let m = PolyM::m();
        for n in 0..=5usize {
            for nu in 0..=8u32 {
                let nu_p = c(int(nu as i64));
                let xs = [PolyM::zero(), PolyM::one(), nu_p.clone(), nu_p + (m.clone() - PolyM::one()).scale(&rat(1, 2))];
                for x in &xs {
                    assert_eq!(
                        gen_bernoulli_convolution(n + 1, nu, x),
                        gen_bernoulli(n + 1, nu, x, &DegreeVector::barnes(n + 1)).unwrap(),
                        "n+1={} nu={nu} x={x}",
                        n + 1
                    );
                }
            }
        }
    }

    #[test]
    fn factorial_structure() {
        for n in 1..=8usize {
            for a in [rat(1, 2), int(3), rat(-2, 3)] {
                let v = gen_bernoulli_in(n as u32, &a, &vec![int(1); n + 1]);
                let expect: Rational = (1..=n as i64).map(|k| &a - int(k)).product();
                assert_eq!(v, expect);
            }
        }
    }

    #[test]
    fn degree_one_formula() {
        let x = PolyM::from_ints(&[2, 1]);
        for degrees in [vec![PolyM::m(), c(rat(3, 2))], vec![c(int(2)); 4], vec![c(rat(1, 5))]] {
            let sum = degrees.iter().cloned().fold(PolyM::zero(), |a, b| a + b);
            let dv = DegreeVector::new(degrees).unwrap();
            assert_eq!(gen_bernoulli(dv.len(), 1, &x, &dv).unwrap(), x.clone() - sum.scale(&rat(1, 2)));
        }
    }

    #[test]
    fn evaluation_at_m_one_gives_unit_degrees() {
        for n in 1..=4usize {
            for nu in 0..=6 {
                let x = PolyM::from_ints(&[1, 1]);
                let sym = gen_bernoulli(n, nu, &x, &DegreeVector::barnes(n)).unwrap();
                let unit = gen_bernoulli_in(nu, &int(2), &vec![int(1); n]);
                assert_eq!(sym.eval(&int(1)), unit);
            }
        }
    }

    #[test]
    fn residue_examples() {
        let m = PolyM::m();
        let one = PolyM::one();
        assert_eq!(n1_residue(1, &c(int(7))), one);
        assert_eq!(n1_residue(3, &one), (m.pow(2) - one.clone()).scale(&rat(1, 12)));
        let q4 = (m.pow(2) - one.clone()) * (m.pow(2) + c(int(11)));
        assert_eq!(n1_residue(5, &c(int(2))), q4.scale(&rat(-1, 720)));
        assert_eq!(n1_residue_signed(2, &one), -n1_residue(2, &one));
    }

    #[test]
    fn norlund_recursion_fails_at_n1_nu1() {
        let cases = norlund_recursion_diagnostic(3, 4);
        let first = cases.iter().find(|c| c.n == 1 && c.nu == 1).unwrap();
        assert!(!first.holds);
        assert_eq!(first.lhs, -first.rhs.clone());
    }
}
