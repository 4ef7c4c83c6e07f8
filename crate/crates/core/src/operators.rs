//! Operator calculus in the formal indeterminates `D`, `δ = 2 sinh(D/2)`,
//! `Δ = e^D - 1` and a general delta operator `θ = φ(D)`.
//!
//! Every change of variable goes through [`Series::revert`] and
//! [`Series::compose`]. Quotients whose leading coefficient would be the
//! symbolic `m` are formed with the monomial factored out, so that all
//! coefficients stay in `ℚ[m]`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bernoulli::{gen_bernoulli_in, DegreeVector};
use crate::exactmath::{factorial, int, pow_i, rat, PolyM, Rational};
use crate::series::{Series, Transcendental};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OperatorError {
    #[error("delta operator needs a nonzero linear coefficient")]
    ZeroLinear,
    #[error("beta must be nonzero")]
    ZeroBeta,
    #[error("delta operator known to {have} coefficients; order {needed} requested")]
    TooShort { needed: usize, have: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Lambda,
    P,
    Q,
}

/// `φ(D) = a D/1! + b D²/2! + c D³/3! + ...`, stored as `(a, b, c, ...)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaOperator {
    coeffs: Vec<Rational>,
}

impl DeltaOperator {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self, OperatorError> {
        if coeffs.first().is_none_or(Zero::is_zero) {
            return Err(OperatorError::ZeroLinear);
        }
        Ok(DeltaOperator { coeffs })
    }

    /// `Δ = e^D - 1`: all coefficients 1.
    pub fn forward(len: usize) -> Self {
        DeltaOperator { coeffs: vec![int(1); len.max(1)] }
    }

    /// `δ = 2 sinh(D/2)`: `2^{1-ν}` at odd `ν`, zero at even.
    pub fn central(len: usize) -> Self {
        let coeffs = (1..=len.max(1) as i64)
            .map(|k| if k % 2 == 1 { pow_i(&int(2), 1 - k) } else { int(0) })
            .collect();
        DeltaOperator { coeffs }
    }

    /// Steffensen's divided difference `E^α (E^β - 1) / β`, whose `ν`-th
    /// coefficient is `((α+β)^ν - α^ν) / β`.
    pub fn steffensen(alpha: &Rational, beta: &Rational, len: usize) -> Result<Self, OperatorError> {
        if beta.is_zero() {
            return Err(OperatorError::ZeroBeta);
        }
        let ab = alpha + beta;
        let coeffs = (1..=len.max(1) as i64).map(|k| (pow_i(&ab, k) - pow_i(alpha, k)) / beta).collect();
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `φ(D)/D` as a unit series in `D`, known to order `len - 1`.
    fn reduced(&self) -> Series<PolyM> {
        let coeffs = self.coeffs.iter().enumerate().map(|(k, c)| PolyM::constant(c / factorial(k as u32 + 1))).collect();
        Series::new(0, coeffs, self.coeffs.len() as i32 - 1).expect("nonnegative orders")
    }

    /// `φ(D)` as a series, known to order `len`.
    pub fn series(&self) -> Series<PolyM> {
        self.reduced().shift(1).expect("order 1 start")
    }

    /// True if every even (or every odd) coefficient vanishes.
    pub fn has_parity(&self) -> bool {
        let odd_zero = self.coeffs.iter().step_by(2).all(Zero::is_zero);
        let even_zero = self.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero);
        odd_zero || even_zero
    }
}

pub(crate) fn poly_series(low: i32, trunc: i32, f: impl Fn(i32) -> PolyM) -> Series<PolyM> {
    Series::from_fn(low, trunc, f).expect("valid orders")
}

/// `u(x)/u(mx)` for a unit series `u`; the monomial has already been removed.
fn subdivided_ratio(unit: &Series<PolyM>) -> Series<PolyM> {
    unit.try_div(&unit.scale_variable(&PolyM::m())).expect("unit denominator")
}

/// `D` as a series in `δ`: the reversion of `2 sinh(D/2)`.
pub fn d_of_central(order: i32) -> Series<PolyM> {
    DeltaOperator::central(order as usize).series().revert().expect("unit linear term")
}

/// `D` as a series in `Δ`: the reversion of `e^D - 1`.
pub fn d_of_forward(order: i32) -> Series<PolyM> {
    DeltaOperator::forward(order as usize).series().revert().expect("unit linear term")
}

/// `δ_m = 2 sinh(m sinh⁻¹(δ/2))` as an odd series in `δ` over `ℚ[m]`.
pub fn delta_m_expansion(order: i32) -> Series<PolyM> {
    let outer = poly_series(0, order, |k| {
        if k % 2 == 1 {
            PolyM::m().pow(k as u32).scale(&(pow_i(&int(2), 1 - k as i64) / factorial(k as u32)))
        } else {
            PolyM::zero()
        }
    });
    outer.compose(&d_of_central(order)).expect("no constant term")
}

/// `log(δ_m / (mδ))`, an even series in `δ` with zero constant term.
pub fn log_delta_m_tail(order: i32) -> Series<PolyM> {
    // δ_m/(mδ) = [2 sinh(mu/2)/(mu)](u(δ)) · u(δ)/δ
    let sinhc = poly_series(0, order, |k| {
        if k % 2 == 0 {
            PolyM::m().pow(k as u32).scale(&(pow_i(&int(2), -k as i64) / factorial(k as u32 + 1)))
        } else {
            PolyM::zero()
        }
    });
    let u = d_of_central(order + 1);
    let unit = sinhc.compose(&u).expect("no constant term").try_mul(&u.shift(-1).expect("order 1 start")).expect("no principal part");
    unit.truncate(order).log().expect("constant term 1")
}

/// `x/2` over `ℚ[m]`, known to `order`.
fn half_variable(order: i32) -> Series<PolyM> {
    Series::variable(order).scale(&PolyM::constant(rat(1, 2)))
}

/// The m-scaled generating series of a coefficient family in its natural
/// variable (`δ` for P and Q, `Δ` for Λ), known to `order`. Its coefficient
/// of `δ^{2ν}` (or `Δ^ν`) is `m·Q_{2ν}`, `m·P_{2ν}` (or `m·Λ_ν`).
pub fn family_generating(family: Family, order: i32) -> Series<PolyM> {
    match family {
        Family::Q | Family::P => {
            let kind = if family == Family::Q { Transcendental::Tanh } else { Transcendental::Sinh };
            // f(u/2)/(u/2), a unit series
            let unit = half_variable(order + 1)
                .transcend(kind)
                .expect("no constant term")
                .shift(-1)
                .expect("order 1 start")
                .scale(&PolyM::constant(int(2)));
            subdivided_ratio(&unit).compose(&d_of_central(order)).expect("no constant term")
        }
        Family::Lambda => {
            // (e^u - 1)/u
            let unit = poly_series(0, order, |k| PolyM::constant(factorial(k as u32 + 1).recip()));
            subdivided_ratio(&unit).compose(&d_of_forward(order)).expect("no constant term")
        }
    }
}

/// `Y_0 ..= Y_order` of the generalized Lubbock expansion
/// `m θ θ_m⁻¹ = 1 + Y_1 θ + Y_2 θ² + ...`, with `θ_m = φ(mD)`.
///
/// Requires `phi` to carry at least `order + 1` coefficients.
pub fn generic_y(phi: &DeltaOperator, order: usize) -> Result<Vec<PolyM>, OperatorError> {
    if phi.len() < order + 1 {
        return Err(OperatorError::TooShort { needed: order + 1, have: phi.len() });
    }
    let ratio = subdivided_ratio(&phi.reduced());
    let d_of_theta = phi.series().revert().map_err(|_| OperatorError::ZeroLinear)?;
    let y = ratio.compose(&d_of_theta).expect("no constant term");
    Ok((0..=order as i32).map(|k| y.coeff(k)).collect())
}

/// The three early polynomials printed for a general `(a, b, c, d)`.
pub fn printed_y(a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> [PolyM; 3] {
    let m = PolyM::m;
    let one = PolyM::one;
    let k = |r: Rational| PolyM::constant(r);
    let y1 = (m() - one()).scale(&(b / (int(2) * pow_i(a, 2))));
    let y2 = (m().pow(2) - one()).scale(&((int(2) * a * c - int(3) * b * b) / (int(12) * pow_i(a, 4))));
    let abc = a * b * c;
    let b3 = pow_i(b, 3);
    let a2d = a * a * d;
    let first = k(a2d.clone() - int(4) * &abc + int(3) * &b3) * m().pow(2);
    let second = k(a2d - int(6) * &abc + int(6) * &b3) * (m() + one());
    let y3 = ((m() - one()) * (first + second)).scale(&(int(24) * pow_i(a, 6)).recip());
    [y1, y2, y3]
}

/// The global sign `σ` with `printed Y_ν = σ · series Y_ν` for `ν = 1, 2, 3`
/// across every supplied operator, or `None` if no single sign fits.
pub fn resolve_sign(operators: &[DeltaOperator]) -> Option<i32> {
    [1, -1].into_iter().find(|&sigma| {
        operators.iter().all(|phi| {
            let mut c = phi.coeffs().to_vec();
            c.resize(4.max(c.len()), int(0));
            let series = match generic_y(phi, 3) {
                Ok(y) => y,
                Err(_) => return false,
            };
            let printed = printed_y(&c[0], &c[1], &c[2], &c[3]);
            (1..=3).all(|nu| printed[nu - 1] == series[nu].scale(&int(sigma as i64)))
        })
    })
}

fn steffensen_args(nu: u32, alpha: &Rational, beta: &Rational) -> Result<(Rational, PolyM), OperatorError> {
    if beta.is_zero() {
        return Err(OperatorError::ZeroBeta);
    }
    let lambda = alpha / beta;
    // a = λ(1 - ν - m)
    let a = PolyM::from_coeffs(vec![&lambda * int(1 - nu as i64), -lambda.clone()]);
    Ok((lambda, a))
}

/// Closed form `(β^{ν+1}/ν!) [(1+λ) B^{(ν+1)}_ν(1+a | m,1) - λ B^{(ν+1)}_ν(a | m,1)]`
/// with `λ = α/β` and `a = λ(1 - ν - m)`, as printed.
pub fn steffensen_y_closed(nu: u32, alpha: &Rational, beta: &Rational) -> Result<PolyM, OperatorError> {
    let (lambda, a) = steffensen_args(nu, alpha, beta)?;
    let degrees = DegreeVector::barnes(nu as usize + 1);
    let b = |x: &PolyM| gen_bernoulli_in(nu, x, degrees.entries());
    let inner = b(&(a.clone() + PolyM::one())).scale(&(int(1) + &lambda)) - b(&a).scale(&lambda);
    Ok(inner.scale(&(pow_i(beta, nu as i64 + 1) / factorial(nu))))
}

/// The first printed line of the same closed form,
/// `(β^{ν+1}/ν!) [λν B^{(ν)}_{ν-1}(a | m,1) + B^{(ν+1)}_ν(1+a | m,1)]`.
pub fn steffensen_y_first_line(nu: u32, alpha: &Rational, beta: &Rational) -> Result<PolyM, OperatorError> {
    assert!(nu >= 1);
    let (lambda, a) = steffensen_args(nu, alpha, beta)?;
    let lower = gen_bernoulli_in(nu - 1, &a, DegreeVector::barnes(nu as usize).entries());
    let upper = gen_bernoulli_in(nu, &(a + PolyM::one()), DegreeVector::barnes(nu as usize + 1).entries());
    let inner = lower.scale(&(lambda * int(nu as i64))) + upper;
    Ok(inner.scale(&(pow_i(beta, nu as i64 + 1) / factorial(nu))))
}

/// The Q generating series rebuilt from the log tail: `1 + δ · d/dδ tail(δ)`.
pub fn q_from_log_tail(order: i32) -> Series<PolyM> {
    let tail = log_delta_m_tail(order + 1);
    let one = Series::constant(PolyM::one(), order);
    &one + &tail.derivative().expect("no principal part").shift(1).expect("valid order")
}
