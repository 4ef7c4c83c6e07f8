//! The coefficient families `Λ_ν`, `P_{2ν}`, `Q_{2ν}` by independent routes.
//!
//! Coefficients are stored m-scaled: the table entry for `Λ_ν` is `m·Λ_ν(m)`,
//! a polynomial in `m`. Tables are indexed by subscript, so P and Q carry
//! only even indices.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bernoulli::{gen_bernoulli_in, DegreeVector};
use crate::exactmath::{binom, central_factorial, factorial, falling_factorial, int, rat, PolyM, Rational};
use crate::operators::{family_generating, generic_y, DeltaOperator, Family, OperatorError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableFamily {
    Lambda,
    P,
    Q,
    Y,
}

impl From<Family> for TableFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Lambda => TableFamily::Lambda,
            Family::P => TableFamily::P,
            Family::Q => TableFamily::Q,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Bernoulli,
    Series,
    Factorial,
    Recursion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffEntry {
    pub index: u32,
    pub m_scaled: PolyM,
}

impl CoeffEntry {
    /// The unscaled coefficient at a numeric `m`.
    pub fn value_at(&self, m: &Rational) -> Rational {
        self.m_scaled.eval(m) / m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffTable {
    pub family: TableFamily,
    pub route: Route,
    pub entries: Vec<CoeffEntry>,
    pub meta: BTreeMap<String, String>,
}

impl CoeffTable {
    pub fn get(&self, index: u32) -> Option<&PolyM> {
        self.entries.iter().find(|e| e.index == index).map(|e| &e.m_scaled)
    }
}

/// Subscripts carried by a family up to `max_index`.
pub fn indices(family: Family, max_index: u32) -> Vec<u32> {
    match family {
        Family::Lambda => (0..=max_index).collect(),
        Family::P | Family::Q => (2..=max_index).step_by(2).collect(),
    }
}

/// `m·Λ_ν`, `m·P_ν` or `m·Q_ν` (subscript `index`) by the Bernoulli closed
/// form or by the generating series. Odd P/Q subscripts are zero.
pub fn coeff(family: Family, index: u32, route: Route) -> PolyM {
    match route {
        Route::Bernoulli => coeff_bernoulli(family, index),
        Route::Series => family_generating(family, index as i32).coeff(index as i32),
        Route::Recursion => {
            assert_eq!(family, Family::Lambda, "only Λ has a recursion route");
            de_morgan_lambda(index).entries.pop().expect("nonempty").m_scaled
        }
        Route::Factorial => panic!("the factorial route yields values at m = 1/h only; use coeff_factorial_sum"),
    }
}

fn coeff_bernoulli(family: Family, index: u32) -> PolyM {
    if family != Family::Lambda && index % 2 == 1 {
        return PolyM::zero();
    }
    if index == 0 {
        return PolyM::one();
    }
    let degrees = DegreeVector::barnes(index as usize + 1);
    let x = match family {
        Family::Lambda => PolyM::one(),
        Family::Q => PolyM::constant(int(index as i64 / 2)),
        // ν + (m-1)/2
        Family::P => PolyM::from_coeffs(vec![int(index as i64 / 2) - rat(1, 2), rat(1, 2)]),
    };
    gen_bernoulli_in(index, &x, degrees.entries()).scale(&factorial(index).recip())
}

/// The unscaled coefficient at a numeric nonzero `m` by the Bernoulli closed
/// form, evaluated over ℚ without expanding in `m`.
pub fn coeff_at(family: Family, index: u32, m: &Rational) -> Rational {
    assert!(!m.is_zero(), "m must be nonzero");
    if family != Family::Lambda && index % 2 == 1 {
        return Rational::zero();
    }
    if index == 0 {
        return m.recip();
    }
    let mut degrees = vec![int(1); index as usize + 1];
    degrees[0] = m.clone();
    let nu = int(index as i64 / 2);
    let x = match family {
        Family::Lambda => int(1),
        Family::Q => nu,
        Family::P => nu + (m - int(1)) / int(2),
    };
    gen_bernoulli_in(index, &x, &degrees) / factorial(index) / m
}

/// The unscaled coefficient at `m = 1/h` as a finite factorial sum over `x`
/// in unit steps.
pub fn coeff_factorial_sum(family: Family, index: u32, h: u32) -> Rational {
    assert!(h >= 1);
    let hr = int(h as i64);
    let (start, count) = match family {
        Family::Lambda => (int(0), h),
        Family::P => (-rat(h as i64 - 1, 2), h),
        Family::Q => (-rat(h as i64 - 2, 2), h - 1),
    };
    if family != Family::Lambda && index % 2 == 1 {
        return int(0);
    }
    let sum: Rational = (0..count)
        .map(|j| {
            let x = (&start + int(j as i64)) / &hr;
            match family {
                Family::Lambda => falling_factorial(&x, index, false),
                Family::P => central_factorial(&x, index, false),
                Family::Q => central_factorial(&x, index + 1, true),
            }
        })
        .sum();
    sum / factorial(index)
}

pub fn table(family: Family, max_index: u32, route: Route) -> CoeffTable {
    let entries = match route {
        Route::Series => {
            let gf = family_generating(family, max_index as i32);
            indices(family, max_index).into_iter().map(|k| CoeffEntry { index: k, m_scaled: gf.coeff(k as i32) }).collect()
        }
        Route::Recursion => return de_morgan_lambda(max_index),
        _ => indices(family, max_index).into_iter().map(|k| CoeffEntry { index: k, m_scaled: coeff(family, k, route) }).collect(),
    };
    CoeffTable { family: family.into(), route, entries, meta: meta(&[("max_index", max_index.to_string())]) }
}

fn meta(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// `Y_1 ..= Y_max` of a delta operator, stored under [`TableFamily::Y`].
pub fn y_table(phi: &DeltaOperator, max_index: u32) -> Result<CoeffTable, OperatorError> {
    let y = generic_y(phi, max_index as usize)?;
    let entries = y.into_iter().enumerate().skip(1).map(|(k, p)| CoeffEntry { index: k as u32, m_scaled: p }).collect();
    let phi_text: Vec<String> = phi.coeffs().iter().map(ToString::to_string).collect();
    Ok(CoeffTable {
        family: TableFamily::Y,
        route: Route::Series,
        entries,
        meta: meta(&[("max_index", max_index.to_string()), ("phi", phi_text.join(","))]),
    })
}

/// `m·Λ_0 ..= m·Λ_max` from `C(m,1)Λ_ν + C(m,2)Λ_{ν-1} + ... + C(m,ν+1)Λ_0 = 0`
/// seeded with `m·Λ_0 = 1`.
pub fn de_morgan_lambda(nu_max: u32) -> CoeffTable {
    // C(m,k)/m, exact in ℚ[m] for k >= 1
    let r: Vec<PolyM> = (0..=nu_max + 1)
        .map(|k| if k == 0 { PolyM::zero() } else { binom(&PolyM::m(), k).div_m().expect("C(m,k) divisible by m") })
        .collect();
    let mut l = vec![PolyM::one()];
    for nu in 1..=nu_max as usize {
        let acc = (2..=nu + 1).fold(PolyM::zero(), |acc, k| acc + &r[k] * &l[nu + 1 - k]);
        l.push(-acc);
    }
    let entries = l.into_iter().enumerate().map(|(k, p)| CoeffEntry { index: k as u32, m_scaled: p }).collect();
    CoeffTable { family: TableFamily::Lambda, route: Route::Recursion, entries, meta: meta(&[("max_index", nu_max.to_string())]) }
}

/// `(-1)^ν m·Λ_ν` at `m = 0`.
pub fn adams_coefficient(nu: u32) -> Rational {
    let v = coeff(Family::Lambda, nu, Route::Bernoulli).eval(&int(0));
    if nu % 2 == 0 {
        v
    } else {
        -v
    }
}

/// `((-1)^ν/ν!) ∫_0^1 t(t-1)...(t-ν+1) dt`, integrated term by term.
pub fn adams_integral(nu: u32) -> Rational {
    // the falling factorial as a polynomial in t; PolyM serves as ℚ[t]
    let poly = falling_factorial(&PolyM::m(), nu, false);
    let integral: Rational = poly.coeffs().iter().enumerate().map(|(k, c)| c / int(k as i64 + 1)).sum();
    let sign = if nu % 2 == 0 { int(1) } else { int(-1) };
    sign * integral / factorial(nu)
}

/// `((-1)^ν/ν!) B^{(ν)}_ν(1)` with unit degrees.
pub fn adams_from_unit_bernoulli(nu: u32) -> Rational {
    let v = gen_bernoulli_in(nu, &int(1), &vec![int(1); nu as usize]) / factorial(nu);
    if nu % 2 == 0 {
        v
    } else {
        -v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub family: TableFamily,
    pub index: u32,
    pub routes: (Route, Route),
    /// `None` for symbolic comparisons, `Some(h)` when compared at `m = 1/h`.
    pub h: Option<u32>,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub comparisons: usize,
    pub mismatches: Vec<Mismatch>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Tables for every family by every symbolic route, including the de Morgan
/// recursion for Λ.
pub fn route_tables(max_index: u32) -> Vec<CoeffTable> {
    let jobs: Vec<(Family, Route)> = [Family::Lambda, Family::P, Family::Q]
        .into_iter()
        .flat_map(|f| {
            let mut routes = vec![Route::Bernoulli, Route::Series];
            if f == Family::Lambda {
                routes.push(Route::Recursion);
            }
            routes.into_iter().map(move |r| (f, r))
        })
        .collect();
    jobs.into_par_iter().map(|(f, r)| table(f, max_index, r)).collect()
}

/// Compares every symbolic table of a family against the first one, and each
/// of them against the factorial sums at `m = 1/h`.
pub fn cross_check_tables(tables: &[CoeffTable], h_set: &[u32]) -> CrossCheckReport {
    let mut report = CrossCheckReport::default();
    for family in [Family::Lambda, Family::P, Family::Q] {
        let fam: Vec<&CoeffTable> = tables.iter().filter(|t| t.family == family.into()).collect();
        let Some(base) = fam.first() else { continue };
        for entry in &base.entries {
            for other in &fam[1..] {
                report.comparisons += 1;
                let theirs = other.get(entry.index).cloned().unwrap_or_default();
                if theirs != entry.m_scaled {
                    report.mismatches.push(Mismatch {
                        family: family.into(),
                        index: entry.index,
                        routes: (base.route, other.route),
                        h: None,
                        left: entry.m_scaled.to_string(),
                        right: theirs.to_string(),
                    });
                }
            }
            for &h in h_set {
                let m = rat(1, h as i64);
                let fact = coeff_factorial_sum(family, entry.index, h);
                for t in &fam {
                    report.comparisons += 1;
                    let value = t.get(entry.index).map(|p| p.eval(&m) / &m).unwrap_or_else(Rational::zero);
                    if value != fact {
                        report.mismatches.push(Mismatch {
                            family: family.into(),
                            index: entry.index,
                            routes: (t.route, Route::Factorial),
                            h: Some(h),
                            left: value.to_string(),
                            right: fact.to_string(),
                        });
                    }
                }
            }
        }
    }
    report
}

pub fn cross_check(max_index: u32, h_set: &[u32]) -> CrossCheckReport {
    cross_check_tables(&route_tables(max_index), h_set)
}
