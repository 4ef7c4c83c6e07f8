//! Verification suites and the report they produce.
//!
//! Grids are evaluated in parallel and collected in generation order, so a
//! report is identical from run to run.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bernoulli::{
    bernoulli_number, bernoulli_numbers_recurrence, gen_bernoulli, gen_bernoulli_convolution, gen_bernoulli_in, n1_residue,
    n1_residue_signed, norlund_recursion_diagnostic, DegreeVector,
};
use crate::exactmath::{int, rat, PolyM, Rational};
use crate::identities::{
    appendix_sum_check, bernoulli_chain, calibrate_odd_prefactor, cosec_sum_case, cosec_sum_exact, cosec_sum_numeric,
    even_image_sum, even_printed_rhs, gbern3_check, gf_check, gf_reduction_check, image_check, params, unreduced_closed_form_holds,
    OddPrefactor, Quantity, VerificationCase,
};
use crate::lubbock::{
    adams_coefficient, adams_from_unit_bernoulli, adams_integral, cross_check_tables, de_morgan_lambda, route_tables, CoeffTable,
    Route, TableFamily,
};
use crate::operators::{
    delta_m_expansion, generic_y, log_delta_m_tail, q_from_log_tail, resolve_sign, steffensen_y_closed, steffensen_y_first_line,
    DeltaOperator, Family,
};
use crate::series::Series;

/// Order of the generating-function expansions.
pub const GF_ORDER: i32 = 12;
/// Subdivisions used for the factorial-sum comparisons.
pub const CROSS_CHECK_H: [u32; 8] = [1, 2, 3, 4, 5, 6, 7, 8];
/// Steffensen parameter grid `(α, β)`.
pub const STEFFENSEN_GRID: [(i64, i64, i64); 4] = [(0, 1, 1), (1, 1, 1), (-1, 2, 1), (1, 1, 2)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Appendix,
    Image,
    Gf,
    Operators,
    Bernoulli,
    All,
}

impl Suite {
    pub const PARTS: [Suite; 5] = [Suite::Appendix, Suite::Image, Suite::Gf, Suite::Operators, Suite::Bernoulli];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Appendix => "appendix",
            Suite::Image => "image",
            Suite::Gf => "gf",
            Suite::Operators => "operators",
            Suite::Bernoulli => "bernoulli",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::PARTS
            .iter()
            .chain([Suite::All].iter())
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub m_max: i64,
    pub nu_max: u32,
    pub tol: f64,
    /// Coefficient tables to check in place of freshly built ones.
    pub tables: Option<Vec<CoeffTable>>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { m_max: 12, nu_max: 5, tol: 1e-9, tables: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub cases: Vec<VerificationCase>,
    pub findings: Vec<String>,
    pub all_passed: bool,
    /// The global sign relating the printed `Y_1..Y_3` to the series route.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<i32>,
}

impl Report {
    fn new(suite: Suite) -> Self {
        Report { suite: suite.name().to_string(), cases: Vec::new(), findings: Vec::new(), all_passed: true, sigma: None }
    }

    fn finish(mut self) -> Self {
        self.all_passed = self.cases.iter().all(|c| c.passed);
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerificationCase> {
        self.cases.iter().filter(|c| !c.passed)
    }

    fn absorb(&mut self, other: Report) {
        self.cases.extend(other.cases);
        self.findings.extend(other.findings);
        self.sigma = self.sigma.or(other.sigma);
    }
}

pub fn run(suite: Suite, opts: &VerifyOptions) -> Report {
    let report = match suite {
        Suite::Appendix => appendix(opts),
        Suite::Image => image(opts),
        Suite::Gf => gf(opts),
        Suite::Operators => operators(opts),
        Suite::Bernoulli => bernoulli(opts),
        Suite::All => {
            let mut all = Report::new(Suite::All);
            for part in Suite::PARTS {
                all.absorb(run(part, opts));
            }
            all
        }
    };
    report.finish()
}

/// The coefficient tables the suites check: `opts.tables` if given, else
/// every family by every route.
pub fn coefficient_tables(opts: &VerifyOptions) -> Vec<CoeffTable> {
    let max_index = (2 * opts.nu_max).max(GF_ORDER as u32).max(12);
    opts.tables.clone().unwrap_or_else(|| route_tables(max_index))
}

fn table_of(tables: &[CoeffTable], family: Family, route: Route) -> Option<&CoeffTable> {
    tables.iter().find(|t| t.family == TableFamily::from(family) && t.route == route)
}

/// The calibrated odd prefactor, or `None` if calibration is not unique.
pub fn odd_prefactor() -> Option<OddPrefactor> {
    let found = calibrate_odd_prefactor(&OddPrefactor::extended_candidates(), &[(2, 1, 1), (2, 2, 1)], 1e-9);
    (found.len() == 1).then(|| found[0])
}

fn appendix(opts: &VerifyOptions) -> Report {
    let mut r = Report::new(Suite::Appendix);
    let (m_max, nu_max, tol) = (opts.m_max, opts.nu_max, opts.tol);

    let grid: Vec<(i64, i64, u32)> =
        (1..=m_max).flat_map(|m| (-m..=m).flat_map(move |w| (1..=nu_max).map(move |nu| (m, w, nu)))).collect();
    r.cases.extend(grid.par_iter().map(|&(m, w, nu)| cosec_sum_case(m, w, nu, tol)).collect::<Vec<_>>());

    for nu in [1, 2] {
        let p = params(&[("m", &2), ("w", &0), ("nu", &nu)]);
        r.cases.push(VerificationCase::numeric("spot_value_numeric", p.clone(), cosec_sum_numeric(2, 0, nu), 1.0, tol));
        r.cases.push(VerificationCase::exact("spot_value_exact", p, &cosec_sum_exact(2, 0, nu), &int(1)));
    }

    let image_grid: Vec<(i64, i64, u32)> =
        (1..=m_max).flat_map(|m| (1..=nu_max).flat_map(move |nu| (0..=nu as i64 + m).map(move |a| (m, a, nu)))).collect();
    r.cases.extend(image_grid.par_iter().map(|&(m, a, nu)| appendix_sum_check(None, m, a, nu, tol)).collect::<Vec<_>>());

    match odd_prefactor() {
        Some(pref) => {
            r.cases.extend(
                image_grid.par_iter().map(|&(m, a, nu)| appendix_sum_check(Some(&pref), m, a, nu, tol)).collect::<Vec<_>>(),
            );
            r.cases.push(
                VerificationCase::numeric("odd_prefactor_calibration", params(&[("points", &"(2,1,1),(2,2,1)")]), 1.0, 1.0, tol)
                    .with_note(format!("unique constant {} frozen and asserted on every odd case", pref.describe())),
            );
            r.findings.push(format!(
                "odd image sums: prefactor calibrated to {} (no power of m); the printed form carries 1/m and no alternating sign",
                pref.describe()
            ));
        }
        None => r.cases.push(
            VerificationCase::numeric("odd_prefactor_calibration", params(&[("points", &"(2,1,1),(2,2,1)")]), 0.0, 1.0, tol)
                .with_note("no unique candidate reproduces both calibration points"),
        ),
    }

    let plain = calibrate_odd_prefactor(&OddPrefactor::plain_candidates(), &[(2, 1, 1)], 1e-9);
    if let [only] = plain.as_slice() {
        let bad = image_grid.iter().filter(|&&(m, a, nu)| !appendix_sum_check(Some(only), m, a, nu, tol).passed).count();
        r.findings.push(format!(
            "odd image sums: the sign-fixed candidates {{±1}}x{{1/m,1,m}} calibrate at (m,nu,a)=(2,1,1) to {}, which fails at {bad} of {} grid points (all at even nu)",
            only.describe(),
            image_grid.len()
        ));
    }

    let lhs = even_image_sum(3, 1, 1);
    let printed = even_printed_rhs(3, 1, 1);
    let printed2 = even_printed_rhs(3, 2, 2);
    r.findings.push(format!(
        "even image sums: the printed right side gives {printed} at (m,nu,a)=(3,1,1) against the direct sum {lhs:.6}, and {printed2} at (3,2,2) against {:.6}; the residue closed form S = (-1)^(nu+1) 2^(2nu) m N1 is used instead",
        even_image_sum(3, 2, 2)
    ));

    let outside = grid.iter().filter(|&&(m, w, nu)| m > 1 && !unreduced_closed_form_holds(m, w, nu)).count();
    r.findings.push(format!(
        "cosec sums: the residue closed form holds only for 1 <= w+nu <= m+2nu-1; {outside} of {} grid points fall outside and are evaluated after reducing w mod m",
        grid.len()
    ));
    r
}

fn image(opts: &VerifyOptions) -> Report {
    let mut r = Report::new(Suite::Image);
    let h_max = opts.m_max.max(1) as u32;
    let nu_max = opts.nu_max;
    let grid: Vec<(usize, u32, Rational, u32)> = (0..=5usize)
        .flat_map(|n| {
            (0..=nu_max).flat_map(move |nu| {
                let mut a_set = vec![int(0), rat(1, 2), int(1), int(2)];
                if nu > 2 {
                    a_set.push(int(nu as i64));
                }
                a_set.into_iter().flat_map(move |a| (1..=h_max).map(move |h| (n, nu, a.clone(), h)))
            })
        })
        .collect();
    r.cases.extend(grid.par_iter().map(|(n, nu, a, h)| image_check(*n, *nu, a, *h)).collect::<Vec<_>>());
    r
}

/// The m-scaled family series of a table, evaluated at numeric `m`.
fn family_series_at(table: &CoeffTable, m: i64, order: i32) -> Series<Rational> {
    Series::from_fn(0, order, |k| {
        if k == 0 {
            int(1)
        } else {
            table.get(k as u32).map(|p| p.eval(&int(m))).unwrap_or_default()
        }
    })
    .expect("valid orders")
}

fn gf(opts: &VerifyOptions) -> Report {
    let mut r = Report::new(Suite::Gf);
    let m_max = opts.m_max.min(8);
    let grid: Vec<(i64, i64)> = (1..=m_max).flat_map(|m| (-m..=m).map(move |w| (m, w))).collect();
    r.cases.extend(grid.par_iter().map(|&(m, w)| gf_check(m, w, GF_ORDER, opts.tol)).collect::<Vec<_>>());

    let tables = coefficient_tables(opts);
    for m in 1..=m_max {
        if let Some(q) = table_of(&tables, Family::Q, Route::Series) {
            r.cases.push(gf_reduction_check("generating_function_q", m, 0, &family_series_at(q, m, GF_ORDER)));
        }
        if m % 2 == 1 {
            if let Some(p) = table_of(&tables, Family::P, Route::Series) {
                r.cases.push(gf_reduction_check("generating_function_p", m, (m - 1) / 2, &family_series_at(p, m, GF_ORDER)));
            }
        }
    }
    r.findings.push(
        "generating function: the closed form holds for 0 <= w <= m; other w are reduced mod m, the sums being periodic".to_string(),
    );
    r
}

fn operators(opts: &VerifyOptions) -> Report {
    let mut r = Report::new(Suite::Operators);
    let m = PolyM::m;
    let k = |v: i64| PolyM::constant(int(v));
    let m2m1 = m().pow(2) - PolyM::one();
    let eleven = m().pow(2) + k(11);
    let nine = m().pow(2) - k(9);
    let tables = coefficient_tables(opts);

    let q = table_of(&tables, Family::Q, Route::Bernoulli).or_else(|| table_of(&tables, Family::Q, Route::Series));
    let q2 = q.and_then(|t| t.get(2)).cloned().unwrap_or_default();
    let q4 = q.and_then(|t| t.get(4)).cloned().unwrap_or_default();
    let tail = log_delta_m_tail(6);
    let dm = delta_m_expansion(6);
    let printed: Vec<(&str, PolyM, PolyM)> = vec![
        ("printed_q2", q2, m2m1.scale(&rat(1, 12))),
        ("printed_q4", q4, (m2m1.clone() * eleven.clone()).scale(&rat(-1, 720))),
        ("printed_log_tail_2", tail.coeff(2), m2m1.scale(&rat(1, 24))),
        ("printed_log_tail_4", tail.coeff(4), (m2m1.clone() * eleven).scale(&rat(-1, 2880))),
        ("printed_delta_m_1", dm.coeff(1), m()),
        ("printed_delta_m_3", dm.coeff(3), (m() * m2m1.clone()).scale(&rat(1, 24))),
        ("printed_delta_m_5", dm.coeff(5), (m() * m2m1.clone() * nine).scale(&rat(-1, 1920))),
    ];
    for (name, lhs, rhs) in printed {
        r.cases.push(VerificationCase::symbolic(name, Default::default(), &lhs, &rhs));
    }
    r.findings.push(format!(
        "delta_m expansion: the delta^5 coefficient is {}, opposite in sign to the printed -(m^2-1)(m^2-9)/(5! 2^4) times m; at m = 5, 2 sinh(5 asinh(delta/2)) = 5 delta + 5 delta^3 + delta^5",
        dm.coeff(5)
    ));

    let cross = cross_check_tables(&tables, &CROSS_CHECK_H);
    r.cases.push(
        VerificationCase::exact(
            "coefficient_routes",
            params(&[("h", &"1..8")]),
            &int(cross.mismatches.len() as i64),
            &int(0),
        )
        .with_note(format!("{} comparisons; lhs counts mismatches", cross.comparisons)),
    );
    for mm in &cross.mismatches {
        let h = mm.h.map(|h| h.to_string()).unwrap_or_else(|| "symbolic".into());
        let mut c = VerificationCase::exact("coefficient_route_mismatch", Default::default(), &int(1), &int(0));
        c.params = params(&[("family", &format!("{:?}", mm.family)), ("index", &mm.index), ("h", &h)]);
        c.lhs = Quantity::Exact(mm.left.clone());
        c.rhs = Quantity::Exact(mm.right.clone());
        c.note = format!("{:?} vs {:?}", mm.routes.0, mm.routes.1);
        r.cases.push(c);
    }

    let bern = |f: Family| table_of(&tables, f, Route::Bernoulli).or_else(|| table_of(&tables, f, Route::Series));
    let get = |f: Family, i: u32| bern(f).and_then(|t| t.get(i)).cloned().unwrap_or_default();
    for nu in 1..=6u32 {
        let p = params(&[("nu", &nu)]);
        r.cases.push(VerificationCase::symbolic(
            "residue_q",
            p.clone(),
            &get(Family::Q, 2 * nu),
            &n1_residue(2 * nu as usize + 1, &k(nu as i64)),
        ));
        let half = PolyM::from_coeffs(vec![int(nu as i64) - rat(1, 2), rat(1, 2)]);
        r.cases.push(VerificationCase::symbolic("residue_p", p, &get(Family::P, 2 * nu), &n1_residue(2 * nu as usize + 1, &half)));
    }
    for rr in 1..=8u32 {
        r.cases.push(VerificationCase::symbolic(
            "residue_lambda",
            params(&[("r", &rr)]),
            &get(Family::Lambda, rr),
            &n1_residue(rr as usize + 1, &PolyM::one()),
        ));
    }

    let y_fwd = generic_y(&DeltaOperator::forward(9), 8).expect("long enough");
    let y_cen = generic_y(&DeltaOperator::central(9), 8).expect("long enough");
    for nu in 1..=8u32 {
        let p = params(&[("nu", &nu)]);
        r.cases.push(VerificationCase::symbolic("y_forward_is_lambda", p.clone(), &y_fwd[nu as usize], &get(Family::Lambda, nu)));
        let expect = if nu % 2 == 0 { get(Family::P, nu) } else { PolyM::zero() };
        r.cases.push(VerificationCase::symbolic("y_central_is_p", p, &y_cen[nu as usize], &expect));
    }

    let sample_ops = [
        DeltaOperator::forward(5),
        DeltaOperator::central(5),
        DeltaOperator::new(vec![int(2), int(-1), rat(1, 3), int(5), int(1)]).expect("nonzero a"),
    ];
    let sigma = resolve_sign(&sample_ops);
    r.sigma = sigma;
    r.cases.push(
        VerificationCase::exact(
            "printed_y_sign",
            params(&[("operators", &"forward,central,(2,-1,1/3,5,1)")]),
            &int(sigma.unwrap_or(0) as i64),
            &int(sigma.unwrap_or(1) as i64),
        )
        .with_note(match sigma {
            Some(s) => format!("sigma = {s}: printed Y_1..Y_3 equal sigma times the series coefficients"),
            None => "no single sign reconciles the printed Y_1..Y_3".to_string(),
        }),
    );
    let s = sigma.unwrap_or(1);
    r.findings.push(format!("printed Y_1..Y_3 list: resolved global sign sigma = {s}"));

    let mut unsigned_ok = 0;
    let mut beta_nu_ok = 0;
    let mut total = 0;
    for (an, ad, b) in STEFFENSEN_GRID {
        let (alpha, beta) = (rat(an, ad), int(b));
        let phi = DeltaOperator::steffensen(&alpha, &beta, 8).expect("beta nonzero");
        let y = generic_y(&phi, 6).expect("long enough");
        for nu in 1..=6u32 {
            let closed = steffensen_y_closed(nu, &alpha, &beta).expect("beta nonzero");
            let first = steffensen_y_first_line(nu, &alpha, &beta).expect("beta nonzero");
            let p = params(&[("nu", &nu), ("alpha", &alpha), ("beta", &beta)]);
            r.cases.push(
                VerificationCase::symbolic("steffensen_closed_form", p.clone(), &closed, &y[nu as usize].scale(&int(s as i64)))
                    .with_note(format!("closed form against sigma * series, sigma = {s}")),
            );
            r.cases.push(VerificationCase::symbolic("steffensen_first_line", p, &first, &closed));
            total += 1;
            unsigned_ok += (closed == y[nu as usize]) as usize;
            beta_nu_ok += (closed.scale(&beta.recip()) == y[nu as usize]) as usize;
        }
    }
    r.findings.push(format!(
        "Steffensen closed form: equals the series route with sign +1 (not sigma) in {unsigned_ok} of {total} cases, and with the power of beta lowered from nu+1 to nu in {beta_nu_ok} of {total}"
    ));

    for (name, phi) in [
        ("central", DeltaOperator::central(9)),
        ("odd_sample", DeltaOperator::new(vec![int(3), int(0), int(2), int(0), int(-1), int(0), int(7), int(0), int(1)]).expect("a")),
    ] {
        let y = generic_y(&phi, 8).expect("long enough");
        for nu in 1..=8 {
            let (_, rem) = y[nu].div_rem(&m2m1);
            r.cases.push(
                VerificationCase::symbolic("y_divisible_by_m2_minus_1", params(&[("phi", &name), ("nu", &nu)]), &rem, &PolyM::zero())
                    .with_note("lhs is the remainder on division by m^2-1"),
            );
        }
    }

    let from_tail = q_from_log_tail(GF_ORDER);
    let qgen = crate::operators::family_generating(Family::Q, GF_ORDER);
    for kk in 0..=GF_ORDER {
        r.cases.push(VerificationCase::symbolic(
            "q_log_derivative",
            params(&[("order", &kk)]),
            &from_tail.coeff(kk),
            &qgen.coeff(kk),
        ));
    }

    let dm = de_morgan_lambda(8);
    for e in &dm.entries {
        r.cases.push(VerificationCase::symbolic("de_morgan", params(&[("nu", &e.index)]), &e.m_scaled, &get(Family::Lambda, e.index)));
    }
    for nu in 0..=8u32 {
        let p = params(&[("nu", &nu)]);
        r.cases.push(VerificationCase::exact("adams_integral", p.clone(), &adams_coefficient(nu), &adams_integral(nu)));
        r.cases.push(VerificationCase::exact("adams_unit_bernoulli", p, &adams_coefficient(nu), &adams_from_unit_bernoulli(nu)));
    }
    let adams: Vec<String> = (0..=5).map(|nu| adams_coefficient(nu).to_string()).collect();
    r.findings.push(format!(
        "Adams coefficients (-1)^nu mLambda_nu(0) = {}; these are the implicit (Adams-Moulton) weights, with absolute values {}",
        adams.join(", "),
        (0..=5).map(|nu| num_traits::Signed::abs(&adams_coefficient(nu)).to_string()).collect::<Vec<_>>().join(", ")
    ));
    r.findings.push(
        "delta operator coefficients (1,0,1,0,...) describe sinh D, the central difference at doubled step; delta itself is (1,0,1/4,0,1/16,...)"
            .to_string(),
    );
    r
}

fn bernoulli(opts: &VerifyOptions) -> Report {
    let mut r = Report::new(Suite::Bernoulli);
    let nu_max = opts.nu_max.max(1);

    let rec = bernoulli_numbers_recurrence(16);
    for s in 0..=16u32 {
        r.cases.push(VerificationCase::exact("bernoulli_number_routes", params(&[("s", &s)]), &bernoulli_number(s), &rec[s as usize]));
    }

    r.cases.extend((1..=nu_max).into_par_iter().flat_map_iter(bernoulli_chain).collect::<Vec<_>>());

    let pairs: Vec<(usize, u32)> = (1..=8usize).flat_map(|n| (1..=n as u32).map(move |nu| (n, nu))).collect();
    r.cases.extend(pairs.par_iter().map(|&(n, nu)| gbern3_check(n, nu)).collect::<Vec<_>>());

    let conv: Vec<(usize, u32, PolyM)> = (0..=5usize)
        .flat_map(|n| {
            (0..=8u32).flat_map(move |nu| {
                let nu_p = PolyM::constant(int(nu as i64));
                let half = nu_p.clone() + PolyM::from_coeffs(vec![rat(-1, 2), rat(1, 2)]);
                [PolyM::zero(), PolyM::one(), nu_p, half].into_iter().map(move |x| (n + 1, nu, x))
            })
        })
        .collect();
    r.cases.extend(
        conv.par_iter()
            .map(|(n1, nu, x)| {
                let gf = gen_bernoulli(*n1, *nu, x, &DegreeVector::barnes(*n1)).expect("matching order");
                VerificationCase::symbolic(
                    "convolution_route",
                    params(&[("n_plus_1", n1), ("nu", nu), ("x", x)]),
                    &gen_bernoulli_convolution(*n1, *nu, x),
                    &gf,
                )
            })
            .collect::<Vec<_>>(),
    );

    for n in 1..=8usize {
        for a in [rat(1, 2), int(3), rat(-2, 3)] {
            let lhs = gen_bernoulli_in(n as u32, &a, &vec![int(1); n + 1]);
            let rhs: Rational = (1..=n as i64).map(|k| &a - int(k)).product();
            r.cases.push(VerificationCase::exact("factorial_structure", params(&[("n", &n), ("a", &a)]), &lhs, &rhs));
        }
    }

    let diag = norlund_recursion_diagnostic(6, 8);
    let holds: Vec<String> = diag.iter().filter(|c| c.holds).map(|c| format!("(n={},nu={})", c.n, c.nu)).collect();
    r.findings.push(format!(
        "unit-degree recursion B^(n)_nu = sum (-1)^s C(nu,s) B_s B^(n)_(nu-s): holds in {} of {} cases for n <= 6, nu <= 8{}; diagnostic only",
        holds.len(),
        diag.len(),
        if holds.is_empty() { String::new() } else { format!(" [{}]", holds.join(" ")) }
    ));
    let differs: Vec<u32> = (1..=8u32)
        .filter(|&rr| n1_residue_signed(rr as usize, &PolyM::one()) != n1_residue(rr as usize, &PolyM::one()))
        .filter(|&rr| !n1_residue(rr as usize, &PolyM::one()).is_zero())
        .collect();
    r.findings.push(format!(
        "first-pole residue: the alternating sign (-1)^(r+1) changes the value at r = {:?}; the coefficient identities use the unsigned normalization",
        differs
    ));
    let chain_fail: Vec<String> = r
        .cases
        .iter()
        .filter(|c| c.identity.starts_with("bernoulli_chain") && !c.passed)
        .map(|c| format!("{} at nu={}", c.identity, c.params.get("nu").cloned().unwrap_or_default()))
        .collect();
    if !chain_fail.is_empty() {
        r.findings.push(format!("printed Bernoulli chain fails: {}", chain_fail.join(", ")));
    }
    r
}
