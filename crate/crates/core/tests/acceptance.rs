//! Acceptance criteria 1 to 10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use lubbock_core::bernoulli::{n1_residue, norlund_recursion_diagnostic};
use lubbock_core::exactmath::{int, rat, to_f64, PolyM, Rational};
use lubbock_core::identities::{
    bernoulli_chain, calibrate_odd_prefactor, cosec_sum_exact, cosec_sum_numeric, gbern3_check, gf_check, gf_reduction_check,
    image_check, odd_bernoulli_reduced, OddPrefactor,
};
use lubbock_core::lubbock::{adams_coefficient, coeff, coeff_factorial_sum, de_morgan_lambda, Route};
use lubbock_core::operators::{
    delta_m_expansion, family_generating, generic_y, log_delta_m_tail, resolve_sign, steffensen_y_closed, DeltaOperator, Family,
};
use lubbock_core::summation::{lubbock_sum, sample, SummationRequest, Variant};
use num_traits::{One, Zero};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn from_failures(failures: Vec<String>, checked: usize) -> Self {
        if failures.is_empty() {
            Outcome { passed: true, detail: format!("{checked} checks") }
        } else {
            let shown: Vec<&str> = failures.iter().take(4).map(String::as_str).collect();
            Outcome { passed: false, detail: format!("{} of {checked} checks failed: {}", failures.len(), shown.join("; ")) }
        }
    }
}

/// Accumulates named checks.
#[derive(Default)]
struct Checks {
    count: usize,
    failures: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn outcome(self) -> Outcome {
        Outcome::from_failures(self.failures, self.count)
    }
}

fn m() -> PolyM {
    PolyM::m()
}

fn k(v: i64) -> PolyM {
    PolyM::constant(int(v))
}

fn close(lhs: f64, rhs: f64, tol: f64) -> bool {
    (lhs - rhs).abs() <= tol * rhs.abs().max(1.0)
}

fn printed_polynomials() -> Outcome {
    let start = Instant::now();
    let m2m1 = m().pow(2) - k(1);
    let eleven = m().pow(2) + k(11);
    let nine = m().pow(2) - k(9);
    let tail = log_delta_m_tail(6);
    let dm = delta_m_expansion(6);
    let expected = [
        ("m*Q_2 (closed form)", coeff(Family::Q, 2, Route::Bernoulli), m2m1.scale(&rat(1, 12))),
        ("m*Q_2 (series)", coeff(Family::Q, 2, Route::Series), m2m1.scale(&rat(1, 12))),
        ("m*Q_4 (closed form)", coeff(Family::Q, 4, Route::Bernoulli), (m2m1.clone() * eleven.clone()).scale(&rat(-1, 720))),
        ("m*Q_4 (series)", coeff(Family::Q, 4, Route::Series), (m2m1.clone() * eleven.clone()).scale(&rat(-1, 720))),
        ("log tail delta^2", tail.coeff(2), m2m1.scale(&rat(1, 24))),
        ("log tail delta^4", tail.coeff(4), (m2m1.clone() * eleven).scale(&rat(-1, 2880))),
        ("delta_m delta^1", dm.coeff(1), m()),
        ("delta_m delta^3", dm.coeff(3), (m() * m2m1.clone()).scale(&rat(1, 24))),
        ("delta_m delta^5", dm.coeff(5), (m() * m2m1 * nine).scale(&rat(-1, 1920))),
    ];
    let mut c = Checks::default();
    for (name, got, want) in expected {
        c.check(got == want, || format!("{name}: computed {got}, printed {want}"));
    }
    let elapsed = start.elapsed().as_secs_f64();
    c.check(elapsed < 1.0, || format!("took {elapsed:.2} s"));
    c.outcome()
}

fn triple_routes() -> Outcome {
    let mut c = Checks::default();
    let recursion = de_morgan_lambda(8);
    let jobs: Vec<(Family, Vec<u32>)> =
        vec![(Family::Lambda, (1..=8).collect()), (Family::P, (2..=12).step_by(2).collect()), (Family::Q, (2..=12).step_by(2).collect())];
    for (family, indices) in jobs {
        for i in indices {
            let closed = coeff(family, i, Route::Bernoulli);
            let series = coeff(family, i, Route::Series);
            c.check(closed == series, || format!("{family:?}_{i}: closed form {closed} vs series {series}"));
            if family == Family::Lambda {
                let rec = recursion.get(i).cloned().unwrap_or_default();
                c.check(rec == closed, || format!("Lambda_{i}: recursion {rec} vs closed form {closed}"));
            }
            for h in 1..=8u32 {
                let mh = rat(1, h as i64);
                let fact = coeff_factorial_sum(family, i, h);
                for (route, poly) in [("closed form", &closed), ("series", &series)] {
                    let v = poly.eval(&mh) / &mh;
                    c.check(v == fact, || format!("{family:?}_{i} at h={h}: {route} {v} vs factorial sum {fact}"));
                }
            }
        }
    }
    c.outcome()
}

fn residues() -> Outcome {
    let mut c = Checks::default();
    for nu in 1..=6u32 {
        let q = coeff(Family::Q, 2 * nu, Route::Series);
        let rq = n1_residue(2 * nu as usize + 1, &k(nu as i64));
        c.check(q == rq, || format!("Q_{}: {q} vs residue {rq}", 2 * nu));
        let a = PolyM::from_coeffs(vec![int(nu as i64) - rat(1, 2), rat(1, 2)]);
        let p = coeff(Family::P, 2 * nu, Route::Series);
        let rp = n1_residue(2 * nu as usize + 1, &a);
        c.check(p == rp, || format!("P_{}: {p} vs residue {rp}", 2 * nu));
    }
    for r in 1..=8u32 {
        let l = coeff(Family::Lambda, r, Route::Series);
        let rl = n1_residue(r as usize + 1, &k(1));
        c.check(l == rl, || format!("Lambda_{r}: {l} vs residue {rl}"));
    }
    c.outcome()
}

/// `Σ_j cos(2πj(a-ν)/m) / sin^{2ν}(πj/m)` summed directly.
fn even_sum_oracle(m: i64, a: i64, nu: u32) -> f64 {
    (1..m)
        .map(|j| {
            let c = (2.0 * PI * (j * (a - nu as i64)) as f64 / m as f64).cos();
            c / (PI * j as f64 / m as f64).sin().powi(2 * nu as i32)
        })
        .sum()
}

/// `Σ_j sin(πj(2a-2ν+1)/m) / sin^{2ν-1}(πj/m)` summed directly.
fn odd_sum_oracle(m: i64, a: i64, nu: u32) -> f64 {
    (1..m)
        .map(|j| {
            let s = (PI * (j * (2 * (a - nu as i64) + 1)) as f64 / m as f64).sin();
            s / (PI * j as f64 / m as f64).sin().powi(2 * nu as i32 - 1)
        })
        .sum()
}

fn appendix_numeric() -> Outcome {
    let tol = 1e-9;
    let mut c = Checks::default();
    for nu in [1, 2] {
        let num = cosec_sum_numeric(2, 0, nu);
        c.check(close(num, 1.0, tol), || format!("S_{nu}(2,0) numerically {num}"));
        let exact = cosec_sum_exact(2, 0, nu);
        c.check(exact == int(1), || format!("S_{nu}(2,0) exactly {exact}"));
    }
    let calibrated = calibrate_odd_prefactor(&OddPrefactor::extended_candidates(), &[(2, 1, 1), (2, 2, 1)], tol);
    c.check(calibrated.len() == 1, || format!("{} odd prefactors fit the calibration points", calibrated.len()));
    for m in 1..=12i64 {
        for nu in 1..=5u32 {
            for a in 0..=nu as i64 + m {
                let closed = to_f64(&cosec_sum_exact(m, a - nu as i64, nu));
                let direct = even_sum_oracle(m, a, nu);
                c.check(close(direct, closed, tol), || format!("even m={m} nu={nu} a={a}: {direct} vs {closed}"));
                if let Some(p) = calibrated.first() {
                    let rhs = to_f64(&(p.value(m, nu) * odd_bernoulli_reduced(m, a, nu)));
                    let direct = odd_sum_oracle(m, a, nu);
                    c.check(close(direct, rhs, tol), || format!("odd m={m} nu={nu} a={a} with {}: {direct} vs {rhs}", p.describe()));
                }
            }
        }
    }
    c.outcome()
}

fn image_relation() -> Outcome {
    let mut c = Checks::default();
    for h in 1..=6u32 {
        for n in 0..=5usize {
            for nu in 0..=6u32 {
                for a in [int(0), rat(1, 2), int(1), int(2)] {
                    let case = image_check(n, nu, &a, h);
                    c.check(case.passed, || format!("h={h} n={n} nu={nu} a={a}"));
                }
            }
        }
    }
    c.outcome()
}

fn bernoulli_identities() -> Outcome {
    let mut c = Checks::default();
    for nu in 1..=5 {
        for case in bernoulli_chain(nu) {
            c.check(case.passed, || format!("{} at nu={nu}", case.identity));
        }
    }
    for n in 1..=8usize {
        for nu in 0..=8u32 {
            let case = gbern3_check(n, nu);
            c.check(case.passed, || format!("special value n={n} nu={nu}"));
        }
    }
    let diagnostic = norlund_recursion_diagnostic(4, 4);
    c.check(!diagnostic.is_empty(), || "recursion diagnostic is empty".to_string());
    let mut out = c.outcome();
    let holding = diagnostic.iter().filter(|d| d.holds).count();
    out.detail += &format!("; recursion diagnostic holds in {holding} of {} cases", diagnostic.len());
    out
}

fn generalized_lubbock() -> Outcome {
    let mut c = Checks::default();
    let fwd = generic_y(&DeltaOperator::forward(9), 8).expect("long enough");
    let cen = generic_y(&DeltaOperator::central(9), 8).expect("long enough");
    for nu in 1..=8u32 {
        let l = coeff(Family::Lambda, nu, Route::Bernoulli);
        c.check(fwd[nu as usize] == l, || format!("forward Y_{nu} {} vs m*Lambda {l}", fwd[nu as usize]));
        let p = if nu % 2 == 0 { coeff(Family::P, nu, Route::Bernoulli) } else { PolyM::zero() };
        c.check(cen[nu as usize] == p, || format!("central Y_{nu} {} vs {p}", cen[nu as usize]));
    }
    let ops = [
        DeltaOperator::forward(5),
        DeltaOperator::central(5),
        DeltaOperator::new(vec![int(3), rat(-1, 2), int(2), rat(1, 7)]).expect("nonzero linear"),
    ];
    let sigma = resolve_sign(&ops);
    c.check(sigma.is_some(), || "no single sign reconciles the printed Y_1..Y_3".to_string());
    let s = sigma.unwrap_or(1);
    for (alpha, beta) in [(int(0), int(1)), (int(1), int(1)), (rat(-1, 2), int(1)), (int(1), int(2))] {
        let phi = DeltaOperator::steffensen(&alpha, &beta, 8).expect("beta nonzero");
        let y = generic_y(&phi, 6).expect("long enough");
        for nu in 1..=6u32 {
            let closed = steffensen_y_closed(nu, &alpha, &beta).expect("beta nonzero");
            let series = y[nu as usize].scale(&int(s as i64));
            c.check(closed == series, || format!("Steffensen (alpha={alpha}, beta={beta}) nu={nu}: {closed} vs sigma*series {series}"));
        }
    }
    let mut out = c.outcome();
    out.detail = format!("sigma = {}; {}", sigma.map_or("none".to_string(), |s| s.to_string()), out.detail);
    out
}

fn generating_function() -> Outcome {
    let mut c = Checks::default();
    let q = family_generating(Family::Q, 12);
    let p = family_generating(Family::P, 12);
    for m in 1..=8i64 {
        for w in -m..=m {
            let case = gf_check(m, w, 12, 1e-9);
            c.check(case.passed, || format!("m={m} w={w}: {}", case.note));
        }
        let at = |s: &lubbock_core::Series<PolyM>| s.map(|c| c.eval(&int(m)));
        let case = gf_reduction_check("q", m, 0, &at(&q));
        c.check(case.passed, || format!("w=0 against Q at m={m}: {}", case.note));
        if m % 2 == 1 {
            let case = gf_reduction_check("p", m, (m - 1) / 2, &at(&p));
            c.check(case.passed, || format!("w=(m-1)/2 against P at m={m}: {}", case.note));
        }
    }
    c.outcome()
}

fn direct_oracle<S: Clone + std::ops::Add<Output = S> + Zero>(f: impl Fn(&Rational) -> S, x0: &Rational, n: u32, h: u32, variant: Variant) -> S {
    let offset = if variant == Variant::Central { rat(1, 2 * h as i64) } else { int(0) };
    (0..n * h).fold(S::zero(), |acc, j| acc + f(&(x0 + rat(j as i64, h as i64) + &offset)))
}

fn run_sum<S: lubbock_core::summation::Scalar>(
    f: impl Fn(&Rational) -> S,
    x0: &Rational,
    n: u32,
    h: u32,
    order: u32,
    variant: Variant,
) -> lubbock_core::SummationResult<S> {
    let samples = sample(|x| Ok::<_, std::convert::Infallible>(f(x)), x0, variant, n, order).expect("infallible");
    lubbock_sum(&SummationRequest { samples, n, h, order, variant }).expect("margins satisfied")
}

fn summation_engine() -> Outcome {
    let mut c = Checks::default();
    let coeffs = [rat(3, 2), int(-2), rat(1, 3), int(5), rat(-7, 4), rat(2, 9)];
    for degree in 0..=5usize {
        let poly = |x: &Rational| coeffs[..=degree].iter().rev().fold(Rational::zero(), |acc, c| acc * x + c);
        for variant in [Variant::Forward, Variant::Central] {
            for h in [1, 2, 3, 7] {
                let x0 = rat(-2, 5);
                let est = run_sum(poly, &x0, 6, h, 6, variant).estimate;
                let direct = direct_oracle(poly, &x0, 6, h, variant);
                c.check(est == direct, || format!("degree {degree} {variant:?} h={h}: {est} vs {direct}"));
            }
        }
    }

    let exp = |x: &Rational| (-to_f64(x) / 10.0).exp();
    let est = run_sum(exp, &int(0), 50, 10, 6, Variant::Forward).estimate;
    let direct = direct_oracle(exp, &int(0), 50, 10, Variant::Forward);
    let rel = (est - direct).abs() / direct.abs();
    c.check(rel <= 1e-8, || format!("exp(-x/10) relative error {rel:e}"));

    let smooth: [(&str, fn(f64) -> f64, i64); 3] =
        [("exp(-x/10)", |x| (-x / 10.0).exp(), 0), ("1/(1+x)", |x| 1.0 / (1.0 + x), 10), ("cos(x/4)", |x| (x / 4.0).cos(), 0)];
    let mut worst = f64::INFINITY;
    for (name, f, x0) in smooth {
        let g = |x: &Rational| f(to_f64(x));
        let x0 = int(x0);
        for variant in [Variant::Forward, Variant::Central] {
            for h in [4, 8, 16] {
                let direct = direct_oracle(g, &x0, 20, h, variant);
                let e1 = (run_sum(g, &x0, 20, h, 1, variant).estimate - direct).abs();
                let e6 = (run_sum(g, &x0, 20, h, 6, variant).estimate - direct).abs();
                worst = worst.min(e1 / e6);
                c.check(e6 <= e1 / 1e3, || format!("{name} {variant:?} h={h}: K=1 error {e1:e}, K=6 error {e6:e}"));
            }
        }
    }

    for variant in [Variant::Forward, Variant::Central] {
        let cube = |x: &Rational| x * x * x - x;
        let r = run_sum(cube, &int(1), 5, 1, 4, variant);
        let direct = direct_oracle(cube, &int(1), 5, 1, variant);
        c.check(r.estimate == direct, || format!("h=1 {variant:?}: {} vs {direct}", r.estimate));
        if variant == Variant::Forward {
            c.check(r.estimate == r.coarse_term, || "h=1 forward estimate differs from the coarse sum".to_string());
        }
    }
    let mut out = c.outcome();
    out.detail += &format!("; smallest K=1/K=6 error ratio {worst:.2e}");
    out
}

/// `(-1)^ν ∫_0^1 t(t-1)...(t-ν+1)/ν! dt`, expanding the product in place.
fn adams_oracle(nu: u32) -> Rational {
    let mut poly = vec![Rational::one()];
    for j in 0..nu as i64 {
        let mut next = vec![Rational::zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * int(j);
        }
        poly = next;
    }
    let integral: Rational = poly.iter().enumerate().map(|(i, c)| c / int(i as i64 + 1)).sum();
    let fact: Rational = (1..=nu as i64).map(int).product();
    let sign = if nu % 2 == 0 { int(1) } else { int(-1) };
    sign * integral / fact
}

fn adams() -> Outcome {
    let mut c = Checks::default();
    for nu in 0..=8 {
        let got = adams_coefficient(nu);
        let want = adams_oracle(nu);
        c.check(got == want, || format!("nu={nu}: {got} vs integral {want}"));
    }
    c.outcome()
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("printed polynomials", printed_polynomials),
        ("triple-route agreement", triple_routes),
        ("residue identities", residues),
        ("appendix numeric suite", appendix_numeric),
        ("image relation", image_relation),
        ("Bernoulli identity chain", bernoulli_identities),
        ("generalized Lubbock and Steffensen", generalized_lubbock),
        ("generating function", generating_function),
        ("summation engine", summation_engine),
        ("Adams coefficients", adams),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        failed += usize::from(!out.passed);
        println!(
            "criterion {:>2} {}: {name} [{:.2} s] {}",
            i + 1,
            if out.passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            out.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
