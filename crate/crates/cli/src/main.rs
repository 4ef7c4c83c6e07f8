use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lubbock_core::bernoulli::gen_bernoulli;
use lubbock_core::exactmath::{int, parse_rational, rat, to_f64, PolyM, Rational};
use lubbock_core::expr::{parse_expr, parse_expr_in, Expr};
use lubbock_core::identities::Quantity;
use lubbock_core::lubbock::{coeff_factorial_sum, cross_check_tables, de_morgan_lambda, table, y_table, CoeffTable, CrossCheckReport, Route, TableFamily};
use lubbock_core::operators::{DeltaOperator, Family};
use lubbock_core::summation::{self, direct_fine_sum, lubbock_sum, required_range, SampleTable, Scalar, SummationRequest, Variant};
use lubbock_core::verify::{self, coefficient_tables, Report, Suite, VerifyOptions, CROSS_CHECK_H};
use lubbock_core::DegreeVector;

#[derive(Parser)]
#[command(name = "lubbock", version, about = "Lubbock summation coefficients: tables, verification and subdivided sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a coefficient table, symbolic in m or evaluated.
    Coeffs(CoeffsArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Estimate a fine-grid sum from coarse samples.
    Sum(SumArgs),
    /// Evaluate a generalized Bernoulli polynomial.
    Bernoulli(BernoulliArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Lambda,
    P,
    Q,
    Y,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Bernoulli,
    Series,
    Factorial,
    Recursion,
    All,
}

#[derive(Args)]
struct CoeffsArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Largest subscript in the table.
    #[arg(long)]
    max_order: u32,
    /// Evaluate at this m (decimal or p/q).
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, conflicts_with = "h")]
    m: Option<Rational>,
    /// Evaluate at m = 1/h.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    h: Option<u32>,
    /// Defaults to bernoulli, or series for the y family.
    #[arg(long, value_enum)]
    route: Option<RouteArg>,
    /// Delta operator coefficients a,b,c,... for the y family.
    #[arg(long, value_delimiter = ',', value_parser = rational_arg, allow_hyphen_values = true)]
    phi: Vec<Rational>,
    #[arg(long, value_enum, default_value = "pretty")]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all", value_parser = |s: &str| s.parse::<Suite>())]
    suite: Suite,
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(i64).range(1..))]
    m_max: i64,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    nu_max: u32,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "pretty")]
    format: Format,
    /// Corrupt one coefficient before verifying.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Forward,
    Central,
}

#[derive(Args)]
struct SumArgs {
    /// Test function of x.
    #[arg(long, conflicts_with = "samples", required_unless_present = "samples", allow_hyphen_values = true)]
    expr: Option<String>,
    /// Coarse samples, one decimal or p/q per line, starting at the first
    /// required index (0 forward, -order central).
    #[arg(long)]
    samples: Option<PathBuf>,
    #[arg(long, default_value = "0", value_parser = rational_arg, allow_hyphen_values = true)]
    from: Rational,
    #[arg(long)]
    coarse_n: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    h: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    order: u32,
    #[arg(long, value_enum, default_value = "forward")]
    variant: VariantArg,
    /// Rational arithmetic throughout.
    #[arg(long)]
    exact: bool,
    /// Also compute the fine sum by brute force.
    #[arg(long)]
    compare_direct: bool,
    #[arg(long, value_enum, default_value = "pretty")]
    format: Format,
}

#[derive(Args)]
struct BernoulliArgs {
    /// Order; defaults to the number of degrees.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    nu: u32,
    /// Argument, an expression in m.
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Comma-separated degrees, each a positive rational or m.
    #[arg(long)]
    degrees: String,
    /// Evaluate the result at this m.
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    m: Option<Rational>,
    #[arg(long, value_enum, default_value = "pretty")]
    format: Format,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Whether the command's checks passed; errors map to exit code 2.
enum Outcome {
    Success,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Coeffs(a) => coeffs(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Sum(a) => sum(a),
        Command::Bernoulli(a) => bernoulli(a),
    };
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn family_of(f: FamilyArg) -> Option<Family> {
    match f {
        FamilyArg::Lambda => Some(Family::Lambda),
        FamilyArg::P => Some(Family::P),
        FamilyArg::Q => Some(Family::Q),
        FamilyArg::Y => None,
    }
}

fn family_name(f: TableFamily) -> &'static str {
    match f {
        TableFamily::Lambda => "lambda",
        TableFamily::P => "p",
        TableFamily::Q => "q",
        TableFamily::Y => "y",
    }
}

fn route_name(r: Route) -> &'static str {
    match r {
        Route::Bernoulli => "bernoulli",
        Route::Series => "series",
        Route::Factorial => "factorial",
        Route::Recursion => "recursion",
    }
}

fn symbol(f: TableFamily) -> &'static str {
    match f {
        TableFamily::Lambda => "Λ",
        TableFamily::P => "P",
        TableFamily::Q => "Q",
        TableFamily::Y => "Y",
    }
}

#[derive(Serialize)]
struct EvaluatedEntry {
    index: u32,
    value: String,
}

#[derive(Serialize)]
struct EvaluatedTable {
    family: TableFamily,
    route: Route,
    m: String,
    entries: Vec<EvaluatedEntry>,
}

#[derive(Serialize)]
struct CheckedTable {
    table: CoeffTable,
    cross_check: CrossCheckReport,
}

fn coeffs(a: CoeffsArgs) -> Result<Outcome> {
    let m = match (a.m, a.h) {
        (Some(m), _) => Some(m),
        (None, Some(h)) => Some(rat(1, h as i64)),
        (None, None) => None,
    };
    if m.as_ref() == Some(&int(0)) {
        bail!("m must be nonzero");
    }
    let Some(family) = family_of(a.family) else {
        if a.route.is_some_and(|r| r != RouteArg::Series) {
            bail!("the y family is available by the series route only");
        }
        if a.phi.is_empty() {
            bail!("--phi is required for the y family");
        }
        let phi = DeltaOperator::new(a.phi)?;
        let t = y_table(&phi, a.max_order)?;
        return emit_table(&t, m.as_ref(), a.format).map(|_| Outcome::Success);
    };
    if !a.phi.is_empty() {
        bail!("--phi applies to the y family only");
    }
    let route = a.route.unwrap_or(RouteArg::Bernoulli);
    match route {
        RouteArg::Bernoulli | RouteArg::Series => {
            let r = if route == RouteArg::Bernoulli { Route::Bernoulli } else { Route::Series };
            emit_table(&table(family, a.max_order, r), m.as_ref(), a.format)?;
        }
        RouteArg::Recursion => {
            if family != Family::Lambda {
                bail!("the recursion route exists for lambda only");
            }
            emit_table(&de_morgan_lambda(a.max_order), m.as_ref(), a.format)?;
        }
        RouteArg::Factorial => {
            let h = factorial_h(m.as_ref()).ok_or_else(|| anyhow!("the factorial route needs --h or --m 1/h"))?;
            let entries = lubbock_core::lubbock::indices(family, a.max_order)
                .into_iter()
                .map(|k| EvaluatedEntry { index: k, value: coeff_factorial_sum(family, k, h).to_string() })
                .collect();
            let t = EvaluatedTable { family: family.into(), route: Route::Factorial, m: rat(1, h as i64).to_string(), entries };
            emit_evaluated(&t, a.format)?;
        }
        RouteArg::All => {
            let mut tables = vec![table(family, a.max_order, Route::Bernoulli), table(family, a.max_order, Route::Series)];
            if family == Family::Lambda {
                tables.push(de_morgan_lambda(a.max_order));
            }
            let h_set = match m {
                Some(ref m) => vec![factorial_h(Some(m)).ok_or_else(|| anyhow!("route all compares at m = 1/h; --m must be 1/h"))?],
                None => CROSS_CHECK_H.to_vec(),
            };
            let report = cross_check_tables(&tables, &h_set);
            let base = tables.swap_remove(0);
            match a.format {
                Format::Json => print_json(&CheckedTable { table: base, cross_check: report.clone() })?,
                _ => {
                    emit_table(&base, m.as_ref(), a.format)?;
                    eprintln!("cross-check: {} comparisons, {} mismatches", report.comparisons, report.mismatches.len());
                    for x in &report.mismatches {
                        let at = x.h.map(|h| format!(" at h={h}")).unwrap_or_default();
                        eprintln!(
                            "  mismatch {}_{} {} vs {}{at}: {} != {}",
                            symbol(x.family),
                            x.index,
                            route_name(x.routes.0),
                            route_name(x.routes.1),
                            x.left,
                            x.right
                        );
                    }
                }
            }
            if !report.passed() {
                return Ok(Outcome::Failed);
            }
        }
    }
    Ok(Outcome::Success)
}

fn factorial_h(m: Option<&Rational>) -> Option<u32> {
    let m = m?;
    let inv = m.recip();
    (inv.is_integer() && inv > int(0)).then(|| inv.to_integer().try_into().ok()).flatten()
}

fn evaluate(t: &CoeffTable, m: &Rational) -> EvaluatedTable {
    let entries = t.entries.iter().map(|e| EvaluatedEntry { index: e.index, value: e.value_at(m).to_string() }).collect();
    EvaluatedTable { family: t.family, route: t.route, m: m.to_string(), entries }
}

fn emit_table(t: &CoeffTable, m: Option<&Rational>, format: Format) -> Result<()> {
    if let Some(m) = m {
        return emit_evaluated(&evaluate(t, m), format);
    }
    match format {
        Format::Json => print_json(t),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout());
            w.write_record(["family", "route", "index", "m_scaled", "coeffs"])?;
            for e in &t.entries {
                w.write_record([
                    family_name(t.family),
                    route_name(t.route),
                    &e.index.to_string(),
                    &e.m_scaled.to_string(),
                    &e.m_scaled.to_wire().join(";"),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Pretty => {
            let mut out = io::stdout().lock();
            writeln!(out, "{} by the {} route, m-scaled", symbol(t.family), route_name(t.route))?;
            for e in &t.entries {
                writeln!(out, "  m·{}_{} = {}", symbol(t.family), e.index, e.m_scaled)?;
            }
            Ok(())
        }
    }
}

fn emit_evaluated(t: &EvaluatedTable, format: Format) -> Result<()> {
    match format {
        Format::Json => print_json(t),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout());
            w.write_record(["family", "route", "m", "index", "value"])?;
            for e in &t.entries {
                w.write_record([family_name(t.family), route_name(t.route), &t.m, &e.index.to_string(), &e.value])?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Pretty => {
            let mut out = io::stdout().lock();
            writeln!(out, "{} by the {} route at m = {}", symbol(t.family), route_name(t.route), t.m)?;
            for e in &t.entries {
                writeln!(out, "  {}_{} = {}", symbol(t.family), e.index, e.value)?;
            }
            Ok(())
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn verify_cmd(a: VerifyArgs) -> Result<Outcome> {
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        bail!("--tol must be a positive number");
    }
    let mut opts = VerifyOptions { m_max: a.m_max, nu_max: a.nu_max, tol: a.tol, tables: None };
    if a.inject_fault {
        let mut tables = coefficient_tables(&opts);
        corrupt(&mut tables);
        opts.tables = Some(tables);
    }
    let report = verify::run(a.suite, &opts);
    if let Some(path) = &a.report {
        let text = serde_json::to_string_pretty(&report)?;
        fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    match a.format {
        Format::Json => print_json(&report)?,
        Format::Csv => bail!("verify writes json or pretty output"),
        Format::Pretty => print_report(&report)?,
    }
    Ok(if report.all_passed { Outcome::Success } else { Outcome::Failed })
}

/// Perturbs `m·Q_2` in the series-route table.
fn corrupt(tables: &mut [CoeffTable]) {
    let q = tables.iter_mut().find(|t| t.family == TableFamily::Q && t.route == Route::Series);
    if let Some(entry) = q.and_then(|t| t.entries.iter_mut().find(|e| e.index == 2)) {
        entry.m_scaled = entry.m_scaled.clone() + PolyM::m().scale(&rat(1, 720));
    }
}

fn print_report(r: &Report) -> Result<()> {
    let mut out = io::stdout().lock();
    let failed: Vec<_> = r.failures().collect();
    writeln!(out, "suite {}: {} cases, {} failed", r.suite, r.cases.len(), failed.len())?;
    if let Some(s) = r.sigma {
        writeln!(out, "sigma = {s}")?;
    }
    for c in &failed {
        let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(out, "FAIL {} [{}]: lhs {} rhs {}", c.identity, params.join(", "), quantity(&c.lhs), quantity(&c.rhs))?;
        if !c.note.is_empty() {
            writeln!(out, "     {}", c.note)?;
        }
    }
    for f in &r.findings {
        writeln!(out, "finding: {f}")?;
    }
    writeln!(out, "{}", if r.all_passed { "PASS" } else { "FAIL" })?;
    Ok(())
}

fn quantity(q: &Quantity) -> String {
    match q {
        Quantity::Float(v) => format!("{v:e}"),
        Quantity::Exact(s) => s.clone(),
    }
}

trait Reported: Scalar + Display {
    fn quantity(&self) -> Quantity;
    fn parse_sample(text: &str) -> Result<Self>;
    fn at(f: &Expr, x: &Rational) -> Result<Self>;
}

impl Reported for f64 {
    fn quantity(&self) -> Quantity {
        Quantity::Float(*self)
    }

    fn parse_sample(text: &str) -> Result<Self> {
        match text.parse::<f64>() {
            Ok(v) => Ok(v),
            Err(_) => Ok(to_f64(&parse_rational(text)?)),
        }
    }

    fn at(f: &Expr, x: &Rational) -> Result<Self> {
        let v = f.eval_f64(to_f64(x));
        if !v.is_finite() {
            bail!("expression is not finite at x = {x}");
        }
        Ok(v)
    }
}

impl Reported for Rational {
    fn quantity(&self) -> Quantity {
        Quantity::Exact(self.to_string())
    }

    fn parse_sample(text: &str) -> Result<Self> {
        Ok(parse_rational(text)?)
    }

    fn at(f: &Expr, x: &Rational) -> Result<Self> {
        f.eval_exact(x).with_context(|| format!("exact evaluation at x = {x}"))
    }
}

#[derive(Serialize)]
struct SumOutput {
    variant: Variant,
    coarse_n: u32,
    h: u32,
    order: u32,
    exact: bool,
    estimate: Quantity,
    coarse_term: Quantity,
    corrections: Vec<Quantity>,
    error_indicator: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    direct: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rel_error: Option<f64>,
}

fn sum(a: SumArgs) -> Result<Outcome> {
    if a.exact {
        run_sum::<Rational>(&a)
    } else {
        run_sum::<f64>(&a)
    }
}

fn read_samples<S: Reported>(path: &Path, start: i64) -> Result<SampleTable<S>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut values = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let field = record.get(0).unwrap_or("");
        if field.is_empty() {
            continue;
        }
        values.push(S::parse_sample(field).with_context(|| format!("{} line {}", path.display(), line + 1))?);
    }
    Ok(SampleTable::new(start, values))
}

fn run_sum<S: Reported>(a: &SumArgs) -> Result<Outcome> {
    let variant = match a.variant {
        VariantArg::Forward => Variant::Forward,
        VariantArg::Central => Variant::Central,
    };
    let f = a.expr.as_deref().map(parse_expr).transpose()?;
    let samples = match (&f, &a.samples) {
        (Some(f), _) => summation::sample(|x| S::at(f, x), &a.from, variant, a.coarse_n, a.order)?,
        (None, Some(path)) => read_samples::<S>(path, required_range(variant, a.coarse_n, a.order).0)?,
        (None, None) => bail!("one of --expr or --samples is required"),
    };
    let req = SummationRequest { samples, n: a.coarse_n, h: a.h, order: a.order, variant };
    let result = lubbock_sum(&req)?;
    let direct = match (&f, a.compare_direct) {
        (Some(f), true) => Some(direct_fine_sum(|x| S::at(f, x), &a.from, a.coarse_n, a.h, variant)?),
        (None, true) => bail!("--compare-direct needs --expr"),
        _ => None,
    };
    let error = direct.as_ref().map(|d| result.estimate.clone() - d.clone());
    let rel_error = match (&error, &direct) {
        (Some(e), Some(d)) if d.magnitude() > 0.0 => Some(e.magnitude() / d.magnitude()),
        (Some(e), Some(_)) => Some(e.magnitude()),
        _ => None,
    };
    let out = SumOutput {
        variant,
        coarse_n: a.coarse_n,
        h: a.h,
        order: a.order,
        exact: result.exact,
        estimate: result.estimate.quantity(),
        coarse_term: result.coarse_term.quantity(),
        corrections: result.corrections.iter().map(Reported::quantity).collect(),
        error_indicator: result.error_indicator.as_ref().map(Reported::quantity),
        direct: direct.as_ref().map(Reported::quantity),
        error: error.as_ref().map(Reported::quantity),
        rel_error,
    };
    match a.format {
        Format::Json => print_json(&out)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout());
            w.write_record(["term", "value"])?;
            w.write_record(["coarse", &result.coarse_term.to_string()])?;
            for (k, c) in result.corrections.iter().enumerate() {
                w.write_record([&format!("correction_{}", k + 1), &c.to_string()])?;
            }
            w.write_record(["estimate", &result.estimate.to_string()])?;
            if let Some(i) = &result.error_indicator {
                w.write_record(["error_indicator", &i.to_string()])?;
            }
            if let (Some(d), Some(e)) = (&direct, &error) {
                w.write_record(["direct", &d.to_string()])?;
                w.write_record(["error", &e.to_string()])?;
            }
            w.flush()?;
        }
        Format::Pretty => {
            let mut o = io::stdout().lock();
            writeln!(o, "estimate        {}", result.estimate)?;
            writeln!(o, "coarse term     {}", result.coarse_term)?;
            for (k, c) in result.corrections.iter().enumerate() {
                writeln!(o, "correction {:<4} {}", k + 1, c)?;
            }
            match &result.error_indicator {
                Some(i) => writeln!(o, "error indicator {}", i)?,
                None => writeln!(o, "error indicator unavailable (no sample beyond the margin)")?,
            }
            if let (Some(d), Some(e)) = (&direct, &error) {
                writeln!(o, "direct          {}", d)?;
                writeln!(o, "error           {}", e)?;
                if let Some(r) = rel_error {
                    writeln!(o, "relative error  {r:e}")?;
                }
            }
        }
    }
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct BernoulliOutput {
    n: usize,
    nu: u32,
    x: PolyM,
    degrees: Vec<PolyM>,
    value: PolyM,
    display: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    evaluated: Option<String>,
}

fn poly_arg(text: &str) -> Result<PolyM> {
    let e = parse_expr_in(text, "m").with_context(|| format!("parsing `{text}`"))?;
    e.eval_in(&PolyM::m()).with_context(|| format!("evaluating `{text}`"))
}

fn bernoulli(a: BernoulliArgs) -> Result<Outcome> {
    let x = poly_arg(&a.x)?;
    let degrees = a.degrees.split(',').map(|d| poly_arg(d.trim())).collect::<Result<Vec<_>>>()?;
    let omega = DegreeVector::new(degrees.clone())?;
    let n = a.n.unwrap_or(degrees.len());
    let value = gen_bernoulli(n, a.nu, &x, &omega)?;
    let evaluated = a.m.as_ref().map(|m| value.eval(m));
    let display = format!("B^({n})_{}({} | {})", a.nu, x, omega);
    match a.format {
        Format::Json => print_json(&BernoulliOutput {
            n,
            nu: a.nu,
            x,
            degrees,
            value: value.clone(),
            display: value.to_string(),
            m: a.m.as_ref().map(ToString::to_string),
            evaluated: evaluated.as_ref().map(ToString::to_string),
        })?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout());
            w.write_record(["n", "nu", "value", "coeffs"])?;
            w.write_record([&n.to_string(), &a.nu.to_string(), &value.to_string(), &value.to_wire().join(";")])?;
            w.flush()?;
        }
        Format::Pretty => {
            println!("{display} = {value}");
            if let (Some(m), Some(v)) = (&a.m, &evaluated) {
                println!("at m = {m}: {v}");
            }
        }
    }
    Ok(Outcome::Success)
}
