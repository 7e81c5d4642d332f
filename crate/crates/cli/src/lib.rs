//! Command dispatch for the `fandecomp` binary.
//!
//! [`run`] takes the argument vector and returns the exit status together
//! with the full report, so the binary and the tests share one code path.
//! Exit statuses: 0 success, 1 domain error, 2 parse error, 3 budget.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use fandecomp::acceptance;
use fandecomp::fankit::{self, Fan, FanError, FanParseError};
use fandecomp::lattice::IntegerMatrix;
use fandecomp::par::Execution;
use fandecomp::recovery::{self, RecoveryError};
use fandecomp::squarezero::{
    self, closed_count_mod2, count_square_zero_with, normalize, poincare, product_profile, profile,
    real_census, top_invariants, CountOptions, ManifoldError, ProductManifold, DEFAULT_BUDGET,
};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "fandecomp", version, about = "Toric fan factorization and square-zero invariants")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// Run every parallel section sequentially.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check convexity, simpliciality, smoothness, faces and completeness.
    FanValidate { file: PathBuf },
    /// Product of two or more fans.
    FanProduct {
        #[arg(required = true, num_args = 2..)]
        files: Vec<PathBuf>,
    },
    /// Split a smooth complete fan into indecomposable factors.
    FanFactor { file: PathBuf },
    /// Search for a unimodular map carrying the first fan onto the second.
    FanIso { first: PathBuf, second: PathBuf },
    /// Emit a standard fan.
    FanGen {
        #[command(subcommand)]
        which: Generator,
        /// Write to this file instead of standard output.
        #[arg(long, short, global = true)]
        out: Option<PathBuf>,
    },
    /// Degree-2 product table of a product descriptor.
    MfProfile { descriptor: String },
    /// Count non-zero square-zero classes over Z/M.
    MfCount {
        descriptor: String,
        #[arg(long = "mod", value_name = "M")]
        modulus: u64,
        /// Largest number of coefficient vectors to enumerate.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Connected components of the real square-zero set.
    MfCensus { descriptor: String },
    /// Poincaré polynomial in a degree-2 variable.
    MfPoincare { descriptor: String },
    /// Normal form of S4 # pCP2 # q(-CP2) # r(CP1 x CP1).
    MfNormalize { p: u32, q: u32, r: u32 },
    /// Invariant bundle of a product and the factors recovered from it.
    Recover { descriptor: String },
    /// Run the acceptance suite.
    Selftest,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Generator {
    /// Hirzebruch surface F_a.
    Hirzebruch {
        #[arg(allow_negative_numbers = true)]
        a: i64,
    },
    /// Projective space CP^n.
    Proj { n: usize },
    /// F0 blown up at a fixed point.
    F0Blowup,
    /// CP2 blown up q times.
    Cp2Blowup { q: usize },
}

#[derive(Debug)]
enum CliError {
    Parse(String),
    Domain(String),
    Budget(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Domain(m) | CliError::Budget(m) => m,
        }
    }
}

impl From<FanError> for CliError {
    fn from(e: FanError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<ManifoldError> for CliError {
    fn from(e: ManifoldError) -> Self {
        match e {
            ManifoldError::Parse { .. } => CliError::Parse(format!("descriptor {e}")),
            ManifoldError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<RecoveryError> for CliError {
    fn from(e: RecoveryError) -> Self {
        match e {
            RecoveryError::Manifold(inner) => inner.into(),
            other => CliError::Domain(other.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

struct Ctx {
    json: bool,
    execution: Execution,
}

/// Runs one command line (including the program name) and returns the exit
/// status and the report.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let ctx = Ctx {
        json: cli.json,
        execution: if cli.sequential { Execution::Sequential } else { Execution::Parallel },
    };
    let outcome = match cli.threads {
        Some(0) => Err(CliError::Parse("--threads must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command, &ctx)),
            Err(e) => Err(CliError::Domain(format!("thread pool: {e}"))),
        },
        None => dispatch(&cli.command, &ctx),
    };
    match outcome {
        Ok((code, mut out)) => {
            if !out.ends_with('\n') {
                out.push('\n');
            }
            (code, out)
        }
        Err(e) => (e.code(), format!("error: {}\n", e.message())),
    }
}

fn dispatch(cmd: &Command, ctx: &Ctx) -> Result<(i32, String)> {
    match cmd {
        Command::FanValidate { file } => fan_validate(file, ctx),
        Command::FanProduct { files } => fan_product(files, ctx).map(ok),
        Command::FanFactor { file } => fan_factor(file, ctx).map(ok),
        Command::FanIso { first, second } => fan_iso(first, second, ctx).map(ok),
        Command::FanGen { which, out } => fan_gen(*which, out.as_deref()).map(ok),
        Command::MfProfile { descriptor } => mf_profile(descriptor, ctx).map(ok),
        Command::MfCount { descriptor, modulus, budget } => mf_count(descriptor, *modulus, *budget, ctx).map(ok),
        Command::MfCensus { descriptor } => mf_census(descriptor, ctx).map(ok),
        Command::MfPoincare { descriptor } => mf_poincare(descriptor, ctx).map(ok),
        Command::MfNormalize { p, q, r } => mf_normalize(*p, *q, *r, ctx).map(ok),
        Command::Recover { descriptor } => recover(descriptor, ctx),
        Command::Selftest => Ok(selftest(ctx)),
    }
}

fn ok(s: String) -> (i32, String) {
    (0, s)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON value serializes")
}

fn read_fan(path: &Path) -> Result<Fan> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: cannot read: {e}", path.display())))?;
    fankit::fan_from_json(&text).map_err(|e| match e {
        FanParseError::Fan(inner) => CliError::Domain(format!("{}: {inner}", path.display())),
        other => CliError::Parse(format!("{}: {other}", path.display())),
    })
}

fn fan_value(f: &Fan) -> Value {
    serde_json::from_str(&fankit::fan_to_json(f)).expect("fan JSON round-trips")
}

fn matrix_value(m: &IntegerMatrix) -> Value {
    json!(m.to_rows())
}

fn fan_validate(path: &Path, ctx: &Ctx) -> Result<(i32, String)> {
    let f = read_fan(path)?;
    let report = fankit::validate_with(&f, ctx.execution)?;
    let code = if report.all() { 0 } else { 1 };
    let out = if ctx.json {
        pretty(&json!({ "report": report, "valid": report.all() }))
    } else {
        format!("{report}\n{}", if report.all() { "VALID" } else { "INVALID" })
    };
    Ok((code, out))
}

fn fan_product(paths: &[PathBuf], _ctx: &Ctx) -> Result<String> {
    let fans = paths.iter().map(|p| read_fan(p)).collect::<Result<Vec<_>>>()?;
    Ok(fankit::fan_to_json(&fankit::product_all(&fans)?))
}

fn fan_factor(path: &Path, ctx: &Ctx) -> Result<String> {
    let f = read_fan(path)?;
    let r = fankit::factorize(&f)?;
    if ctx.json {
        let blocks: Vec<Value> = r
            .blocks
            .iter()
            .map(|b| {
                json!({
                    "directions": b.directions,
                    "sub_basis": b.sub_basis.iter().map(|v| v.coords().to_vec()).collect::<Vec<_>>(),
                    "factor": fan_value(&b.factor),
                })
            })
            .collect();
        return Ok(pretty(&json!({
            "blocks": blocks,
            "change_of_basis": matrix_value(&r.change_of_basis),
        })));
    }
    let mut out = String::new();
    writeln!(out, "{} block(s)", r.blocks.len()).unwrap();
    for (i, b) in r.blocks.iter().enumerate() {
        let basis: Vec<String> = b.sub_basis.iter().map(ToString::to_string).collect();
        writeln!(out, "block {i}: directions {:?}, basis {}", b.directions, basis.join(" ")).unwrap();
        writeln!(out, "{}", b.factor).unwrap();
    }
    write!(out, "change of basis (columns):\n{}", r.change_of_basis).unwrap();
    Ok(out)
}

fn fan_iso(a: &Path, b: &Path, ctx: &Ctx) -> Result<String> {
    let (f, g) = (read_fan(a)?, read_fan(b)?);
    let cert = fankit::isomorphic_with(&f, &g, ctx.execution)?;
    Ok(match (cert, ctx.json) {
        (Some(u), true) => pretty(&json!({ "isomorphic": true, "certificate": matrix_value(&u) })),
        (None, true) => pretty(&json!({ "isomorphic": false })),
        (Some(u), false) => format!("ISOMORPHIC\ncertificate:\n{u}"),
        (None, false) => "NOT ISOMORPHIC".into(),
    })
}

fn fan_gen(which: Generator, out: Option<&Path>) -> Result<String> {
    let f = match which {
        Generator::Hirzebruch { a } => fankit::hirzebruch(a)?,
        Generator::Proj { n } => fankit::projective_fan(n)?,
        Generator::F0Blowup => fankit::f0_blowup()?,
        Generator::Cp2Blowup { q } => fankit::connected_sum_fan(q)?,
    };
    let text = fankit::fan_to_json(&f);
    match out {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| CliError::Domain(format!("{}: cannot write: {e}", path.display())))?;
            Ok(format!("wrote {}", path.display()))
        }
        None => Ok(text),
    }
}

fn parse(descriptor: &str) -> Result<ProductManifold> {
    Ok(squarezero::parse_product(descriptor)?)
}

fn mf_profile(descriptor: &str, ctx: &Ctx) -> Result<String> {
    let pm = parse(descriptor)?;
    let ps = pm.factors().iter().map(|&k| profile(k)).collect::<std::result::Result<Vec<_>, _>>()?;
    let p = product_profile(&ps);
    if ctx.json {
        let products: Vec<Value> = p
            .nonzero_entries()
            .into_iter()
            .map(|(a, b, v)| json!({ "left": a, "right": b, "value": v }))
            .collect();
        return Ok(pretty(&json!({
            "product": pm.to_string(),
            "b2": p.b2(),
            "b4": p.b4(),
            "basis": p.labels(),
            "products": products,
        })));
    }
    let mut out = format!("{pm}\nb2 = {}, b4 = {}\nbasis: {}\n", p.b2(), p.b4(), p.labels().join(" "));
    for (a, b, v) in p.nonzero_entries() {
        writeln!(out, "{a} * {b} = {v:?}").unwrap();
    }
    Ok(out)
}

fn mf_count(descriptor: &str, modulus: u64, budget: u64, ctx: &Ctx) -> Result<String> {
    let pm = parse(descriptor)?;
    let ps = pm.factors().iter().map(|&k| profile(k)).collect::<std::result::Result<Vec<_>, _>>()?;
    let opts = CountOptions {
        budget,
        execution: ctx.execution,
    };
    let count = count_square_zero_with(&product_profile(&ps), modulus, opts)?;
    // over Z/2 the closed forms add up across factors
    let closed: Option<u128> = (modulus == 2).then(|| pm.factors().iter().map(|&k| closed_count_mod2(k)).sum());
    let verdict = closed.map(|c| if c == u128::from(count) { "MATCH" } else { "MISMATCH" });
    if ctx.json {
        return Ok(pretty(&json!({
            "product": pm.to_string(),
            "modulus": modulus,
            "count": count,
            "closed_form": closed.map(|c| c.to_string()),
            "verdict": verdict,
        })));
    }
    Ok(match (closed, verdict) {
        (Some(c), Some(v)) => format!("{count} (closed form {c}, {v})"),
        _ => count.to_string(),
    })
}

fn mf_census(descriptor: &str, ctx: &Ctx) -> Result<String> {
    let pm = parse(descriptor)?;
    let c = real_census(&pm);
    if ctx.json {
        let entries: serde_json::Map<String, Value> = c.iter().map(|(d, n)| (d.to_string(), json!(n))).collect();
        return Ok(pretty(&json!({ "product": pm.to_string(), "census": entries, "components": c.total() })));
    }
    let mut out = format!("{pm}: {} component(s)\n", c.total());
    for (d, n) in c.iter() {
        writeln!(out, "{d} x{n}").unwrap();
    }
    Ok(out)
}

fn mf_poincare(descriptor: &str, ctx: &Ctx) -> Result<String> {
    let pm = parse(descriptor)?;
    let poly = poincare(&pm);
    if ctx.json {
        let coeffs: Vec<String> = poly.coeffs().iter().map(ToString::to_string).collect();
        return Ok(pretty(&json!({ "product": pm.to_string(), "poincare": poly.to_string(), "coefficients": coeffs })));
    }
    Ok(poly.to_string())
}

fn mf_normalize(p: u32, q: u32, r: u32, ctx: &Ctx) -> Result<String> {
    let k = normalize(p, q, r)?;
    let before = top_invariants(p, q, r);
    let (p2, q2, r2) = k.as_pqr().expect("four-dimensional normal form");
    let after = top_invariants(p2, q2, r2);
    if ctx.json {
        return Ok(pretty(&json!({
            "input": [p, q, r],
            "normal_form": k.to_string(),
            "input_invariants": before,
            "output_invariants": after,
        })));
    }
    Ok(format!(
        "{k}\nchi {} -> {}, |sigma| {} -> {}, spin {} -> {}",
        before.chi,
        after.chi,
        before.sigma.abs(),
        after.sigma.abs(),
        before.spin,
        after.spin
    ))
}

fn recover(descriptor: &str, ctx: &Ctx) -> Result<(i32, String)> {
    let pm = parse(descriptor)?;
    let b = recovery::bundle(&pm)?;
    let (v, verdict) = match recovery::recover(&b) {
        Ok(v) => {
            let ok = v.realize() == pm;
            (Some(v), ok)
        }
        Err(RecoveryError::Inconsistent(_)) => (None, false),
        Err(e) => return Err(e.into()),
    };
    let code = if verdict { 0 } else { 1 };
    let word = if verdict { "OK" } else { "FAIL" };
    if ctx.json {
        let bundle: Value = serde_json::from_str(&b.to_json()).expect("bundle JSON");
        let recovered = v.as_ref().map(|v| {
            json!({
                "m": v.m,
                "m_pq": v.m_pq.iter().map(|((p, q), c)| (format!("{p},{q}"), json!(c))).collect::<serde_json::Map<_, _>>(),
                "n_r": v.n_r.iter().map(|(r, c)| (r.to_string(), json!(c))).collect::<serde_json::Map<_, _>>(),
                "n": v.n,
                "product": v.realize().to_string(),
            })
        });
        return Ok((code, pretty(&json!({ "bundle": bundle, "recovered": recovered, "verdict": word }))));
    }
    let recovered = match &v {
        Some(v) => format!("recovered: {v}\nproduct: {}", v.realize()),
        None => "recovered: none".into(),
    };
    Ok((code, format!("{b}\n{recovered}\n{word}")))
}

fn selftest(ctx: &Ctx) -> (i32, String) {
    let outcomes = acceptance::run_all(ctx.execution);
    let all = outcomes.iter().all(|o| o.passed);
    let code = if all { 0 } else { 1 };
    if ctx.json {
        let rows: Vec<Value> = outcomes
            .iter()
            .map(|o| {
                json!({
                    "id": o.id,
                    "name": o.name,
                    "passed": o.passed,
                    "detail": o.detail,
                    "elapsed_ms": o.elapsed.as_secs_f64() * 1e3,
                    "limit_ms": o.limit.map(|l| l.as_millis() as u64),
                })
            })
            .collect();
        return (code, pretty(&json!({ "criteria": rows, "passed": all })));
    }
    let mut out = String::new();
    for o in &outcomes {
        writeln!(out, "{o}").unwrap();
    }
    write!(out, "{}", acceptance::summary(&outcomes)).unwrap();
    (code, out)
}
