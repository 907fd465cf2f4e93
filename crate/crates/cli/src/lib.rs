//! Argument handling and report rendering for the `borwein` binary.
//!
//! Reports go to stdout, diagnostics to stderr. Exit codes: `0` success, `1`
//! failure (including a failed `verify` check), `2` usage error, `3` when the
//! exact path is infeasible under the configured size guards. On exit `3` a
//! machine-readable error object is printed to stdout.

use std::io::Write;

use borwein::engine::{
    deficit_report, edge_polynomial, fourier_spline, integral_exact, sinc_power_breaking, transform_value,
    weighted_integral_exact, CosineWeightSpec, EngineConfig, EvalReport, SincProductSpec,
};
use borwein::exact::{breaking_point, format_rational, parse_rational, parse_rational_list, HarmonicFamily, Rational};
use borwein::oracle::{
    kernel_integral, lower_bound_check, numeric_integral, numeric_sum, parse_precision, parse_scale_list,
    verify_kernel_transform, verify_sum_integral, Float, OracleConfig, RealScales, Scale, Sidedness, SumResult,
};
use borwein::spline::DEFAULT_BREAKPOINT_CAP;
use borwein::verify::{run_suite, Expectations, Suite};
use borwein::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "borwein", version, about = "Exact and numerical sinc-product integrals and sums")]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Working precision in bits for the numerical oracle (overrides BORWEIN_PRECISION).
    #[arg(long, global = true)]
    precision: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Args, Debug, Clone)]
struct SpecArgs {
    /// Comma-separated normalized scales, e.g. "1,1/3,1/5".
    #[arg(long, conflicts_with = "family")]
    betas: Option<String>,
    /// Named family: odd-harmonic (beta_k = 1/(2k+1)) or constant.
    #[arg(long, value_enum, requires = "n")]
    family: Option<Family>,
    /// Last index: the product runs over k = 0..=n.
    #[arg(long)]
    n: Option<u64>,
    /// Scale of the constant family.
    #[arg(long)]
    beta: Option<String>,
    /// Largest spline the engine may build.
    #[arg(long, default_value_t = DEFAULT_BREAKPOINT_CAP)]
    breakpoint_cap: usize,
    /// Sign vectors the pruned evaluator may visit per point.
    #[arg(long, default_value_t = borwein::engine::DEFAULT_NODE_BUDGET)]
    node_budget: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    OddHarmonic,
    Constant,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Largest n with beta_0 + ... + beta_n below the threshold.
    Breakpoint {
        #[arg(long, value_enum, default_value = "odd-harmonic")]
        family: Family,
        /// Scale of the constant family.
        #[arg(long)]
        beta: Option<String>,
        #[arg(long)]
        threshold: String,
    },
    /// Exact integral of prod_k sinc(beta_k pi t) over the real line.
    Integral(SpecArgs),
    /// Exact integral against 2 sum_{k<weights} cos((2k+1) pi t).
    WeightedIntegral {
        #[command(flatten)]
        spec: SpecArgs,
        /// Number of cosine terms.
        #[arg(long, default_value_t = 1)]
        weights: u64,
    },
    /// Exact gap below 1 for specs with an integer scale.
    Deficit {
        #[command(flatten)]
        spec: SpecArgs,
        /// Number of cosine terms; omit for the plain integral.
        #[arg(long)]
        weights: Option<u64>,
    },
    /// Truncated lattice sum of prod_k sinc(a_k m) with a rigorous tail bound.
    Sum {
        /// Comma-separated real scales, e.g. "5pi/4,1,1".
        #[arg(long)]
        scales: String,
        #[arg(long)]
        alternating: bool,
        /// Sum over all integers instead of m >= 0.
        #[arg(long)]
        two_sided: bool,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Compares the product sum with the sum of sinc^{n+1}(a_0 m).
    LowerBound {
        #[arg(long)]
        a0: String,
        #[arg(long)]
        rest: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Integral of prod_k f(a_k t) sin(bt)/t for the band-limited kernel f.
    KernelIntegral {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Numerical Fourier transform of the kernel against its closed form.
    KernelTransform {
        /// Comma-separated frequencies.
        #[arg(long, allow_hyphen_values = true, default_value = "0,0.5,-0.5,1.5")]
        omega: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Piecewise-polynomial transform as CSV rows x_lo,x_hi,c0,c1,...
    SplineDump(SpecArgs),
    /// Runs the self-check suite.
    Verify {
        #[arg(long, value_enum, default_value = "fast")]
        suite: SuiteArg,
        /// Corrupt one stored expectation; the run must then fail.
        #[arg(long, hide = true)]
        tamper: bool,
    },
    /// Closed form of the transform near the right end of its support.
    Edge(SpecArgs),
    /// Exact value of the transform F at one point.
    Point {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// For sinc^n, which n keep the weighted integral at 1.
    SincPower {
        /// Index of the last cosine term.
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n_max: u64,
    },
    /// Quadrature for the plain or weighted integral of a sinc product.
    NumericIntegral {
        #[arg(long)]
        scales: String,
        #[arg(long)]
        weights: Option<u64>,
        #[arg(long, default_value_t = 1e-12)]
        rel_tol: f64,
    },
    /// Lattice sum against integral for the same product.
    SumVsIntegral {
        #[arg(long)]
        scales: String,
        #[arg(long)]
        alternating: bool,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Fast,
    Full,
}

/// What a command produced, before rendering.
enum Output {
    Json(Value),
    Csv(String),
    /// JSON with a plain-text rendering used by default.
    Plain(Value, String),
    /// A report whose exit code is decided by its content.
    Verdict(Value, String, bool),
}

enum Failure {
    Usage(String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::InvalidInput(_) => Failure::Usage(e.to_string()),
            other => Failure::Engine(other),
        }
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli).and_then(|output| render(&cli, output)) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Engine(e)) => {
            let _ = writeln!(err, "error: {e}");
            let body = json!({ "error": e.kind(), "message": e.to_string() });
            let _ = writeln!(out, "{}", pretty(&body));
            if e.is_infeasible() {
                3
            } else {
                1
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

fn render(cli: &Cli, output: Output) -> Result<(String, i32), Failure> {
    let unsupported = |f: Format| Failure::Usage(format!("--format {f:?} is not available for this command").to_lowercase());
    Ok(match (output, cli.format) {
        (Output::Json(v), None | Some(Format::Json)) => (pretty(&v) + "\n", 0),
        (Output::Csv(text), None | Some(Format::Csv)) => (text, 0),
        (Output::Plain(_, text), None | Some(Format::Plain)) => (text + "\n", 0),
        (Output::Plain(v, _), Some(Format::Json)) => (pretty(&v) + "\n", 0),
        (Output::Verdict(_, text, ok), None | Some(Format::Plain)) => (text, if ok { 0 } else { 1 }),
        (Output::Verdict(v, _, ok), Some(Format::Json)) => (pretty(&v) + "\n", if ok { 0 } else { 1 }),
        (Output::Json(v), Some(Format::Plain)) => (plain_from_json(&v), 0),
        (_, Some(f)) => return Err(unsupported(f)),
    })
}

/// `key: value` lines for the top-level scalar fields.
fn plain_from_json(v: &Value) -> String {
    let mut text = String::new();
    if let Value::Object(map) = v {
        for (key, value) in map {
            match value {
                Value::String(s) => text.push_str(&format!("{key}: {s}\n")),
                Value::Number(_) | Value::Bool(_) => text.push_str(&format!("{key}: {value}\n")),
                _ => {}
            }
        }
    }
    text
}

fn oracle_config(cli: &Cli) -> Result<OracleConfig, Failure> {
    let mut config = OracleConfig::from_env()?;
    if let Some(p) = &cli.precision {
        config.precision_bits = parse_precision(p)?;
    }
    Ok(config)
}

fn usage(msg: &str) -> Failure {
    Failure::Usage(msg.to_string())
}

fn build_spec(args: &SpecArgs) -> Result<(SincProductSpec, Value), Failure> {
    match (&args.betas, args.family) {
        (Some(list), None) => {
            let spec = SincProductSpec::new(parse_rational_list(list)?)?;
            let echo = json!({ "betas": spec.betas().iter().map(format_rational).collect::<Vec<_>>() });
            Ok((spec, echo))
        }
        (None, Some(Family::OddHarmonic)) => {
            let n = args.n.ok_or_else(|| usage("--family needs --n"))?;
            Ok((SincProductSpec::odd_harmonic(n), json!({ "family": "odd-harmonic", "n": n })))
        }
        (None, Some(Family::Constant)) => {
            let n = args.n.ok_or_else(|| usage("--family needs --n"))?;
            let beta = parse_rational(args.beta.as_deref().ok_or_else(|| usage("--family constant needs --beta"))?)?;
            let count = usize::try_from(n + 1).map_err(|_| usage("--n is too large"))?;
            let echo = json!({ "family": "constant", "beta": format_rational(&beta), "n": n });
            Ok((SincProductSpec::constant(beta, count)?, echo))
        }
        _ => Err(usage("give either --betas or --family with --n")),
    }
}

fn engine_config(args: &SpecArgs) -> EngineConfig {
    EngineConfig {
        breakpoint_cap: args.breakpoint_cap,
        node_budget: args.node_budget,
        ..EngineConfig::default()
    }
}

fn report_json(command: &str, spec: Value, weights: Option<u64>, report: &EvalReport, value: &Rational) -> Value {
    let digits = EngineConfig::default().digits;
    json!({
        "command": command,
        "spec": spec,
        "weights": weights,
        "exact": format_rational(value),
        "decimal": borwein::exact::to_decimal(value, digits),
        "support_radius": format_rational(&report.support_radius),
        "deficit": report.deficit.as_ref().map(format_rational),
        "deficit_terms": report
            .deficit_terms
            .iter()
            .map(|(x, f)| json!([format_rational(x), format_rational(f)]))
            .collect::<Vec<_>>(),
    })
}

fn float_text(x: &Float) -> String {
    let digits = ((x.prec() as f64) * std::f64::consts::LOG10_2).floor() as usize;
    x.to_string_radix(10, Some(digits.clamp(6, 40)))
}

fn sum_json(r: &SumResult) -> Value {
    json!({
        "value": float_text(&r.value),
        "truncation_m": r.truncation_m,
        "tail_bound": r.tail_bound.to_f64(),
        "requested_tol": r.requested_tol,
        "sidedness": r.sidedness.label(),
        "alternating": r.alternating,
    })
}

fn scales_json(scales: &[Scale]) -> Value {
    json!(scales.iter().map(|s| s.to_string()).collect::<Vec<_>>())
}

fn family(kind: Family, beta: &Option<String>) -> Result<HarmonicFamily, Failure> {
    Ok(match kind {
        Family::OddHarmonic => HarmonicFamily::OddHarmonic,
        Family::Constant => HarmonicFamily::Constant(parse_rational(
            beta.as_deref().ok_or_else(|| usage("--family constant needs --beta"))?,
        )?),
    })
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Breakpoint { family: kind, beta, threshold } => {
            let threshold = parse_rational(threshold)?;
            let n = breaking_point(&family(*kind, beta)?, &threshold)?;
            let v = json!({
                "command": "breakpoint",
                "family": format!("{kind:?}").to_lowercase(),
                "threshold": format_rational(&threshold),
                "n": n,
            });
            Ok(Output::Plain(v, n.to_string()))
        }
        Command::Integral(args) => {
            let (spec, echo) = build_spec(args)?;
            let report = integral_exact(&spec, &engine_config(args))?;
            Ok(Output::Json(report_json("integral", echo, None, &report, &report.exact_value)))
        }
        Command::WeightedIntegral { spec: args, weights } => {
            let (spec, echo) = build_spec(args)?;
            let w = CosineWeightSpec::from_count(*weights)?;
            let report = weighted_integral_exact(&spec, w, &engine_config(args))?;
            Ok(Output::Json(report_json("weighted-integral", echo, Some(*weights), &report, &report.exact_value)))
        }
        Command::Deficit { spec: args, weights } => {
            let (spec, echo) = build_spec(args)?;
            let w = weights.map(CosineWeightSpec::from_count).transpose()?;
            let report = deficit_report(&spec, w, &engine_config(args))?;
            let deficit = report.deficit.clone().unwrap_or_default();
            Ok(Output::Json(report_json("deficit", echo, *weights, &report, &deficit)))
        }
        Command::Sum { scales, alternating, two_sided, tol } => {
            let list = parse_scale_list(scales)?;
            let side = if *two_sided { Sidedness::TwoSided } else { Sidedness::OneSided };
            let r = numeric_sum(&list, *alternating, side, *tol, &oracle_config(cli)?)?;
            let mut v = json!({ "command": "sum", "scales": scales_json(&list) });
            merge(&mut v, sum_json(&r));
            Ok(Output::Json(v))
        }
        Command::LowerBound { a0, rest, tol } => {
            let a0: Scale = a0.parse()?;
            let rest = parse_scale_list(rest)?;
            let r = lower_bound_check(&a0, &rest, *tol, &oracle_config(cli)?)?;
            Ok(Output::Json(json!({
                "command": "lower-bound",
                "a0": a0.to_string(),
                "rest": scales_json(&rest),
                "product_sum": sum_json(&r.product_sum),
                "power_sum": sum_json(&r.power_sum),
                "sum_analog_holds": r.sum_analog_holds,
                "hypothesis_holds": r.hypothesis_holds,
            })))
        }
        Command::KernelIntegral { a, b, tol } => {
            let a = parse_scale_list(a)?;
            let b: Scale = b.parse()?;
            let r = kernel_integral(&a, &b, *tol, &oracle_config(cli)?)?;
            Ok(Output::Json(json!({
                "command": "kernel-integral",
                "a": scales_json(&a),
                "b": b.to_string(),
                "value": float_text(&r.value),
                "truncation": r.truncation.to_f64(),
                "tail_bound": r.tail_bound.to_f64(),
                "quadrature_error": r.quadrature_error.to_f64(),
                "panels": r.panels,
                "hypothesis_holds": r.hypothesis_holds,
            })))
        }
        Command::KernelTransform { omega, tol } => {
            let omegas = omega
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|_| usage(&format!("bad frequency {s:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let samples = verify_kernel_transform(&omegas, *tol, &oracle_config(cli)?)?;
            let all = samples.iter().all(|s| s.within_tol);
            let rows: Vec<Value> = samples
                .iter()
                .map(|s| {
                    json!({
                        "omega": s.omega,
                        "numeric": float_text(&s.numeric),
                        "closed_form": float_text(&s.closed_form),
                        "difference": s.difference.to_f64(),
                        "error_estimate": s.error_estimate.to_f64(),
                        "within_tol": s.within_tol,
                    })
                })
                .collect();
            Ok(Output::Json(json!({
                "command": "kernel-transform",
                "tolerance": tol,
                "all_within_tol": all,
                "samples": rows,
            })))
        }
        Command::SplineDump(args) => {
            let (spec, _) = build_spec(args)?;
            Ok(Output::Csv(fourier_spline(&spec, args.breakpoint_cap)?.to_csv()))
        }
        Command::Verify { suite, tamper } => {
            let suite = match suite {
                SuiteArg::Fast => Suite::Fast,
                SuiteArg::Full => Suite::Full,
            };
            let expect = if *tamper { Expectations::tampered() } else { Expectations::default() };
            let outcomes = run_suite(suite, &expect);
            let ok = outcomes.iter().all(|o| o.passed);
            let mut text = String::new();
            for o in &outcomes {
                let tag = if o.passed { "PASS" } else { "FAIL" };
                text.push_str(&format!("{tag} {}: {} ({} ms)\n", o.name, o.detail, o.millis));
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            text.push_str(&format!("{} checks, {failed} failed\n", outcomes.len()));
            let v = json!({
                "command": "verify",
                "suite": format!("{suite:?}").to_lowercase(),
                "passed": ok,
                "checks": outcomes
                    .iter()
                    .map(|o| json!({ "name": o.name, "passed": o.passed, "detail": o.detail }))
                    .collect::<Vec<_>>(),
            });
            Ok(Output::Verdict(v, text, ok))
        }
        Command::Edge(args) => {
            let (spec, echo) = build_spec(args)?;
            let e = edge_polynomial(&spec);
            Ok(Output::Json(json!({
                "command": "edge",
                "spec": echo,
                "coefficient": format_rational(&e.coefficient),
                "exponent": e.exponent,
                "radius": format_rational(&e.radius),
                "valid_from": format_rational(&e.valid_from),
            })))
        }
        Command::Point { spec: args, x } => {
            let (spec, echo) = build_spec(args)?;
            let x = parse_rational(x)?;
            let value = transform_value(&spec, &x, &engine_config(args))?;
            let v = json!({
                "command": "point",
                "spec": echo,
                "x": format_rational(&x),
                "value": format_rational(&value),
                "decimal": borwein::exact::to_decimal(&value, EngineConfig::default().digits),
            });
            Ok(Output::Json(v))
        }
        Command::SincPower { m, n_max } => {
            let verdicts = sinc_power_breaking(*m, *n_max, &EngineConfig::default())?;
            let last_unit = verdicts.iter().take_while(|(_, unit)| *unit).last().map(|(n, _)| *n);
            Ok(Output::Json(json!({
                "command": "sinc-power",
                "m": m,
                "unit": verdicts.iter().map(|(n, u)| json!([n, u])).collect::<Vec<_>>(),
                "last_unit_power": last_unit,
            })))
        }
        Command::NumericIntegral { scales, weights, rel_tol } => {
            let list = parse_scale_list(scales)?;
            let mut real = RealScales::new(list.clone());
            if let Some(w) = weights {
                real = real.with_weight(CosineWeightSpec::from_count(*w)?);
            }
            let r = numeric_integral(&real, *rel_tol, &oracle_config(cli)?)?;
            Ok(Output::Json(json!({
                "command": "numeric-integral",
                "scales": scales_json(&list),
                "weights": weights,
                "value": float_text(&r.value),
                "error_estimate": r.error_estimate().to_f64(),
                "truncation": r.truncation.to_f64(),
                "tail_bound": r.tail_bound.to_f64(),
                "panels": r.panels,
                "tail_method": format!("{:?}", r.tail_method).to_lowercase(),
            })))
        }
        Command::SumVsIntegral { scales, alternating, tol } => {
            let list = parse_scale_list(scales)?;
            let r = verify_sum_integral(&list, *alternating, *tol, &oracle_config(cli)?)?;
            Ok(Output::Json(json!({
                "command": "sum-vs-integral",
                "scales": scales_json(&list),
                "alternating": alternating,
                "lhs": r.lhs.as_ref().map(float_text),
                "rhs": r.rhs.as_ref().map(float_text),
                "difference": r.difference.as_ref().map(Float::to_f64),
                "tolerance": r.tolerance,
                "hypothesis_holds": r.hypothesis_holds,
                "agree": r.agree,
                "truncation_m": r.truncation_m,
                "tail_bound": r.tail_bound.as_ref().map(Float::to_f64),
                "note": r.note,
            })))
        }
    }
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}
