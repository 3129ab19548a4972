use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use solvrad_core::groups::{infer_degree, GroupError};
use solvrad_core::oracle::{coset_product_certificate, default_invariants, invariant_value, label_roots, OracleError};
use solvrad_core::pipeline::{order_from_labels, prepare_group, solve, LabelingMode, SolveError, SolveOptions, SolveReport};
use solvrad_core::polynomial::{parse_polynomial, to_monic, IntPolynomial};
use solvrad_core::radical::{emit, to_json, OutputFormat, RadicalError};
use solvrad_core::resolvent::{ResolventError, DEFAULT_TOLERANCE};
use solvrad_core::rootfinder::{find_roots, RootFindError};
use solvrad_core::{orbit_sum_invariant, parse_cycles, Permutation};

#[derive(Parser)]
#[command(name = "solvrad", version, about = "Radical formulas for roots of polynomials with solvable Galois groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve by radicals and print one expression per root
    Solve(SolveArgs),
    /// Print the numeric roots in canonical order
    Roots(RootsArgs),
    /// Print a composition series of the group
    Series(SeriesArgs),
    /// Run the integrality checks for a labeling
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Latex,
    Json,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Labeling {
    Auto,
    Given,
}

#[derive(Args)]
struct Input {
    /// Polynomial such as "x^5+20x+32"
    #[arg(long, conflicts_with = "input")]
    poly: Option<String>,
    /// JSON file {"poly": [a0, ..., an], "generators": [...], "labeling": {...}}
    #[arg(long)]
    input: Option<PathBuf>,
    /// Generators in cycle notation separated by ';'
    #[arg(long)]
    generators: Option<String>,
    #[arg(long, value_enum)]
    labeling: Option<Labeling>,
    /// Label of each printed root, e.g. "2,4,3,5,1"
    #[arg(long)]
    root_order: Option<String>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: Input,
    /// Working digits (overrides the precision plan)
    #[arg(long)]
    digits: Option<u32>,
    #[arg(long, default_value_t = 6)]
    margin: u32,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Re-evaluate every expression against its numeric root
    #[arg(long)]
    verify: bool,
    /// Report multiplication count, budget and residuals
    #[arg(long)]
    stats: bool,
    /// Rounding tolerance for the top theta tensor
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
}

#[derive(Args)]
struct RootsArgs {
    #[arg(long, conflicts_with = "input")]
    poly: Option<String>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    digits: u32,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(long)]
    generators: String,
    /// Number of points; inferred from the largest point when omitted
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value_t = 30)]
    digits: u32,
    /// Exponent vector of an orbit-sum invariant, e.g. "1,1,0,0,0"; repeatable
    #[arg(long)]
    invariant: Vec<String>,
    #[arg(long, default_value_t = 1e-4)]
    tolerance: f64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

fn group_code(e: &GroupError) -> u8 {
    match e {
        GroupError::NotSolvable { .. } => 3,
        GroupError::OrderCapExceeded(_) | GroupError::DegreeCapExceeded { .. } => 1,
        _ => 2,
    }
}

fn oracle_code(e: &OracleError) -> u8 {
    match e {
        OracleError::ResidualTooLarge { .. } => 4,
        OracleError::LabelingAmbiguous { .. } | OracleError::LabelingFailed => 6,
        OracleError::Group(g) => group_code(g),
        OracleError::DegreeTooLarge { .. } => 1,
    }
}

fn solve_code(e: &SolveError) -> u8 {
    match e {
        SolveError::Polynomial(_) | SolveError::DegreeMismatch { .. } | SolveError::BadRootOrder(_) => 2,
        SolveError::Group(g) => group_code(g),
        SolveError::RootFind(RootFindError::NonConvergence { .. }) => 8,
        SolveError::RootFind(RootFindError::NotMonic) => 2,
        SolveError::Resolvent(ResolventError::ResidualTooLarge { .. }) => 4,
        SolveError::Resolvent(ResolventError::PrecisionInfeasible { .. }) => 7,
        SolveError::Resolvent(ResolventError::ShapeMismatch { .. }) => 2,
        SolveError::Radical(RadicalError::PhaseAmbiguous { .. }) => 5,
        SolveError::Radical(_) => 1,
        SolveError::Oracle(o) => oracle_code(o),
        SolveError::Intransitive => 1,
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        Failure {
            code: solve_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        Failure {
            code: group_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure {
            code: oracle_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<RootFindError> for Failure {
    fn from(e: RootFindError) -> Self {
        SolveError::from(e).into()
    }
}

// ---------------------------------------------------------------------------
// Input handling

struct Problem {
    poly: IntPolynomial,
    generators: Option<Vec<String>>,
    labels: Option<Vec<usize>>,
}

fn parse_labels(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::parse(format!("malformed root order '{text}'")))
}

fn poly_from_json(v: &Value) -> Result<IntPolynomial, Failure> {
    match v {
        Value::String(s) => parse_polynomial(s).map_err(|e| Failure::parse(e.to_string())),
        Value::Array(items) => {
            let coeffs = items
                .iter()
                .map(|c| match c {
                    Value::Number(n) => n.to_string().parse::<BigInt>().ok(),
                    Value::String(s) => s.trim().parse::<BigInt>().ok(),
                    _ => None,
                })
                .collect::<Option<Vec<BigInt>>>()
                .ok_or_else(|| Failure::parse("poly coefficients must be integers"))?;
            IntPolynomial::new(coeffs).map_err(|e| Failure::parse(e.to_string()))
        }
        _ => Err(Failure::parse("'poly' must be a coefficient array or a string")),
    }
}

fn read_problem(poly: &Option<String>, input: &Option<PathBuf>) -> Result<Problem, Failure> {
    if let Some(text) = poly {
        let poly = parse_polynomial(text).map_err(|e| Failure::parse(e.to_string()))?;
        return Ok(Problem {
            poly,
            generators: None,
            labels: None,
        });
    }
    let Some(path) = input else {
        return Err(Failure::parse("one of --poly or --input is required"));
    };
    let text = std::fs::read_to_string(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    let poly = poly_from_json(doc.get("poly").ok_or_else(|| Failure::parse("input lacks 'poly'"))?)?;
    let generators = match doc.get("generators") {
        None => None,
        Some(Value::Array(g)) => Some(
            g.iter()
                .map(|s| s.as_str().map(str::to_string))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Failure::parse("generators must be strings"))?,
        ),
        Some(Value::String(s)) => Some(s.split(';').map(|t| t.trim().to_string()).collect()),
        Some(_) => return Err(Failure::parse("'generators' must be an array of strings")),
    };
    let labels = match doc.get("labeling").and_then(|l| l.get("root_order")) {
        None => None,
        Some(Value::Array(a)) => Some(
            a.iter()
                .map(|x| x.as_u64().map(|v| v as usize))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Failure::parse("root_order must list positive integers"))?,
        ),
        Some(Value::String(s)) => Some(parse_labels(s)?),
        Some(_) => return Err(Failure::parse("malformed labeling.root_order")),
    };
    Ok(Problem {
        poly,
        generators,
        labels,
    })
}

fn parse_perms(parts: &[String], degree: usize) -> Result<Vec<Permutation>, Failure> {
    parts.iter().map(|p| parse_cycles(p, degree).map_err(Failure::from)).collect()
}

fn resolve_input(input: &Input) -> Result<(IntPolynomial, Vec<Permutation>, LabelingMode), Failure> {
    let problem = read_problem(&input.poly, &input.input)?;
    let parts: Vec<String> = match (&input.generators, problem.generators) {
        (Some(g), _) => g.split(';').map(|t| t.trim().to_string()).collect(),
        (None, Some(g)) => g,
        (None, None) => return Err(Failure::parse("group generators are required")),
    };
    let degree = problem.poly.degree();
    let perms = parse_perms(&parts, degree)?;
    let labels = match &input.root_order {
        Some(t) => Some(parse_labels(t)?),
        None => problem.labels,
    };
    let mode = match (input.labeling, labels) {
        (Some(Labeling::Auto), _) | (None, None) => LabelingMode::Auto,
        (_, Some(l)) => LabelingMode::Given(l),
        (Some(Labeling::Given), None) => return Err(Failure::parse("--labeling given requires --root-order")),
    };
    Ok((problem.poly, perms, mode))
}

// ---------------------------------------------------------------------------
// Commands

fn output_format(f: Format) -> OutputFormat {
    match f {
        Format::Text => OutputFormat::Text,
        Format::Latex => OutputFormat::Latex,
        Format::Json => OutputFormat::Json,
    }
}

fn series_json(report: &SolveReport) -> Value {
    Value::Array(
        report
            .series
            .steps
            .iter()
            .map(|s| json!({ "generator": s.generator.to_string(), "prime": s.prime }))
            .collect(),
    )
}

fn solve_command(args: &SolveArgs) -> Result<String, Failure> {
    let (poly, gens, labeling) = resolve_input(&args.input)?;
    let opts = SolveOptions {
        digits: args.digits,
        margin: args.margin,
        tolerance: args.tolerance,
        labeling,
        verify: args.verify,
        ..Default::default()
    };
    let r = solve(&poly, &gens, &opts)?;
    let sig = r.digits.min(30);
    let m = r.series.len();
    match args.format {
        Format::Json => {
            let roots: Vec<Value> = r
                .expressions
                .iter()
                .zip(&r.roots)
                .enumerate()
                .map(|(k, (e, x))| {
                    json!({
                        "label": k + 1,
                        "value": { "re": x.chopped().re_string(sig), "im": x.chopped().im_string(sig) },
                        "expr": to_json(e),
                    })
                })
                .collect();
            let mut doc = json!({
                "polynomial": r.polynomial.to_string(),
                "monic": r.monic.monic.to_string(),
                "scale": r.monic.scale.to_string(),
                "group_order": r.group_order,
                "series": series_json(&r),
                "digits": r.digits,
                "required_digits": r.plan.required_digits,
                "margin": r.plan.margin,
                "root_order": labels_of(&r.label_order),
                "theta": {
                    "radices": r.theta_m.radices,
                    "values": r.theta_m.values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    "residuals": r.theta_m.residuals.iter().map(|v| v.to_decimal_string(3)).collect::<Vec<_>>(),
                },
                "roots": roots,
            });
            if args.stats {
                doc["stats"] = json!({
                    "multiplications": r.counter.count,
                    "budget": r.counter.budget,
                    "attempts": r.attempts,
                    "max_theta_residual": format!("{:.3e}", r.theta_m.max_residual()),
                    "branches": r.reconstruction.branches.len(),
                    "zero_radicands": r.reconstruction.zero_notes.len(),
                });
            }
            if let Some(dev) = &r.deviations {
                doc["verification"] = json!({
                    "deviations": dev.iter().map(|d| d.to_decimal_string(3)).collect::<Vec<_>>(),
                });
            }
            if !r.warnings.is_empty() {
                doc["warnings"] = json!(r.warnings);
            }
            Ok(format!("{}\n", serde_json::to_string_pretty(&doc).expect("json")))
        }
        Format::Text | Format::Latex => {
            let mut out = String::new();
            let _ = writeln!(out, "polynomial: {}", r.polynomial);
            if r.monic.scale != BigInt::from(1) {
                let _ = writeln!(out, "monic: {} ({})", r.monic.monic, r.monic.describe());
            }
            for w in &r.warnings {
                let _ = writeln!(out, "warning: {w}");
            }
            let steps: Vec<String> = r
                .series
                .steps
                .iter()
                .map(|s| format!("{} [{}]", s.generator, s.prime))
                .collect();
            let _ = writeln!(out, "group order: {}", r.group_order);
            let _ = writeln!(out, "series: {}", if steps.is_empty() { "trivial".into() } else { steps.join(", ") });
            let _ = writeln!(
                out,
                "digits: {} (required {}, margin {})",
                r.digits, r.plan.required_digits, r.plan.margin
            );
            let vals: Vec<String> = r.theta_m.values.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "theta_{m}: [{}]", vals.join(", "));
            for (k, (e, x)) in r.expressions.iter().zip(&r.roots).enumerate() {
                let _ = writeln!(out, "x{} = {}", k + 1, emit(e, output_format(args.format)));
                let _ = writeln!(out, "   ~ {}", x.chopped().to_decimal_string(sig));
            }
            if args.stats {
                let _ = writeln!(out, "multiplications: {} (budget {})", r.counter.count, r.counter.budget);
                let _ = writeln!(out, "max theta residual: {:.3e}", r.theta_m.max_residual());
                let _ = writeln!(out, "attempts: {}", r.attempts);
                let _ = writeln!(
                    out,
                    "branches: {} (zero radicands: {})",
                    r.reconstruction.branches.len(),
                    r.reconstruction.zero_notes.len()
                );
            }
            if let Some(d) = r.max_deviation() {
                let _ = writeln!(out, "verified: max deviation {d:.3e}");
            }
            Ok(out)
        }
    }
}

/// Label of each canonical root, the inverse of a `permuted` order.
fn labels_of(order: &[usize]) -> Vec<usize> {
    let mut labels = vec![0; order.len()];
    for (k, &r) in order.iter().enumerate() {
        labels[r] = k + 1;
    }
    labels
}

fn roots_command(args: &RootsArgs) -> Result<String, Failure> {
    let problem = read_problem(&args.poly, &args.input)?;
    let monic = to_monic(&problem.poly);
    let rs = find_roots(&monic.monic, args.digits)?;
    let values: Vec<_> = rs.roots.iter().map(|y| y.div_integer(&monic.scale).chopped()).collect();
    match args.format {
        Format::Json => {
            let roots: Vec<Value> = values
                .iter()
                .zip(&rs.residuals)
                .map(|(x, r)| {
                    json!({
                        "re": x.re_string(args.digits),
                        "im": x.im_string(args.digits),
                        "residual": r.to_decimal_string(3),
                    })
                })
                .collect();
            let doc = json!({ "polynomial": problem.poly.to_string(), "digits": args.digits, "roots": roots });
            Ok(format!("{}\n", serde_json::to_string_pretty(&doc).expect("json")))
        }
        _ => {
            let mut out = String::new();
            for (k, x) in values.iter().enumerate() {
                let _ = writeln!(out, "r{} = {}", k + 1, x.to_decimal_string(args.digits));
            }
            Ok(out)
        }
    }
}

fn series_command(args: &SeriesArgs) -> Result<String, Failure> {
    let parts: Vec<String> = args.generators.split(';').map(|t| t.trim().to_string()).collect();
    let refs: Vec<&str> = parts.iter().map(String::as_str).collect();
    let degree = args.degree.unwrap_or_else(|| infer_degree(&refs));
    let perms = parse_perms(&parts, degree)?;
    let group = solvrad_core::PermutationGroup::closure(&perms, degree)?;
    let series = solvrad_core::composition_series(&group)?;
    let primes: Vec<String> = series.primes().iter().map(u64::to_string).collect();
    match args.format {
        Format::Json => {
            let steps: Vec<Value> = series
                .steps
                .iter()
                .map(|s| json!({ "generator": s.generator.to_string(), "prime": s.prime }))
                .collect();
            let doc = json!({ "degree": degree, "order": group.order(), "series": steps });
            Ok(format!("{}\n", serde_json::to_string_pretty(&doc).expect("json")))
        }
        _ => {
            let mut out = String::new();
            let _ = writeln!(out, "degree: {degree}");
            let _ = writeln!(out, "order: {}", group.order());
            for (i, s) in series.steps.iter().enumerate() {
                let _ = writeln!(out, "sigma_{} = {}  p_{} = {}", i + 1, s.generator, i + 1, s.prime);
            }
            let _ = writeln!(out, "primes: {}", primes.join(", "));
            Ok(out)
        }
    }
}

fn check_command(args: &CheckArgs) -> Result<String, Failure> {
    let (poly, gens, labeling) = resolve_input(&args.input)?;
    let n = poly.degree();
    let monic = to_monic(&poly);
    let (group, _) = prepare_group(&gens, n)?;
    let canonical = find_roots(&monic.monic, args.digits)?;
    let invariants: Vec<Vec<u32>> = if args.invariant.is_empty() {
        default_invariants(n)
    } else {
        args.invariant
            .iter()
            .map(|t| {
                t.split(',')
                    .map(|s| s.trim().parse::<u32>())
                    .collect::<Result<Vec<u32>, _>>()
                    .map_err(|_| Failure::parse(format!("malformed invariant '{t}'")))
            })
            .collect::<Result<_, _>>()?
    };
    let order = match labeling {
        LabelingMode::Given(labels) => order_from_labels(&labels).map_err(Failure::from)?,
        LabelingMode::Auto => label_roots(&group, &canonical, &invariants)?.order,
    };
    let labeled = canonical.permuted(&order);
    let mut rows = Vec::new();
    for inv in &invariants {
        let orbit = orbit_sum_invariant(&group, inv);
        let (value, residual) = invariant_value(&orbit, &labeled);
        let cert = if n <= solvrad_core::oracle::CERTIFICATE_DEGREE_CAP {
            Some(coset_product_certificate(&group, inv, &labeled, args.tolerance)?)
        } else {
            None
        };
        rows.push((inv.clone(), value, residual, cert));
    }
    let failed = rows.iter().any(|(_, _, r, _)| !(r.to_f64() < args.tolerance));
    let labels = labels_of(&order);
    let out = match args.format {
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|(inv, v, r, c)| {
                    let mut item = json!({
                        "exponents": inv,
                        "value": v.to_string(),
                        "residual": r.to_decimal_string(3),
                    });
                    if let Some(c) = c {
                        item["certificate"] = json!({
                            "coefficients": c.coefficients.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
                            "max_residual": format!("{:.3e}", c.max_residual()),
                        });
                    }
                    item
                })
                .collect();
            let doc = json!({ "root_order": labels, "invariants": items, "ok": !failed });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
        }
        _ => {
            let mut out = String::new();
            let l: Vec<String> = labels.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "root order: {}", l.join(","));
            for (inv, v, r, c) in &rows {
                let e: Vec<String> = inv.iter().map(u32::to_string).collect();
                let _ = writeln!(out, "orbit sum [{}] = {} (residual {})", e.join(","), v, r.to_decimal_string(3));
                if let Some(c) = c {
                    let _ = writeln!(
                        out,
                        "  F: degree {}, max coefficient residual {:.3e}, coefficients [{}]",
                        c.degree(),
                        c.max_residual(),
                        c.coefficients.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(", ")
                    );
                }
            }
            out
        }
    };
    if failed {
        return Err(Failure {
            code: 4,
            message: format!("{out}an invariant is not an integer under this labeling"),
        });
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => solve_command(a),
        Command::Roots(a) => roots_command(a),
        Command::Series(a) => series_command(a),
        Command::Check(a) => check_command(a),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
