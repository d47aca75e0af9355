//! Batch command-line interface: JSON in, JSON out, reproducible runs.
//!
//! Every successful run prints a single JSON document
//! `{"manifest": ..., "result": ...}` on stdout. The manifest echoes the
//! full input (polytope, integrand, weight, polarization, order,
//! tolerances) together with the ambient cyclotomic order, the library
//! version, and wall time; the result object is deterministic on exact
//! paths, so re-running the inputs recorded in a manifest reproduces it
//! bit for bit. Errors print `{"error": ...}` on stderr. Exit codes:
//! 0 success, 1 mathematical or validation failure, 2 malformed input.
//! The environment variable `WEM_THREADS` caps internal parallelism.

use std::fs;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num::complex::Complex64;
use num::integer::lcm;
use num::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cyclotomic::Cyc;
use crate::em1d::{em_interval, em_ray, em_twisted_ray, Em1dReport};
use crate::emnd::EmContext;
use crate::error::{Error, Result};
use crate::kernels::multiplicative_order;
use crate::multipoly::MultiPolynomial;
use crate::polytope::Polytope;
use crate::rational::Rational;
use crate::smooth::{
    Bump1d, CutoffPolynomial1d, PolyBump1d, Polynomial1d, SeparableNd, SinBump1d,
    SmoothFunction1d,
};

#[derive(Parser)]
#[command(
    name = "wem",
    version,
    about = "Weighted lattice-point summation over simple integral polytopes",
    long_about = "Weighted lattice-point summation over simple integral polytopes.\n\
        All input and output is UTF-8 JSON; rationals travel as \"p/q\" strings.\n\
        The environment variable WEM_THREADS caps internal parallelism."
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a polytope file and report its structure.
    Verify(VerifyArgs),
    /// Weighted polynomial sum by direct lattice-point enumeration.
    Sum(SumArgs),
    /// Face-expansion summation: exact for polynomial integrands, main
    /// term plus remainder for smooth bump integrands.
    Em(EmArgs),
    /// Per-face finite groups: invariant factors, characters, flat flags.
    Groups(GroupsArgs),
    /// Polarized decomposition into signed vertex cones.
    Decompose(DecomposeArgs),
    /// One-dimensional formulas: interval, ray, or twisted ray.
    Em1d(Em1dArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Polytope JSON file: {"dimension": n, "halfspaces": [{"normal": [..], "offset": ..}, ..]}.
    file: String,
}

#[derive(Args)]
struct SumArgs {
    /// Polytope JSON file.
    file: String,
    /// Weight on the boundary, as "p/q".
    #[arg(long)]
    q: String,
    /// Polynomial integrand: JSON list of {"exponents": [..], "coefficient": "p/q"};
    /// prefix with @ to read from a file.
    #[arg(long)]
    poly: String,
}

#[derive(Args)]
struct EmArgs {
    /// Polytope JSON file.
    file: String,
    /// Weight on the boundary, as "p/q".
    #[arg(long)]
    q: String,
    /// Polynomial integrand: JSON list of {"exponents": [..], "coefficient": "p/q"};
    /// prefix with @ to read from a file.
    #[arg(long, conflicts_with = "bump")]
    poly: Option<String>,
    /// Smooth integrand: JSON list with one factor per coordinate, e.g.
    /// [{"kind": "bump", "center": 1.0, "radius": 2.0}, ..]; prefix with @
    /// to read from a file.
    #[arg(long)]
    bump: Option<String>,
    /// Formula order (defaults to degree + dimension + 1 on the
    /// polynomial path; required on the smooth path).
    #[arg(long)]
    k: Option<usize>,
    /// Polarizing vector, comma-separated integers.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    xi: Option<Vec<i64>>,
    /// Quadrature tolerance for the smooth path.
    #[arg(long, default_value_t = 1e-9)]
    quad_tol: f64,
    /// Skip the independent kernel-integral evaluation of the remainder
    /// on the smooth path (much faster; remainder_formula becomes null).
    #[arg(long)]
    skip_kernel_check: bool,
    /// Also run the direct lattice enumeration and fail on any mismatch.
    #[arg(long)]
    compare_oracle: bool,
    /// Use the collapsed evaluation that requires every vertex cone to be
    /// unimodular.
    #[arg(long)]
    regular_fastpath: bool,
}

#[derive(Args)]
struct GroupsArgs {
    /// Polytope JSON file.
    file: String,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Polytope JSON file.
    file: String,
    /// Polarizing vector, comma-separated integers (defaults to a
    /// generically chosen one).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    xi: Option<Vec<i64>>,
}

#[derive(Args)]
struct Em1dArgs {
    /// Weight at the endpoint(s), as "p/q".
    #[arg(long)]
    q: String,
    /// Formula order.
    #[arg(long)]
    m: usize,
    /// Integrand: JSON record such as {"kind": "bump", "center": 3.0,
    /// "radius": 2.0}; prefix with @ to read from a file.
    #[arg(long)]
    function: String,
    /// Left endpoint (interval and ray modes).
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    a: i64,
    /// Right endpoint; selects the interval formula.
    #[arg(long, allow_hyphen_values = true)]
    b: Option<i64>,
    /// Sum over the ray from `a` instead of an interval.
    #[arg(long, conflicts_with = "b")]
    ray: bool,
    /// Rotation number "a/N" of a root of unity; selects the twisted ray
    /// formula from 0.
    #[arg(long, conflicts_with_all = ["b", "ray"], allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Quadrature tolerance.
    #[arg(long, default_value_t = 1e-10)]
    quad_tol: f64,
}

/// One term of a polynomial integrand on the wire.
#[derive(Serialize, Deserialize)]
struct TermSpec {
    exponents: Vec<u32>,
    coefficient: String,
}

/// One smooth factor on the wire. Names are families, parameters are
/// plain numbers; no expression language.
#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum FactorSpec {
    Bump {
        center: f64,
        radius: f64,
    },
    SinBump {
        center: f64,
        radius: f64,
        frequency: f64,
        phase: f64,
    },
    PolyBump {
        coefficients: Vec<f64>,
        center: f64,
        radius: f64,
    },
    CutoffPolynomial {
        coefficients: Vec<f64>,
        plateau_end: f64,
        #[serde(default = "default_margin")]
        margin: f64,
    },
    Polynomial {
        coefficients: Vec<f64>,
    },
}

fn default_margin() -> f64 {
    1.0
}

impl FactorSpec {
    fn build(&self) -> Box<dyn SmoothFunction1d + Send> {
        match self.clone() {
            FactorSpec::Bump { center, radius } => Box::new(Bump1d::new(center, radius)),
            FactorSpec::SinBump {
                center,
                radius,
                frequency,
                phase,
            } => Box::new(SinBump1d::new(center, radius, frequency, phase)),
            FactorSpec::PolyBump {
                coefficients,
                center,
                radius,
            } => Box::new(PolyBump1d::new(coefficients, center, radius)),
            FactorSpec::CutoffPolynomial {
                coefficients,
                plateau_end,
                margin,
            } => Box::new(CutoffPolynomial1d::new(coefficients, plateau_end, margin)),
            FactorSpec::Polynomial { coefficients } => {
                Box::new(Polynomial1d::new(coefficients))
            }
        }
    }
}

/// Parse and run the process arguments; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(doc) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("report serializes")
            );
            0
        }
        Err(e) => {
            eprintln!(
                "{}",
                serde_json::to_string(&json!({ "error": e.to_string() }))
                    .expect("error serializes")
            );
            if e.is_input_error() {
                2
            } else {
                1
            }
        }
    }
}

fn execute(command: &Command) -> Result<Value> {
    let start = Instant::now();
    let (name, inputs, xi, ambient, tolerances, result) = match command {
        Command::Verify(args) => cmd_verify(args)?,
        Command::Sum(args) => cmd_sum(args)?,
        Command::Em(args) => cmd_em(args)?,
        Command::Groups(args) => cmd_groups(args)?,
        Command::Decompose(args) => cmd_decompose(args)?,
        Command::Em1d(args) => cmd_em1d(args)?,
    };
    Ok(json!({
        "manifest": {
            "command": name,
            "inputs": inputs,
            "xi": xi,
            "ambient_order": ambient,
            "tolerances": tolerances,
            "version": env!("CARGO_PKG_VERSION"),
            "wall_ms": start.elapsed().as_millis() as u64,
        },
        "result": result,
    }))
}

type CommandOutput = (
    &'static str,
    Value,
    Option<Vec<i64>>,
    u64,
    Value,
    Value,
);

fn read_file(path: &str) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))
}

/// Inline JSON, or `@path` to read it from a file.
fn read_spec(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => read_file(path),
        None => Ok(arg.to_string()),
    }
}

fn load_polytope(path: &str) -> Result<Polytope> {
    Polytope::from_json(&read_file(path)?)
}

fn parse_rational(text: &str) -> Result<Rational> {
    text.parse()
}

fn parse_polynomial(arg: &str, dimension: usize) -> Result<MultiPolynomial> {
    let text = read_spec(arg)?;
    let terms: Vec<TermSpec> = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("polynomial JSON: {e}")))?;
    if terms.is_empty() {
        return Ok(MultiPolynomial::zero(dimension));
    }
    let mut total = MultiPolynomial::zero(dimension);
    for (i, term) in terms.iter().enumerate() {
        if term.exponents.len() != dimension {
            return Err(Error::InvalidInput(format!(
                "term {i} has {} exponents in dimension {dimension}",
                term.exponents.len()
            )));
        }
        let c = parse_rational(&term.coefficient)?;
        total = total.add(&MultiPolynomial::monomial(term.exponents.clone(), c));
    }
    Ok(total)
}

fn parse_factors(arg: &str) -> Result<Vec<FactorSpec>> {
    let text = read_spec(arg)?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("factor list JSON: {e}")))
}

fn parse_factor(arg: &str) -> Result<FactorSpec> {
    let text = read_spec(arg)?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("factor JSON: {e}")))
}

/// Smallest cyclotomic order containing every character value of every
/// face group.
fn ambient_order(ctx: &EmContext) -> u64 {
    let mut m = 1u64;
    for group in ctx.groups().groups() {
        for elem in &group.elements {
            for r in &elem.rotations {
                if let Some(d) = r.denom().to_u64() {
                    m = lcm(m, d.max(1));
                }
            }
        }
    }
    m
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn cyc_json(c: &Cyc) -> Value {
    json!({
        "order": c.order(),
        "coefficients": c.coefficients().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
    })
}

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(|x| x.to_string()).collect()
}

fn cmd_verify(args: &VerifyArgs) -> Result<CommandOutput> {
    let p = load_polytope(&args.file)?;
    let inputs = json!({ "polytope": p.spec() });
    let result = json!({
        "valid": true,
        "dimension": p.dimension(),
        "halfspace_count": p.halfspaces().len(),
        "vertex_count": p.vertices().len(),
        "face_count": p.faces().len(),
        "vertices": p.vertices().iter().map(|v| strings(&v.point)).collect::<Vec<_>>(),
        "lattice_point_count": p.lattice_points().len(),
    });
    Ok(("verify", inputs, None, 1, Value::Null, result))
}

fn cmd_sum(args: &SumArgs) -> Result<CommandOutput> {
    let p = load_polytope(&args.file)?;
    let q = parse_rational(&args.q)?;
    let f = parse_polynomial(&args.poly, p.dimension())?;
    let value = p.weighted_polynomial_sum(&q, &f)?;
    let inputs = json!({
        "polytope": p.spec(),
        "q": q.to_string(),
        "poly": serde_json::from_str::<Value>(&read_spec(&args.poly)?).unwrap_or(Value::Null),
    });
    let result = json!({ "value": value.to_string() });
    Ok(("sum", inputs, None, 1, Value::Null, result))
}

fn cmd_em(args: &EmArgs) -> Result<CommandOutput> {
    let p = load_polytope(&args.file)?;
    let q = parse_rational(&args.q)?;
    let ctx = EmContext::new(p)?;
    let ambient = ambient_order(&ctx);
    match (&args.poly, &args.bump) {
        (Some(poly_arg), None) => {
            let f = parse_polynomial(poly_arg, ctx.polytope().dimension())?;
            let exact_order =
                f.total_degree() as usize + ctx.polytope().dimension() + 1;
            let k = args.k.unwrap_or(exact_order);
            let inputs = json!({
                "polytope": ctx.polytope().spec(),
                "q": q.to_string(),
                "poly": serde_json::from_str::<Value>(&read_spec(poly_arg)?)
                    .unwrap_or(Value::Null),
                "k": k,
                "compare_oracle": args.compare_oracle,
                "regular_fastpath": args.regular_fastpath,
            });
            let (path, value, contributions) = if args.regular_fastpath {
                let value = ctx.regular_main_term(&q, &f)?;
                ("regular", value, Vec::new())
            } else {
                let contributions = ctx.face_contributions(&q, &f, k)?;
                let total = contributions
                    .iter()
                    .fold(Cyc::zero(), |acc, c| acc.add(&c.value));
                let value =
                    total
                        .rational_part()
                        .ok_or_else(|| Error::NonRationalTotal {
                            residual: strings(total.coefficients()),
                        })?;
                ("faces", value, contributions)
            };
            let oracle = if args.compare_oracle {
                let direct = ctx.polytope().weighted_polynomial_sum(&q, &f)?;
                if direct != value {
                    return Err(Error::Inconsistent(format!(
                        "face expansion gives {value} but direct enumeration gives {direct}"
                    )));
                }
                Some(direct.to_string())
            } else {
                None
            };
            let result = json!({
                "path": path,
                "order": k,
                "value": value.to_string(),
                "oracle": oracle,
                "contributions": contributions.iter().map(|c| json!({
                    "face": c.face,
                    "facets": c.facets,
                    "element": c.element,
                    "value": cyc_json(&c.value),
                })).collect::<Vec<_>>(),
            });
            Ok(("em", inputs, None, ambient, Value::Null, result))
        }
        (None, Some(bump_arg)) => {
            let k = args.k.ok_or_else(|| {
                Error::InvalidInput("--k is required with --bump".into())
            })?;
            let specs = parse_factors(bump_arg)?;
            let factors: Vec<Box<dyn SmoothFunction1d + Send>> =
                specs.iter().map(|s| s.build()).collect();
            let f = SeparableNd::new(factors);
            let xi = args
                .xi
                .clone()
                .unwrap_or_else(|| ctx.polytope().default_polarization());
            let summary = if args.skip_kernel_check {
                ctx.smooth_sum_without_remainder_formula(&f, &q, &xi, k, args.quad_tol)?
            } else {
                ctx.smooth_sum(&f, &q, &xi, k, args.quad_tol)?
            };
            let inputs = json!({
                "polytope": ctx.polytope().spec(),
                "q": q.to_string(),
                "bump": serde_json::to_value(&specs).expect("specs serialize"),
                "k": k,
            });
            let tolerances = json!({ "quad_tol": args.quad_tol });
            let result = json!({
                "path": "smooth",
                "order": summary.order,
                "direct_sum": summary.direct_sum,
                "main_term": summary.main_term,
                "remainder_difference": summary.remainder_difference,
                "remainder_formula": summary.remainder_formula,
                "imaginary_residual": summary.imaginary_residual,
                "quadrature_error": summary.quadrature_error,
            });
            Ok(("em", inputs, Some(summary.xi), ambient, tolerances, result))
        }
        _ => Err(Error::InvalidInput(
            "exactly one of --poly or --bump is required".into(),
        )),
    }
}

fn cmd_groups(args: &GroupsArgs) -> Result<CommandOutput> {
    let p = load_polytope(&args.file)?;
    let ctx = EmContext::new(p)?;
    let ambient = ambient_order(&ctx);
    let inputs = json!({ "polytope": ctx.polytope().spec() });
    let faces: Vec<Value> = ctx
        .groups()
        .groups()
        .iter()
        .map(|g| {
            json!({
                "face": g.face,
                "facets": ctx.polytope().faces()[g.face].facets,
                "order": g.order(),
                "invariant_factors": strings(&g.invariant_factors),
                "elements": g.elements.iter().enumerate().map(|(i, e)| json!({
                    "coords": strings(&e.coords),
                    "rotations": strings(&e.rotations),
                    "flat": g.flats.contains(&i),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let result = json!({ "faces": faces });
    Ok(("groups", inputs, None, ambient, Value::Null, result))
}

fn cmd_decompose(args: &DecomposeArgs) -> Result<CommandOutput> {
    let p = load_polytope(&args.file)?;
    let xi = args
        .xi
        .clone()
        .unwrap_or_else(|| p.default_polarization());
    let pol = p.polarize(&xi)?;
    let n = p.dimension();
    let inputs = json!({ "polytope": p.spec(), "xi": xi });
    let cones: Vec<Value> = (0..p.vertices().len())
        .map(|v_idx| {
            let v = &p.vertices()[v_idx];
            let flipped: Vec<bool> = (0..n).map(|k| pol.flipped(v_idx, k)).collect();
            let edges: Vec<Vec<String>> = (0..n)
                .map(|k| strings(&pol.edge(&p, v_idx, k)))
                .collect();
            let count = pol.flip_count(v_idx);
            json!({
                "vertex": strings(&v.point),
                "facets": v.facets,
                "flipped": flipped,
                "flip_count": count,
                "sign": if count % 2 == 0 { 1 } else { -1 },
                "edges": edges,
            })
        })
        .collect();
    let result = json!({ "cones": cones });
    Ok(("decompose", inputs, Some(xi), 1, Value::Null, result))
}

fn report_json(r: &Em1dReport) -> Value {
    json!({
        "sum": complex_json(r.sum),
        "main_term": complex_json(r.main_term),
        "remainder_formula": complex_json(r.remainder_formula),
        "remainder_difference": complex_json(r.remainder_difference),
        "agreement": r.agreement(),
        "quad_error": r.quad_error,
    })
}

fn cmd_em1d(args: &Em1dArgs) -> Result<CommandOutput> {
    let q = parse_rational(&args.q)?;
    let spec = parse_factor(&args.function)?;
    let f = spec.build();
    let tolerances = json!({ "quad_tol": args.quad_tol });
    let mut inputs = json!({
        "q": q.to_string(),
        "m": args.m,
        "function": serde_json::to_value(&spec).expect("spec serializes"),
    });
    let (mode, ambient, report) = if let Some(lambda_arg) = &args.lambda {
        let rotation = parse_rational(lambda_arg)?;
        let lambda = Cyc::root_of_unity(&rotation);
        let order = multiplicative_order(&lambda)?;
        inputs["lambda"] = json!(rotation.to_string());
        let report = em_twisted_ray(f.as_ref(), &q, &lambda, args.m, args.quad_tol)?;
        ("twisted_ray", order, report)
    } else if let Some(b) = args.b {
        if args.a >= b {
            return Err(Error::InvalidInput(format!(
                "empty interval [{}, {b}]",
                args.a
            )));
        }
        inputs["a"] = json!(args.a);
        inputs["b"] = json!(b);
        let report = em_interval(f.as_ref(), args.a, b, &q, args.m, args.quad_tol)?;
        ("interval", 1, report)
    } else if args.ray {
        inputs["a"] = json!(args.a);
        let report = em_ray(f.as_ref(), args.a, &q, args.m, args.quad_tol)?;
        ("ray", 1, report)
    } else {
        return Err(Error::InvalidInput(
            "choose a mode: --b for an interval, --ray, or --lambda".into(),
        ));
    };
    let mut result = report_json(&report);
    result["mode"] = json!(mode);
    Ok(("em1d", inputs, None, ambient, tolerances, result))
}
