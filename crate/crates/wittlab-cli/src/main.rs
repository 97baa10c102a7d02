//! Command-line driver: every checker of the library behind one binary with
//! seeded, reproducible runs and machine-readable reports.

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::process::ExitCode;

use wittlab::differential::dlog;
use wittlab::error::Error;
use wittlab::field::Fld;
use wittlab::homotopy::{admissibility_newton, cube_boundary_compare, HomotopyDatum, HomotopyTarget};
use wittlab::local::{residue, valuation};
use wittlab::milnor::{finite_field, milnor_class, milnor_group};
use wittlab::parse::{
    curve_setup, eval_bipoly, eval_element, eval_poly, eval_rational, parse_expr, parse_field,
    parse_tuple, parse_weil_file,
};
use wittlab::picard::{divisor_of_poly, picard_to_dwitt, picard_to_gm, picard_to_witt, Place};
use wittlab::report::{CheckResult, Report};
use wittlab::symbol::{
    check_steinberg, derive_phi_a, derive_phi_b, make_broken_symbol, make_differential_symbol,
    make_extended_differential_symbol, make_infinitesimal_symbol, symbol_by_name, RelationId,
};
use wittlab::unipoly::UniPoly;
use wittlab::weil::{check_reciprocity, generate_valid_data, modulus_regularity, weil_validate};
use wittlab::witt::{
    double_teichmuller, dwitt_project_gm, dwitt_project_w, teichmuller, witt_add, witt_compose,
    witt_decompose, witt_neg, witt_scalar, WittCoords, WittVector,
};

#[derive(Parser)]
#[command(name = "wittlab", version, about = "Exact checkers for truncated Witt vectors, divisor classes, differential symbols, residues and reciprocity sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format of the structured report.
    #[arg(long, global = true, default_value = "text")]
    out: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Args)]
struct CommonOpts {
    /// Field specification, e.g. "Fp(5)(u,t)" or "Q(u)".
    #[arg(long, default_value = "Q")]
    field: String,
    /// Master seed for all randomized checks.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Sample count for randomized checks.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Truncation length for Witt-vector targets.
    #[arg(long, default_value_t = 2)]
    n: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Witt vector arithmetic on truncated series.
    Witt {
        #[command(subcommand)]
        op: WittOp,
    },
    /// Doubled Witt vectors.
    Dwitt {
        #[command(subcommand)]
        op: DwittOp,
    },
    /// Divisor-class maps of polynomials in the curve coordinate.
    Picard {
        /// Target of the class map: witt, gm, dwitt, or divisor.
        #[arg(long, default_value = "witt")]
        target: String,
        /// Polynomial in t over the field.
        poly: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Evaluates a shipped symbol at explicit arguments.
    SymbolEval {
        #[arg(long)]
        symbol: String,
        /// Number of multiplicative slots where applicable.
        #[arg(long, default_value_t = 1)]
        s: usize,
        /// Comma-separated additive arguments.
        #[arg(long, default_value = "")]
        ga: String,
        /// Comma-separated multiplicative arguments.
        #[arg(long, default_value = "")]
        gm: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Checks a Steinberg-type relation on seeded samples.
    CheckSteinberg {
        #[arg(long)]
        symbol: String,
        #[arg(long)]
        relation: String,
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Validates a reciprocity datum file and evaluates the sums.
    CheckWeil {
        #[arg(long)]
        file: String,
        #[arg(long, default_value = "ext-diff")]
        symbol: String,
        /// Which route(s) to compute: definitional, residue, or both.
        #[arg(long, default_value = "both")]
        route: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Newton-polygon admissibility and endpoint comparison of a family.
    CheckHomotopy {
        /// Polynomial in S and T, monic in T, e.g. "T^3 - S".
        #[arg(long)]
        poly: String,
        /// Target: "W2+", "Gm+", or "D2+".
        #[arg(long)]
        target: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Finite-field Milnor K-groups by exhaustive presentation.
    Milnor {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        s: usize,
        /// Optional comma-separated tuple of units to locate in the group.
        #[arg(long)]
        class: Option<String>,
    },
    /// Residues of g(t) dt at a place.
    Residue {
        /// Rational function of t over the field.
        g: String,
        /// Place: "inf" or a monic polynomial in t.
        #[arg(long, default_value = "inf")]
        at: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Runs the full battery of checks with one seed.
    VerifyAll {
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Subcommand)]
enum WittOp {
    /// Adds two Witt vectors given as series.
    Add {
        a: String,
        b: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Inverse of a Witt vector.
    Neg {
        a: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Integer multiple of a Witt vector.
    Scalar {
        m: i64,
        a: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Coordinates of a series.
    Decompose {
        a: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Series of a coordinate tuple like "(3, -1)".
    Compose {
        coords: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// The representative 1 - aT.
    Teichmuller {
        a: String,
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Subcommand)]
enum DwittOp {
    /// The doubled representative of a unit.
    Teichmuller {
        a: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Componentwise sum of the doubled representatives of two units.
    Add {
        a: String,
        b: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Projections of the doubled representative.
    Project {
        a: String,
        /// Which projection: "w" or "gm".
        #[arg(long, default_value = "w")]
        component: String,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.out {
                OutputFormat::Text => print!("{}", report.to_text()),
                OutputFormat::Json => println!("{}", report.to_json()),
            }
            if report.all_passing() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Ensures the field has at least `want` transcendental variables, appending
/// fresh names when the spec denotes a plain base field.
fn with_vars(spec: &str, want: usize) -> Result<Fld, Error> {
    let k = parse_field(spec)?;
    let ground = k.ground();
    if ground.nvars() >= want {
        return Ok(k);
    }
    let mut vars: Vec<String> = ground.vars.clone();
    for cand in ["u", "t", "v", "w"] {
        if vars.len() >= want {
            break;
        }
        if !vars.iter().any(|v| v == cand) {
            vars.push(cand.to_string());
        }
    }
    let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    Ok(Fld::Fun(wittlab::field::FunctionField::new(
        ground.base,
        &refs,
    )))
}

fn parse_witt(series: &str, field: &Fld, n: usize) -> Result<WittVector, Error> {
    let poly = eval_poly(&parse_expr(series)?, field, "T")?;
    let coeffs = (0..=n).map(|i| poly.coeff(i)).collect();
    WittVector::from_series(wittlab::witt::TruncatedPoly::new(field.clone(), n, coeffs))
}

fn run(cli: &Cli) -> Result<Report, Error> {
    match &cli.command {
        Command::Witt { op } => run_witt(op),
        Command::Dwitt { op } => run_dwitt(op),
        Command::Picard {
            target,
            poly,
            common,
        } => {
            let (k, _) = curve_setup(&common.field, "t")?;
            let p = eval_poly(&parse_expr(poly)?, &k, "t")?;
            let mut report = Report::new(&format!("picard --target {target} {poly}"), common.seed);
            let detail = match target.as_str() {
                "witt" => json!({"class": format!("{}", picard_to_witt(&p, common.n)?)}),
                "gm" => json!({"class": format!("{}", picard_to_gm(&p)?)}),
                "dwitt" => {
                    let d = picard_to_dwitt(&p, common.n)?;
                    json!({
                        "minus": format!("{}", d.w_minus),
                        "plus": format!("{}", d.w_plus),
                        "deg": d.deg,
                        "unit": format!("{}", d.unit),
                    })
                }
                "divisor" => {
                    let d = divisor_of_poly(&p, true, common.seed)?;
                    json!({"divisor": format!("{d}")})
                }
                other => return Err(Error::Invalid(format!("unknown target {other}"))),
            };
            report.push(CheckResult::info("picard-class", detail));
            Ok(report)
        }
        Command::SymbolEval {
            symbol,
            s,
            ga,
            gm,
            common,
        } => {
            let k = parse_field(&common.field)?;
            let phi = symbol_by_name(symbol, *s)
                .ok_or_else(|| Error::Invalid(format!("unknown symbol {symbol}")))?;
            let parse_list = |text: &str| -> Result<Vec<_>, Error> {
                if text.trim().is_empty() {
                    return Ok(vec![]);
                }
                text.split(',')
                    .map(|part| eval_element(&parse_expr(part.trim())?, &k))
                    .collect()
            };
            let ga_args = parse_list(ga)?;
            let gm_args = parse_list(gm)?;
            let value = phi.eval(&k, &ga_args, &gm_args)?;
            let mut report = Report::new(&format!("symbol-eval --symbol {symbol}"), common.seed);
            report.push(CheckResult::info(
                "value",
                json!({"symbol": symbol, "value": format!("{value}")}),
            ));
            Ok(report)
        }
        Command::CheckSteinberg {
            symbol,
            relation,
            s,
            common,
        } => {
            let k = parse_field(&common.field)?;
            let phi = symbol_by_name(symbol, *s)
                .ok_or_else(|| Error::Invalid(format!("unknown symbol {symbol}")))?;
            let rel = RelationId::parse(relation)
                .ok_or_else(|| Error::Invalid(format!("unknown relation {relation}")))?;
            let r = check_steinberg(&phi, rel, &k, common.samples, common.seed)?;
            let mut report = Report::new(
                &format!(
                    "check-steinberg --symbol {symbol} --relation {relation} --field {} --samples {} --seed {}",
                    common.field, common.samples, common.seed
                ),
                common.seed,
            );
            let detail = serde_json::to_value(&r).unwrap();
            if r.passed() {
                report.push(CheckResult::pass(&format!("{symbol}/{relation}"), detail));
            } else {
                report.push(CheckResult::fail(
                    &format!("{symbol}/{relation}"),
                    detail,
                    &format!(
                        "wittlab check-steinberg --symbol {symbol} --relation {relation} --field \"{}\" --samples {} --seed {}",
                        common.field, common.samples, common.seed
                    ),
                ));
            }
            Ok(report)
        }
        Command::CheckWeil {
            file,
            symbol,
            route,
            seed,
        } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| Error::Invalid(format!("cannot read {file}: {e}")))?;
            let datum = parse_weil_file(&text)?;
            let mut report = Report::new(
                &format!("check-weil --file {file} --symbol {symbol} --route {route}"),
                *seed,
            );
            let validation = weil_validate(&datum);
            report.push(CheckResult::info(
                "validation",
                serde_json::to_value(&validation).unwrap(),
            ));
            if !validation.valid {
                // an invalid datum is report content, not a failure of the tool
                return Ok(report);
            }
            let phi = symbol_by_name(symbol, datum.gm_count())
                .ok_or_else(|| Error::Invalid(format!("unknown symbol {symbol}")))?;
            if route == "definitional" || route == "both" {
                let (sum, ledger) = wittlab::weil::weil_sum_definitional(&datum, &phi, *seed)?;
                let entries: Vec<String> = ledger.iter().map(|e| format!("{e}")).collect();
                let ok = sum.is_zero();
                let detail = json!({"sum": format!("{sum}"), "ledger": entries});
                report.push(if ok {
                    CheckResult::pass("definitional-sum", detail)
                } else {
                    CheckResult::fail(
                        "definitional-sum",
                        detail,
                        &format!("wittlab check-weil --file {file} --symbol {symbol} --route definitional"),
                    )
                });
            }
            if route == "residue" || route == "both" {
                let rr = wittlab::weil::weil_sum_residue(&datum, &phi, *seed)?;
                let ok = rr.restricted.is_zero() && rr.full.is_zero();
                let detail = json!({
                    "restricted": format!("{}", rr.restricted),
                    "full": format!("{}", rr.full),
                });
                report.push(if ok {
                    CheckResult::pass("residue-sum", detail)
                } else {
                    CheckResult::fail(
                        "residue-sum",
                        detail,
                        &format!("wittlab check-weil --file {file} --symbol {symbol} --route residue"),
                    )
                });
                let reg = modulus_regularity(&datum, &phi, *seed)?;
                report.push(if reg {
                    CheckResult::pass("modulus-regularity", json!({"regular": true}))
                } else {
                    CheckResult::fail(
                        "modulus-regularity",
                        json!({"regular": false}),
                        &format!("wittlab check-weil --file {file} --symbol {symbol}"),
                    )
                });
            }
            Ok(report)
        }
        Command::CheckHomotopy {
            poly,
            target,
            common,
        } => {
            let k = parse_field(&common.field)?;
            let tgt = HomotopyTarget::parse(target)
                .ok_or_else(|| Error::Invalid(format!("unknown target {target}")))?;
            let bi = eval_bipoly(&parse_expr(poly)?, &k, "S", "T")?;
            let datum = HomotopyDatum::new(k, bi.coeffs, tgt)?;
            let verdict = admissibility_newton(&datum);
            let boundaries = cube_boundary_compare(&datum)?;
            let mut report = Report::new(
                &format!("check-homotopy --poly \"{poly}\" --target {target}"),
                common.seed,
            );
            report.push(CheckResult::info(
                "admissibility",
                serde_json::to_value(&verdict).unwrap(),
            ));
            report.push(CheckResult::info(
                "boundaries",
                json!({
                    "equal": boundaries.equal(),
                    "images": format!("{boundaries}"),
                }),
            ));
            Ok(report)
        }
        Command::Milnor { q, s, class } => {
            let g = milnor_group(*q, *s)?;
            let mut report = Report::new(&format!("milnor --q {q} --s {s}"), 0);
            report.push(CheckResult::info(
                "group",
                serde_json::to_value(g.summary()).unwrap(),
            ));
            if let Some(tuple) = class {
                let k = finite_field(*q)?;
                let args = parse_tuple(tuple, &k)?;
                let coords = milnor_class(*q, *s, &g, &args)?;
                report.push(CheckResult::info(
                    "class",
                    json!({
                        "tuple": tuple,
                        "coords": coords.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    }),
                ));
            }
            Ok(report)
        }
        Command::Residue { g, at, common } => {
            let (k, _) = curve_setup(&common.field, "t")?;
            let rt = eval_rational(&parse_expr(g)?, &k, "t")?;
            let place = if at.trim() == "inf" {
                Place::Infinity
            } else {
                let p = eval_poly(&parse_expr(at)?, &k, "t")?;
                Place::finite(p.monic().0)
            };
            // residue of g dt, through the form over K(t)
            let mut vars: Vec<&str> = k.ground().vars.iter().map(|v| v.as_str()).collect();
            vars.push("t");
            let big = Fld::Fun(wittlab::field::FunctionField::new(k.base(), &vars));
            let g_big = wittlab::unipoly::join_rat(&big, "t", &rt);
            let t = big.var("t").unwrap();
            let omega = wittlab::differential::exterior_d(&t)?.scale(&g_big);
            let res = residue(&k, &omega, "t", &place, common.seed)?;
            let val = valuation(&rt, &place)?;
            let mut report = Report::new(&format!("residue {g} --at {at}"), common.seed);
            report.push(CheckResult::info(
                "residue",
                json!({
                    "residue": format!("{res}"),
                    "valuation": val,
                }),
            ));
            Ok(report)
        }
        Command::VerifyAll { common } => verify_all(common),
    }
}

fn run_witt(op: &WittOp) -> Result<Report, Error> {
    match op {
        WittOp::Add { a, b, common } => {
            let k = parse_field(&common.field)?;
            let x = parse_witt(a, &k, common.n)?;
            let y = parse_witt(b, &k, common.n)?;
            let sum = witt_add(&x, &y)?;
            let mut report = Report::new("witt add", common.seed);
            report.push(CheckResult::info(
                "sum",
                json!({"series": format!("{sum}"), "coords": format!("{}", witt_decompose(&sum))}),
            ));
            Ok(report)
        }
        WittOp::Neg { a, common } => {
            let k = parse_field(&common.field)?;
            let x = parse_witt(a, &k, common.n)?;
            let neg = witt_neg(&x);
            let mut report = Report::new("witt neg", common.seed);
            report.push(CheckResult::info("neg", json!({"series": format!("{neg}")})));
            Ok(report)
        }
        WittOp::Scalar { m, a, common } => {
            let k = parse_field(&common.field)?;
            let x = parse_witt(a, &k, common.n)?;
            let y = witt_scalar(*m, &x);
            let mut report = Report::new("witt scalar", common.seed);
            report.push(CheckResult::info(
                "scalar",
                json!({"series": format!("{y}"), "coords": format!("{}", witt_decompose(&y))}),
            ));
            Ok(report)
        }
        WittOp::Decompose { a, common } => {
            let k = parse_field(&common.field)?;
            let x = parse_witt(a, &k, common.n)?;
            let c = witt_decompose(&x);
            let mut report = Report::new("witt decompose", common.seed);
            report.push(CheckResult::info("coords", json!({"coords": format!("{c}")})));
            Ok(report)
        }
        WittOp::Compose { coords, common } => {
            let k = parse_field(&common.field)?;
            let values = parse_tuple(coords, &k)?;
            let w = witt_compose(&WittCoords {
                ring: k.clone(),
                values,
            });
            let mut report = Report::new("witt compose", common.seed);
            report.push(CheckResult::info("series", json!({"series": format!("{w}")})));
            Ok(report)
        }
        WittOp::Teichmuller { a, common } => {
            let k = parse_field(&common.field)?;
            let x = eval_element(&parse_expr(a)?, &k)?;
            let w = teichmuller(&x, common.n);
            let mut report = Report::new("witt teichmuller", common.seed);
            report.push(CheckResult::info("series", json!({"series": format!("{w}")})));
            Ok(report)
        }
    }
}

fn run_dwitt(op: &DwittOp) -> Result<Report, Error> {
    match op {
        DwittOp::Teichmuller { a, common } => {
            let k = parse_field(&common.field)?;
            let x = eval_element(&parse_expr(a)?, &k)?;
            let d = double_teichmuller(&x, common.n)?;
            let mut report = Report::new("dwitt teichmuller", common.seed);
            report.push(CheckResult::info(
                "quadruple",
                json!({
                    "minus": format!("{}", d.w_minus),
                    "plus": format!("{}", d.w_plus),
                    "deg": d.deg,
                    "unit": format!("{}", d.unit),
                }),
            ));
            Ok(report)
        }
        DwittOp::Add { a, b, common } => {
            let k = parse_field(&common.field)?;
            let x = double_teichmuller(&eval_element(&parse_expr(a)?, &k)?, common.n)?;
            let y = double_teichmuller(&eval_element(&parse_expr(b)?, &k)?, common.n)?;
            let s = x.add(&y)?;
            let mut report = Report::new("dwitt add", common.seed);
            report.push(CheckResult::info(
                "sum",
                json!({
                    "minus": format!("{}", s.w_minus),
                    "plus": format!("{}", s.w_plus),
                    "deg": s.deg,
                    "unit": format!("{}", s.unit),
                }),
            ));
            Ok(report)
        }
        DwittOp::Project {
            a,
            component,
            common,
        } => {
            let k = parse_field(&common.field)?;
            let d = double_teichmuller(&eval_element(&parse_expr(a)?, &k)?, common.n)?;
            let mut report = Report::new("dwitt project", common.seed);
            let detail = match component.as_str() {
                "w" => json!({"projection": format!("{}", dwitt_project_w(&d))}),
                "gm" => json!({"projection": format!("{}", dwitt_project_gm(&d))}),
                other => return Err(Error::Invalid(format!("unknown component {other}"))),
            };
            report.push(CheckResult::info("projection", detail));
            Ok(report)
        }
    }
}

/// The full battery: Witt algebra, class maps, Steinberg suites, residues,
/// reciprocity on generated data, homotopy families, and the Milnor oracle,
/// sized for an interactive run.
fn verify_all(common: &CommonOpts) -> Result<Report, Error> {
    use wittlab::sample::{random_element, rng_for};
    let seed = common.seed;
    let mut report = Report::new(
        &format!(
            "verify-all --seed {seed} --field {} --samples {}",
            common.field, common.samples
        ),
        seed,
    );
    let samples = common.samples.max(10);

    // Witt round trips over the requested field
    let k = parse_field(&common.field)?;
    let mut ok = true;
    for i in 0..samples.min(200) {
        let mut rng = rng_for(seed, "verify/witt", i as u64);
        let values: Vec<_> = (0..4).map(|_| random_element(&k, &mut rng, false)).collect();
        let c = WittCoords {
            ring: k.clone(),
            values,
        };
        let w = witt_compose(&c);
        if witt_decompose(&w) != c {
            ok = false;
            break;
        }
    }
    report.push(if ok {
        CheckResult::pass("witt-roundtrip", json!({"samples": samples.min(200)}))
    } else {
        CheckResult::fail("witt-roundtrip", json!({}), "wittlab verify-all")
    });

    // class maps are homomorphisms
    let mut ok = true;
    for i in 0..samples.min(100) {
        let mut rng = rng_for(seed, "verify/picard", i as u64);
        let f = wittlab::sample::random_unipoly(&k, &mut rng, 2, false);
        let g = wittlab::sample::random_unipoly(&k, &mut rng, 2, false);
        if f.coeff(0).is_zero() || g.coeff(0).is_zero() {
            continue;
        }
        let fg = f.mul(&g);
        let lhs = picard_to_witt(&fg, common.n)?;
        let rhs = witt_add(&picard_to_witt(&f, common.n)?, &picard_to_witt(&g, common.n)?)?;
        if lhs != rhs {
            ok = false;
            break;
        }
        if picard_to_gm(&fg)? != picard_to_gm(&f)?.mul(&picard_to_gm(&g)?) {
            ok = false;
            break;
        }
    }
    report.push(if ok {
        CheckResult::pass("picard-homomorphism", json!({"samples": samples.min(100)}))
    } else {
        CheckResult::fail("picard-homomorphism", json!({}), "wittlab verify-all")
    });

    // Steinberg battery over two-variable fields
    let k2 = with_vars(&common.field, 2)?;
    for (phi, rel) in [
        (make_differential_symbol(2), RelationId::St1),
        (make_extended_differential_symbol(1), RelationId::St2),
        (make_extended_differential_symbol(1), RelationId::St2Prime),
        (make_infinitesimal_symbol(), RelationId::St3),
    ] {
        let r = check_steinberg(&phi, rel, &k2, samples.min(150), seed)?;
        let name = format!("steinberg/{}/{:?}", r.symbol, r.relation);
        let detail = serde_json::to_value(&r).unwrap();
        report.push(if r.passed() {
            CheckResult::pass(&name, detail)
        } else {
            CheckResult::fail(&name, detail, "wittlab verify-all")
        });
    }
    // the negative control must fail
    let broken = check_steinberg(&make_broken_symbol(), RelationId::St2, &k2, 40, seed)?;
    report.push(if !broken.passed() {
        CheckResult::pass(
            "steinberg/negative-control",
            json!({"witness": broken.failures.first()}),
        )
    } else {
        CheckResult::fail("steinberg/negative-control", json!({}), "wittlab verify-all")
    });

    // derived constructions: merged additive slots and the diagonal
    {
        let ext = make_extended_differential_symbol(1);
        let phi_a = derive_phi_a(&ext)?;
        let phi_b = derive_phi_b(&ext)?;
        let mut ok = true;
        for i in 0..samples.min(100) {
            let mut rng = rng_for(seed, "verify/derived", i as u64);
            let x = random_element(&k2, &mut rng, true);
            let y = random_element(&k2, &mut rng, true);
            let b = wittlab::sample::random_nonzero(&k2, &mut rng, true);
            if phi_a.eval(&k2, &[x.clone(), y.clone()], &[b.clone()])?
                != ext.eval(&k2, &[x.mul(&y)], &[b.clone()])?
            {
                ok = false;
                break;
            }
            let bv = phi_b.eval(&k2, &[], &b, &[])?;
            let db = wittlab::differential::exterior_d(&b)?;
            if bv != wittlab::symbol::SymbolValue::Form(db) {
                ok = false;
                break;
            }
        }
        report.push(if ok {
            CheckResult::pass("derived-constructions", json!({"samples": samples.min(100)}))
        } else {
            CheckResult::fail("derived-constructions", json!({}), "wittlab verify-all")
        });
    }

    // residue theorem on random forms: one constant-field variable, with the
    // curve coordinate kept separate
    {
        let kc = constant_field_for_curve(&common.field)?;
        let mut ok = true;
        let mut count = 0;
        for i in 0..samples.min(60) {
            let mut rng = rng_for(seed, "verify/residue", i as u64);
            if let Some((omega, places)) = random_residue_instance(&kc, &mut rng) {
                let total = wittlab::local::residue_sum(&kc, &omega, "t", &places, seed)?;
                if !total.is_zero() {
                    ok = false;
                    break;
                }
                count += 1;
            }
        }
        report.push(if ok {
            CheckResult::pass("residue-theorem", json!({"instances": count}))
        } else {
            CheckResult::fail("residue-theorem", json!({}), "wittlab verify-all")
        });
    }

    // reciprocity on generated data
    {
        let kc = constant_field_for_curve(&common.field)?;
        let data = generate_valid_data(&kc, 1, 1, samples.min(10), seed);
        let phi = make_extended_differential_symbol(1);
        let mut ok = true;
        for d in &data {
            let res = check_reciprocity(d, &phi, seed)?;
            if !res.definitional.is_zero()
                || !res.residue_route.restricted.is_zero()
                || !res.residue_route.full.is_zero()
            {
                ok = false;
                break;
            }
        }
        report.push(if ok {
            CheckResult::pass("weil-reciprocity", json!({"data": data.len()}))
        } else {
            CheckResult::fail("weil-reciprocity", json!({}), "wittlab verify-all")
        });
    }

    // homotopy families
    {
        let k5 = parse_field("Fp(5)")?;
        let t3 = eval_bipoly(&parse_expr("T^3 - S")?, &k5, "S", "T")?;
        let h = HomotopyDatum::new(k5.clone(), t3.coeffs, HomotopyTarget::WnPlus(2))?;
        let v = admissibility_newton(&h);
        let b = cube_boundary_compare(&h)?;
        let ok = v.verdict == wittlab::homotopy::Verdict::Admissible && b.equal();
        report.push(if ok {
            CheckResult::pass(
                "homotopy-power-family",
                json!({"verdict": "admissible", "equal": true}),
            )
        } else {
            CheckResult::fail("homotopy-power-family", json!({}), "wittlab verify-all")
        });
    }

    // Milnor oracle at q = 5
    {
        let g1 = milnor_group(5, 1)?;
        let g2 = milnor_group(5, 2)?;
        let ok = g1.order() == Some(4.into()) && g2.is_trivial();
        report.push(if ok {
            CheckResult::pass(
                "milnor-oracle",
                json!({"k1_order": "4", "k2_trivial": true}),
            )
        } else {
            CheckResult::fail("milnor-oracle", json!({}), "wittlab verify-all")
        });
    }

    // representative residue values stay pinned
    {
        let (kq, _) = curve_setup("Q", "t")?;
        let big = parse_field("Q(t)")?;
        let t = big.var("t").unwrap();
        let omega = dlog(&t)?;
        let zero_pl = Place::finite(UniPoly::var(kq.clone()));
        let r0 = residue(&kq, &omega, "t", &zero_pl, seed)?;
        let rinf = residue(&kq, &omega, "t", &Place::Infinity, seed)?;
        let ok = r0.coeff(&[]) == kq.one() && rinf.coeff(&[]) == kq.from_i64(-1);
        report.push(if ok {
            CheckResult::pass("residue-normalization", json!({"at0": "1", "atinf": "-1"}))
        } else {
            CheckResult::fail("residue-normalization", json!({}), "wittlab verify-all")
        });
    }

    Ok(report)
}

/// One transcendental variable for the constant field of curve checks, with
/// "t" reserved for the curve coordinate.
fn constant_field_for_curve(spec: &str) -> Result<Fld, Error> {
    let k = parse_field(spec)?;
    let ground = k.ground();
    if ground.var_index("t").is_some() {
        let vars: Vec<&str> = ground
            .vars
            .iter()
            .filter(|v| v.as_str() != "t")
            .map(|v| v.as_str())
            .collect();
        if !vars.is_empty() {
            return Ok(Fld::Fun(wittlab::field::FunctionField::new(
                ground.base,
                &vars,
            )));
        }
        return with_vars(&format!("{}", ground.base), 1);
    }
    if ground.nvars() >= 1 {
        return Ok(k);
    }
    with_vars(spec, 1)
}

/// A random rational 1-form g dt with known places, for totality checks.
fn random_residue_instance(
    k: &Fld,
    rng: &mut wittlab::sample::ChaCha8Rng,
) -> Option<(wittlab::differential::DifferentialForm, Vec<Place>)> {
    use wittlab::sample::random_unipoly;
    let mut den = UniPoly::one(k.clone());
    let mut places = vec![Place::Infinity];
    for _ in 0..2 {
        let lin = random_unipoly(k, rng, 1, true);
        if den.multiplicity_of(&lin) == 0 {
            den = den.mul(&lin);
            places.push(Place::finite(lin));
        }
    }
    let num = random_unipoly(k, rng, 2, false);
    if num.is_zero() {
        return None;
    }
    let g = wittlab::unipoly::RatT::new(num, den);
    let mut vars: Vec<&str> = k.ground().vars.iter().map(|v| v.as_str()).collect();
    vars.push("t");
    let big = Fld::Fun(wittlab::field::FunctionField::new(k.base(), &vars));
    let g_big = wittlab::unipoly::join_rat(&big, "t", &g);
    let t = big.var("t").unwrap();
    let omega = wittlab::differential::exterior_d(&t).ok()?.scale(&g_big);
    Some((omega, places))
}
