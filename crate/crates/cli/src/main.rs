//! `hyperdr`: JSON reports on hyperelliptic curves over finite fields.
//!
//! Every command prints a single JSON document on stdout. Exit codes: 0 ok,
//! 1 invalid curve or input, 2 series precision overflow, 3 unsupported
//! feature.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hyperdr::cech::{
    self, char_two_order_budget, dr_basis, h0_basis, h1_representative, pairing_matrix,
    refine_sextuple, sextuple_validate, triple_validate, H1Class,
};
use hyperdr::codec::{self, CurveSpec};
use hyperdr::coordring::Automorphism;
use hyperdr::curve::CurveModel;
use hyperdr::equivariant::{
    action_dr, action_h0, action_h1, c_coefficients, family_scan, predicted_last_c,
    random_family_polys, splitting_decide, SplitResult, Verdict,
};
use hyperdr::gfield::make_field;
use hyperdr::places::Base;
use hyperdr::polylab::Poly;
use hyperdr::Error;

#[derive(Parser)]
#[command(
    name = "hyperdr",
    version,
    about = "De-Rham cohomology of hyperelliptic curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CurveArg {
    /// Curve spec JSON file.
    #[arg(long)]
    curve: PathBuf,
}

#[derive(Args)]
struct AutoArg {
    /// `sigma` or `tau:a=<element>[,eps=+1|-1]`.
    #[arg(long = "auto")]
    automorphism: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    H0,
    H1,
    Dr,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a curve spec and describe the places above infinity.
    Validate(CurveArg),
    /// Genus from the degree formula and from the Riemann-Hurwitz count.
    Genus(CurveArg),
    /// A basis of H^0(Omega), H^1(O) or H^1_dR.
    Basis {
        space: Space,
        #[command(flatten)]
        curve: CurveArg,
    },
    /// Matrix of an automorphism on one of the three spaces.
    ActionMatrix {
        space: Space,
        #[command(flatten)]
        curve: CurveArg,
        #[command(flatten)]
        auto: AutoArg,
    },
    /// Decide whether the Hodge-de-Rham sequence splits equivariantly.
    Split {
        #[command(flatten)]
        curve: CurveArg,
        #[command(flatten)]
        auto: AutoArg,
    },
    /// The lambda part of tau^* gamma_g for the translation by `a`.
    CCoeffs {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long, default_value = "1")]
        a: String,
    },
    /// Validate every de-Rham basis triple.
    Verify(CurveArg),
    /// The Serre pairing between H^0(Omega) and H^1(O).
    Pairing(CurveArg),
    /// The refined cocycle on the cover {U_0, U_a, U_inf} lifting gamma_i.
    Sextuple {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long)]
        a: String,
        #[arg(long)]
        i: usize,
    },
    /// Change of model.
    Transform {
        #[command(subcommand)]
        kind: Transform,
    },
    /// Splitting test on the family y^2 = q(x^p - a^{p-1} x).
    Scan(ScanArgs),
}

#[derive(Subcommand)]
enum Transform {
    /// Replace x by x + a.
    Shift {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
    /// Replace x by 1/x.
    Reciprocal(CurveArg),
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    p: u32,
    /// Degree of the random q.
    #[arg(long, requires = "count", conflicts_with = "q")]
    qdeg: Option<usize>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Explicit q as ascending coefficients, e.g. `1,2,0,1`; repeatable.
    #[arg(long)]
    q: Vec<String>,
    #[arg(long, default_value = "1")]
    a: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("usage error").to_string();
            print_json(&json!({ "error": first, "kind": "Usage" }));
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(v) => {
            print_json(&v);
            ExitCode::SUCCESS
        }
        Err(e) => {
            print_json(&json!({ "error": e.to_string(), "kind": kind_name(&e) }));
            ExitCode::from(exit_code(&e))
        }
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("json"));
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::PrecisionOverflow { .. } => 2,
        Error::CharTwoUnsupported => 3,
        _ => 1,
    }
}

fn kind_name(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or_default()
        .to_string()
}

fn load(path: &Path) -> Result<CurveModel, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    CurveSpec::from_json(&text)?.to_curve()
}

fn parse_auto(c: &CurveModel, text: &str) -> Result<Automorphism, Error> {
    let text = text.trim();
    if text == "sigma" {
        return Ok(Automorphism::involution());
    }
    let body = text
        .strip_prefix("tau:")
        .ok_or_else(|| Error::Invalid(format!("unknown automorphism {text:?}")))?;
    let (a_part, eps) = match body.rsplit_once(",eps=") {
        Some((a, e)) => {
            let eps = match e.trim() {
                "+1" | "1" => 1,
                "-1" => -1,
                other => return Err(Error::Invalid(format!("bad sign {other:?}"))),
            };
            (a, eps)
        }
        None => (body, 1),
    };
    let a = a_part
        .strip_prefix("a=")
        .ok_or_else(|| Error::Invalid(format!("expected a=<element> in {text:?}")))?;
    Automorphism::translation(c, codec::parse_fe(c.field(), a)?, eps)
}

fn run(cmd: Command) -> Result<Value, Error> {
    match cmd {
        Command::Validate(curve) => {
            let c = load(&curve.curve)?;
            let places = c
                .places_over(Base::Infinity)?
                .iter()
                .map(codec::encode_place)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(json!({
                "valid": true,
                "field": codec::encode_field(c.field()),
                "g": c.g(),
                "infinity": if c.infinity_branch() { "ramified" } else { "unramified" },
                "places_at_infinity": places,
            }))
        }
        Command::Genus(curve) => {
            let c = load(&curve.curve)?;
            Ok(json!({ "g": c.g(), "oracle": c.genus_oracle()? }))
        }
        Command::Basis { space, curve } => {
            let c = load(&curve.curve)?;
            basis(&c, space)
        }
        Command::ActionMatrix { space, curve, auto } => {
            let c = load(&curve.curve)?;
            let t = parse_auto(&c, &auto.automorphism)?;
            Ok(match space {
                Space::H0 => codec::encode_matrix(&action_h0(&c, &t)?),
                Space::H1 => codec::encode_matrix(&action_h1(&c, &t)?),
                Space::Dr => {
                    let m = action_dr(&c, &t)?;
                    json!({
                        "A": codec::encode_matrix(&m.a),
                        "B": codec::encode_matrix(&m.b),
                        "C": codec::encode_matrix(&m.c),
                        "M": codec::encode_matrix(&m.m),
                    })
                }
            })
        }
        Command::Split { curve, auto } => {
            let c = load(&curve.curve)?;
            let t = parse_auto(&c, &auto.automorphism)?;
            Ok(match splitting_decide(&action_dr(&c, &t)?) {
                SplitResult::Splits { s } => {
                    json!({ "verdict": "splits", "S": codec::encode_matrix(&s) })
                }
                SplitResult::NoSplit { combination, value } => json!({
                    "verdict": "no_split",
                    "certificate": {
                        "combination": codec::encode_vec(&combination),
                        "value": codec::encode_fe(value),
                    },
                }),
            })
        }
        Command::CCoeffs { curve, a } => {
            let c = load(&curve.curve)?;
            let a = codec::parse_fe(c.field(), &a)?;
            let cs = c_coefficients(&c, a)?;
            Ok(json!({
                "c": codec::encode_vec(&cs),
                "c_last": codec::encode_fe(*cs.last().expect("g >= 2")),
                "predicted_last": predicted_last_c(&c, a).map(codec::encode_fe),
            }))
        }
        Command::Verify(curve) => {
            let c = load(&curve.curve)?;
            let g = c.g();
            let mut all = true;
            let mut triples = Vec::with_capacity(2 * g);
            for (n, t) in dr_basis(&c)?.iter().enumerate() {
                let name = if n < g {
                    format!("lambda{n}")
                } else {
                    format!("gamma{}", n - g + 1)
                };
                let r = triple_validate(t)?;
                all &= r.all_pass();
                triples.push(json!({ "name": name, "report": codec::encode_report(&r) }));
            }
            let mut out = json!({ "pass": all, "triples": triples });
            if c.is_char_two() {
                let budget = char_two_order_budget(&c)?;
                let ok = budget.iter().all(|b| b.consistent && b.total >= 0);
                out["pass"] = json!(all && ok);
                out["order_budget"] = budget.iter().map(codec::encode_budget).collect();
            }
            Ok(out)
        }
        Command::Pairing(curve) => {
            let c = load(&curve.curve)?;
            let rows = pairing_matrix(&c)?;
            let diagonal = rows
                .iter()
                .enumerate()
                .all(|(j, r)| r.iter().enumerate().all(|(i, v)| (i == j) != v.is_zero()));
            Ok(json!({
                "matrix": rows.iter().map(|r| codec::encode_vec(r)).collect::<Vec<_>>(),
                "diagonal": diagonal,
            }))
        }
        Command::Sextuple { curve, a, i } => {
            let c = load(&curve.curve)?;
            let a = codec::parse_fe(c.field(), &a)?;
            let s = refine_sextuple(&c, a, i)?;
            let r = sextuple_validate(&s)?;
            Ok(json!({
                "sextuple": codec::encode_sextuple(&s),
                "pass": r.all_pass(),
                "rho_is_gamma": cech::rho(&s) == cech::gamma(&c, i)?,
                "rho_prime": codec::encode_triple(&cech::rho_prime(&s)),
            }))
        }
        Command::Transform { kind } => {
            let out = match kind {
                Transform::Shift { curve, a } => {
                    let c = load(&curve.curve)?;
                    let a = codec::parse_fe(c.field(), &a)?;
                    c.transform_shift(a)?
                }
                Transform::Reciprocal(curve) => load(&curve.curve)?.transform_reciprocal()?,
            };
            serde_json::to_value(CurveSpec::from_curve(&out))
                .map_err(|e| Error::Invalid(e.to_string()))
        }
        Command::Scan(args) => scan(args),
    }
}

fn basis(c: &CurveModel, space: Space) -> Result<Value, Error> {
    let g = c.g();
    Ok(match space {
        Space::H0 => h0_basis(c).iter().map(codec::encode_diff).collect(),
        Space::H1 => (0..g)
            .map(|i| {
                let mut coords = vec![c.field().zero(); g];
                coords[i] = c.field().one();
                codec::encode_ring(&h1_representative(c, &H1Class { coords }))
            })
            .collect(),
        Space::Dr => {
            let b = dr_basis(c)?;
            json!({
                "lambda": b[..g].iter().map(codec::encode_triple).collect::<Vec<_>>(),
                "gamma": b[g..].iter().map(codec::encode_triple).collect::<Vec<_>>(),
            })
        }
    })
}

fn scan(args: ScanArgs) -> Result<Value, Error> {
    if args.p == 2 {
        return Err(Error::CharTwoUnsupported);
    }
    let k = make_field(args.p, 1)?;
    let a = codec::parse_fe(k, &args.a)?;
    if a.is_zero() {
        return Err(Error::ZeroShift);
    }
    let qs: Vec<Poly> = match (args.qdeg, args.count) {
        (Some(deg), Some(count)) => random_family_polys(args.p, deg, count, args.seed)?,
        _ if !args.q.is_empty() => args
            .q
            .iter()
            .map(|s| {
                let coeffs = s
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<i64>()
                            .map_err(|_| Error::Invalid(format!("bad coefficient {t:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Poly::from_ints(k, &coeffs))
            })
            .collect::<Result<_, Error>>()?,
        _ => {
            return Err(Error::Invalid(
                "scan needs --qdeg with --count, or --q".into(),
            ))
        }
    };
    let rows: Vec<Value> = family_scan(&qs, a)
        .iter()
        .map(|r| {
            json!({
                "q": codec::encode_poly(&r.q),
                "g": r.g,
                "c_last": r.c_last.map(codec::encode_fe),
                "verdict": r.verdict.as_ref().map(|v| match v {
                    Verdict::Splits => "splits",
                    Verdict::NoSplit => "no_split",
                }),
                "error": r.error.as_ref().map(kind_name),
            })
        })
        .collect();
    Ok(Value::Array(rows))
}
