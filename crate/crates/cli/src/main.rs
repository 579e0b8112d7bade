//! Command-line front end: expression/matrix/word parsing for every
//! context, subcommands wrapping the library operations, and deterministic
//! JSON output (exact rational strings, never floats).

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use vahlen_core::element::{Context, Element};
use vahlen_core::matrix::Mat2;
use vahlen_core::parse;
use vahlen_core::presentations::{self, BuiltinKind, Partition};
use vahlen_core::rings::{ContextKind, Ge2Classification};
use vahlen_core::words::{self, RelationFamily};
use vahlen_core::Error;

#[derive(Parser)]
#[command(name = "vahlen", version, about = "Exact arithmetic for higher modular groups")]
struct Cli {
    /// Emit compact single-line JSON (default is pretty-printed JSON).
    #[arg(long, global = true)]
    json: bool,

    /// Seed for all randomized verification suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PayloadArg {
    /// Inline payload (element expression, matrix JSON, or word, depending
    /// on the subcommand).
    payload: Option<String>,

    /// Read the payload from a file instead.
    #[arg(long)]
    file: Option<String>,
}

impl PayloadArg {
    fn get(&self) -> Result<String, Error> {
        match (&self.payload, &self.file) {
            (Some(p), None) => Ok(p.clone()),
            (None, Some(f)) => std::fs::read_to_string(f).map_err(|e| Error::Parse {
                offset: 0,
                message: format!("cannot read {f}: {e}"),
            }),
            (Some(_), Some(_)) => Err(Error::Parse {
                offset: 0,
                message: "give the payload inline or via --file, not both".into(),
            }),
            (None, None) => Err(Error::Parse {
                offset: 0,
                message: "missing payload (inline argument or --file)".into(),
            }),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an element expression (or a generator word with --word).
    Eval {
        #[arg(long)]
        ctx: String,
        /// Treat the payload as a generator word and return its matrix.
        #[arg(long)]
        word: bool,
        #[command(flatten)]
        payload: PayloadArg,
    },
    /// Multiply two matrices (payload: JSON array [A, B]).
    Matmul {
        #[command(flatten)]
        payload: PayloadArg,
    },
    /// Invert a matrix (payload: matrix JSON).
    Matinv {
        #[command(flatten)]
        payload: PayloadArg,
    },
    /// Membership tests: gamma (element), gl / slplus (matrix).
    Member {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        integral: bool,
        #[arg(long)]
        ctx: Option<String>,
        #[command(flatten)]
        payload: PayloadArg,
    },
    /// Euclidean decomposition of a matrix into a generator word.
    Decompose {
        #[arg(long)]
        ctx: Option<String>,
        #[command(flatten)]
        payload: PayloadArg,
    },
    /// Verify every relator of a builtin presentation in its matrix model.
    Verify {
        #[arg(long)]
        presentation: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Check the relation families as matrix identities over a context.
    Relations {
        #[arg(long)]
        ctx: String,
        /// One of R1, R2, R3, R4, R5, alpha, eq29 (default: all).
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 400)]
        budget: usize,
    },
    /// Abelianization of a builtin presentation via Smith normal form.
    Abelianize {
        #[arg(long)]
        presentation: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Split a builtin presentation as an amalgam along a partition.
    Split {
        #[arg(long)]
        presentation: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// JSON {"a": [...], "b": [...], "c": [...]} (default: the built-in
        /// nesting partition).
        #[arg(long)]
        partition: Option<String>,
    },
    /// Discrete-norm test and GE2 classification of an order.
    ClassifyOrder {
        #[arg(long)]
        ctx: String,
    },
    /// Enumerate the unit group of gamma:n with its fingerprint.
    Units {
        #[arg(long)]
        n: u32,
    },
    /// Reproduce the order-O5 relation and its failing image in O2.
    CounterexampleO5,
    /// Check generator images for relator preservation.
    CheckHom {
        /// JSON spec: {"presentation": "gens:...\nrel:...", "images":
        /// {name: matrix-json or {"word": ..., "ctx": ...}}}.
        #[arg(long)]
        spec: Option<String>,
        #[arg(long)]
        file: Option<String>,
        /// Built-in checks: phi-zsqrt3-i11, n3quat, n3quat-inverse.
        #[arg(long)]
        builtin: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let compact = cli.json;
    match run(&cli) {
        Ok(value) => {
            emit(&value, compact);
            ExitCode::SUCCESS
        }
        Err(e) => {
            let (kind, offset) = match &e {
                Error::Parse { offset, .. } => ("parse", Some(*offset)),
                _ => ("domain", None),
            };
            let value = json!({
                "error": {
                    "kind": kind,
                    "message": e.to_string(),
                    "offset": offset,
                }
            });
            emit(&value, compact);
            if kind == "parse" {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}

fn emit(value: &Value, compact: bool) {
    if compact {
        println!("{value}");
    } else {
        println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
    }
}

fn context(name: &str) -> Result<Context, Error> {
    Context::new(parse::parse_context(name)?)
}

fn element_json(e: &Element, ctx: &Context) -> Value {
    match e {
        Element::Cliff(c) => {
            let terms: Vec<Value> = c
                .terms()
                .map(|(b, coeff)| {
                    json!({
                        "blade": b.indices(),
                        "coeff": vahlen_core::rat::format_rat(coeff),
                    })
                })
                .collect();
            json!({
                "n": c.dimension(),
                "terms": terms,
                "str": e.to_string(),
            })
        }
        Element::Ring(r) => {
            let ambient: Vec<String> =
                r.ambient_coords().iter().map(vahlen_core::rat::format_rat).collect();
            json!({
                "ctx": r.kind().name(),
                "ambient": ambient,
                "integral": e.is_integral(ctx),
                "str": e.to_string(),
            })
        }
    }
}

fn matrix_json(m: &Mat2) -> Value {
    json!({
        "ctx": m.kind().name(),
        "rows": [
            [m.a().to_string(), m.b().to_string()],
            [m.c().to_string(), m.d().to_string()],
        ],
    })
}

fn parse_matrix(v: &Value) -> Result<(Context, Mat2), Error> {
    let bad = |msg: &str| Error::Parse { offset: 0, message: msg.to_string() };
    let ctx_name = v
        .get("ctx")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("matrix JSON needs a \"ctx\" field"))?;
    let ctx = context(ctx_name)?;
    let rows = v
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("matrix JSON needs a \"rows\" field"))?;
    if rows.len() != 2 {
        return Err(bad("matrix JSON needs exactly two rows"));
    }
    let mut entries = Vec::with_capacity(4);
    for row in rows {
        let cols = row.as_array().ok_or_else(|| bad("rows must be arrays"))?;
        if cols.len() != 2 {
            return Err(bad("each row needs exactly two entries"));
        }
        for c in cols {
            let text = c.as_str().ok_or_else(|| bad("entries must be expression strings"))?;
            entries.push(parse::parse_element(text, &ctx)?);
        }
    }
    let m = Mat2::new(
        ctx.kind(),
        entries[0].clone(),
        entries[1].clone(),
        entries[2].clone(),
        entries[3].clone(),
    )?;
    Ok((ctx, m))
}

fn parse_matrix_text(text: &str) -> Result<(Context, Mat2), Error> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        offset: e.column().saturating_sub(1),
        message: format!("invalid JSON: {e}"),
    })?;
    parse_matrix(&v)
}

fn presentation_json(p: &presentations::Presentation) -> Value {
    let rels: Vec<String> = p.relators.iter().map(|r| p.display_relator(r)).collect();
    json!({ "gens": p.generators, "rels": rels })
}

fn run(cli: &Cli) -> Result<Value, Error> {
    match &cli.command {
        Command::Eval { ctx, word, payload } => {
            let ctx = context(ctx)?;
            let text = payload.get()?;
            if *word {
                let w = parse::parse_word(&text, &ctx)?;
                let m = w.eval(&ctx)?;
                Ok(json!({ "word": w.to_string(), "matrix": matrix_json(&m) }))
            } else {
                let e = parse::parse_element(&text, &ctx)?;
                Ok(json!({ "element": element_json(&e, &ctx) }))
            }
        }
        Command::Matmul { payload } => {
            let text = payload.get()?;
            let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
                offset: e.column().saturating_sub(1),
                message: format!("invalid JSON: {e}"),
            })?;
            let arr = v.as_array().filter(|a| a.len() == 2).ok_or(Error::Parse {
                offset: 0,
                message: "matmul expects a JSON array [A, B]".into(),
            })?;
            let (_, a) = parse_matrix(&arr[0])?;
            let (_, b) = parse_matrix(&arr[1])?;
            let m = a.mul(&b)?;
            Ok(json!({ "matrix": matrix_json(&m) }))
        }
        Command::Matinv { payload } => {
            let (_, m) = parse_matrix_text(&payload.get()?)?;
            let inv = m.inverse()?;
            Ok(json!({ "matrix": matrix_json(&inv) }))
        }
        Command::Member { kind, integral, ctx, payload } => {
            let text = payload.get()?;
            match kind.as_str() {
                "gamma" => {
                    let ctx_name = ctx.as_ref().ok_or(Error::Parse {
                        offset: 0,
                        message: "--kind gamma needs --ctx gamma:<n>".into(),
                    })?;
                    let ctx = context(ctx_name)?;
                    let e = parse::parse_element(&text, &ctx)?;
                    let member = e.cliff()?.gamma_member(*integral);
                    Ok(json!({
                        "kind": "gamma",
                        "integral": integral,
                        "member": member,
                        "element": element_json(&e, &ctx),
                    }))
                }
                "gl" | "slplus" => {
                    let (ctx, m) = parse_matrix_text(&text)?;
                    let member = match (kind.as_str(), ctx.kind()) {
                        ("gl", ContextKind::Clifford { .. }) => m.gl_membership(*integral)?,
                        ("slplus", ContextKind::Clifford { .. }) => {
                            m.slplus_membership(*integral)?
                        }
                        ("gl", _) => m.gl2_membership(&ctx)?,
                        (_, _) => m.sl2_membership(&ctx)?,
                    };
                    Ok(json!({
                        "kind": kind,
                        "integral": integral,
                        "member": member,
                        "matrix": matrix_json(&m),
                    }))
                }
                other => Err(Error::Parse {
                    offset: 0,
                    message: format!("unknown membership kind `{other}` (gamma|gl|slplus)"),
                }),
            }
        }
        Command::Decompose { ctx, payload } => {
            let (mctx, m) = parse_matrix_text(&payload.get()?)?;
            if let Some(name) = ctx {
                let want = parse::parse_context(name)?;
                if want != mctx.kind() {
                    return Err(Error::ContextMismatch(want.name(), mctx.kind().name()));
                }
            }
            let w = words::decompose(&m, &mctx)?;
            let check = w.eval(&mctx)? == m;
            Ok(json!({
                "ctx": mctx.kind().name(),
                "word": w.to_string(),
                "tokens": w.len(),
                "verified": check,
            }))
        }
        Command::Verify { presentation, n } => {
            let p = presentations::builtin(BuiltinKind::parse(presentation)?, *n)?;
            let report = presentations::verify_presentation(&p)?;
            let failures: Vec<Value> = report
                .failures
                .iter()
                .map(|(i, w)| json!({ "index": i, "relator": w }))
                .collect();
            Ok(json!({
                "pass": report.pass(),
                "relators_checked": report.relators_checked,
                "failures": failures,
            }))
        }
        Command::Relations { ctx, family, budget } => {
            let ctx = context(ctx)?;
            let families: Vec<RelationFamily> = match family {
                None => RelationFamily::ALL.to_vec(),
                Some(name) => vec![RelationFamily::parse(name).ok_or_else(|| Error::Parse {
                    offset: 0,
                    message: format!("unknown family `{name}`"),
                })?],
            };
            let report = words::verify_relation_families(&ctx, &families, *budget, cli.seed)?;
            let fams: Vec<Value> = report
                .families
                .iter()
                .map(|f| {
                    json!({
                        "family": f.family.name(),
                        "checked": f.checked,
                        "pass": f.pass(),
                        "counterexample": f.counterexample,
                    })
                })
                .collect();
            Ok(json!({
                "ctx": report.context.name(),
                "pass": report.pass(),
                "families": fams,
            }))
        }
        Command::Abelianize { presentation, n } => {
            let p = presentations::builtin(BuiltinKind::parse(presentation)?, *n)?;
            let ab = presentations::abelianization(&p);
            let torsion: Vec<Value> = ab.torsion.iter().map(int_json).collect();
            Ok(json!({
                "torsion": torsion,
                "rank": ab.free_rank,
                "group": ab.to_string(),
            }))
        }
        Command::Split { presentation, n, partition } => {
            let p = presentations::builtin(BuiltinKind::parse(presentation)?, *n)?;
            let part = match partition {
                Some(text) => {
                    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
                        offset: e.column().saturating_sub(1),
                        message: format!("invalid partition JSON: {e}"),
                    })?;
                    let names = |key: &str| -> Result<Vec<String>, Error> {
                        v.get(key)
                            .and_then(Value::as_array)
                            .map(|a| {
                                a.iter()
                                    .filter_map(Value::as_str)
                                    .map(str::to_string)
                                    .collect()
                            })
                            .ok_or(Error::Parse {
                                offset: 0,
                                message: format!("partition JSON needs array \"{key}\""),
                            })
                    };
                    Partition { a: names("a")?, b: names("b")?, c: names("c")? }
                }
                None => presentations::lemma54_partition(*n),
            };
            let split = presentations::amalgam_split(&p, &part)?;
            let c_matches = if *n >= 2 {
                let expected = presentations::builtin(BuiltinKind::Lemma54, n - 1)?;
                Some(presentations::structurally_equal(&split.amalgamated_c, &expected))
            } else {
                None
            };
            let ac_ok = presentations::verify_presentation(&split.factor_ac)?.pass();
            let bc_ok = presentations::verify_presentation(&split.factor_bc)?.pass();
            let (wa, wb) = presentations::abelian_witness_sides(&p, &split)?;
            Ok(json!({
                "factor_ac": presentation_json(&split.factor_ac),
                "factor_bc": presentation_json(&split.factor_bc),
                "amalgamated_c": presentation_json(&split.amalgamated_c),
                "c_matches_previous": c_matches,
                "factors_verify": ac_ok && bc_ok,
                "abelian_witness": { "a_side": wa, "b_side": wb },
            }))
        }
        Command::ClassifyOrder { ctx } => {
            let ctx = context(ctx)?;
            let ring = ctx.ring()?;
            let dn = ring.discretely_normed()?;
            let classification = match ring.ge2_classification() {
                Ok(Ge2Classification::Ge2Ring) => Some("GE2Ring"),
                Ok(Ge2Classification::NotGe2Ring) => Some("NotGE2Ring"),
                Err(_) => None,
            };
            // the equivalence: discretely normed <=> Z or not a GE2-ring
            let consistent = classification.map(|c| {
                let is_z = ctx.kind() == ContextKind::Integers;
                dn == (is_z || c == "NotGE2Ring")
            });
            Ok(json!({
                "ctx": ctx.kind().name(),
                "discretely_normed": dn,
                "classification": classification,
                "consistent": consistent,
            }))
        }
        Command::Units { n } => {
            let (units, fp) = vahlen_core::units::enumerate_units(*n)?;
            let names: Vec<String> = units.iter().map(|u| u.to_string()).collect();
            let invariants: Vec<Value> = fp.abelian_invariants.iter().map(int_json).collect();
            Ok(json!({
                "n": n,
                "order": fp.order,
                "exponent": fp.exponent,
                "center_order": fp.center_order,
                "abelian_invariants": invariants,
                "units": names,
            }))
        }
        Command::CounterexampleO5 => {
            let report = words::o5_counterexample()?;
            Ok(json!({
                "relation_holds_in_O5": report.relation_holds_in_o5,
                "image_holds_in_O2": report.image_holds_in_o2,
                "image_witness": report.image_witness,
            }))
        }
        Command::CheckHom { spec, file, builtin } => {
            if let Some(name) = builtin {
                return check_hom_builtin(name);
            }
            let text = match (spec, file) {
                (Some(s), None) => s.clone(),
                (None, Some(f)) => std::fs::read_to_string(f).map_err(|e| Error::Parse {
                    offset: 0,
                    message: format!("cannot read {f}: {e}"),
                })?,
                _ => {
                    return Err(Error::Parse {
                        offset: 0,
                        message: "check-hom needs --spec, --file, or --builtin".into(),
                    })
                }
            };
            let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
                offset: e.column().saturating_sub(1),
                message: format!("invalid JSON: {e}"),
            })?;
            let pres_text = v
                .get("presentation")
                .and_then(Value::as_str)
                .ok_or(Error::Parse {
                    offset: 0,
                    message: "spec needs a \"presentation\" text field".into(),
                })?;
            let p = parse::parse_presentation(pres_text)?;
            let images_json = v.get("images").and_then(Value::as_object).ok_or(Error::Parse {
                offset: 0,
                message: "spec needs an \"images\" object".into(),
            })?;
            let mut images = BTreeMap::new();
            for (name, m) in images_json {
                if let Some(word) = m.get("word").and_then(Value::as_str) {
                    let ctx_name = m.get("ctx").and_then(Value::as_str).ok_or(Error::Parse {
                        offset: 0,
                        message: "word image needs a \"ctx\" field".into(),
                    })?;
                    let ctx = context(ctx_name)?;
                    let w = parse::parse_word(word, &ctx)?;
                    images.insert(name.clone(), w.eval(&ctx)?);
                } else {
                    let (_, mat) = parse_matrix(m)?;
                    images.insert(name.clone(), mat);
                }
            }
            let report = presentations::check_hom(&p, &images)?;
            Ok(hom_report_json(&report))
        }
    }
}

/// Invariant factors fit comfortably in u64 here; fall back to the exact
/// decimal string if one ever does not.
fn int_json(d: &vahlen_core::rat::Int) -> Value {
    match u64::try_from(d.clone()) {
        Ok(v) => json!(v),
        Err(_) => json!(d.to_string()),
    }
}

fn hom_report_json(report: &presentations::HomReport) -> Value {
    json!({
        "pass": report.pass(),
        "relators_checked": report.relators_checked,
        "first_failure": report.first_failure.as_ref().map(|(rel, img)| {
            json!({ "relator": rel, "image": img })
        }),
    })
}

fn check_hom_builtin(name: &str) -> Result<Value, Error> {
    match name {
        "phi-zsqrt3-i11" => {
            let src = Context::new(ContextKind::Quadratic { d: 3, maximal: false })?;
            let e2 = presentations::e2_presentation(&src)?;
            let images = presentations::phi_hom_images(&e2)?;
            let report = presentations::check_hom(&e2.presentation, &images)?;
            Ok(hom_report_json(&report))
        }
        "n3quat" => {
            let src = Context::new(ContextKind::Clifford { n: 4 })?;
            let e2 = presentations::e2_presentation(&src)?;
            let target = Context::new(ContextKind::Lipschitz)?;
            let images =
                presentations::map_e2_images(&e2, &target, presentations::vector_to_lipschitz)?;
            let report = presentations::check_hom(&e2.presentation, &images)?;
            Ok(hom_report_json(&report))
        }
        "n3quat-inverse" => {
            let src = Context::new(ContextKind::Lipschitz)?;
            let e2 = presentations::e2_presentation(&src)?;
            let target = Context::new(ContextKind::Clifford { n: 4 })?;
            let images =
                presentations::map_e2_images(&e2, &target, presentations::lipschitz_to_vector)?;
            let report = presentations::check_hom(&e2.presentation, &images)?;
            Ok(hom_report_json(&report))
        }
        other => Err(Error::Parse {
            offset: 0,
            message: format!("unknown builtin `{other}` (phi-zsqrt3-i11|n3quat|n3quat-inverse)"),
        }),
    }
}
