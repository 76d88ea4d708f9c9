use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use coxcoh::buildings::{ChamberSystem, Family, FoldingChoice};
use coxcoh::complex::MirroredComplex;
use coxcoh::corpus;
use coxcoh::coxeter::{CoxeterMatrix, CoxeterSystem, GenSet, Side};
use coxcoh::equivariant::{self, Variant};
use coxcoh::error::Error;
use coxcoh::group_ring::{is_unitriangular, Truncation};
use coxcoh::hecke::{self, HeckeAlgebra};
use coxcoh::verify;

const REPORT_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "coxcoh", version, about = "Cohomology of Coxeter groups with group ring coefficients")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    /// homology
    H,
    /// compactly supported cohomology
    Hc,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::H => Variant::Homology,
            VariantArg::Hc => Variant::Cohomology,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List the spherical subsets of S.
    Spherical { file: PathBuf },
    /// Enumerate the ball of radius N with descent sets.
    Ball {
        file: PathBuf,
        #[arg(long)]
        radius: usize,
    },
    /// Print the Davis chamber K as a complex document.
    Chamber { file: PathBuf },
    /// Descent bases {b'_w} (left) or {b_w} (right) sliced by descent set.
    Basis {
        file: PathBuf,
        #[arg(long)]
        radius: usize,
        #[arg(long, value_enum, default_value = "left")]
        side: SideArg,
    },
    /// Action of one generator on a graded quotient A^T/A^{>T} or H^T/H^{>T}.
    GradedAction {
        file: PathBuf,
        #[arg(short = 'T', value_delimiter = ',', num_args = 0..)]
        t: Vec<String>,
        #[arg(short = 's')]
        generator: String,
        #[arg(long)]
        radius: usize,
        #[arg(long, value_enum, default_value = "left")]
        side: SideArg,
    },
    /// Direct (co)homology of U(W,X) against the assembled formula.
    Homology {
        file: PathBuf,
        /// Complex document for X; defaults to K.
        #[arg(long)]
        chamber: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        radius: usize,
        #[arg(long, value_enum, default_value = "h")]
        variant: VariantArg,
    },
    /// Graded pieces of the descent filtration.
    Graded {
        file: PathBuf,
        /// Filtration index; all of them when omitted.
        #[arg(short = 'p')]
        p: Option<usize>,
        #[arg(long)]
        chamber: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long, value_enum, default_value = "hc")]
        variant: VariantArg,
    },
    /// Worked examples.
    Demo {
        #[arg(value_parser = ["tripod"])]
        name: String,
        #[arg(long, default_value_t = 4)]
        radius: usize,
    },
    /// Right-angled buildings: bases of A^T and the geometric realization.
    Building {
        file: PathBuf,
        /// Thickness per generator, e.g. s=2,t=2 (q_s + 1 chambers per panel).
        #[arg(long)]
        thickness: String,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        /// Check B^T for this subset (comma separated, may be empty).
        #[arg(long)]
        basis: Option<String>,
        #[arg(long)]
        realize: Option<PathBuf>,
        /// lex, global, or a number seeding random local foldings.
        #[arg(long, default_value = "lex")]
        folding: String,
    },
    /// Hecke algebra checks and deformed graded pieces.
    Hecke {
        file: PathBuf,
        /// Parameters, e.g. s=2,t=1/2.
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long)]
        graded: Option<usize>,
        #[arg(long)]
        chamber: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "hc")]
        variant: VariantArg,
    },
    /// Run the acceptance suite on the built-in corpus.
    Verify {
        /// `all` or a criterion number.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value = "builtin")]
        corpus: String,
    },
}

enum Failure {
    Input(String),
    Invalid(Error),
    Verification(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Input(m),
            e => Failure::Invalid(e),
        }
    }
}

type Outcome = Result<Value, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_system(path: &Path) -> Result<CoxeterSystem, Failure> {
    let matrix = CoxeterMatrix::from_json(&read(path)?)?;
    let mut sys = CoxeterSystem::new(matrix)?;
    if let Ok(cap) = std::env::var("COXCOH_MAX_ELEMENTS") {
        let cap = cap.trim().parse().map_err(|_| Failure::Input(format!("COXCOH_MAX_ELEMENTS: `{cap}` is not a count")))?;
        sys = sys.with_max_elements(cap);
    }
    Ok(sys)
}

fn load_complex(sys: &CoxeterSystem, path: Option<&PathBuf>) -> Result<MirroredComplex, Failure> {
    match path {
        Some(p) => Ok(MirroredComplex::from_json(&read(p)?, sys.generators())?),
        None => Ok(corpus::chamber(sys)),
    }
}

fn names(sys: &CoxeterSystem, t: GenSet) -> Value {
    json!(sys.set_names(t))
}

/// Serialize a report, printing generator subsets as name lists.
fn report<T: Serialize>(sys: &CoxeterSystem, x: &T) -> Value {
    let mut v = serde_json::to_value(x).expect("reports serialize");
    rename_sets(sys, &mut v);
    v
}

fn rename_sets(sys: &CoxeterSystem, v: &mut Value) {
    match v {
        Value::Object(map) => {
            for (k, x) in map.iter_mut() {
                match (k.as_str(), x.as_u64()) {
                    ("t" | "u" | "mirrors", Some(bits)) => *x = names(sys, GenSet(bits)),
                    _ => rename_sets(sys, x),
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|x| rename_sets(sys, x)),
        _ => {}
    }
}

fn parse_subset(sys: &CoxeterSystem, text: &[String]) -> Result<GenSet, Failure> {
    let parts: Vec<&str> = text.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
    Ok(sys.parse_set(&parts)?)
}

fn parse_thickness(sys: &CoxeterSystem, text: &str) -> Result<Vec<u32>, Failure> {
    let mut q = vec![None; sys.rank()];
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part.split_once('=').ok_or_else(|| Failure::Input(format!("expected name=value, got `{part}`")))?;
        let s = sys.generator_index(name.trim())?;
        q[s as usize] = Some(value.trim().parse().map_err(|_| Failure::Input(format!("bad thickness `{value}`")))?);
    }
    q.into_iter()
        .enumerate()
        .map(|(s, v)| v.ok_or_else(|| Failure::Input(format!("no thickness for `{}`", sys.generators()[s]))))
        .collect()
}

fn parse_folding(text: &str) -> Result<Family, Failure> {
    match text {
        "lex" => Ok(Family::Local(FoldingChoice::LexLeast)),
        "global" => Ok(Family::Global),
        seed => seed
            .parse()
            .map(|n| Family::Local(FoldingChoice::Seeded(n)))
            .map_err(|_| Failure::Input(format!("folding must be lex, global or a seed, got `{seed}`"))),
    }
}

fn verified(v: Value, ok: bool) -> Outcome {
    if ok {
        Ok(v)
    } else {
        Err(Failure::Verification(v))
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Spherical { file } => {
            let sys = load_system(&file)?;
            let poset = sys.spherical_poset()?;
            let sets: Vec<Value> = poset.sets().map(|t| names(&sys, t)).collect();
            Ok(json!({ "spherical": sets }))
        }
        Command::Ball { file, radius } => {
            let sys = load_system(&file)?;
            let ball = sys.ball(radius)?;
            let elements: Vec<Value> = (0..ball.len())
                .map(|i| {
                    json!({
                        "word": sys.word_names(&ball.elements[i]),
                        "in_left": names(&sys, ball.in_left[i]),
                        "in_right": names(&sys, ball.in_right[i]),
                    })
                })
                .collect();
            Ok(json!({ "radius": radius, "complete": ball.complete, "size": ball.len(), "elements": elements }))
        }
        Command::Chamber { file } => {
            let sys = load_system(&file)?;
            Ok(serde_json::to_value(corpus::chamber(&sys).to_document()).expect("documents serialize"))
        }
        Command::Basis { file, radius, side } => {
            let sys = load_system(&file)?;
            let tr = Truncation::new_or_group(&sys, radius)?;
            let side = Side::from(side);
            let label = |i: usize| sys.word_names(&tr.ball.elements[i]);
            let slices: Vec<Value> = tr
                .descent_basis(side)
                .iter()
                .map(|sl| {
                    let vectors: Vec<Value> = sl
                        .elements
                        .iter()
                        .map(|&i| {
                            let terms: Vec<Value> =
                                tr.basis_vector(i, side).iter().map(|(j, c)| json!([label(*j), c.to_string()])).collect();
                            json!({ "w": label(i), "terms": terms })
                        })
                        .collect();
                    json!({ "t": names(&sys, sl.t), "vectors": vectors })
                })
                .collect();
            let m = tr.change_of_basis(side);
            let unitriangular = is_unitriangular(&m);
            let det = m.determinant()?;
            let v = json!({
                "radius": radius,
                "complete": tr.ball.complete,
                "side": format!("{side:?}").to_lowercase(),
                "slices": slices,
                "unitriangular": unitriangular,
                "determinant": det.to_string(),
            });
            verified(v, unitriangular)
        }
        Command::GradedAction { file, t, generator, radius, side } => {
            let sys = load_system(&file)?;
            let t = parse_subset(&sys, &t)?;
            let s = sys.generator_index(&generator)?;
            let tr = Truncation::new_or_group(&sys, radius)?;
            let a = tr.quotient_action(t, s, side.into());
            let rows: Vec<Vec<String>> =
                (0..a.matrix.rows).map(|i| a.matrix.row(i).iter().map(|x| x.to_string()).collect()).collect();
            let trace: num_bigint::BigInt = (0..a.matrix.rows).map(|i| a.matrix.get(i, i).clone()).sum();
            Ok(json!({
                "t": names(&sys, t),
                "generator": generator,
                "basis": a.basis.iter().map(|&i| sys.word_names(&tr.ball.elements[i])).collect::<Vec<_>>(),
                "matrix": rows,
                "trace": trace.to_string(),
                "leaking": a.leaking,
                "valid_radius": a.valid_radius,
            }))
        }
        Command::Homology { file, chamber, radius, variant } => {
            let sys = load_system(&file)?;
            let x = load_complex(&sys, chamber.as_ref())?;
            let r = equivariant::homology_formula(&sys, &x, radius, variant.into())?;
            verified(report(&sys, &r), r.equal)
        }
        Command::Graded { file, p, chamber, radius, variant } => {
            let sys = load_system(&file)?;
            let x = load_complex(&sys, chamber.as_ref())?;
            let reports = match p {
                Some(p) => vec![equivariant::graded_term(&sys, &x, p, radius, variant.into())?],
                None => equivariant::graded_terms(&sys, &x, radius, variant.into())?,
            };
            let ok = reports.iter().all(|r| r.ok());
            verified(json!({ "terms": report(&sys, &reports) }), ok)
        }
        Command::Demo { radius, .. } => {
            let r = equivariant::tripod_cocycle_demo(radius)?;
            verified(serde_json::to_value(&r).expect("reports serialize"), r.ok)
        }
        Command::Building { file, thickness, radius, basis, realize, folding } => {
            let sys = load_system(&file)?;
            let q = parse_thickness(&sys, &thickness)?;
            let family = parse_folding(&folding)?;
            let b = if sys.is_finite() {
                ChamberSystem::spherical_building(&sys, &q)?
            } else {
                ChamberSystem::graph_product_ball(&sys, &q, radius)?
            };
            let mut out = json!({ "chambers": b.len(), "complete": sys.is_finite(), "family": report(&sys, &family) });
            let mut ok = true;
            if let Some(t) = basis {
                let parts: Vec<String> = t.split(',').map(str::to_string).collect();
                let r = b.basis_bt(parse_subset(&sys, &parts)?, family)?;
                ok &= r.ok;
                out["basis"] = report(&sys, &r);
            } else {
                let rows = b.partition_counts(family)?;
                ok &= rows.iter().all(|r| r.ok);
                out["partition"] = report(&sys, &rows);
            }
            if let Some(path) = realize {
                let x = MirroredComplex::from_json(&read(&path)?, sys.generators())?;
                let r = b.realize(&x, family)?;
                ok &= r.ok;
                out["realization"] = report(&sys, &r);
            }
            verified(out, ok)
        }
        Command::Hecke { file, q, radius, graded, chamber, variant } => {
            let sys = load_system(&file)?;
            let alg = HeckeAlgebra::new(&sys, hecke::parse_parameters(&sys, &q)?)?;
            let mut ok = true;
            let mut specials = Vec::new();
            for t in sys.spherical_poset()?.sets() {
                let sp = alg.specials(t)?;
                ok &= sp.ok();
                specials.push(json!({
                    "t": names(&sys, t),
                    "poincare": sp.poincare.to_string(),
                    "a_idempotent": sp.a_idempotent,
                    "h_idempotent": sp.h_idempotent,
                    "normalized": sp.alpha_ok,
                }));
            }
            let x = load_complex(&sys, chamber.as_ref())?;
            let reports = match graded {
                Some(p) => vec![hecke::hecke_graded_term(&alg, &x, p, radius, variant.into())?],
                None => hecke::hecke_graded_terms(&alg, &x, radius, variant.into())?,
            };
            ok &= reports.iter().all(|r| r.ok());
            let tables: Vec<Value> = reports
                .iter()
                .map(|r| {
                    let rows: Vec<Value> =
                        r.rank_table().iter().map(|&(d, e1, rhs, einf)| json!({"degree": d, "e1": e1, "rhs": rhs, "einf": einf})).collect();
                    json!({ "p": r.p, "ok": r.ok(), "ranks": rows })
                })
                .collect();
            let v = json!({
                "q": alg.parameters().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "specials": specials,
                "graded": tables,
                "terms": report(&sys, &reports),
            });
            verified(v, ok)
        }
        Command::Verify { suite, corpus } => {
            if corpus != "builtin" {
                return Err(Failure::Input(format!("unknown corpus `{corpus}`; only `builtin` is shipped")));
            }
            let chosen: Vec<fn() -> verify::CriterionResult> = if suite == "all" {
                verify::CRITERIA.to_vec()
            } else {
                let k: usize = suite.parse().map_err(|_| Failure::Input(format!("unknown suite `{suite}`")))?;
                let f = k.checked_sub(1).and_then(|i| verify::CRITERIA.get(i)).ok_or_else(|| Failure::Input(format!("no criterion {k}")))?;
                vec![*f]
            };
            let results: Vec<verify::CriterionResult> = chosen.iter().map(|f| f()).collect();
            for r in &results {
                eprintln!("{r}");
            }
            let ok = results.iter().all(|r| r.passed);
            verified(json!({ "all_passed": ok, "criteria": results }), ok)
        }
    }
}

fn emit(out: Option<&PathBuf>, mut v: Value) -> std::io::Result<()> {
    if let Value::Object(map) = &mut v {
        map.insert("version".into(), json!(REPORT_VERSION));
    }
    let text = serde_json::to_string_pretty(&v).expect("json");
    match out {
        Some(p) => std::fs::write(p, text + "\n"),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => r,
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (value, code) = match run(cli.command) {
        Ok(v) => (Some(v), 0),
        Err(Failure::Verification(v)) => (Some(v), 4),
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            (None, 2)
        }
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e}");
            let code = if matches!(e, Error::ResourceLimit(_)) { 5 } else { 3 };
            (None, code)
        }
    };
    if let Some(v) = value {
        if let Err(e) = emit(cli.output.as_ref(), v) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
