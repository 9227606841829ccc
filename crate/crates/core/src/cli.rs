//! Command-line front end. Every command returns a JSON report; exit codes
//! are 0 (ok), 1 (bad input) and 2 (internal invariant breach).

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::arith::{fmt_q, parse_q, Z};
use crate::cohomology::{SurfaceKind, SurfaceModel};
use crate::diagonal::{
    assemble_diagonal_kclass, base_diagonal_decomposition, blowup_diagonal_step, chern_expand,
    generator_report, generators_json, verify_dual, DecompositionRecord, DiagonalDecomposition,
    ModuliContext, Pairing,
};
use crate::error::{Error, Result};
use crate::formal::parse_factors;
use crate::ktheory::{
    euler_chi, expected_dim, gram_and_dual_basis, hilbert_poly, mukai_pair, ordering_symbol,
    primitive, stability_compare, standard_even_basis, universal_obstruction, EvenClass, HilbertPoly,
    KClass, KClassRecord,
};
use crate::spectral::{
    curve_chi, module_coordinates, projection_formula_sides, ruling_pushforward, CurveKClass,
};
use crate::verify::{self, Suite, DEFAULT_SEED};

#[derive(Debug, Parser)]
#[command(name = "kunneth", version, about = "Exact K-theory and Chern-class calculus on surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct ClassArgs {
    /// Builtin surface name (P2, P1xP1, F<n>, K3, Abelian, Ruled(g,d), Bl<k>(..)) or spec file
    #[arg(long, default_value = "P2")]
    pub surface: String,
    /// Class as `r,c1_1,..,c1_n,ch2` (`r,0,ch2` for c1 = 0) or a JSON record
    #[arg(long, allow_hyphen_values = true)]
    pub v: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Describe a surface model
    Surface { name: String },
    /// Euler characteristic χ(v)
    Chi(ClassArgs),
    /// Mukai pairing (v, w) = -χ(v^∨ ∪ w)
    Mukai {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
    },
    /// χ-Gram matrix of a basis of K⁰ and its dual basis
    Dualbasis {
        #[arg(long, default_value = "P2")]
        surface: String,
        /// Basis classes separated by `;` (default: a standard basis)
        #[arg(long, allow_hyphen_values = true)]
        basis: Option<String>,
    },
    /// Expected dimension ε - χ(v^∨ ∪ v)
    Dim {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        epsilon: u8,
    },
    /// gcd of χ(v ∪ w) over K⁰ (1 means a universal sheaf exists)
    Obstruction(ClassArgs),
    /// Hilbert polynomial χ(v ⊗ H^n)
    Hilbert {
        #[command(flatten)]
        class: ClassArgs,
        /// Polarization H in the H² basis
        #[arg(long, allow_hyphen_values = true)]
        h: String,
    },
    /// Compare reduced Hilbert polynomials of v and w
    Stability {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
    },
    /// Expand the Chern class of the diagonal in formal Künneth factors
    Diagonal {
        /// Factor list, e.g. `even:1,odd,odd`
        #[arg(long)]
        factors: Option<String>,
        /// Gram matrix rows separated by `;`, e.g. `0,1;1,0`
        #[arg(long, allow_hyphen_values = true)]
        gram: Option<String>,
        #[arg(long)]
        m: Option<u32>,
        /// Build the context from a surface class instead
        #[arg(long)]
        surface: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        v: Option<String>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        epsilon: u8,
        #[arg(long, default_value = "mukai")]
        pairing: String,
        /// Ranks of the even factors, comma separated (default 1)
        #[arg(long, allow_hyphen_values = true)]
        ranks: Option<String>,
        /// Expand c_k instead of the top class c_m
        #[arg(long)]
        chern: Option<u32>,
    },
    /// Diagonal decomposition of a rational surface and its blow-ups
    Blowup {
        #[arg(long, default_value = "P2")]
        surface: String,
        #[arg(long, default_value_t = 1)]
        steps: u32,
    },
    /// Pushforward along the ruling of a ruled surface
    Spectral {
        #[arg(long, default_value_t = 1)]
        genus: u32,
        /// Twist degree δ = -σ²
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        delta: i64,
        /// Class on the surface (default O)
        #[arg(long, allow_hyphen_values = true)]
        v: Option<String>,
        /// Class `rank,degree` on the curve (default O)
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
    },
    /// Run self-check suites, or re-verify a decomposition file
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        decomposition: Option<PathBuf>,
    },
}

/// A report plus the exit code it should produce.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub code: i32,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, code: 0 }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_invariant() {
        2
    } else {
        1
    }
}

/// Parses `argv` and runs it, writing the report to stdout and errors to
/// stderr. Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli.command) {
        Ok(out) => {
            use std::io::Write;
            let text = serde_json::to_string_pretty(&out.report).expect("report serializes");
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn surface_summary(s: &SurfaceModel) -> Value {
    let k = &s.canonical_class;
    json!({
        "name": s.name,
        "kind": kind_name(&s.kind),
        "b1": s.b1,
        "h2_rank": s.h2_rank,
        "intersection_form": ints2(&s.intersection_form),
        "canonical_class": ints(k),
        "K2": num(&s.dot(k, k)),
        "euler_number": num(&s.euler_number),
        "chi_O": fmt_q(&s.chi_o()),
        "todd": {
            "td1": s.todd1.iter().map(fmt_q).collect::<Vec<_>>(),
            "td2": fmt_q(&s.todd2),
        },
        "rational": s.is_rational(),
    })
}

fn kind_name(k: &SurfaceKind) -> String {
    match k {
        SurfaceKind::ProjectivePlane => "projective-plane".into(),
        SurfaceKind::P1xP1 => "p1xp1".into(),
        SurfaceKind::Hirzebruch(n) => format!("hirzebruch-{n}"),
        SurfaceKind::K3 => "k3".into(),
        SurfaceKind::Abelian => "abelian".into(),
        SurfaceKind::Ruled { .. } => "ruled".into(),
        SurfaceKind::BlowUp { .. } => "blow-up".into(),
        SurfaceKind::Custom => "custom".into(),
    }
}

fn num(z: &Z) -> Value {
    match z.to_i64() {
        Some(n) => json!(n),
        None => json!(z.to_string()),
    }
}

fn ints(v: &[Z]) -> Value {
    Value::Array(v.iter().map(num).collect())
}

fn ints2(m: &[Vec<Z>]) -> Value {
    Value::Array(m.iter().map(|r| ints(r)).collect())
}

fn record(s: &SurfaceModel, v: &KClass) -> Result<Value> {
    serde_json::to_value(v.to_record(s)?).map_err(|e| Error::invariant(e.to_string()))
}

fn class_json(s: &SurfaceModel, v: &KClass) -> Result<Value> {
    let mut out = record(s, v)?;
    if let KClass::Even(e) = v {
        out["ch2"] = json!(fmt_q(&e.ch2));
    }
    Ok(out)
}

fn parse_ints(text: &str) -> Result<Vec<Z>> {
    text.split(',')
        .map(|t| t.trim().parse::<Z>().map_err(|_| Error::Parse(format!("bad integer '{}'", t.trim()))))
        .collect()
}

/// `r,c1...,ch2`, with `r,0,ch2` short for `c1 = 0`; or a JSON class record.
pub fn parse_class(s: &SurfaceModel, text: &str) -> Result<KClass> {
    let text = text.trim();
    if text.starts_with('{') {
        let rec: KClassRecord =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("class record: {e}")))?;
        return KClass::from_record(s, &rec);
    }
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let n = s.h2_rank;
    let (r, c1, ch2) = if parts.len() == n + 2 {
        (parts[0], parse_ints(&parts[1..=n].join(","))?, parts[n + 1])
    } else if parts.len() == 3 && parts[1] == "0" {
        (parts[0], vec![Z::zero(); n], parts[2])
    } else {
        return Err(Error::Parse(format!(
            "class on {} needs {} entries (r, c1 x{n}, ch2) or r,0,ch2; got '{text}'",
            s.name,
            n + 2
        )));
    };
    let r: Z = r.parse().map_err(|_| Error::Parse(format!("bad rank '{r}'")))?;
    let e = EvenClass::new(r, c1, parse_q(ch2)?);
    e.c2(s)?;
    Ok(KClass::Even(e))
}

fn parse_matrix(text: &str) -> Result<Vec<Vec<Z>>> {
    text.split(';').map(parse_ints).collect()
}

fn hilbert_json(p: &HilbertPoly) -> Value {
    json!({
        "coefficients": p.coeffs.iter().map(fmt_q).collect::<Vec<_>>(),
        "support_dimension": p.d,
        "l0": num(&p.l0),
        "reduced": p.reduced().iter().map(fmt_q).collect::<Vec<_>>(),
    })
}

fn load(surface: &str) -> Result<SurfaceModel> {
    SurfaceModel::build(surface)
}

fn load_class(args: &ClassArgs) -> Result<(SurfaceModel, KClass)> {
    let s = load(&args.surface)?;
    let v = parse_class(&s, &args.v)?;
    Ok((s, v))
}

pub fn run(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Surface { name } => {
            let s = load(name)?;
            Ok(Outcome::ok(json!({"command": "surface", "surface": surface_summary(&s)})))
        }
        Command::Chi(args) => {
            let (s, v) = load_class(args)?;
            let chi = euler_chi(&s, &v)?;
            Ok(Outcome::ok(json!({
                "command": "chi",
                "surface": s.name,
                "v": class_json(&s, &v)?,
                "chi": num(&chi),
            })))
        }
        Command::Mukai { class, w } => {
            let (s, v) = load_class(class)?;
            let w = parse_class(&s, w)?;
            Ok(Outcome::ok(json!({
                "command": "mukai",
                "surface": s.name,
                "v": class_json(&s, &v)?,
                "w": class_json(&s, &w)?,
                "pairing": num(&mukai_pair(&s, &v, &w)?),
                "v_squared": num(&mukai_pair(&s, &v, &v)?),
            })))
        }
        Command::Dualbasis { surface, basis } => {
            let s = load(surface)?;
            let basis: Vec<EvenClass> = match basis {
                Some(text) => text
                    .split(';')
                    .map(|t| parse_class(&s, t).and_then(|k| k.even().cloned()))
                    .collect::<Result<_>>()?,
                None => base_basis(&s),
            };
            let db = gram_and_dual_basis(&s, &basis)?;
            let rec = |e: &EvenClass| class_json(&s, &KClass::Even(e.clone()));
            Ok(Outcome::ok(json!({
                "command": "dualbasis",
                "surface": s.name,
                "basis": basis.iter().map(rec).collect::<Result<Vec<_>>>()?,
                "gram": ints2(&db.gram),
                "dual": db.dual.iter().map(rec).collect::<Result<Vec<_>>>()?,
                "check": ints2(&crate::ktheory::chi_gram(&s, &db.dual, &basis)?),
            })))
        }
        Command::Dim { class, epsilon } => {
            let (s, v) = load_class(class)?;
            let d = expected_dim(&s, &v, *epsilon)?;
            Ok(Outcome::ok(json!({
                "command": "dim",
                "surface": s.name,
                "v": class_json(&s, &v)?,
                "epsilon": epsilon,
                "expected_dim": num(&d),
            })))
        }
        Command::Obstruction(args) => {
            let (s, v) = load_class(args)?;
            let n = universal_obstruction(&s, &v)?;
            let verdict = if n == Z::from(1) {
                "universal sheaf exists".to_string()
            } else {
                format!("universal sheaf obstructed (twisted by a class of order dividing {n})")
            };
            Ok(Outcome::ok(json!({
                "command": "obstruction",
                "surface": s.name,
                "v": class_json(&s, &v)?,
                "n": num(&n),
                "primitive": primitive(&s, &v)?,
                "verdict": verdict,
            })))
        }
        Command::Hilbert { class, h } => {
            let (s, v) = load_class(class)?;
            let h = parse_ints(h)?;
            let p = hilbert_poly(&s, &v, &h)?;
            Ok(Outcome::ok(json!({
                "command": "hilbert",
                "surface": s.name,
                "v": class_json(&s, &v)?,
                "polarization": ints(&h),
                "hilbert": hilbert_json(&p),
            })))
        }
        Command::Stability { class, w, h } => {
            let (s, v) = load_class(class)?;
            let w = parse_class(&s, w)?;
            let h = parse_ints(h)?;
            let pv = hilbert_poly(&s, &v, &h)?;
            let pw = hilbert_poly(&s, &w, &h)?;
            let ord = stability_compare(&pv, &pw);
            Ok(Outcome::ok(json!({
                "command": "stability",
                "surface": s.name,
                "v": hilbert_json(&pv),
                "w": hilbert_json(&pw),
                "order": format!("v {} w", ordering_symbol(ord)),
            })))
        }
        Command::Diagonal { factors, gram, m, surface, v, epsilon, pairing, ranks, chern } => {
            let ctx = match (factors, surface) {
                (Some(f), None) => {
                    let factors = parse_factors(f)?;
                    let m = m.ok_or_else(|| Error::validation("--m is required with --factors"))?;
                    let gram = match gram {
                        Some(g) => parse_matrix(g)?,
                        None => identity(factors.len()),
                    };
                    ModuliContext::from_gram(factors, gram, m)?
                }
                (None, Some(name)) => {
                    let s = load(name)?;
                    let v = v.as_deref().ok_or_else(|| Error::validation("--v is required with --surface"))?;
                    let v = parse_class(&s, v)?;
                    let ranks = match ranks {
                        Some(r) => parse_ints(r)?,
                        None => Vec::new(),
                    };
                    let ctx = ModuliContext::from_surface(&s, &v, *epsilon, pairing.parse::<Pairing>()?, &ranks)?;
                    if let Some(m) = m {
                        if *m != ctx.m {
                            return Err(Error::validation(format!(
                                "--m {m} disagrees with the expected dimension {}",
                                ctx.m
                            )));
                        }
                    }
                    ctx
                }
                _ => return Err(Error::validation("give either --factors (with --m) or --surface (with --v)")),
            };
            diagonal_report(&ctx, chern.unwrap_or(ctx.m))
        }
        Command::Blowup { surface, steps } => {
            let s = load(surface)?;
            let mut dec = base_diagonal_decomposition(&s)?;
            let mut trail = vec![step_json(&dec)?];
            for _ in 0..*steps {
                dec = blowup_diagonal_step(&dec)?;
                trail.push(step_json(&dec)?);
            }
            Ok(Outcome::ok(json!({
                "command": "blowup",
                "steps": trail,
                "decomposition": dec.to_json()?,
            })))
        }
        Command::Spectral { genus, delta, v, x } => {
            let s = SurfaceModel::ruled(*genus, *delta);
            let v = match v {
                Some(t) => parse_class(&s, t)?,
                None => KClass::Even(EvenClass::structure_sheaf(&s)),
            };
            let x = match x {
                Some(t) => {
                    let p = parse_ints(t)?;
                    if p.len() != 2 {
                        return Err(Error::Parse("curve class is 'rank,degree'".into()));
                    }
                    CurveKClass::Even { rank: p[0].clone(), degree: p[1].clone() }
                }
                None => CurveKClass::even(1, 0),
            };
            let pushed = ruling_pushforward(&s, &v)?;
            let mut report = json!({
                "command": "spectral",
                "surface": surface_summary(&s),
                "v": class_json(&s, &v)?,
                "pushforward": pushed,
            });
            if let KClass::Even(e) = &v {
                let (a, c) = module_coordinates(&s, e)?;
                let (l, r) = projection_formula_sides(&s, &x, e)?;
                report["module_coordinates"] = json!({"one": a, "h": c});
                report["chi_surface"] = num(&euler_chi(&s, &v)?);
                report["chi_curve"] = num(&curve_chi(*genus, &pushed)?);
                report["projection_formula"] = json!({
                    "x": x,
                    "surface_side": num(&l),
                    "curve_side": num(&r),
                    "holds": l == r,
                });
            }
            Ok(Outcome::ok(report))
        }
        Command::Verify { suite, seed, decomposition } => match decomposition {
            Some(path) => verify_file(path),
            None => {
                let results = verify::run(*suite, *seed);
                for r in &results {
                    eprintln!("{}", r.line());
                }
                let all = results.iter().all(|r| r.passed);
                Ok(Outcome {
                    report: json!({
                        "command": "verify",
                        "seed": seed,
                        "passed": all,
                        "results": results,
                    }),
                    code: if all { 0 } else { 2 },
                })
            }
        },
    }
}

fn identity(n: usize) -> Vec<Vec<Z>> {
    (0..n).map(|i| (0..n).map(|j| Z::from((i == j) as i64)).collect()).collect()
}

fn base_basis(s: &SurfaceModel) -> Vec<EvenClass> {
    match s.kind {
        SurfaceKind::ProjectivePlane => {
            (1..=3).map(|k| EvenClass::line_bundle(s, &[Z::from(-k)])).collect()
        }
        _ => standard_even_basis(s),
    }
}

fn step_json(dec: &DiagonalDecomposition) -> Result<Value> {
    let check = verify_dual(dec)?;
    Ok(json!({
        "surface": dec.surface.name,
        "pairs": dec.pairs.len(),
        "dual": check.ok,
        "chi_matrix": ints2(&check.matrix),
    }))
}

fn diagonal_report(ctx: &ModuliContext, k: u32) -> Result<Outcome> {
    let kdata = assemble_diagonal_kclass(ctx)?;
    let delta = chern_expand(ctx, &kdata, k)?;
    let gens = generator_report(&delta);
    let mut report = json!({
        "command": "diagonal",
        "m": ctx.m,
        "chern_degree": k,
        "factors": ctx.formal.factors().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "gram": ints2(&ctx.gram),
        "kclass": {
            "terms": kdata.terms.iter().map(|(g, i, j)| json!({
                "coeff": num(g),
                "left": format!("e{i}'"),
                "right": format!("e{j}"),
            })).collect::<Vec<_>>(),
            "total_rank": num(&kdata.total_rank),
            "expected_rank": kdata.expected_rank.as_ref().map(num),
            "warning": kdata.warning,
        },
        "expansion": delta.to_json(),
        "rendered": delta.render(),
        "generators": generators_json(&gens),
    });
    if let (Some(s), Some(v)) = (&ctx.surface, &ctx.v) {
        report["surface"] = json!(s.name);
        report["v"] = class_json(s, v)?;
        report["epsilon"] = json!(ctx.epsilon);
        report["pairing"] = json!(ctx.pairing);
    }
    Ok(Outcome::ok(report))
}

fn verify_file(path: &PathBuf) -> Result<Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("decomposition: {e}")))?;
    // Accept a bare decomposition or a whole `blowup` report.
    let inner = value.get("decomposition").cloned().unwrap_or(value);
    let rec: DecompositionRecord =
        serde_json::from_value(inner).map_err(|e| Error::Parse(format!("decomposition: {e}")))?;
    let dec = DiagonalDecomposition::from_record(&rec)?;
    let check = verify_dual(&dec)?;
    Ok(Outcome {
        report: json!({
            "command": "verify",
            "surface": dec.surface.name,
            "pairs": dec.pairs.len(),
            "dual": check.ok,
            "chi_matrix": ints2(&check.matrix),
        }),
        code: if check.ok { 0 } else { 1 },
    })
}
