//! Command-line front end: every subcommand reads family files, runs one
//! analysis and prints a JSON report.
//!
//! Exit status: 0 completed, 2 hypothesis violations found, 1 usage or IO error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use coupled_core::fixtures::{make_fixture, Fixture, FixtureKind, FixtureParams, FixtureSpec};
use coupled_core::graphs::{digraph, linked_graph, pair_dot, strongly_connected_components};
use coupled_core::io::{family_value, parse_family, serialize_family, AnyFamily};
use coupled_core::normality::embed_pair;
use coupled_core::reducibility::{
    chain_classify, chain_lattice, coupled_irreducible_burnside, LatticeKind, search_witness, Method, SearchConfig, Strength, StrengthSpectrum,
};
use coupled_core::report::EntryCodec;
use coupled_core::scalar::parse_rational;
use coupled_core::sylvester::{audit_hypotheses, build_system, dichotomy_report, AuditOptions, TheoremKind};
use coupled_core::{CoupledFamily, Error, Scalar, TolerancePolicy};
use serde_json::{json, Value};

pub const TOL_ENV: &str = "COUPLED_TOL";

#[derive(Parser, Debug)]
#[command(name = "coupled", version, about = "Coupled reducibility, normality and Sylvester systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Equality tolerance for floating input (default 1e-9, or $COUPLED_TOL).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random seeds for the witness search.
    #[arg(long, global = true, default_value_t = 32)]
    budget: usize,
    /// Use exact arithmetic on floating input (binary values taken exactly).
    #[arg(long, global = true)]
    exact: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Graphs, reducibility audit and normality of A (and B).
    Analyze {
        a: PathBuf,
        #[arg(long = "B", value_name = "B.json")]
        b: Option<PathBuf>,
    },
    /// Solution space of A_ij X_j = X_i B_ij and its classification.
    Solve { a: PathBuf, b: PathBuf },
    /// Reducibility strengths of A.
    Classify {
        a: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
    },
    /// D(A), strong components and, with B, the linked graph.
    Graph {
        a: PathBuf,
        b: Option<PathBuf>,
        /// Print Graphviz dot instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Write a named example family.
    Fixture(FixtureArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Auto,
    Chain,
    Burnside,
    Search,
}

#[derive(Args, Debug)]
struct FixtureArgs {
    kind: String,
    /// Comma-separated block sizes.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// 1-based distinguished index.
    #[arg(long)]
    p: Option<usize>,
    /// 1-based second index.
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    d: Option<String>,
    #[arg(long)]
    theta: Option<f64>,
    /// Number of leading indices on which the rotation family has the full space as a reducing piece.
    #[arg(long)]
    s: Option<usize>,
    #[arg(short, long)]
    o: Option<PathBuf>,
    /// Output for the B family of a pair (default `<stem>_B.json`).
    #[arg(long)]
    b_out: Option<PathBuf>,
}

/// Failure with exit status 1.
#[derive(Debug)]
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

type Res<T> = std::result::Result<T, Usage>;

struct Ctx {
    pol: TolerancePolicy,
    tol_source: String,
    common: Common,
    command: &'static str,
}

impl Ctx {
    fn header(&self, backend: Option<&str>) -> Value {
        json!({
            "tool": "coupled",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "backend": backend,
            "tolerance": self.pol,
            "tolerance_source": self.tol_source,
            "seed": self.common.seed,
            "budget": self.common.budget,
        })
    }
}

fn read_family(path: &Path) -> Res<AnyFamily> {
    let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_family(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn exact_backend(fams: &[&AnyFamily], exact: bool) -> bool {
    exact || fams.iter().all(|f| matches!(f, AnyFamily::Rational(_)))
}

fn analyze_one<T: EntryCodec>(a: &CoupledFamily<T>, b: Option<&CoupledFamily<T>>, ctx: &Ctx) -> Res<Value> {
    let opts = AuditOptions { budget: ctx.common.budget, seed: ctx.common.seed, ..Default::default() };
    let audit = audit_hypotheses(a, b.unwrap_or(a), &ctx.pol, &opts)?;
    let normality = |f: &CoupledFamily<T>| -> Res<Value> {
        let n = f.is_coupled_normal(&ctx.pol);
        let mut pairs = Vec::new();
        for i in 0..f.k() {
            for j in i..f.k() {
                let e = embed_pair(f, i, j, &ctx.pol)?;
                pairs.push(json!({"i": i + 1, "j": j + 1, "normal": e.normal, "residual": e.residual}));
            }
        }
        Ok(json!({"coupled_normal": n.normal, "max_residual": n.max_residual, "embedded_pairs": pairs}))
    };
    let mut out = json!({
        "A": {
            "dims": a.dims(),
            "graphs": graphs_value(a, None, &ctx.pol)?,
            "audit": audit.a,
            "normality": normality(a)?,
        }
    });
    if let Some(b) = b {
        out["B"] = json!({"dims": b.dims(), "audit": audit.b, "normality": normality(b)?});
        out["pair"] = json!({
            "graphs": graphs_value(a, Some(b), &ctx.pol)?,
            "equal_dims": audit.equal_dims,
            "linked_graph_connected": audit.linked_graph_connected,
        });
    }
    Ok(out)
}

fn graphs_value<T: Scalar>(a: &CoupledFamily<T>, b: Option<&CoupledFamily<T>>, pol: &TolerancePolicy) -> Res<Value> {
    let da = digraph(a, pol);
    let sa = strongly_connected_components(&da);
    let Some(b) = b else {
        return Ok(json!({"D(A)": da, "scc(A)": sa}));
    };
    if a.k() != b.k() {
        return Err(Usage(format!("A has {} indices, B has {}", a.k(), b.k())));
    }
    let db = digraph(b, pol);
    let sb = strongly_connected_components(&db);
    let g = linked_graph(&da, &db)?;
    Ok(json!({"D(A)": da, "scc(A)": sa, "D(B)": db, "scc(B)": sb, "G(A,B)": g}))
}

fn solve_pair<T: EntryCodec>(a: &CoupledFamily<T>, b: &CoupledFamily<T>, ctx: &Ctx) -> Res<(Value, bool)> {
    if a.k() != b.k() {
        return Err(Usage(format!("A has {} indices, B has {}", a.k(), b.k())));
    }
    let sys = build_system(a, b)?;
    let opts = AuditOptions { budget: ctx.common.budget, seed: ctx.common.seed, ..Default::default() };
    let rep = dichotomy_report(a, b, &ctx.pol, &opts)?;
    let kinds = [
        TheoremKind::CoupledIrreducible,
        TheoremKind::NotProperlyReducible,
        TheoremKind::StronglyConnectedDigraphs,
        TheoremKind::ConnectedLinkedGraph,
    ];
    let applies: Vec<bool> = kinds
        .iter()
        .map(|k| rep.findings.iter().any(|f| f.classification.theorems.iter().any(|t| t.kind == *k && t.applies)))
        .collect();
    let verdict = if rep.violations > 0 {
        "hypothesis violation found"
    } else if rep.solutions.dimension == 0 {
        "only the zero solution"
    } else if applies.iter().any(|&x| x) {
        "hypotheses hold, conclusions verified"
    } else {
        "strong hypotheses unmet"
    };
    let out = json!({
        "unknowns": sys.unknown_count(),
        "equations": sys.operator.rows(),
        "verdict": verdict,
        "report": rep,
    });
    Ok((out, rep.violations > 0))
}

fn spectrum_json(s: &StrengthSpectrum) -> Value {
    json!({"reducible": s.reducible, "proper": s.proper, "strong": s.strong})
}

fn classify_value(f: &AnyFamily, mode: Mode, ctx: &Ctx) -> Res<Value> {
    let chain = |q: &coupled_core::QFamily| -> Res<Value> {
        let v = chain_classify(q)?;
        let real = (0..q.k()).any(|i| chain_lattice(q.block(i, i)).is_some_and(|l| l.kind == LatticeKind::RealRotation));
        Ok(json!({
            "method": v.method,
            "field": if real { "real" } else { "complex" },
            "strength": v.strength,
            "spectrum": spectrum_json(&v.spectrum),
            "witness": v.witness,
            "residuals": v.residuals,
        }))
    };
    let exact_input = matches!(f, AnyFamily::Rational(_)) || ctx.common.exact;
    match mode {
        Mode::Chain => chain(&f.to_exact()),
        Mode::Auto if exact_input => match chain(&f.to_exact()) {
            Ok(v) => Ok(v),
            Err(_) => burnside_value(f, ctx),
        },
        Mode::Auto | Mode::Burnside => burnside_value(f, ctx),
        Mode::Search => {
            let cfg = SearchConfig { target: Strength::StronglyReducible, budget: ctx.common.budget, seed: ctx.common.seed };
            let v = if exact_backend(&[f], ctx.common.exact) {
                serde_json::to_value(search_witness(&f.to_exact(), &cfg, &ctx.pol)?)
            } else {
                serde_json::to_value(search_witness(&f.to_c64(), &cfg, &ctx.pol)?)
            };
            Ok(json!({"method": Method::Search, "search": v.expect("report serializes")}))
        }
    }
}

fn burnside_value(f: &AnyFamily, ctx: &Ctx) -> Res<Value> {
    let c = f.to_c64();
    let cert = coupled_irreducible_burnside(&c, &ctx.pol, None)?;
    let mut out = json!({"method": Method::Burnside, "field": "complex", "certificate": cert});
    if cert.irreducible {
        out["spectrum"] = spectrum_json(&StrengthSpectrum { reducible: Some(false), proper: Some(false), strong: Some(false) });
        out["strength"] = json!(Strength::Trivial);
        return Ok(out);
    }
    let cfg = SearchConfig { target: Strength::StronglyReducible, budget: ctx.common.budget, seed: ctx.common.seed };
    let s = search_witness(&c, &cfg, &ctx.pol)?;
    let found = |t: Strength| if s.best_strength >= t { Some(true) } else { None };
    out["spectrum"] = spectrum_json(&StrengthSpectrum {
        reducible: Some(true),
        proper: found(Strength::ProperlyReducible),
        strong: found(Strength::StronglyReducible),
    });
    out["strength"] = json!(s.best_strength.max(Strength::Reducible));
    out["search"] = serde_json::to_value(&s).expect("report serializes");
    Ok(out)
}

fn rational_arg(name: &str, v: &Option<String>) -> Res<Option<num_rational::BigRational>> {
    v.as_ref()
        .map(|s| parse_rational(s).ok_or_else(|| Usage(format!("--{name}: `{s}` is not a rational number"))))
        .transpose()
}

fn one_based_arg(name: &str, v: Option<usize>) -> Res<Option<usize>> {
    match v {
        Some(0) => Err(Usage(format!("--{name} is 1-based"))),
        other => Ok(other.map(|x| x - 1)),
    }
}

fn fixture_spec(f: &FixtureArgs) -> Res<FixtureSpec> {
    let kind: FixtureKind = f.kind.parse()?;
    let abcd = [rational_arg("a", &f.a)?, rational_arg("b", &f.b)?, rational_arg("c", &f.c)?, rational_arg("d", &f.d)?];
    let abcd = if abcd.iter().any(Option::is_some) {
        let z = || num_rational::BigRational::from_integer(0.into());
        let [a, b, c, d] = abcd;
        Some([a.unwrap_or_else(z), b.unwrap_or_else(z), c.unwrap_or_else(|| num_rational::BigRational::from_integer(1.into())), d.unwrap_or_else(z)])
    } else {
        None
    };
    let params = FixtureParams {
        dims: f.dims.clone(),
        k: f.k,
        n: f.n,
        p: one_based_arg("p", f.p)?,
        q: one_based_arg("q", f.q)?,
        abcd,
        theta: f.theta,
        s: f.s,
    };
    Ok(FixtureSpec { kind, params, overrides: Vec::new() })
}

fn write_file(path: &Path, text: &str) -> Res<()> {
    std::fs::write(path, text).map_err(|e| Usage(format!("cannot write {}: {e}", path.display())))
}

fn b_path(a: &Path, explicit: &Option<PathBuf>) -> PathBuf {
    explicit.clone().unwrap_or_else(|| {
        let stem = a.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        a.with_file_name(format!("{stem}_B.json"))
    })
}

fn fixture_value(f: &FixtureArgs, ctx: &Ctx) -> Res<Value> {
    let spec = fixture_spec(f)?;
    let fx = make_fixture(&spec)?;
    let mut params = serde_json::to_value(&spec.params).expect("params serialize");
    for key in ["p", "q"] {
        if let Some(i) = params[key].as_u64() {
            params[key] = json!(i + 1);
        }
    }
    let mut out = json!({"header": ctx.header(Some("exact")), "kind": spec.kind.name(), "params": params});
    match fx {
        Fixture::Family(fam) => match &f.o {
            Some(path) => {
                write_file(path, &serialize_family(&fam))?;
                out["written"] = json!([path.display().to_string()]);
            }
            None => out["family"] = family_value(&fam),
        },
        Fixture::Pair { a, b, planted } => {
            match &f.o {
                Some(path) => {
                    let bp = b_path(path, &f.b_out);
                    write_file(path, &serialize_family(&a))?;
                    write_file(&bp, &serialize_family(&b))?;
                    out["written"] = json!([path.display().to_string(), bp.display().to_string()]);
                }
                None => {
                    out["A"] = family_value(&a);
                    out["B"] = family_value(&b);
                }
            }
            if let Some(x) = planted {
                out["planted_solution"] = serde_json::to_value(&x).expect("matrices serialize");
            }
        }
    }
    Ok(out)
}

fn execute(cli: Cli, ctx: &Ctx, out: &mut dyn Write) -> Res<i32> {
    let mut status = 0;
    let report = match &cli.command {
        Command::Analyze { a, b } => {
            let fa = read_family(a)?;
            let fb = b.as_deref().map(read_family).transpose()?;
            let fams: Vec<&AnyFamily> = std::iter::once(&fa).chain(fb.as_ref()).collect();
            let exact = exact_backend(&fams, ctx.common.exact);
            let body = if exact {
                analyze_one(&fa.to_exact(), fb.as_ref().map(AnyFamily::to_exact).as_ref(), ctx)?
            } else {
                analyze_one(&fa.to_c64(), fb.as_ref().map(AnyFamily::to_c64).as_ref(), ctx)?
            };
            json!({"header": ctx.header(Some(backend_name(exact))), "analysis": body})
        }
        Command::Solve { a, b } => {
            let (fa, fb) = (read_family(a)?, read_family(b)?);
            let exact = exact_backend(&[&fa, &fb], ctx.common.exact);
            let (body, violated) =
                if exact { solve_pair(&fa.to_exact(), &fb.to_exact(), ctx)? } else { solve_pair(&fa.to_c64(), &fb.to_c64(), ctx)? };
            if violated {
                status = 2;
            }
            json!({"header": ctx.header(Some(backend_name(exact))), "solve": body})
        }
        Command::Classify { a, mode } => {
            let fa = read_family(a)?;
            let body = classify_value(&fa, *mode, ctx)?;
            json!({"header": ctx.header(Some(backend_name(exact_backend(&[&fa], ctx.common.exact)))), "classification": body})
        }
        Command::Graph { a, b, dot } => {
            let fa = read_family(a)?;
            let fb = b.as_deref().map(read_family).transpose()?;
            let fams: Vec<&AnyFamily> = std::iter::once(&fa).chain(fb.as_ref()).collect();
            let exact = exact_backend(&fams, ctx.common.exact);
            if *dot {
                let text = if exact {
                    dot_text(&fa.to_exact(), fb.as_ref().map(AnyFamily::to_exact).as_ref(), &ctx.pol)?
                } else {
                    dot_text(&fa.to_c64(), fb.as_ref().map(AnyFamily::to_c64).as_ref(), &ctx.pol)?
                };
                write!(out, "{text}").map_err(|e| Usage(e.to_string()))?;
                return Ok(0);
            }
            let body = if exact {
                graphs_value(&fa.to_exact(), fb.as_ref().map(AnyFamily::to_exact).as_ref(), &ctx.pol)?
            } else {
                graphs_value(&fa.to_c64(), fb.as_ref().map(AnyFamily::to_c64).as_ref(), &ctx.pol)?
            };
            json!({"header": ctx.header(Some(backend_name(exact))), "graphs": body})
        }
        Command::Fixture(f) => fixture_value(f, ctx)?,
    };
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    writeln!(out, "{text}").map_err(|e| Usage(e.to_string()))?;
    Ok(status)
}

fn dot_text<T: Scalar>(a: &CoupledFamily<T>, b: Option<&CoupledFamily<T>>, pol: &TolerancePolicy) -> Res<String> {
    let da = digraph(a, pol);
    let Some(b) = b else { return Ok(da.to_dot("D(A)")) };
    if a.k() != b.k() {
        return Err(Usage(format!("A has {} indices, B has {}", a.k(), b.k())));
    }
    let db = digraph(b, pol);
    Ok(pair_dot(&da, &db, &linked_graph(&da, &db)?))
}

fn backend_name(exact: bool) -> &'static str {
    if exact {
        "exact"
    } else {
        "complex64"
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Analyze { .. } => "analyze",
        Command::Solve { .. } => "solve",
        Command::Classify { .. } => "classify",
        Command::Graph { .. } => "graph",
        Command::Fixture(_) => "fixture",
    }
}

/// Runs one command line; `env_tol` is the value of `$COUPLED_TOL`, if set.
pub fn run_with_env<I, S>(args: I, env_tol: Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let (tol, tol_source) = match (cli.common.tol, env_tol) {
        (Some(t), _) => (Some(t), "--tol".to_string()),
        (None, Some(v)) => match v.trim().parse::<f64>() {
            Ok(t) => (Some(t), format!("{TOL_ENV}={v}")),
            Err(_) => {
                let _ = writeln!(err, "error: {TOL_ENV}=`{v}` is not a number");
                return 1;
            }
        },
        (None, None) => (None, "default".to_string()),
    };
    if tol.is_some_and(|t| !(t.is_finite() && t > 0.0)) {
        let _ = writeln!(err, "error: tolerance must be a positive number");
        return 1;
    }
    let pol = tol.map_or_else(TolerancePolicy::default, |t| TolerancePolicy::default().with_equality_atol(t));
    let ctx = Ctx { pol, tol_source, common: cli.common.clone(), command: command_name(&cli.command) };
    match execute(cli, &ctx, out) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

/// Runs one command line with `$COUPLED_TOL` read from the environment.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with_env(args, std::env::var(TOL_ENV).ok(), out, err)
}
