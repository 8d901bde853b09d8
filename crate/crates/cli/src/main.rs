//! `tss-lab`: command-line front end to the transition system workbench.
//!
//! Exit status: 0 pass or related, 1 fail or unrelated, 2 unknown or
//! truncated, 64 usage, 65 malformed input, 66 unreadable file, 70 engine
//! failure.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tss_core::engine::{derive_transitions, Engine};
use tss_core::equivalence::{bisimilar, lift_ci, lift_pg, minimize, EquivalenceKind, LiftLimits, LiftVerdict, ProbeOptions, Verdict};
use tss_core::graph::{to_dot, GraphFamily, ProcessGraph};
use tss_core::sanity::{self, CheckConfig, CheckReport, CheckVerdict, Requirement};
use tss_core::semantics::{closed_meaning, closed_term_meaning, is_pure, pg_meaning, Adequacy, PgOptions, Semantics};
use tss_core::stratify::stratify;
use tss_core::syntax::{serialize_graph, serialize_tss};
use tss_core::term::Term;
use tss_core::tss::{tss_sum, tss_union, Tss};
use tss_core::workspace::Workspace;
use tss_core::Error;

#[derive(Parser, Debug)]
#[command(name = "tss-lab", version, about = "Transition system specification workbench")]
struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Transitions of a closed term, with proofs.
    Derive {
        #[command(flatten)]
        spec: SpecArgs,
        term: String,
        /// Print a proof tree for each transition.
        #[arg(long)]
        proofs: bool,
    },
    /// Breadth-first LTS exploration from closed terms.
    Lts {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(required = true)]
        terms: Vec<String>,
        #[arg(long, default_value_t = 1000)]
        bound: usize,
    },
    /// Reports rule variables that are not bound by the conclusion source.
    Pure {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Searches a stratification for the negative premises.
    Stratify {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Meaning of a term under a valuation.
    Meaning {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        sem: SemanticsArgs,
        /// `x=value`: a closed term, or a graph name from a family.
        #[arg(long = "val")]
        valuation: Vec<String>,
        term: String,
    },
    /// Bisimilarity of two graphs.
    Bisim {
        /// Graph file holding both graphs.
        #[arg(long = "graphs")]
        graphs: String,
        #[arg(long = "eq", value_enum, default_value_t = Eq::Strong)]
        eq: Eq,
        left: String,
        right: String,
    },
    /// Lifted equivalence of two open terms.
    Lift {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        sem: SemanticsArgs,
        /// Depth of closed substitution images.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        left: String,
        right: String,
    },
    /// Sample-based sanity requirement checks.
    Check {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        sem: SemanticsArgs,
        #[arg(long, value_enum, default_value_t = ReqArg::All)]
        requirement: ReqArg,
        /// Terms for the congruence check; random ones when absent.
        #[arg(long = "term")]
        terms: Vec<String>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Enable recursion unfolding before checking.
        #[arg(long)]
        unfold: bool,
    },
    /// Sum of two specifications with disjoint signatures.
    Sum {
        left: String,
        right: String,
        /// Allow shared function symbols.
        #[arg(long)]
        union: bool,
    },
    /// Quotient of a graph by bisimilarity.
    Minimize {
        #[arg(long = "graphs")]
        graphs: String,
        name: String,
        #[arg(long = "eq", value_enum, default_value_t = Eq::Strong)]
        eq: Eq,
    },
    /// Graphviz output for graphs, or for the LTS of a closed term.
    ExportDot {
        #[arg(long = "graphs", conflicts_with = "tss")]
        graphs: Option<String>,
        #[arg(long)]
        tss: Option<String>,
        /// Graph name, or the root term with `--tss`.
        name: Option<String>,
        #[arg(long, default_value_t = 1000)]
        bound: usize,
    },
}

#[derive(Args, Debug)]
struct SpecArgs {
    /// Specification file, or the name of a bundled one.
    #[arg(long)]
    tss: String,
}

#[derive(Args, Debug)]
struct SemanticsArgs {
    #[arg(long, value_enum, default_value_t = Sem::Ci)]
    semantics: Sem,
    #[arg(long = "eq", value_enum, default_value_t = Eq::Strong)]
    eq: Eq,
    /// Graph files supplying the family of process graphs.
    #[arg(long)]
    family: Vec<String>,
    #[arg(long, default_value_t = 2000)]
    bound: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random enlargements used when probing adequacy.
    #[arg(long, default_value_t = 20)]
    probes: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Sem {
    Ci,
    Pg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Eq {
    Strong,
    Weak,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ReqArg {
    Var,
    Ops,
    Rec,
    Alpha,
    Rdp,
    Congruence,
    All,
}

impl From<Eq> for EquivalenceKind {
    fn from(e: Eq) -> Self {
        match e {
            Eq::Strong => EquivalenceKind::Strong,
            Eq::Weak => EquivalenceKind::Weak,
        }
    }
}

impl From<Sem> for Semantics {
    fn from(s: Sem) -> Self {
        match s {
            Sem::Ci => Semantics::ClosedTerm,
            Sem::Pg => Semantics::ProcessGraph,
        }
    }
}

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_IO: u8 = 66;
const EXIT_ENGINE: u8 = 70;

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => EXIT_IO,
        Error::Parse(_)
        | Error::Term(_)
        | Error::InvalidRule { .. }
        | Error::SignatureOverlap(_)
        | Error::ActionMismatch { .. }
        | Error::InvalidGraph(_)
        | Error::GraphNotInFamily(_)
        | Error::NotClosed(_)
        | Error::UnmappedFreeVariable(_)
        | Error::UnknownAction { .. }
        | Error::ConstantClash(_)
        | Error::Invalid(_) => EXIT_DATA,
        Error::NotAdequate(_) => EXIT_UNKNOWN,
        _ => EXIT_ENGINE,
    }
}

struct Ctx {
    ws: Workspace,
    json: bool,
}

impl Ctx {
    fn tss(&mut self, path: &str) -> Result<Tss, Error> {
        let name = self.ws.load_tss(path)?;
        Ok(self.ws.tss(&name).expect("just loaded").clone())
    }

    fn families(&mut self, paths: &[String]) -> Result<GraphFamily, Error> {
        let mut out = GraphFamily::new();
        for p in paths {
            let name = self.ws.load_family(p)?;
            out = out.union(self.ws.family(&name).expect("just loaded"));
        }
        Ok(out)
    }

    fn graph(&self, name: &str) -> Result<ProcessGraph, Error> {
        self.ws
            .graph(name)
            .cloned()
            .ok_or_else(|| Error::Invalid(format!("no graph named `{name}`")))
    }

    fn emit(&self, text: impl AsRef<str>, value: serde_json::Value) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
        } else {
            print!("{}", text.as_ref());
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut ctx = Ctx {
        ws: Workspace::new(),
        json: cli.json,
    };
    match run(&mut ctx, cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}

fn run(ctx: &mut Ctx, cmd: Command) -> Result<u8, Error> {
    match cmd {
        Command::Derive { spec, term, proofs } => derive(ctx, &spec.tss, &term, proofs),
        Command::Lts { spec, terms, bound } => lts(ctx, &spec.tss, &terms, bound),
        Command::Pure { spec } => pure(ctx, &spec.tss),
        Command::Stratify { spec } => strat(ctx, &spec.tss),
        Command::Meaning {
            spec,
            sem,
            valuation,
            term,
        } => meaning(ctx, &spec.tss, &sem, &valuation, &term),
        Command::Bisim { graphs, eq, left, right } => bisim(ctx, &graphs, eq, &left, &right),
        Command::Lift {
            spec,
            sem,
            depth,
            left,
            right,
        } => lift(ctx, &spec.tss, &sem, depth, &left, &right),
        Command::Check {
            spec,
            sem,
            requirement,
            terms,
            samples,
            depth,
            unfold,
        } => check(ctx, &spec.tss, &sem, requirement, &terms, samples, depth, unfold),
        Command::Sum { left, right, union } => sum(ctx, &left, &right, union),
        Command::Minimize { graphs, name, eq } => {
            ctx.families(&[graphs])?;
            let g = minimize(&ctx.graph(&name)?, eq.into());
            ctx.emit(serialize_graph(&name, &g), json!({ "name": name, "graph": g }));
            Ok(EXIT_PASS)
        }
        Command::ExportDot { graphs, tss, name, bound } => export_dot(ctx, graphs, tss, name, bound),
    }
}

fn derive(ctx: &mut Ctx, path: &str, term: &str, proofs: bool) -> Result<u8, Error> {
    let tss = ctx.tss(path)?;
    let p = ctx.ws.term(term, &tss.signature)?;
    let ts = derive_transitions(&tss, &p)?;
    let mut text = String::new();
    for t in &ts {
        text.push_str(&format!("{p} -{}-> {}\n", t.action, t.target));
        if proofs {
            for line in t.proof.to_string().lines() {
                text.push_str(&format!("    {line}\n"));
            }
        }
    }
    if ts.is_empty() {
        text.push_str(&format!("{p} has no transitions\n"));
    }
    let value = json!(ts
        .iter()
        .map(|t| json!({ "action": t.action, "target": t.target.to_string(), "proof": t.proof.to_string() }))
        .collect::<Vec<_>>());
    ctx.emit(text, value);
    Ok(EXIT_PASS)
}

fn lts(ctx: &mut Ctx, path: &str, terms: &[String], bound: usize) -> Result<u8, Error> {
    let tss = ctx.tss(path)?;
    let roots = terms
        .iter()
        .map(|t| ctx.ws.term(t, &tss.signature))
        .collect::<Result<Vec<Term>, Error>>()?;
    let explored = Engine::new(&tss)?.lts(&roots, bound)?;
    let lts = explored.to_lts();
    let mut text = format!("states: {}\n", explored.states.len());
    for s in &explored.states {
        text.push_str(&format!("  {s}\n"));
    }
    text.push_str(&format!("transitions: {}\n", explored.edges.len()));
    for (s, a, t) in &explored.edges {
        text.push_str(&format!("  {s} -{a}-> {t}\n"));
    }
    if explored.truncated {
        text.push_str(&format!("truncated at {bound} states\n"));
    }
    ctx.emit(text, json!(lts));
    Ok(if explored.truncated { EXIT_UNKNOWN } else { EXIT_PASS })
}

fn pure(ctx: &mut Ctx, path: &str) -> Result<u8, Error> {
    let tss = ctx.tss(path)?;
    let report = is_pure(&tss);
    let mut text = String::new();
    if report.pure {
        text.push_str("pure\n");
    } else {
        text.push_str("not pure\n");
        for r in report.offending() {
            let vars: Vec<&str> = r.unbound.iter().map(String::as_str).collect();
            text.push_str(&format!("  rule {}: {}   unbound: {}\n", r.index, r.rule, vars.join(", ")));
        }
    }
    ctx.emit(text, json!(report));
    Ok(if report.pure { EXIT_PASS } else { EXIT_FAIL })
}

fn strat(ctx: &mut Ctx, path: &str) -> Result<u8, Error> {
    let tss = ctx.tss(path)?;
    match stratify(&tss) {
        Some(s) => {
            let mut text = String::from("stratified\n");
            for (l, n) in &s.label_layers {
                text.push_str(&format!("  layer {l} = {n}\n"));
            }
            for (f, w) in &s.weights {
                text.push_str(&format!("  weight {f} = {w}\n"));
            }
            ctx.emit(text, json!({ "stratified": true, "stratification": s }));
            Ok(EXIT_PASS)
        }
        None => {
            ctx.emit("no stratification found\n", json!({ "stratified": false }));
            Ok(EXIT_FAIL)
        }
    }
}

fn parse_binding(s: &str) -> Result<(&str, &str), Error> {
    s.split_once('=')
        .map(|(x, v)| (x.trim(), v.trim()))
        .ok_or_else(|| Error::Invalid(format!("valuation entry `{s}` is not of the form x=value")))
}

fn meaning(ctx: &mut Ctx, path: &str, sem: &SemanticsArgs, valuation: &[String], term: &str) -> Result<u8, Error> {
    let tss = ctx.tss(path)?;
    let family = ctx.families(&sem.family)?;
    let t = ctx.ws.term(term, &tss.signature)?;
    let (graph, truncated, adequacy) = match sem.semantics {
        Sem::Ci => {
            let mut rho = std::collections::BTreeMap::new();
            for b in valuation {
                let (x, v) = parse_binding(b)?;
                rho.insert(x.to_string(), ctx.ws.term(v, &tss.signature)?);
            }
            let p = closed_term_meaning(&t, &rho)?;
            let m = closed_meaning(&tss, &p, sem.bound)?;
            (m.graph, m.truncated, None)
        }
        Sem::Pg => {
            let mut rho = std::collections::BTreeMap::new();
            for b in valuation {
                let (x, v) = parse_binding(b)?;
                rho.insert(x.to_string(), ctx.graph(v)?);
            }
            let opts = PgOptions {
                bound: sem.bound,
                probes: sem.probes,
                seed: sem.seed,
                ..PgOptions::default()
            };
            let m = pg_meaning(&tss, &t, &rho, &family, &opts)?;
            (m.meaning.graph, m.meaning.truncated, Some(m.adequacy))
        }
    };
    let mut text = serialize_graph("meaning", &graph);
    if truncated {
        text.push_str(&format!("# truncated at {} states\n", sem.bound));
    }
    let refuted = matches!(adequacy, Some(Adequacy::Refuted { .. }));
    match &adequacy {
        Some(Adequacy::PureHenceManifest) => text.push_str("# adequate: the specification is pure\n"),
        Some(Adequacy::VerifiedUpTo { probes }) => {
            text.push_str(&format!("# adequate up to {} random enlargements\n", probes.len()))
        }
        Some(Adequacy::Refuted { probe, difference }) => {
            text.push_str(&format!("# not adequate: enlargement {probe} changes the meaning: {difference}\n"))
        }
        None => {}
    }
    ctx.emit(text, json!({ "graph": graph, "truncated": truncated, "adequacy": adequacy }));
    Ok(if truncated || refuted { EXIT_UNKNOWN } else { EXIT_PASS })
}

fn bisim(ctx: &mut Ctx, graphs: &str, eq: Eq, left: &str, right: &str) -> Result<u8, Error> {
    ctx.families(&[graphs.to_string()])?;
    let (g, h) = (ctx.graph(left)?, ctx.graph(right)?);
    let r = bisimilar(eq.into(), &g, &h);
    let formula = r.witness.as_ref().map(|f| f.to_string());
    let text = match &formula {
        None => format!("{left} and {right} are bisimilar\n"),
        Some(f) => format!("{left} and {right} are not bisimilar\nwitness: {f} holds for {left} only\n"),
    };
    ctx.emit(text, json!({ "equivalent": r.equivalent, "witness": formula }));
    Ok(if r.equivalent { EXIT_PASS } else { EXIT_FAIL })
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Related => EXIT_PASS,
        Verdict::Unrelated => EXIT_FAIL,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

fn render_lift(t: &Term, u: &Term, v: &LiftVerdict) -> String {
    let word = match v.verdict {
        Verdict::Related => "related",
        Verdict::Unrelated => "unrelated",
        Verdict::Unknown => "unknown",
    };
    let c = &v.coverage;
    let mut text = format!("{t} and {u}: {word}\n");
    text.push_str(&format!("checked {} instances: {}\n", c.instances, c.description));
    if c.truncated > 0 {
        text.push_str(&format!("{} instances truncated\n", c.truncated));
    }
    if c.partial {
        text.push_str("instance space cut at its limit\n");
    }
    if c.approximate {
        text.push_str("proof search guessed over a bounded term universe\n");
    }
    if let Some(w) = &v.witness {
        text.push_str("witness:\n");
        for (x, val) in &w.valuation {
            text.push_str(&format!("  {x} := {}\n", val.trim_end().replace('\n', "\n       ")));
        }
        text.push_str(&format!("  roots {} vs {}\n", w.left_root, w.right_root));
        text.push_str(&format!("  formula {}\n", w.formula));
    }
    text
}

fn lift(ctx: &mut Ctx, path: &str, sem: &SemanticsArgs, depth: usize, left: &str, right: &str) -> Result<u8, Error> {
    let tss = ctx.tss(path)?;
    let family = ctx.families(&sem.family)?;
    let t = ctx.ws.term(left, &tss.signature)?;
    let u = ctx.ws.term(right, &tss.signature)?;
    let limits = LiftLimits {
        bound: sem.bound,
        ..LiftLimits::default()
    };
    let v = match sem.semantics {
        Sem::Ci => lift_ci(&tss, &t, &u, sem.eq.into(), depth, &limits)?,
        Sem::Pg => {
            let probe = ProbeOptions {
                probes: sem.probes,
                seed: sem.seed,
                ..ProbeOptions::default()
            };
            lift_pg(&tss, &t, &u, sem.eq.into(), &family, &limits, &probe)?
        }
    };
    ctx.emit(render_lift(&t, &u, &v), json!(v));
    Ok(verdict_code(v.verdict))
}

#[allow(clippy::too_many_arguments)]
fn check(
    ctx: &mut Ctx,
    path: &str,
    sem: &SemanticsArgs,
    req: ReqArg,
    terms: &[String],
    samples: usize,
    depth: usize,
    unfold: bool,
) -> Result<u8, Error> {
    let mut tss = ctx.tss(path)?;
    tss.recursion_unfolding |= unfold;
    let family = ctx.families(&sem.family)?;
    let cfg = CheckConfig {
        depth,
        samples,
        seed: sem.seed,
        bound: sem.bound,
        ..CheckConfig::new(sem.semantics.into(), sem.eq.into()).with_family(family)
    };
    let terms = terms
        .iter()
        .map(|t| ctx.ws.term(t, &tss.signature))
        .collect::<Result<Vec<Term>, Error>>()?;
    let reqs: Vec<Requirement> = match req {
        ReqArg::Var => vec![Requirement::Var1],
        ReqArg::Ops => vec![Requirement::CompOps2],
        ReqArg::Rec => vec![Requirement::CompRec3],
        ReqArg::Alpha => vec![Requirement::Alpha4],
        ReqArg::Rdp => vec![Requirement::RDP5],
        ReqArg::Congruence => vec![Requirement::Congruence9],
        ReqArg::All => {
            let mut all = vec![Requirement::Var1, Requirement::CompOps2, Requirement::Alpha4];
            if tss.recursion_unfolding {
                all.extend([Requirement::CompRec3, Requirement::RDP5]);
            }
            all.push(Requirement::Congruence9);
            all
        }
    };
    let mut reports: Vec<CheckReport> = Vec::new();
    for r in reqs {
        let report = match r {
            Requirement::Congruence9 => sanity::check_congruence(&tss, &cfg, &terms)?,
            other => sanity::check(&tss, &cfg, other)?,
        };
        reports.push(report);
    }
    let text: Vec<String> = reports.iter().map(|r| r.to_string()).collect();
    ctx.emit(text.join("\n"), json!(reports));
    let code = if reports.iter().any(|r| r.verdict == CheckVerdict::Fail) {
        EXIT_FAIL
    } else if reports.iter().any(|r| r.verdict == CheckVerdict::Unknown) {
        EXIT_UNKNOWN
    } else {
        EXIT_PASS
    };
    Ok(code)
}

fn sum(ctx: &mut Ctx, left: &str, right: &str, union: bool) -> Result<u8, Error> {
    let p = ctx.tss(left)?;
    let q = ctx.tss(right)?;
    let s = if union { tss_union(&p, &q)? } else { tss_sum(&p, &q)? };
    let text = serialize_tss(&s);
    ctx.emit(&text, json!({ "name": s.name, "text": text }));
    Ok(EXIT_PASS)
}

fn export_dot(
    ctx: &mut Ctx,
    graphs: Option<String>,
    tss: Option<String>,
    name: Option<String>,
    bound: usize,
) -> Result<u8, Error> {
    match (graphs, tss) {
        (Some(file), None) => {
            let fam = ctx.ws.load_family(&file)?;
            let mut names: Vec<String> = ctx.ws.graph_names().map(str::to_string).collect();
            if let Some(n) = name {
                names.retain(|g| *g == n);
                if names.is_empty() {
                    return Err(Error::Invalid(format!("no graph named `{n}` in {fam}")));
                }
            }
            let mut text = String::new();
            let mut docs = Vec::new();
            for n in names {
                let dot = to_dot(&n, &ctx.graph(&n)?);
                text.push_str(&dot);
                docs.push(json!({ "name": n, "dot": dot }));
            }
            ctx.emit(text, json!(docs));
            Ok(EXIT_PASS)
        }
        (None, Some(path)) => {
            let spec = ctx.tss(&path)?;
            let term = name.ok_or_else(|| Error::Invalid("a root term is required with --tss".into()))?;
            let p = ctx.ws.term(&term, &spec.signature)?;
            let explored = Engine::new(&spec)?.lts(std::slice::from_ref(&p), bound)?;
            let g = explored.to_lts().rooted(&p.to_string());
            let dot = to_dot(&spec.name, &g);
            ctx.emit(&dot, json!({ "name": spec.name, "dot": dot, "truncated": explored.truncated }));
            Ok(if explored.truncated { EXIT_UNKNOWN } else { EXIT_PASS })
        }
        _ => Err(Error::Invalid("give either --graphs or --tss".into())),
    }
}
