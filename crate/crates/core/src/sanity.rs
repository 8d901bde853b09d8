//! Sample-based checkers for the sanity requirements of a semantics.
//!
//! Every requirement is phrased as an implication: if the premise pairs are
//! equivalent then the two sides of the conclusion are. A [`Sample`] carries
//! both, fully instantiated, so a failing sample can be replayed on its own
//! with [`check_sample`]. Checks are falsifiers over generated samples and
//! never proofs; each report states the sample space it covered.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::equivalence::{bisimilar, lift_ci, lift_pg, minimize, EquivalenceKind, LiftLimits, LiftVerdict, ProbeOptions, Verdict, TAU};
use crate::error::{Error, Result};
use crate::graph::{random_graph, transition_closure, GraphFamily, ProcessGraph};
use crate::semantics::{Interp, Semantics, Valuation, Value};
use crate::syntax::serialize_graph;
use crate::term::{all_names, alpha_eq, free_vars, is_guarded, substitute, unfold_abbrev, RecSpec, Signature, Substitution, Term, PREFIX};
use crate::tss::{tss_sum, tss_union, Tss};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Requirement {
    /// A variable means what the valuation assigns to it.
    Var1,
    /// Operators are compositional.
    CompOps2,
    /// Recursion is compositional.
    CompRec3,
    /// Meaning is invariant under renaming of bound variables.
    Alpha4,
    /// Recursive definition principle.
    RDP5,
    /// Equivalent valuations give equivalent meanings.
    Congruence9,
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Requirement::Var1 => "variables",
            Requirement::CompOps2 => "compositional operators",
            Requirement::CompRec3 => "compositional recursion",
            Requirement::Alpha4 => "alpha-invariance",
            Requirement::RDP5 => "recursive definition principle",
            Requirement::Congruence9 => "congruence",
        };
        f.write_str(s)
    }
}

/// One side of a comparison: the meaning of a term under a valuation, or a
/// value standing for itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Side {
    Meaning { term: Term, valuation: Valuation },
    Value(Value),
}

impl Side {
    pub fn meaning(term: Term, valuation: Valuation) -> Self {
        Side::Meaning { term, valuation }
    }

    fn graphs(&self) -> Vec<ProcessGraph> {
        let vals: Vec<&Value> = match self {
            Side::Meaning { valuation, .. } => valuation.values().collect(),
            Side::Value(v) => vec![v],
        };
        vals.into_iter()
            .filter_map(|v| match v {
                Value::Graph(g) => Some(g.clone()),
                Value::Term(_) => None,
            })
            .collect()
    }
}

fn render_value(v: &Value) -> String {
    match v {
        Value::Term(t) => t.to_string(),
        Value::Graph(g) => {
            let text = serialize_graph(&crate::graph::constant_name(g), g);
            text.split_whitespace().collect::<Vec<_>>().join(" ")
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Value(v) => f.write_str(&render_value(v)),
            Side::Meaning { term, valuation } => {
                write!(f, "[[{term}]]")?;
                if !valuation.is_empty() {
                    let parts: Vec<String> = valuation.iter().map(|(x, v)| format!("{x} := {}", render_value(v))).collect();
                    write!(f, "({})", parts.join("; "))?;
                }
                Ok(())
            }
        }
    }
}

/// A fully instantiated instance of a requirement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub premises: Vec<(Side, Side)>,
    pub left: Side,
    pub right: Side,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SampleVerdict {
    Holds,
    Fails,
    /// Some premise pair is not equivalent; the implication holds trivially.
    Vacuous,
    /// Exploration hit the state bound.
    Truncated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleRecord {
    pub requirement: Requirement,
    pub premises: Vec<(String, String)>,
    pub left: String,
    pub right: String,
    pub verdict: SampleVerdict,
    /// Distinguishing formula on failure, or the failing premise when vacuous.
    pub evidence: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CheckVerdict {
    PassOnSamples,
    Fail,
    Unknown,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub samples: usize,
    pub holds: usize,
    pub fails: usize,
    pub vacuous: usize,
    pub truncated: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(skip)]
    pub sample: Sample,
    pub record: SampleRecord,
}

/// Rules whose conclusion has a bare variable as its source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SyntacticCheck {
    pub satisfied: bool,
    pub variable_sources: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub requirement: Requirement,
    pub semantics: Semantics,
    pub kind: EquivalenceKind,
    pub verdict: CheckVerdict,
    pub witness: Option<Witness>,
    pub sample_space: String,
    pub counts: Counts,
    pub syntactic: Option<SyntacticCheck>,
    pub approximate: bool,
    pub notes: Vec<String>,
    pub records: Vec<SampleRecord>,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match self.verdict {
            CheckVerdict::PassOnSamples => "pass on samples",
            CheckVerdict::Fail => "FAIL",
            CheckVerdict::Unknown => "unknown",
        };
        let sem = match self.semantics {
            Semantics::ClosedTerm => "closed-term",
            Semantics::ProcessGraph => "process-graph",
        };
        writeln!(f, "requirement: {}", self.requirement)?;
        writeln!(f, "semantics:   {sem}, {:?} bisimilarity", self.kind)?;
        writeln!(f, "verdict:     {verdict}")?;
        writeln!(f, "samples:     {}", self.sample_space)?;
        let c = &self.counts;
        writeln!(
            f,
            "counts:      {} samples, {} hold, {} fail, {} vacuous, {} truncated",
            c.samples, c.holds, c.fails, c.vacuous, c.truncated
        )?;
        if let Some(s) = &self.syntactic {
            if s.satisfied {
                writeln!(f, "syntactic:   no rule has a variable as conclusion source")?;
            } else {
                writeln!(f, "syntactic:   variable conclusion source in")?;
                for r in &s.variable_sources {
                    writeln!(f, "               {r}")?;
                }
            }
        }
        if self.approximate {
            writeln!(f, "note:        proof search guessed over a bounded term universe")?;
        }
        for n in &self.notes {
            writeln!(f, "note:        {n}")?;
        }
        if let Some(w) = &self.witness {
            let r = &w.record;
            writeln!(f, "witness:")?;
            for (l, rt) in &r.premises {
                writeln!(f, "  premise  {l}  ~  {rt}")?;
            }
            writeln!(f, "  left     {}", r.left)?;
            writeln!(f, "  right    {}", r.right)?;
            if let Some(e) = &r.evidence {
                writeln!(f, "  formula  {e}")?;
            }
        }
        Ok(())
    }
}

/// Shared knobs for sample generation and evaluation.
#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub semantics: Semantics,
    pub kind: EquivalenceKind,
    /// Graphs the process-graph samples start from.
    pub family: GraphFamily,
    /// Depth of generated terms.
    pub depth: usize,
    /// Samples per check.
    pub samples: usize,
    /// Random values added to the value pool.
    pub pool: usize,
    pub max_states: usize,
    pub seed: u64,
    pub bound: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            semantics: Semantics::ClosedTerm,
            kind: EquivalenceKind::Strong,
            family: GraphFamily::new(),
            depth: 3,
            samples: 200,
            pool: 40,
            max_states: 4,
            seed: 0,
            bound: 2_000,
        }
    }
}

impl CheckConfig {
    pub fn new(semantics: Semantics, kind: EquivalenceKind) -> Self {
        CheckConfig {
            semantics,
            kind,
            ..Self::default()
        }
    }

    pub fn with_family(mut self, family: GraphFamily) -> Self {
        self.family = family;
        self
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

struct Evaluator {
    interp: Interp,
    kind: EquivalenceKind,
}

impl Evaluator {
    fn new(tss: &Tss, cfg: &CheckConfig) -> Result<Self> {
        Ok(Evaluator {
            interp: Interp::new(tss, cfg.semantics, &cfg.family, cfg.bound)?,
            kind: cfg.kind,
        })
    }

    /// Meaning graph and whether it is incomplete. Running out of search
    /// budget counts as incomplete rather than as an error.
    fn graph(&mut self, side: &Side) -> Result<(ProcessGraph, bool)> {
        match self.graph_inner(side) {
            Err(Error::SearchBudgetExceeded(_)) => Ok((ProcessGraph::single("budget"), true)),
            other => other,
        }
    }

    fn graph_inner(&mut self, side: &Side) -> Result<(ProcessGraph, bool)> {
        match side {
            Side::Meaning { term, valuation } => {
                let m = self.interp.meaning(term, valuation)?;
                Ok((m.graph, m.truncated))
            }
            Side::Value(Value::Graph(g)) => Ok((crate::graph::reachable_part(g), false)),
            Side::Value(Value::Term(p)) => {
                let m = self.interp.meaning_closed(p)?;
                Ok((m.graph, m.truncated))
            }
        }
    }

    fn evaluate(&mut self, requirement: Requirement, sample: &Sample) -> Result<SampleRecord> {
        let mut record = SampleRecord {
            requirement,
            premises: sample.premises.iter().map(|(l, r)| (l.to_string(), r.to_string())).collect(),
            left: sample.left.to_string(),
            right: sample.right.to_string(),
            verdict: SampleVerdict::Holds,
            evidence: None,
        };
        let mut truncated = false;
        for (i, (l, r)) in sample.premises.iter().enumerate() {
            let (gl, tl) = self.graph(l)?;
            let (gr, tr) = self.graph(r)?;
            if tl || tr {
                truncated = true;
                continue;
            }
            let res = bisimilar(self.kind, &gl, &gr);
            if !res.equivalent {
                record.verdict = SampleVerdict::Vacuous;
                record.evidence = Some(format!(
                    "premise {i} fails: {}",
                    res.witness.map(|f| f.to_string()).unwrap_or_default()
                ));
                return Ok(record);
            }
        }
        let (gl, tl) = self.graph(&sample.left)?;
        let (gr, tr) = self.graph(&sample.right)?;
        if truncated || tl || tr {
            record.verdict = SampleVerdict::Truncated;
            return Ok(record);
        }
        let res = bisimilar(self.kind, &gl, &gr);
        if !res.equivalent {
            record.verdict = SampleVerdict::Fails;
            record.evidence = res.witness.map(|f| f.to_string());
        }
        Ok(record)
    }
}

/// Evaluates one sample from scratch; used to replay witnesses.
pub fn check_sample(tss: &Tss, cfg: &CheckConfig, requirement: Requirement, sample: &Sample) -> Result<SampleRecord> {
    let mut ev = Evaluator::new(tss, cfg)?;
    let graphs: Vec<ProcessGraph> = sample
        .premises
        .iter()
        .flat_map(|(l, r)| [l.graphs(), r.graphs()])
        .chain([sample.left.graphs(), sample.right.graphs()])
        .flatten()
        .collect();
    ev.interp.ensure_graphs(graphs.iter())?;
    ev.evaluate(requirement, sample)
}

/// Evaluates the given samples and aggregates a report.
pub fn run_check(
    tss: &Tss,
    cfg: &CheckConfig,
    requirement: Requirement,
    samples: Vec<Sample>,
    sample_space: String,
) -> Result<CheckReport> {
    let mut ev = Evaluator::new(tss, cfg)?;
    let graphs: BTreeSet<ProcessGraph> = samples
        .iter()
        .flat_map(|s| {
            s.premises
                .iter()
                .flat_map(|(l, r)| [l.graphs(), r.graphs()])
                .chain([s.left.graphs(), s.right.graphs()])
                .flatten()
                .collect::<Vec<_>>()
        })
        .collect();
    ev.interp.ensure_graphs(graphs.iter())?;
    let mut counts = Counts::default();
    let mut records = Vec::with_capacity(samples.len());
    let mut witness: Option<Witness> = None;
    for s in &samples {
        let r = ev.evaluate(requirement, s)?;
        counts.samples += 1;
        match r.verdict {
            SampleVerdict::Holds => counts.holds += 1,
            SampleVerdict::Fails => {
                counts.fails += 1;
                let better = witness
                    .as_ref()
                    .is_none_or(|w| (r.left.len() + r.right.len(), &r.left, &r.right) < (w.record.left.len() + w.record.right.len(), &w.record.left, &w.record.right));
                if better {
                    witness = Some(Witness {
                        sample: s.clone(),
                        record: r.clone(),
                    });
                }
            }
            SampleVerdict::Vacuous => counts.vacuous += 1,
            SampleVerdict::Truncated => counts.truncated += 1,
        }
        records.push(r);
    }
    let verdict = if counts.fails > 0 {
        CheckVerdict::Fail
    } else if counts.truncated > 0 {
        CheckVerdict::Unknown
    } else {
        CheckVerdict::PassOnSamples
    };
    Ok(CheckReport {
        requirement,
        semantics: cfg.semantics,
        kind: cfg.kind,
        verdict,
        witness,
        sample_space,
        counts,
        syntactic: None,
        approximate: ev.interp.approximate(),
        notes: Vec::new(),
        records,
    })
}

// ---------------------------------------------------------------------------
// Sample generation

/// A random term of depth at most `depth` over `sig` with the given
/// variables as extra leaves; `None` when no leaf is available.
pub fn random_term<R: Rng>(rng: &mut R, sig: &Signature, vars: &[String], depth: usize) -> Option<Term> {
    let mut leaves: Vec<Term> = sig.iter().filter(|(_, n)| *n == 0).map(|(c, _)| Term::constant(c)).collect();
    leaves.extend(vars.iter().map(|x| Term::var(x)));
    let ops: Vec<(String, usize)> = sig.iter().filter(|(_, n)| *n > 0).map(|(f, n)| (f.to_string(), n)).collect();
    fn go<R: Rng>(rng: &mut R, leaves: &[Term], ops: &[(String, usize)], depth: usize) -> Option<Term> {
        let leaf = depth <= 1 || ops.is_empty() || (!leaves.is_empty() && rng.gen_bool(0.3));
        if leaf {
            return leaves.choose(rng).cloned();
        }
        let (f, n) = ops.choose(rng)?;
        let args = (0..*n).map(|_| go(rng, leaves, ops, depth - 1)).collect::<Option<Vec<_>>>()?;
        Some(Term::App(f.clone(), args))
    }
    go(rng, &leaves, &ops, depth)
}

fn prefixes(sig: &Signature) -> Vec<String> {
    sig.iter()
        .filter(|(f, n)| *n == 1 && f.starts_with(PREFIX))
        .map(|(f, _)| f.to_string())
        .collect()
}

/// Guarded closed recursive specifications, led by `{X = a.X}` and the
/// two-cycle `{X = a.Y, Y = b.X}`. Empty when the signature has no prefix
/// operators to guard with.
pub fn guarded_specs<R: Rng>(rng: &mut R, sig: &Signature, count: usize, depth: usize) -> Vec<(String, RecSpec)> {
    let pre = prefixes(sig);
    if pre.is_empty() || count == 0 {
        return Vec::new();
    }
    let p = |i: usize, t: Term| Term::app(&pre[i.min(pre.len() - 1)], vec![t]);
    let mut out = vec![
        ("X".to_string(), RecSpec::from_pairs([("X", p(0, Term::var("X")))])),
        ("X".to_string(), RecSpec::from_pairs([("X", p(0, Term::var("Y"))), ("Y", p(1, Term::var("X")))])),
    ];
    let mut seen: BTreeSet<Term> = out.iter().map(|(x, s)| crate::term::canonical(&Term::Rec(x.clone(), s.clone()))).collect();
    let mut attempts = 0;
    while out.len() < count && attempts < count * 200 {
        attempts += 1;
        let vars: Vec<String> = if rng.gen_bool(0.5) { vec!["X".into()] } else { vec!["X".into(), "Y".into()] };
        let mut spec = RecSpec::new();
        let mut ok = true;
        for v in &vars {
            match random_term(rng, sig, &vars, depth) {
                Some(body) => spec.insert(v.clone(), body),
                None => ok = false,
            }
        }
        if !ok {
            continue;
        }
        let t = Term::Rec("X".into(), spec.clone());
        if !is_guarded(&t) || !t.is_closed() || !vars.iter().all(|v| all_names(&t).contains(v)) {
            continue;
        }
        if seen.insert(crate::term::canonical(&t)) {
            out.push(("X".into(), spec));
        }
    }
    out.truncate(count);
    out
}

/// Renames every binder of `t` through `choose`, which receives the old name
/// and the names to avoid.
pub fn alpha_variant(t: &Term, choose: &mut dyn FnMut(&str, &BTreeSet<String>) -> String) -> Term {
    fn go(t: &Term, choose: &mut dyn FnMut(&str, &BTreeSet<String>) -> String, avoid: &mut BTreeSet<String>) -> Term {
        match t {
            Term::Var(_) => t.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| go(a, choose, avoid)).collect()),
            Term::Rec(x, spec) => {
                let names: BTreeMap<String, String> = spec
                    .vars()
                    .map(|y| {
                        let n = choose(y, avoid);
                        avoid.insert(n.clone());
                        (y.to_string(), n)
                    })
                    .collect();
                let gamma: Substitution = names.iter().map(|(y, n)| (y.clone(), Term::var(n))).collect();
                let mut out = RecSpec::new();
                for (y, body) in spec.iter() {
                    let inner = go(body, choose, avoid);
                    out.insert(names[y].clone(), substitute(&inner, &gamma));
                }
                Term::Rec(names[x].clone(), out)
            }
        }
    }
    let mut avoid = all_names(t);
    go(t, choose, &mut avoid)
}

/// A random injective renaming of all binders into fresh names.
pub fn random_alpha_variant<R: Rng>(rng: &mut R, t: &Term) -> Term {
    alpha_variant(t, &mut |y, avoid| loop {
        let n = format!("{}{}", y.trim_end_matches(|c: char| c.is_ascii_digit()), rng.gen_range(0..10_000));
        if !avoid.contains(&n) {
            break n;
        }
    })
}

fn tau_loop(g: &ProcessGraph) -> ProcessGraph {
    let mut h = g.clone();
    h.actions.insert(TAU.to_string());
    h.edges.insert((g.root.clone(), TAU.to_string(), g.root.clone()));
    h
}

fn tau_prefix(g: &ProcessGraph) -> ProcessGraph {
    let fresh = crate::term::fresh_name("r", &g.states.iter().cloned().collect());
    let mut h = g.clone();
    h.actions.insert(TAU.to_string());
    h.states.insert(fresh.clone());
    h.edges.insert((fresh.clone(), TAU.to_string(), g.root.clone()));
    h.root = fresh;
    h
}

/// Copies the root so that the result is strongly bisimilar but not
/// isomorphic.
fn split_root(g: &ProcessGraph) -> ProcessGraph {
    let fresh = crate::term::fresh_name("r", &g.states.iter().cloned().collect());
    let mut h = g.clone();
    h.states.insert(fresh.clone());
    let out: Vec<(String, String)> = g.successors(&g.root).map(|(a, t)| (a.to_string(), t.to_string())).collect();
    for (a, t) in out {
        h.edges.insert((fresh.clone(), a, t));
    }
    h.root = fresh;
    h
}

/// Values grouped into equivalence classes under the configured kind.
struct Pool {
    values: Vec<Value>,
    pairs: Vec<(usize, usize)>,
    classes: usize,
    description: String,
}

impl Pool {
    fn build(tss: &Tss, cfg: &CheckConfig, ev: &mut Evaluator, rng: &mut ChaCha8Rng) -> Result<Pool> {
        let (candidates, description) = match cfg.semantics {
            Semantics::ClosedTerm => {
                let (dom, _) = crate::equivalence::closed_domain(tss, cfg.depth, cfg.pool);
                let mut vals: Vec<Term> = dom;
                let mut seen: BTreeSet<Term> = vals.iter().cloned().collect();
                for _ in 0..cfg.pool * 4 {
                    if seen.len() >= vals.len().max(cfg.pool * 2) && vals.len() >= cfg.pool * 2 {
                        break;
                    }
                    if let Some(t) = random_term(rng, &tss.signature, &[], cfg.depth + 1) {
                        if seen.insert(t.clone()) {
                            vals.push(t);
                        }
                    }
                }
                let n = vals.len();
                (
                    vals.into_iter().map(Value::Term).collect::<Vec<_>>(),
                    format!("{n} closed terms of depth <= {}", cfg.depth + 1),
                )
            }
            Semantics::ProcessGraph => {
                let actions: Vec<String> = tss.actions.iter().cloned().collect();
                let mut base: Vec<ProcessGraph> = transition_closure(&cfg.family).iter().cloned().collect();
                let given = base.len();
                for i in 0..cfg.pool {
                    let g = random_graph(rng, cfg.max_states, &actions, 0.25).rename(|s| format!("q{i}_{s}"));
                    base.push(g);
                }
                let mut vals: Vec<ProcessGraph> = Vec::new();
                let mut seen = BTreeSet::new();
                for g in base {
                    let mut variants = vec![g.clone(), minimize(&g, cfg.kind), split_root(&g)];
                    if cfg.kind == EquivalenceKind::Weak && tss.actions.contains(TAU) {
                        variants.push(tau_loop(&g));
                        variants.push(tau_prefix(&g));
                    }
                    for v in variants {
                        if seen.insert(v.clone()) {
                            vals.push(v);
                        }
                    }
                }
                let n = vals.len();
                (
                    vals.into_iter().map(Value::Graph).collect(),
                    format!(
                        "{n} graphs: the closure of {given} given, {} random with <= {} states, and equivalent variants",
                        cfg.pool, cfg.max_states
                    ),
                )
            }
        };
        let graphs: Vec<ProcessGraph> = candidates
            .iter()
            .filter_map(|v| match v {
                Value::Graph(g) => Some(g.clone()),
                Value::Term(_) => None,
            })
            .collect();
        ev.interp.ensure_graphs(graphs.iter())?;
        let mut values = Vec::new();
        let mut reps: Vec<(ProcessGraph, Vec<usize>)> = Vec::new();
        for v in candidates {
            let (g, truncated) = ev.graph(&Side::Value(v.clone()))?;
            if truncated {
                continue;
            }
            let idx = values.len();
            values.push(v);
            match reps.iter_mut().find(|(r, _)| bisimilar(cfg.kind, r, &g).equivalent) {
                Some((_, members)) => members.push(idx),
                None => reps.push((g, vec![idx])),
            }
        }
        let mut pairs = Vec::new();
        for (_, members) in &reps {
            for &i in members {
                for &j in members {
                    pairs.push((i, j));
                }
            }
        }
        Ok(Pool {
            values,
            pairs,
            classes: reps.len(),
            description,
        })
    }

    fn describe(&self) -> String {
        format!(
            "{} in {} equivalence classes, {} equivalent pairs",
            self.description,
            self.classes,
            self.pairs.len()
        )
    }

    /// Distinct tuples of equivalent pairs, one pair per variable.
    fn pair_tuples(&self, rng: &mut ChaCha8Rng, arity: usize, count: usize) -> Vec<Vec<(Value, Value)>> {
        if self.pairs.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        if arity == 1 {
            let mut order: Vec<usize> = (0..self.pairs.len()).collect();
            order.shuffle(rng);
            // Prefer pairs of distinct values.
            order.sort_by_key(|&k| self.pairs[k].0 == self.pairs[k].1);
            for k in order.into_iter().take(count) {
                let (i, j) = self.pairs[k];
                out.push(vec![(self.values[i].clone(), self.values[j].clone())]);
            }
            return out;
        }
        let mut attempts = 0;
        while out.len() < count && attempts < count * 20 {
            attempts += 1;
            let ks: Vec<usize> = (0..arity).map(|_| rng.gen_range(0..self.pairs.len())).collect();
            if seen.insert(ks.clone()) {
                out.push(
                    ks.iter()
                        .map(|&k| (self.values[self.pairs[k].0].clone(), self.values[self.pairs[k].1].clone()))
                        .collect(),
                );
            }
        }
        out
    }
}

fn arg_vars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn split_valuations(vars: &[String], tuple: &[(Value, Value)]) -> (Valuation, Valuation, Vec<(Side, Side)>) {
    let rho: Valuation = vars.iter().cloned().zip(tuple.iter().map(|(l, _)| l.clone())).collect();
    let nu: Valuation = vars.iter().cloned().zip(tuple.iter().map(|(_, r)| r.clone())).collect();
    let premises = tuple.iter().map(|(l, r)| (Side::Value(l.clone()), Side::Value(r.clone()))).collect();
    (rho, nu, premises)
}

fn require_unfolding(tss: &Tss) -> Result<()> {
    if tss.recursion_unfolding {
        Ok(())
    } else {
        Err(Error::RequiresUnfolding)
    }
}

// ---------------------------------------------------------------------------
// The checks

/// Rules with a bare variable as conclusion source.
pub fn syntactic_var_check(tss: &Tss) -> SyntacticCheck {
    let variable_sources: Vec<String> = tss
        .rules
        .iter()
        .filter(|r| matches!(r.conclusion.source, Term::Var(_)))
        .map(|r| r.to_string())
        .collect();
    SyntacticCheck {
        satisfied: variable_sources.is_empty(),
        variable_sources,
    }
}

/// `[[x]](rho)` against `rho(x)` for every value in the pool.
pub fn check_var_requirement(tss: &Tss, cfg: &CheckConfig) -> Result<CheckReport> {
    let mut ev = Evaluator::new(tss, cfg)?;
    let mut rng = cfg.rng(1);
    let pool = Pool::build(tss, cfg, &mut ev, &mut rng)?;
    let mut values = pool.values.clone();
    values.shuffle(&mut rng);
    values.truncate(cfg.samples);
    let samples = values
        .into_iter()
        .map(|v| Sample {
            premises: Vec::new(),
            left: Side::meaning(Term::var("x"), Valuation::from([("x".to_string(), v.clone())])),
            right: Side::Value(v),
        })
        .collect();
    let mut report = run_check(tss, cfg, Requirement::Var1, samples, format!("x over {}", pool.describe()))?;
    report.syntactic = Some(syntactic_var_check(tss));
    Ok(report)
}

/// Samples `f(x1..xn)` under pointwise equivalent valuations.
pub fn comp_operator_samples(tss: &Tss, cfg: &CheckConfig) -> Result<(Vec<Sample>, String)> {
    let ops: Vec<(String, usize)> = tss.signature.iter().filter(|(_, n)| *n > 0).map(|(f, n)| (f.to_string(), n)).collect();
    if ops.is_empty() {
        return Ok((Vec::new(), "no operators of positive arity".into()));
    }
    let mut ev = Evaluator::new(tss, cfg)?;
    let mut rng = cfg.rng(2);
    let pool = Pool::build(tss, cfg, &mut ev, &mut rng)?;
    let per = cfg.samples.div_ceil(ops.len()).max(1);
    let mut samples = Vec::new();
    for (f, n) in &ops {
        let vars = arg_vars(*n);
        let t = Term::App(f.clone(), vars.iter().map(|x| Term::var(x)).collect());
        for tuple in pool.pair_tuples(&mut rng, *n, per) {
            let (rho, nu, premises) = split_valuations(&vars, &tuple);
            samples.push(Sample {
                premises,
                left: Side::meaning(t.clone(), rho),
                right: Side::meaning(t.clone(), nu),
            });
        }
    }
    Ok((samples, format!("{} operators, arguments from {}", ops.len(), pool.describe())))
}

pub fn check_comp_operators(tss: &Tss, cfg: &CheckConfig) -> Result<CheckReport> {
    let (samples, space) = comp_operator_samples(tss, cfg)?;
    run_check(tss, cfg, Requirement::CompOps2, samples, space)
}

/// Instance of the recursion requirement for `<X|S>` against `<X|S'>`.
/// The premise compares every body under each of the given assignments to
/// the bound variables.
pub fn comp_recursion_sample(x: &str, s: &RecSpec, s2: &RecSpec, xis: &[Valuation]) -> Sample {
    let mut premises = Vec::new();
    for xi in xis {
        for (y, body) in s.iter() {
            if let Some(body2) = s2.get(y) {
                premises.push((Side::meaning(body.clone(), xi.clone()), Side::meaning(body2.clone(), xi.clone())));
            }
        }
    }
    Sample {
        premises,
        left: Side::meaning(Term::rec(x, s.clone()), Valuation::new()),
        right: Side::meaning(Term::rec(x, s2.clone()), Valuation::new()),
    }
}

/// `S` with every body unfolded once through the equations of `S`.
fn unfold_bodies(s: &RecSpec) -> RecSpec {
    let sigma: Substitution = s.iter().map(|(y, b)| (y.to_string(), b.clone())).collect();
    s.map_bodies(|b| substitute(b, &sigma))
}

/// Recursion samples pair each generated specification with itself and with
/// its one-step unfolding. Assignments to the bound variables are random pool
/// values plus the solution of the specification itself.
pub fn comp_recursion_samples(tss: &Tss, cfg: &CheckConfig) -> Result<(Vec<Sample>, String)> {
    require_unfolding(tss)?;
    let mut ev = Evaluator::new(tss, cfg)?;
    let mut rng = cfg.rng(3);
    let pool = Pool::build(tss, cfg, &mut ev, &mut rng)?;
    let (specs, dropped) = finite_guarded_specs(tss, cfg, (cfg.samples / 2).clamp(2, 20), 30)?;
    let mut samples = Vec::new();
    for (x, s) in &specs {
        let solution = solution_valuation(&mut ev, cfg.semantics, s)?;
        let mut xis = vec![solution];
        for _ in 0..2 {
            if pool.values.is_empty() {
                break;
            }
            xis.push(s.vars().map(|y| (y.to_string(), pool.values.choose(&mut rng).expect("nonempty").clone())).collect());
        }
        samples.push(comp_recursion_sample(x, s, s, &xis));
        samples.push(comp_recursion_sample(x, s, &unfold_bodies(s), &xis));
        if samples.len() >= cfg.samples {
            break;
        }
    }
    Ok((
        samples,
        format!(
            "{} finite guarded specifications ({dropped} infinite ones dropped) against themselves and their unfolding; bound variables from {} and the solution",
            specs.len(),
            pool.describe()
        ),
    ))
}

/// Keeps the specifications whose every recursion variable denotes a graph
/// that is explored completely within the bound.
fn finite_specs(ev: &mut Evaluator, specs: Vec<(String, RecSpec)>) -> Result<Vec<(String, RecSpec)>> {
    let mut out = Vec::new();
    for (x, s) in specs {
        let mut finite = true;
        for y in s.vars() {
            let (_, truncated) = ev.graph(&Side::Value(Value::Term(Term::rec(y, s.clone()))))?;
            finite &= !truncated;
        }
        if finite {
            out.push((x, s));
        }
    }
    Ok(out)
}

fn spec_interp(tss: &Tss, cfg: &CheckConfig) -> Result<Evaluator> {
    Evaluator::new(
        tss,
        &CheckConfig {
            semantics: Semantics::ClosedTerm,
            ..cfg.clone()
        },
    )
}

/// Generated guarded specifications with finite behaviour.
pub fn finite_guarded_specs(tss: &Tss, cfg: &CheckConfig, count: usize, salt: u64) -> Result<(Vec<(String, RecSpec)>, usize)> {
    let mut rng = cfg.rng(salt);
    let specs = guarded_specs(&mut rng, &tss.signature, count, cfg.depth);
    let generated = specs.len();
    let mut ev = spec_interp(tss, cfg)?;
    let kept = finite_specs(&mut ev, specs)?;
    let dropped = generated - kept.len();
    Ok((kept, dropped))
}

/// `Y |-> <Y|S>` for every bound variable, as a closed term or as its graph.
pub fn solution_valuation_for(tss: &Tss, cfg: &CheckConfig, s: &RecSpec) -> Result<Valuation> {
    let mut ev = Evaluator::new(tss, cfg)?;
    solution_valuation(&mut ev, cfg.semantics, s)
}

fn solution_valuation(ev: &mut Evaluator, semantics: Semantics, s: &RecSpec) -> Result<Valuation> {
    s.vars()
        .map(|y| {
            let t = Term::rec(y, s.clone());
            let v = match semantics {
                Semantics::ClosedTerm => Value::Term(t),
                Semantics::ProcessGraph => Value::Graph(ev.interp.meaning_closed(&t)?.graph),
            };
            Ok((y.to_string(), v))
        })
        .collect()
}

pub const COMP_REC_NOTE: &str =
    "the premise quantifies over all assignments to the bound variables; only the sampled ones are checked";

pub fn check_comp_recursion(tss: &Tss, cfg: &CheckConfig) -> Result<CheckReport> {
    let (samples, space) = comp_recursion_samples(tss, cfg)?;
    let mut report = run_check(tss, cfg, Requirement::CompRec3, samples, space)?;
    report.notes.push(COMP_REC_NOTE.into());
    Ok(report)
}

/// Terms with binders for alpha and recursion checks: the guarded
/// specifications and their images under each unary operator.
fn recursion_terms(tss: &Tss, cfg: &CheckConfig) -> Result<Vec<Term>> {
    let (specs, _) = finite_guarded_specs(tss, cfg, 12, 40)?;
    let mut out: Vec<Term> = Vec::new();
    for (x, s) in &specs {
        let r = Term::rec(x, s.clone());
        out.push(r.clone());
        for (f, n) in tss.signature.iter() {
            if n == 1 {
                out.push(Term::app(f, vec![r.clone()]));
            }
        }
    }
    Ok(out)
}

/// Meaning of a term against a random alpha-variant of it.
pub fn alpha_samples(tss: &Tss, cfg: &CheckConfig) -> Result<(Vec<Sample>, String)> {
    let mut rng = cfg.rng(4);
    let terms = recursion_terms(tss, cfg)?;
    let mut samples = Vec::new();
    if terms.is_empty() {
        return Ok((samples, "no guarded recursion over this signature".into()));
    }
    for i in 0..cfg.samples {
        let t = &terms[i % terms.len()];
        let v = random_alpha_variant(&mut rng, t);
        if !alpha_eq(t, &v) {
            return Err(Error::Invalid(format!("renaming of {t} produced {v}, which is not an alpha-variant")));
        }
        samples.push(Sample {
            premises: Vec::new(),
            left: Side::meaning(t.clone(), Valuation::new()),
            right: Side::meaning(v, Valuation::new()),
        });
    }
    Ok((samples, format!("{} random binder renamings of {} recursive terms", cfg.samples, terms.len())))
}

pub fn check_alpha(tss: &Tss, cfg: &CheckConfig) -> Result<CheckReport> {
    let (samples, space) = alpha_samples(tss, cfg)?;
    run_check(tss, cfg, Requirement::Alpha4, samples, space)
}

/// `<X|S>` against `<S_X|S>` for every bound variable `X`.
pub fn rdp_samples(specs: &[(String, RecSpec)]) -> Vec<Sample> {
    specs
        .iter()
        .flat_map(|(_, s)| {
            s.iter()
                .map(|(x, body)| Sample {
                    premises: Vec::new(),
                    left: Side::meaning(Term::rec(x, s.clone()), Valuation::new()),
                    right: Side::meaning(unfold_abbrev(s, body), Valuation::new()),
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

pub fn check_rdp(tss: &Tss, cfg: &CheckConfig) -> Result<CheckReport> {
    require_unfolding(tss)?;
    let (specs, dropped) = finite_guarded_specs(tss, cfg, cfg.samples.clamp(2, 40), 50)?;
    let samples = rdp_samples(&specs);
    run_check(
        tss,
        cfg,
        Requirement::RDP5,
        samples,
        format!("{} finite guarded specifications ({dropped} infinite ones dropped)", specs.len()),
    )
}

/// `[[t]](rho)` against `[[t]](nu)` with `rho` and `nu` pointwise equivalent.
pub fn congruence_samples(tss: &Tss, cfg: &CheckConfig, terms: &[Term]) -> Result<(Vec<Sample>, String)> {
    let mut ev = Evaluator::new(tss, cfg)?;
    let mut rng = cfg.rng(6);
    let pool = Pool::build(tss, cfg, &mut ev, &mut rng)?;
    let mut samples = Vec::new();
    if terms.is_empty() {
        return Ok((samples, "no terms".into()));
    }
    let per = cfg.samples.div_ceil(terms.len()).max(1);
    for t in terms {
        let vars: Vec<String> = free_vars(t).into_iter().collect();
        if vars.is_empty() {
            samples.push(Sample {
                premises: Vec::new(),
                left: Side::meaning(t.clone(), Valuation::new()),
                right: Side::meaning(t.clone(), Valuation::new()),
            });
            continue;
        }
        for tuple in pool.pair_tuples(&mut rng, vars.len(), per) {
            let (rho, nu, premises) = split_valuations(&vars, &tuple);
            samples.push(Sample {
                premises,
                left: Side::meaning(t.clone(), rho),
                right: Side::meaning(t.clone(), nu),
            });
        }
    }
    Ok((samples, format!("{} terms, valuations from {}", terms.len(), pool.describe())))
}

/// Random open terms over `x` and `y`.
pub fn random_open_terms(tss: &Tss, cfg: &CheckConfig, count: usize) -> Vec<Term> {
    let mut rng = cfg.rng(7);
    let vars = vec!["x".to_string(), "y".to_string()];
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for _ in 0..count * 20 {
        if out.len() >= count {
            break;
        }
        if let Some(t) = random_term(&mut rng, &tss.signature, &vars, cfg.depth) {
            if !free_vars(&t).is_empty() && seen.insert(t.clone()) {
                out.push(t);
            }
        }
    }
    out
}

/// Congruence over the given terms, or random open terms when none given.
pub fn check_congruence(tss: &Tss, cfg: &CheckConfig, terms: &[Term]) -> Result<CheckReport> {
    let terms = if terms.is_empty() { random_open_terms(tss, cfg, 10) } else { terms.to_vec() };
    let (samples, space) = congruence_samples(tss, cfg, &terms)?;
    run_check(tss, cfg, Requirement::Congruence9, samples, space)
}

/// Runs the named requirement with generated samples.
pub fn check(tss: &Tss, cfg: &CheckConfig, requirement: Requirement) -> Result<CheckReport> {
    match requirement {
        Requirement::Var1 => check_var_requirement(tss, cfg),
        Requirement::CompOps2 => check_comp_operators(tss, cfg),
        Requirement::CompRec3 => check_comp_recursion(tss, cfg),
        Requirement::Alpha4 => check_alpha(tss, cfg),
        Requirement::RDP5 => check_rdp(tss, cfg),
        Requirement::Congruence9 => check_congruence(tss, cfg, &[]),
    }
}

// ---------------------------------------------------------------------------
// Expressiveness under extension

/// A translation given per function symbol as a term over `x1..xn`; symbols
/// without an entry translate to themselves.
pub type Translation = BTreeMap<String, Term>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionRow {
    pub semantics: Semantics,
    pub before: Verdict,
    pub after: Verdict,
    pub before_detail: Vec<LiftVerdict>,
    pub after_detail: Vec<LiftVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    /// Pairs `f(x1..xn)` and its translation that must be related.
    pub conditions: Vec<(String, String)>,
    pub rows: Vec<ExtensionRow>,
}

impl fmt::Display for ExtensionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |v: Verdict| match v {
            Verdict::Related => "valid",
            Verdict::Unrelated => "invalid",
            Verdict::Unknown => "unknown",
        };
        if self.conditions.is_empty() {
            writeln!(f, "conditions: none (the translation is the identity)")?;
        }
        for (l, r) in &self.conditions {
            writeln!(f, "condition: {l} ~ {r}")?;
        }
        writeln!(f, "{:<14} {:<9} {:<9}", "semantics", "before", "after")?;
        for row in &self.rows {
            let sem = match row.semantics {
                Semantics::ClosedTerm => "closed-term",
                Semantics::ProcessGraph => "process-graph",
            };
            writeln!(f, "{sem:<14} {:<9} {:<9}", word(row.before), word(row.after))?;
        }
        Ok(())
    }
}

/// Options for [`conservative_extension_demo`].
#[derive(Debug, Clone)]
pub struct ExtensionOptions {
    pub kind: EquivalenceKind,
    pub family: GraphFamily,
    pub depth: usize,
    pub limits: LiftLimits,
    pub probe: ProbeOptions,
}

fn combine(verdicts: &[LiftVerdict]) -> Verdict {
    if verdicts.iter().any(|v| v.verdict == Verdict::Unrelated) {
        Verdict::Unrelated
    } else if verdicts.iter().any(|v| v.verdict == Verdict::Unknown) {
        Verdict::Unknown
    } else {
        Verdict::Related
    }
}

/// Validity of a translation from `p1` into `p2`, before and after adding `q`
/// to both, under both semantics. The translation is valid when every
/// operator of `p1` is related to its image.
pub fn conservative_extension_demo(
    p1: &Tss,
    p2: &Tss,
    q: &Tss,
    translation: &Translation,
    opts: &ExtensionOptions,
) -> Result<ExtensionReport> {
    let mut conditions = Vec::new();
    for (f, n) in p1.signature.iter() {
        let lhs = Term::App(f.to_string(), arg_vars(n).iter().map(|x| Term::var(x)).collect());
        let rhs = match translation.get(f) {
            Some(t) => t.clone(),
            None if p2.signature.arity(f) == Some(n) => lhs.clone(),
            None => return Err(Error::Invalid(format!("translation has no image for `{f}`"))),
        };
        p2.signature.check(&rhs).map_err(Error::from)?;
        if rhs != lhs {
            conditions.push((lhs, rhs));
        }
    }
    let before = tss_union(p1, p2)?;
    let after = tss_union(&tss_sum(p1, q)?, &tss_sum(p2, q)?)?;
    let eval = |tss: &Tss, sem: Semantics| -> Result<Vec<LiftVerdict>> {
        conditions
            .iter()
            .map(|(l, r)| match sem {
                Semantics::ClosedTerm => lift_ci(tss, l, r, opts.kind, opts.depth, &opts.limits),
                Semantics::ProcessGraph => lift_pg(tss, l, r, opts.kind, &opts.family, &opts.limits, &opts.probe),
            })
            .collect()
    };
    let mut rows = Vec::new();
    for sem in [Semantics::ClosedTerm, Semantics::ProcessGraph] {
        let b = eval(&before, sem)?;
        let a = eval(&after, sem)?;
        rows.push(ExtensionRow {
            semantics: sem,
            before: combine(&b),
            after: combine(&a),
            before_detail: b,
            after_detail: a,
        });
    }
    Ok(ExtensionReport {
        conditions: conditions.iter().map(|(l, r)| (l.to_string(), r.to_string())).collect(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::syntax::parse_term;

    fn term(tss: &Tss, s: &str) -> Term {
        parse_term(s, &tss.signature).unwrap()
    }

    fn small(sem: Semantics, kind: EquivalenceKind) -> CheckConfig {
        CheckConfig {
            samples: 40,
            pool: 12,
            ..CheckConfig::new(sem, kind)
        }
    }

    #[test]
    fn closed_term_semantics_satisfies_the_variable_requirement() {
        let tss = corpus::tss("sec11-transclosure").unwrap();
        let r = check_var_requirement(&tss, &small(Semantics::ClosedTerm, EquivalenceKind::Strong)).unwrap();
        assert_eq!(r.verdict, CheckVerdict::PassOnSamples);
        assert!(!r.syntactic.unwrap().satisfied);
    }

    #[test]
    fn transitive_closure_breaks_the_variable_requirement() {
        let tss = corpus::tss("sec11-transclosure").unwrap();
        let cfg = CheckConfig {
            pool: 0,
            ..CheckConfig::new(Semantics::ProcessGraph, EquivalenceKind::Strong).with_family(corpus::family("sec11-chain").unwrap())
        };
        let r = check_var_requirement(&tss, &cfg).unwrap();
        assert_eq!(r.verdict, CheckVerdict::Fail);
        let w = r.witness.unwrap();
        let replay = check_sample(&tss, &cfg, Requirement::Var1, &w.sample).unwrap();
        assert_eq!(replay, w.record);
    }

    #[test]
    fn operators_of_example_one_are_compositional() {
        let tss = corpus::tss("ex1").unwrap();
        for sem in [Semantics::ClosedTerm, Semantics::ProcessGraph] {
            let r = check_comp_operators(&tss, &small(sem, EquivalenceKind::Strong)).unwrap();
            assert_eq!(r.verdict, CheckVerdict::PassOnSamples, "{r}");
            assert!(r.counts.holds > 0);
        }
    }

    #[test]
    fn constants_only_is_vacuous() {
        let tss = corpus::tss("sec11-transclosure").unwrap();
        let r = check_comp_operators(&tss, &small(Semantics::ClosedTerm, EquivalenceKind::Strong)).unwrap();
        assert_eq!(r.verdict, CheckVerdict::PassOnSamples);
        assert_eq!(r.counts.samples, 0);
    }

    #[test]
    fn sequencing_is_not_weakly_compositional_on_graphs() {
        let tss = corpus::tss("sec10-seq").unwrap();
        let fam = corpus::family("ex10").unwrap();
        let rho = fam.iter().next().unwrap().clone();
        let nu = fam.iter().nth(1).unwrap().clone();
        let b = corpus::graph("sec9-b", "bstep").unwrap();
        let cfg = CheckConfig::new(Semantics::ProcessGraph, EquivalenceKind::Weak);
        let vars = arg_vars(2);
        let t = term(&tss, "seq(x1, x2)");
        let tuple = vec![(Value::Graph(rho), Value::Graph(nu)), (Value::Graph(b.clone()), Value::Graph(b))];
        let (r, n, premises) = split_valuations(&vars, &tuple);
        let sample = Sample {
            premises,
            left: Side::meaning(t.clone(), r),
            right: Side::meaning(t, n),
        };
        let rec = check_sample(&tss, &cfg, Requirement::CompOps2, &sample).unwrap();
        assert_eq!(rec.verdict, SampleVerdict::Fails);
    }

    #[test]
    fn recursion_checks_on_example_one() {
        let mut tss = corpus::tss("ex1").unwrap();
        tss.recursion_unfolding = true;
        let cfg = small(Semantics::ClosedTerm, EquivalenceKind::Strong);
        for req in [Requirement::CompRec3, Requirement::Alpha4, Requirement::RDP5] {
            let r = check(&tss, &cfg, req).unwrap();
            assert_eq!(r.verdict, CheckVerdict::PassOnSamples, "{r}");
        }
        tss.recursion_unfolding = false;
        assert!(matches!(check_rdp(&tss, &cfg), Err(Error::RequiresUnfolding)));
    }

    #[test]
    fn loop_against_its_unfolding() {
        let mut tss = corpus::tss("ex1").unwrap();
        tss.recursion_unfolding = true;
        let cfg = small(Semantics::ClosedTerm, EquivalenceKind::Strong);
        let s = RecSpec::from_pairs([("X", term(&tss, "a.X"))]);
        let s2 = RecSpec::from_pairs([("X", term(&tss, "a.a.X"))]);
        let xi = solution_valuation_for(&tss, &cfg, &s).unwrap();
        let rec = check_sample(&tss, &cfg, Requirement::CompRec3, &comp_recursion_sample("X", &s, &s2, &[xi])).unwrap();
        assert_eq!(rec.verdict, SampleVerdict::Holds);
        let zero = Valuation::from([("X".to_string(), Value::Term(term(&tss, "0")))]);
        let rec = check_sample(&tss, &cfg, Requirement::CompRec3, &comp_recursion_sample("X", &s, &s2, &[zero])).unwrap();
        assert_eq!(rec.verdict, SampleVerdict::Vacuous);
        let a0 = RecSpec::from_pairs([("X", term(&tss, "a.0"))]);
        let b0 = RecSpec::from_pairs([("X", term(&tss, "b.0"))]);
        let rec = check_sample(&tss, &cfg, Requirement::CompRec3, &comp_recursion_sample("X", &a0, &b0, &[Valuation::new()])).unwrap();
        assert_eq!(rec.verdict, SampleVerdict::Vacuous);
    }

    #[test]
    fn alpha_variants_are_alpha_equal() {
        let tss = corpus::tss("ex1").unwrap();
        let t = term(&tss, "rec X { X = a.Y; Y = f(rec X { X = b.X }) }");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let v = random_alpha_variant(&mut rng, &t);
            assert!(alpha_eq(&t, &v), "{t} vs {v}");
        }
        assert_eq!(alpha_variant(&t, &mut |y, _| y.to_string()), t);
    }

    #[test]
    fn guarded_specs_start_with_the_standard_pair() {
        let tss = corpus::tss("ex1").unwrap();
        let specs = guarded_specs(&mut ChaCha8Rng::seed_from_u64(0), &tss.signature, 10, 3);
        assert_eq!(specs.len(), 10);
        assert_eq!(Term::rec("X", specs[0].1.clone()).to_string(), "rec X { X = a.X }");
        assert!(specs.iter().all(|(x, s)| is_guarded(&Term::rec(x, s.clone()))));
    }

    #[test]
    fn reports_serialize() {
        let tss = corpus::tss("ex1").unwrap();
        let r = check_congruence(&tss, &small(Semantics::ClosedTerm, EquivalenceKind::Strong), &[]).unwrap();
        assert_eq!(r.verdict, CheckVerdict::PassOnSamples);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("Congruence9"));
        assert!(r.to_string().contains("pass on samples"));
    }
}
