//! Strong and weak bisimilarity on finite graphs, minimization, and the two
//! liftings of a graph equivalence to open terms.
//!
//! Bisimilarity is computed by signature-based partition refinement on the
//! disjoint union of the two graphs. The partition of every round is kept, so
//! when two roots are separated a Hennessy-Milner formula whose modal depth
//! equals the separating round can be read off. Weak bisimilarity saturates
//! first (`=a=>` is `tau* a tau*`, and `=tau=>` is `tau*` including the empty
//! sequence) and then refines strongly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::engine::closed_terms;
use crate::error::{Error, Result};
use crate::graph::{reachable_part, transition_closure, GraphFamily, ProcessGraph};
use crate::semantics::{
    adequacy_probe, is_pure, random_enlargements, value_to_string, Interp, Meaning, ProbeOutcome, Value, Valuation,
};
use crate::term::{free_vars, is_guarded, RecSpec, Term};
use crate::tss::Tss;

/// The silent action.
pub const TAU: &str = "tau";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EquivalenceKind {
    Strong,
    Weak,
}

impl fmt::Display for EquivalenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EquivalenceKind::Strong => "strong bisimilarity",
            EquivalenceKind::Weak => "weak bisimilarity",
        })
    }
}

/// Hennessy-Milner logic. Under weak bisimilarity the diamonds range over
/// saturated transitions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    Not(Box<Formula>),
    And(Vec<Formula>),
    Diamond(String, Box<Formula>),
}

impl Formula {
    pub fn depth(&self) -> usize {
        match self {
            Formula::True => 0,
            Formula::Not(f) => f.depth(),
            Formula::And(fs) => fs.iter().map(Formula::depth).max().unwrap_or(0),
            Formula::Diamond(_, f) => 1 + f.depth(),
        }
    }

    /// Model checking at state `s` of `g`.
    pub fn holds(&self, g: &ProcessGraph, s: &str) -> bool {
        match self {
            Formula::True => true,
            Formula::Not(f) => !f.holds(g, s),
            Formula::And(fs) => fs.iter().all(|f| f.holds(g, s)),
            Formula::Diamond(a, f) => g.successors(s).any(|(b, t)| b == a && f.holds(g, t)),
        }
    }

    fn and(parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::True,
            1 => parts.into_iter().next().expect("one"),
            _ => Formula::And(parts),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "tt"),
            Formula::Not(g) => write!(f, "!{g}"),
            Formula::And(gs) => {
                write!(f, "(")?;
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " & ")?;
                    }
                    write!(f, "{g}")?;
                }
                write!(f, ")")
            }
            Formula::Diamond(a, g) => write!(f, "<{a}>{g}"),
        }
    }
}

/// Outcome of comparing two rooted graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BisimResult {
    pub equivalent: bool,
    /// Holds at the left root and fails at the right one.
    pub witness: Option<Formula>,
}

/// Indexed view of a graph for refinement.
struct Indexed {
    names: Vec<String>,
    succ: Vec<Vec<(usize, usize)>>,
    labels: Vec<String>,
}

impl Indexed {
    fn new(g: &ProcessGraph) -> Self {
        let names: Vec<String> = g.states.iter().cloned().collect();
        let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let labels: Vec<String> = g
            .actions
            .iter()
            .cloned()
            .chain(g.edges.iter().map(|(_, a, _)| a.clone()))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let lindex: BTreeMap<&str, usize> = labels.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
        let mut succ = vec![Vec::new(); names.len()];
        for (s, a, t) in &g.edges {
            succ[index[s.as_str()]].push((lindex[a.as_str()], index[t.as_str()]));
        }
        Indexed { names, succ, labels }
    }

    fn index_of(&self, s: &str) -> usize {
        self.names.iter().position(|n| n == s).expect("state exists")
    }
}

/// Per-round block assignments; the last round is the coarsest bisimulation.
struct Refinement {
    rounds: Vec<Vec<usize>>,
}

fn refine(g: &Indexed) -> Refinement {
    let n = g.names.len();
    let mut rounds = vec![vec![0usize; n]];
    loop {
        let prev = rounds.last().expect("nonempty");
        let mut ids: BTreeMap<(usize, BTreeSet<(usize, usize)>), usize> = BTreeMap::new();
        let mut next = Vec::with_capacity(n);
        for s in 0..n {
            let sig: BTreeSet<(usize, usize)> = g.succ[s].iter().map(|(a, t)| (*a, prev[*t])).collect();
            let fresh = ids.len();
            next.push(*ids.entry((prev[s], sig)).or_insert(fresh));
        }
        let stable = ids.len() == prev.iter().collect::<BTreeSet<_>>().len();
        rounds.push(next);
        if stable {
            return Refinement { rounds };
        }
    }
}

impl Refinement {
    fn last(&self) -> &Vec<usize> {
        self.rounds.last().expect("nonempty")
    }

    fn separation_round(&self, s: usize, t: usize) -> Option<usize> {
        self.rounds.iter().position(|r| r[s] != r[t])
    }

    /// A formula true at `s` and false at `t`.
    fn distinguish(&self, g: &Indexed, s: usize, t: usize, memo: &mut BTreeMap<(usize, usize), Formula>) -> Formula {
        if let Some(f) = memo.get(&(s, t)) {
            return f.clone();
        }
        let k = self.separation_round(s, t).expect("states are separated");
        let prev = &self.rounds[k - 1];
        let moves = |x: usize| -> BTreeSet<(usize, usize)> { g.succ[x].iter().map(|(a, y)| (*a, prev[*y])).collect() };
        let (ms, mt) = (moves(s), moves(t));
        let f = if let Some((a, b)) = ms.difference(&mt).next().copied() {
            let s2 = g.succ[s]
                .iter()
                .find(|(l, y)| *l == a && prev[*y] == b)
                .map(|(_, y)| *y)
                .expect("move exists");
            let parts: Vec<Formula> = g.succ[t]
                .iter()
                .filter(|(l, _)| *l == a)
                .map(|(_, y)| *y)
                .collect::<BTreeSet<_>>()
                .into_iter()
                .map(|t2| self.distinguish(g, s2, t2, memo))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            Formula::Diamond(g.labels[a].clone(), Box::new(Formula::and(parts)))
        } else {
            Formula::Not(Box::new(self.distinguish(g, t, s, memo)))
        };
        memo.insert((s, t), f.clone());
        f
    }
}

fn disjoint_union(g: &ProcessGraph, h: &ProcessGraph) -> ProcessGraph {
    let mut u = g.rename(|s| format!("L{s}"));
    let r = h.rename(|s| format!("R{s}"));
    u.states.extend(r.states);
    u.edges.extend(r.edges);
    u.actions.extend(r.actions);
    u
}

/// Strong bisimilarity of the roots, with a distinguishing formula.
pub fn strong_bisim(g: &ProcessGraph, h: &ProcessGraph) -> BisimResult {
    let u = disjoint_union(g, h);
    let idx = Indexed::new(&u);
    let refinement = refine(&idx);
    let (s, t) = (idx.index_of(&format!("L{}", g.root)), idx.index_of(&format!("R{}", h.root)));
    if refinement.last()[s] == refinement.last()[t] {
        return BisimResult {
            equivalent: true,
            witness: None,
        };
    }
    let witness = refinement.distinguish(&idx, s, t, &mut BTreeMap::new());
    BisimResult {
        equivalent: false,
        witness: Some(witness),
    }
}

/// Weak transitions: `=tau=>` is the reflexive-transitive closure of `tau`,
/// `=a=>` is `=tau=> -a-> =tau=>`.
pub fn saturate(g: &ProcessGraph, tau: &str) -> ProcessGraph {
    let closure: BTreeMap<&String, BTreeSet<&String>> = g
        .states
        .iter()
        .map(|s| {
            let mut seen = BTreeSet::from([s]);
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for (s2, a, t) in g.edges.range((x.clone(), String::new(), String::new())..) {
                    if s2 != x {
                        break;
                    }
                    if a == tau && seen.insert(t) {
                        stack.push(t);
                    }
                }
            }
            (s, seen)
        })
        .collect();
    let mut out = g.clone();
    out.actions.insert(tau.to_string());
    for s in &g.states {
        for m in &closure[s] {
            out.edges.insert((s.clone(), tau.to_string(), (*m).clone()));
            for (a, t) in g.successors(m) {
                if a == tau {
                    continue;
                }
                for t2 in &closure[&t.to_string()] {
                    out.edges.insert((s.clone(), a.to_string(), (*t2).clone()));
                }
            }
        }
    }
    out
}

pub fn weak_bisim(g: &ProcessGraph, h: &ProcessGraph, tau: &str) -> BisimResult {
    strong_bisim(&saturate(g, tau), &saturate(h, tau))
}

pub fn bisimilar(kind: EquivalenceKind, g: &ProcessGraph, h: &ProcessGraph) -> BisimResult {
    match kind {
        EquivalenceKind::Strong => strong_bisim(g, h),
        EquivalenceKind::Weak => weak_bisim(g, h, TAU),
    }
}

/// Quotient of the reachable part by the chosen bisimilarity. Each class is
/// named after its first member in breadth-first order. The weak quotient
/// drops `tau` self-loops.
pub fn minimize(g: &ProcessGraph, kind: EquivalenceKind) -> ProcessGraph {
    let r = reachable_part(g);
    let basis = match kind {
        EquivalenceKind::Strong => r.clone(),
        EquivalenceKind::Weak => saturate(&r, TAU),
    };
    let idx = Indexed::new(&basis);
    let refinement = refine(&idx);
    let block = refinement.last();
    let mut name_of: BTreeMap<usize, String> = BTreeMap::new();
    for s in r.reachable_states() {
        name_of.entry(block[idx.index_of(&s)]).or_insert(s);
    }
    let class = |s: &str| name_of[&block[idx.index_of(s)]].clone();
    let mut out = ProcessGraph {
        states: name_of.values().cloned().collect(),
        actions: g.actions.clone(),
        edges: BTreeSet::new(),
        root: class(&r.root),
    };
    for (s, a, t) in &r.edges {
        let (cs, ct) = (class(s), class(t));
        if kind == EquivalenceKind::Weak && a == TAU && cs == ct {
            continue;
        }
        out.edges.insert((cs, a.clone(), ct));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Related,
    Unrelated,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftWitness {
    /// Variable to printed term or graph.
    pub valuation: BTreeMap<String, String>,
    pub left_root: String,
    pub right_root: String,
    /// Holds for the left meaning and fails for the right one.
    pub formula: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coverage {
    pub description: String,
    pub instances: usize,
    /// Instances cut off by the exploration bound.
    pub truncated: usize,
    /// The enumeration stopped before exhausting its domain.
    pub partial: bool,
    /// Some rule variable was guessed from an incomplete universe.
    pub approximate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftVerdict {
    pub verdict: Verdict,
    pub witness: Option<LiftWitness>,
    pub coverage: Coverage,
}

/// Limits for enumerating instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiftLimits {
    pub bound: usize,
    pub max_domain: usize,
    pub max_instances: usize,
}

impl Default for LiftLimits {
    fn default() -> Self {
        LiftLimits {
            bound: 2_000,
            max_domain: 5_000,
            max_instances: 20_000,
        }
    }
}

fn replace_constant(t: &Term, name: &str, with: &Term) -> Term {
    match t {
        Term::App(f, args) if args.is_empty() && f == name => with.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| replace_constant(a, name, with)).collect()),
        Term::Var(_) => t.clone(),
        Term::Rec(x, spec) => Term::Rec(x.clone(), spec.map_bodies(|b| replace_constant(b, name, with))),
    }
}

/// Closed terms of depth at most `depth`, followed (when unfolding is on) by
/// guarded single-equation recursions `rec X { X = body }` with bodies of
/// depth below `depth`.
pub fn closed_domain(tss: &Tss, depth: usize, cap: usize) -> (Vec<Term>, bool) {
    let (mut out, mut partial) = match closed_terms(&tss.signature, depth, cap) {
        Some(ts) => (ts, false),
        None => (closed_terms_truncated(tss, depth, cap), true),
    };
    if tss.recursion_unfolding && depth > 1 && out.len() < cap {
        let hole = "__rec_hole";
        let mut sig = tss.signature.clone();
        if sig.declare(hole, 0).is_ok() {
            let bodies = closed_terms(&sig, depth - 1, cap).unwrap_or_default();
            for b in bodies {
                let mut syms = BTreeSet::new();
                collect_constants(&b, &mut syms);
                if !syms.contains(hole) {
                    continue;
                }
                let body = replace_constant(&b, hole, &Term::var("X"));
                let r = Term::rec("X", RecSpec::from_pairs([("X", body)]));
                if is_guarded(&r) {
                    if out.len() >= cap {
                        partial = true;
                        break;
                    }
                    out.push(r);
                }
            }
        }
    }
    (out, partial)
}

fn collect_constants(t: &Term, out: &mut BTreeSet<String>) {
    if let Term::App(f, args) = t {
        if args.is_empty() {
            out.insert(f.clone());
        }
        args.iter().for_each(|a| collect_constants(a, out));
    }
}

fn closed_terms_truncated(tss: &Tss, depth: usize, cap: usize) -> Vec<Term> {
    (1..=depth)
        .rev()
        .find_map(|d| closed_terms(&tss.signature, d, cap))
        .unwrap_or_default()
}

/// Cartesian enumeration of valuations over `domain`, in lexicographic
/// order of domain positions; stops after `limit`.
fn valuations(vars: &[String], domain: &[Value], limit: usize) -> (Vec<Valuation>, bool) {
    let total = (domain.len() as u128).checked_pow(vars.len() as u32).unwrap_or(u128::MAX);
    let count = total.min(limit as u128) as usize;
    let mut out = Vec::with_capacity(count);
    let mut digits = vec![0usize; vars.len()];
    for _ in 0..count {
        out.push(vars.iter().zip(&digits).map(|(x, &d)| (x.clone(), domain[d].clone())).collect());
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < domain.len() {
                break;
            }
            *d = 0;
        }
    }
    (out, total > limit as u128)
}

fn compare_instances(
    interp: &mut Interp,
    t: &Term,
    u: &Term,
    kind: EquivalenceKind,
    insts: &[Valuation],
    description: String,
    partial: bool,
) -> Result<LiftVerdict> {
    let mut truncated = 0;
    for rho in insts {
        let (mt, mu) = (interp.meaning(t, rho)?, interp.meaning(u, rho)?);
        if mt.truncated || mu.truncated {
            truncated += 1;
            continue;
        }
        let r = bisimilar(kind, &mt.graph, &mu.graph);
        if !r.equivalent {
            return Ok(LiftVerdict {
                verdict: Verdict::Unrelated,
                witness: Some(witness_of(rho, &mt, &mu, r.witness)),
                coverage: Coverage {
                    description,
                    instances: insts.len(),
                    truncated,
                    partial,
                    approximate: interp.approximate(),
                },
            });
        }
    }
    Ok(LiftVerdict {
        verdict: if truncated > 0 { Verdict::Unknown } else { Verdict::Related },
        witness: None,
        coverage: Coverage {
            description,
            instances: insts.len(),
            truncated,
            partial,
            approximate: interp.approximate(),
        },
    })
}

fn witness_of(rho: &Valuation, mt: &Meaning, mu: &Meaning, formula: Option<Formula>) -> LiftWitness {
    LiftWitness {
        valuation: rho.iter().map(|(x, v)| (x.clone(), value_to_string(v))).collect(),
        left_root: mt.graph.root.clone(),
        right_root: mu.graph.root.clone(),
        formula: formula.map(|f| f.to_string()).unwrap_or_default(),
    }
}

fn free_vars_of(t: &Term, u: &Term) -> Vec<String> {
    let mut vs = free_vars(t);
    vs.extend(free_vars(u));
    vs.into_iter().collect()
}

/// `t ~ci u`: every closed instance with images of depth at most `depth`.
pub fn lift_ci(tss: &Tss, t: &Term, u: &Term, kind: EquivalenceKind, depth: usize, limits: &LiftLimits) -> Result<LiftVerdict> {
    let vars = free_vars_of(t, u);
    let (domain, domain_partial) = closed_domain(tss, depth, limits.max_domain);
    let domain: Vec<Value> = domain.into_iter().map(Value::Term).collect();
    let (insts, cut) = valuations(&vars, &domain, limits.max_instances);
    let description = format!(
        "closed substitutions for {{{}}} over {} terms of depth <= {depth}{}",
        vars.join(", "),
        domain.len(),
        if tss.recursion_unfolding { " including guarded recursions" } else { "" }
    );
    let mut interp = Interp::closed(tss, limits.bound)?;
    compare_instances(&mut interp, t, u, kind, &insts, description, domain_partial || cut)
}

/// Options for adequacy probing during `lift_pg`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeOptions {
    pub probes: usize,
    pub max_states: usize,
    pub seed: u64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            probes: 20,
            max_states: 5,
            seed: 0,
        }
    }
}

/// `t ~pg u`: every valuation into the transition closure of `family`.
pub fn lift_pg(
    tss: &Tss,
    t: &Term,
    u: &Term,
    kind: EquivalenceKind,
    family: &GraphFamily,
    limits: &LiftLimits,
    probe: &ProbeOptions,
) -> Result<LiftVerdict> {
    let vars = free_vars_of(t, u);
    let closed = transition_closure(family);
    let domain: Vec<Value> = closed.iter().cloned().map(Value::Graph).collect();
    let (insts, cut) = valuations(&vars, &domain, limits.max_instances);
    if !is_pure(tss).pure {
        let enlargements = random_enlargements(tss, probe.probes, probe.max_states, probe.seed);
        for rho in &insts {
            let grho = rho
                .iter()
                .filter_map(|(x, v)| match v {
                    Value::Graph(g) => Some((x.clone(), g.clone())),
                    Value::Term(_) => None,
                })
                .collect();
            for term in [t, u] {
                if let ProbeOutcome::Counterexample { probe, difference } =
                    adequacy_probe(tss, term, &grho, &closed, &enlargements)?
                {
                    return Err(Error::NotAdequate(format!("meaning of {term} changes under probe {probe}: {difference}")));
                }
            }
        }
    }
    let description = format!(
        "graph valuations for {{{}}} over a family of {} graphs{}",
        vars.join(", "),
        closed.len(),
        if is_pure(tss).pure { "" } else { " (adequacy probed)" }
    );
    let mut interp = Interp::graphs(tss, &closed, limits.bound)?;
    compare_instances(&mut interp, t, u, kind, &insts, description, cut)
}
