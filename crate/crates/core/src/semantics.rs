//! Meanings of terms as process graphs.
//!
//! Under the closed-term semantics a valuation maps variables to closed terms
//! and `⟦t⟧(ρ)` is the graph reachable from `t[ρ]`. Under the process-graph
//! semantics a valuation maps variables to graphs; the graphs of a
//! transition-closed family are added to the specification as constants with
//! premise-free rules, and `⟦t⟧(ρ)` is the graph reachable from `t[ρ]` in the
//! extended specification.
//!
//! Whether the result depends on the chosen family cannot be decided in
//! general. Pure specifications are independent of it; for others the family
//! is probed with random enlargements, which can only refute independence.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::graph::{constant_term, embed, random_graph, reachable_part, transition_closure, GraphFamily, ProcessGraph};
use crate::term::{free_vars, substitute, Substitution, Term};
use crate::tss::Tss;

/// Default cap on explored states.
pub const DEFAULT_BOUND: usize = 10_000;

pub type ClosedValuation = BTreeMap<String, Term>;
pub type GraphValuation = BTreeMap<String, ProcessGraph>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Semantics {
    ClosedTerm,
    ProcessGraph,
}

impl std::fmt::Display for Semantics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Semantics::ClosedTerm => "closed-term",
            Semantics::ProcessGraph => "process-graph",
        })
    }
}

/// What a variable denotes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Value {
    Term(Term),
    Graph(ProcessGraph),
}

pub type Valuation = BTreeMap<String, Value>;

/// A meaning graph. States are named by the printed canonical term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Meaning {
    pub graph: ProcessGraph,
    pub truncated: bool,
    /// Some rule variable was guessed from a finite, incomplete universe.
    pub approximate: bool,
}

fn explore(engine: &mut Engine, p: &Term, bound: usize) -> Result<Meaning> {
    let lts = engine.lts(std::slice::from_ref(p), bound)?;
    let root = lts.states.first().map(Term::to_string).unwrap_or_default();
    let mut graph = lts.to_lts().rooted(&root);
    graph.actions = engine.tss().actions.clone();
    Ok(Meaning {
        graph: reachable_part(&graph),
        truncated: lts.truncated,
        approximate: engine.approximate(),
    })
}

/// Reachable part of the specified LTS rooted at the closed term `p`.
pub fn closed_meaning(tss: &Tss, p: &Term, bound: usize) -> Result<Meaning> {
    let mut engine = Engine::new(tss)?;
    explore(&mut engine, p, bound)
}

/// `t[ρ]`, requiring every free variable of `t` to be mapped.
pub fn closed_term_meaning(t: &Term, rho: &ClosedValuation) -> Result<Term> {
    let mut sigma = Substitution::new();
    for x in free_vars(t) {
        let v = rho.get(&x).ok_or_else(|| Error::UnmappedFreeVariable(x.clone()))?;
        if !v.is_closed() {
            return Err(Error::NotClosed(v.to_string()));
        }
        sigma.insert(x, v.clone());
    }
    Ok(substitute(t, &sigma))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Adequacy {
    /// The specification is pure, so every supporting family is adequate.
    PureHenceManifest,
    /// No probe changed the meaning.
    VerifiedUpTo { probes: Vec<String> },
    /// Some enlargement changed the meaning.
    Refuted { probe: String, difference: String },
}

#[derive(Debug, Clone)]
pub struct PgMeaning {
    pub meaning: Meaning,
    pub family: GraphFamily,
    pub adequacy: Adequacy,
}

/// Options for the process-graph semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PgOptions {
    pub bound: usize,
    /// Random graphs used to probe adequacy of impure specifications.
    pub probes: usize,
    pub probe_states: usize,
    pub seed: u64,
}

impl Default for PgOptions {
    fn default() -> Self {
        PgOptions {
            bound: DEFAULT_BOUND,
            probes: 20,
            probe_states: 5,
            seed: 0,
        }
    }
}

/// `t[ρ]` with each graph replaced by its constant.
fn graph_instance(t: &Term, rho: &GraphValuation) -> Result<Term> {
    let mut sigma = Substitution::new();
    for x in free_vars(t) {
        let g = rho.get(&x).ok_or_else(|| Error::UnmappedFreeVariable(x.clone()))?;
        sigma.insert(x, constant_term(g));
    }
    Ok(substitute(t, &sigma))
}

fn supporting_family(base: &GraphFamily, rho: &GraphValuation) -> GraphFamily {
    transition_closure(&base.union(&rho.values().cloned().collect()))
}

fn meaning_in(tss: &Tss, t: &Term, rho: &GraphValuation, family: &GraphFamily, bound: usize) -> Result<Meaning> {
    let embedded = embed(tss, family)?;
    let mut engine = Engine::new(&embedded)?;
    explore(&mut engine, &graph_instance(t, rho)?, bound)
}

/// `⟦t⟧(ρ)` over the least transition-closed family containing `base` and
/// the range of `ρ`.
pub fn pg_meaning(tss: &Tss, t: &Term, rho: &GraphValuation, base: &GraphFamily, opts: &PgOptions) -> Result<PgMeaning> {
    let family = supporting_family(base, rho);
    let meaning = meaning_in(tss, t, rho, &family, opts.bound)?;
    let adequacy = if is_pure(tss).pure {
        Adequacy::PureHenceManifest
    } else {
        let enlargements = random_enlargements(tss, opts.probes, opts.probe_states, opts.seed);
        probe_against(tss, t, rho, &family, &meaning, &enlargements, opts.bound)?
    };
    Ok(PgMeaning {
        meaning,
        family,
        adequacy,
    })
}

/// Result of comparing a meaning against enlarged families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum ProbeOutcome {
    Pass { probes: usize },
    Counterexample { probe: usize, difference: String },
}

/// Recomputes `⟦t⟧(ρ)` with each enlargement added to `family` and reports
/// the first one that changes the graph.
pub fn adequacy_probe(
    tss: &Tss,
    t: &Term,
    rho: &GraphValuation,
    family: &GraphFamily,
    enlargements: &[GraphFamily],
) -> Result<ProbeOutcome> {
    let family = supporting_family(family, rho);
    let base = meaning_in(tss, t, rho, &family, DEFAULT_BOUND)?;
    for (i, extra) in enlargements.iter().enumerate() {
        let bigger = transition_closure(&family.union(extra));
        let m = meaning_in(tss, t, rho, &bigger, DEFAULT_BOUND)?;
        if m.graph != base.graph {
            return Ok(ProbeOutcome::Counterexample {
                probe: i,
                difference: describe_difference(&base.graph, &m.graph),
            });
        }
    }
    Ok(ProbeOutcome::Pass {
        probes: enlargements.len(),
    })
}

fn probe_against(
    tss: &Tss,
    t: &Term,
    rho: &GraphValuation,
    family: &GraphFamily,
    base: &Meaning,
    enlargements: &[GraphFamily],
    bound: usize,
) -> Result<Adequacy> {
    let mut probes = Vec::new();
    for (i, extra) in enlargements.iter().enumerate() {
        let bigger = transition_closure(&family.union(extra));
        let m = meaning_in(tss, t, rho, &bigger, bound)?;
        let label = format!("probe {i} ({} extra graphs)", bigger.len() - family.len());
        if m.graph != base.graph {
            return Ok(Adequacy::Refuted {
                probe: label,
                difference: describe_difference(&base.graph, &m.graph),
            });
        }
        probes.push(label);
    }
    Ok(Adequacy::VerifiedUpTo { probes })
}

/// An edge present in one graph but not the other, preferring edges that
/// leave the root.
pub fn describe_difference(base: &ProcessGraph, enlarged: &ProcessGraph) -> String {
    let pick = |x: &ProcessGraph, y: &ProcessGraph| {
        let mut extra = x.edges.difference(&y.edges);
        extra.clone().find(|(s, _, _)| *s == x.root).or_else(|| extra.next()).cloned()
    };
    if let Some((s, a, t)) = pick(enlarged, base) {
        return format!("the enlarged family has {s} -{a}-> {t}, the original does not");
    }
    if let Some((s, a, t)) = pick(base, enlarged) {
        return format!("the original family has {s} -{a}-> {t}, the enlarged one does not");
    }
    if base.root != enlarged.root {
        return format!("roots differ: {} vs {}", base.root, enlarged.root);
    }
    "state sets differ".to_string()
}

/// `count` single-graph enlargements followed by one holding all of them.
pub fn random_enlargements(tss: &Tss, count: usize, max_states: usize, seed: u64) -> Vec<GraphFamily> {
    if count == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let actions: Vec<String> = tss.actions.iter().cloned().collect();
    let graphs: Vec<ProcessGraph> = (0..count)
        .map(|i| {
            let g = random_graph(&mut rng, max_states, &actions, 0.25);
            g.rename(|s| format!("p{i}_{s}"))
        })
        .collect();
    let mut out: Vec<GraphFamily> = graphs.iter().map(|g| [g.clone()].into_iter().collect()).collect();
    out.push(graphs.into_iter().collect());
    out
}

/// Per-rule purity: variables that are not rule-bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RulePurity {
    pub index: usize,
    pub rule: String,
    pub unbound: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PurityReport {
    pub pure: bool,
    pub rules: Vec<RulePurity>,
}

impl PurityReport {
    pub fn offending(&self) -> impl Iterator<Item = &RulePurity> {
        self.rules.iter().filter(|r| !r.unbound.is_empty())
    }
}

/// Rule-bound variables: the least set containing the variables of the
/// conclusion source and closed under positive premises whose source is
/// already bound.
pub fn rule_bound_vars(rule: &crate::tss::TransitionRule) -> BTreeSet<String> {
    let mut bound = free_vars(&rule.conclusion.source);
    loop {
        let mut changed = false;
        for p in &rule.premises {
            if let Some(target) = &p.target {
                if free_vars(&p.source).is_subset(&bound) {
                    for v in free_vars(target) {
                        changed |= bound.insert(v);
                    }
                }
            }
        }
        if !changed {
            return bound;
        }
    }
}

pub fn is_pure(tss: &Tss) -> PurityReport {
    let rules: Vec<RulePurity> = tss
        .rules
        .iter()
        .enumerate()
        .map(|(index, r)| {
            let bound = rule_bound_vars(r);
            RulePurity {
                index,
                rule: r.to_string(),
                unbound: r.vars().difference(&bound).cloned().collect(),
            }
        })
        .collect();
    PurityReport {
        pure: rules.iter().all(|r| r.unbound.is_empty()),
        rules,
    }
}

/// Repeated evaluation of meanings under one semantics, sharing the proof
/// search table between calls.
pub struct Interp {
    tss: Tss,
    semantics: Semantics,
    family: GraphFamily,
    engine: Engine,
    bound: usize,
}

impl Interp {
    pub fn closed(tss: &Tss, bound: usize) -> Result<Self> {
        Ok(Interp {
            tss: tss.clone(),
            semantics: Semantics::ClosedTerm,
            family: GraphFamily::new(),
            engine: Engine::new(tss)?,
            bound,
        })
    }

    /// Process-graph semantics over the transition closure of `family`.
    pub fn graphs(tss: &Tss, family: &GraphFamily, bound: usize) -> Result<Self> {
        let family = transition_closure(family);
        let engine = Engine::new(&embed(tss, &family)?)?;
        Ok(Interp {
            tss: tss.clone(),
            semantics: Semantics::ProcessGraph,
            family,
            engine,
            bound,
        })
    }

    pub fn new(tss: &Tss, semantics: Semantics, family: &GraphFamily, bound: usize) -> Result<Self> {
        match semantics {
            Semantics::ClosedTerm => Self::closed(tss, bound),
            Semantics::ProcessGraph => Self::graphs(tss, family, bound),
        }
    }

    pub fn semantics(&self) -> Semantics {
        self.semantics
    }

    pub fn tss(&self) -> &Tss {
        &self.tss
    }

    pub fn family(&self) -> &GraphFamily {
        &self.family
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Adds graphs to the family, rebuilding the search if it grew.
    pub fn ensure_graphs<'a>(&mut self, graphs: impl IntoIterator<Item = &'a ProcessGraph>) -> Result<()> {
        let missing: GraphFamily = graphs.into_iter().filter(|g| !self.family.contains(g)).cloned().collect();
        if missing.is_empty() || self.semantics == Semantics::ClosedTerm {
            return Ok(());
        }
        self.family = transition_closure(&self.family.union(&missing));
        self.engine = Engine::new(&embed(&self.tss, &self.family)?)?;
        Ok(())
    }

    /// The closed term that `t` denotes under `rho`.
    pub fn instance(&mut self, t: &Term, rho: &Valuation) -> Result<Term> {
        let mut sigma = Substitution::new();
        let mut graphs = Vec::new();
        for x in free_vars(t) {
            match rho.get(&x) {
                None => return Err(Error::UnmappedFreeVariable(x)),
                Some(Value::Term(p)) => {
                    if self.semantics == Semantics::ProcessGraph {
                        return Err(Error::Invalid(format!("`{x}` needs a graph under the process-graph semantics")));
                    }
                    if !p.is_closed() {
                        return Err(Error::NotClosed(p.to_string()));
                    }
                    sigma.insert(x, p.clone());
                }
                Some(Value::Graph(g)) => {
                    if self.semantics == Semantics::ClosedTerm {
                        return Err(Error::Invalid(format!("`{x}` needs a closed term under the closed-term semantics")));
                    }
                    graphs.push(g.clone());
                    sigma.insert(x, constant_term(g));
                }
            }
        }
        self.ensure_graphs(graphs.iter())?;
        Ok(substitute(t, &sigma))
    }

    pub fn meaning(&mut self, t: &Term, rho: &Valuation) -> Result<Meaning> {
        let p = self.instance(t, rho)?;
        explore(&mut self.engine, &p, self.bound)
    }

    /// Meaning of a closed term of the (possibly extended) language.
    pub fn meaning_closed(&mut self, p: &Term) -> Result<Meaning> {
        explore(&mut self.engine, p, self.bound)
    }

    /// What a value means on its own: a closed term's graph, or the graph.
    pub fn value_meaning(&mut self, v: &Value) -> Result<ProcessGraph> {
        match v {
            Value::Term(p) => Ok(self.meaning_closed(p)?.graph),
            Value::Graph(g) => Ok(reachable_part(g)),
        }
    }

    pub fn approximate(&self) -> bool {
        self.engine.approximate()
    }
}

pub fn value_to_string(v: &Value) -> String {
    match v {
        Value::Term(t) => t.to_string(),
        Value::Graph(g) => crate::syntax::serialize_graph(&crate::graph::constant_name(g), g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{RecSpec, Signature};
    use crate::tss::{Literal, TransitionRule};

    fn ex1ish() -> Tss {
        let x = || Term::var("x");
        let y = || Term::var("y");
        let mut tss = Tss::new(
            "ex",
            Signature::new()
                .with("zero", 0)
                .with("prefix_a", 1)
                .with("f", 1)
                .with("id", 1),
            &["a", "tau"],
        );
        tss.rules.push(TransitionRule::axiom(Literal::positive(Term::prefix("a", x()), "a", x())));
        tss.rules.push(
            TransitionRule::new(
                vec![Literal::positive(x(), "al", y())],
                Literal::positive(Term::app("f", vec![x()]), "al", Term::app("f", vec![y()])),
            )
            .with_schema("al", &["a"]),
        );
        tss.rules.push(
            TransitionRule::new(
                vec![Literal::positive(x(), "al", y())],
                Literal::positive(Term::app("id", vec![x()]), "al", Term::app("id", vec![y()])),
            )
            .with_schema("al", &["a", "tau"]),
        );
        tss
    }

    #[test]
    fn closed_meaning_of_prefix() {
        let m = closed_meaning(&ex1ish(), &Term::prefix("a", Term::constant("zero")), 100).unwrap();
        assert_eq!(m.graph.states.len(), 2);
        assert_eq!(m.graph.edges.len(), 1);
        let z = closed_meaning(&ex1ish(), &Term::constant("zero"), 100).unwrap();
        assert_eq!(z.graph.states.len(), 1);
        assert!(z.graph.edges.is_empty());
    }

    #[test]
    fn closed_term_meaning_substitutes() {
        let rho = ClosedValuation::from([("x".to_string(), Term::constant("zero"))]);
        let t = Term::rec("X", RecSpec::from_pairs([("X", Term::prefix("a", Term::var("x")))]));
        let want = Term::rec("X", RecSpec::from_pairs([("X", Term::prefix("a", Term::constant("zero")))]));
        assert_eq!(closed_term_meaning(&t, &rho).unwrap(), want);
        assert!(matches!(
            closed_term_meaning(&Term::var("y"), &rho),
            Err(Error::UnmappedFreeVariable(_))
        ));
    }

    #[test]
    fn f_drops_tau_but_id_keeps_it() {
        let tss = ex1ish();
        let chain = ProcessGraph::from_edges("s0", &[("s0", "tau", "s1"), ("s1", "a", "s2")]);
        let rho = GraphValuation::from([("x".to_string(), chain.clone())]);
        let opts = PgOptions::default();
        let f = pg_meaning(&tss, &Term::app("f", vec![Term::var("x")]), &rho, &GraphFamily::new(), &opts).unwrap();
        assert!(f.meaning.graph.edges.is_empty());
        assert_eq!(f.adequacy, Adequacy::PureHenceManifest);
        let id = pg_meaning(&tss, &Term::app("id", vec![Term::var("x")]), &rho, &GraphFamily::new(), &opts).unwrap();
        assert!(crate::graph::isomorphic(&id.meaning.graph.normalize_names("q"), &chain.normalize_names("q")));
        assert_eq!(f.family.len(), 3);
    }

    #[test]
    fn purity_of_free_target() {
        let mut tss = Tss::new("c", Signature::new().with("c", 0), &["a"]);
        tss.rules.push(TransitionRule::axiom(Literal::positive(Term::constant("c"), "a", Term::var("x"))));
        let r = is_pure(&tss);
        assert!(!r.pure);
        assert_eq!(r.rules[0].unbound, BTreeSet::from(["x".to_string()]));
        assert!(is_pure(&ex1ish()).pure);
    }
}
