//! Rooted process graphs, graph families and their embedding into a
//! specification as constants.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::term::Term;
use crate::tss::{Literal, TransitionRule, Tss};

pub type Edge = (String, String, String);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProcessGraph {
    pub states: BTreeSet<String>,
    pub actions: BTreeSet<String>,
    pub edges: BTreeSet<Edge>,
    pub root: String,
}

impl ProcessGraph {
    /// A single state without transitions.
    pub fn single(root: &str) -> Self {
        ProcessGraph {
            states: BTreeSet::from([root.to_string()]),
            actions: BTreeSet::new(),
            edges: BTreeSet::new(),
            root: root.to_string(),
        }
    }

    /// Builds a graph; edge endpoints and the root join the state set. When
    /// `actions` is absent it defaults to the edge labels.
    pub fn from_parts(
        states: impl IntoIterator<Item = String>,
        actions: Option<BTreeSet<String>>,
        edges: impl IntoIterator<Item = Edge>,
        root: &str,
    ) -> Result<Self> {
        let mut g = ProcessGraph {
            states: states.into_iter().collect(),
            actions: actions.clone().unwrap_or_default(),
            edges: BTreeSet::new(),
            root: root.to_string(),
        };
        g.states.insert(root.to_string());
        for (s, a, t) in edges {
            if actions.is_some() && !g.actions.contains(&a) {
                return Err(Error::InvalidGraph(format!("edge label `{a}` is not a declared action")));
            }
            g.states.insert(s.clone());
            g.states.insert(t.clone());
            g.actions.insert(a.clone());
            g.edges.insert((s, a, t));
        }
        Ok(g)
    }

    /// Convenience constructor from string slices.
    pub fn from_edges(root: &str, edges: &[(&str, &str, &str)]) -> Self {
        Self::from_parts(
            std::iter::empty(),
            None,
            edges.iter().map(|(s, a, t)| (s.to_string(), a.to_string(), t.to_string())),
            root,
        )
        .expect("labels default to edge labels")
    }

    pub fn check(&self) -> Result<()> {
        if !self.states.contains(&self.root) {
            return Err(Error::InvalidGraph(format!("root `{}` is not a state", self.root)));
        }
        for (s, a, t) in &self.edges {
            if !self.states.contains(s) || !self.states.contains(t) {
                return Err(Error::InvalidGraph(format!("edge {s} -{a}-> {t} leaves the state set")));
            }
            if !self.actions.contains(a) {
                return Err(Error::InvalidGraph(format!("edge label `{a}` is not an action")));
            }
        }
        Ok(())
    }

    pub fn successors<'a>(&'a self, s: &'a str) -> impl Iterator<Item = (&'a str, &'a str)> + 'a {
        self.edges
            .range((s.to_string(), String::new(), String::new())..)
            .take_while(move |(src, _, _)| src == s)
            .map(|(_, a, t)| (a.as_str(), t.as_str()))
    }

    /// The same graph with another root.
    pub fn reroot(&self, s: &str) -> ProcessGraph {
        ProcessGraph {
            root: s.to_string(),
            ..self.clone()
        }
    }

    /// States reachable from the root, in breadth-first order.
    pub fn reachable_states(&self) -> Vec<String> {
        let mut seen = BTreeSet::from([self.root.clone()]);
        let mut order = vec![self.root.clone()];
        let mut queue = VecDeque::from([self.root.clone()]);
        while let Some(s) = queue.pop_front() {
            for (_, t) in self.successors(&s) {
                if seen.insert(t.to_string()) {
                    order.push(t.to_string());
                    queue.push_back(t.to_string());
                }
            }
        }
        order
    }

    pub fn is_reachable(&self) -> bool {
        self.reachable_states().len() == self.states.len()
    }

    /// Renames states through `f`, which must be injective on the states.
    pub fn rename(&self, f: impl Fn(&str) -> String) -> ProcessGraph {
        ProcessGraph {
            states: self.states.iter().map(|s| f(s)).collect(),
            actions: self.actions.clone(),
            edges: self.edges.iter().map(|(s, a, t)| (f(s), a.clone(), f(t))).collect(),
            root: f(&self.root),
        }
    }

    /// States renamed `prefix0, prefix1, ...` in breadth-first order from the
    /// root; unreachable states follow in their original order.
    pub fn normalize_names(&self, prefix: &str) -> ProcessGraph {
        let mut order = self.reachable_states();
        let reached: BTreeSet<String> = order.iter().cloned().collect();
        order.extend(self.states.iter().filter(|s| !reached.contains(*s)).cloned());
        let map: BTreeMap<String, String> = order
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), format!("{prefix}{i}")))
            .collect();
        self.rename(|s| map[s].clone())
    }
}

/// Restriction to the states reachable from the root.
pub fn reachable_part(g: &ProcessGraph) -> ProcessGraph {
    let keep: BTreeSet<String> = g.reachable_states().into_iter().collect();
    ProcessGraph {
        edges: g.edges.iter().filter(|(s, _, _)| keep.contains(s)).cloned().collect(),
        states: keep,
        actions: g.actions.clone(),
        root: g.root.clone(),
    }
}

/// A finite set of graphs, kept in insertion order so that enumerations over
/// it are reproducible.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFamily {
    members: Vec<ProcessGraph>,
}

impl GraphFamily {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, g: ProcessGraph) -> bool {
        if self.members.contains(&g) {
            false
        } else {
            self.members.push(g);
            true
        }
    }

    pub fn contains(&self, g: &ProcessGraph) -> bool {
        self.members.contains(g)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ProcessGraph> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn union(&self, other: &GraphFamily) -> GraphFamily {
        let mut out = self.clone();
        for g in other.iter() {
            out.insert(g.clone());
        }
        out
    }

    pub fn as_set(&self) -> BTreeSet<&ProcessGraph> {
        self.members.iter().collect()
    }

    pub fn is_transition_closed(&self) -> bool {
        self.members
            .iter()
            .all(|g| g.successors(&g.root).all(|(_, s)| self.contains(&g.reroot(s))))
    }
}

impl FromIterator<ProcessGraph> for GraphFamily {
    fn from_iter<I: IntoIterator<Item = ProcessGraph>>(iter: I) -> Self {
        let mut f = GraphFamily::new();
        for g in iter {
            f.insert(g);
        }
        f
    }
}

/// `G -a->_F G'`: `G` rerooted along each `a`-edge leaving its root.
pub fn graph_step(family: &GraphFamily, g: &ProcessGraph, a: &str) -> Result<Vec<ProcessGraph>> {
    if !family.contains(g) {
        return Err(Error::GraphNotInFamily(constant_name(g)));
    }
    Ok(g.successors(&g.root)
        .filter(|(b, _)| *b == a)
        .map(|(_, s)| g.reroot(s))
        .collect())
}

/// Least superset of `family` closed under rerooting along edges.
pub fn transition_closure(family: &GraphFamily) -> GraphFamily {
    let mut out = family.clone();
    let mut i = 0;
    while i < out.len() {
        let g = out.members[i].clone();
        for (_, s) in g.successors(&g.root) {
            out.insert(g.reroot(s));
        }
        i += 1;
    }
    out
}

/// Name of the constant standing for `g`: a hash of states, edges and root.
pub fn constant_name(g: &ProcessGraph) -> String {
    let mut h = Sha256::new();
    for s in &g.states {
        h.update(b"s");
        h.update(s.as_bytes());
        h.update([0]);
    }
    for (s, a, t) in &g.edges {
        h.update(b"e");
        for part in [s, a, t] {
            h.update(part.as_bytes());
            h.update([0]);
        }
    }
    h.update(b"r");
    h.update(g.root.as_bytes());
    let digest = h.finalize();
    format!("G_{}", hex::encode(&digest[..8]))
}

pub fn constant_term(g: &ProcessGraph) -> Term {
    Term::constant(&constant_name(g))
}

/// `P + F`: one constant per member and one premise-free rule per graph step.
pub fn embed(tss: &Tss, family: &GraphFamily) -> Result<Tss> {
    if family.is_empty() {
        return Ok(tss.clone());
    }
    if !family.is_transition_closed() {
        return Err(Error::NotTransitionClosed);
    }
    let mut out = tss.clone();
    out.name = format!("{}+IG", tss.name);
    for g in family.iter() {
        g.check()?;
        let name = constant_name(g);
        if tss.signature.contains(&name) {
            return Err(Error::ConstantClash(name));
        }
        out.signature.declare(name, 0)?;
    }
    for g in family.iter() {
        for (a, s) in g.successors(&g.root) {
            if !tss.actions.contains(a) {
                return Err(Error::UnknownAction { label: a.to_string() });
            }
            out.rules.push(TransitionRule::axiom(Literal::positive(
                constant_term(g),
                a,
                constant_term(&g.reroot(s)),
            )));
        }
    }
    Ok(out)
}

/// A labelled transition system without a root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lts {
    pub states: BTreeSet<String>,
    pub actions: BTreeSet<String>,
    pub edges: BTreeSet<Edge>,
    pub truncated: bool,
}

impl Lts {
    pub fn rooted(&self, root: &str) -> ProcessGraph {
        ProcessGraph {
            states: self.states.clone(),
            actions: self.actions.clone(),
            edges: self.edges.clone(),
            root: root.to_string(),
        }
    }
}

fn dot_id(s: &str) -> String {
    format!("{s:?}")
}

/// Graphviz rendering; the root gets an incoming arrow from an invisible point.
pub fn to_dot(name: &str, g: &ProcessGraph) -> String {
    let mut out = format!("digraph {} {{\n", dot_id(name));
    out.push_str("  rankdir=LR;\n  __start [shape=point, style=invis];\n");
    for s in &g.states {
        out.push_str(&format!("  {} [shape=circle];\n", dot_id(s)));
    }
    out.push_str(&format!("  __start -> {};\n", dot_id(&g.root)));
    for (s, a, t) in &g.edges {
        out.push_str(&format!("  {} -> {} [label={}];\n", dot_id(s), dot_id(t), dot_id(a)));
    }
    out.push_str("}\n");
    out
}

/// Random graph with states `s0..s{n-1}` rooted at `s0`.
pub fn random_graph<R: Rng>(rng: &mut R, max_states: usize, actions: &[String], edge_prob: f64) -> ProcessGraph {
    let n = rng.gen_range(1..=max_states.max(1));
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let mut edges = Vec::new();
    for s in &names {
        for a in actions {
            for t in &names {
                if rng.gen_bool(edge_prob) {
                    edges.push((s.clone(), a.clone(), t.clone()));
                }
            }
        }
    }
    let mut g = ProcessGraph::from_parts(names, None, edges, "s0").expect("labels are free");
    g.actions.extend(actions.iter().cloned());
    g
}

/// Graph isomorphism by backtracking; intended for small graphs.
pub fn isomorphic(g: &ProcessGraph, h: &ProcessGraph) -> bool {
    if g.states.len() != h.states.len() || g.edges.len() != h.edges.len() || g.actions != h.actions {
        return false;
    }
    let profile = |x: &ProcessGraph, s: &str| {
        let out: Vec<String> = x.successors(s).map(|(a, _)| a.to_string()).collect();
        let inn = x.edges.iter().filter(|(_, _, t)| t == s).count();
        (out, inn, x.root == s)
    };
    let gs: Vec<String> = g.states.iter().cloned().collect();
    let candidates: Vec<Vec<String>> = gs
        .iter()
        .map(|s| {
            let p = profile(g, s);
            h.states.iter().filter(|c| profile(h, c) == p).cloned().collect()
        })
        .collect();
    let mut map: BTreeMap<String, String> = BTreeMap::new();
    let mut used: BTreeSet<String> = BTreeSet::new();
    extend_iso(0, &gs, &candidates, g, h, &mut map, &mut used)
}

fn extend_iso(
    i: usize,
    gs: &[String],
    candidates: &[Vec<String>],
    g: &ProcessGraph,
    h: &ProcessGraph,
    map: &mut BTreeMap<String, String>,
    used: &mut BTreeSet<String>,
) -> bool {
    if i == gs.len() {
        return g
            .edges
            .iter()
            .all(|(s, a, t)| h.edges.contains(&(map[s].clone(), a.clone(), map[t].clone())));
    }
    let s = &gs[i];
    for cand in &candidates[i] {
        if used.contains(cand) {
            continue;
        }
        map.insert(s.clone(), cand.clone());
        let consistent = g.successors(s).all(|(a, t)| match map.get(t) {
            Some(ht) => h.edges.contains(&(cand.clone(), a.to_string(), ht.clone())),
            None => true,
        });
        if consistent {
            used.insert(cand.clone());
            if extend_iso(i + 1, gs, candidates, g, h, map, used) {
                return true;
            }
            used.remove(cand);
        }
        map.remove(s);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau_c_chain() -> ProcessGraph {
        ProcessGraph::from_edges("s0", &[("s0", "tau", "s1"), ("s1", "c", "s2")])
    }

    #[test]
    fn reachable_part_drops_unreachable_states() {
        let g = tau_c_chain().reroot("s1");
        let r = reachable_part(&g);
        assert_eq!(r.states.len(), 2);
        assert_eq!(r.edges.len(), 1);
        assert_eq!(reachable_part(&r), r);
        let mut iso = ProcessGraph::single("s");
        iso.states.insert("lost".into());
        assert_eq!(reachable_part(&iso), ProcessGraph::single("s"));
    }

    #[test]
    fn closure_of_chain_has_three_members() {
        let fam: GraphFamily = [tau_c_chain()].into_iter().collect();
        assert!(!fam.is_transition_closed());
        let c = transition_closure(&fam);
        assert_eq!(c.len(), 3);
        assert!(c.is_transition_closed());
        assert_eq!(transition_closure(&c), c);
        let step = graph_step(&c, &tau_c_chain(), "tau").unwrap();
        assert_eq!(step, vec![tau_c_chain().reroot("s1")]);
        assert!(graph_step(&c, &tau_c_chain(), "c").unwrap().is_empty());
    }

    #[test]
    fn two_cycle_closure_has_both_rootings() {
        let g = ProcessGraph::from_edges("p", &[("p", "a", "q"), ("q", "a", "p")]);
        let c = transition_closure(&[g.clone()].into_iter().collect());
        assert_eq!(c.len(), 2);
        assert!(c.contains(&g.reroot("q")));
    }

    #[test]
    fn step_outside_family_is_an_error() {
        let fam = GraphFamily::new();
        assert!(matches!(graph_step(&fam, &tau_c_chain(), "tau"), Err(Error::GraphNotInFamily(_))));
    }

    #[test]
    fn branching_root_gives_two_steps() {
        let g = ProcessGraph::from_edges("r", &[("r", "a", "x"), ("r", "a", "y")]);
        let fam = transition_closure(&[g.clone()].into_iter().collect());
        assert_eq!(graph_step(&fam, &g, "a").unwrap().len(), 2);
    }

    #[test]
    fn constant_names_are_structural() {
        let g = tau_c_chain();
        assert_eq!(constant_name(&g), constant_name(&g.clone()));
        assert_ne!(constant_name(&g), constant_name(&g.reroot("s1")));
        assert_eq!(constant_name(&g).len(), 18);
    }

    #[test]
    fn isomorphism_ignores_names() {
        let g = tau_c_chain();
        let h = g.rename(|s| format!("n_{s}"));
        assert!(isomorphic(&g, &h));
        assert!(!isomorphic(&g, &g.reroot("s1")));
    }

    #[test]
    fn dot_marks_the_root() {
        let dot = to_dot("g", &tau_c_chain());
        assert!(dot.contains("__start -> \"s0\""));
        assert!(dot.contains("label=\"tau\""));
    }
}
