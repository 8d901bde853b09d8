//! Naive reference implementations shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use tss_core::equivalence::{minimize, EquivalenceKind, TAU};
use tss_core::graph::{random_graph, ProcessGraph};

/// Greatest fixpoint by repeated deletion from the full relation.
pub fn naive_bisim(g: &ProcessGraph, h: &ProcessGraph) -> bool {
    let mut rel: BTreeSet<(String, String)> = g
        .states
        .iter()
        .flat_map(|s| h.states.iter().map(move |t| (s.clone(), t.clone())))
        .collect();
    let succ = |x: &ProcessGraph, s: &str| -> Vec<(String, String)> {
        x.edges
            .iter()
            .filter(|(p, _, _)| p == s)
            .map(|(_, a, q)| (a.clone(), q.clone()))
            .collect()
    };
    loop {
        let keep: BTreeSet<(String, String)> = rel
            .iter()
            .filter(|(s, t)| {
                let (ss, ts) = (succ(g, s), succ(h, t));
                ss.iter().all(|(a, s2)| ts.iter().any(|(b, t2)| a == b && rel.contains(&(s2.clone(), t2.clone()))))
                    && ts.iter().all(|(b, t2)| ss.iter().any(|(a, s2)| a == b && rel.contains(&(s2.clone(), t2.clone()))))
            })
            .cloned()
            .collect();
        if keep.len() == rel.len() {
            return rel.contains(&(g.root.clone(), h.root.clone()));
        }
        rel = keep;
    }
}

/// Weak transitions `=a=>` (and `=tau=>` for `tau*`), by reachability.
pub fn naive_saturate(g: &ProcessGraph) -> ProcessGraph {
    let tau_reach = |s: &str| -> BTreeSet<String> {
        let mut seen = BTreeSet::from([s.to_string()]);
        let mut stack = vec![s.to_string()];
        while let Some(p) = stack.pop() {
            for (x, a, q) in &g.edges {
                if *x == p && a == TAU && seen.insert(q.clone()) {
                    stack.push(q.clone());
                }
            }
        }
        seen
    };
    let mut edges = BTreeSet::new();
    for s in &g.states {
        for p in tau_reach(s) {
            edges.insert((s.clone(), TAU.to_string(), p.clone()));
            for (x, a, q) in &g.edges {
                if *x == p && a != TAU {
                    for r in tau_reach(q) {
                        edges.insert((s.clone(), a.clone(), r));
                    }
                }
            }
        }
    }
    let mut out = g.clone();
    out.edges = edges;
    out.actions.insert(TAU.to_string());
    out
}

pub fn random_pair(rng: &mut ChaCha8Rng) -> (ProcessGraph, ProcessGraph) {
    let labels: Vec<String> = ["a", "b", TAU][..rng.gen_range(1..=3)].iter().map(|s| s.to_string()).collect();
    let density = rng.gen_range(0.05..0.3);
    let g = random_graph(rng, 12, &labels, density);
    // Half of the partners are derived from g so that equivalent pairs occur.
    let h = match rng.gen_range(0..4) {
        0 => random_graph(rng, 12, &labels, density),
        1 => minimize(&g, EquivalenceKind::Strong),
        2 => {
            let mut h = g.rename(|s| format!("c_{s}"));
            let s = format!("c_s{}", rng.gen_range(0..g.states.len()));
            let a = labels[rng.gen_range(0..labels.len())].clone();
            h.edges.insert((h.root.clone(), a, s));
            h
        }
        _ => {
            let k = rng.gen_range(0..g.states.len());
            g.reroot(&format!("s{k}"))
        }
    };
    (g, h)
}
