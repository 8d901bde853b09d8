//! Stratifications for specifications with negative premises.
//!
//! A closed literal `p -a-> q` (or `p -/a->`) is measured by the pair
//! `(layer(a), weight(p))`, ordered lexicographically, where `weight` sums a
//! natural number per function symbol occurrence. A rule is respected when
//! every positive premise measures at most its conclusion and every negative
//! premise strictly less, for all closed instances. Measures are linear in the
//! rule variables, so this reduces to comparing coefficients.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::term::Term;
use crate::tss::{Literal, TransitionRule, Tss};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratification {
    /// Layer per action label; unlisted labels sit in layer 0.
    pub label_layers: BTreeMap<String, u64>,
    /// Weight per function symbol; unlisted symbols weigh 0.
    pub weights: BTreeMap<String, u64>,
}

/// `constant + Σ coeff(x)·weight(σ(x))`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Linear {
    constant: u64,
    coeffs: BTreeMap<String, u64>,
}

impl Stratification {
    pub fn trivial() -> Self {
        Stratification {
            label_layers: BTreeMap::new(),
            weights: BTreeMap::new(),
        }
    }

    pub fn layer(&self, label: &str) -> u64 {
        self.label_layers.get(label).copied().unwrap_or(0)
    }

    /// Weight of a closed term. Recursion terms weigh their bodies.
    pub fn weight(&self, t: &Term) -> u64 {
        self.linear(t).constant
    }

    /// Measure of a closed literal.
    pub fn measure(&self, lit: &Literal) -> (u64, u64) {
        (self.layer(&lit.label), self.weight(&lit.source))
    }

    fn linear(&self, t: &Term) -> Linear {
        let mut out = Linear {
            constant: 0,
            coeffs: BTreeMap::new(),
        };
        self.accumulate(t, &mut out, &BTreeSet::new());
        out
    }

    fn accumulate(&self, t: &Term, out: &mut Linear, bound: &BTreeSet<String>) {
        match t {
            Term::Var(x) => {
                if !bound.contains(x) {
                    *out.coeffs.entry(x.clone()).or_insert(0) += 1;
                }
            }
            Term::App(f, args) => {
                out.constant += self.weights.get(f).copied().unwrap_or(0);
                args.iter().for_each(|a| self.accumulate(a, out, bound));
            }
            Term::Rec(_, spec) => {
                let mut inner = bound.clone();
                inner.extend(spec.vars().map(str::to_string));
                for (_, body) in spec.iter() {
                    self.accumulate(body, out, &inner);
                }
            }
        }
    }

    /// Whether every instance of the rule respects the measure.
    pub fn respects(&self, rule: &TransitionRule) -> bool {
        let concl = self.linear(&rule.conclusion.source);
        let concl_layer = self.layer(&rule.conclusion.label);
        rule.premises.iter().all(|p| {
            let layer = self.layer(&p.label);
            if layer != concl_layer {
                return layer < concl_layer;
            }
            let prem = self.linear(&p.source);
            let dominated = prem
                .coeffs
                .iter()
                .all(|(x, c)| *c <= concl.coeffs.get(x).copied().unwrap_or(0));
            if p.is_positive() {
                dominated && prem.constant <= concl.constant
            } else {
                dominated && prem.constant < concl.constant
            }
        })
    }

    pub fn check(&self, rules: &[TransitionRule]) -> bool {
        rules.iter().all(|r| self.respects(r))
    }
}

/// Searches a small set of candidate measures; `None` when none fits.
pub fn stratify(tss: &Tss) -> Option<Stratification> {
    let rules = tss.expanded_rules();
    if !rules.iter().any(TransitionRule::has_negative_premises) {
        return Some(Stratification::trivial());
    }
    let symbols: Vec<String> = tss.signature.iter().map(|(s, _)| s.to_string()).collect();
    let heads: BTreeMap<String, u64> = rules
        .iter()
        .filter(|r| r.has_negative_premises())
        .filter_map(|r| r.conclusion.source.head().map(|h| (h.to_string(), 1)))
        .collect();
    let all_ones: BTreeMap<String, u64> = symbols.iter().map(|s| (s.clone(), 1)).collect();
    let weight_candidates = [heads, all_ones];

    let mut candidates: Vec<Stratification> = weight_candidates
        .iter()
        .map(|w| Stratification {
            label_layers: BTreeMap::new(),
            weights: w.clone(),
        })
        .collect();
    if let Some(layers) = strict_label_layers(&rules) {
        candidates.push(Stratification {
            label_layers: layers,
            weights: BTreeMap::new(),
        });
    }
    let scc = scc_label_layers(&rules);
    for w in &weight_candidates {
        candidates.push(Stratification {
            label_layers: scc.clone(),
            weights: w.clone(),
        });
    }
    candidates.into_iter().find(|s| s.check(&rules))
}

fn label_edges(rules: &[TransitionRule]) -> Vec<(String, String, bool)> {
    rules
        .iter()
        .flat_map(|r| {
            r.premises
                .iter()
                .map(move |p| (p.label.clone(), r.conclusion.label.clone(), !p.is_positive()))
        })
        .collect()
}

/// Longest-path layering where negative edges climb one layer; fails on a
/// cycle through a negative edge.
fn strict_label_layers(rules: &[TransitionRule]) -> Option<BTreeMap<String, u64>> {
    let edges = label_edges(rules);
    let labels: BTreeSet<&String> = edges.iter().flat_map(|(a, b, _)| [a, b]).collect();
    let mut layer: BTreeMap<String, u64> = labels.iter().map(|l| (l.to_string(), 0)).collect();
    let limit = labels.len() as u64 + 1;
    loop {
        let mut changed = false;
        for (from, to, strict) in &edges {
            let need = layer[from] + u64::from(*strict);
            if layer[to] < need {
                if need > limit {
                    return None;
                }
                layer.insert(to.clone(), need);
                changed = true;
            }
        }
        if !changed {
            return Some(layer);
        }
    }
}

/// Layers from the strongly connected components of the label graph, ranked
/// topologically.
fn scc_label_layers(rules: &[TransitionRule]) -> BTreeMap<String, u64> {
    let edges = label_edges(rules);
    let labels: BTreeSet<String> = edges.iter().flat_map(|(a, b, _)| [a.clone(), b.clone()]).collect();
    let reach = |from: &str| -> BTreeSet<String> {
        let mut seen = BTreeSet::from([from.to_string()]);
        let mut stack = vec![from.to_string()];
        while let Some(l) = stack.pop() {
            for (a, b, _) in &edges {
                if *a == l && seen.insert(b.clone()) {
                    stack.push(b.clone());
                }
            }
        }
        seen
    };
    let reaches: BTreeMap<String, BTreeSet<String>> = labels.iter().map(|l| (l.clone(), reach(l))).collect();
    // Layer of a label: number of distinct components strictly below it.
    labels
        .iter()
        .map(|l| {
            let below: BTreeSet<BTreeSet<&String>> = labels
                .iter()
                .filter(|m| reaches[*m].contains(l) && !reaches[l].contains(*m))
                .map(|m| reaches[m].iter().filter(|k| reaches[*k].contains(m)).collect())
                .collect();
            (l.clone(), below.len() as u64)
        })
        .collect()
}
