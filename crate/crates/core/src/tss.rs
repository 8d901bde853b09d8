//! Transition system specifications: literals, transition rules and the
//! `(Σ, A, R)` triple.
//!
//! Rules may carry an action schema `forall al in {a, b}: ...` which is
//! expanded over the listed actions before proof search. A negative premise
//! labelled `*` stands for one negative premise per declared action.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::term::{free_vars, Signature, Substitution, Term};

/// Label of a negative premise that denies every action.
pub const ANY_ACTION: &str = "*";

/// `t -a-> u` when `target` is present, `t -/a->` otherwise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub source: Term,
    pub label: String,
    pub target: Option<Term>,
}

impl Literal {
    pub fn positive(source: Term, label: &str, target: Term) -> Self {
        Literal {
            source,
            label: label.to_string(),
            target: Some(target),
        }
    }

    pub fn negative(source: Term, label: &str) -> Self {
        Literal {
            source,
            label: label.to_string(),
            target: None,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.target.is_some()
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = free_vars(&self.source);
        if let Some(t) = &self.target {
            out.extend(free_vars(t));
        }
        out
    }

    pub fn substitute(&self, sigma: &Substitution) -> Literal {
        Literal {
            source: crate::term::substitute(&self.source, sigma),
            label: self.label.clone(),
            target: self.target.as_ref().map(|t| crate::term::substitute(t, sigma)),
        }
    }

    /// Two literals deny each other when they share source and label and
    /// exactly one is positive.
    pub fn denies(&self, other: &Literal) -> bool {
        self.label == other.label
            && self.is_positive() != other.is_positive()
            && crate::term::alpha_eq(&self.source, &other.source)
    }

    fn relabel(&self, from: &str, to: &str) -> Literal {
        let mut out = self.clone();
        if out.label == from {
            out.label = to.to_string();
        }
        out
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.target {
            Some(t) => write!(f, "{} -{}-> {}", self.source, self.label, t),
            None => write!(f, "{} -/{}->", self.source, self.label),
        }
    }
}

/// `forall var in {actions}` in front of a rule.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionSchema {
    pub var: String,
    pub actions: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionRule {
    pub schema: Option<ActionSchema>,
    pub premises: Vec<Literal>,
    pub conclusion: Literal,
}

impl TransitionRule {
    pub fn new(premises: Vec<Literal>, conclusion: Literal) -> Self {
        TransitionRule {
            schema: None,
            premises,
            conclusion,
        }
    }

    pub fn axiom(conclusion: Literal) -> Self {
        Self::new(Vec::new(), conclusion)
    }

    pub fn with_schema(mut self, var: &str, actions: &[&str]) -> Self {
        self.schema = Some(ActionSchema {
            var: var.to_string(),
            actions: actions.iter().map(|a| a.to_string()).collect(),
        });
        self
    }

    /// Variables occurring free anywhere in the rule.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = self.conclusion.vars();
        for p in &self.premises {
            out.extend(p.vars());
        }
        out
    }

    pub fn has_negative_premises(&self) -> bool {
        self.premises.iter().any(|p| !p.is_positive())
    }

    /// Instances of the schema and of `*` negative premises over `actions`.
    pub fn expand(&self, actions: &BTreeSet<String>) -> Vec<TransitionRule> {
        let base: Vec<TransitionRule> = match &self.schema {
            None => vec![TransitionRule {
                schema: None,
                ..self.clone()
            }],
            Some(schema) => schema
                .actions
                .iter()
                .map(|a| TransitionRule {
                    schema: None,
                    premises: self.premises.iter().map(|p| p.relabel(&schema.var, a)).collect(),
                    conclusion: self.conclusion.relabel(&schema.var, a),
                })
                .collect(),
        };
        base.into_iter()
            .map(|r| {
                let mut premises = Vec::new();
                for p in r.premises {
                    if !p.is_positive() && p.label == ANY_ACTION {
                        premises.extend(actions.iter().map(|a| Literal::negative(p.source.clone(), a)));
                    } else {
                        premises.push(p);
                    }
                }
                TransitionRule { premises, ..r }
            })
            .collect()
    }
}

impl fmt::Display for TransitionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = &self.schema {
            let acts: Vec<&str> = s.actions.iter().map(String::as_str).collect();
            write!(f, "forall {} in {{{}}}: ", s.var, acts.join(", "))?;
        }
        let prem: Vec<String> = self.premises.iter().map(Literal::to_string).collect();
        if prem.is_empty() {
            write!(f, "|- {}", self.conclusion)
        } else {
            write!(f, "{} |- {}", prem.join(", "), self.conclusion)
        }
    }
}

/// A transition system specification `(Σ, A, R)` plus evaluation options.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tss {
    pub name: String,
    pub signature: Signature,
    pub actions: BTreeSet<String>,
    pub rules: Vec<TransitionRule>,
    /// Adds `rec X S -a-> p` whenever the unfolding of `rec X S` does `-a-> p`.
    pub recursion_unfolding: bool,
    /// Depth of the closed-term universe used to instantiate rule variables
    /// that matching cannot determine; `None` rejects such rules.
    pub guess_depth: Option<usize>,
}

impl Tss {
    pub fn new(name: &str, signature: Signature, actions: &[&str]) -> Self {
        Tss {
            name: name.to_string(),
            signature,
            actions: actions.iter().map(|a| a.to_string()).collect(),
            rules: Vec::new(),
            recursion_unfolding: false,
            guess_depth: None,
        }
    }

    pub fn empty_like(&self, name: &str) -> Self {
        Tss {
            name: name.to_string(),
            signature: Signature::new(),
            actions: self.actions.clone(),
            rules: Vec::new(),
            recursion_unfolding: false,
            guess_depth: None,
        }
    }

    pub fn rule(mut self, rule: TransitionRule) -> Self {
        self.rules.push(rule);
        self
    }

    pub fn has_negative_premises(&self) -> bool {
        self.rules.iter().any(TransitionRule::has_negative_premises)
    }

    /// All rules with schemas and `*` premises expanded.
    pub fn expanded_rules(&self) -> Vec<TransitionRule> {
        self.rules.iter().flat_map(|r| r.expand(&self.actions)).collect()
    }

    /// Checks every rule against the signature and action set.
    pub fn validate(&self) -> Result<()> {
        for rule in &self.rules {
            let ctx = rule.to_string();
            let invalid = |message: String| Error::InvalidRule {
                rule: ctx.clone(),
                message,
            };
            if !rule.conclusion.is_positive() {
                return Err(invalid("conclusion must be positive".into()));
            }
            if let Some(schema) = &rule.schema {
                if let Some(a) = schema.actions.iter().find(|a| !self.actions.contains(*a)) {
                    return Err(invalid(format!("schema ranges over undeclared action `{a}`")));
                }
            }
            for inst in rule.expand(&self.actions) {
                for lit in inst.premises.iter().chain(std::iter::once(&inst.conclusion)) {
                    if !self.actions.contains(&lit.label) {
                        return Err(invalid(format!("label `{}` is not a declared action", lit.label)));
                    }
                    for t in std::iter::once(&lit.source).chain(lit.target.iter()) {
                        if t.contains_rec() {
                            return Err(invalid("recursion terms are not allowed inside rules".into()));
                        }
                        self.signature.check(t).map_err(|e| invalid(e.to_string()))?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Labels that occur in some rule conclusion.
    pub fn conclusion_labels(&self) -> BTreeSet<String> {
        self.expanded_rules()
            .into_iter()
            .map(|r| r.conclusion.label)
            .collect()
    }
}

/// `P + Q`: componentwise union of two specifications with disjoint
/// signatures over the same action set.
pub fn tss_sum(p: &Tss, q: &Tss) -> Result<Tss> {
    let overlap: Vec<String> = p
        .signature
        .iter()
        .filter(|(s, _)| q.signature.contains(s))
        .map(|(s, _)| s.to_string())
        .collect();
    if !overlap.is_empty() {
        return Err(Error::SignatureOverlap(overlap));
    }
    merge(p, q, format!("{}+{}", p.name, q.name))
}

/// Set union of two specifications that may share declarations, as needed
/// when comparing a language with a sublanguage of itself.
pub fn tss_union(p: &Tss, q: &Tss) -> Result<Tss> {
    merge(p, q, format!("{}|{}", p.name, q.name))
}

fn merge(p: &Tss, q: &Tss, name: String) -> Result<Tss> {
    if p.actions != q.actions {
        return Err(Error::ActionMismatch {
            left: p.actions.iter().cloned().collect(),
            right: q.actions.iter().cloned().collect(),
        });
    }
    let mut rules = p.rules.clone();
    for r in &q.rules {
        if !rules.contains(r) {
            rules.push(r.clone());
        }
    }
    Ok(Tss {
        name,
        signature: p.signature.union(&q.signature)?,
        actions: p.actions.clone(),
        rules,
        recursion_unfolding: p.recursion_unfolding || q.recursion_unfolding,
        guess_depth: p.guess_depth.max(q.guess_depth),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new().with("zero", 0).with("f", 1)
    }

    #[test]
    fn schema_expansion_relabels_every_literal() {
        let r = TransitionRule::new(
            vec![Literal::positive(Term::var("x"), "al", Term::var("y"))],
            Literal::positive(
                Term::app("f", vec![Term::var("x")]),
                "al",
                Term::app("f", vec![Term::var("y")]),
            ),
        )
        .with_schema("al", &["a", "b"]);
        let acts: BTreeSet<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let out = r.expand(&acts);
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].premises[0].label, "a");
        assert_eq!(out[1].conclusion.label, "b");
    }

    #[test]
    fn star_premise_expands_per_action() {
        let r = TransitionRule::new(
            vec![Literal::negative(Term::var("x"), ANY_ACTION)],
            Literal::positive(Term::app("f", vec![Term::var("x")]), "a", Term::var("x")),
        );
        let acts: BTreeSet<String> = ["a", "b", "tau"].iter().map(|s| s.to_string()).collect();
        let out = r.expand(&acts);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].premises.len(), 3);
    }

    #[test]
    fn sum_rejects_overlapping_signatures() {
        let p = Tss::new("p", sig(), &["a"]);
        let q = Tss::new("q", Signature::new().with("f", 1), &["a"]);
        assert!(matches!(tss_sum(&p, &q), Err(Error::SignatureOverlap(_))));
        let empty = p.empty_like("e");
        let s = tss_sum(&p, &empty).unwrap();
        assert_eq!(s.signature, p.signature);
        assert_eq!(s.rules, p.rules);
    }

    #[test]
    fn validation_catches_bad_labels_and_arity() {
        let bad_label = Tss::new("p", sig(), &["a"]).rule(TransitionRule::axiom(Literal::positive(
            Term::constant("zero"),
            "b",
            Term::constant("zero"),
        )));
        assert!(bad_label.validate().is_err());
        let bad_arity = Tss::new("p", sig(), &["a"]).rule(TransitionRule::axiom(Literal::positive(
            Term::app("f", vec![]),
            "a",
            Term::constant("zero"),
        )));
        assert!(bad_arity.validate().is_err());
    }
}
