//! Terms with recursion over a single-sorted signature.
//!
//! A term is a variable, an application `f(t1,...,tn)` of a declared function
//! symbol, or a recursion construct `rec X { X = t; Y = u }` that binds every
//! variable in the domain of its recursive specification.
//!
//! Bound-variable renaming is deterministic: a clashing binder `Y` is renamed to
//! `Y'k` for the smallest `k` that is unused. The quote character is not part of
//! the surface identifier syntax, so generated names never collide with
//! user-written ones. Alpha-equivalence is decided on a canonical form whose
//! binders are numbered by nesting level (`%0`, `%1`, ...).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Errors raised when a term does not fit a signature.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("symbol `{symbol}` declared with arity {declared} but used with {used} argument(s)")]
    ArityMismatch {
        symbol: String,
        declared: usize,
        used: usize,
    },
    #[error("symbol `{0}` is not declared in the signature")]
    UndeclaredSymbol(String),
    #[error("symbol `{symbol}` declared twice with arities {first} and {second}")]
    ConflictingDeclaration {
        symbol: String,
        first: usize,
        second: usize,
    },
    #[error("recursion head `{0}` is not bound by its specification")]
    HeadNotBound(String),
    #[error("recursive specification has no equations")]
    EmptySpecification,
    #[error("variable `{0}` clashes with a function symbol of the same name")]
    VariableIsSymbol(String),
}

/// A set of function declarations `(f, n)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature {
    decls: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares `symbol` with `arity`; redeclaring with the same arity is a no-op.
    pub fn declare(&mut self, symbol: impl Into<String>, arity: usize) -> Result<(), TermError> {
        let symbol = symbol.into();
        match self.decls.get(&symbol) {
            Some(&first) if first != arity => Err(TermError::ConflictingDeclaration {
                symbol,
                first,
                second: arity,
            }),
            _ => {
                self.decls.insert(symbol, arity);
                Ok(())
            }
        }
    }

    pub fn with(mut self, symbol: &str, arity: usize) -> Self {
        self.declare(symbol, arity).expect("conflicting declaration");
        self
    }

    pub fn arity(&self, symbol: &str) -> Option<usize> {
        self.decls.get(symbol).copied()
    }

    pub fn contains(&self, symbol: &str) -> bool {
        self.decls.contains_key(symbol)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.decls.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn is_disjoint(&self, other: &Signature) -> bool {
        self.decls.keys().all(|k| !other.decls.contains_key(k))
    }

    /// Union of two signatures; fails when a shared symbol has two arities.
    pub fn union(&self, other: &Signature) -> Result<Signature, TermError> {
        let mut out = self.clone();
        for (s, n) in other.iter() {
            out.declare(s, n)?;
        }
        Ok(out)
    }

    /// Checks that `t` is well-formed: declared symbols at their arity,
    /// recursion heads bound, and no variable named like a symbol.
    pub fn check(&self, t: &Term) -> Result<(), TermError> {
        match t {
            Term::Var(x) => {
                if self.contains(x) {
                    Err(TermError::VariableIsSymbol(x.clone()))
                } else {
                    Ok(())
                }
            }
            Term::App(f, args) => {
                let declared = self
                    .arity(f)
                    .ok_or_else(|| TermError::UndeclaredSymbol(f.clone()))?;
                if declared != args.len() {
                    return Err(TermError::ArityMismatch {
                        symbol: f.clone(),
                        declared,
                        used: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check(a))
            }
            Term::Rec(x, spec) => {
                if spec.is_empty() {
                    return Err(TermError::EmptySpecification);
                }
                if !spec.binds(x) {
                    return Err(TermError::HeadNotBound(x.clone()));
                }
                for (y, body) in spec.iter() {
                    if self.contains(y) {
                        return Err(TermError::VariableIsSymbol(y.to_string()));
                    }
                    self.check(body)?;
                }
                Ok(())
            }
        }
    }
}

/// A recursive specification: a finite map from bound variables to bodies.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RecSpec {
    bindings: BTreeMap<String, Term>,
}

impl RecSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, Term)>,
        S: Into<String>,
    {
        RecSpec {
            bindings: pairs.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }

    pub fn insert(&mut self, var: impl Into<String>, body: Term) {
        self.bindings.insert(var.into(), body);
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn binds(&self, var: &str) -> bool {
        self.bindings.contains_key(var)
    }

    /// The bound variables `V_S`.
    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.bindings.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Term)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn map_bodies(&self, mut f: impl FnMut(&Term) -> Term) -> RecSpec {
        RecSpec {
            bindings: self
                .bindings
                .iter()
                .map(|(k, v)| (k.clone(), f(v)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
    Rec(String, RecSpec),
}

/// Symbol used for the constant written `0`.
pub const ZERO: &str = "zero";
/// Symbol used for the constant written `1`.
pub const ONE: &str = "one";
/// Prefix of the unary operator that `a.t` desugars to.
pub const PREFIX: &str = "prefix_";

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(x.to_string())
    }

    pub fn constant(c: &str) -> Term {
        Term::App(c.to_string(), Vec::new())
    }

    pub fn app(f: &str, args: Vec<Term>) -> Term {
        Term::App(f.to_string(), args)
    }

    /// `a.t`, i.e. `prefix_a(t)`.
    pub fn prefix(action: &str, t: Term) -> Term {
        Term::App(format!("{PREFIX}{action}"), vec![t])
    }

    pub fn rec(x: &str, spec: RecSpec) -> Term {
        Term::Rec(x.to_string(), spec)
    }

    pub fn is_closed(&self) -> bool {
        free_vars(self).is_empty()
    }

    /// Nesting depth; constants and variables have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
            Term::Rec(_, spec) => 1 + spec.iter().map(|(_, b)| b.depth()).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Term::Rec(_, spec) => 1 + spec.iter().map(|(_, b)| b.size()).sum::<usize>(),
        }
    }

    /// Head symbol of an application.
    pub fn head(&self) -> Option<&str> {
        match self {
            Term::App(f, _) => Some(f),
            _ => None,
        }
    }

    /// Every function symbol occurring in the term.
    pub fn symbols(&self) -> BTreeSet<String> {
        fn go(t: &Term, out: &mut BTreeSet<String>) {
            match t {
                Term::Var(_) => {}
                Term::App(f, args) => {
                    out.insert(f.clone());
                    args.iter().for_each(|a| go(a, out));
                }
                Term::Rec(_, spec) => spec.iter().for_each(|(_, b)| go(b, out)),
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }

    pub fn contains_rec(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().any(Term::contains_rec),
            Term::Rec(..) => true,
        }
    }
}

/// A partial map from variables to terms, extended by the identity.
pub type Substitution = BTreeMap<String, Term>;

/// Variables with a free occurrence in `t`.
pub fn free_vars(t: &Term) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_free(t, &mut Vec::new(), &mut out);
    out
}

fn collect_free<'a>(t: &'a Term, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(x) => {
            if !bound.contains(&x.as_str()) {
                out.insert(x.clone());
            }
        }
        Term::App(_, args) => args.iter().for_each(|a| collect_free(a, bound, out)),
        Term::Rec(_, spec) => {
            let mark = bound.len();
            bound.extend(spec.vars());
            for (_, body) in spec.iter() {
                collect_free(body, bound, out);
            }
            bound.truncate(mark);
        }
    }
}

/// Free variable occurrences in left-to-right order, duplicates kept.
fn free_occurrences<'a>(t: &'a Term, bound: &mut Vec<&'a str>, out: &mut Vec<&'a str>) {
    match t {
        Term::Var(x) => {
            if !bound.contains(&x.as_str()) {
                out.push(x);
            }
        }
        Term::App(_, args) => args.iter().for_each(|a| free_occurrences(a, bound, out)),
        Term::Rec(_, spec) => {
            let mark = bound.len();
            bound.extend(spec.vars());
            for (_, body) in spec.iter() {
                free_occurrences(body, bound, out);
            }
            bound.truncate(mark);
        }
    }
}

/// All variable names occurring anywhere in `t`, bound or free.
pub fn all_names(t: &Term) -> BTreeSet<String> {
    fn go(t: &Term, out: &mut BTreeSet<String>) {
        match t {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| go(a, out)),
            Term::Rec(x, spec) => {
                out.insert(x.clone());
                for (y, body) in spec.iter() {
                    out.insert(y.to_string());
                    go(body, out);
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    go(t, &mut out);
    out
}

/// Returns `base'k` for the smallest `k >= 1` not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.split('\'').next().unwrap_or(base);
    (1..)
        .map(|k| format!("{stem}'{k}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded counter")
}

/// Capture-avoiding substitution `t[σ]`.
pub fn substitute(t: &Term, sigma: &Substitution) -> Term {
    if sigma.is_empty() {
        return t.clone();
    }
    match t {
        Term::Var(x) => sigma.get(x).cloned().unwrap_or_else(|| t.clone()),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| substitute(a, sigma)).collect()),
        Term::Rec(head, spec) => {
            let fv = free_vars(t);
            let active: Substitution = sigma
                .iter()
                .filter(|(k, _)| fv.contains(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            if active.is_empty() {
                return t.clone();
            }
            let incoming: BTreeSet<String> = active.values().flat_map(free_vars).collect();
            let clashing: Vec<&str> = spec.vars().filter(|y| incoming.contains(*y)).collect();
            if clashing.is_empty() {
                return Term::Rec(head.clone(), spec.map_bodies(|b| substitute(b, &active)));
            }
            let mut avoid = all_names(t);
            avoid.extend(incoming.iter().cloned());
            avoid.extend(active.keys().cloned());
            let mut renaming = Substitution::new();
            let mut rename_of = BTreeMap::new();
            for y in clashing {
                let fresh = fresh_name(y, &avoid);
                avoid.insert(fresh.clone());
                renaming.insert(y.to_string(), Term::Var(fresh.clone()));
                rename_of.insert(y.to_string(), fresh);
            }
            let mut renamed = RecSpec::new();
            for (y, body) in spec.iter() {
                let name = rename_of.get(y).cloned().unwrap_or_else(|| y.to_string());
                let body = substitute(&substitute(body, &renaming), &active);
                renamed.insert(name, body);
            }
            let head = rename_of.get(head).cloned().unwrap_or_else(|| head.clone());
            Term::Rec(head, renamed)
        }
    }
}

/// Substitution that first checks every image against `sig`.
pub fn substitute_checked(sig: &Signature, t: &Term, sigma: &Substitution) -> Result<Term, TermError> {
    for image in sigma.values() {
        sig.check(image)?;
    }
    Ok(substitute(t, sigma))
}

/// `⟨t|S⟩`: replaces every free `Y ∈ dom(S)` in `t` by `rec Y S`.
pub fn unfold_abbrev(spec: &RecSpec, t: &Term) -> Term {
    let sigma: Substitution = spec
        .vars()
        .map(|y| (y.to_string(), Term::Rec(y.to_string(), spec.clone())))
        .collect();
    substitute(t, &sigma)
}

/// One unfolding step `⟨X|S⟩ ↦ ⟨S_X|S⟩`; `None` unless `t` is a recursion.
pub fn unfold(t: &Term) -> Option<Term> {
    match t {
        Term::Rec(x, spec) => spec.get(x).map(|body| unfold_abbrev(spec, body)),
        _ => None,
    }
}

/// Representative of the alpha-equivalence class of `t`.
///
/// Binders are renamed to `%n` where `n` counts binders on the path from the
/// root. Within one specification the order is: the head, then bound
/// variables in order of first occurrence while walking the bodies reached so
/// far, then the unreachable equations by canonical body.
pub fn canonical(t: &Term) -> Term {
    canon(t, &mut Vec::new(), 0)
}

fn canon(t: &Term, env: &mut Vec<(String, String)>, level: usize) -> Term {
    match t {
        Term::Var(x) => match env.iter().rev().find(|(orig, _)| orig == x) {
            Some((_, new)) => Term::Var(new.clone()),
            None => t.clone(),
        },
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| canon(a, env, level)).collect()),
        Term::Rec(head, spec) => {
            let order = binder_order(head, spec, env, level);
            let mark = env.len();
            for (i, y) in order.iter().enumerate() {
                env.push((y.clone(), format!("%{}", level + i)));
            }
            let inner = level + order.len();
            let mut out = RecSpec::new();
            for (i, y) in order.iter().enumerate() {
                let body = spec.get(y).expect("ordered binder");
                out.insert(format!("%{}", level + i), canon(body, env, inner));
            }
            env.truncate(mark);
            let head = format!("%{}", level + order.iter().position(|y| y == head).unwrap_or(0));
            Term::Rec(head, out)
        }
    }
}

fn binder_order(head: &str, spec: &RecSpec, env: &mut Vec<(String, String)>, level: usize) -> Vec<String> {
    let mut order: Vec<String> = Vec::new();
    let extend_from = |start: usize, order: &mut Vec<String>| {
        let mut i = start;
        while i < order.len() {
            let body = spec.get(&order[i]).expect("bound");
            let mut occ = Vec::new();
            free_occurrences(body, &mut Vec::new(), &mut occ);
            for v in occ {
                if spec.binds(v) && !order.iter().any(|o| o == v) {
                    order.push(v.to_string());
                }
            }
            i += 1;
        }
    };
    if spec.binds(head) {
        order.push(head.to_string());
        extend_from(0, &mut order);
    }
    while order.len() < spec.len() {
        // Rank the remaining equations by their body with known binders
        // numbered and unknown ones collapsed to a placeholder.
        let remaining: Vec<&str> = spec.vars().filter(|y| !order.iter().any(|o| o == y)).collect();
        let mark = env.len();
        for (i, y) in order.iter().enumerate() {
            env.push((y.clone(), format!("%{}", level + i)));
        }
        for y in &remaining {
            env.push((y.to_string(), "%?".to_string()));
        }
        let inner = level + spec.len();
        let best = remaining
            .iter()
            .min_by_key(|y| (format!("{:?}", canon(spec.get(y).unwrap(), env, inner)), y.to_string()))
            .map(|y| y.to_string())
            .expect("nonempty");
        env.truncate(mark);
        let start = order.len();
        order.push(best);
        extend_from(start, &mut order);
    }
    order
}

/// Alpha-equivalence: equal up to the names of bound variables.
pub fn alpha_eq(t: &Term, u: &Term) -> bool {
    t == u || canonical(t) == canonical(u)
}

/// Recursion bodies are guarded when every occurrence of a bound variable
/// sits below an action prefix.
pub fn is_guarded(t: &Term) -> bool {
    fn go(t: &Term, unguarded: &mut Vec<String>) -> bool {
        match t {
            Term::Var(x) => !unguarded.contains(x),
            Term::App(f, args) => {
                if f.starts_with(PREFIX) {
                    let saved = std::mem::take(unguarded);
                    let ok = args.iter().all(|a| go(a, unguarded));
                    *unguarded = saved;
                    ok
                } else {
                    args.iter().all(|a| go(a, unguarded))
                }
            }
            Term::Rec(_, spec) => {
                let mark = unguarded.len();
                unguarded.extend(spec.vars().map(str::to_string));
                let ok = spec.iter().all(|(_, b)| go(b, unguarded));
                unguarded.truncate(mark);
                ok
            }
        }
    }
    go(t, &mut Vec::new())
}

/// Matches `pattern` against a closed `term`, extending `sigma`. Variables
/// already bound must agree up to alpha-equivalence. Patterns containing
/// recursion only match alpha-equivalent terms when fully instantiated.
pub fn match_term(pattern: &Term, term: &Term, sigma: &mut Substitution) -> bool {
    match pattern {
        Term::Var(x) => match sigma.get(x) {
            Some(bound) => alpha_eq(bound, term),
            None => {
                sigma.insert(x.clone(), term.clone());
                true
            }
        },
        Term::App(f, pargs) => match term {
            Term::App(g, targs) if f == g && pargs.len() == targs.len() => {
                pargs.iter().zip(targs).all(|(p, t)| match_term(p, t, sigma))
            }
            _ => false,
        },
        Term::Rec(..) => {
            let inst = substitute(pattern, sigma);
            inst.is_closed() && alpha_eq(&inst, term)
        }
    }
}

fn is_prefix_action(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::App(s, args) if args.is_empty() => match s.as_str() {
                ZERO => write!(f, "0"),
                ONE => write!(f, "1"),
                _ => write!(f, "{s}"),
            },
            Term::App(s, args)
                if args.len() == 1
                    && s.starts_with(PREFIX)
                    && is_prefix_action(&s[PREFIX.len()..]) =>
            {
                write!(f, "{}.{}", &s[PREFIX.len()..], args[0])
            }
            Term::App(s, args) => {
                write!(f, "{s}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Term::Rec(x, spec) => {
                write!(f, "rec {x} {{ ")?;
                for (i, (y, body)) in spec.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{y} = {body}")?;
                }
                write!(f, " }}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(t: Term) -> Term {
        Term::prefix("a", t)
    }

    fn zero() -> Term {
        Term::constant(ZERO)
    }

    #[test]
    fn free_vars_of_variable_and_binders() {
        assert_eq!(free_vars(&Term::var("x")), BTreeSet::from(["x".to_string()]));
        let rec = Term::rec(
            "X",
            RecSpec::from_pairs([("X", Term::app("f", vec![Term::var("X"), Term::var("y")]))]),
        );
        assert_eq!(free_vars(&rec), BTreeSet::from(["y".to_string()]));
    }

    #[test]
    fn substitution_renames_clashing_binder() {
        let t = Term::rec(
            "X",
            RecSpec::from_pairs([("X", Term::app("g", vec![Term::var("X"), Term::var("y")]))]),
        );
        let sigma = Substitution::from([("y".to_string(), Term::var("X"))]);
        let out = substitute(&t, &sigma);
        let expected = Term::rec(
            "X'1",
            RecSpec::from_pairs([("X'1", Term::app("g", vec![Term::var("X'1"), Term::var("X")]))]),
        );
        assert_eq!(out, expected);
        assert_eq!(free_vars(&out), BTreeSet::from(["X".to_string()]));
    }

    #[test]
    fn substitution_ignores_non_free_variables() {
        let t = Term::rec("X", RecSpec::from_pairs([("X", a(Term::var("X")))]));
        let sigma = Substitution::from([("z".to_string(), zero())]);
        assert_eq!(substitute(&t, &sigma), t);
    }

    #[test]
    fn alpha_equivalence_examples() {
        let tx = Term::rec("X", RecSpec::from_pairs([("X", a(Term::var("X")))]));
        let ty = Term::rec("Y", RecSpec::from_pairs([("Y", a(Term::var("Y")))]));
        let tb = Term::rec("X", RecSpec::from_pairs([("X", Term::prefix("b", Term::var("X")))]));
        assert!(alpha_eq(&tx, &ty));
        assert!(!alpha_eq(&tx, &tb));
        assert!(!alpha_eq(
            &Term::app("f", vec![Term::var("x")]),
            &Term::app("f", vec![Term::var("y")])
        ));
    }

    #[test]
    fn alpha_equivalence_of_mutual_specifications() {
        let s1 = RecSpec::from_pairs([("X", a(Term::var("Y"))), ("Y", Term::prefix("b", Term::var("X")))]);
        let s2 = RecSpec::from_pairs([("P", a(Term::var("Q"))), ("Q", Term::prefix("b", Term::var("P")))]);
        // Q sorts before P here even though it plays the role of Y.
        let s3 = RecSpec::from_pairs([("B", a(Term::var("A"))), ("A", Term::prefix("b", Term::var("B")))]);
        let t1 = Term::rec("X", s1.clone());
        assert!(alpha_eq(&t1, &Term::rec("P", s2)));
        assert!(alpha_eq(&t1, &Term::rec("B", s3)));
        assert!(!alpha_eq(&t1, &Term::rec("Y", s1)));
    }

    #[test]
    fn unreachable_equations_still_count() {
        let s1 = RecSpec::from_pairs([("X", a(Term::var("X"))), ("Y", Term::prefix("b", Term::var("Y")))]);
        let s2 = RecSpec::from_pairs([("X", a(Term::var("X"))), ("Z", Term::prefix("b", Term::var("Z")))]);
        let s3 = RecSpec::from_pairs([("X", a(Term::var("X"))), ("Z", Term::prefix("c", Term::var("Z")))]);
        assert!(alpha_eq(&Term::rec("X", s1.clone()), &Term::rec("X", s2)));
        assert!(!alpha_eq(&Term::rec("X", s1), &Term::rec("X", s3)));
    }

    #[test]
    fn unfold_abbreviation() {
        let spec = RecSpec::from_pairs([("X", a(Term::var("X")))]);
        let out = unfold_abbrev(&spec, &a(Term::var("X")));
        assert_eq!(out, a(Term::rec("X", spec.clone())));
        assert_eq!(unfold_abbrev(&spec, &zero()), zero());
        let mutual = RecSpec::from_pairs([("X", a(Term::var("Y"))), ("Y", Term::prefix("b", Term::var("X")))]);
        assert_eq!(unfold_abbrev(&mutual, &Term::var("X")), Term::rec("X", mutual.clone()));
    }

    #[test]
    fn canonical_form_does_not_capture_free_variables() {
        // rec X { X = f(X, Y) } with Y free must not identify Y with a binder.
        let t = Term::rec(
            "X",
            RecSpec::from_pairs([("X", Term::app("f", vec![Term::var("X"), Term::var("Y")]))]),
        );
        let c = canonical(&t);
        assert_eq!(free_vars(&c), BTreeSet::from(["Y".to_string()]));
    }

    #[test]
    fn nested_binders_with_shadowing() {
        let inner = |v: &str| Term::rec(v, RecSpec::from_pairs([(v, a(Term::var(v)))]));
        let t = Term::rec("X", RecSpec::from_pairs([("X", Term::app("f", vec![Term::var("X"), inner("X")]))]));
        let u = Term::rec("Y", RecSpec::from_pairs([("Y", Term::app("f", vec![Term::var("Y"), inner("Z")]))]));
        assert!(alpha_eq(&t, &u));
        assert!(t.is_closed());
    }

    #[test]
    fn signature_rejects_conflicts_and_bad_arity() {
        let mut sig = Signature::new().with("f", 1);
        assert!(sig.declare("f", 1).is_ok());
        assert!(matches!(sig.declare("f", 2), Err(TermError::ConflictingDeclaration { .. })));
        let bad = Term::app("f", vec![]);
        assert!(matches!(sig.check(&bad), Err(TermError::ArityMismatch { .. })));
        let rec = Term::rec("Y", RecSpec::from_pairs([("X", Term::var("X"))]));
        assert_eq!(sig.check(&rec), Err(TermError::HeadNotBound("Y".into())));
    }

    #[test]
    fn guardedness() {
        assert!(is_guarded(&Term::rec("X", RecSpec::from_pairs([("X", a(Term::var("X")))]))));
        assert!(!is_guarded(&Term::rec(
            "X",
            RecSpec::from_pairs([("X", Term::app("f", vec![Term::var("X")]))])
        )));
    }

    #[test]
    fn display_uses_surface_sugar() {
        let t = a(Term::prefix("b", zero()));
        assert_eq!(t.to_string(), "a.b.0");
        let r = Term::rec("X", RecSpec::from_pairs([("X", a(Term::var("X")))]));
        assert_eq!(r.to_string(), "rec X { X = a.X }");
    }
}
