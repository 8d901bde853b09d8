//! Cross-checks of the main algorithms against naive reference
//! implementations written independently here.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tss_core::corpus;
use tss_core::engine::{closed_terms, specified_lts, validate_proof, Engine, Justification, ProofTree};
use tss_core::equivalence::{minimize, strong_bisim, weak_bisim, EquivalenceKind, TAU};
use tss_core::graph::{embed, random_graph, reachable_part, transition_closure, GraphFamily};
use tss_core::semantics::is_pure;
use tss_core::term::{free_vars, Term};
use tss_core::tss::{Literal, TransitionRule, Tss};

mod common;

use common::{naive_bisim, naive_saturate, random_pair};

#[test]
fn partition_refinement_agrees_with_naive_fixpoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut equal, mut differ) = (0, 0);
    for i in 0..1000 {
        let (g, h) = random_pair(&mut rng);
        let expected = naive_bisim(&g, &h);
        let got = strong_bisim(&g, &h);
        assert_eq!(got.equivalent, expected, "pair {i}: {g:?} {h:?}");
        if let Some(f) = got.witness {
            assert!(f.holds(&g, &g.root) && !f.holds(&h, &h.root), "pair {i}: witness {f}");
            differ += 1;
        } else {
            equal += 1;
        }
        let weak = weak_bisim(&g, &h, TAU).equivalent;
        assert_eq!(weak, naive_bisim(&naive_saturate(&g), &naive_saturate(&h)), "weak pair {i}");
    }
    assert!(equal > 100 && differ > 100, "{equal} equal, {differ} different");
}

#[test]
fn minimize_is_idempotent_and_bisimilar() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let (g, _) = random_pair(&mut rng);
        for kind in [EquivalenceKind::Strong, EquivalenceKind::Weak] {
            let m = minimize(&g, kind);
            let mm = minimize(&m, kind);
            assert_eq!(mm.states.len(), m.states.len());
            assert_eq!(mm.edges.len(), m.edges.len());
            match kind {
                EquivalenceKind::Strong => assert!(naive_bisim(&g, &m)),
                EquivalenceKind::Weak => assert!(naive_bisim(&naive_saturate(&g), &naive_saturate(&m))),
            }
        }
    }
}

#[test]
fn reachable_part_is_idempotent_and_bisimilar() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..300 {
        let (g, _) = random_pair(&mut rng);
        let r = reachable_part(&g);
        assert_eq!(reachable_part(&r), r);
        assert!(naive_bisim(&g, &r));
    }
}

// ---------------------------------------------------------------------------
// Graph families

fn random_family(rng: &mut ChaCha8Rng) -> GraphFamily {
    let labels = vec!["a".to_string(), "b".to_string()];
    (0..rng.gen_range(0..4)).map(|_| random_graph(rng, 4, &labels, 0.3)).collect()
}

#[test]
fn transition_closure_is_a_closure_operator() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..200 {
        let f = random_family(&mut rng);
        let g = f.union(&random_family(&mut rng));
        let (cf, cg) = (transition_closure(&f), transition_closure(&g));
        assert!(f.iter().all(|x| cf.contains(x)), "extensive");
        assert!(cf.iter().all(|x| cg.contains(x)), "monotone");
        assert_eq!(transition_closure(&cf).as_set(), cf.as_set(), "idempotent");
        assert!(cf.is_transition_closed());
    }
}

// ---------------------------------------------------------------------------
// Purity

/// Smallest set containing the conclusion source variables and closed under
/// premise chaining, found by intersecting every closed subset.
fn naive_rule_bound(rule: &TransitionRule) -> BTreeSet<String> {
    let vars: Vec<String> = rule.vars().into_iter().collect();
    let mut best: Option<BTreeSet<String>> = None;
    for mask in 0u32..(1 << vars.len()) {
        let b: BTreeSet<String> = vars.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, v)| v.clone()).collect();
        let contains_source = free_vars(&rule.conclusion.source).is_subset(&b);
        let closed = rule.premises.iter().all(|p| match &p.target {
            Some(t) if free_vars(&p.source).is_subset(&b) => free_vars(t).is_subset(&b),
            _ => true,
        });
        if contains_source && closed {
            best = Some(match best {
                None => b,
                Some(old) => old.intersection(&b).cloned().collect(),
            });
        }
    }
    best.unwrap_or_default()
}

#[test]
fn purity_agrees_with_subset_oracle() {
    for (name, tss) in corpus::all_tss().unwrap() {
        let report = is_pure(&tss);
        let mut pure = true;
        for (r, rule) in report.rules.iter().zip(&tss.rules) {
            let bound = naive_rule_bound(rule);
            let unbound: BTreeSet<String> = rule.vars().into_iter().filter(|v| !bound.contains(v)).collect();
            assert_eq!(r.unbound, unbound, "{name}: {rule}");
            pure &= unbound.is_empty();
        }
        assert_eq!(report.pure, pure, "{name}");
    }
}

#[test]
fn purity_on_random_rules() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let vars = ["x", "y", "z", "w"];
    let v = |rng: &mut ChaCha8Rng| Term::var(vars[rng.gen_range(0..vars.len())]);
    for _ in 0..500 {
        let premises: Vec<Literal> = (0..rng.gen_range(0..4))
            .map(|_| {
                let src = if rng.gen_bool(0.3) { Term::app("g", vec![v(&mut rng), v(&mut rng)]) } else { v(&mut rng) };
                if rng.gen_bool(0.2) {
                    Literal::negative(src, "a")
                } else {
                    Literal::positive(src, "a", v(&mut rng))
                }
            })
            .collect();
        let rule = TransitionRule::new(premises, Literal::positive(Term::app("f", vec![v(&mut rng)]), "a", v(&mut rng)));
        let tss = Tss::new("r", tss_core::term::Signature::new().with("f", 1).with("g", 2), &["a"]).rule(rule.clone());
        let bound = naive_rule_bound(&rule);
        let expected: BTreeSet<String> = rule.vars().into_iter().filter(|x| !bound.contains(x)).collect();
        assert_eq!(is_pure(&tss).rules[0].unbound, expected, "{rule}");
    }
}

// ---------------------------------------------------------------------------
// Proof search against bottom-up evaluation

fn naive_match(pattern: &Term, t: &Term, sigma: &mut BTreeMap<String, Term>) -> bool {
    match (pattern, t) {
        (Term::Var(x), _) => match sigma.get(x) {
            Some(u) => u == t,
            None => {
                sigma.insert(x.clone(), t.clone());
                true
            }
        },
        (Term::App(f, ps), Term::App(g, ts)) => f == g && ps.len() == ts.len() && ps.iter().zip(ts).all(|(p, u)| naive_match(p, u, sigma)),
        _ => false,
    }
}

fn instantiate(t: &Term, sigma: &BTreeMap<String, Term>) -> Term {
    match t {
        Term::Var(x) => sigma.get(x).cloned().unwrap_or_else(|| t.clone()),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| instantiate(a, sigma)).collect()),
        Term::Rec(..) => panic!("rules contain no recursion"),
    }
}

type Table = BTreeMap<Term, BTreeSet<(String, Term)>>;

/// Extends `sigma` through premises `i..`, guessing unbound source variables
/// from `universe`. Sources must already be settled in `table`, except the
/// term under evaluation, whose current partial set is used.
fn premise_instances(
    premises: &[Literal],
    sigma: BTreeMap<String, Term>,
    table: &Table,
    universe: &[Term],
    out: &mut Vec<BTreeMap<String, Term>>,
) -> bool {
    let Some((first, rest)) = premises.split_first() else {
        out.push(sigma);
        return true;
    };
    if let Some(x) = free_vars(&first.source).into_iter().find(|x| !sigma.contains_key(x)) {
        let mut ok = true;
        for u in universe {
            let mut s = sigma.clone();
            s.insert(x.clone(), u.clone());
            ok &= premise_instances(premises, s, table, universe, out);
        }
        return ok;
    }
    let src = instantiate(&first.source, &sigma);
    let Some(trans) = table.get(&src) else {
        return false;
    };
    match &first.target {
        None => {
            if trans.iter().any(|(a, _)| *a == first.label) {
                true
            } else {
                premise_instances(rest, sigma, table, universe, out)
            }
        }
        Some(target) => {
            let mut ok = true;
            for (a, t) in trans {
                if *a != first.label {
                    continue;
                }
                let mut s = sigma.clone();
                if naive_match(target, t, &mut s) {
                    ok &= premise_instances(rest, s, table, universe, out);
                }
            }
            ok
        }
    }
}

/// Transitions of every universe term, smallest terms first, each by a local
/// fixpoint. `None` for terms whose premises leave the universe.
fn bottom_up(tss: &Tss, universe: &[Term], guess_universe: &[Term]) -> BTreeMap<Term, Option<BTreeSet<(String, Term)>>> {
    let rules = tss.expanded_rules();
    let mut order = universe.to_vec();
    order.sort_by_key(|t| t.size());
    let mut table: Table = BTreeMap::new();
    let mut result = BTreeMap::new();
    for p in order {
        table.insert(p.clone(), BTreeSet::new());
        let mut complete = true;
        loop {
            let before = table[&p].len();
            for rule in &rules {
                let mut sigma = BTreeMap::new();
                if !naive_match(&rule.conclusion.source, &p, &mut sigma) {
                    continue;
                }
                let mut insts = Vec::new();
                complete &= premise_instances(&rule.premises, sigma, &table, guess_universe, &mut insts);
                let target = rule.conclusion.target.as_ref().unwrap();
                for s in insts {
                    // Target variables bound nowhere range over the guess universe.
                    let mut all = vec![s.clone()];
                    for x in free_vars(target).into_iter().filter(|x| !s.contains_key(x)) {
                        let mut next = Vec::new();
                        for partial in &all {
                            for u in guess_universe {
                                let mut e = partial.clone();
                                e.insert(x.clone(), u.clone());
                                next.push(e);
                            }
                        }
                        all = next;
                    }
                    for s in all {
                        table.get_mut(&p).unwrap().insert((rule.conclusion.label.clone(), instantiate(target, &s)));
                    }
                }
            }
            if table[&p].len() == before {
                break;
            }
        }
        result.insert(p.clone(), if complete { Some(table[&p].clone()) } else { None });
    }
    result
}

fn regression_universes() -> Vec<(&'static str, Tss, Vec<Term>)> {
    let depth = |name: &str| match name {
        "sec10-seq" => 2,
        _ => 3,
    };
    corpus::all_tss()
        .unwrap()
        .into_iter()
        .map(|(name, tss)| {
            let u = closed_terms(&tss.signature, depth(name), 400).unwrap();
            (name, tss, u)
        })
        .collect()
}

#[test]
fn engine_agrees_with_bottom_up_evaluation() {
    let mut compared = 0;
    for (name, tss, universe) in regression_universes() {
        let guess = match tss.guess_depth {
            Some(n) => closed_terms(&tss.signature, n, 400).unwrap(),
            None => Vec::new(),
        };
        let naive = bottom_up(&tss, &universe, &guess);
        let mut engine = Engine::new(&tss).unwrap();
        let mut literals = 0;
        for p in &universe {
            let Some(Some(expected)) = naive.get(p) else { continue };
            let got: BTreeSet<(String, Term)> = engine.transitions(p).unwrap().into_iter().map(|t| (t.action, t.target)).collect();
            assert_eq!(&got, expected, "{name}: {p}");
            literals += got.len() + tss.actions.len();
            compared += 1;
        }
        assert!(literals <= 4000, "{name}: universe too large for the oracle");
    }
    assert!(compared > 100, "{compared}");
}

#[test]
fn completeness_on_sequencing() {
    use tss_core::engine::{completeness_check, Completeness};
    let tss = corpus::tss("sec10-seq").unwrap();
    let sig = &tss.signature;
    let p = |s: &str| tss_core::syntax::parse_term(s, sig).unwrap();
    let report = completeness_check(&tss, &[p("seq(a, b)"), p("seq(1, b)")]).unwrap();
    let get = |t: &str, a: &str| report.iter().find(|(q, b, _)| *q == p(t) && b == a).unwrap().2;
    assert_eq!(get("seq(a, b)", "b"), Completeness::Refusal);
    assert_eq!(get("seq(1, b)", "b"), Completeness::Transition);
    assert!(report.iter().all(|(_, _, c)| *c != Completeness::Undetermined));
}

// ---------------------------------------------------------------------------
// Proofs

fn refusals(tree: &ProofTree, out: &mut Vec<(Term, String)>) {
    if tree.justification == Justification::Refusal {
        out.push((tree.conclusion.source.clone(), tree.conclusion.label.clone()));
    }
    tree.premises.iter().for_each(|p| refusals(p, out));
}

#[test]
fn every_proof_replays_and_no_literal_meets_its_denial() {
    for (name, tss, universe) in regression_universes() {
        let mut engine = Engine::new(&tss).unwrap();
        let mut checker = Engine::new(&tss).unwrap();
        let rules = engine.expanded_rules();
        for p in &universe {
            for t in engine.transitions(p).unwrap() {
                let mut refuted = |q: &Term, a: &str| checker.transitions_on(q, a).unwrap().is_empty();
                validate_proof(&rules, tss.recursion_unfolding, &t.proof, &mut refuted)
                    .unwrap_or_else(|e| panic!("{name}: proof of {p} -{}-> {}: {e}", t.action, t.target));
                let mut denied = Vec::new();
                refusals(&t.proof, &mut denied);
                for (q, a) in denied {
                    assert!(checker.transitions_on(&q, &a).unwrap().is_empty(), "{name}: {q} -/{a}-> and a transition");
                }
            }
        }
    }
}

#[test]
fn tampered_proofs_are_rejected() {
    let tss = corpus::tss("ex1").unwrap();
    let p = tss_core::syntax::parse_term("f(a.b.0)", &tss.signature).unwrap();
    let mut engine = Engine::new(&tss).unwrap();
    let rules = engine.expanded_rules();
    let t = engine.transitions(&p).unwrap().remove(0);
    let mut tree = (*t.proof).clone();
    assert!(validate_proof(&rules, false, &tree, &mut |_, _| true).is_ok());
    tree.conclusion.target = Some(Term::constant("zero"));
    assert!(validate_proof(&rules, false, &tree, &mut |_, _| true).is_err());
    let mut tree = (*t.proof).clone();
    tree.premises.clear();
    assert!(validate_proof(&rules, false, &tree, &mut |_, _| true).is_err());
}

// ---------------------------------------------------------------------------
// Determinism and the graph embedding

#[test]
fn lts_generation_is_deterministic() {
    for (name, tss, universe) in regression_universes() {
        let roots: Vec<Term> = universe.iter().take(20).cloned().collect();
        let a = serde_json::to_string(&specified_lts(&tss, &roots, 200).unwrap()).unwrap();
        let b = serde_json::to_string(&specified_lts(&tss, &roots, 200).unwrap()).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn embedding_is_conservative_on_graph_free_terms() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (name, tss, universe) in regression_universes() {
        let actions: Vec<String> = tss.actions.iter().cloned().collect();
        let family: GraphFamily = (0..3).map(|_| random_graph(&mut rng, 3, &actions, 0.3)).collect();
        let family = transition_closure(&family);
        let mut plain = Engine::new(&tss).unwrap();
        let mut extended = Engine::new(&embed(&tss, &family).unwrap()).unwrap();
        for p in universe.iter().take(60) {
            let a: Vec<(String, Term)> = plain.transitions(p).unwrap().into_iter().map(|t| (t.action, t.target)).collect();
            let b: Vec<(String, Term)> = extended.transitions(p).unwrap().into_iter().map(|t| (t.action, t.target)).collect();
            // Unbound rule variables may be instantiated with graph constants.
            if tss.guess_depth.is_none() {
                assert_eq!(a, b, "{name}: {p}");
            } else {
                assert!(a.iter().all(|x| b.contains(x)), "{name}: {p}");
            }
        }
    }
}
