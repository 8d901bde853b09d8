//! Property tests for terms: substitution, alpha-equivalence, canonical forms
//! and the surface syntax.

use std::collections::BTreeSet;

use proptest::prelude::*;
use tss_core::sanity::random_alpha_variant;
use tss_core::syntax::parse_term;
use tss_core::term::{alpha_eq, canonical, free_vars, substitute, unfold, RecSpec, Signature, Substitution, Term};

fn sig() -> Signature {
    Signature::new()
        .with("zero", 0)
        .with("prefix_a", 1)
        .with("prefix_b", 1)
        .with("f", 1)
        .with("plus", 2)
}

const VARS: [&str; 3] = ["x", "y", "z"];
const BINDERS: [&str; 3] = ["X", "Y", "x"];

fn term(depth: u32) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::constant("zero")),
        prop::sample::select(&VARS[..]).prop_map(Term::var),
        prop::sample::select(&BINDERS[..]).prop_map(Term::var),
    ];
    leaf.prop_recursive(depth.saturating_sub(1), 48, 2, |inner| {
        prop_oneof![
            (prop::sample::select(&["prefix_a", "prefix_b", "f"][..]), inner.clone()).prop_map(|(f, t)| Term::app(f, vec![t])),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::app("plus", vec![l, r])),
            (prop::sample::select(&BINDERS[..]), inner.clone(), prop::option::of(inner)).prop_map(|(x, b, other)| {
                let mut spec = RecSpec::from_pairs([(x, b)]);
                if let Some(o) = other {
                    let y = if x == "Y" { "X" } else { "Y" };
                    spec.insert(y, o);
                }
                Term::rec(x, spec)
            }),
        ]
    })
}

fn substitution() -> impl Strategy<Value = Substitution> {
    prop::collection::btree_map(prop::sample::select(&["x", "y", "z", "X", "Y"][..]).prop_map(String::from), term(3), 0..3)
}

/// Free variables of `t[sigma]` computed directly from the definition.
fn expected_free(t: &Term, sigma: &Substitution) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for x in free_vars(t) {
        match sigma.get(&x) {
            Some(u) => out.extend(free_vars(u)),
            None => {
                out.insert(x);
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn depth_is_bounded(t in term(6)) {
        prop_assert!(t.depth() <= 6, "depth {}", t.depth());
    }

    #[test]
    fn identity_substitution(t in term(6)) {
        let sigma: Substitution = free_vars(&t).into_iter().map(|x| (x.clone(), Term::var(&x))).collect();
        prop_assert!(alpha_eq(&substitute(&t, &sigma), &t));
        prop_assert_eq!(substitute(&t, &Substitution::new()), t);
    }

    #[test]
    fn substitution_free_variables(t in term(6), sigma in substitution()) {
        prop_assert_eq!(free_vars(&substitute(&t, &sigma)), expected_free(&t, &sigma));
    }

    #[test]
    fn substitution_respects_alpha(t in term(5), sigma in substitution(), seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let v = random_alpha_variant(&mut rng, &t);
        prop_assert!(alpha_eq(&t, &v));
        prop_assert!(alpha_eq(&substitute(&t, &sigma), &substitute(&v, &sigma)));
    }

    #[test]
    fn canonical_is_a_class_representative(t in term(6), seed in any::<u64>()) {
        use rand::SeedableRng;
        let c = canonical(&t);
        prop_assert_eq!(canonical(&c), c.clone());
        prop_assert!(alpha_eq(&t, &c));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let v = random_alpha_variant(&mut rng, &t);
        prop_assert_eq!(canonical(&v), c);
        prop_assert_eq!(free_vars(&v), free_vars(&t));
    }

    #[test]
    fn printing_round_trips(t in term(6)) {
        let back = parse_term(&t.to_string(), &sig()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn composition_of_substitutions(t in term(5), s1 in substitution(), s2 in substitution()) {
        // t[s1][s2] = t[s1 ; s2] where the composite maps x to s1(x)[s2], or s2(x).
        let mut comp: Substitution = s1.iter().map(|(x, u)| (x.clone(), substitute(u, &s2))).collect();
        for (x, u) in &s2 {
            comp.entry(x.clone()).or_insert_with(|| u.clone());
        }
        prop_assert!(alpha_eq(&substitute(&substitute(&t, &s1), &s2), &substitute(&t, &comp)));
    }

    #[test]
    fn unfolding_keeps_free_variables(t in term(6)) {
        if let Some(u) = unfold(&t) {
            prop_assert!(free_vars(&u).is_subset(&free_vars(&t)));
        }
    }
}
