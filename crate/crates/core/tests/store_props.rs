mod support;

use std::collections::BTreeSet;

use n3store::{Binding, Graph, Pattern, PatternTerm, Term, Triple, TripleStore};
use proptest::prelude::*;
use support::{brute_force_match, ex};

fn term() -> impl Strategy<Value = Term> {
    prop_oneof![
        6 => (0..6u8).prop_map(|i| ex(&format!("n{i}"))),
        1 => (0..2u8).prop_map(|i| Term::blank(format!("b{i}"))),
        1 => (0..2u8).prop_map(|i| Term::literal(format!("l{i}"))),
    ]
}

fn graph() -> impl Strategy<Value = Graph> {
    prop::collection::vec((term(), term(), term()), 0..120)
        .prop_map(|ts| ts.into_iter().map(|(s, p, o)| Triple::new(s, p, o)).collect())
}

fn pattern_term() -> impl Strategy<Value = PatternTerm> {
    prop_oneof![
        term().prop_map(PatternTerm::Const),
        prop::sample::select(vec!["x", "y", "z"]).prop_map(PatternTerm::var),
    ]
}

fn pattern() -> impl Strategy<Value = Pattern> {
    (pattern_term(), pattern_term(), pattern_term()).prop_map(|(s, p, o)| Pattern::new(s, p, o))
}

/// Conjunction by brute force: extend bindings pattern by pattern.
fn brute_force_conjunction(g: &Graph, ps: &[Pattern]) -> BTreeSet<Binding> {
    let mut partial = vec![Binding::new()];
    for p in ps {
        let mut next = Vec::new();
        for b in &partial {
            for t in g {
                if let Some(ext) = extend(p, t, b) {
                    next.push(ext);
                }
            }
        }
        partial = next;
    }
    partial.into_iter().collect()
}

fn extend(p: &Pattern, t: &Triple, b: &Binding) -> Option<Binding> {
    let mut out = b.clone();
    for (pt, term) in p.positions().into_iter().zip(t.terms()) {
        match pt {
            PatternTerm::Const(c) if c != term => return None,
            PatternTerm::Var(v) => match out.get(v) {
                Some(bound) if bound != term => return None,
                None => {
                    out.insert(v.clone(), term.clone());
                }
                _ => {}
            },
            _ => {}
        }
    }
    Some(out)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn match_equals_brute_force(g in graph(), p in pattern()) {
        let store = TripleStore::from_graph(&g);
        let got: BTreeSet<Binding> = store.match_pattern(&p).into_iter().collect();
        prop_assert_eq!(got, brute_force_match(&g, &p));
    }

    #[test]
    fn lookups_visit_only_the_bound_selection(g in graph(), p in pattern()) {
        let store = TripleStore::from_graph(&g);
        store.reset_scan_count();
        let _ = store.match_pattern(&p);
        // entries agreeing with the constant positions
        let selection = g.iter().filter(|t| {
            p.positions().into_iter().zip(t.terms()).all(|(pt, term)| match pt {
                PatternTerm::Const(c) => c == term,
                PatternTerm::Var(_) => true,
            })
        }).count() as u64;
        prop_assert_eq!(store.scan_count(), selection);
    }

    #[test]
    fn conjunction_equals_brute_force(g in graph(), ps in prop::collection::vec(pattern(), 1..4)) {
        let store = TripleStore::from_graph(&g);
        let rows = store.match_conjunction(&ps, None);
        let got: BTreeSet<Binding> = rows.iter().cloned().collect();
        prop_assert_eq!(got.len(), rows.len(), "duplicates in result");
        prop_assert_eq!(got, brute_force_conjunction(&g, &ps));
    }

    #[test]
    fn whole_store_delta_changes_nothing(g in graph(), ps in prop::collection::vec(pattern(), 1..4)) {
        let store = TripleStore::from_graph(&g);
        let plain: BTreeSet<Binding> = store.match_conjunction(&ps, None).into_iter().collect();
        let with_delta = store.match_conjunction(&ps, Some(&g));
        let as_set: BTreeSet<Binding> = with_delta.iter().cloned().collect();
        prop_assert_eq!(as_set.len(), with_delta.len());
        prop_assert_eq!(plain, as_set);
    }

    #[test]
    fn delta_keeps_exactly_bindings_touching_it(
        g in graph(),
        ps in prop::collection::vec(pattern(), 1..4),
        keep in prop::collection::vec(any::<bool>(), 120),
    ) {
        let delta: Graph = g.iter().zip(&keep).filter(|(_, k)| **k).map(|(t, _)| t.clone()).collect();
        let store = TripleStore::from_graph(&g);
        let got: BTreeSet<Binding> = store.match_conjunction(&ps, Some(&delta)).into_iter().collect();
        let expected: BTreeSet<Binding> = brute_force_conjunction(&g, &ps)
            .into_iter()
            .filter(|b| ps.iter().any(|p| delta.contains(&p.apply(b).unwrap())))
            .collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn size_counts_distinct_triples(ts in prop::collection::vec((term(), term(), term()), 0..80)) {
        let mut store = TripleStore::new();
        let mut fresh = 0;
        for (s, p, o) in &ts {
            if store.insert(Triple::new(s.clone(), p.clone(), o.clone())) {
                fresh += 1;
            }
        }
        let distinct: BTreeSet<_> = ts.iter().collect();
        prop_assert_eq!(store.len(), distinct.len());
        prop_assert_eq!(fresh, distinct.len());
        prop_assert_eq!(store.to_graph().len(), distinct.len());
    }
}
