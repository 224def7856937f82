use std::collections::BTreeSet;
use std::sync::Arc;

use super::*;
use crate::catalog::{fin_star, pointed_to_spans, span_fin, Flavor};

/// Commutative monoids on `{0..n}` up to isomorphism, by brute force over
/// multiplication tables.
fn commutative_monoids(n: usize) -> usize {
    let cells = n * n;
    let mut classes = BTreeSet::new();
    let total = n.pow(cells as u32);
    for code in 0..total {
        let mut t = vec![0usize; cells];
        let mut c = code;
        for v in t.iter_mut() {
            *v = c % n;
            c /= n;
        }
        let op = |a: usize, b: usize| t[a * n + b];
        let comm = (0..n).all(|a| (0..n).all(|b| op(a, b) == op(b, a)));
        let assoc = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| op(op(a, b), c) == op(a, op(b, c)))));
        let unit = (0..n).any(|e| (0..n).all(|a| op(e, a) == a));
        if !(comm && assoc && unit) {
            continue;
        }
        // smallest relabeled table
        let mut best: Option<Vec<usize>> = None;
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            let mut r = vec![0; cells];
            for a in 0..n {
                for b in 0..n {
                    r[perm[a] * n + perm[b]] = perm[op(a, b)];
                }
            }
            if best.as_ref().is_none_or(|x| r < *x) {
                best = Some(r);
            }
            // next permutation
            let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else { break };
            let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
            perm.swap(i - 1, j);
            perm[i..].reverse();
        }
        classes.insert(best.unwrap());
    }
    classes.len()
}

#[test]
fn monoid_oracle() {
    assert_eq!(commutative_monoids(1), 1);
    assert_eq!(commutative_monoids(2), 2);
}

const BUDGET: usize = 1 << 20;

#[test]
fn segal_sets_on_pointed_sets_are_commutative_monoids() {
    let p = fin_star(3, Flavor::Flat);
    let e = enumerate_segal_set_objects(&p, 2, BUDGET).unwrap();
    assert_eq!(e.diagrams.len(), commutative_monoids(1) + commutative_monoids(2));
}

#[test]
fn cap_one_gives_the_terminal_object() {
    for p in [fin_star(3, Flavor::Flat), crate::catalog::delta_op(3, 3, Flavor::Flat)] {
        let e = enumerate_segal_set_objects(&p, 1, BUDGET).unwrap();
        assert_eq!(e.diagrams.len(), 1, "{}", p.name);
        assert!(e.diagrams[0].sizes.iter().all(|&s| s == 1));
    }
}

#[test]
fn restriction_to_pointed_sets_is_a_bijection() {
    let t = std::time::Instant::now();
    let spans = span_fin(3);
    let i = pointed_to_spans(3, &spans).unwrap();
    let over_spans = enumerate_segal_set_objects(&spans.pattern, 2, BUDGET).unwrap();
    let over_pointed = enumerate_segal_set_objects(&i.source, 2, BUDGET).unwrap();
    eprintln!("{:?}", t.elapsed());
    let pulled: BTreeSet<Vec<u32>> = over_spans.diagrams.iter().map(|d| canonical_key(&i.source, &d.restrict(&i.functor))).collect();
    let direct: BTreeSet<Vec<u32>> = over_pointed.diagrams.iter().map(|d| canonical_key(&i.source, d)).collect();
    assert_eq!(pulled.len(), over_spans.diagrams.len());
    assert_eq!(pulled, direct);
}

#[test]
fn budget_guard_trips() {
    assert!(enumerate_segal_set_objects(&fin_star(3, Flavor::Flat), 3, 1000).is_err());
}

#[test]
fn identity_passes_comparison() {
    let p = Arc::new(fin_star(2, Flavor::Flat));
    let f = PatternMorphism::new(Functor::identity(p.base.clone()), p.clone(), p).unwrap();
    let r = check_comparison_hypotheses(&f);
    assert!(r.strong_segal.is_holds() && r.elementary.is_holds() && r.active_cores.is_holds());
}

mod hypotheses {
    use super::*;
    use crate::catalog::gfix::{g_fixtures, ForwardClass};
    use crate::catalog::gsets::FiniteGroup;
    use crate::catalog::{cut_functor, OperadKind};
    use crate::fibrous::fixtures::operad_fixture;
    use crate::fibrous::FibrousCandidate;
    use crate::span::check_span_sound;

    fn iso_candidate(fx: &crate::catalog::gfix::GFixtures) -> FibrousCandidate {
        FibrousCandidate::new(fx.restricted_map.functor.clone(), fx.span.pattern.clone())
            .unwrap()
            .with_base_soundness(check_span_sound(&fx.span))
    }

    #[test]
    fn pointed_sets_into_spans() {
        let sp = span_fin(2);
        let i = pointed_to_spans(2, &sp).unwrap();
        let r = check_comparison_hypotheses(&i);
        assert!(r.strong_segal.is_holds(), "{}", r.strong_segal);
        assert!(r.elementary.is_holds(), "{}", r.elementary);
        assert!(r.active_cores.is_holds(), "{}", r.active_cores);
        assert!(r.verdict.is_holds(), "{}", r.verdict);
        assert!(check_active_slices(&i).0.is_holds());
    }

    #[test]
    fn source_map_meets_the_hypotheses() {
        let fx = g_fixtures(FiniteGroup::cyclic(2), 2, ForwardClass::Isomorphisms).unwrap();
        let r = check_comparison_hypotheses_with(&fx.source_map, check_span_sound(&fx.span));
        assert!(r.strong_segal.is_holds(), "{}", r.strong_segal);
        assert!(r.elementary.is_holds(), "{}", r.elementary);
        assert!(r.active_cores.is_holds(), "{}", r.active_cores);
        assert!(r.verdict.is_holds(), "{}", r.verdict);
        assert!(r.target_extendable.notes.iter().any(|n| n.contains("truncat")));
        assert!(check_active_slices(&fx.source_map).0.is_holds());
    }

    #[test]
    fn pointed_g_sets_fail_the_elementary_condition() {
        let fx = g_fixtures(FiniteGroup::cyclic(2), 2, ForwardClass::Isomorphisms).unwrap();
        let r = check_comparison_hypotheses(&fx.pointed_map);
        assert!(r.elementary.is_fails(), "{}", r.elementary);
        assert!(r.verdict.is_fails());
    }

    #[test]
    fn transport_along_pointed_sets() {
        let fx = g_fixtures(FiniteGroup::trivial(), 2, ForwardClass::Isomorphisms).unwrap();
        let t = transport_demo(&fx.pointed_map, &iso_candidate(&fx)).unwrap();
        assert!(t.fibrous.verdict.is_holds(), "{}", t.fibrous.verdict);
        assert!(t.verdict.is_holds(), "{}", t.verdict);
    }

    #[test]
    fn transport_along_the_cut() {
        let c = cut_functor(2, 2, 2).unwrap();
        let t = transport_demo(&c, &operad_fixture(OperadKind::Ass, 2)).unwrap();
        assert!(t.verdict.is_holds(), "{}", t.verdict);
    }

    #[test]
    fn transport_along_the_source_map() {
        let fx = g_fixtures(FiniteGroup::cyclic(2), 2, ForwardClass::Isomorphisms).unwrap();
        let t = transport_demo(&fx.source_map, &iso_candidate(&fx)).unwrap();
        assert!(t.verdict.is_holds(), "{}", t.verdict);
    }

    #[test]
    fn transport_refuses_non_fibrous() {
        let c = cut_functor(2, 2, 2).unwrap();
        assert!(transport_demo(&c, &crate::fibrous::fixtures::double_cover_fixture(2)).is_err());
    }
}
