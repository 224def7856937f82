use std::collections::HashMap;
use std::sync::Arc;

use super::*;
use crate::catalog::finstar::pointed_map_label as label;
use crate::catalog::{fin_star, Flavor, OperadKind};
use crate::fibrous::fixtures::{double_cover_fixture, operad_fixture};
use crate::fincat::{check_equivalence, iso_comma};

fn fin2() -> Arc<AlgebraicPattern> {
    Arc::new(fin_star(2, Flavor::Flat))
}

fn identity_fibration(p: &AlgebraicPattern) -> CocartesianFibration {
    CocartesianFibration::new(Functor::identity(p.base.clone()), vec![true; p.base.n_mor()])
}

#[test]
fn arrow_category_objects_are_actives() {
    let p = fin2();
    let ar = ArrowRightCat::new(p.clone()).unwrap();
    let actives = p.base.morphisms().filter(|&m| p.active[m]).count();
    assert_eq!(ar.cat.n_obj(), actives);
    assert!(verify_cocartesian_fibration(&ar.target_fibration()).is_holds());
}

#[test]
fn free_fibration_of_ass_is_cocartesian() {
    let c = operad_fixture(OperadKind::Ass, 2);
    let ar = ArrowRightCat::new(c.base.clone()).unwrap();
    let env = free_fibration(&c, &ar).unwrap();
    let v = verify_cocartesian_fibration(&env.fibration);
    assert!(v.is_holds(), "{v}");
}

#[test]
fn fibers_match_the_envelope_fibers() {
    let c = operad_fixture(OperadKind::Ass, 2);
    let ar = ArrowRightCat::new(c.base.clone()).unwrap();
    let env = free_fibration(&c, &ar).unwrap();
    let fibers = EnvelopeFibers::new(&c);
    for x in c.base.base.objects() {
        let a = env.fibration.fiber(x);
        let b = fibers.fiber(x);
        assert!(check_equivalence(&a.cat, &b.cat).0.is_holds(), "at {x}");
    }
    // the unit, and the two binary operations seen as one object each
    assert_eq!(env.fibration.fiber(1).cat.n_obj(), 3);
}

#[test]
fn dropping_a_designated_edge_is_caught() {
    let c = operad_fixture(OperadKind::Ass, 2);
    let ar = ArrowRightCat::new(c.base.clone()).unwrap();
    let env = free_fibration(&c, &ar).unwrap();
    let mut designated = env.fibration.designated.clone();
    let o = &c.base.base;
    let t = env.fibration.total();
    let victim = t
        .morphisms()
        .find(|&m| designated[m] && !o.is_identity(env.fibration.proj.mor(m)))
        .unwrap();
    designated[victim] = false;
    let cut = env.fibration.with_designated(designated);
    assert!(verify_cocartesian_fibration(&cut).is_fails());
}

#[test]
fn roundtrip_recovers_the_pattern() {
    for c in [operad_fixture(OperadKind::Ass, 2), operad_fixture(OperadKind::Comm, 2), FibrousCandidate::identity(fin2())] {
        let ar = ArrowRightCat::new(c.base.clone()).unwrap();
        let v = check_roundtrip(&c, &ar);
        assert!(v.is_holds(), "{} {v}", c.total().name());
    }
}

#[test]
fn roundtrip_of_literal_comma_matches_lookup() {
    let c = operad_fixture(OperadKind::E0, 2);
    let ar = ArrowRightCat::new(c.base.clone()).unwrap();
    let env = free_fibration(&c, &ar).unwrap();
    let q = q_restrict(&env.structure, &ar).unwrap();
    let literal = iso_comma(&ar.include, &env.structure).unwrap();
    assert_eq!(q.cat.n_obj(), literal.cat.n_obj());
    assert!(check_equivalence(&q.proj_left.source, c.total()).0.is_holds());
}

#[test]
fn envelopes_are_equifibered() {
    for kind in [OperadKind::Ass, OperadKind::Comm, OperadKind::E0] {
        let c = operad_fixture(kind, 2);
        let ar = ArrowRightCat::new(c.base.clone()).unwrap();
        let env = free_fibration(&c, &ar).unwrap();
        let r = check_envelope_equifibered(&env, &ar, c.base_soundness());
        assert!(r.verdict.is_holds(), "{kind:?} {}", r.verdict);
        assert_eq!(r.agree, Some(true));
    }
}

#[test]
fn target_projection_is_not_equifibered() {
    let p = fin2();
    let ar = ArrowRightCat::new(p.clone()).unwrap();
    let d = ar.target_fibration();
    let t = identity_fibration(&p);
    let r = check_equifibered(&d, &t, &ar.ev1, &p, &crate::pattern::check_sound(&p).verdict);
    assert!(r.verdict.is_fails());
    let fold = label(2, 1, &[1, 1]);
    let at_fold = r.per_arrow.iter().find(|(l, _)| *l == fold).unwrap();
    assert!(at_fold.1.is_fails(), "{}", at_fold.1);
    assert_eq!(r.agree, Some(true));
}

/// The square check against the iso-comma built outright.
fn literal_square(upper: &CocartesianFibration, lower: &CocartesianFibration, map: &Functor, phi: usize) -> bool {
    let base = upper.base();
    let (a, b) = (base.src(phi), base.tgt(phi));
    let top = upper.transport(phi).unwrap();
    let bottom = lower.transport(phi).unwrap();
    let left = upper.restrict_to_fibers(lower, map, a);
    let right = upper.restrict_to_fibers(lower, map, b);
    let lb = lower.fiber(b);
    let q = iso_comma(&bottom, &right).unwrap();
    let lookup: HashMap<(usize, usize, usize, usize), usize> =
        q.morphisms.iter().enumerate().map(|(i, &(u, v))| ((q.cat.src(i), q.cat.tgt(i), u, v), i)).collect();
    let fa = upper.fiber(a);
    let obj: Vec<usize> = fa
        .objects
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let up = upper.lift(x, phi).unwrap();
            let down = lower.lift(map.obj(x), phi).unwrap();
            let e = lb.local_mor(lower.factor_through(down, map.mor(up), base.id(b)).unwrap()).unwrap();
            q.find_object(left.obj(i), top.obj(i), e).unwrap()
        })
        .collect();
    let mor: Vec<usize> = fa
        .cat
        .morphisms()
        .map(|m| lookup[&(obj[fa.cat.src(m)], obj[fa.cat.tgt(m)], left.mor(m), top.mor(m))])
        .collect();
    Functor::new(fa.cat.clone(), q.cat.clone(), obj, mor).unwrap().is_equivalence()
}

#[test]
fn counted_square_matches_literal_pullback() {
    let p = fin2();
    let ar = ArrowRightCat::new(p.clone()).unwrap();
    let t = ar.target_fibration();
    let mut cases = Vec::new();
    for c in [operad_fixture(OperadKind::Ass, 2), double_cover_fixture(2)] {
        let ar_c = ArrowRightCat::new(c.base.clone()).unwrap();
        let env = free_fibration(&c, &ar_c).unwrap();
        cases.push((env.fibration, ar_c.target_fibration(), env.structure));
    }
    cases.push((t, identity_fibration(&p), ar.ev1.clone()));
    let mut seen = [0, 0];
    for (upper, lower, map) in &cases {
        for phi in p.base.morphisms().filter(|&m| p.active[m]) {
            let v = transport_square(upper, lower, map, phi).unwrap();
            assert_eq!(v.is_holds(), literal_square(upper, lower, map, phi), "{}", p.base.mor_label(phi));
            seen[v.is_holds() as usize] += 1;
        }
    }
    assert!(seen[0] > 0 && seen[1] > 0);
}

#[test]
fn segal_envelope_of_comm_values_are_active_slices() {
    let c = operad_fixture(OperadKind::Comm, 2);
    let se = segal_envelope(&c).unwrap();
    assert!(se.relative_segal.is_holds(), "{}", se.relative_segal);
    assert!(!se.segal.is_fails(), "{}", se.segal);
    let ident = FibrousCandidate::identity(c.base.clone());
    let slices = EnvelopeFibers::new(&ident);
    for x in c.base.base.objects() {
        let v = &se.pseudofunctor.values[x];
        assert!(check_equivalence(v, &slices.fiber(x).cat).0.is_holds(), "at {x}");
    }
}

#[test]
fn segal_envelope_refuses_non_fibrous() {
    assert!(segal_envelope(&double_cover_fixture(2)).is_err());
}

mod monoidal_models {
    use super::super::monoidal::*;
    use super::*;

    fn both(m: &MonoidalModel) -> (Verdict, Verdict) {
        let eq = check_monoidal_equifibered_over_f(m).unwrap();
        assert!(eq.agree, "{}: {} vs {}", m.name, eq.verdict, eq.full.verdict);
        (eq.verdict, check_hk_conditions(m).verdict)
    }

    #[test]
    fn identity_and_envelopes_hold() {
        let mut models = vec![MonoidalModel::identity(2).unwrap()];
        for kind in [OperadKind::Ass, OperadKind::Comm, OperadKind::Triv, OperadKind::E0] {
            models.push(MonoidalModel::envelope(&operad_fixture(kind, 2)).unwrap());
        }
        for m in &models {
            assert!(check_model_segal(m).is_holds(), "{}", m.name);
            let (eq, hk) = both(m);
            assert!(eq.is_holds(), "{}: {eq}", m.name);
            assert!(hk.is_holds(), "{}: {hk}", m.name);
        }
    }

    #[test]
    fn comm_envelope_satisfies_both_conditions() {
        let m = MonoidalModel::envelope(&operad_fixture(OperadKind::Comm, 2)).unwrap();
        let r = check_hk_conditions(&m);
        assert!(r.decomposition.is_holds() && r.mapping.is_holds());
    }

    #[test]
    fn terminal_fails_decomposition() {
        let m = MonoidalModel::terminal(2).unwrap();
        let (eq, hk) = both(&m);
        assert!(eq.is_fails());
        assert!(hk.is_fails());
        assert!(check_hk_conditions(&m).decomposition.is_fails());
    }

    #[test]
    fn doubling_fails_decomposition_with_witness() {
        let m = MonoidalModel::doubling(2).unwrap();
        assert!(check_model_segal(&m).is_holds());
        let (eq, hk) = both(&m);
        assert!(eq.is_fails());
        let r = check_hk_conditions(&m);
        assert!(hk.is_fails() && r.decomposition.is_fails());
        assert!(r.decomposition.witness[0].contains("size 2"), "{:?}", r.decomposition.witness);
    }
}

mod norm_squares {
    use super::super::norms::*;
    use super::*;
    use crate::catalog::{g_fixtures, FiniteGroup, ForwardClass};
    use crate::fibrous::fixtures::span_iso_fixture;
    use crate::span::check_span_sound;

    #[test]
    fn identity_envelope_and_terminal() {
        let fx = g_fixtures(FiniteGroup::cyclic(2), 2, ForwardClass::Isomorphisms).unwrap();
        let span = &fx.span;
        let sound = check_span_sound(span);
        let ar = ArrowRightCat::new(span.pattern.clone()).unwrap();
        let t = ar.target_fibration();

        let id = check_norm_squares(&t, &t, &Functor::identity(ar.cat.clone()), span, &fx.gsets, &sound);
        assert!(id.verdict.is_holds() && id.agree, "{}", id.verdict);
        assert_eq!(id.tensor.len(), 2);
        assert_eq!(id.norms.len(), 1);

        let c = span_iso_fixture(FiniteGroup::cyclic(2), 2).unwrap();
        let ar_c = ArrowRightCat::new(c.base.clone()).unwrap();
        let env = free_fibration(&c, &ar_c).unwrap();
        let r = check_norm_squares(&env.fibration, &ar_c.target_fibration(), &env.structure, span, &fx.gsets, &sound);
        assert!(r.verdict.is_holds() && r.agree, "{} {}", r.verdict, r.full.verdict);

        let point = identity_fibration(&span.pattern);
        let r = check_norm_squares(&t, &point, &ar.ev1, span, &fx.gsets, &sound);
        assert!(r.agree && r.verdict.is_fails());
        let top = fx.gsets.orbits().into_iter().find(|&x| fx.gsets.n_points(x) == 1).unwrap();
        let at_top = r.tensor.iter().find(|(l, _)| l.ends_with(span.pattern.base.obj_label(top))).unwrap();
        assert!(at_top.1.is_fails());
    }
}
