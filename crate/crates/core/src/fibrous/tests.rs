use std::collections::HashMap;
use std::sync::Arc;

use super::fixtures::*;
use super::square::SquareData;
use super::*;
use crate::catalog::finstar::pointed_map_label as label;
use crate::catalog::{fin_star, Flavor, OperadKind};
use crate::fincat::{iso_comma, pseudo_limit_cat, Functor};
use crate::pattern::validate_pattern;
use crate::verdict::Status;

fn both_routes(c: &FibrousCandidate) -> (Status, Status) {
    let r = check_fibrous(c);
    (r.direct.unwrap().status, r.fast.unwrap().status)
}


#[test]
fn identity_is_fibrous() {
    let c = FibrousCandidate::identity(Arc::new(fin_star(2, Flavor::Flat)));
    assert_eq!(both_routes(&c), (Status::Holds, Status::Holds));
}

#[test]
fn identity_lift_is_the_map_itself() {
    let base = Arc::new(fin_star(2, Flavor::Flat));
    let id = Functor::identity(base.base.clone());
    for m in base.base.morphisms().filter(|&m| base.inert[m]) {
        assert_eq!(find_cocartesian_lift(&id, base.base.src(m), m), Ok(m));
    }
}

#[test]
fn ass_lift_over_restriction_is_unique() {
    let c = operad_fixture(OperadKind::Ass, 2);
    let o = &c.base.base;
    let rho = o.find_morphism(&label(2, 1, &[1, 0])).unwrap();
    let p = c.total();
    let over: Vec<usize> = p.out_of(2).iter().map(|&f| f as usize).filter(|&f| c.proj.mor(f) == rho).collect();
    assert_eq!(over.len(), 1);
    assert_eq!(c.lift(2, rho), Some(over[0]));
}

#[test]
fn operads_at_two_are_fibrous_on_both_routes() {
    for kind in [OperadKind::Ass, OperadKind::Comm, OperadKind::Triv, OperadKind::E0] {
        let c = operad_fixture(kind, 2);
        assert_eq!(both_routes(&c), (Status::Holds, Status::Holds), "{kind:?}");
    }
}

#[test]
fn missing_lift_is_reported() {
    let c = missing_lift_fixture(2);
    let r = check_fibrous(&c);
    assert!(r.verdict.is_fails());
    assert!(r.lifts.witness[0].contains("<2>"));
    assert!(c.missing.iter().all(|&(_, a, _)| c.base.base.tgt(a) == 1));
}

#[test]
fn double_cover_fails_on_both_routes() {
    let c = double_cover_fixture(2);
    assert!(c.missing.is_empty());
    let r = check_fibrous(&c);
    assert!(r.direct.as_ref().unwrap().is_fails());
    assert!(r.fast.as_ref().unwrap().is_fails());
    assert!(r.verdict.is_fails());
    let at_zero = &r.per_object[0];
    assert_eq!(at_zero.0, "<0>");
    assert!(at_zero.1.is_fails());
}

/// The lazy pullback check against the literal iso-comma of pseudo-limits.
fn literal_square(sq: &SquareData) -> bool {
    let lp = pseudo_limit_cat(&sq.over).unwrap();
    let lb = pseudo_limit_cat(&sq.base).unwrap();
    let lam_obj: Vec<usize> = lp
        .objects
        .iter()
        .map(|(fam, th)| {
            let f: Vec<u32> = fam.iter().enumerate().map(|(a, &v)| sq.lambda[a].obj(v as usize) as u32).collect();
            let t: Vec<u32> = th.iter().enumerate().map(|(u, &m)| sq.lambda[sq.index.tgt(u)].mor(m as usize) as u32).collect();
            lb.find_object(&f, &t).unwrap()
        })
        .collect();
    let lam_mor: Vec<usize> = lp
        .cat
        .morphisms()
        .map(|m| {
            let c: Vec<u32> = lp.morphisms[m].iter().enumerate().map(|(a, &u)| sq.lambda[a].mor(u as usize) as u32).collect();
            lb.find_morphism(lam_obj[lp.cat.src(m)], lam_obj[lp.cat.tgt(m)], &c).unwrap()
        })
        .collect();
    let lam = Functor::new(lp.cat.clone(), lb.cat.clone(), lam_obj, lam_mor).unwrap();
    let b = sq.vertical.target.clone();
    let s_obj: Vec<usize> = sq.cone_base.iter().map(|(f, t)| lb.find_object(f, t).unwrap()).collect();
    let s_mor: Vec<usize> =
        b.morphisms().map(|m| lb.find_morphism(s_obj[b.src(m)], s_obj[b.tgt(m)], &sq.cone_base_mor[m]).unwrap()).collect();
    let s = Functor::new(b.clone(), lb.cat.clone(), s_obj, s_mor).unwrap();
    let q = iso_comma(&lam, &s).unwrap();
    let a = sq.vertical.source.clone();
    let t_obj: Vec<usize> = sq.cone_over.iter().map(|(f, t)| lp.find_object(f, t).unwrap()).collect();
    let c_obj: Vec<usize> = a
        .objects()
        .map(|x| {
            let ell = t_obj[x];
            let vx = sq.vertical.obj(x);
            q.find_object(ell, vx, lb.cat.id(lam.obj(ell))).unwrap()
        })
        .collect();
    let lookup: HashMap<(usize, usize, usize, usize), usize> =
        q.morphisms.iter().enumerate().map(|(i, &(u, v))| ((q.cat.src(i), q.cat.tgt(i), u, v), i)).collect();
    let c_mor: Vec<usize> = a
        .morphisms()
        .map(|m| {
            let u = lp.find_morphism(t_obj[a.src(m)], t_obj[a.tgt(m)], &sq.cone_over_mor[m]).unwrap();
            lookup[&(c_obj[a.src(m)], c_obj[a.tgt(m)], u, sq.vertical.mor(m))]
        })
        .collect();
    let cmp = Functor::new(a, q.cat.clone(), c_obj, c_mor).unwrap();
    cmp.is_equivalence()
}

#[test]
fn lazy_square_matches_literal_pullback() {
    for c in [operad_fixture(OperadKind::Ass, 2), operad_fixture(OperadKind::E0, 2), double_cover_fixture(2)] {
        let over = EnvelopeFibers::new(&c);
        let base_cand = FibrousCandidate::identity(c.base.clone());
        let base = EnvelopeFibers::new(&base_cand);
        for x in c.base.base.objects() {
            let sq = SquareData::new(&over, &base, x).unwrap();
            assert_eq!(sq.verdict().is_holds(), literal_square(&sq), "at {x}");
        }
    }
}

#[test]
fn chosen_lifts_compose_to_cocartesian_maps() {
    let c = operad_fixture(OperadKind::Ass, 2);
    let (p, o) = (c.total(), &c.base.base);
    for q in p.objects() {
        for &a in o.out_of(c.proj.obj(q)) {
            let Some(l1) = c.lift(q, a as usize) else { continue };
            for &b in o.out_of(o.tgt(a as usize)) {
                let Some(l2) = c.lift(p.tgt(l1), b as usize) else { continue };
                assert!(is_cocartesian(&c.proj, p.comp(l2, l1).unwrap()).is_ok());
            }
        }
    }
}

#[test]
fn envelope_pseudofunctor_is_coherent() {
    let c = operad_fixture(OperadKind::Ass, 2);
    let env = EnvelopeFibers::new(&c);
    let pf = env.pseudofunctor().unwrap();
    // one object per arity, the two orders of <2> appear as morphisms
    let one = &pf.values[1];
    assert_eq!(one.n_obj(), 3);
    let fiber = env.fiber(1);
    let (two, unit) = (fiber.objects.iter().position(|&(q, _)| q == 2).unwrap(), fiber.objects.iter().position(|&(q, _)| q == 1).unwrap());
    assert_eq!(one.hom(two, unit).len(), 2);
}

#[test]
fn induced_structure_on_ass() {
    let c = operad_fixture(OperadKind::Ass, 2);
    let f = induced_pattern_structure(&c).unwrap();
    let p = &f.source;
    assert!(validate_pattern(p).verdict.is_holds());
    assert_eq!(p.elementary_objects(), vec![1]);
    assert!(check_sound(p).verdict.is_holds());
    assert!(check_iso_segal(&f).is_holds());
}

#[test]
fn induced_structure_on_identity_is_unchanged() {
    let base = Arc::new(fin_star(2, Flavor::Flat));
    let c = FibrousCandidate::identity(base.clone());
    let f = induced_pattern_structure(&c).unwrap();
    assert_eq!(f.source.inert, base.inert);
    assert_eq!(f.source.active, base.active);
}

#[test]
fn fibrous_over_identity_agrees() {
    let c = operad_fixture(OperadKind::Ass, 2);
    let id = Functor::identity(c.total().clone());
    let r = check_fibrous_over(&id, &c).unwrap();
    assert!(r.agree && r.upper.is_holds());
}

#[test]
fn span_c2_restricted_is_fibrous() {
    let c = span_iso_fixture(crate::catalog::FiniteGroup::cyclic(2), 2).unwrap();
    let r = check_fibrous(&c);
    assert!(r.verdict.is_holds(), "{} {:?}", r.verdict, r.per_object);
    assert_eq!(r.direct.unwrap().status, r.fast.unwrap().status);
}

#[test]
fn operads_at_three_are_fibrous_on_both_routes() {
    for kind in [OperadKind::Ass, OperadKind::Comm, OperadKind::Triv, OperadKind::E0] {
        let t = std::time::Instant::now();
        let c = operad_fixture(kind, 3);
        let r = check_fibrous(&c);
        eprintln!("{kind:?} {:?} {}", t.elapsed(), r.verdict);
        assert_eq!(r.direct.unwrap().status, Status::Holds, "{kind:?}");
        assert_eq!(r.fast.unwrap().status, Status::Holds, "{kind:?}");
    }
}

#[test]
fn pull_ass_back_along_cut() {
    let cut = crate::catalog::cut_functor(2, 2, 2).unwrap();
    let ass = operad_fixture(OperadKind::Ass, 2);
    let pb = pullback_fibrous(&cut, &ass).unwrap();
    assert!(pb.report.verdict.is_holds(), "{}", pb.report.verdict);
    assert_eq!(pb.report.direct.as_ref().unwrap().status, pb.report.fast.as_ref().unwrap().status);
}

#[test]
fn pull_spans_back_to_pointed_sets() {
    let inc = span_inclusion(crate::catalog::FiniteGroup::trivial(), 2, crate::catalog::ForwardClass::Isomorphisms).unwrap();
    let i = crate::catalog::pointed_to_spans(2, &inc.span).unwrap();
    let pi = FibrousCandidate::new(inc.map.functor.clone(), inc.span.pattern.clone()).unwrap();
    let pb = pullback_fibrous(&i, &pi).unwrap();
    assert!(pb.report.verdict.is_holds(), "{}", pb.report.verdict);
}

#[test]
fn pullback_along_identity_is_equivalent() {
    let ass = operad_fixture(OperadKind::Ass, 2);
    let id = PatternMorphism::new(Functor::identity(ass.base.base.clone()), ass.base.clone(), ass.base.clone()).unwrap();
    let pb = pullback_fibrous(&id, &ass).unwrap();
    assert!(crate::fincat::check_equivalence(&pb.comma.cat, ass.total()).0.is_holds());
}
