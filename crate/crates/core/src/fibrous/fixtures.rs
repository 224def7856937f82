//! Candidates used by the test suites and the command line.

use std::sync::Arc;

use super::{disjoint_double, FibrousCandidate};
use crate::catalog::gfix::ForwardClass;
use crate::catalog::gsets::{FiniteGroup, GSetCaps, GSetCat};
use crate::catalog::{fin_star, operad_of_operators, Flavor, OperadKind};
use crate::fincat::{CatError, Functor};
use crate::pattern::PatternMorphism;
use crate::span::{check_span_sound, gset_span_pattern, SpanPattern};

/// `𝒪^⊗_{≤k} -> 𝔽*^{≤k}` for a built-in operad.
pub fn operad_fixture(kind: OperadKind, k: usize) -> FibrousCandidate {
    let (_, pi) = operad_of_operators(kind, k);
    FibrousCandidate::new(pi.functor, pi.target).expect("operator category lies over pointed sets")
}

/// `Span_{all,f}(𝔽_G) -> Span(𝔽_G)` on a shared category of G-sets.
pub struct SpanInclusion {
    pub span: SpanPattern,
    pub restricted: SpanPattern,
    pub map: PatternMorphism,
}

pub fn span_inclusion(group: FiniteGroup, orbit_cap: usize, fwd: ForwardClass) -> Result<SpanInclusion, CatError> {
    let caps = GSetCaps { orbits: orbit_cap, points: orbit_cap * group.order() };
    let gs = Arc::new(GSetCat::new(group, caps)?);
    let g = gs.group.name.clone();
    let span = gset_span_pattern(gs.clone(), |_, _| true, |_, _| true, format!("Span(F_{g})"))?;
    let restricted = gset_span_pattern(gs.clone(), |_, _| true, move |s, m| fwd.contains(s, m), format!("Span_all,{fwd:?}(F_{g})"))?;
    let f = restricted.spans.induced_functor(&span.spans, &Functor::identity(gs.cat.clone()))?;
    let map = PatternMorphism::new(f, restricted.pattern.clone(), span.pattern.clone())?;
    Ok(SpanInclusion { span, restricted, map })
}

/// `Span_{all,≃}(𝔽_G) ↪ Span(𝔽_G)`, with the soundness of the base decided
/// by the span criterion.
pub fn span_iso_fixture(group: FiniteGroup, orbit_cap: usize) -> Result<FibrousCandidate, CatError> {
    let inc = span_inclusion(group, orbit_cap, ForwardClass::Isomorphisms)?;
    let sound = check_span_sound(&inc.span);
    Ok(FibrousCandidate::new(inc.map.functor, inc.span.pattern)?.with_base_soundness(sound))
}

/// `Ass^⊗_{≤k}` with `⟨1⟩` removed: no inert map into `⟨1⟩` has a lift.
pub fn missing_lift_fixture(k: usize) -> FibrousCandidate {
    let (p, pi) = operad_of_operators(OperadKind::Ass, k);
    let keep: Vec<usize> = p.base.objects().filter(|&o| o != 1).collect();
    let (sub, mor_map) = p.base.full_subcategory(&keep, format!("{} without <1>", p.name));
    let obj = keep.iter().map(|&o| pi.functor.obj(o)).collect();
    let mor = mor_map.iter().map(|&m| pi.functor.mor(m)).collect();
    let proj = Functor::new_unchecked(Arc::new(sub), pi.target.base.clone(), obj, mor);
    FibrousCandidate::new(proj, pi.target).expect("lands in pointed sets")
}

/// Two disjoint copies of `𝔽*^{≤k}` folded onto one: every lift exists but
/// the fiber over `⟨0⟩` has two objects.
pub fn double_cover_fixture(k: usize) -> FibrousCandidate {
    let base = Arc::new(fin_star(k, Flavor::Flat));
    let (_, fold) = disjoint_double(&base.base);
    FibrousCandidate::new(fold, base).expect("fold lands in the base")
}
