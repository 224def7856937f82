//! Span fixtures over finite (G-)sets and the comparison maps between them.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::finstar::{fin_star, Flavor};
use super::gsets::{check_f_class, FiniteGroup, GSetCaps, GSetCat};
use super::operads::parse_pointed_map;
use crate::fincat::{CatError, Functor};
use crate::pattern::PatternMorphism;
use crate::span::{build_ul_fg_star, gset_span_pattern, SpanPattern, VerticalArrows};

/// Which G-maps may be used as forward legs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ForwardClass {
    Isomorphisms,
    Injective,
    All,
}

impl ForwardClass {
    pub fn contains(self, gs: &GSetCat, m: usize) -> bool {
        match self {
            ForwardClass::Isomorphisms => gs.cat.is_iso(m),
            ForwardClass::Injective => gs.is_injective(m),
            ForwardClass::All => true,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            ForwardClass::Isomorphisms => "iso",
            ForwardClass::Injective => "inj",
            ForwardClass::All => "all",
        }
    }
}

/// `Span(𝔽_{≤k}; {1})`.
pub fn span_fin(k: usize) -> SpanPattern {
    let gs = Arc::new(GSetCat::finite_sets(k));
    gset_span_pattern(gs, |_, _| true, |_, _| true, format!("Span(F<={k})")).expect("finite sets form an adequate triple")
}

/// `Span_{inj,all}(𝔽_{≤k}; {1})`.
pub fn span_fin_injective(k: usize) -> SpanPattern {
    let gs = Arc::new(GSetCat::finite_sets(k));
    gset_span_pattern(gs, |g, m| g.is_injective(m), |_, _| true, format!("Span_inj,all(F<={k})"))
        .expect("injections and all maps form an adequate triple")
}

/// `Span_{all,f}(𝔽_{≤k}; {1})`.
pub fn span_fin_restricted(k: usize, fwd: ForwardClass) -> SpanPattern {
    let gs = Arc::new(GSetCat::finite_sets(k));
    gset_span_pattern(gs, |_, _| true, move |g, m| fwd.contains(g, m), format!("Span_all,{}(F<={k})", fwd.tag()))
        .expect("closed forward class")
}

/// `𝔦: 𝔽*^{≤k} -> Span(𝔽_{≤k})`, sending `f: ⟨m⟩ -> ⟨n⟩` to
/// `m <- f⁻¹{1..n} -> n` with the order-preserving inclusion.
pub fn pointed_to_spans(k: usize, spans: &SpanPattern) -> Result<PatternMorphism, CatError> {
    let src = Arc::new(fin_star(k, Flavor::Flat));
    let amb = spans.spans.ambient();
    let gs_maps = |d: usize, x: usize, img: &[u32]| -> Option<usize> {
        amb.hom(d, x).iter().map(|&m| m as usize).find(|&m| amb.mor_label(m).ends_with(&format_images(img)))
    };
    let mut mor = Vec::with_capacity(src.base.n_mor());
    for f in src.base.morphisms() {
        let (m, n) = (src.base.src(f), src.base.tgt(f));
        let map = parse_pointed_map(src.base.mor_label(f));
        let defined: Vec<usize> = (0..m).filter(|&i| map[i] != 0).collect();
        let back: Vec<u32> = defined.iter().map(|&i| i as u32).collect();
        let fwd: Vec<u32> = defined.iter().map(|&i| map[i] as u32 - 1).collect();
        let d = defined.len();
        let b = gs_maps(d, m, &back).ok_or_else(|| CatError::Structure("backward leg missing".into()))?;
        let w = gs_maps(d, n, &fwd).ok_or_else(|| CatError::Structure("forward leg missing".into()))?;
        mor.push(spans.spans.find_span(b, w).ok_or_else(|| CatError::Structure("span missing".into()))?);
    }
    let functor = Functor::new(src.base.clone(), spans.pattern.base.clone(), (0..=k).collect(), mor)?;
    PatternMorphism::new(functor, src, spans.pattern.clone())
}

fn format_images(img: &[u32]) -> String {
    format!(":[{}]", img.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

/// The G-equivariant fixtures at one truncation.
#[derive(Debug)]
pub struct GFixtures {
    pub gsets: Arc<GSetCat>,
    /// `Span(𝔽_G; Orb_G)`
    pub span: SpanPattern,
    /// `𝔽_{G,*} = Span_{inj,all}(𝔽_G; Orb_G)`
    pub pointed: SpanPattern,
    /// `Span_{all,f}(𝔽_G; Orb_G)`
    pub restricted: SpanPattern,
    /// `Span_{si,tdeg}(𝔽^v_G; Orb_G)`
    pub ul_pointed: SpanPattern,
    pub vertical: Arc<VerticalArrows>,
    /// `s: ulF_{G,*} -> Span(𝔽_G)`, evaluation at the source
    pub source_map: PatternMorphism,
    /// `𝔽_{G,*} -> Span(𝔽_G)`
    pub pointed_map: PatternMorphism,
    /// `Span_{all,f}(𝔽_G) -> Span(𝔽_G)`
    pub restricted_map: PatternMorphism,
}

/// Builds all fixtures for `G` with at most `orbit_cap` orbits. The forward
/// class is checked for closure first and rejected with a witness.
pub fn g_fixtures(group: FiniteGroup, orbit_cap: usize, fwd: ForwardClass) -> Result<GFixtures, CatError> {
    let caps = GSetCaps { orbits: orbit_cap, points: orbit_cap * group.order() };
    let gs = Arc::new(GSetCat::new(group.clone(), caps)?);
    let class: Vec<bool> = gs.cat.morphisms().map(|m| fwd.contains(&gs, m)).collect();
    let closure = check_f_class(&gs, &class);
    if closure.is_fails() {
        return Err(CatError::Structure(format!("forward class rejected: {}", closure.witness.join("; "))));
    }
    let g = gs.group.name.clone();
    let span = gset_span_pattern(gs.clone(), |_, _| true, |_, _| true, format!("Span(F_{g})"))?;
    let pointed = gset_span_pattern(gs.clone(), |s, m| s.is_injective(m), |_, _| true, format!("F_{g},*"))?;
    let restricted =
        gset_span_pattern(gs.clone(), |_, _| true, move |s, m| fwd.contains(s, m), format!("Span_all,{}(F_{g})", fwd.tag()))?;
    let (ul_pointed, vertical) = build_ul_fg_star(group, caps)?;
    let into_span = |sp: &SpanPattern, amb: &Functor| -> Result<PatternMorphism, CatError> {
        let f = sp.spans.induced_functor(&span.spans, amb)?;
        PatternMorphism::new(f, sp.pattern.clone(), span.pattern.clone())
    };
    let ident = Functor::identity(gs.cat.clone());
    let source_map = into_span(&ul_pointed, &vertical.source_functor())?;
    let pointed_map = into_span(&pointed, &ident)?;
    let restricted_map = into_span(&restricted, &ident)?;
    Ok(GFixtures { gsets: gs, span, pointed, restricted, ul_pointed, vertical, source_map, pointed_map, restricted_map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::check_equivalence;
    use crate::pattern::validate_pattern;

    #[test]
    fn pointed_sets_embed_in_spans() {
        let sp = span_fin(2);
        let i = pointed_to_spans(2, &sp).unwrap();
        assert!(i.functor.faithfulness_witness().is_none());
    }

    #[test]
    fn injective_spans_match_pointed_sets() {
        let sp = span_fin_injective(3);
        let fs = fin_star(3, Flavor::Flat);
        assert!(validate_pattern(&sp.pattern).verdict.is_holds());
        assert!(check_equivalence(&sp.pattern.base, &fs.base).0.is_holds());
    }

    #[test]
    fn trivial_group_fixtures() {
        let fx = g_fixtures(FiniteGroup::trivial(), 2, ForwardClass::Isomorphisms).unwrap();
        assert_eq!(fx.span.pattern.base.n_mor(), span_fin(2).pattern.base.n_mor());
    }

    #[test]
    fn c2_fixtures_build() {
        let fx = g_fixtures(FiniteGroup::cyclic(2), 2, ForwardClass::Isomorphisms).unwrap();
        assert_eq!(fx.gsets.orbits().len(), 2);
        assert!(fx.source_map.validate().is_ok());
    }
}
