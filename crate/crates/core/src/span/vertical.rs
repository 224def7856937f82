//! Arrows `U -> V` of G-sets with `V` an orbit, and the span pattern of
//! G-operators built on them.

use std::collections::HashMap;
use std::sync::Arc;

use super::{build_span_pattern, AdequateTriple, PullbackOracle, SpanPattern};
use crate::catalog::gsets::{FiniteGroup, GSetCaps, GSetCat};
use crate::fincat::{CatBuilder, CatError, FinCat, Functor};
use crate::pattern::Truncation;

/// Skeletal category of arrows `U -> V` into orbits, morphisms commuting
/// squares `(top: U -> X, bottom: V -> Y)`.
#[derive(Debug)]
pub struct VerticalArrows {
    pub gsets: Arc<GSetCat>,
    /// representative G-map of each object
    pub arrows: Vec<usize>,
    /// `(top, bottom)` of each morphism
    pub squares: Vec<(usize, usize)>,
    pub cat: Arc<FinCat>,
    /// `U -> X ×_Y V` injective
    pub si: Vec<bool>,
    /// bottom map invertible
    pub tdeg: Vec<bool>,
    /// G-map into an orbit ↦ `(object, top iso, bottom iso)` of a square
    /// from it to its representative
    class_of: HashMap<usize, (usize, usize, usize)>,
    square_lookup: HashMap<(usize, usize, usize, usize), usize>,
}

impl VerticalArrows {
    pub fn new(gs: Arc<GSetCat>) -> Result<Self, CatError> {
        let c = gs.cat.clone();
        let orbits = gs.orbits();
        let auts = |x: usize| -> Vec<usize> { c.hom(x, x).iter().map(|&m| m as usize).filter(|&m| c.is_iso(m)).collect() };
        let mut arrows = Vec::new();
        let mut class_of = HashMap::new();
        for u in c.objects() {
            for &v in &orbits {
                let (au, av) = (auts(u), auts(v));
                for &m in c.hom(u, v) {
                    let m = m as usize;
                    if class_of.contains_key(&m) {
                        continue;
                    }
                    let obj = arrows.len();
                    arrows.push(m);
                    // m' = κ m σ⁻¹ has the square (σ, κ⁻¹)... written as rep∘σ' = κ'∘m'
                    for &s in &au {
                        for &k in &av {
                            let s_inv = c.inverse(s).unwrap();
                            let m2 = c.comp(k, c.comp(m, s_inv).unwrap()).unwrap();
                            class_of.entry(m2).or_insert((obj, s, c.inverse(k).unwrap()));
                        }
                    }
                }
            }
        }
        let mut b = CatBuilder::new(format!("F^v_{}", gs.group.name));
        for &m in &arrows {
            b.add_object(c.mor_label(m));
        }
        let mut squares = Vec::new();
        let mut square_lookup = HashMap::new();
        for (i, &f) in arrows.iter().enumerate() {
            for (j, &g) in arrows.iter().enumerate() {
                for &h in c.hom(c.src(f), c.src(g)) {
                    for &k in c.hom(c.tgt(f), c.tgt(g)) {
                        let (h, k) = (h as usize, k as usize);
                        if c.comp(g, h) != c.comp(k, f) {
                            continue;
                        }
                        let id = b.add_morphism(format!("({}; {})", c.mor_label(h), c.mor_label(k)), i, j);
                        if i == j && c.is_identity(h) && c.is_identity(k) {
                            b.set_identity(i, id);
                        }
                        square_lookup.insert((i, j, h, k), id);
                        squares.push((h, k));
                    }
                }
            }
        }
        let ends: Vec<(usize, usize)> = (0..b.n_mor()).map(|m| (b.morphism_src(m), b.morphism_tgt(m))).collect();
        let cat = b.build_with(|g, f| {
            let ((h1, k1), (h2, k2)) = (squares[f], squares[g]);
            square_lookup.get(&(ends[f].0, ends[g].1, c.comp(h2, h1)?, c.comp(k2, k1)?)).copied()
        })?;
        let si = cat
            .morphisms()
            .map(|m| {
                let (h, _) = squares[m];
                let f = arrows[cat.src(m)];
                let mut seen = std::collections::HashSet::new();
                (0..gs.n_points(c.src(h))).all(|p| seen.insert((gs.maps[h][p], gs.maps[f][p])))
            })
            .collect();
        let tdeg = squares.iter().map(|&(_, k)| c.is_iso(k)).collect();
        Ok(VerticalArrows { gsets: gs, arrows, squares, cat: Arc::new(cat), si, tdeg, class_of, square_lookup })
    }

    pub fn find_square(&self, src: usize, tgt: usize, top: usize, bottom: usize) -> Option<usize> {
        self.square_lookup.get(&(src, tgt, top, bottom)).copied()
    }

    /// Source `U` of the arrow at each object.
    pub fn source_object(&self, o: usize) -> usize {
        self.gsets.cat.src(self.arrows[o])
    }

    /// Objects `Q = Q` for an orbit `Q`.
    pub fn is_orbit_identity(&self, o: usize) -> bool {
        let c = &self.gsets.cat;
        let m = self.arrows[o];
        c.is_iso(m)
    }

    /// Evaluation at the source, `(U -> V) ↦ U`.
    pub fn source_functor(&self) -> Functor {
        let obj = self.cat.objects().map(|o| self.source_object(o)).collect();
        let mor = self.squares.iter().map(|&(h, _)| h).collect();
        Functor::new_unchecked(self.cat.clone(), self.gsets.cat.clone(), obj, mor)
    }
}

impl PullbackOracle for VerticalArrows {
    fn pullback(&self, beta: usize, phi: usize) -> Option<(usize, usize, usize)> {
        let c = &self.gsets.cat;
        let (hb, kb) = self.squares[beta];
        let (hp, kp) = self.squares[phi];
        let (a_obj, c_obj) = (self.cat.src(beta), self.cat.src(phi));
        let fa = self.arrows[a_obj];
        let (_, pa, pc) = self.gsets.pullback(hb, hp)?;
        let m = c.comp(fa, pa)?;
        let &(w, s, k) = self.class_of.get(&m)?;
        let (s_inv, k_inv) = (c.inverse(s)?, c.inverse(k)?);
        let to_a = self.find_square(w, a_obj, c.comp(pa, s_inv)?, k_inv)?;
        let d = c.comp(c.inverse(kp)?, kb)?;
        let to_c = self.find_square(w, c_obj, c.comp(pc, s_inv)?, c.comp(d, k_inv)?)?;
        Some((w, to_a, to_c))
    }
}

/// The pattern `Span_{si,tdeg}(𝔽^v_G; Orb_G)` with underlying G-sets of at
/// most `points` points and `orbits` orbits, together with its arrow
/// category.
pub fn build_ul_fg_star(group: FiniteGroup, caps: GSetCaps) -> Result<(SpanPattern, Arc<VerticalArrows>), CatError> {
    let gs = Arc::new(GSetCat::new(group, caps)?);
    let va = Arc::new(VerticalArrows::new(gs.clone())?);
    let elementary = va.cat.objects().map(|o| va.is_orbit_identity(o)).collect();
    let trunc = Truncation {
        size: va.cat.objects().map(|o| gs.n_points(va.source_object(o))).collect(),
        cap: caps.points,
        note: format!("arrows U -> V with |U| <= {} points and <= {} orbits", caps.points, caps.orbits),
    };
    let triple = AdequateTriple::new(va.cat.clone(), va.si.clone(), va.tdeg.clone(), va.clone())?;
    let name = format!("ulF_{},*", gs.group.name);
    Ok((build_span_pattern(triple, elementary, name, Some(trunc))?, va))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::validate_pattern;
    use crate::span::check_span_sound;

    #[test]
    fn c2_vertical_arrows() {
        let gs = Arc::new(GSetCat::new(FiniteGroup::cyclic(2), GSetCaps { orbits: 2, points: 4 }).unwrap());
        let va = VerticalArrows::new(gs).unwrap();
        assert_eq!(va.cat.n_obj(), 9);
        assert!(va.cat.check_associativity().is_ok());
    }

    #[test]
    fn c2_ul_fg_star() {
        let (sp, _) = build_ul_fg_star(FiniteGroup::cyclic(2), GSetCaps { orbits: 2, points: 4 }).unwrap();
        assert!(sp.spans.triple.check_universal_property().is_holds());
        assert_eq!(sp.pattern.elementary_objects().len(), 2);
        assert!(validate_pattern(&sp.pattern).verdict.is_holds());
        assert!(check_span_sound(&sp).is_holds());
    }
}
