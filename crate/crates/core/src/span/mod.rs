//! Homotopy categories of spans `x <- w -> y` built from adequate triples,
//! with their span pattern structure.

pub mod vertical;

use std::collections::HashMap;
use std::sync::Arc;

use crate::catalog::gsets::GSetCat;
use crate::fincat::{check_equivalence, restricted_slice, CatBuilder, CatError, FinCat, Functor, Slice};
use crate::homotopy::is_coinitial;
use crate::pattern::{check_sound, validate_pattern, AlgebraicPattern, Truncation};
use crate::verdict::Verdict;

pub use vertical::{build_ul_fg_star, VerticalArrows};

/// Chosen pullbacks of backward maps along forward maps.
pub trait PullbackOracle: Send + Sync {
    /// For `beta: a -> y` backward and `phi: b -> y` forward, the pullback
    /// `w` with its projections `w -> a` and `w -> b`. `None` when `w` lies
    /// outside the finite model.
    fn pullback(&self, beta: usize, phi: usize) -> Option<(usize, usize, usize)>;
}

impl PullbackOracle for GSetCat {
    fn pullback(&self, beta: usize, phi: usize) -> Option<(usize, usize, usize)> {
        GSetCat::pullback(self, beta, phi)
    }
}

#[derive(Clone)]
pub struct AdequateTriple {
    /// must be skeletal
    pub ambient: Arc<FinCat>,
    pub backward: Vec<bool>,
    pub forward: Vec<bool>,
    pub oracle: Arc<dyn PullbackOracle>,
}

impl std::fmt::Debug for AdequateTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AdequateTriple({:?})", self.ambient)
    }
}

impl AdequateTriple {
    pub fn new(
        ambient: Arc<FinCat>,
        backward: Vec<bool>,
        forward: Vec<bool>,
        oracle: Arc<dyn PullbackOracle>,
    ) -> Result<Self, CatError> {
        let t = AdequateTriple { ambient, backward, forward, oracle };
        let v = t.validate();
        if v.is_fails() {
            return Err(CatError::Structure(format!("triple is not adequate: {}", v.witness.join("; "))));
        }
        Ok(t)
    }

    /// All backward/forward pairs with a common target.
    fn cospans(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let c = &self.ambient;
        c.morphisms().filter(|&b| self.backward[b]).flat_map(move |b| {
            c.incoming(c.tgt(b)).iter().map(|&f| f as usize).filter(|&f| self.forward[f]).map(move |f| (b, f))
        })
    }

    /// Skeletality, wide subcategories, and oracle squares that commute with
    /// legs in the required classes.
    pub fn validate(&self) -> Verdict {
        const M: &str = "adequacy of the triple";
        let c = &self.ambient;
        if self.backward.len() != c.n_mor() || self.forward.len() != c.n_mor() {
            return Verdict::fails(M, "flag vectors have the wrong length");
        }
        let (reps, _, _) = c.iso_classes();
        if reps.len() != c.n_obj() {
            return Verdict::fails(M, "ambient category is not skeletal");
        }
        for (flags, what) in [(&self.backward, "backward"), (&self.forward, "forward")] {
            for o in c.objects() {
                if !flags[c.id(o)] {
                    return Verdict::fails(M, format!("identity of {} is not {what}", c.obj_label(o)));
                }
            }
            for f in c.morphisms().filter(|&f| flags[f]) {
                for &g in c.out_of(c.tgt(f)) {
                    let g = g as usize;
                    if let Some(h) = c.comp(g, f) {
                        if flags[g] && !flags[h] {
                            return Verdict::fails(M, format!("{what} maps not closed: {} o {}", c.mor_label(g), c.mor_label(f)));
                        }
                    }
                }
            }
        }
        let mut outside = 0usize;
        for (b, f) in self.cospans() {
            let Some((w, pa, pb)) = self.oracle.pullback(b, f) else {
                outside += 1;
                continue;
            };
            let ok_ends = c.src(pa) == w && c.src(pb) == w && c.tgt(pa) == c.src(b) && c.tgt(pb) == c.src(f);
            if !ok_ends || c.comp(b, pa) != c.comp(f, pb) || c.comp(b, pa).is_none() {
                return Verdict::fails(M, format!("pullback square of {} and {} does not commute", c.mor_label(b), c.mor_label(f)));
            }
            if !self.forward[pa] || !self.backward[pb] {
                return Verdict::fails(
                    M,
                    format!("pullback of {} along {} has projections in the wrong classes", c.mor_label(b), c.mor_label(f)),
                );
            }
        }
        let v = Verdict::holds(M);
        if outside > 0 {
            v.with_note(format!("{outside} pullbacks fall outside the finite model"))
        } else {
            v
        }
    }

    /// Every oracle square has the universal property against all cones
    /// from objects of the model.
    pub fn check_universal_property(&self) -> Verdict {
        const M: &str = "exhaustive universal property of chosen pullbacks";
        let c = &self.ambient;
        for (b, f) in self.cospans() {
            let Some((w, pa, pb)) = self.oracle.pullback(b, f) else { continue };
            for t in c.objects() {
                let mut hits: HashMap<(usize, usize), usize> = HashMap::new();
                for &h in c.hom(t, w) {
                    let h = h as usize;
                    let key = (c.comp(pa, h).unwrap_or(usize::MAX), c.comp(pb, h).unwrap_or(usize::MAX));
                    *hits.entry(key).or_default() += 1;
                }
                for &u in c.hom(t, c.src(b)) {
                    for &v in c.hom(t, c.src(f)) {
                        let (u, v) = (u as usize, v as usize);
                        if c.comp(b, u).is_none() || c.comp(b, u) != c.comp(f, v) {
                            continue;
                        }
                        let n = hits.get(&(u, v)).copied().unwrap_or(0);
                        if n != 1 {
                            return Verdict::fails(
                                M,
                                format!(
                                    "cone ({}, {}) over {} and {} has {n} factorizations",
                                    c.mor_label(u),
                                    c.mor_label(v),
                                    c.mor_label(b),
                                    c.mor_label(f)
                                ),
                            );
                        }
                    }
                }
            }
        }
        Verdict::holds(M)
    }
}

/// A span in canonical form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub apex: usize,
    pub back: usize,
    pub fwd: usize,
}

/// Canonical forms and composition of spans, without a category.
#[derive(Clone, Debug)]
pub struct SpanCalculus {
    pub triple: AdequateTriple,
    automorphisms: Vec<Vec<usize>>,
}

impl SpanCalculus {
    pub fn new(triple: AdequateTriple) -> Self {
        let amb = triple.ambient.clone();
        let automorphisms = amb
            .objects()
            .map(|w| amb.hom(w, w).iter().map(|&m| m as usize).filter(|&m| amb.is_iso(m)).collect())
            .collect();
        SpanCalculus { triple, automorphisms }
    }

    /// Smallest `(back ∘ σ, fwd ∘ σ)` over automorphisms `σ` of the apex,
    /// and the number of `σ` fixing `(back, fwd)`.
    pub fn canonical(&self, back: usize, fwd: usize) -> (Span, usize) {
        let amb = &self.triple.ambient;
        let w = amb.src(back);
        let mut best = (usize::MAX, usize::MAX);
        let mut stab = 0;
        for &s in &self.automorphisms[w] {
            let pair = (amb.comp(back, s).unwrap(), amb.comp(fwd, s).unwrap());
            if pair == (back, fwd) {
                stab += 1;
            }
            best = best.min(pair);
        }
        (Span { apex: w, back: best.0, fwd: best.1 }, stab)
    }

    /// `s2 ∘ s1` through the chosen pullback, in canonical form.
    pub fn compose(&self, s1: Span, s2: Span) -> Option<Span> {
        let amb = &self.triple.ambient;
        let (_, pa, pb) = self.triple.oracle.pullback(s2.back, s1.fwd)?;
        let bk = amb.comp(s1.back, pb)?;
        let fw = amb.comp(s2.fwd, pa)?;
        Some(self.canonical(bk, fw).0)
    }
}

/// The homotopy category of spans: morphisms are isomorphism classes of
/// spans, composed through the pullback oracle.
#[derive(Debug)]
pub struct SpanCategory {
    pub triple: AdequateTriple,
    pub calculus: SpanCalculus,
    pub cat: Arc<FinCat>,
    pub spans: Vec<Span>,
    lookup: HashMap<(usize, usize), usize>,
}

impl SpanCategory {
    pub fn build(triple: AdequateTriple, name: impl Into<String>) -> Result<Self, CatError> {
        let amb = triple.ambient.clone();
        let calc = SpanCalculus::new(triple.clone());
        let mut b = CatBuilder::new(name);
        for x in amb.objects() {
            b.add_object(amb.obj_label(x));
        }
        let mut spans = Vec::new();
        let mut lookup = HashMap::new();
        let mut aut2 = Vec::new();
        for x in amb.objects() {
            for y in amb.objects() {
                for w in amb.objects() {
                    for &bk in amb.hom(w, x) {
                        let bk = bk as usize;
                        if !triple.backward[bk] {
                            continue;
                        }
                        for &fw in amb.hom(w, y) {
                            let fw = fw as usize;
                            if !triple.forward[fw] {
                                continue;
                            }
                            let (s, stab) = calc.canonical(bk, fw);
                            if lookup.contains_key(&(s.back, s.fwd)) {
                                continue;
                            }
                            let id = b.add_morphism(format!("[{}|{}]", amb.mor_label(s.back), amb.mor_label(s.fwd)), x, y);
                            lookup.insert((s.back, s.fwd), id);
                            spans.push(s);
                            aut2.push(stab as u32);
                        }
                    }
                }
            }
        }
        for x in amb.objects() {
            let (s, _) = calc.canonical(amb.id(x), amb.id(x));
            b.set_identity(x, lookup[&(s.back, s.fwd)]);
        }
        b.set_two_cell_automorphisms(aut2);
        let cat = b.build_with(|g, f| {
            let s = calc.compose(spans[f], spans[g])?;
            lookup.get(&(s.back, s.fwd)).copied()
        })?;
        Ok(SpanCategory { triple, calculus: calc, cat: Arc::new(cat), spans, lookup })
    }

    pub fn ambient(&self) -> &Arc<FinCat> {
        &self.triple.ambient
    }

    pub fn find_span(&self, back: usize, fwd: usize) -> Option<usize> {
        let (s, _) = self.calculus.canonical(back, fwd);
        self.lookup.get(&(s.back, s.fwd)).copied()
    }

    /// `s2 ∘ s1`, `None` outside the model.
    pub fn compose_spans(&self, s1: usize, s2: usize) -> Option<usize> {
        self.cat.comp(s2, s1)
    }

    /// The span `x <- w = w` of a backward map `w -> x`.
    pub fn backward_span(&self, beta: usize) -> usize {
        let amb = &self.triple.ambient;
        self.find_span(beta, amb.id(amb.src(beta))).expect("backward maps are spans")
    }

    /// The span `w = w -> y` of a forward map `w -> y`.
    pub fn forward_span(&self, phi: usize) -> usize {
        let amb = &self.triple.ambient;
        self.find_span(amb.id(amb.src(phi)), phi).expect("forward maps are spans")
    }

    /// Automorphism count of the apex compatible with both legs.
    pub fn stabilizer(&self, s: usize) -> usize {
        self.cat.two_cell_automorphisms(s) as usize
    }

    /// Functor on spans induced by an ambient functor that preserves both
    /// classes and chosen pullbacks.
    pub fn induced_functor(&self, target: &SpanCategory, amb: &Functor) -> Result<Functor, CatError> {
        let mor = self
            .spans
            .iter()
            .enumerate()
            .map(|(i, s)| {
                target.find_span(amb.mor(s.back), amb.mor(s.fwd)).ok_or_else(|| {
                    CatError::Structure(format!("image of span {} lies outside the target", self.cat.mor_label(i)))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let obj = self.triple.ambient.objects().map(|o| amb.obj(o)).collect();
        Functor::new(self.cat.clone(), target.cat.clone(), obj, mor)
    }
}

/// A span category with inert = backward, active = forward and the given
/// elementary objects.
#[derive(Debug)]
pub struct SpanPattern {
    pub spans: Arc<SpanCategory>,
    pub pattern: Arc<AlgebraicPattern>,
}

pub fn build_span_pattern(
    triple: AdequateTriple,
    elementary: Vec<bool>,
    name: impl Into<String>,
    truncation: Option<Truncation>,
) -> Result<SpanPattern, CatError> {
    let name = name.into();
    let spans = SpanCategory::build(triple, name.clone())?;
    let amb = spans.ambient().clone();
    let inert = spans.spans.iter().map(|s| amb.is_iso(s.fwd)).collect();
    let active = spans.spans.iter().map(|s| amb.is_iso(s.back)).collect();
    let pattern = AlgebraicPattern::new(name, spans.cat.clone(), inert, active, elementary, truncation);
    Ok(SpanPattern { spans: Arc::new(spans), pattern: Arc::new(pattern) })
}

/// `𝔛^b_{0/y}` (backward maps from elementaries) and `𝔛_{0/y}` (all maps).
fn elementary_slices(sp: &SpanPattern, y: usize) -> (Slice, Slice) {
    let t = &sp.spans.triple;
    let amb = &t.ambient;
    let el = &sp.pattern.elementary;
    let back = restricted_slice(amb, y, |a| el[amb.src(a)] && t.backward[a], |u| t.backward[u], "Xb_0/y");
    let all = restricted_slice(amb, y, |a| el[amb.src(a)], |_| true, "X_0/y");
    (back, all)
}

/// Inclusion of a restricted slice into a larger one on the same object.
pub fn slice_inclusion(sub: &Slice, sup: &Slice) -> Functor {
    let obj: Vec<usize> = sub.arrows.iter().map(|&a| sup.object_of_arrow(a).expect("sub-slice arrow")).collect();
    let mor = sub
        .cat
        .morphisms()
        .map(|m| {
            let (a, b) = (obj[sub.cat.src(m)], obj[sub.cat.tgt(m)]);
            sup.cat.hom(a, b).iter().map(|&k| k as usize).find(|&k| sup.conn[k] == sub.conn[m]).expect("sub-slice morphism")
        })
        .collect();
    Functor::new_unchecked(sub.cat.clone(), sup.cat.clone(), obj, mor)
}

/// The elementary slice at each object is equivalent to `(𝔛^b_{0/x})^op`.
pub fn check_elementary_slices(sp: &SpanPattern) -> Verdict {
    const M: &str = "elementary slices against backward elementary slices";
    let p = &sp.pattern;
    let parts = p.base.objects().map(|x| {
        let (back, _) = elementary_slices(sp, x);
        let op = Arc::new(back.cat.opposite());
        check_equivalence(&p.elementary_slice(x).cat, &op).0.context(&format!("at {}", p.base.obj_label(x)))
    });
    Verdict::all(M, parts)
}

/// Validation of the span pattern and of its elementary slices.
pub fn verify_span_pattern(sp: &SpanPattern) -> Verdict {
    let v = validate_pattern(&sp.pattern).verdict;
    if !v.is_holds() {
        return v;
    }
    check_elementary_slices(sp)
}

/// Soundness through the span criterion: `𝔛^b_{/y} -> 𝔛_{/y}` fully
/// faithful and `𝔛^b_{0/y} -> 𝔛_{0/y}` cofinal for every `y`. The
/// criterion is sufficient only; when it is not met the direct soundness
/// check decides.
pub fn check_span_sound(sp: &SpanPattern) -> Verdict {
    const M: &str = "span soundness criterion";
    let t = &sp.spans.triple;
    let amb = &t.ambient;
    let mut parts = Vec::new();
    for y in amb.objects() {
        let back_in: Vec<usize> = amb.incoming(y).iter().map(|&m| m as usize).filter(|&m| t.backward[m]).collect();
        let mut ff = None;
        'outer: for &b1 in &back_in {
            for &b2 in &back_in {
                for &u in amb.hom(amb.src(b1), amb.src(b2)) {
                    let u = u as usize;
                    if amb.comp(b2, u) == Some(b1) && !t.backward[u] {
                        ff = Some(format!("{} over {} is not backward", amb.mor_label(u), amb.obj_label(y)));
                        break 'outer;
                    }
                }
            }
        }
        if let Some(w) = ff {
            parts.push(Verdict::fails(M, w));
            continue;
        }
        let (back, all) = elementary_slices(sp, y);
        let inc = slice_inclusion(&back, &all);
        let inc_op = inc.opposite(Arc::new(back.cat.opposite()), Arc::new(all.cat.opposite()));
        parts.push(is_coinitial(&inc_op).context(&format!("at {}", amb.obj_label(y))));
    }
    let mut v = Verdict::all(M, parts);
    if t.backward.iter().all(|&b| b) {
        v = v.with_note("every map is backward, so the pattern is sound outright");
    }
    if !v.is_holds() {
        let direct = check_sound(&sp.pattern).verdict;
        let reason = v.witness.first().or(v.reason.as_ref()).cloned().unwrap_or_default();
        return direct.with_note(format!("span criterion not met ({reason}); decided by the direct check"));
    }
    v
}

/// `Span_{b,f}(𝔽_G; Orb_G)` over a truncated `𝔽_G`.
pub fn gset_span_pattern(
    gs: Arc<GSetCat>,
    backward: impl Fn(&GSetCat, usize) -> bool,
    forward: impl Fn(&GSetCat, usize) -> bool,
    name: impl Into<String>,
) -> Result<SpanPattern, CatError> {
    let amb = gs.cat.clone();
    let bk = amb.morphisms().map(|m| backward(&gs, m)).collect();
    let fw = amb.morphisms().map(|m| forward(&gs, m)).collect();
    let elementary = amb.objects().map(|x| gs.n_orbits(x) == 1).collect();
    let trunc = Truncation {
        size: amb.objects().map(|x| gs.n_orbits(x)).collect(),
        cap: gs.caps.orbits,
        note: if gs.group.is_trivial() {
            format!("finite sets of size <= {}", gs.caps.points)
        } else {
            format!("{}-sets with <= {} orbits and <= {} points", gs.group.name, gs.caps.orbits, gs.caps.points)
        },
    };
    let triple = AdequateTriple::new(amb, bk, fw, gs)?;
    build_span_pattern(triple, elementary, name, Some(trunc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::gsets::{FiniteGroup, GSetCaps};

    fn span_f(k: usize) -> SpanPattern {
        let gs = Arc::new(GSetCat::finite_sets(k));
        gset_span_pattern(gs, |_, _| true, |_, _| true, format!("Span(F<={k})")).unwrap()
    }

    #[test]
    fn square_of_two_points_over_a_point() {
        let gs = Arc::new(GSetCat::finite_sets(4));
        let all = vec![true; gs.cat.n_mor()];
        let calc = SpanCalculus::new(AdequateTriple::new(gs.cat.clone(), all.clone(), all, gs.clone()).unwrap());
        let fold = gs.find_map(2, 1, &[0, 0]).unwrap();
        let (s, stab) = calc.canonical(fold, fold);
        assert_eq!(stab, 2);
        let sq = calc.compose(s, s).unwrap();
        assert_eq!(sq.apex, 4);
        let (id, _) = calc.canonical(gs.cat.id(1), gs.cat.id(1));
        assert_eq!(calc.compose(s, id), Some(s));
    }

    #[test]
    fn endomorphisms_of_a_point() {
        let sp = span_f(3);
        assert_eq!(sp.spans.cat.hom(1, 1).len(), 4);
        assert!(sp.spans.cat.check_associativity().is_ok());
    }

    #[test]
    fn span_f_validates_and_is_sound() {
        let sp = span_f(2);
        assert!(verify_span_pattern(&sp).is_holds());
        assert!(check_span_sound(&sp).is_holds());
        assert_eq!(sp.pattern.elementary_slice(2).cat.n_obj(), 2);
        assert!(sp.spans.triple.check_universal_property().is_holds());
    }

    #[test]
    fn c2_orbits_are_elementary() {
        let gs = Arc::new(GSetCat::new(FiniteGroup::cyclic(2), GSetCaps { orbits: 2, points: 4 }).unwrap());
        let sp = gset_span_pattern(gs, |_, _| true, |_, _| true, "Span(F_C2)").unwrap();
        let el: Vec<&str> = sp.pattern.elementary_objects().iter().map(|&o| sp.pattern.base.obj_label(o)).collect();
        assert_eq!(el, vec!["C2/e", "C2/C2"]);
    }
}
