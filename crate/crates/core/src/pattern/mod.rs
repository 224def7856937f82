//! Algebraic patterns: a finite category with an inert/active factorization
//! system and a set of elementary objects.

pub mod extend;
pub mod product;
pub mod segal;
pub mod slices;
pub mod sound;

use std::sync::{Arc, OnceLock};

use crate::fincat::{CatError, FinCat, Functor, Slice};
use crate::verdict::Verdict;

pub use extend::{check_extendable, ActiveSlices, ExtendReport, MissingFamily};
pub use product::product_pattern;
pub use segal::{check_relative_segal_set, check_segal_set, segal_comparison, DiagramMap};
pub use slices::{active_pushforward, el_beta_fiber, el_beta_fiber_poset, pushforward_functor, Pushforward};
pub use sound::{check_sound, SoundReport, SoundRow};

/// Which objects of an infinite pattern the finite model keeps.
#[derive(Clone, Debug)]
pub struct Truncation {
    /// size of each object (cardinality, number of orbits, number of edges)
    pub size: Vec<usize>,
    /// largest size present in the model
    pub cap: usize,
    pub note: String,
}

pub struct AlgebraicPattern {
    pub name: String,
    pub base: Arc<FinCat>,
    pub inert: Vec<bool>,
    pub active: Vec<bool>,
    pub elementary: Vec<bool>,
    pub truncation: Option<Truncation>,
    factor_cache: OnceLock<Vec<(u32, u32)>>,
    el_cache: OnceLock<Vec<Slice>>,
    inert_cache: OnceLock<Vec<Slice>>,
    active_cache: OnceLock<Vec<Slice>>,
}

impl std::fmt::Debug for AlgebraicPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AlgebraicPattern({}, {:?})", self.name, self.base)
    }
}

impl Clone for AlgebraicPattern {
    fn clone(&self) -> Self {
        AlgebraicPattern::new(
            self.name.clone(),
            self.base.clone(),
            self.inert.clone(),
            self.active.clone(),
            self.elementary.clone(),
            self.truncation.clone(),
        )
    }
}

const NO_FACTOR: u32 = u32::MAX;

impl AlgebraicPattern {
    pub fn new(
        name: impl Into<String>,
        base: Arc<FinCat>,
        inert: Vec<bool>,
        active: Vec<bool>,
        elementary: Vec<bool>,
        truncation: Option<Truncation>,
    ) -> Self {
        AlgebraicPattern {
            name: name.into(),
            base,
            inert,
            active,
            elementary,
            truncation,
            factor_cache: OnceLock::new(),
            el_cache: OnceLock::new(),
            inert_cache: OnceLock::new(),
            active_cache: OnceLock::new(),
        }
    }

    /// Every morphism inert and only identities active.
    pub fn all_inert(name: impl Into<String>, base: Arc<FinCat>, elementary: Vec<bool>) -> Self {
        let inert = vec![true; base.n_mor()];
        let active = base.morphisms().map(|m| base.is_identity(m)).collect();
        AlgebraicPattern::new(name, base, inert, active, elementary, None)
    }

    pub fn is_inert(&self, m: usize) -> bool {
        self.inert[m]
    }

    pub fn is_active(&self, m: usize) -> bool {
        self.active[m]
    }

    pub fn is_elementary(&self, o: usize) -> bool {
        self.elementary[o]
    }

    pub fn elementary_objects(&self) -> Vec<usize> {
        self.base.objects().filter(|&o| self.elementary[o]).collect()
    }

    pub fn truncation_note(&self) -> String {
        match &self.truncation {
            Some(t) => format!("truncation-relative ({}; cap {})", t.note, t.cap),
            None => "finite pattern, no truncation".to_string(),
        }
    }

    /// All inert-then-active factorizations `(i, a)` with `a ∘ i = f`.
    pub fn factorizations(&self, f: usize) -> Vec<(usize, usize)> {
        let c = &self.base;
        let (x, y) = (c.src(f), c.tgt(f));
        let mut out = Vec::new();
        for &i in c.out_of(x) {
            let i = i as usize;
            if !self.inert[i] {
                continue;
            }
            for &a in c.hom(c.tgt(i), y) {
                let a = a as usize;
                if self.active[a] && c.comp(a, i) == Some(f) {
                    out.push((i, a));
                }
            }
        }
        out
    }

    fn factor_table(&self) -> &Vec<(u32, u32)> {
        self.factor_cache.get_or_init(|| {
            let c = &self.base;
            c.morphisms()
                .map(|f| {
                    if self.active[f] && self.inert[c.id(c.src(f))] {
                        return (c.id(c.src(f)) as u32, f as u32);
                    }
                    if self.inert[f] && self.active[c.id(c.tgt(f))] {
                        return (f as u32, c.id(c.tgt(f)) as u32);
                    }
                    self.factorizations(f)
                        .into_iter()
                        .min()
                        .map_or((NO_FACTOR, NO_FACTOR), |(i, a)| (i as u32, a as u32))
                })
                .collect()
        })
    }

    /// Canonical factorization: `(id, f)` for active `f`, `(f, id)` for
    /// inert `f`, otherwise the smallest pair by morphism index.
    pub fn factor(&self, f: usize) -> Option<(usize, usize)> {
        let (i, a) = self.factor_table()[f];
        (i != NO_FACTOR).then_some((i as usize, a as usize))
    }

    /// Inert and active parts of the composite `g ∘ f`, if it is in the model.
    pub fn factor_composite(&self, g: usize, f: usize) -> Option<(usize, usize)> {
        self.factor(self.base.comp(g, f)?)
    }

    /// `𝒪^int_{X/}`: inert maps out of `X`, inert connecting maps.
    pub fn inert_under(&self, x: usize) -> &Slice {
        &self.inert_cache.get_or_init(|| {
            self.base
                .objects()
                .map(|o| {
                    crate::fincat::restricted_coslice(
                        &self.base,
                        o,
                        |m| self.inert[m],
                        |m| self.inert[m],
                        format!("int_{}/", self.base.obj_label(o)),
                    )
                })
                .collect()
        })[x]
    }

    /// `𝒪^el_{X/}`: full subcategory of the inert under-category on maps to
    /// elementary objects.
    pub fn elementary_slice(&self, x: usize) -> &Slice {
        &self.el_cache.get_or_init(|| {
            self.base
                .objects()
                .map(|o| {
                    crate::fincat::restricted_coslice(
                        &self.base,
                        o,
                        |m| self.inert[m] && self.elementary[self.base.tgt(m)],
                        |m| self.inert[m],
                        format!("el_{}/", self.base.obj_label(o)),
                    )
                })
                .collect()
        })[x]
    }

    /// `𝒪^act_{/X}`: active maps into `X`, active connecting maps.
    pub fn active_slice(&self, x: usize) -> &Slice {
        &self.active_cache.get_or_init(|| {
            self.base
                .objects()
                .map(|o| {
                    crate::fincat::restricted_slice(
                        &self.base,
                        o,
                        |m| self.active[m],
                        |m| self.active[m],
                        format!("act_/{}", self.base.obj_label(o)),
                    )
                })
                .collect()
        })[x]
    }

    /// Functor from the elementary slice at `x` to the base, taking each
    /// inert map to its target.
    pub fn el_target_functor(&self, x: usize) -> Functor {
        self.elementary_slice(x).far_end(&self.base, true)
    }

    /// Wide subcategory of inert morphisms.
    pub fn inert_subcategory(&self) -> (FinCat, Vec<usize>) {
        let keep_obj = vec![true; self.base.n_obj()];
        let (c, _, m) = self
            .base
            .subcategory(&keep_obj, &self.inert, format!("{}^int", self.name))
            .expect("inert morphisms form a subcategory");
        (c, m)
    }

    pub fn active_subcategory(&self) -> (FinCat, Vec<usize>) {
        let keep_obj = vec![true; self.base.n_obj()];
        let (c, _, m) = self
            .base
            .subcategory(&keep_obj, &self.active, format!("{}^act", self.name))
            .expect("active morphisms form a subcategory");
        (c, m)
    }
}

/// Outcome of [`validate_pattern`], with one diagnosis line per offender.
#[derive(Clone, Debug)]
pub struct PatternReport {
    pub verdict: Verdict,
    pub offenders: Vec<String>,
}

/// Checks flag shapes, wide-subcategory closure and that the category of
/// inert-active factorizations of every morphism is a contractible groupoid.
///
/// For homotopy categories of (2,1)-categories each morphism carries the
/// order of its automorphism group in the hom-groupoid; the factorization
/// groupoid must then be connected with automorphism groups of that order,
/// which is what contractibility of the (2,1)-categorical factorization space
/// looks like after passing to homotopy categories.
pub fn validate_pattern(p: &AlgebraicPattern) -> PatternReport {
    const M: &str = "exhaustive factorization scan";
    let c = &p.base;
    let mut off = Vec::new();
    if p.inert.len() != c.n_mor() || p.active.len() != c.n_mor() || p.elementary.len() != c.n_obj() {
        return PatternReport { verdict: Verdict::fails(M, "flag vectors have the wrong length"), offenders: vec![] };
    }
    for o in c.objects() {
        let i = c.id(o);
        if !p.inert[i] || !p.active[i] {
            off.push(format!("identity of {} not flagged inert and active", c.obj_label(o)));
        }
    }
    for (flags, what) in [(&p.inert, "inert"), (&p.active, "active")] {
        for f in c.morphisms().filter(|&f| flags[f]) {
            for &g in c.out_of(c.tgt(f)) {
                let g = g as usize;
                if !flags[g] {
                    continue;
                }
                if let Some(h) = c.comp(g, f) {
                    if !flags[h] {
                        off.push(format!(
                            "{what} morphisms not closed under composition: {} o {} = {}",
                            c.mor_label(g),
                            c.mor_label(f),
                            c.mor_label(h)
                        ));
                    }
                }
            }
        }
    }
    if off.is_empty() {
        for f in c.morphisms() {
            if let Some(d) = factorization_diagnosis(p, f) {
                off.push(format!("{}: {}", c.mor_label(f), d));
            }
        }
    }
    let verdict = if off.is_empty() {
        Verdict::holds(M)
    } else {
        let mut v = Verdict::fails(M, off[0].clone());
        v.witness = off.iter().take(16).cloned().collect();
        v
    };
    PatternReport { verdict, offenders: off }
}

/// `None` if the factorization groupoid of `f` is as required.
pub fn factorization_diagnosis(p: &AlgebraicPattern, f: usize) -> Option<String> {
    let c = &p.base;
    let facts = p.factorizations(f);
    if facts.is_empty() {
        return Some("no inert-active factorization".into());
    }
    let expected = c.two_cell_automorphisms(f) as usize;
    for (pi, &(i1, a1)) in facts.iter().enumerate() {
        for (qi, &(i2, a2)) in facts.iter().enumerate() {
            let (z1, z2) = (c.tgt(i1), c.tgt(i2));
            let comparisons: Vec<usize> = c
                .hom(z1, z2)
                .iter()
                .map(|&u| u as usize)
                .filter(|&u| c.comp(u, i1) == Some(i2) && c.comp(a2, u) == Some(a1))
                .collect();
            if comparisons.is_empty() {
                return Some(format!(
                    "factorizations ({}, {}) and ({}, {}) are not connected",
                    c.mor_label(i1),
                    c.mor_label(a1),
                    c.mor_label(i2),
                    c.mor_label(a2)
                ));
            }
            if let Some(&u) = comparisons.iter().find(|&&u| !c.is_iso(u)) {
                return Some(format!("comparison {} between factorizations is not invertible", c.mor_label(u)));
            }
            if pi == qi && comparisons.len() != expected {
                return Some(format!(
                    "factorization ({}, {}) has {} automorphisms, expected {}",
                    c.mor_label(i1),
                    c.mor_label(a1),
                    comparisons.len(),
                    expected
                ));
            }
        }
    }
    None
}

/// A functor between pattern bases preserving inert and active morphisms
/// and elementary objects.
#[derive(Clone, Debug)]
pub struct PatternMorphism {
    pub functor: Functor,
    pub source: Arc<AlgebraicPattern>,
    pub target: Arc<AlgebraicPattern>,
}

impl PatternMorphism {
    pub fn new(functor: Functor, source: Arc<AlgebraicPattern>, target: Arc<AlgebraicPattern>) -> Result<Self, CatError> {
        let pm = PatternMorphism { functor, source, target };
        pm.validate()?;
        Ok(pm)
    }

    pub fn validate(&self) -> Result<(), CatError> {
        self.functor.validate()?;
        let (s, t, f) = (&self.source, &self.target, &self.functor);
        for m in s.base.morphisms() {
            if s.inert[m] && !t.inert[f.mor(m)] {
                return Err(CatError::Structure(format!("inert {} not sent to an inert map", s.base.mor_label(m))));
            }
            if s.active[m] && !t.active[f.mor(m)] {
                return Err(CatError::Structure(format!("active {} not sent to an active map", s.base.mor_label(m))));
            }
        }
        for o in s.base.objects() {
            if s.elementary[o] && !t.elementary[f.obj(o)] {
                return Err(CatError::Structure(format!("elementary {} not sent to an elementary", s.base.obj_label(o))));
            }
        }
        Ok(())
    }

    /// `f^el_{X/}: 𝒪^el_{X/} -> 𝒫^el_{f(X)/}`.
    pub fn el_slice_functor(&self, x: usize) -> Functor {
        let (s, t, f) = (&self.source, &self.target, &self.functor);
        let src = s.elementary_slice(x);
        let tgt = t.elementary_slice(f.obj(x));
        let obj: Vec<usize> = src
            .arrows
            .iter()
            .map(|&a| tgt.object_of_arrow(f.mor(a)).expect("elementary arrows are preserved"))
            .collect();
        let mor: Vec<usize> = src
            .cat
            .morphisms()
            .map(|m| {
                let (a, b) = (obj[src.cat.src(m)], obj[src.cat.tgt(m)]);
                let u = f.mor(src.conn[m]);
                tgt.cat
                    .hom(a, b)
                    .iter()
                    .map(|&k| k as usize)
                    .find(|&k| tgt.conn[k] == u)
                    .expect("connecting maps are preserved")
            })
            .collect();
        Functor::new_unchecked(src.cat.clone(), tgt.cat.clone(), obj, mor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{CatBuilder, FinCat};

    /// Objects X, Y, E; inert X -> E; active X -> Y.
    pub(crate) fn synthetic() -> AlgebraicPattern {
        let mut b = CatBuilder::new("synthetic");
        let (x, _) = b.add_object_with_identity("X");
        let (y, _) = b.add_object_with_identity("Y");
        let (e, _) = b.add_object_with_identity("E");
        b.add_morphism("i", x, e);
        b.add_morphism("w", x, y);
        let base: FinCat = b.build_with(|_, _| None).unwrap();
        let inert = vec![true, true, true, true, false];
        let active = vec![true, true, true, false, true];
        AlgebraicPattern::new("synthetic", Arc::new(base), inert, active, vec![false, false, true], None)
    }

    #[test]
    fn synthetic_validates() {
        let p = synthetic();
        assert!(validate_pattern(&p).verdict.is_holds());
        assert_eq!(p.factor(3), Some((3, 2)));
        assert_eq!(p.factor(4), Some((0, 4)));
    }

    #[test]
    fn active_not_closed_is_named() {
        // walking composable pair with both maps active but composite not
        let mut b = CatBuilder::new("pair");
        let (x, _) = b.add_object_with_identity("x");
        let (y, _) = b.add_object_with_identity("y");
        let (z, _) = b.add_object_with_identity("z");
        let f = b.add_morphism("f", x, y);
        let g = b.add_morphism("g", y, z);
        let h = b.add_morphism("h", x, z);
        let base = b.build_with(|p, q| (p == g && q == f).then_some(h)).unwrap();
        let inert = vec![true, true, true, false, false, true];
        let active = vec![true, true, true, true, true, false];
        let p = AlgebraicPattern::new("pair", Arc::new(base), inert, active, vec![false; 3], None);
        let r = validate_pattern(&p);
        assert!(r.verdict.is_fails());
        assert!(r.offenders[0].contains("active morphisms not closed under composition: g o f = h"));
    }
}
