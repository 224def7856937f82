//! `Ar_R(𝓑)`: right-class arrows of a factorization system and commutative
//! squares between them.

use std::collections::HashMap;
use std::sync::Arc;

use super::fibration::CocartesianFibration;
use crate::fincat::{CatBuilder, CatError, FinCat, Functor};
use crate::pattern::AlgebraicPattern;

pub struct ArrowRightCat {
    pub pattern: Arc<AlgebraicPattern>,
    pub cat: Arc<FinCat>,
    /// base morphism per object
    pub arrows: Vec<usize>,
    /// `(h, k)` per morphism, with `f' ∘ h = k ∘ f`
    pub squares: Vec<(usize, usize)>,
    pub ev0: Functor,
    pub ev1: Functor,
    /// `x ↦ id_x`
    pub include: Functor,
    obj_of: HashMap<usize, usize>,
    mor_of: HashMap<(usize, usize, usize, usize), usize>,
    /// `(source object, h) -> [(morphism, target object)]`
    by_first: HashMap<(usize, usize), Vec<(usize, usize)>>,
}

impl ArrowRightCat {
    pub fn new(pattern: Arc<AlgebraicPattern>) -> Result<Self, CatError> {
        let base = pattern.base.clone();
        let arrows: Vec<usize> = base.morphisms().filter(|&m| pattern.active[m]).collect();
        let mut b = CatBuilder::new(format!("Ar_act({})", base.name()));
        let mut obj_of = HashMap::new();
        for (i, &f) in arrows.iter().enumerate() {
            b.add_object(base.mor_label(f));
            obj_of.insert(f, i);
        }
        let mut by_source: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, &f) in arrows.iter().enumerate() {
            by_source.entry(base.src(f)).or_default().push(i);
        }
        let mut squares = Vec::new();
        let mut mor_of = HashMap::new();
        let mut by_first: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
        for (i, &f) in arrows.iter().enumerate() {
            for &h in base.out_of(base.src(f)) {
                let h = h as usize;
                let Some(targets) = by_source.get(&base.tgt(h)) else { continue };
                for &j in targets {
                    let g = arrows[j];
                    let Some(gh) = base.comp(g, h) else { continue };
                    for &k in base.hom(base.tgt(f), base.tgt(g)) {
                        let k = k as usize;
                        if base.comp(k, f) != Some(gh) {
                            continue;
                        }
                        let m = b.add_morphism(format!("({},{})", base.mor_label(h), base.mor_label(k)), i, j);
                        if i == j && base.is_identity(h) && base.is_identity(k) {
                            b.set_identity(i, m);
                        }
                        mor_of.insert((i, j, h, k), m);
                        by_first.entry((i, h)).or_default().push((m, j));
                        squares.push((h, k));
                    }
                }
            }
        }
        let ends: Vec<(usize, usize)> = (0..b.n_mor()).map(|m| (b.morphism_src(m), b.morphism_tgt(m))).collect();
        let cat = b.build_with(|g, f| {
            let (h2, k2) = squares[g];
            let (h1, k1) = squares[f];
            mor_of.get(&(ends[f].0, ends[g].1, base.comp(h2, h1)?, base.comp(k2, k1)?)).copied()
        })?;
        let cat = Arc::new(cat);
        let ev0 = Functor::new_unchecked(
            cat.clone(),
            base.clone(),
            arrows.iter().map(|&f| base.src(f)).collect(),
            squares.iter().map(|s| s.0).collect(),
        );
        let ev1 = Functor::new_unchecked(
            cat.clone(),
            base.clone(),
            arrows.iter().map(|&f| base.tgt(f)).collect(),
            squares.iter().map(|s| s.1).collect(),
        );
        let mut inc_obj = Vec::new();
        for x in base.objects() {
            let id = base.id(x);
            inc_obj.push(*obj_of.get(&id).ok_or_else(|| CatError::Structure(format!("identity of {} is not active", base.obj_label(x))))?);
        }
        let inc_mor = base
            .morphisms()
            .map(|m| {
                let key = (inc_obj[base.src(m)], inc_obj[base.tgt(m)], m, m);
                mor_of.get(&key).copied().ok_or_else(|| CatError::Structure("identity square missing".into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let include = Functor::new_unchecked(base.clone(), cat.clone(), inc_obj, inc_mor);
        Ok(ArrowRightCat { pattern, cat, arrows, squares, ev0, ev1, include, obj_of, mor_of, by_first })
    }

    pub fn object_of(&self, arrow: usize) -> Option<usize> {
        self.obj_of.get(&arrow).copied()
    }

    pub fn find_square(&self, src: usize, tgt: usize, h: usize, k: usize) -> Option<usize> {
        self.mor_of.get(&(src, tgt, h, k)).copied()
    }

    /// Squares out of `src` whose top edge is `h`, with their targets.
    pub fn squares_from(&self, src: usize, h: usize) -> &[(usize, usize)] {
        self.by_first.get(&(src, h)).map_or(&[], |v| v.as_slice())
    }

    /// `ev₁` as a cocartesian fibration, with the squares whose top edge is
    /// inert designated.
    pub fn target_fibration(&self) -> CocartesianFibration {
        let designated = self.squares.iter().map(|&(h, _)| self.pattern.inert[h]).collect();
        CocartesianFibration::new(self.ev1.clone(), designated)
    }
}
