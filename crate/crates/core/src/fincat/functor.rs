//! Functors between finite categories.

use std::sync::Arc;

use super::cat::{CatError, FinCat};
use crate::verdict::Verdict;

#[derive(Clone, Debug)]
pub struct Functor {
    pub source: Arc<FinCat>,
    pub target: Arc<FinCat>,
    obj: Vec<u32>,
    mor: Vec<u32>,
}

impl Functor {
    /// Checked constructor: endpoints, identities and defined composites.
    pub fn new(source: Arc<FinCat>, target: Arc<FinCat>, obj: Vec<usize>, mor: Vec<usize>) -> Result<Self, CatError> {
        let f = Self::new_unchecked(source, target, obj, mor);
        f.validate()?;
        Ok(f)
    }

    pub fn new_unchecked(source: Arc<FinCat>, target: Arc<FinCat>, obj: Vec<usize>, mor: Vec<usize>) -> Self {
        Functor {
            source,
            target,
            obj: obj.into_iter().map(|x| x as u32).collect(),
            mor: mor.into_iter().map(|x| x as u32).collect(),
        }
    }

    pub fn identity(c: Arc<FinCat>) -> Self {
        let obj = c.objects().collect();
        let mor = c.morphisms().collect();
        Functor::new_unchecked(c.clone(), c, obj, mor)
    }

    /// Constant functor at object `x` of `target`.
    pub fn constant(source: Arc<FinCat>, target: Arc<FinCat>, x: usize) -> Self {
        let obj = vec![x; source.n_obj()];
        let mor = vec![target.id(x); source.n_mor()];
        Functor::new_unchecked(source, target, obj, mor)
    }

    #[inline]
    pub fn obj(&self, o: usize) -> usize {
        self.obj[o] as usize
    }

    #[inline]
    pub fn mor(&self, m: usize) -> usize {
        self.mor[m] as usize
    }

    pub fn obj_map(&self) -> Vec<usize> {
        self.obj.iter().map(|&x| x as usize).collect()
    }

    pub fn mor_map(&self) -> Vec<usize> {
        self.mor.iter().map(|&x| x as usize).collect()
    }

    pub fn validate(&self) -> Result<(), CatError> {
        let (s, t) = (&self.source, &self.target);
        if self.obj.len() != s.n_obj() || self.mor.len() != s.n_mor() {
            return Err(CatError::Structure("functor map lengths do not match source".into()));
        }
        for &o in &self.obj {
            if o as usize >= t.n_obj() {
                return Err(CatError::BadObject(o as usize));
            }
        }
        for m in s.morphisms() {
            let fm = self.mor(m);
            if fm >= t.n_mor() {
                return Err(CatError::BadMorphism(fm));
            }
            if t.src(fm) != self.obj(s.src(m)) || t.tgt(fm) != self.obj(s.tgt(m)) {
                return Err(CatError::Structure(format!("functor breaks endpoints at {}", s.mor_label(m))));
            }
        }
        for o in s.objects() {
            if self.mor(s.id(o)) != t.id(self.obj(o)) {
                return Err(CatError::Structure(format!("functor breaks identity at {}", s.obj_label(o))));
            }
        }
        for f in s.morphisms() {
            for &g in s.out_of(s.tgt(f)) {
                let g = g as usize;
                if let Some(gf) = s.comp(g, f) {
                    if t.comp(self.mor(g), self.mor(f)) != Some(self.mor(gf)) {
                        return Err(CatError::Structure(format!(
                            "functor breaks composite {} o {}",
                            s.mor_label(g),
                            s.mor_label(f)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Functor) -> Functor {
        assert!(Arc::ptr_eq(&first.target, &self.source) || first.target.n_mor() == self.source.n_mor());
        let obj = first.obj.iter().map(|&o| self.obj[o as usize] as usize).collect();
        let mor = first.mor.iter().map(|&m| self.mor[m as usize] as usize).collect();
        Functor::new_unchecked(first.source.clone(), self.target.clone(), obj, mor)
    }

    pub fn opposite(&self, src_op: Arc<FinCat>, tgt_op: Arc<FinCat>) -> Functor {
        Functor::new_unchecked(src_op, tgt_op, self.obj_map(), self.mor_map())
    }

    /// First pair of objects where the hom-map is not injective, if any.
    pub fn faithfulness_witness(&self) -> Option<String> {
        let s = &self.source;
        for a in s.objects() {
            for b in s.objects() {
                let mut seen: Vec<usize> = s.hom(a, b).iter().map(|&m| self.mor(m as usize)).collect();
                seen.sort_unstable();
                if seen.windows(2).any(|w| w[0] == w[1]) {
                    return Some(format!("not faithful on Hom({}, {})", s.obj_label(a), s.obj_label(b)));
                }
            }
        }
        None
    }

    pub fn fullness_witness(&self) -> Option<String> {
        let (s, t) = (&self.source, &self.target);
        for a in s.objects() {
            for b in s.objects() {
                let mut image: Vec<usize> = s.hom(a, b).iter().map(|&m| self.mor(m as usize)).collect();
                image.sort_unstable();
                image.dedup();
                let full = t.hom(self.obj(a), self.obj(b)).len();
                if image.len() != full {
                    return Some(format!(
                        "not full on Hom({}, {}): {} of {} hit",
                        s.obj_label(a),
                        s.obj_label(b),
                        image.len(),
                        full
                    ));
                }
            }
        }
        None
    }

    pub fn essential_surjectivity_witness(&self) -> Option<String> {
        let t = &self.target;
        let mut hit = vec![false; t.n_obj()];
        for &o in &self.obj {
            hit[o as usize] = true;
        }
        let (_, rep, _) = t.iso_classes();
        let mut class_hit = vec![false; t.n_obj()];
        for y in t.objects() {
            if hit[y] {
                class_hit[rep[y]] = true;
            }
        }
        t.objects().find(|&y| !class_hit[rep[y]]).map(|y| format!("object {} not in essential image", t.obj_label(y)))
    }

    pub fn is_fully_faithful(&self) -> bool {
        self.faithfulness_witness().is_none() && self.fullness_witness().is_none()
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_fully_faithful() && self.essential_surjectivity_witness().is_none()
    }
}

/// Decides whether a given functor is an equivalence of categories.
pub fn functor_is_equivalence(f: &Functor) -> Verdict {
    const METHOD: &str = "fully faithful + essentially surjective";
    if let Some(w) = f.faithfulness_witness() {
        return Verdict::fails(METHOD, w);
    }
    if let Some(w) = f.fullness_witness() {
        return Verdict::fails(METHOD, w);
    }
    if let Some(w) = f.essential_surjectivity_witness() {
        return Verdict::fails(METHOD, w);
    }
    Verdict::holds(METHOD)
}

/// Natural transformation as components indexed by source objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTrans {
    pub components: Vec<usize>,
}

impl NatTrans {
    pub fn is_natural(&self, f: &Functor, g: &Functor) -> bool {
        let (s, t) = (&f.source, &f.target);
        s.morphisms().all(|m| {
            let (a, b) = (s.src(m), s.tgt(m));
            let left = t.comp(g.mor(m), self.components[a]);
            let right = t.comp(self.components[b], f.mor(m));
            left.is_some() && left == right
        })
    }

    pub fn is_iso(&self, t: &FinCat) -> bool {
        self.components.iter().all(|&c| t.is_iso(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::cat::*;

    #[test]
    fn inclusion_of_terminal_into_iso_is_equivalence() {
        let pt = Arc::new(terminal_cat());
        let iso = Arc::new(walking_iso());
        let f = Functor::new(pt, iso.clone(), vec![0], vec![iso.id(0)]).unwrap();
        assert!(functor_is_equivalence(&f).is_holds());
    }

    #[test]
    fn inclusion_into_arrow_is_not() {
        let pt = Arc::new(terminal_cat());
        let ar = Arc::new(walking_arrow());
        let f = Functor::new(pt, ar.clone(), vec![0], vec![ar.id(0)]).unwrap();
        let v = functor_is_equivalence(&f);
        assert!(v.is_fails());
        assert!(v.witness[0].contains("essential image"));
    }

    #[test]
    fn broken_functor_rejected() {
        let ar = Arc::new(walking_arrow());
        let pt = Arc::new(terminal_cat());
        // sends the identity of 0 to a non-identity
        let bad = Functor::new(ar.clone(), ar.clone(), vec![0, 1], vec![1, 1, 2]);
        assert!(bad.is_err());
        let c = Functor::constant(ar, pt, 0);
        c.validate().unwrap();
    }
}
