//! Cocartesian fibrations given by a functor and a designated set of
//! cocartesian edges, with fibers and transport functors.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::fibrous::is_cocartesian;
use crate::fincat::{CatError, FinCat, Functor};
use crate::verdict::Verdict;

#[derive(Debug)]
pub struct Fiber {
    pub at: usize,
    pub cat: Arc<FinCat>,
    /// total object per local object
    pub objects: Vec<usize>,
    /// total morphism per local morphism
    pub morphisms: Vec<usize>,
    obj_local: HashMap<usize, usize>,
    mor_local: HashMap<usize, usize>,
}

impl Fiber {
    pub fn local_obj(&self, x: usize) -> Option<usize> {
        self.obj_local.get(&x).copied()
    }

    pub fn local_mor(&self, m: usize) -> Option<usize> {
        self.mor_local.get(&m).copied()
    }
}

pub struct CocartesianFibration {
    pub proj: Functor,
    pub designated: Vec<bool>,
    /// first designated edge out of `x` over `β`
    lifts: HashMap<(usize, usize), usize>,
    fibers: Vec<OnceLock<Fiber>>,
}

impl CocartesianFibration {
    pub fn new(proj: Functor, designated: Vec<bool>) -> Self {
        let total = &proj.source;
        let mut lifts = HashMap::new();
        for m in total.morphisms() {
            if designated[m] {
                lifts.entry((total.src(m), proj.mor(m))).or_insert(m);
            }
        }
        let fibers = (0..proj.target.n_obj()).map(|_| OnceLock::new()).collect();
        CocartesianFibration { proj, designated, lifts, fibers }
    }

    /// The same functor with a different edge set.
    pub fn with_designated(&self, designated: Vec<bool>) -> Self {
        CocartesianFibration::new(self.proj.clone(), designated)
    }

    pub fn total(&self) -> &Arc<FinCat> {
        &self.proj.source
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.proj.target
    }

    pub fn lift(&self, x: usize, beta: usize) -> Option<usize> {
        self.lifts.get(&(x, beta)).copied()
    }

    /// The unique `u` with `u ∘ l = g` and `πu = h`.
    pub fn factor_through(&self, l: usize, g: usize, h: usize) -> Option<usize> {
        let t = self.total();
        let mut hits = t
            .hom(t.tgt(l), t.tgt(g))
            .iter()
            .map(|&u| u as usize)
            .filter(|&u| self.proj.mor(u) == h && t.comp(u, l) == Some(g));
        let u = hits.next()?;
        hits.next().is_none().then_some(u)
    }

    pub fn fiber(&self, b: usize) -> &Fiber {
        self.fibers[b].get_or_init(|| {
            let t = self.total();
            let base = self.base();
            let keep_obj: Vec<bool> = t.objects().map(|x| self.proj.obj(x) == b).collect();
            let id = base.id(b);
            let keep_mor: Vec<bool> = t.morphisms().map(|m| keep_obj[t.src(m)] && self.proj.mor(m) == id).collect();
            let (cat, objects, morphisms) = t
                .subcategory(&keep_obj, &keep_mor, format!("{}_{}", t.name(), base.obj_label(b)))
                .expect("fibers are subcategories");
            let obj_local = objects.iter().enumerate().map(|(i, &x)| (x, i)).collect();
            let mor_local = morphisms.iter().enumerate().map(|(i, &m)| (m, i)).collect();
            Fiber { at: b, cat: Arc::new(cat), objects, morphisms, obj_local, mor_local }
        })
    }

    /// `β_!` between fibers, from the designated lifts.
    pub fn transport(&self, beta: usize) -> Result<Functor, CatError> {
        let (t, base) = (self.total(), self.base());
        let (a, b) = (base.src(beta), base.tgt(beta));
        let (fa, fb) = (self.fiber(a), self.fiber(b));
        let missing = |x: usize| CatError::Structure(format!("no designated lift of {} at {}", base.mor_label(beta), t.obj_label(x)));
        let lifts = fa.objects.iter().map(|&x| self.lift(x, beta).ok_or_else(|| missing(x))).collect::<Result<Vec<_>, _>>()?;
        let obj: Vec<usize> = lifts.iter().map(|&l| fb.local_obj(t.tgt(l)).expect("lift lands in the fiber")).collect();
        let id = base.id(b);
        let mut mor = Vec::with_capacity(fa.morphisms.len());
        for (i, &m) in fa.morphisms.iter().enumerate() {
            let (s, d) = (fa.cat.src(i), fa.cat.tgt(i));
            let g = t.comp(lifts[d], m).ok_or_else(|| CatError::Structure("composite outside the model".into()))?;
            let u = self
                .factor_through(lifts[s], g, id)
                .ok_or_else(|| CatError::Structure(format!("no unique transport of {} along {}", t.mor_label(m), base.mor_label(beta))))?;
            mor.push(fb.local_mor(u).expect("factorization lies over the identity"));
        }
        Ok(Functor::new_unchecked(fa.cat.clone(), fb.cat.clone(), obj, mor))
    }

    /// `f` restricted to the fibers over `b`; `f` must commute with the
    /// projections.
    pub fn restrict_to_fibers(&self, other: &CocartesianFibration, f: &Functor, b: usize) -> Functor {
        let (fa, fb) = (self.fiber(b), other.fiber(b));
        let obj = fa.objects.iter().map(|&x| fb.local_obj(f.obj(x)).expect("map lies over the base")).collect();
        let mor = fa.morphisms.iter().map(|&m| fb.local_mor(f.mor(m)).expect("map lies over the base")).collect();
        Functor::new_unchecked(fa.cat.clone(), fb.cat.clone(), obj, mor)
    }
}

/// Every morphism of the base has a designated lift at every object over
/// its source; designated edges are cocartesian and closed under
/// composition.
///
/// In a truncated model a missing lift, or a cocartesian count that runs
/// into an undefined composite, is not evidence either way. Neither is a
/// count over a base with nontrivial 2-cells, where hom sets are only
/// components of mapping spaces. Such violations alone give Unknown.
pub fn verify_cocartesian_fibration(fib: &CocartesianFibration) -> Verdict {
    const M: &str = "designated edges cover, are cocartesian and compose";
    let (t, base) = (fib.total(), fib.base());
    let mut definite = Vec::new();
    let mut artifacts = Vec::new();
    for x in t.objects() {
        for &beta in base.out_of(fib.proj.obj(x)) {
            if fib.lift(x, beta as usize).is_none() {
                let w = format!("no designated lift of {} at {}", base.mor_label(beta as usize), t.obj_label(x));
                if base.is_partial() { artifacts.push(w) } else { definite.push(w) }
            }
        }
    }
    for e in t.morphisms().filter(|&e| fib.designated[e]) {
        if let Err(w) = is_cocartesian(&fib.proj, e) {
            let w = format!("{} is not cocartesian: {w}", t.mor_label(e));
            if base.has_two_cells() || meets_truncation(&fib.proj, e) { artifacts.push(w) } else { definite.push(w) }
        }
    }
    for e in t.morphisms().filter(|&e| fib.designated[e]) {
        for &e2 in t.out_of(t.tgt(e)) {
            let e2 = e2 as usize;
            if !fib.designated[e2] {
                continue;
            }
            if let Some(c) = t.comp(e2, e) {
                if !fib.designated[c] {
                    definite.push(format!("{} o {} is not designated", t.mor_label(e2), t.mor_label(e)));
                }
            }
        }
    }
    let n = definite.len() + artifacts.len();
    if definite.is_empty() {
        if artifacts.is_empty() {
            return Verdict::holds(M);
        }
        let mut v = Verdict::unknown(M, format!("{n} violations, each outside what the truncated model decides"));
        for w in artifacts.into_iter().take(8) {
            v = v.with_note(w);
        }
        return v;
    }
    let mut v = Verdict::fails(M, definite.remove(0));
    for w in definite.into_iter().take(7) {
        v = v.with_witness(w);
    }
    if n > 8 {
        v = v.with_note(format!("{n} violations in total"));
    }
    v
}

/// Whether the cocartesian count for `f` needs a composite the model
/// leaves undefined.
fn meets_truncation(proj: &Functor, f: usize) -> bool {
    let (p, o) = (&proj.source, &proj.target);
    let b = proj.obj(p.tgt(f));
    let pf = proj.mor(f);
    let up = p.objects().any(|r| p.hom(p.tgt(f), r).iter().any(|&u| p.comp(u as usize, f).is_none()));
    let down = o.objects().any(|r| o.hom(b, r).iter().any(|&h| o.comp(h as usize, pf).is_none()));
    up || down
}
