//! Fibers `𝒫 ×_𝒪 𝒪^act_{/X}` of the envelope of a candidate fibration, and
//! their transport along morphisms of the base.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use super::FibrousCandidate;
use crate::fincat::{CatBuilder, CatError, FinCat, Functor, PseudoFunctor};

/// `Env_π(X)`: objects `(p, φ: πp ⇝ X)` with `φ` active, morphisms
/// `(u, πu)` with `πu` active over `X`.
#[derive(Debug)]
pub struct EnvFiber {
    pub at: usize,
    pub cat: Arc<FinCat>,
    /// `(p, φ)` per object
    pub objects: Vec<(usize, usize)>,
    /// underlying morphism `u` of `𝒫` per morphism
    pub morphisms: Vec<usize>,
    obj_lookup: HashMap<(usize, usize), usize>,
    mor_lookup: HashMap<(usize, usize, usize), usize>,
}

impl EnvFiber {
    fn build(cand: &FibrousCandidate, x: usize) -> EnvFiber {
        let (p, o, pi) = (&cand.proj.source, &cand.base.base, &cand.proj);
        let mut b = CatBuilder::new(format!("Env({})", o.obj_label(x)));
        let mut objects = Vec::new();
        let mut obj_lookup = HashMap::new();
        let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); p.n_obj()];
        for q in p.objects() {
            for &phi in o.hom(pi.obj(q), x) {
                let phi = phi as usize;
                if !cand.base.active[phi] {
                    continue;
                }
                let k = b.add_object(format!("({}, {})", p.obj_label(q), o.mor_label(phi)));
                obj_lookup.insert((q, phi), k);
                by_source[q].push(k);
                objects.push((q, phi));
            }
        }
        let mut morphisms = Vec::new();
        let mut mor_lookup = HashMap::new();
        for (k, &(q, phi)) in objects.iter().enumerate() {
            for &u in p.out_of(q) {
                let u = u as usize;
                let f = pi.mor(u);
                if !cand.base.active[f] {
                    continue;
                }
                for &k2 in &by_source[p.tgt(u)] {
                    if o.comp(objects[k2].1, f) != Some(phi) {
                        continue;
                    }
                    let m = b.add_morphism(p.mor_label(u), k, k2);
                    if k == k2 && p.is_identity(u) {
                        b.set_identity(k, m);
                    }
                    mor_lookup.insert((k, k2, u), m);
                    morphisms.push(u);
                }
            }
        }
        let ends: Vec<(usize, usize)> = (0..b.n_mor()).map(|m| (b.morphism_src(m), b.morphism_tgt(m))).collect();
        let cat = b
            .build_with(|g, f| mor_lookup.get(&(ends[f].0, ends[g].1, p.comp(morphisms[g], morphisms[f])?)).copied())
            .expect("envelope fibers are closed under composition");
        EnvFiber { at: x, cat: Arc::new(cat), objects, morphisms, obj_lookup, mor_lookup }
    }

    pub fn find_object(&self, q: usize, phi: usize) -> Option<usize> {
        self.obj_lookup.get(&(q, phi)).copied()
    }

    pub fn find_morphism(&self, src: usize, tgt: usize, u: usize) -> Option<usize> {
        self.mor_lookup.get(&(src, tgt, u)).copied()
    }
}

/// Full subcategory of a fiber, with the translation to and from the
/// fiber's own numbering.
#[derive(Debug)]
pub struct KeptFiber {
    pub cat: Arc<FinCat>,
    /// fiber object per local object
    pub objects: Vec<usize>,
    /// fiber morphism per local morphism
    pub morphisms: Vec<usize>,
    obj_local: HashMap<usize, usize>,
    mor_local: HashMap<usize, usize>,
}

impl KeptFiber {
    pub fn new(fiber: &EnvFiber, keep: &[bool]) -> Self {
        let objects: Vec<usize> = (0..keep.len()).filter(|&k| keep[k]).collect();
        let (cat, morphisms) = fiber.cat.full_subcategory(&objects, fiber.cat.name().to_string());
        let obj_local = objects.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let mor_local = morphisms.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        KeptFiber { cat: Arc::new(cat), objects, morphisms, obj_local, mor_local }
    }

    pub fn local_obj(&self, k: usize) -> Option<usize> {
        self.obj_local.get(&k).copied()
    }

    pub fn local_mor(&self, m: usize) -> Option<usize> {
        self.mor_local.get(&m).copied()
    }
}

/// All fibers of one candidate, built on demand.
pub struct EnvelopeFibers<'a> {
    pub cand: &'a FibrousCandidate,
    fibers: Vec<OnceLock<EnvFiber>>,
}

/// Object `φ_!(k)` of a transport together with the data it was built from.
struct Pushed {
    obj: usize,
    inert: usize,
    lift: usize,
}

impl<'a> EnvelopeFibers<'a> {
    pub fn new(cand: &'a FibrousCandidate) -> Self {
        let n = cand.base.base.n_obj();
        EnvelopeFibers { cand, fibers: (0..n).map(|_| OnceLock::new()).collect() }
    }

    pub fn fiber(&self, x: usize) -> &EnvFiber {
        self.fibers[x].get_or_init(|| EnvFiber::build(self.cand, x))
    }

    fn push(&self, omega: usize, k: usize) -> Option<Pushed> {
        let base = &self.cand.base;
        let o = &base.base;
        let (q, phi) = self.fiber(o.src(omega)).objects[k];
        let (inert, beta) = base.factor_composite(omega, phi)?;
        let lift = self.cand.lift(q, inert)?;
        let obj = self.fiber(o.tgt(omega)).find_object(self.cand.proj.source.tgt(lift), beta)?;
        Some(Pushed { obj, inert, lift })
    }

    /// `ω_!(k)`: lift the inert part of `ω ∘ φ`, keep the active part.
    pub fn transport_obj(&self, omega: usize, k: usize) -> Option<usize> {
        self.push(omega, k).map(|p| p.obj)
    }

    /// `ω_!(m)`: the active filler between the inert parts, lifted through
    /// the cocartesian morphisms.
    pub fn transport_mor(&self, omega: usize, m: usize) -> Option<usize> {
        let o = &self.cand.base.base;
        let src = self.fiber(o.src(omega));
        let (k1, k2) = (src.cat.src(m), src.cat.tgt(m));
        let (s, t) = (self.push(omega, k1)?, self.push(omega, k2)?);
        let tgt = self.fiber(o.tgt(omega));
        let u = src.morphisms[m];
        let f = self.cand.proj.mor(u);
        let (beta1, beta2) = (tgt.objects[s.obj].1, tgt.objects[t.obj].1);
        let want = o.comp(t.inert, f)?;
        let filler = self.unique_active(o.tgt(s.inert), o.tgt(t.inert), |v| {
            o.comp(v, s.inert) == Some(want) && o.comp(beta2, v) == Some(beta1)
        })?;
        let g = self.cand.proj.source.comp(t.lift, u)?;
        let w = self.cand.factor_through(s.lift, g, filler)?;
        tgt.find_morphism(s.obj, t.obj, w)
    }

    /// `γ_{ψ,ω}(k): ψ_!ω_!(k) -> (ψω)_!(k)`.
    pub fn compositor(&self, psi: usize, omega: usize, k: usize) -> Option<usize> {
        let o = &self.cand.base.base;
        let p = &self.cand.proj.source;
        let first = self.push(omega, k)?;
        let second = self.push(psi, first.obj)?;
        let direct = self.push(o.comp(psi, omega)?, k)?;
        let z = self.fiber(o.tgt(psi));
        let (beta2, beta3) = (z.objects[second.obj].1, z.objects[direct.obj].1);
        let inert21 = o.comp(second.inert, first.inert)?;
        let f = self.unique_active(o.src(beta2), o.src(beta3), |v| {
            o.comp(v, inert21) == Some(direct.inert) && o.comp(beta3, v) == Some(beta2)
        })?;
        let u = self.cand.factor_through(p.comp(second.lift, first.lift)?, direct.lift, f)?;
        z.find_morphism(second.obj, direct.obj, u)
    }

    /// `η_X(k): k -> (id_X)_!(k)`.
    pub fn unitor(&self, x: usize, k: usize) -> Option<usize> {
        let o = &self.cand.base.base;
        let pushed = self.push(o.id(x), k)?;
        self.fiber(x).find_morphism(k, pushed.obj, pushed.lift)
    }

    fn unique_active(&self, a: usize, b: usize, keep: impl Fn(usize) -> bool) -> Option<usize> {
        let base = &self.cand.base;
        let mut hits = base.base.hom(a, b).iter().map(|&v| v as usize).filter(|&v| base.active[v] && keep(v));
        let v = hits.next()?;
        hits.next().is_none().then_some(v)
    }

    pub fn transport(&self, omega: usize) -> Result<Functor, CatError> {
        let o = &self.cand.base.base;
        let (src, tgt) = (self.fiber(o.src(omega)), self.fiber(o.tgt(omega)));
        let err = || CatError::Structure(format!("transport along {} leaves the model", o.mor_label(omega)));
        let obj = src.cat.objects().map(|k| self.transport_obj(omega, k).ok_or_else(err)).collect::<Result<_, _>>()?;
        let mor = src.cat.morphisms().map(|m| self.transport_mor(omega, m).ok_or_else(err)).collect::<Result<_, _>>()?;
        Ok(Functor::new_unchecked(src.cat.clone(), tgt.cat.clone(), obj, mor))
    }

    /// The fibers as a pseudofunctor on `index`, via `obj_of`/`mor_of` into
    /// the base.
    pub fn pseudofunctor_over(&self, index: &Arc<FinCat>, obj_of: &[usize], mor_of: &[usize]) -> Result<PseudoFunctor, CatError> {
        let keep: Vec<Vec<bool>> = obj_of.iter().map(|&x| vec![true; self.fiber(x).objects.len()]).collect();
        Ok(self.pseudofunctor_kept(index, obj_of, mor_of, &keep)?.0)
    }

    /// Largest families of fiber objects over `index` closed under the
    /// transports along `mor_of`; objects whose transports leave the model
    /// are dropped.
    pub fn closed_families(&self, index: &FinCat, obj_of: &[usize], mor_of: &[usize]) -> Vec<Vec<bool>> {
        let mut keep: Vec<Vec<bool>> = obj_of.iter().map(|&x| vec![true; self.fiber(x).objects.len()]).collect();
        loop {
            let mut changed = false;
            for a in index.objects() {
                for k in 0..keep[a].len() {
                    if !keep[a][k] {
                        continue;
                    }
                    let ok = index.out_of(a).iter().all(|&u| {
                        let u = u as usize;
                        self.transport_obj(mor_of[u], k).is_some_and(|k2| keep[index.tgt(u)][k2])
                    });
                    if !ok {
                        keep[a][k] = false;
                        changed = true;
                    }
                }
            }
            if !changed {
                return keep;
            }
        }
    }

    /// As [`Self::pseudofunctor_over`] on the full subcategories picked by
    /// `keep`, which must be closed under the transports.
    pub fn pseudofunctor_kept(
        &self,
        index: &Arc<FinCat>,
        obj_of: &[usize],
        mor_of: &[usize],
        keep: &[Vec<bool>],
    ) -> Result<(PseudoFunctor, Vec<KeptFiber>), CatError> {
        let kept: Vec<KeptFiber> = index.objects().map(|i| KeptFiber::new(self.fiber(obj_of[i]), &keep[i])).collect();
        let values: Vec<Arc<FinCat>> = kept.iter().map(|k| k.cat.clone()).collect();
        let err = |s: String| CatError::Structure(s);
        let mut transports = Vec::new();
        for u in index.morphisms() {
            let (a, b) = (&kept[index.src(u)], &kept[index.tgt(u)]);
            let leaves = || err(format!("transport along {} leaves the model", self.cand.base.base.mor_label(mor_of[u])));
            let obj = a
                .objects
                .iter()
                .map(|&k| self.transport_obj(mor_of[u], k).and_then(|t| b.local_obj(t)).ok_or_else(leaves))
                .collect::<Result<Vec<_>, _>>()?;
            let mor = a
                .morphisms
                .iter()
                .map(|&m| self.transport_mor(mor_of[u], m).and_then(|t| b.local_mor(t)).ok_or_else(leaves))
                .collect::<Result<Vec<_>, _>>()?;
            transports.push(Functor::new_unchecked(a.cat.clone(), b.cat.clone(), obj, mor));
        }
        let mut compositors = HashMap::new();
        for f in index.morphisms() {
            for &g in index.out_of(index.tgt(f)) {
                let g = g as usize;
                if index.comp(g, f).is_none() {
                    continue;
                }
                let tgt = &kept[index.tgt(g)];
                let comps = kept[index.src(f)]
                    .objects
                    .iter()
                    .map(|&k| {
                        self.compositor(mor_of[g], mor_of[f], k).and_then(|c| tgt.local_mor(c)).map(|c| c as u32).ok_or_else(|| {
                            err(format!("no compositor at {} o {}", index.mor_label(g), index.mor_label(f)))
                        })
                    })
                    .collect::<Result<Vec<u32>, _>>()?;
                compositors.insert((g as u32, f as u32), comps);
            }
        }
        let unitors = index
            .objects()
            .map(|i| {
                kept[i]
                    .objects
                    .iter()
                    .map(|&k| {
                        self.unitor(obj_of[i], k).and_then(|u| kept[i].local_mor(u)).map(|u| u as u32).ok_or_else(|| err("no unitor".into()))
                    })
                    .collect::<Result<Vec<u32>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let pf = PseudoFunctor::new(index.clone(), values, transports, compositors, unitors);
        pf.validate()?;
        Ok((pf, kept))
    }

    /// The whole envelope over the base.
    pub fn pseudofunctor(&self) -> Result<PseudoFunctor, CatError> {
        let o = &self.cand.base.base;
        let obj: Vec<usize> = o.objects().collect();
        let mor: Vec<usize> = o.morphisms().collect();
        self.pseudofunctor_over(o, &obj, &mor)
    }

    /// `Env_π(X) -> 𝒪^act_{/X}` as a functor into the fiber of `other`, which
    /// must be the identity candidate on the same base.
    pub fn project(&self, other: &EnvelopeFibers, x: usize) -> Functor {
        self.project_along(other, &self.cand.proj, x)
    }

    /// `Env_π(X) -> Env_ρ(X)` induced by `map: 𝒫 -> 𝒬` over the base.
    pub fn project_along(&self, other: &EnvelopeFibers, map: &Functor, x: usize) -> Functor {
        let (src, tgt) = (self.fiber(x), other.fiber(x));
        let obj: Vec<usize> = src
            .objects
            .iter()
            .map(|&(q, phi)| tgt.find_object(map.obj(q), phi).expect("map lies over the base"))
            .collect();
        let mor = src
            .cat
            .morphisms()
            .map(|m| {
                let (a, b) = (obj[src.cat.src(m)], obj[src.cat.tgt(m)]);
                tgt.find_morphism(a, b, map.mor(src.morphisms[m])).expect("map lies over the base")
            })
            .collect();
        Functor::new_unchecked(src.cat.clone(), tgt.cat.clone(), obj, mor)
    }
}
