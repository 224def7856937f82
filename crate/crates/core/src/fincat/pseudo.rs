//! Category-valued pseudofunctors with explicit coherence data, and their
//! pseudo-limits.

use std::collections::HashMap;
use std::sync::Arc;

use super::cat::{CatBuilder, CatError, FinCat};
use super::functor::Functor;

#[derive(Clone, Debug)]
pub struct PseudoFunctor {
    pub index: Arc<FinCat>,
    pub values: Vec<Arc<FinCat>>,
    pub transports: Vec<Functor>,
    /// `γ_{g,f}` components, indexed by objects of the value at `src f`:
    /// `F(g)F(f)x -> F(gf)x`
    compositors: HashMap<(u32, u32), Vec<u32>>,
    /// `η_i` components: `x -> F(id_i)x`
    unitors: Vec<Vec<u32>>,
}

impl PseudoFunctor {
    pub fn new(
        index: Arc<FinCat>,
        values: Vec<Arc<FinCat>>,
        transports: Vec<Functor>,
        compositors: HashMap<(u32, u32), Vec<u32>>,
        unitors: Vec<Vec<u32>>,
    ) -> Self {
        PseudoFunctor { index, values, transports, compositors, unitors }
    }

    /// A strict functor into categories: all coherence cells are identities.
    pub fn from_strict(index: Arc<FinCat>, values: Vec<Arc<FinCat>>, transports: Vec<Functor>) -> Result<Self, CatError> {
        let mut compositors = HashMap::new();
        for f in index.morphisms() {
            for &g in index.out_of(index.tgt(f)) {
                let g = g as usize;
                let Some(gf) = index.comp(g, f) else { continue };
                let (tf, tg, tgf) = (&transports[f], &transports[g], &transports[gf]);
                let v = &values[index.tgt(g)];
                let mut comps = Vec::new();
                for x in values[index.src(f)].objects() {
                    let lhs = tg.obj(tf.obj(x));
                    if lhs != tgf.obj(x) {
                        return Err(CatError::Structure(format!(
                            "strict diagram does not compose at {} o {}",
                            index.mor_label(g),
                            index.mor_label(f)
                        )));
                    }
                    comps.push(v.id(lhs) as u32);
                }
                compositors.insert((g as u32, f as u32), comps);
            }
        }
        let unitors = index
            .objects()
            .map(|i| values[i].objects().map(|x| values[i].id(x) as u32).collect())
            .collect();
        let p = PseudoFunctor { index, values, transports, compositors, unitors };
        p.validate()?;
        Ok(p)
    }

    pub fn compositor(&self, g: usize, f: usize, x: usize) -> Option<usize> {
        self.compositors.get(&(g as u32, f as u32)).map(|c| c[x] as usize)
    }

    pub fn unitor(&self, i: usize, x: usize) -> usize {
        self.unitors[i][x] as usize
    }

    pub fn transport(&self, m: usize) -> &Functor {
        &self.transports[m]
    }

    /// Reindexing along a functor into the index category.
    pub fn restrict(&self, along: &Functor) -> PseudoFunctor {
        let idx = along.source.clone();
        let values = idx.objects().map(|i| self.values[along.obj(i)].clone()).collect();
        let transports = idx.morphisms().map(|m| self.transports[along.mor(m)].clone()).collect();
        let mut compositors = HashMap::new();
        for f in idx.morphisms() {
            for &g in idx.out_of(idx.tgt(f)) {
                let g = g as usize;
                if idx.comp(g, f).is_none() {
                    continue;
                }
                if let Some(c) = self.compositors.get(&(along.mor(g) as u32, along.mor(f) as u32)) {
                    compositors.insert((g as u32, f as u32), c.clone());
                }
            }
        }
        let unitors = idx.objects().map(|i| self.unitors[along.obj(i)].clone()).collect();
        PseudoFunctor { index: idx, values, transports, compositors, unitors }
    }

    /// Naturality, invertibility, associativity cocycle and unit laws.
    pub fn validate(&self) -> Result<(), CatError> {
        let idx = &self.index;
        let err = |s: String| Err(CatError::Structure(s));
        for m in idx.morphisms() {
            let t = &self.transports[m];
            if t.source.n_obj() != self.values[idx.src(m)].n_obj() || t.target.n_obj() != self.values[idx.tgt(m)].n_obj() {
                return err(format!("transport at {} has wrong endpoints", idx.mor_label(m)));
            }
            t.validate()?;
        }
        for i in idx.objects() {
            let v = &self.values[i];
            let fid = &self.transports[idx.id(i)];
            for x in v.objects() {
                let e = self.unitor(i, x);
                if v.src(e) != x || v.tgt(e) != fid.obj(x) || !v.is_iso(e) {
                    return err(format!("unitor at {} is not an isomorphism x -> F(id)x", idx.obj_label(i)));
                }
            }
            for u in v.morphisms() {
                if v.comp(self.unitor(i, v.tgt(u)), u) != v.comp(fid.mor(u), self.unitor(i, v.src(u))) {
                    return err(format!("unitor at {} is not natural", idx.obj_label(i)));
                }
            }
        }
        for f in idx.morphisms() {
            for &g in idx.out_of(idx.tgt(f)) {
                let g = g as usize;
                let Some(gf) = idx.comp(g, f) else { continue };
                let Some(comps) = self.compositors.get(&(g as u32, f as u32)) else {
                    return err(format!("missing compositor at {} o {}", idx.mor_label(g), idx.mor_label(f)));
                };
                let (tf, tg, tgf) = (&self.transports[f], &self.transports[g], &self.transports[gf]);
                let src_v = &self.values[idx.src(f)];
                let tv = &self.values[idx.tgt(g)];
                for x in src_v.objects() {
                    let c = comps[x] as usize;
                    if tv.src(c) != tg.obj(tf.obj(x)) || tv.tgt(c) != tgf.obj(x) || !tv.is_iso(c) {
                        return err(format!("compositor at {} o {} is not an isomorphism", idx.mor_label(g), idx.mor_label(f)));
                    }
                }
                for u in src_v.morphisms() {
                    let (x, y) = (src_v.src(u), src_v.tgt(u));
                    let left = tv.comp(comps[y] as usize, tg.mor(tf.mor(u)));
                    let right = tv.comp(tgf.mor(u), comps[x] as usize);
                    if left.is_none() || left != right {
                        return err(format!("compositor at {} o {} is not natural", idx.mor_label(g), idx.mor_label(f)));
                    }
                }
                // unit laws
                if f == idx.id(idx.src(f)) || g == idx.id(idx.tgt(g)) {
                    let i0 = idx.src(f);
                    for x in src_v.objects() {
                        let c = comps[x] as usize;
                        let composite = if f == idx.id(i0) {
                            tv.comp(c, tg.mor(self.unitor(i0, x)))
                        } else {
                            tv.comp(c, self.unitor(idx.tgt(g), tf.obj(x)))
                        };
                        if composite != Some(tv.id(tgf.obj(x))) {
                            return err(format!("unit law fails at {} o {}", idx.mor_label(g), idx.mor_label(f)));
                        }
                    }
                }
                // associativity cocycle against every h after g
                for &h in idx.out_of(idx.tgt(g)) {
                    let h = h as usize;
                    let (Some(hg), Some(hgf)) = (idx.comp(h, g), idx.comp(h, gf)) else { continue };
                    let _ = hgf;
                    let (Some(c_h_gf), Some(c_hg_f), Some(c_h_g)) = (
                        self.compositors.get(&(h as u32, gf as u32)),
                        self.compositors.get(&(hg as u32, f as u32)),
                        self.compositors.get(&(h as u32, g as u32)),
                    ) else {
                        continue;
                    };
                    let th = &self.transports[h];
                    let hv = &self.values[idx.tgt(h)];
                    for x in src_v.objects() {
                        let left = hv.comp(c_h_gf[x] as usize, th.mor(comps[x] as usize));
                        let right = hv.comp(c_hg_f[x] as usize, c_h_g[tf.obj(x)] as usize);
                        if left.is_none() || left != right {
                            return err(format!(
                                "associativity cocycle fails at ({}, {}, {})",
                                idx.mor_label(h),
                                idx.mor_label(g),
                                idx.mor_label(f)
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Pseudo-limit with its object and morphism decomposition.
#[derive(Clone, Debug)]
pub struct PseudoLimit {
    pub cat: Arc<FinCat>,
    /// per object: the family `x_i` and the coherence isos `θ_f` per index
    /// morphism
    pub objects: Vec<(Vec<u32>, Vec<u32>)>,
    pub morphisms: Vec<Vec<u32>>,
    object_lookup: HashMap<(Vec<u32>, Vec<u32>), usize>,
    morphism_lookup: HashMap<(u32, u32, Vec<u32>), u32>,
}

impl PseudoLimit {
    pub fn find_object(&self, family: &[u32], theta: &[u32]) -> Option<usize> {
        self.object_lookup.get(&(family.to_vec(), theta.to_vec())).copied()
    }

    pub fn find_morphism(&self, src: usize, tgt: usize, comps: &[u32]) -> Option<usize> {
        self.morphism_lookup.get(&(src as u32, tgt as u32, comps.to_vec())).map(|&m| m as usize)
    }
}

/// Search plan for families over the index: objects in a connected-first
/// order, each index morphism checked as soon as both ends are placed.
pub struct PseudoLimitView<'a> {
    d: &'a PseudoFunctor,
    order_obj: Vec<usize>,
    mors_at: Vec<Vec<usize>>,
    cons_at: Vec<Vec<(usize, usize, usize)>>,
}

/// An object of a pseudo-limit: the family `x_i` and `θ_f` per index morphism.
pub type LimitObject = (Vec<u32>, Vec<u32>);

impl<'a> PseudoLimitView<'a> {
    pub fn new(d: &'a PseudoFunctor) -> Self {
        let idx = &d.index;
        let n = idx.n_obj();
        let mut order_obj = Vec::new();
        let mut placed = vec![false; n];
        while order_obj.len() < n {
            let next = (0..n)
                .filter(|&o| !placed[o])
                .max_by_key(|&o| {
                    let links = idx.incoming(o).iter().filter(|&&m| placed[idx.src(m as usize)]).count()
                        + idx.out_of(o).iter().filter(|&&m| placed[idx.tgt(m as usize)]).count();
                    (links, std::cmp::Reverse(o))
                })
                .unwrap();
            placed[next] = true;
            order_obj.push(next);
        }
        let mut rank = vec![0; n];
        for (r, &o) in order_obj.iter().enumerate() {
            rank[o] = r;
        }
        let mut mors_at: Vec<Vec<usize>> = vec![Vec::new(); n];
        for m in idx.morphisms() {
            mors_at[rank[idx.src(m)].max(rank[idx.tgt(m)])].push(m);
        }
        let mut var_pos = vec![0usize; idx.n_mor()];
        let mut k = 0;
        for step in &mors_at {
            for &m in step {
                var_pos[m] = k;
                k += 1;
            }
        }
        // cocycle constraints keyed by the last variable they mention
        let mut cons_at: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); idx.n_mor()];
        for f in idx.morphisms() {
            for &g in idx.out_of(idx.tgt(f)) {
                let g = g as usize;
                let Some(gf) = idx.comp(g, f) else { continue };
                if !d.compositors.contains_key(&(g as u32, f as u32)) {
                    continue;
                }
                let last = [f, g, gf].into_iter().max_by_key(|&m| var_pos[m]).unwrap();
                cons_at[last].push((g, f, gf));
            }
        }
        PseudoLimitView { d, order_obj, mors_at, cons_at }
    }

    fn cocycles_hold(&self, x: &[u32], theta: &[u32], m: usize) -> bool {
        let d = self.d;
        let idx = &d.index;
        self.cons_at[m].iter().all(|&(g, f, gf)| {
            let v = &d.values[idx.tgt(g)];
            let Some(gamma) = d.compositor(g, f, x[idx.src(f)] as usize) else { return true };
            let left = v.comp(theta[gf] as usize, gamma);
            left.is_some() && left == v.comp(theta[g] as usize, d.transports[g].mor(theta[f] as usize))
        })
    }

    /// Objects whose component at each index object `i` passes `keep(i, x_i)`,
    /// sorted.
    pub fn objects_where(&self, keep: impl Fn(usize, usize) -> bool) -> Vec<LimitObject> {
        let d = self.d;
        let idx = &d.index;
        let mut x = vec![u32::MAX; idx.n_obj()];
        let mut theta = vec![u32::MAX; idx.n_mor()];
        let mut out = Vec::new();
        self.place_object(0, &keep, &mut x, &mut theta, &mut out);
        out.sort();
        out
    }

    fn place_object(
        &self,
        step: usize,
        keep: &impl Fn(usize, usize) -> bool,
        x: &mut Vec<u32>,
        theta: &mut Vec<u32>,
        out: &mut Vec<LimitObject>,
    ) {
        if step == self.order_obj.len() {
            out.push((x.clone(), theta.clone()));
            return;
        }
        let o = self.order_obj[step];
        for v in self.d.values[o].objects() {
            if !keep(o, v) {
                continue;
            }
            x[o] = v as u32;
            self.place_theta(step, 0, keep, x, theta, out);
        }
        x[o] = u32::MAX;
    }

    fn place_theta(
        &self,
        step: usize,
        k: usize,
        keep: &impl Fn(usize, usize) -> bool,
        x: &mut Vec<u32>,
        theta: &mut Vec<u32>,
        out: &mut Vec<LimitObject>,
    ) {
        if k == self.mors_at[step].len() {
            self.place_object(step + 1, keep, x, theta, out);
            return;
        }
        let d = self.d;
        let idx = &d.index;
        let m = self.mors_at[step][k];
        let (i, j) = (idx.src(m), idx.tgt(m));
        let v = &d.values[j];
        if idx.is_identity(m) {
            let eta = d.unitor(i, x[i] as usize);
            theta[m] = v.inverse(eta).expect("unitor invertible") as u32;
            if self.cocycles_hold(x, theta, m) {
                self.place_theta(step, k + 1, keep, x, theta, out);
            }
            return;
        }
        let from = d.transports[m].obj(x[i] as usize);
        for &e in v.hom(from, x[j] as usize) {
            if !v.is_iso(e as usize) {
                continue;
            }
            theta[m] = e;
            if self.cocycles_hold(x, theta, m) {
                self.place_theta(step, k + 1, keep, x, theta, out);
            }
        }
        theta[m] = u32::MAX;
    }

    /// Morphism families `u_i: x_i -> y_i` commuting with every `θ`, whose
    /// component at each `i` passes `keep(i, u_i)`; sorted.
    pub fn homs_where(&self, src: &LimitObject, tgt: &LimitObject, keep: impl Fn(usize, usize) -> bool) -> Vec<Vec<u32>> {
        let mut comps = vec![u32::MAX; self.d.index.n_obj()];
        let mut found = Vec::new();
        self.place_component(0, src, tgt, &keep, &mut comps, &mut found);
        found.sort();
        found
    }

    fn place_component(
        &self,
        k: usize,
        src: &LimitObject,
        tgt: &LimitObject,
        keep: &impl Fn(usize, usize) -> bool,
        comps: &mut Vec<u32>,
        found: &mut Vec<Vec<u32>>,
    ) {
        let ((xs, ths), (ys, tht)) = (src, tgt);
        if k == self.order_obj.len() {
            found.push(comps.clone());
            return;
        }
        let d = self.d;
        let idx = &d.index;
        let o = self.order_obj[k];
        for &u in d.values[o].hom(xs[o] as usize, ys[o] as usize) {
            if !keep(o, u as usize) {
                continue;
            }
            comps[o] = u;
            let ok = self.mors_at[k].iter().all(|&m| {
                let (i, j) = (idx.src(m), idx.tgt(m));
                let vj = &d.values[j];
                let left = vj.comp(tht[m] as usize, d.transports[m].mor(comps[i] as usize));
                left.is_some() && left == vj.comp(comps[j] as usize, ths[m] as usize)
            });
            if ok {
                self.place_component(k + 1, src, tgt, keep, comps, found);
            }
        }
        comps[o] = u32::MAX;
    }
}

/// Objects: families `x_i` with isomorphisms `θ_f: F(f)x_i -> x_j` satisfying
/// `θ_{gf} ∘ γ_{g,f} = θ_g ∘ F(g)(θ_f)` and `θ_{id} = η⁻¹`. Morphisms:
/// families `u_i` commuting with every `θ_f`.
pub fn pseudo_limit_cat(d: &PseudoFunctor) -> Result<PseudoLimit, CatError> {
    let n = d.index.n_obj();
    let view = PseudoLimitView::new(d);
    let objects = view.objects_where(|_, _| true);
    let mut b = CatBuilder::new("pseudolim");
    for (k, _) in objects.iter().enumerate() {
        b.add_object(format!("fam{k}"));
    }
    let mut morphisms: Vec<Vec<u32>> = Vec::new();
    let mut morphism_lookup = HashMap::new();
    for (s, so) in objects.iter().enumerate() {
        for (t, to) in objects.iter().enumerate() {
            for c in view.homs_where(so, to, |_, _| true) {
                let is_id = s == t && c.iter().enumerate().all(|(i, &u)| d.values[i].id(so.0[i] as usize) == u as usize);
                let m = b.add_morphism(format!("fam{s}->fam{t}#{}", morphisms.len()), s, t);
                if is_id {
                    b.set_identity(s, m);
                }
                morphism_lookup.insert((s as u32, t as u32, c.clone()), m as u32);
                morphisms.push(c);
            }
        }
    }
    let ends: Vec<(usize, usize)> = (0..b.n_mor()).map(|m| (b.morphism_src(m), b.morphism_tgt(m))).collect();
    let cat = b.build_with(|g, f| {
        let mut comps = Vec::with_capacity(n);
        for i in 0..n {
            comps.push(d.values[i].comp(morphisms[g][i] as usize, morphisms[f][i] as usize)? as u32);
        }
        morphism_lookup.get(&(ends[f].0 as u32, ends[g].1 as u32, comps)).map(|&m| m as usize)
    })?;
    let object_lookup = objects.iter().enumerate().map(|(i, o)| (o.clone(), i)).collect();
    Ok(PseudoLimit { cat: Arc::new(cat), objects, morphisms, object_lookup, morphism_lookup })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::cat::*;
    use crate::fincat::functor::functor_is_equivalence;

    fn strict(index: FinCat, values: Vec<FinCat>, maps: Vec<(Vec<usize>, Vec<usize>)>) -> PseudoFunctor {
        let index = Arc::new(index);
        let values: Vec<Arc<FinCat>> = values.into_iter().map(Arc::new).collect();
        let transports = index
            .morphisms()
            .zip(maps)
            .map(|(m, (o, mm))| Functor::new_unchecked(values[index.src(m)].clone(), values[index.tgt(m)].clone(), o, mm))
            .collect();
        PseudoFunctor::from_strict(index, values, transports).unwrap()
    }

    #[test]
    fn discrete_index_gives_product() {
        let a = walking_arrow();
        let z = walking_iso();
        let p = strict(
            discrete_cat(2),
            vec![a.clone(), z.clone()],
            vec![((0..2).collect(), (0..3).collect()), ((0..2).collect(), (0..4).collect())],
        );
        let lim = pseudo_limit_cat(&p).unwrap();
        let (prod, _, _) = product_cat(&a, &z);
        assert_eq!(lim.cat.n_obj(), prod.n_obj());
        assert_eq!(lim.cat.n_mor(), prod.n_mor());
        lim.cat.validate().unwrap();
    }

    #[test]
    fn constant_terminal_diagram() {
        let idx = walking_arrow();
        let p = strict(idx, vec![terminal_cat(), terminal_cat()], vec![(vec![0], vec![0]); 3]);
        let lim = pseudo_limit_cat(&p).unwrap();
        assert_eq!(lim.cat.n_obj(), 1);
    }

    #[test]
    fn walking_arrow_index_recovers_source() {
        // F: iso -> pt over the walking arrow; pseudo-limit ≃ source value
        let src = walking_iso();
        let p = strict(
            walking_arrow(),
            vec![src.clone(), terminal_cat()],
            vec![((0..2).collect(), (0..4).collect()), (vec![0, 0], vec![0; 4]), (vec![0], vec![0])],
        );
        let lim = pseudo_limit_cat(&p).unwrap();
        assert_eq!(lim.cat.n_obj(), 2);
        let proj = Functor::new_unchecked(
            lim.cat.clone(),
            Arc::new(src),
            lim.objects.iter().map(|o| o.0[0] as usize).collect(),
            lim.morphisms.iter().map(|m| m[0] as usize).collect(),
        );
        proj.validate().unwrap();
        assert!(functor_is_equivalence(&proj).is_holds());
    }
}
