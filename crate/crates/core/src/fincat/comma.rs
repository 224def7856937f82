//! Comma, iso-comma and slice constructions.

use std::collections::HashMap;
use std::sync::Arc;

use super::cat::{CatBuilder, CatError, FinCat};
use super::functor::Functor;

/// A comma category `F ↓ G` together with its decomposition.
#[derive(Clone, Debug)]
pub struct Comma {
    pub cat: Arc<FinCat>,
    /// (a, b, e: F a -> G b) per object
    pub objects: Vec<(usize, usize, usize)>,
    /// (u, v) per morphism
    pub morphisms: Vec<(usize, usize)>,
    pub proj_left: Functor,
    pub proj_right: Functor,
}

impl Comma {
    pub fn find_object(&self, a: usize, b: usize, e: usize) -> Option<usize> {
        self.objects.iter().position(|&o| o == (a, b, e))
    }
}

fn same_category(x: &FinCat, y: &FinCat) -> bool {
    std::ptr::eq(x, y) || (x.n_obj() == y.n_obj() && x.n_mor() == y.n_mor() && x.mor_labels() == y.mor_labels())
}

pub fn comma_category(f: &Functor, g: &Functor) -> Result<Comma, CatError> {
    comma_filtered(f, g, |_, _| true, "comma")
}

/// Full subcategory of the iso-comma: objects carry an isomorphism.
pub fn iso_comma(f: &Functor, g: &Functor) -> Result<Comma, CatError> {
    comma_filtered(f, g, |e, m| e.is_iso(m), "isocomma")
}

/// Full subcategory of `F ↓ G` on objects whose connecting morphism passes
/// `keep`.
pub fn comma_filtered(
    f: &Functor,
    g: &Functor,
    keep: impl Fn(&FinCat, usize) -> bool,
    name: &str,
) -> Result<Comma, CatError> {
    if !same_category(&f.target, &g.target) {
        return Err(CatError::Structure(format!(
            "comma of functors with different targets ({} vs {})",
            f.target.name(),
            g.target.name()
        )));
    }
    let (ca, cb, ce) = (&f.source, &g.source, &f.target);
    let mut b = CatBuilder::new(format!("{name}({},{})", ca.name(), cb.name()));
    let mut objects = Vec::new();
    let mut by_pair: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for a in ca.objects() {
        for bb in cb.objects() {
            for &e in ce.hom(f.obj(a), g.obj(bb)) {
                let e = e as usize;
                if !keep(ce, e) {
                    continue;
                }
                let o = b.add_object(format!("({},{},{})", ca.obj_label(a), cb.obj_label(bb), ce.mor_label(e)));
                objects.push((a, bb, e));
                by_pair.entry((a, bb)).or_default().push(o);
            }
        }
    }
    let mut morphisms = Vec::new();
    let mut index: HashMap<(u32, u32, u32, u32), u32> = HashMap::new();
    for (o, &(a, bb, e)) in objects.iter().enumerate() {
        for &u in ca.out_of(a) {
            let u = u as usize;
            for &v in cb.out_of(bb) {
                let v = v as usize;
                let Some(targets) = by_pair.get(&(ca.tgt(u), cb.tgt(v))) else { continue };
                let Some(rhs) = ce.comp(g.mor(v), e) else { continue };
                for &o2 in targets {
                    let e2 = objects[o2].2;
                    if ce.comp(e2, f.mor(u)) == Some(rhs) {
                        let m = b.add_morphism(format!("({},{})", ca.mor_label(u), cb.mor_label(v)), o, o2);
                        if u == ca.id(a) && v == cb.id(bb) && o2 == o {
                            b.set_identity(o, m);
                        }
                        index.insert((o as u32, o2 as u32, u as u32, v as u32), m as u32);
                        morphisms.push((u, v));
                    }
                }
            }
        }
    }
    let ends: Vec<(usize, usize)> = (0..b.n_mor()).map(|m| (b.morphism_src(m), b.morphism_tgt(m))).collect();
    let cat = b.build_with(|p, q| {
        let (u2, v2) = morphisms[p];
        let (u1, v1) = morphisms[q];
        let u = ca.comp(u2, u1)?;
        let v = cb.comp(v2, v1)?;
        index.get(&(ends[q].0 as u32, ends[p].1 as u32, u as u32, v as u32)).map(|&m| m as usize)
    })?;
    let cat = Arc::new(cat);
    let proj_left = Functor::new_unchecked(
        cat.clone(),
        ca.clone(),
        objects.iter().map(|o| o.0).collect(),
        morphisms.iter().map(|m| m.0).collect(),
    );
    let proj_right = Functor::new_unchecked(
        cat.clone(),
        cb.clone(),
        objects.iter().map(|o| o.1).collect(),
        morphisms.iter().map(|m| m.1).collect(),
    );
    Ok(Comma { cat, objects, morphisms, proj_left, proj_right })
}

/// A slice or coslice restricted to flagged arrows and flagged connecting
/// morphisms.
#[derive(Clone, Debug)]
pub struct Slice {
    pub cat: Arc<FinCat>,
    /// the arrow of the ambient category represented by each object
    pub arrows: Vec<usize>,
    /// the connecting morphism of the ambient category for each morphism
    pub conn: Vec<usize>,
}

impl Slice {
    /// Functor sending each object to the far end of its arrow.
    pub fn far_end(&self, ambient: &Arc<FinCat>, under: bool) -> Functor {
        let obj = self
            .arrows
            .iter()
            .map(|&a| if under { ambient.tgt(a) } else { ambient.src(a) })
            .collect();
        Functor::new_unchecked(self.cat.clone(), ambient.clone(), obj, self.conn.clone())
    }

    pub fn object_of_arrow(&self, arrow: usize) -> Option<usize> {
        self.arrows.iter().position(|&a| a == arrow)
    }
}

/// Objects: arrows `x -> a` passing `arrow_ok`; morphisms: `u: a -> a'`
/// passing `conn_ok` with `u ∘ α = α'`.
pub fn restricted_coslice(
    c: &FinCat,
    x: usize,
    arrow_ok: impl Fn(usize) -> bool,
    conn_ok: impl Fn(usize) -> bool,
    name: impl Into<String>,
) -> Slice {
    let arrows: Vec<usize> = c.out_of(x).iter().map(|&m| m as usize).filter(|&m| arrow_ok(m)).collect();
    let mut pos: HashMap<usize, usize> = HashMap::new();
    for (i, &a) in arrows.iter().enumerate() {
        pos.insert(a, i);
    }
    let mut b = CatBuilder::new(name);
    for &a in &arrows {
        b.add_object(c.mor_label(a));
    }
    let mut conn = Vec::new();
    let mut index = HashMap::new();
    for (i, &a) in arrows.iter().enumerate() {
        for &u in c.out_of(c.tgt(a)) {
            let u = u as usize;
            if !conn_ok(u) {
                continue;
            }
            let Some(ua) = c.comp(u, a) else { continue };
            if let Some(&j) = pos.get(&ua) {
                let m = b.add_morphism(c.mor_label(u), i, j);
                if u == c.id(c.tgt(a)) {
                    b.set_identity(i, m);
                }
                index.insert((i, u), m);
                conn.push(u);
            }
        }
    }
    let srcs: Vec<usize> = (0..b.n_mor()).map(|m| b.morphism_src(m)).collect();
    let cat = b
        .build_with(|g, f| c.comp(conn[g], conn[f]).and_then(|h| index.get(&(srcs[f], h)).copied()))
        .expect("restricted coslice with identities");
    Slice { cat: Arc::new(cat), arrows, conn }
}

/// Objects: arrows `a -> x` passing `arrow_ok`; morphisms: `u: a -> a'`
/// passing `conn_ok` with `α' ∘ u = α`.
pub fn restricted_slice(
    c: &FinCat,
    x: usize,
    arrow_ok: impl Fn(usize) -> bool,
    conn_ok: impl Fn(usize) -> bool,
    name: impl Into<String>,
) -> Slice {
    let arrows: Vec<usize> = c.incoming(x).iter().map(|&m| m as usize).filter(|&m| arrow_ok(m)).collect();
    let mut by_src: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, &a) in arrows.iter().enumerate() {
        by_src.entry(c.src(a)).or_default().push(i);
    }
    let mut b = CatBuilder::new(name);
    for &a in &arrows {
        b.add_object(c.mor_label(a));
    }
    let mut conn = Vec::new();
    let mut index = HashMap::new();
    for (i, &a) in arrows.iter().enumerate() {
        for &u in c.out_of(c.src(a)) {
            let u = u as usize;
            if !conn_ok(u) {
                continue;
            }
            let Some(targets) = by_src.get(&c.tgt(u)) else { continue };
            for &j in targets {
                if c.comp(arrows[j], u) == Some(a) {
                    let m = b.add_morphism(c.mor_label(u), i, j);
                    if u == c.id(c.src(a)) && i == j {
                        b.set_identity(i, m);
                    }
                    index.insert((i, j, u), m);
                    conn.push(u);
                }
            }
        }
    }
    let ends: Vec<(usize, usize)> = (0..b.n_mor()).map(|m| (b.morphism_src(m), b.morphism_tgt(m))).collect();
    let cat = b
        .build_with(|g, f| c.comp(conn[g], conn[f]).and_then(|h| index.get(&(ends[f].0, ends[g].1, h)).copied()))
        .expect("restricted slice with identities");
    Slice { cat: Arc::new(cat), arrows, conn }
}

pub fn slice(c: &FinCat, x: usize) -> Slice {
    restricted_slice(c, x, |_| true, |_| true, format!("{}/{}", c.name(), c.obj_label(x)))
}

pub fn coslice(c: &FinCat, x: usize) -> Slice {
    restricted_coslice(c, x, |_| true, |_| true, format!("{}/{}", c.obj_label(x), c.name()))
}

/// Wide subcategory of isomorphisms.
pub fn max_subgroupoid(c: &FinCat) -> (FinCat, Vec<usize>) {
    let keep_obj = vec![true; c.n_obj()];
    let keep_mor: Vec<bool> = c.morphisms().map(|m| c.is_iso(m)).collect();
    let (g, _, mors) = c
        .subcategory(&keep_obj, &keep_mor, format!("core({})", c.name()))
        .expect("isomorphisms form a subcategory");
    (g, mors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::cat::*;

    #[test]
    fn comma_of_identities_on_terminal() {
        let pt = Arc::new(terminal_cat());
        let id = Functor::identity(pt);
        let c = comma_category(&id, &id).unwrap();
        assert_eq!(c.cat.n_obj(), 1);
        assert_eq!(c.cat.n_mor(), 1);
    }

    #[test]
    fn slice_of_walking_arrow_over_target() {
        let a = walking_arrow();
        let s = slice(&a, 1);
        assert_eq!(s.cat.n_obj(), 2);
        assert_eq!(s.cat.n_mor(), 3);
        s.cat.validate().unwrap();
    }

    #[test]
    fn under_category_of_z2() {
        let z2 = monoid_cat(2, |a, b| a ^ b, "Z2");
        let s = coslice(&z2, 0);
        assert_eq!(s.cat.n_obj(), 2);
        assert!(s.cat.is_groupoid());
        assert!(s.cat.is_connected());
        assert!(s.cat.objects().all(|o| s.cat.automorphism_count(o) == 1));
    }

    #[test]
    fn iso_comma_at_z2() {
        let z2 = Arc::new(monoid_cat(2, |a, b| a ^ b, "Z2"));
        let id = Functor::identity(z2.clone());
        let c = iso_comma(&id, &id).unwrap();
        assert_eq!(c.cat.n_obj(), 2);
        // two witnesses between every ordered pair of objects
        for x in c.cat.objects() {
            for y in c.cat.objects() {
                assert_eq!(c.cat.hom(x, y).len(), 2);
            }
        }
        assert!(c.cat.is_groupoid() && c.cat.is_connected());
        // constant at the point: the two isomorphisms are the objects, no
        // morphisms between them
        let pt = Arc::new(terminal_cat());
        let k = Functor::constant(pt, z2, 0);
        let d = iso_comma(&k, &k).unwrap();
        assert_eq!(d.cat.n_obj(), 2);
        assert_eq!(d.cat.n_mor(), 2);
    }

    #[test]
    fn iso_comma_non_isomorphic_constants_is_empty() {
        let d = Arc::new(discrete_cat(2));
        let pt = Arc::new(terminal_cat());
        let a = Functor::constant(pt.clone(), d.clone(), 0);
        let b = Functor::constant(pt, d, 1);
        assert_eq!(iso_comma(&a, &b).unwrap().cat.n_obj(), 0);
    }

    #[test]
    fn core_of_arrow_is_discrete() {
        let (g, _) = max_subgroupoid(&walking_arrow());
        assert_eq!(g.n_mor(), 2);
    }
}
