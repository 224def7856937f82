//! Finite groups given by multiplication tables and skeletal categories of
//! finite G-sets. With the trivial group this is the category of finite sets.

use std::collections::HashMap;
use std::sync::Arc;

use crate::fincat::{CatBuilder, CatError, FinCat};

/// Largest group order accepted; subgroups are found by subset search.
pub const MAX_GROUP_ORDER: usize = 12;

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub name: String,
    /// `mul[a][b] = a·b`; element 0 is the unit
    pub mul: Vec<Vec<usize>>,
    pub inv: Vec<usize>,
}

impl FiniteGroup {
    pub fn new(name: impl Into<String>, mul: Vec<Vec<usize>>) -> Result<Self, CatError> {
        let n = mul.len();
        let err = |s: &str| Err(CatError::Structure(format!("group table: {s}")));
        if n == 0 || n > MAX_GROUP_ORDER {
            return err("order must be between 1 and 12");
        }
        if mul.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return err("table is not square or has out-of-range entries");
        }
        if (0..n).any(|a| mul[0][a] != a || mul[a][0] != a) {
            return err("element 0 is not a unit");
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return err("not associative");
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| mul[a][b] == 0) {
                Some(b) => inv[a] = b,
                None => return err("an element has no inverse"),
            }
        }
        Ok(FiniteGroup { name: name.into(), mul, inv })
    }

    pub fn trivial() -> Self {
        FiniteGroup::new("e", vec![vec![0]]).unwrap()
    }

    pub fn cyclic(n: usize) -> Self {
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::new(format!("C{n}"), mul).unwrap()
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// All subgroups as sorted element lists.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let els: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if els.iter().all(|&a| els.iter().all(|&b| mask >> self.mul[a][b] & 1 == 1)) {
                out.push(els);
            }
        }
        out
    }

    pub fn conjugate(&self, g: usize, h: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = h.iter().map(|&x| self.mul[self.mul[g][x]][self.inv[g]]).collect();
        v.sort_unstable();
        v
    }

    /// One subgroup per conjugacy class, ordered by size then elements.
    pub fn subgroup_classes(&self) -> Vec<Vec<usize>> {
        let mut subs = self.subgroups();
        subs.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        let mut reps: Vec<Vec<usize>> = Vec::new();
        for s in subs {
            if !reps.iter().any(|r| r.len() == s.len() && (0..self.order()).any(|g| &self.conjugate(g, r) == &s)) {
                reps.push(s);
            }
        }
        reps
    }
}

/// Orbit type `G/H` with its cosets.
#[derive(Clone, Debug)]
pub struct OrbitType {
    pub subgroup: Vec<usize>,
    pub label: String,
    /// `coset_of[g]` is the index of `gH`
    pub coset_of: Vec<usize>,
    /// a representative of each coset
    pub coset_rep: Vec<usize>,
}

impl OrbitType {
    pub fn size(&self) -> usize {
        self.coset_rep.len()
    }
}

/// A G-set in canonical form: multiset of orbit types, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GSetShape(pub Vec<usize>);

/// Bounds on the objects of a truncated `𝔽_G`.
#[derive(Clone, Copy, Debug)]
pub struct GSetCaps {
    pub orbits: usize,
    pub points: usize,
}

/// Skeletal category of finite G-sets within caps, with point-level data
/// for every object and morphism.
#[derive(Debug)]
pub struct GSetCat {
    pub group: FiniteGroup,
    pub orbit_types: Vec<OrbitType>,
    pub caps: GSetCaps,
    pub shapes: Vec<GSetShape>,
    /// per object: `act[g][point]`
    pub actions: Vec<Vec<Vec<u32>>>,
    /// per object: `(orbit slot, coset)` of each point
    pub points: Vec<Vec<(u32, u32)>>,
    /// per morphism: image of each point
    pub maps: Vec<Vec<u32>>,
    pub cat: Arc<FinCat>,
    shape_lookup: HashMap<GSetShape, usize>,
    map_lookup: HashMap<(u32, u32, Vec<u32>), u32>,
}

fn shape_label(g: &FiniteGroup, types: &[OrbitType], shape: &GSetShape) -> String {
    if g.is_trivial() {
        return shape.0.len().to_string();
    }
    if shape.0.is_empty() {
        return "0".into();
    }
    shape.0.iter().map(|&t| types[t].label.clone()).collect::<Vec<_>>().join("+")
}

impl GSetCat {
    pub fn new(group: FiniteGroup, caps: GSetCaps) -> Result<Self, CatError> {
        let classes = group.subgroup_classes();
        let n = group.order();
        let orbit_types: Vec<OrbitType> = classes
            .iter()
            .map(|h| {
                let mut coset_of = vec![usize::MAX; n];
                let mut coset_rep = Vec::new();
                for g in 0..n {
                    if coset_of[g] != usize::MAX {
                        continue;
                    }
                    let k = coset_rep.len();
                    coset_rep.push(g);
                    for &x in h {
                        coset_of[group.mul[g][x]] = k;
                    }
                }
                let label = if h.len() == 1 {
                    format!("{}/e", group.name)
                } else if h.len() == n {
                    format!("{}/{}", group.name, group.name)
                } else {
                    format!("{}/H{}", group.name, h.iter().map(|x| x.to_string()).collect::<String>())
                };
                OrbitType { subgroup: h.clone(), label, coset_of, coset_rep }
            })
            .collect();
        // all multisets of orbit types within the caps
        let mut shapes = Vec::new();
        fn rec(types: &[OrbitType], caps: GSetCaps, start: usize, cur: &mut Vec<usize>, pts: usize, out: &mut Vec<GSetShape>) {
            out.push(GSetShape(cur.clone()));
            if cur.len() == caps.orbits {
                return;
            }
            for t in start..types.len() {
                let p = pts + types[t].size();
                if p <= caps.points {
                    cur.push(t);
                    rec(types, caps, t, cur, p, out);
                    cur.pop();
                }
            }
        }
        rec(&orbit_types, caps, 0, &mut Vec::new(), 0, &mut shapes);
        shapes.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then(a.cmp(b)));
        let shape_lookup = shapes.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut actions = Vec::new();
        let mut points = Vec::new();
        for s in &shapes {
            let mut pts = Vec::new();
            for (slot, &t) in s.0.iter().enumerate() {
                for c in 0..orbit_types[t].size() {
                    pts.push((slot as u32, c as u32));
                }
            }
            let offsets: Vec<usize> = {
                let mut o = Vec::new();
                let mut acc = 0;
                for &t in &s.0 {
                    o.push(acc);
                    acc += orbit_types[t].size();
                }
                o
            };
            let act: Vec<Vec<u32>> = (0..n)
                .map(|g| {
                    pts.iter()
                        .map(|&(slot, c)| {
                            let ot = &orbit_types[s.0[slot as usize]];
                            let moved = ot.coset_of[group.mul[g][ot.coset_rep[c as usize]]];
                            (offsets[slot as usize] + moved) as u32
                        })
                        .collect()
                })
                .collect();
            actions.push(act);
            points.push(pts);
        }
        let mut b = CatBuilder::new(if group.is_trivial() { "F".to_string() } else { format!("F_{}", group.name) });
        for s in &shapes {
            b.add_object(shape_label(&group, &orbit_types, s));
        }
        let mut maps: Vec<Vec<u32>> = Vec::new();
        let mut map_lookup = HashMap::new();
        for x in 0..shapes.len() {
            for y in 0..shapes.len() {
                for m in equivariant_maps(&group, &orbit_types, &shapes[x], &actions[x], &points[x], &actions[y]) {
                    let label = format!(
                        "{}->{}:[{}]",
                        shape_label(&group, &orbit_types, &shapes[x]),
                        shape_label(&group, &orbit_types, &shapes[y]),
                        m.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
                    );
                    let id = b.add_morphism(label, x, y);
                    if x == y && m.iter().enumerate().all(|(i, &v)| i as u32 == v) {
                        b.set_identity(x, id);
                    }
                    map_lookup.insert((x as u32, y as u32, m.clone()), id as u32);
                    maps.push(m);
                }
            }
        }
        let ends: Vec<(usize, usize)> = (0..b.n_mor()).map(|m| (b.morphism_src(m), b.morphism_tgt(m))).collect();
        let cat = b.build_with(|g, f| {
            let h: Vec<u32> = maps[f].iter().map(|&p| maps[g][p as usize]).collect();
            map_lookup.get(&(ends[f].0 as u32, ends[g].1 as u32, h)).map(|&m| m as usize)
        })?;
        Ok(GSetCat {
            group,
            orbit_types,
            caps,
            shapes,
            actions,
            points,
            maps,
            cat: Arc::new(cat),
            shape_lookup,
            map_lookup,
        })
    }

    /// Finite sets `0..=k`.
    pub fn finite_sets(k: usize) -> Self {
        GSetCat::new(FiniteGroup::trivial(), GSetCaps { orbits: k, points: k }).unwrap()
    }

    pub fn n_points(&self, x: usize) -> usize {
        self.points[x].len()
    }

    pub fn n_orbits(&self, x: usize) -> usize {
        self.shapes[x].0.len()
    }

    pub fn find_map(&self, x: usize, y: usize, images: &[u32]) -> Option<usize> {
        self.map_lookup.get(&(x as u32, y as u32, images.to_vec())).map(|&m| m as usize)
    }

    pub fn find_shape(&self, s: &GSetShape) -> Option<usize> {
        self.shape_lookup.get(s).copied()
    }

    /// Orbit objects (single orbit).
    pub fn orbits(&self) -> Vec<usize> {
        (0..self.shapes.len()).filter(|&x| self.shapes[x].0.len() == 1).collect()
    }

    pub fn is_injective(&self, m: usize) -> bool {
        let img = &self.maps[m];
        let mut seen = vec![false; self.n_points(self.cat.tgt(m))];
        img.iter().all(|&p| !std::mem::replace(&mut seen[p as usize], true))
    }

    /// Stabilizer of a point of object `x`.
    pub fn stabilizer(&self, x: usize, p: usize) -> Vec<usize> {
        (0..self.group.order()).filter(|&g| self.actions[x][g][p] as usize == p).collect()
    }

    /// Canonical object isomorphic to a G-set given by its action table, and
    /// the isomorphism as point images. `None` if outside the caps.
    pub fn canonicalize(&self, act: &[Vec<u32>]) -> Option<(usize, Vec<u32>)> {
        let g = &self.group;
        let n = act.first().map_or(0, |a| a.len());
        let mut orbit_of = vec![usize::MAX; n];
        let mut orbits: Vec<(usize, usize)> = Vec::new(); // (type, chosen base point)
        for p in 0..n {
            if orbit_of[p] != usize::MAX {
                continue;
            }
            let k = orbits.len();
            for h in 0..g.order() {
                orbit_of[act[h][p] as usize] = k;
            }
            let stab: Vec<usize> = (0..g.order()).filter(|&h| act[h][p] as usize == p).collect();
            // move p so that its stabilizer is the class representative
            let mut found = None;
            'types: for (t, ot) in self.orbit_types.iter().enumerate() {
                if ot.subgroup.len() != stab.len() {
                    continue;
                }
                for h in 0..g.order() {
                    if g.conjugate(h, &stab) == ot.subgroup {
                        found = Some((t, act[h][p] as usize));
                        break 'types;
                    }
                }
            }
            orbits.push(found.expect("every stabilizer is conjugate to a class representative"));
        }
        let mut order: Vec<usize> = (0..orbits.len()).collect();
        order.sort_by_key(|&k| (orbits[k].0, k));
        let shape = GSetShape(order.iter().map(|&k| orbits[k].0).collect());
        let x = self.find_shape(&shape)?;
        let mut offset = vec![0usize; orbits.len()];
        let mut acc = 0;
        for &k in &order {
            offset[k] = acc;
            acc += self.orbit_types[orbits[k].0].size();
        }
        let mut iso = vec![u32::MAX; n];
        for (k, &(t, base)) in orbits.iter().enumerate() {
            let ot = &self.orbit_types[t];
            for h in 0..g.order() {
                let q = act[h][base] as usize;
                iso[q] = (offset[k] + ot.coset_of[h]) as u32;
            }
        }
        Some((x, iso))
    }

    /// Pullback of `a -> y <- b` as an object with projections to `a` and `b`.
    pub fn pullback(&self, to_y_from_a: usize, to_y_from_b: usize) -> Option<(usize, usize, usize)> {
        let c = &self.cat;
        let (a, b) = (c.src(to_y_from_a), c.src(to_y_from_b));
        debug_assert_eq!(c.tgt(to_y_from_a), c.tgt(to_y_from_b));
        let (fa, fb) = (&self.maps[to_y_from_a], &self.maps[to_y_from_b]);
        let mut pairs = Vec::new();
        for p in 0..self.n_points(a) {
            for q in 0..self.n_points(b) {
                if fa[p] == fb[q] {
                    pairs.push((p as u32, q as u32));
                }
            }
        }
        let index: HashMap<(u32, u32), u32> = pairs.iter().enumerate().map(|(i, &pq)| (pq, i as u32)).collect();
        let act: Vec<Vec<u32>> = (0..self.group.order())
            .map(|g| {
                pairs
                    .iter()
                    .map(|&(p, q)| index[&(self.actions[a][g][p as usize], self.actions[b][g][q as usize])])
                    .collect()
            })
            .collect();
        let (w, iso) = self.canonicalize(&act)?;
        let mut to_a = vec![0u32; pairs.len()];
        let mut to_b = vec![0u32; pairs.len()];
        for (i, &(p, q)) in pairs.iter().enumerate() {
            to_a[iso[i] as usize] = p;
            to_b[iso[i] as usize] = q;
        }
        Some((w, self.find_map(w, a, &to_a)?, self.find_map(w, b, &to_b)?))
    }

    /// Coproduct with its two injections.
    pub fn coproduct(&self, x: usize, y: usize) -> Option<(usize, usize, usize)> {
        let nx = self.n_points(x);
        let act: Vec<Vec<u32>> = (0..self.group.order())
            .map(|g| {
                let mut v = self.actions[x][g].clone();
                v.extend(self.actions[y][g].iter().map(|&p| p + nx as u32));
                v
            })
            .collect();
        let (s, iso) = self.canonicalize(&act)?;
        let i1 = self.find_map(x, s, &iso[..nx])?;
        let i2 = self.find_map(y, s, &iso[nx..])?;
        Some((s, i1, i2))
    }

    /// The map `f ⊔ g` between coproducts.
    pub fn coproduct_map(&self, f: usize, g: usize) -> Option<usize> {
        let c = &self.cat;
        let (s, i1, i2) = self.coproduct(c.src(f), c.src(g))?;
        let (t, j1, j2) = self.coproduct(c.tgt(f), c.tgt(g))?;
        let mut img = vec![0u32; self.n_points(s)];
        for p in 0..self.n_points(c.src(f)) {
            img[self.maps[i1][p] as usize] = self.maps[j1][self.maps[f][p] as usize];
        }
        for p in 0..self.n_points(c.src(g)) {
            img[self.maps[i2][p] as usize] = self.maps[j2][self.maps[g][p] as usize];
        }
        self.find_map(s, t, &img)
    }
}

fn equivariant_maps(
    group: &FiniteGroup,
    types: &[OrbitType],
    src: &GSetShape,
    src_act: &[Vec<u32>],
    src_pts: &[(u32, u32)],
    tgt_act: &[Vec<u32>],
) -> Vec<Vec<u32>> {
    let ny = tgt_act.first().map_or(0, |a| a.len());
    // admissible images of each orbit's base point (coset 0)
    let choices: Vec<Vec<u32>> = src
        .0
        .iter()
        .map(|&t| {
            let h = &types[t].subgroup;
            (0..ny as u32).filter(|&y| h.iter().all(|&g| tgt_act[g][y as usize] == y)).collect()
        })
        .collect();
    let base_of_slot: Vec<usize> = {
        let mut v = vec![usize::MAX; src.0.len()];
        for (p, &(slot, c)) in src_pts.iter().enumerate() {
            if c == 0 {
                v[slot as usize] = p;
            }
        }
        v
    };
    let mut out = Vec::new();
    let mut pick = vec![0usize; src.0.len()];
    if choices.iter().any(|c| c.is_empty()) {
        return out;
    }
    loop {
        let mut img = vec![0u32; src_pts.len()];
        for slot in 0..src.0.len() {
            let y0 = choices[slot][pick[slot]] as usize;
            let base = base_of_slot[slot];
            for g in 0..group.order() {
                img[src_act[g][base] as usize] = tgt_act[g][y0];
            }
        }
        out.push(img);
        let mut i = 0;
        loop {
            if i == pick.len() {
                return out;
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

/// A class of morphisms of `𝔽_G` closed under base change and disjoint
/// union, checked exhaustively within the caps.
pub fn check_f_class(gs: &GSetCat, in_class: &[bool]) -> crate::verdict::Verdict {
    use crate::verdict::Verdict;
    const M: &str = "closure under isomorphisms, composition, base change and disjoint union";
    let c = &gs.cat;
    if in_class.len() != c.n_mor() {
        return Verdict::unknown(M, "flag vector has the wrong length");
    }
    for m in c.morphisms() {
        if c.is_iso(m) && !in_class[m] {
            return Verdict::fails(M, format!("isomorphism {} not in the class", c.mor_label(m)));
        }
    }
    for f in c.morphisms().filter(|&f| in_class[f]) {
        for &g in c.out_of(c.tgt(f)) {
            let g = g as usize;
            if let Some(h) = c.comp(g, f) {
                if in_class[g] && !in_class[h] {
                    return Verdict::fails(M, format!("composite {} o {} not in the class", c.mor_label(g), c.mor_label(f)));
                }
            }
        }
        for &u in c.incoming(c.tgt(f)) {
            let u = u as usize;
            if let Some((_, base_change, _)) = gs.pullback(u, f) {
                if !in_class[base_change] {
                    return Verdict::fails(
                        M,
                        format!("base change of {} along {} is {}, not in the class", c.mor_label(f), c.mor_label(u), c.mor_label(base_change)),
                    );
                }
            }
        }
        for g in c.morphisms().filter(|&g| in_class[g]) {
            if let Some(fg) = gs.coproduct_map(f, g) {
                if !in_class[fg] {
                    return Verdict::fails(
                        M,
                        format!("disjoint union of {} and {} is {}, not in the class", c.mor_label(f), c.mor_label(g), c.mor_label(fg)),
                    );
                }
            }
        }
    }
    Verdict::holds(M)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_sets_counts() {
        let f = GSetCat::finite_sets(3);
        assert_eq!(f.cat.n_obj(), 4);
        // sum over m, n <= 3 of n^m (0^0 = 1)
        let expected: usize = (0..4u32).map(|m| (0..4usize).map(|n| n.pow(m)).sum::<usize>()).sum();
        assert_eq!(f.cat.n_mor(), expected);
        f.cat.validate().unwrap();
    }

    #[test]
    fn c2_orbits_and_maps() {
        let gs = GSetCat::new(FiniteGroup::cyclic(2), GSetCaps { orbits: 2, points: 4 }).unwrap();
        assert_eq!(gs.orbits().len(), 2);
        assert_eq!(gs.cat.n_obj(), 6);
        let free = gs.cat.find_object("C2/e").unwrap();
        assert_eq!(gs.cat.hom(free, free).len(), 2);
        let fixed = gs.cat.find_object("C2/C2").unwrap();
        assert_eq!(gs.cat.hom(fixed, free).len(), 0);
        assert_eq!(gs.cat.hom(free, fixed).len(), 1);
        gs.cat.validate().unwrap();
    }

    #[test]
    fn pullback_of_free_orbits_over_point() {
        let gs = GSetCat::new(FiniteGroup::cyclic(2), GSetCaps { orbits: 2, points: 4 }).unwrap();
        let (free, fixed) = (gs.cat.find_object("C2/e").unwrap(), gs.cat.find_object("C2/C2").unwrap());
        let m = gs.cat.hom(free, fixed)[0] as usize;
        let (w, _, _) = gs.pullback(m, m).unwrap();
        assert_eq!(gs.cat.obj_label(w), "C2/e+C2/e");
    }

    #[test]
    fn isomorphisms_form_a_closed_class() {
        let gs = GSetCat::new(FiniteGroup::cyclic(2), GSetCaps { orbits: 2, points: 4 }).unwrap();
        let isos: Vec<bool> = gs.cat.morphisms().map(|m| gs.cat.is_iso(m)).collect();
        assert!(check_f_class(&gs, &isos).is_holds());
    }
}
