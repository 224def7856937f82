//! Finite categories stored as explicit composition tables.
//!
//! Composition may be partial: truncated models (spans with bounded apex,
//! for instance) leave some composites outside the stored range. Every scan in
//! this crate treats an undefined composite as "not available", never as a
//! value.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

pub(crate) const UNDEF: u32 = u32::MAX;

/// Hard caps so that exhaustive scans stay exhaustive.
pub const MAX_OBJECTS: usize = 1 << 14;
pub const MAX_MORPHISMS: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatError {
    #[error("object index {0} out of range")]
    BadObject(usize),
    #[error("morphism index {0} out of range")]
    BadMorphism(usize),
    #[error("object {0} has no identity")]
    MissingIdentity(String),
    #[error("identity of {0} is not an endomorphism there")]
    IdentityNotEndo(String),
    #[error("composite {g} o {f} has wrong endpoints")]
    CompositeEndpoints { g: String, f: String },
    #[error("associativity fails at ({h}, {g}, {f})")]
    Associativity { h: String, g: String, f: String },
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("{0}")]
    Structure(String),
}

#[derive(Clone)]
pub struct FinCat {
    name: String,
    obj_labels: Vec<String>,
    mor_labels: Vec<String>,
    src: Vec<u32>,
    tgt: Vec<u32>,
    ident: Vec<u32>,
    /// outgoing morphisms per object, sorted by (target, index)
    out: Vec<Vec<u32>>,
    /// incoming morphisms per object, sorted by index
    inc: Vec<Vec<u32>>,
    pos_in: Vec<u32>,
    offset: Vec<usize>,
    table: Vec<u32>,
    partial: bool,
    aut2: Option<Vec<u32>>,
    inverses: OnceLock<Vec<u32>>,
}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FinCat({}: {} objects, {} morphisms{})",
            self.name,
            self.n_obj(),
            self.n_mor(),
            if self.partial { ", partial" } else { "" }
        )
    }
}

pub struct CatBuilder {
    name: String,
    objs: Vec<String>,
    mors: Vec<(String, u32, u32)>,
    ident: Vec<u32>,
    aut2: Option<Vec<u32>>,
}

impl CatBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        CatBuilder { name: name.into(), objs: Vec::new(), mors: Vec::new(), ident: Vec::new(), aut2: None }
    }

    pub fn add_object(&mut self, label: impl Into<String>) -> usize {
        self.objs.push(label.into());
        self.ident.push(UNDEF);
        self.objs.len() - 1
    }

    /// Adds an object together with a fresh identity morphism.
    pub fn add_object_with_identity(&mut self, label: impl Into<String>) -> (usize, usize) {
        let label = label.into();
        let o = self.add_object(label.clone());
        let m = self.add_morphism(format!("id[{label}]"), o, o);
        self.ident[o] = m as u32;
        (o, m)
    }

    pub fn add_morphism(&mut self, label: impl Into<String>, s: usize, t: usize) -> usize {
        self.mors.push((label.into(), s as u32, t as u32));
        self.mors.len() - 1
    }

    pub fn set_identity(&mut self, o: usize, m: usize) {
        self.ident[o] = m as u32;
    }

    /// Order of the automorphism group of each morphism in its hom-groupoid,
    /// for homotopy categories of (2,1)-categories.
    pub fn set_two_cell_automorphisms(&mut self, aut: Vec<u32>) {
        self.aut2 = Some(aut);
    }

    pub fn n_obj(&self) -> usize {
        self.objs.len()
    }

    pub fn n_mor(&self) -> usize {
        self.mors.len()
    }

    pub fn morphism_src(&self, m: usize) -> usize {
        self.mors[m].1 as usize
    }

    pub fn morphism_tgt(&self, m: usize) -> usize {
        self.mors[m].2 as usize
    }

    /// Builds the table by calling `compose(g, f)` for each composable pair
    /// not involving an identity. `None` leaves the composite undefined.
    pub fn build_with<F>(self, mut compose: F) -> Result<FinCat, CatError>
    where
        F: FnMut(usize, usize) -> Option<usize>,
    {
        let n_obj = self.objs.len();
        let n_mor = self.mors.len();
        if n_obj > MAX_OBJECTS || n_mor > MAX_MORPHISMS {
            return Err(CatError::SizeCap(format!("{}: {} objects, {} morphisms", self.name, n_obj, n_mor)));
        }
        let src: Vec<u32> = self.mors.iter().map(|m| m.1).collect();
        let tgt: Vec<u32> = self.mors.iter().map(|m| m.2).collect();
        for (m, (_, s, t)) in self.mors.iter().enumerate() {
            if *s as usize >= n_obj || *t as usize >= n_obj {
                return Err(CatError::BadMorphism(m));
            }
        }
        for (o, &i) in self.ident.iter().enumerate() {
            if i == UNDEF {
                return Err(CatError::MissingIdentity(self.objs[o].clone()));
            }
            if i as usize >= n_mor || src[i as usize] as usize != o || tgt[i as usize] as usize != o {
                return Err(CatError::IdentityNotEndo(self.objs[o].clone()));
            }
        }
        let mut out: Vec<Vec<u32>> = vec![Vec::new(); n_obj];
        let mut inc: Vec<Vec<u32>> = vec![Vec::new(); n_obj];
        for m in 0..n_mor {
            out[src[m] as usize].push(m as u32);
            inc[tgt[m] as usize].push(m as u32);
        }
        for list in out.iter_mut() {
            list.sort_by_key(|&m| (tgt[m as usize], m));
        }
        let mut pos_in = vec![0u32; n_mor];
        for list in &inc {
            for (p, &m) in list.iter().enumerate() {
                pos_in[m as usize] = p as u32;
            }
        }
        let mut offset = vec![0usize; n_mor];
        let mut total = 0usize;
        for g in 0..n_mor {
            offset[g] = total;
            total += inc[src[g] as usize].len();
        }
        if total > 1 << 28 {
            return Err(CatError::SizeCap(format!("{}: composition table of {} entries", self.name, total)));
        }
        let mut table = vec![UNDEF; total];
        let mut partial = false;
        let is_id: Vec<bool> = {
            let mut v = vec![false; n_mor];
            for &i in &self.ident {
                v[i as usize] = true;
            }
            v
        };
        for g in 0..n_mor {
            let b = src[g] as usize;
            for (p, &f) in inc[b].iter().enumerate() {
                let f = f as usize;
                let value = if is_id[g] {
                    Some(f)
                } else if is_id[f] {
                    Some(g)
                } else {
                    compose(g, f)
                };
                match value {
                    Some(h) => {
                        if h >= n_mor || src[h] != src[f] || tgt[h] != tgt[g] {
                            return Err(CatError::CompositeEndpoints {
                                g: self.mors[g].0.clone(),
                                f: self.mors[f].0.clone(),
                            });
                        }
                        table[offset[g] + p] = h as u32;
                    }
                    None => partial = true,
                }
            }
        }
        if let Some(a) = &self.aut2 {
            if a.len() != n_mor {
                return Err(CatError::Structure("two-cell automorphism list has wrong length".into()));
            }
        }
        Ok(FinCat {
            name: self.name,
            obj_labels: self.objs,
            mor_labels: self.mors.into_iter().map(|m| m.0).collect(),
            src,
            tgt,
            ident: self.ident,
            out,
            inc,
            pos_in,
            offset,
            table,
            partial,
            aut2: self.aut2,
            inverses: OnceLock::new(),
        })
    }

    /// Builds from an explicit lookup of composites keyed by (g, f).
    pub fn build_from_map(self, table: &HashMap<(usize, usize), usize>) -> Result<FinCat, CatError> {
        self.build_with(|g, f| table.get(&(g, f)).copied())
    }
}

impl FinCat {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn n_obj(&self) -> usize {
        self.obj_labels.len()
    }

    pub fn n_mor(&self) -> usize {
        self.mor_labels.len()
    }

    pub fn obj_label(&self, o: usize) -> &str {
        &self.obj_labels[o]
    }

    pub fn mor_label(&self, m: usize) -> &str {
        &self.mor_labels[m]
    }

    pub fn obj_labels(&self) -> &[String] {
        &self.obj_labels
    }

    pub fn mor_labels(&self) -> &[String] {
        &self.mor_labels
    }

    #[inline]
    pub fn src(&self, m: usize) -> usize {
        self.src[m] as usize
    }

    #[inline]
    pub fn tgt(&self, m: usize) -> usize {
        self.tgt[m] as usize
    }

    #[inline]
    pub fn id(&self, o: usize) -> usize {
        self.ident[o] as usize
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.ident[self.src(m)] as usize == m
    }

    pub fn is_partial(&self) -> bool {
        self.partial
    }

    pub fn two_cell_automorphisms(&self, m: usize) -> u32 {
        self.aut2.as_ref().map_or(1, |a| a[m])
    }

    pub fn has_two_cells(&self) -> bool {
        self.aut2.as_ref().is_some_and(|a| a.iter().any(|&x| x > 1))
    }

    /// `g ∘ f`, or `None` when outside the stored truncation.
    #[inline]
    pub fn comp(&self, g: usize, f: usize) -> Option<usize> {
        debug_assert_eq!(self.tgt[f], self.src[g], "non-composable pair");
        let v = self.table[self.offset[g] + self.pos_in[f] as usize];
        if v == UNDEF {
            None
        } else {
            Some(v as usize)
        }
    }

    /// Composite of a path given in diagrammatic order (first map first).
    pub fn comp_path(&self, path: &[usize]) -> Option<usize> {
        let mut it = path.iter();
        let mut acc = *it.next()?;
        for &g in it {
            acc = self.comp(g, acc)?;
        }
        Some(acc)
    }

    pub fn out_of(&self, o: usize) -> &[u32] {
        &self.out[o]
    }

    pub fn incoming(&self, o: usize) -> &[u32] {
        &self.inc[o]
    }

    pub fn hom(&self, a: usize, b: usize) -> &[u32] {
        let list = &self.out[a];
        let lo = list.partition_point(|&m| (self.tgt[m as usize] as usize) < b);
        let hi = list.partition_point(|&m| (self.tgt[m as usize] as usize) <= b);
        &list[lo..hi]
    }

    pub fn objects(&self) -> std::ops::Range<usize> {
        0..self.n_obj()
    }

    pub fn morphisms(&self) -> std::ops::Range<usize> {
        0..self.n_mor()
    }

    pub fn find_object(&self, label: &str) -> Option<usize> {
        self.obj_labels.iter().position(|l| l == label)
    }

    pub fn find_morphism(&self, label: &str) -> Option<usize> {
        self.mor_labels.iter().position(|l| l == label)
    }

    fn inverse_table(&self) -> &Vec<u32> {
        self.inverses.get_or_init(|| {
            let mut inv = vec![UNDEF; self.n_mor()];
            for m in self.morphisms() {
                let (a, b) = (self.src(m), self.tgt(m));
                for &g in self.hom(b, a) {
                    let g = g as usize;
                    if self.comp(g, m) == Some(self.id(a)) && self.comp(m, g) == Some(self.id(b)) {
                        inv[m] = g as u32;
                        break;
                    }
                }
            }
            inv
        })
    }

    pub fn inverse(&self, m: usize) -> Option<usize> {
        let v = self.inverse_table()[m];
        (v != UNDEF).then_some(v as usize)
    }

    pub fn is_iso(&self, m: usize) -> bool {
        self.inverse(m).is_some()
    }

    pub fn isomorphic(&self, a: usize, b: usize) -> Option<usize> {
        self.hom(a, b).iter().map(|&m| m as usize).find(|&m| self.is_iso(m))
    }

    pub fn is_groupoid(&self) -> bool {
        self.morphisms().all(|m| self.is_iso(m))
    }

    pub fn is_thin(&self) -> bool {
        self.objects().all(|a| {
            let o = &self.out[a];
            o.windows(2).all(|w| self.tgt[w[0] as usize] != self.tgt[w[1] as usize])
        })
    }

    /// Thin and antisymmetric: a finite poset.
    pub fn is_poset(&self) -> bool {
        self.is_thin() && self.morphisms().all(|m| self.src(m) == self.tgt(m) || self.hom(self.tgt(m), self.src(m)).is_empty())
    }

    /// Every composable triple with both bracketings defined agrees.
    pub fn check_associativity(&self) -> Result<(), CatError> {
        for f in self.morphisms() {
            for &g in self.out_of(self.tgt(f)) {
                let g = g as usize;
                let Some(gf) = self.comp(g, f) else { continue };
                for &h in self.out_of(self.tgt(g)) {
                    let h = h as usize;
                    let left = self.comp(h, gf);
                    let right = self.comp(h, g).and_then(|hg| self.comp(hg, f));
                    if let (Some(l), Some(r)) = (left, right) {
                        if l != r {
                            return Err(CatError::Associativity {
                                h: self.mor_label(h).into(),
                                g: self.mor_label(g).into(),
                                f: self.mor_label(f).into(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Full validation: identities are two-sided units and composition is
    /// associative wherever defined.
    pub fn validate(&self) -> Result<(), CatError> {
        for o in self.objects() {
            let i = self.id(o);
            for &f in self.incoming(o) {
                if self.comp(i, f as usize) != Some(f as usize) {
                    return Err(CatError::Structure(format!("left unit fails at {}", self.mor_label(f as usize))));
                }
            }
            for &g in self.out_of(o) {
                if self.comp(g as usize, i) != Some(g as usize) {
                    return Err(CatError::Structure(format!("right unit fails at {}", self.mor_label(g as usize))));
                }
            }
        }
        self.check_associativity()
    }

    /// Copies the category, renaming every morphism and object.
    pub fn relabeled(&self, obj: impl Fn(usize) -> String, mor: impl Fn(usize) -> String) -> FinCat {
        let mut c = self.clone();
        c.obj_labels = self.objects().map(obj).collect();
        c.mor_labels = self.morphisms().map(mor).collect();
        c
    }

    /// Reassembles the category with objects and morphisms permuted.
    /// `obj_perm[new] = old`, `mor_perm[new] = old`.
    pub fn permuted(&self, obj_perm: &[usize], mor_perm: &[usize]) -> FinCat {
        let mut obj_new = vec![0; self.n_obj()];
        for (n, &o) in obj_perm.iter().enumerate() {
            obj_new[o] = n;
        }
        let mut mor_new = vec![0; self.n_mor()];
        for (n, &m) in mor_perm.iter().enumerate() {
            mor_new[m] = n;
        }
        let mut b = CatBuilder::new(self.name.clone());
        for &o in obj_perm {
            b.add_object(self.obj_label(o));
        }
        for &m in mor_perm {
            b.add_morphism(self.mor_label(m), obj_new[self.src(m)], obj_new[self.tgt(m)]);
        }
        for o in self.objects() {
            b.set_identity(obj_new[o], mor_new[self.id(o)]);
        }
        if let Some(a) = &self.aut2 {
            b.set_two_cell_automorphisms(mor_perm.iter().map(|&m| a[m]).collect());
        }
        b.build_with(|g, f| self.comp(mor_perm[g], mor_perm[f]).map(|h| mor_new[h]))
            .expect("permutation of a valid category")
    }

    pub fn opposite(&self) -> FinCat {
        let mut b = CatBuilder::new(format!("{}^op", self.name));
        for o in self.objects() {
            b.add_object(self.obj_label(o));
        }
        for m in self.morphisms() {
            b.add_morphism(format!("{}^op", self.mor_label(m)), self.tgt(m), self.src(m));
        }
        for o in self.objects() {
            b.set_identity(o, self.id(o));
        }
        if let Some(a) = &self.aut2 {
            b.set_two_cell_automorphisms(a.clone());
        }
        b.build_with(|g, f| self.comp(f, g)).expect("opposite of a valid category")
    }

    /// Full subcategory on the listed objects (in the listed order).
    /// Returns the category and the map from its morphisms to ours.
    pub fn full_subcategory(&self, objs: &[usize], name: impl Into<String>) -> (FinCat, Vec<usize>) {
        let mut local = vec![UNDEF; self.n_obj()];
        for (i, &o) in objs.iter().enumerate() {
            local[o] = i as u32;
        }
        let mut b = CatBuilder::new(name);
        for &o in objs {
            b.add_object(self.obj_label(o));
        }
        let mut mor_map = Vec::new();
        let mut back = HashMap::new();
        for &a in objs {
            for &m in self.out_of(a) {
                let t = self.tgt(m as usize);
                if local[t] != UNDEF {
                    let nm = b.add_morphism(self.mor_label(m as usize), local[a] as usize, local[t] as usize);
                    back.insert(m as usize, nm);
                    mor_map.push(m as usize);
                }
            }
        }
        for &o in objs {
            b.set_identity(local[o] as usize, back[&self.id(o)]);
        }
        if let Some(a) = &self.aut2 {
            b.set_two_cell_automorphisms(mor_map.iter().map(|&m| a[m]).collect());
        }
        let cat = b
            .build_with(|g, f| self.comp(mor_map[g], mor_map[f]).map(|h| back[&h]))
            .expect("full subcategory of a valid category");
        (cat, mor_map)
    }

    /// Subcategory on flagged objects and morphisms. Fails if the flags are
    /// not closed under identities or defined composites.
    pub fn subcategory(
        &self,
        keep_obj: &[bool],
        keep_mor: &[bool],
        name: impl Into<String>,
    ) -> Result<(FinCat, Vec<usize>, Vec<usize>), CatError> {
        let objs: Vec<usize> = self.objects().filter(|&o| keep_obj[o]).collect();
        let mut local = vec![UNDEF; self.n_obj()];
        for (i, &o) in objs.iter().enumerate() {
            local[o] = i as u32;
        }
        let mut b = CatBuilder::new(name);
        for &o in &objs {
            b.add_object(self.obj_label(o));
        }
        let mut mor_map = Vec::new();
        let mut back = HashMap::new();
        for m in self.morphisms() {
            if !keep_mor[m] {
                continue;
            }
            let (s, t) = (self.src(m), self.tgt(m));
            if local[s] == UNDEF || local[t] == UNDEF {
                return Err(CatError::Structure(format!("morphism {} leaves the object set", self.mor_label(m))));
            }
            let nm = b.add_morphism(self.mor_label(m), local[s] as usize, local[t] as usize);
            back.insert(m, nm);
            mor_map.push(m);
        }
        for &o in &objs {
            let i = self.id(o);
            match back.get(&i) {
                Some(&nm) => b.set_identity(local[o] as usize, nm),
                None => return Err(CatError::MissingIdentity(self.obj_label(o).into())),
            }
        }
        if let Some(a) = &self.aut2 {
            b.set_two_cell_automorphisms(mor_map.iter().map(|&m| a[m]).collect());
        }
        let mut bad = None;
        let cat = b.build_with(|g, f| match self.comp(mor_map[g], mor_map[f]) {
            Some(h) => match back.get(&h) {
                Some(&nh) => Some(nh),
                None => {
                    bad.get_or_insert((mor_map[g], mor_map[f]));
                    None
                }
            },
            None => None,
        })?;
        if let Some((g, f)) = bad {
            return Err(CatError::Structure(format!(
                "flagged morphisms not closed: {} o {}",
                self.mor_label(g),
                self.mor_label(f)
            )));
        }
        Ok((cat, objs, mor_map))
    }

    /// Representatives of isomorphism classes (smallest index in each class)
    /// and, for each object, its representative and a chosen iso to it.
    pub fn iso_classes(&self) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let mut rep = vec![usize::MAX; self.n_obj()];
        let mut to_rep = vec![usize::MAX; self.n_obj()];
        let mut reps = Vec::new();
        for o in self.objects() {
            if rep[o] != usize::MAX {
                continue;
            }
            reps.push(o);
            rep[o] = o;
            to_rep[o] = self.id(o);
            for p in o + 1..self.n_obj() {
                if rep[p] == usize::MAX {
                    if let Some(m) = self.isomorphic(p, o) {
                        rep[p] = o;
                        to_rep[p] = m;
                    }
                }
            }
        }
        (reps, rep, to_rep)
    }

    /// Full subcategory on one object per isomorphism class.
    pub fn skeleton(&self) -> (FinCat, Vec<usize>) {
        let (reps, _, _) = self.iso_classes();
        let (cat, _) = self.full_subcategory(&reps, format!("sk({})", self.name));
        (cat, reps)
    }

    /// Connected components of the underlying graph; component id per object.
    pub fn components(&self) -> Vec<usize> {
        let n = self.n_obj();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for m in self.morphisms() {
            let a = find(&mut parent, self.src(m));
            let b = find(&mut parent, self.tgt(m));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut ids = vec![usize::MAX; n];
        let mut next = 0;
        let mut out = vec![0; n];
        for o in 0..n {
            let r = find(&mut parent, o);
            if ids[r] == usize::MAX {
                ids[r] = next;
                next += 1;
            }
            out[o] = ids[r];
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n_obj() > 0 && self.components().iter().all(|&c| c == 0)
    }

    /// An object with exactly one morphism to every object.
    pub fn initial_object(&self) -> Option<usize> {
        self.objects().find(|&a| self.objects().all(|b| self.hom(a, b).len() == 1))
    }

    pub fn terminal_object(&self) -> Option<usize> {
        self.objects().find(|&b| self.objects().all(|a| self.hom(a, b).len() == 1))
    }

    /// Order of the automorphism group of `o`.
    pub fn automorphism_count(&self, o: usize) -> usize {
        self.hom(o, o).iter().filter(|&&m| self.is_iso(m as usize)).count()
    }
}

// Small standard categories.

pub fn terminal_cat() -> FinCat {
    let mut b = CatBuilder::new("pt");
    b.add_object_with_identity("*");
    b.build_with(|_, _| None).unwrap()
}

pub fn empty_cat() -> FinCat {
    CatBuilder::new("empty").build_with(|_, _| None).unwrap()
}

pub fn discrete_cat(n: usize) -> FinCat {
    let mut b = CatBuilder::new(format!("disc{n}"));
    for i in 0..n {
        b.add_object_with_identity(format!("{i}"));
    }
    b.build_with(|_, _| None).unwrap()
}

/// Poset on `0..n` from a reflexive-transitive relation `leq(a, b)`.
pub fn poset_cat(n: usize, leq: impl Fn(usize, usize) -> bool, name: impl Into<String>) -> FinCat {
    let mut b = CatBuilder::new(name);
    for i in 0..n {
        b.add_object(format!("{i}"));
    }
    let mut idx = HashMap::new();
    for x in 0..n {
        for y in 0..n {
            if x == y || leq(x, y) {
                let m = b.add_morphism(format!("{x}<={y}"), x, y);
                idx.insert((x, y), m);
                if x == y {
                    b.set_identity(x, m);
                }
            }
        }
    }
    let ends: Vec<(usize, usize)> = (0..b.n_mor()).map(|m| (b.morphism_src(m), b.morphism_tgt(m))).collect();
    b.build_with(|g, f| idx.get(&(ends[f].0, ends[g].1)).copied()).unwrap()
}

/// One-object category of a finite monoid with multiplication `mul(g, f)`
/// meaning "g after f"; element 0 must be the unit.
pub fn monoid_cat(n: usize, mul: impl Fn(usize, usize) -> usize, name: impl Into<String>) -> FinCat {
    let mut b = CatBuilder::new(name);
    b.add_object("*");
    for i in 0..n {
        b.add_morphism(format!("m{i}"), 0, 0);
    }
    b.set_identity(0, 0);
    b.build_with(|g, f| Some(mul(g, f))).unwrap()
}

/// `a -> b` with one non-identity morphism.
pub fn walking_arrow() -> FinCat {
    poset_cat(2, |a, b| a <= b, "arrow")
}

/// Two objects, mutually inverse morphisms between them.
pub fn walking_iso() -> FinCat {
    let mut b = CatBuilder::new("iso");
    let (a, ia) = b.add_object_with_identity("a");
    let (c, ic) = b.add_object_with_identity("b");
    let f = b.add_morphism("f", a, c);
    let g = b.add_morphism("g", c, a);
    b.build_with(|x, y| match (x, y) {
        _ if x == g && y == f => Some(ia),
        _ if x == f && y == g => Some(ic),
        _ => None,
    })
    .unwrap()
}

pub fn product_cat(c: &FinCat, d: &FinCat) -> (FinCat, Vec<(usize, usize)>, Vec<(usize, usize)>) {
    let mut b = CatBuilder::new(format!("{}x{}", c.name(), d.name()));
    let mut objs = Vec::new();
    for x in c.objects() {
        for y in d.objects() {
            b.add_object(format!("({},{})", c.obj_label(x), d.obj_label(y)));
            objs.push((x, y));
        }
    }
    let nd = d.n_obj();
    let mut mors = Vec::new();
    let mut idx = HashMap::new();
    for f in c.morphisms() {
        for g in d.morphisms() {
            let m = b.add_morphism(
                format!("({},{})", c.mor_label(f), d.mor_label(g)),
                c.src(f) * nd + d.src(g),
                c.tgt(f) * nd + d.tgt(g),
            );
            idx.insert((f, g), m);
            mors.push((f, g));
        }
    }
    for (o, &(x, y)) in objs.iter().enumerate() {
        b.set_identity(o, idx[&(c.id(x), d.id(y))]);
    }
    let cat = b
        .build_with(|p, q| {
            let (f2, g2) = mors[p];
            let (f1, g1) = mors[q];
            Some(idx[&(c.comp(f2, f1)?, d.comp(g2, g1)?)])
        })
        .unwrap();
    (cat, objs, mors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_categories_validate() {
        for c in [terminal_cat(), walking_arrow(), walking_iso(), discrete_cat(3)] {
            c.validate().unwrap();
        }
        let z2 = monoid_cat(2, |a, b| a ^ b, "Z2");
        z2.validate().unwrap();
        assert!(z2.is_groupoid());
    }

    #[test]
    fn hom_lookup_and_inverses() {
        let c = walking_iso();
        assert_eq!(c.hom(0, 1).len(), 1);
        assert!(c.is_groupoid());
        let a = walking_arrow();
        assert!(!a.is_groupoid());
        assert_eq!(a.initial_object(), Some(0));
        assert_eq!(a.terminal_object(), Some(1));
    }

    #[test]
    fn opposite_is_involutive_on_counts() {
        let a = walking_arrow().opposite();
        a.validate().unwrap();
        assert_eq!(a.initial_object(), Some(1));
    }

    #[test]
    fn broken_table_detected() {
        // two non-identity endomorphisms composed non-associatively
        let mut b = CatBuilder::new("bad");
        let (o, i) = b.add_object_with_identity("*");
        let x = b.add_morphism("x", o, o);
        let y = b.add_morphism("y", o, o);
        let c = b
            .build_with(|g, f| match (g, f) {
                (g, f) if g == x && f == x => Some(y),
                (g, f) if g == x && f == y => Some(i),
                (g, f) if g == y && f == x => Some(y),
                _ => Some(y),
            })
            .unwrap();
        assert!(c.validate().is_err());
    }

    #[test]
    fn product_and_skeleton() {
        let (p, _, _) = product_cat(&walking_arrow(), &walking_iso());
        p.validate().unwrap();
        assert_eq!(p.n_obj(), 4);
        let (s, reps) = p.skeleton();
        assert_eq!(s.n_obj(), 2);
        assert_eq!(reps.len(), 2);
    }
}
