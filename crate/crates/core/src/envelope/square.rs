//! Deciding whether a square of finite categories is cartesian, by counting
//! in the iso-comma instead of building it.

use std::collections::{HashMap, HashSet};

use crate::fincat::Functor;
use crate::verdict::Verdict;

pub const METHOD: &str = "comparison into the iso-comma is an equivalence";

/// ```text
///   A --top--> B
///   |          |
///  left      right
///   v          v
///   C -bottom-> D
/// ```
/// with `iota[a]: bottom(left a) -> right(top a)` an isomorphism, natural in `a`.
pub struct Square<'a> {
    pub top: &'a Functor,
    pub left: &'a Functor,
    pub right: &'a Functor,
    pub bottom: &'a Functor,
    pub iota: Vec<usize>,
}

impl Square<'_> {
    fn natural(&self) -> Option<String> {
        let (a, d) = (&self.top.source, &self.right.target);
        for x in a.objects() {
            if !d.is_iso(self.iota[x]) {
                return Some(format!("comparison at {} is not invertible", a.obj_label(x)));
            }
        }
        for m in a.morphisms() {
            let (x, y) = (a.src(m), a.tgt(m));
            let lhs = d.comp(self.iota[y], self.bottom.mor(self.left.mor(m)));
            let rhs = d.comp(self.right.mor(self.top.mor(m)), self.iota[x]);
            if lhs.is_none() || lhs != rhs {
                return Some(format!("square does not commute at {}", a.mor_label(m)));
            }
        }
        None
    }

    fn fully_faithful(&self) -> Option<String> {
        let (a, b, c, d) = (&self.top.source, &self.top.target, &self.left.target, &self.right.target);
        for x in a.objects() {
            for y in a.objects() {
                let hom = a.hom(x, y);
                let mut seen = HashSet::new();
                for &m in hom {
                    if !seen.insert((self.left.mor(m as usize), self.top.mor(m as usize))) {
                        return Some(format!("not faithful on {} -> {}", a.obj_label(x), a.obj_label(y)));
                    }
                }
                let mut right_side: HashMap<usize, usize> = HashMap::new();
                for &v in b.hom(self.top.obj(x), self.top.obj(y)) {
                    if let Some(r) = d.comp(self.right.mor(v as usize), self.iota[x]) {
                        *right_side.entry(r).or_default() += 1;
                    }
                }
                let pairs: usize = c
                    .hom(self.left.obj(x), self.left.obj(y))
                    .iter()
                    .filter_map(|&u| d.comp(self.iota[y], self.bottom.mor(u as usize)))
                    .map(|l| right_side.get(&l).copied().unwrap_or(0))
                    .sum();
                if pairs != hom.len() {
                    return Some(format!(
                        "not full on {} -> {}: {} maps in the pullback, {} upstairs",
                        a.obj_label(x),
                        a.obj_label(y),
                        pairs,
                        hom.len()
                    ));
                }
            }
        }
        None
    }

    fn essentially_surjective(&self) -> Option<String> {
        let (a, b, c, d) = (&self.top.source, &self.top.target, &self.left.target, &self.right.target);
        let (c_reps, c_rep, _) = c.iso_classes();
        let (b_reps, b_rep, _) = b.iso_classes();
        let mut by_class: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for x in a.objects() {
            by_class.entry((c_rep[self.left.obj(x)], b_rep[self.top.obj(x)])).or_default().push(x);
        }
        for &cc in &c_reps {
            for &bb in &b_reps {
                let isos: Vec<usize> =
                    d.hom(self.bottom.obj(cc), self.right.obj(bb)).iter().map(|&e| e as usize).filter(|&e| d.is_iso(e)).collect();
                if isos.is_empty() {
                    continue;
                }
                let candidates = by_class.get(&(cc, bb)).map_or(&[][..], |v| v.as_slice());
                for &e in &isos {
                    let hit = candidates.iter().any(|&x| {
                        let reachable: HashSet<usize> = b
                            .hom(self.top.obj(x), bb)
                            .iter()
                            .map(|&v| v as usize)
                            .filter(|&v| b.is_iso(v))
                            .filter_map(|v| d.comp(self.right.mor(v), self.iota[x]))
                            .collect();
                        c.hom(self.left.obj(x), cc)
                            .iter()
                            .map(|&u| u as usize)
                            .filter(|&u| c.is_iso(u))
                            .any(|u| d.comp(e, self.bottom.mor(u)).is_some_and(|l| reachable.contains(&l)))
                    });
                    if !hit {
                        return Some(format!(
                            "({}, {}, {}) is not in the essential image",
                            c.obj_label(cc),
                            b.obj_label(bb),
                            d.mor_label(e)
                        ));
                    }
                }
            }
        }
        None
    }

    pub fn verdict(&self) -> Verdict {
        if let Some(w) = self.natural() {
            return Verdict::unknown(METHOD, w);
        }
        if let Some(w) = self.fully_faithful().or_else(|| self.essentially_surjective()) {
            return Verdict::fails(METHOD, w);
        }
        Verdict::holds(METHOD)
    }
}
