//! Set-valued diagrams on finite categories and their limits.

use std::collections::HashMap;
use std::sync::Arc;

use super::cat::{CatError, FinCat};
use super::functor::Functor;

/// A functor from `index` to finite sets. Element sets are `0..sizes[i]`.
#[derive(Clone, Debug)]
pub struct FinSetDiagram {
    pub index: Arc<FinCat>,
    pub sizes: Vec<usize>,
    /// `maps[m][x]` is the image of `x` under the function at morphism `m`
    pub maps: Vec<Vec<u32>>,
}

impl FinSetDiagram {
    pub fn new(index: Arc<FinCat>, sizes: Vec<usize>, maps: Vec<Vec<u32>>) -> Result<Self, CatError> {
        let d = FinSetDiagram { index, sizes, maps };
        d.validate()?;
        Ok(d)
    }

    pub fn constant(index: Arc<FinCat>, size: usize) -> Self {
        let sizes = vec![size; index.n_obj()];
        let maps = vec![(0..size as u32).collect(); index.n_mor()];
        FinSetDiagram { index, sizes, maps }
    }

    pub fn validate(&self) -> Result<(), CatError> {
        let c = &self.index;
        if self.sizes.len() != c.n_obj() || self.maps.len() != c.n_mor() {
            return Err(CatError::Structure("diagram shape does not match index".into()));
        }
        for m in c.morphisms() {
            let (s, t) = (c.src(m), c.tgt(m));
            if self.maps[m].len() != self.sizes[s] || self.maps[m].iter().any(|&y| y as usize >= self.sizes[t]) {
                return Err(CatError::Structure(format!("function at {} has wrong domain or codomain", c.mor_label(m))));
            }
        }
        for o in c.objects() {
            if self.maps[c.id(o)].iter().enumerate().any(|(x, &y)| x as u32 != y) {
                return Err(CatError::Structure(format!("identity at {} is not sent to the identity", c.obj_label(o))));
            }
        }
        for f in c.morphisms() {
            for &g in c.out_of(c.tgt(f)) {
                let g = g as usize;
                if let Some(gf) = c.comp(g, f) {
                    for x in 0..self.sizes[c.src(f)] {
                        if self.maps[g][self.maps[f][x] as usize] != self.maps[gf][x] {
                            return Err(CatError::Structure(format!(
                                "diagram not functorial at {} o {}",
                                c.mor_label(g),
                                c.mor_label(f)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Precomposition with a functor into the index.
    pub fn restrict(&self, f: &Functor) -> FinSetDiagram {
        FinSetDiagram {
            index: f.source.clone(),
            sizes: f.source.objects().map(|o| self.sizes[f.obj(o)]).collect(),
            maps: f.source.morphisms().map(|m| self.maps[f.mor(m)].clone()).collect(),
        }
    }

    #[inline]
    pub fn apply(&self, m: usize, x: usize) -> usize {
        self.maps[m][x] as usize
    }
}

/// Compatible families, in the order produced by the search.
#[derive(Clone, Debug)]
pub struct FinSetLimit {
    pub families: Vec<Vec<u32>>,
    lookup: HashMap<Vec<u32>, usize>,
}

impl FinSetLimit {
    pub fn len(&self) -> usize {
        self.families.len()
    }

    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }

    pub fn find(&self, family: &[u32]) -> Option<usize> {
        self.lookup.get(family).copied()
    }

    /// Projection of family `i` to index object `o`.
    pub fn project(&self, i: usize, o: usize) -> usize {
        self.families[i][o] as usize
    }
}

/// Objects in an order that maximises forced choices: after the first object
/// of each component, prefer objects with a morphism from an earlier one.
fn search_order(c: &FinCat) -> Vec<usize> {
    let n = c.n_obj();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n)
            .filter(|&o| !placed[o])
            .max_by_key(|&o| {
                let forced = c.incoming(o).iter().any(|&m| placed[c.src(m as usize)] && c.src(m as usize) != o);
                let links = c.incoming(o).iter().filter(|&&m| placed[c.src(m as usize)]).count()
                    + c.out_of(o).iter().filter(|&&m| placed[c.tgt(m as usize)]).count();
                (forced, links, std::cmp::Reverse(o))
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    order
}

/// Set of families `(x_i)` with `D(f)(x_i) = x_j` for every morphism.
pub fn finset_limit(d: &FinSetDiagram) -> FinSetLimit {
    let c = &d.index;
    let order = search_order(c);
    let mut rank = vec![0; c.n_obj()];
    for (r, &o) in order.iter().enumerate() {
        rank[o] = r;
    }
    // constraints checked when the later endpoint is assigned
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); c.n_obj()];
    let mut forcing: Vec<Option<usize>> = vec![None; c.n_obj()];
    for m in c.morphisms() {
        if c.is_identity(m) {
            continue;
        }
        let (s, t) = (c.src(m), c.tgt(m));
        let later = if rank[s] >= rank[t] { s } else { t };
        if rank[s] < rank[t] && forcing[t].is_none() {
            forcing[t] = Some(m);
        }
        checks[later].push(m);
    }
    let mut families = Vec::new();
    let mut current = vec![u32::MAX; c.n_obj()];
    fn rec(
        d: &FinSetDiagram,
        order: &[usize],
        k: usize,
        checks: &[Vec<usize>],
        forcing: &[Option<usize>],
        current: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if k == order.len() {
            out.push(current.clone());
            return;
        }
        let o = order[k];
        let c = &d.index;
        let candidates: Vec<u32> = match forcing[o] {
            Some(m) => vec![d.maps[m][current[c.src(m)] as usize]],
            None => (0..d.sizes[o] as u32).collect(),
        };
        for x in candidates {
            current[o] = x;
            let ok = checks[o].iter().all(|&m| d.maps[m][current[c.src(m)] as usize] == current[c.tgt(m)]);
            if ok {
                rec(d, order, k + 1, checks, forcing, current, out);
            }
        }
        current[o] = u32::MAX;
    }
    rec(d, &order, 0, &checks, &forcing, &mut current, &mut families);
    families.sort();
    let lookup = families.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
    FinSetLimit { families, lookup }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::cat::*;

    #[test]
    fn discrete_product() {
        let idx = Arc::new(discrete_cat(3));
        let d = FinSetDiagram::new(idx, vec![2, 3, 4], vec![vec![0, 1], vec![0, 1, 2], vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(finset_limit(&d).len(), 24);
    }

    #[test]
    fn walking_arrow_limit_is_source() {
        let idx = Arc::new(walking_arrow());
        // morphisms: 0<=0, 0<=1, 1<=1
        let d = FinSetDiagram::new(idx, vec![2, 1], vec![vec![0, 1], vec![0, 0], vec![0]]).unwrap();
        assert_eq!(finset_limit(&d).len(), 2);
    }

    #[test]
    fn equalizer_of_identity_and_swap_is_empty() {
        let mut b = CatBuilder::new("par");
        let (a, _) = b.add_object_with_identity("a");
        let (z, _) = b.add_object_with_identity("b");
        b.add_morphism("f", a, z);
        b.add_morphism("g", a, z);
        let idx = Arc::new(b.build_with(|_, _| None).unwrap());
        let d = FinSetDiagram::new(idx, vec![2, 2], vec![vec![0, 1], vec![0, 1], vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(finset_limit(&d).len(), 0);
    }

    #[test]
    fn empty_index_gives_singleton() {
        let d = FinSetDiagram::constant(Arc::new(empty_cat()), 3);
        assert_eq!(finset_limit(&d).len(), 1);
    }

    #[test]
    fn non_functorial_rejected() {
        let z2 = Arc::new(monoid_cat(2, |a, b| a ^ b, "Z2"));
        // the non-identity element acts by a constant map, which does not square to the identity
        assert!(FinSetDiagram::new(z2, vec![2], vec![vec![0, 1], vec![0, 0]]).is_err());
    }
}
