//! Fundamental group presentations of nerves and Tietze simplification.

use crate::fincat::FinCat;

/// Words are sequences of nonzero integers: `g+1` for a generator, `-(g+1)`
/// for its inverse.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub generators: usize,
    pub relations: Vec<Vec<i32>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pi1Outcome {
    Trivial,
    /// all relations eliminated, free group of this rank remains
    Free(usize),
    Undecided { generators: usize, relations: usize },
}

/// Presentation of the fundamental group of the nerve of a connected
/// category from its 2-skeleton: one generator per non-identity morphism
/// outside a spanning tree, one relation `f·g = g∘f` per composable pair.
pub fn nerve_presentation(c: &FinCat) -> Option<Presentation> {
    let n = c.n_obj();
    let non_id: Vec<usize> = c.morphisms().filter(|&m| !c.is_identity(m)).collect();
    let mut gen_of = vec![usize::MAX; c.n_mor()];
    // spanning tree by breadth-first search on the underlying graph
    let mut seen = vec![false; n];
    let mut in_tree = vec![false; c.n_mor()];
    if n == 0 {
        return None;
    }
    seen[0] = true;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(o) = queue.pop_front() {
        let neighbours = c.out_of(o).iter().chain(c.incoming(o).iter());
        for &m in neighbours {
            let m = m as usize;
            if c.is_identity(m) {
                continue;
            }
            let other = if c.src(m) == o { c.tgt(m) } else { c.src(m) };
            if !seen[other] {
                seen[other] = true;
                in_tree[m] = true;
                queue.push_back(other);
            }
        }
    }
    let mut gens = 0;
    for &m in &non_id {
        if !in_tree[m] {
            gen_of[m] = gens;
            gens += 1;
        }
    }
    let letter = |m: usize, sign: i32| -> Option<i32> {
        if c.is_identity(m) || in_tree[m] {
            None
        } else {
            Some(sign * (gen_of[m] as i32 + 1))
        }
    };
    let mut relations = Vec::new();
    for &f in &non_id {
        for &g in c.out_of(c.tgt(f)) {
            let g = g as usize;
            if c.is_identity(g) {
                continue;
            }
            let gf = c.comp(g, f)?;
            let word: Vec<i32> = [letter(f, 1), letter(g, 1), letter(gf, -1)].into_iter().flatten().collect();
            relations.push(word);
        }
    }
    Some(Presentation { generators: gens, relations })
}

fn free_reduce(w: &mut Vec<i32>) {
    let mut out: Vec<i32> = Vec::with_capacity(w.len());
    for &x in w.iter() {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    // cyclic reduction
    let mut lo = 0;
    let mut hi = out.len();
    while hi - lo >= 2 && out[lo] == -out[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    *w = out[lo..hi].to_vec();
}

fn inverse(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|&x| -x).collect()
}

/// Eliminates generators that occur exactly once in some relation, until
/// the group is visibly trivial or free, or nothing applies. `budget` caps
/// the total length of all relations.
pub fn simplify(p: &Presentation, budget: usize) -> Pi1Outcome {
    let mut alive = vec![true; p.generators];
    let mut rels: Vec<Vec<i32>> = p.relations.clone();
    loop {
        for r in rels.iter_mut() {
            free_reduce(r);
        }
        rels.retain(|r| !r.is_empty());
        rels.sort_by_key(|r| r.len());
        rels.dedup();
        let live = alive.iter().filter(|&&a| a).count();
        if live == 0 {
            return Pi1Outcome::Trivial;
        }
        if rels.is_empty() {
            return Pi1Outcome::Free(live);
        }
        let total: usize = rels.iter().map(|r| r.len()).sum();
        if total > budget {
            return Pi1Outcome::Undecided { generators: live, relations: rels.len() };
        }
        // shortest relation containing a generator exactly once
        let mut pick = None;
        'outer: for (ri, r) in rels.iter().enumerate() {
            for &x in r {
                let g = x.unsigned_abs();
                if r.iter().filter(|&&y| y.unsigned_abs() == g).count() == 1 {
                    pick = Some((ri, x));
                    break 'outer;
                }
            }
        }
        let Some((ri, x)) = pick else {
            return Pi1Outcome::Undecided { generators: live, relations: rels.len() };
        };
        let r = rels.remove(ri);
        let pos = r.iter().position(|&y| y == x).unwrap();
        let (u, v) = (&r[..pos], &r[pos + 1..]);
        // u x v = 1  =>  x = u^-1 v^-1 ; u x^-1 v = 1  =>  x = v u
        let replacement: Vec<i32> = if x > 0 {
            let mut w = inverse(u);
            w.extend(inverse(v));
            w
        } else {
            let mut w = v.to_vec();
            w.extend_from_slice(u);
            w
        };
        let g = x.unsigned_abs() as i32;
        let rep_inv = inverse(&replacement);
        for other in rels.iter_mut() {
            let mut nw = Vec::with_capacity(other.len());
            for &y in other.iter() {
                if y == g {
                    nw.extend_from_slice(&replacement);
                } else if y == -g {
                    nw.extend_from_slice(&rep_inv);
                } else {
                    nw.push(y);
                }
            }
            *other = nw;
        }
        alive[(g - 1) as usize] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::poset_cat;

    #[test]
    fn circle_is_free_of_rank_one() {
        let c = poset_cat(4, |p, q| p == q || (p < 2 && q >= 2), "circle");
        let p = nerve_presentation(&c).unwrap();
        assert_eq!(simplify(&p, 10_000), Pi1Outcome::Free(1));
    }

    #[test]
    fn cone_is_trivial() {
        let c = poset_cat(5, |p, q| p == q || (p < 2 && q >= 2) || q == 4, "cone");
        let p = nerve_presentation(&c).unwrap();
        assert_eq!(simplify(&p, 10_000), Pi1Outcome::Trivial);
    }

    #[test]
    fn relator_words() {
        // <a | a a> is not simplifiable by single-occurrence elimination
        let p = Presentation { generators: 1, relations: vec![vec![1, 1]] };
        assert!(matches!(simplify(&p, 100), Pi1Outcome::Undecided { .. }));
    }
}
