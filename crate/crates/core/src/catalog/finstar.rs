//! Pointed finite sets `⟨0⟩..⟨k⟩` and truncated simplex categories.

use std::collections::HashMap;
use std::sync::Arc;

use crate::fincat::{CatBuilder, FinCat};
use crate::pattern::{AlgebraicPattern, Truncation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// elementary objects `⟨1⟩` (resp. `[1]`)
    Flat,
    /// elementary objects `⟨0⟩, ⟨1⟩` (resp. `[0], [1]`)
    Natural,
}

/// Label of the pointed map `⟨m⟩ -> ⟨n⟩` with `i ↦ f[i-1]` (0 is the base
/// point).
pub fn pointed_map_label(m: usize, n: usize, f: &[u8]) -> String {
    format!("<{m}>-><{n}>:[{}]", f.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn all_functions(m: usize, n: usize) -> Vec<Vec<u8>> {
    // functions {1..m} -> {0..n}
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u8>| {
                (0..=n as u8).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Category of pointed finite sets of size at most `k` (plus base point),
/// morphisms given by a predicate on the fiber sizes over non-base points.
pub(crate) fn pointed_sets_with(k: usize, name: &str, keep: impl Fn(&[u8], usize) -> bool) -> (FinCat, Vec<(usize, usize, Vec<u8>)>) {
    let mut b = CatBuilder::new(name);
    for n in 0..=k {
        b.add_object(format!("<{n}>"));
    }
    let mut data = Vec::new();
    let mut lookup: HashMap<(usize, usize, Vec<u8>), usize> = HashMap::new();
    for m in 0..=k {
        for n in 0..=k {
            for f in all_functions(m, n) {
                if !keep(&f, n) {
                    continue;
                }
                let id = b.add_morphism(pointed_map_label(m, n, &f), m, n);
                if m == n && f.iter().enumerate().all(|(i, &x)| x as usize == i + 1) {
                    b.set_identity(m, id);
                }
                lookup.insert((m, n, f.clone()), id);
                data.push((m, n, f));
            }
        }
    }
    let cat = b
        .build_with(|g, f| {
            let (m, _, ff) = &data[f];
            let (_, p, gg) = &data[g];
            let h: Vec<u8> = ff.iter().map(|&x| if x == 0 { 0 } else { gg[x as usize - 1] }).collect();
            lookup.get(&(*m, *p, h)).copied()
        })
        .expect("pointed maps compose");
    (cat, data)
}

pub fn fiber_sizes(f: &[u8], n: usize) -> Vec<usize> {
    let mut s = vec![0; n + 1];
    for &x in f {
        s[x as usize] += 1;
    }
    s
}

/// `𝔽*^{≤k}`: inert maps have exactly one preimage over each non-base
/// point, active maps send nothing to the base point.
pub fn fin_star(k: usize, flavor: Flavor) -> AlgebraicPattern {
    let name = match flavor {
        Flavor::Flat => format!("F*<={k}"),
        Flavor::Natural => format!("F*nat<={k}"),
    };
    let (cat, data) = pointed_sets_with(k, &name, |_, _| true);
    let inert = data.iter().map(|(_, n, f)| fiber_sizes(f, *n)[1..].iter().all(|&s| s == 1)).collect();
    let active = data.iter().map(|(_, _, f)| f.iter().all(|&x| x != 0)).collect();
    let elementary = (0..=k).map(|n| n == 1 || (flavor == Flavor::Natural && n == 0)).collect();
    let truncation = Truncation { size: (0..=k).collect(), cap: k, note: format!("objects <n> with n <= {k}") };
    AlgebraicPattern::new(name, Arc::new(cat), inert, active, elementary, Some(truncation))
}

/// Label of the simplex-category map `[b] -> [a]` seen as a morphism
/// `[a] -> [b]` of the opposite category.
pub fn simplex_map_label(a: usize, b: usize, phi: &[u8]) -> String {
    format!("[{a}]->[{b}]:({})", phi.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn monotone_maps(b: usize, a: usize) -> Vec<Vec<u8>> {
    // nondecreasing φ: [b] -> [a]
    fn rec(len: usize, lo: u8, hi: u8, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in lo..=hi {
            cur.push(v);
            rec(len, v, hi, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(b + 1, 0, a as u8, &mut Vec::new(), &mut out);
    out
}

/// Data of each morphism of `Δ^op_{≤cap}`: `(a, b, φ)` for `φ: [b] -> [a]`.
pub type SimplexData = Vec<(usize, usize, Vec<u8>)>;

pub fn delta_op_cat(cap: usize) -> (FinCat, SimplexData) {
    let mut b = CatBuilder::new(format!("Dop<={cap}"));
    for a in 0..=cap {
        b.add_object(format!("[{a}]"));
    }
    let mut data = Vec::new();
    let mut lookup = HashMap::new();
    for a in 0..=cap {
        for bb in 0..=cap {
            for phi in monotone_maps(bb, a) {
                let id = b.add_morphism(simplex_map_label(a, bb, &phi), a, bb);
                if a == bb && phi.iter().enumerate().all(|(i, &x)| x as usize == i) {
                    b.set_identity(a, id);
                }
                lookup.insert((a, bb, phi.clone()), id);
                data.push((a, bb, phi));
            }
        }
    }
    let cat = b
        .build_with(|g, f| {
            // f: [a] -> [b] is φ_f: [b] -> [a]; g: [b] -> [c] is φ_g: [c] -> [b]
            let (a, _, pf) = &data[f];
            let (_, c, pg) = &data[g];
            let h: Vec<u8> = pg.iter().map(|&x| pf[x as usize]).collect();
            lookup.get(&(*a, *c, h)).copied()
        })
        .expect("monotone maps compose");
    (cat, data)
}

/// `Δ^op` truncated to `[0]..[m_cap]`; inert maps are opposite to interval
/// inclusions, active maps to endpoint-preserving maps. Checks on Segal
/// data are meant for objects `[m]` with `m ≤ n`; larger objects are
/// present as sources of active maps.
pub fn delta_op(n: usize, m_cap: usize, flavor: Flavor) -> AlgebraicPattern {
    assert!(n <= m_cap, "object cap above active-source cap");
    let (cat, data) = delta_op_cat(m_cap);
    let name = match flavor {
        Flavor::Flat => format!("Dop-flat<={n},M={m_cap}"),
        Flavor::Natural => format!("Dop-nat<={n},M={m_cap}"),
    };
    let cat = cat.with_name(name.clone());
    let inert = data.iter().map(|(_, _, p)| p.windows(2).all(|w| w[1] == w[0] + 1)).collect();
    let active = data.iter().map(|(a, _, p)| p[0] == 0 && *p.last().unwrap() as usize == *a).collect();
    let elementary = (0..=m_cap).map(|k| k == 1 || (flavor == Flavor::Natural && k == 0)).collect();
    let truncation = Truncation {
        size: (0..=m_cap).collect(),
        cap: m_cap,
        note: format!("objects [m] with m <= {m_cap}; Segal range m <= {n}"),
    };
    AlgebraicPattern::new(name, Arc::new(cat), inert, active, elementary, Some(truncation))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::validate_pattern;

    #[test]
    fn fin_star_small_counts() {
        let p = fin_star(1, Flavor::Flat);
        assert_eq!(p.base.n_obj(), 2);
        assert_eq!(p.base.hom(1, 1).len(), 2);
        let p0 = fin_star(0, Flavor::Flat);
        assert_eq!((p0.base.n_obj(), p0.base.n_mor()), (1, 1));
    }

    #[test]
    fn fin_star_factor_example() {
        let p = fin_star(3, Flavor::Flat);
        assert!(validate_pattern(&p).verdict.is_holds());
        let f = p.base.find_morphism(&pointed_map_label(2, 1, &[0, 1])).unwrap();
        let (i, a) = p.factor(f).unwrap();
        assert_eq!(i, f);
        assert!(p.base.is_identity(a));
    }

    #[test]
    fn delta_op_endpoint_inerts() {
        let p = delta_op(1, 1, Flavor::Flat);
        let c = &p.base;
        let (one, zero) = (c.find_object("[1]").unwrap(), c.find_object("[0]").unwrap());
        let inert_11: Vec<usize> = c.hom(one, one).iter().map(|&m| m as usize).filter(|&m| p.inert[m]).collect();
        assert_eq!(inert_11.len(), 1);
        let inert_10 = c.hom(one, zero).iter().filter(|&&m| p.inert[m as usize]).count();
        assert_eq!(inert_10, 2);
        assert!(p.elementary_slice(zero).arrows.is_empty());
    }
}
