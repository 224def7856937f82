//! Nerves of finite categories as chain complexes over the integers.

use std::collections::HashMap;

use super::snf::{invariant_factors, Overflow};
use crate::fincat::FinCat;

/// Nondegenerate simplices of the nerve: chains of composable non-identity
/// morphisms, grouped by length. Vertices are the objects.
#[derive(Clone, Debug)]
pub struct OrderComplex {
    pub vertices: usize,
    /// `chains[k]` holds the chains of length `k`; `chains[0]` is empty
    pub chains: Vec<Vec<Vec<u32>>>,
    pub dim_cap: usize,
    /// longer chains exist beyond the stored dimension
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<i64>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NerveError {
    TooLarge(usize),
    UndefinedComposite,
    Overflow,
}

impl From<Overflow> for NerveError {
    fn from(_: Overflow) -> Self {
        NerveError::Overflow
    }
}

impl OrderComplex {
    /// Chains up to length `dim_cap`, failing if more than `max_simplices`
    /// would be stored.
    pub fn build(c: &FinCat, dim_cap: usize, max_simplices: usize) -> Result<Self, NerveError> {
        let non_id: Vec<Vec<u32>> = c
            .objects()
            .map(|o| c.out_of(o).iter().copied().filter(|&m| !c.is_identity(m as usize)).collect())
            .collect();
        let mut chains: Vec<Vec<Vec<u32>>> = vec![Vec::new()];
        let mut level: Vec<Vec<u32>> = c.morphisms().filter(|&m| !c.is_identity(m)).map(|m| vec![m as u32]).collect();
        let mut total = c.n_obj() + level.len();
        let mut truncated = false;
        let mut k = 1;
        while !level.is_empty() {
            if k > dim_cap {
                truncated = true;
                break;
            }
            let mut next = Vec::new();
            if k < dim_cap + 1 {
                for ch in &level {
                    let last = *ch.last().unwrap() as usize;
                    for &g in &non_id[c.tgt(last)] {
                        let mut e = ch.clone();
                        e.push(g);
                        next.push(e);
                        total += 1;
                        if total > max_simplices {
                            return Err(NerveError::TooLarge(total));
                        }
                    }
                }
            }
            chains.push(level);
            level = next;
            k += 1;
        }
        Ok(OrderComplex { vertices: c.n_obj(), chains, dim_cap, truncated })
    }

    pub fn top_dimension(&self) -> usize {
        self.chains.len().saturating_sub(1)
    }

    pub fn counts(&self) -> Vec<usize> {
        let mut v = vec![self.vertices];
        v.extend(self.chains.iter().skip(1).map(|l| l.len()));
        v
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts().iter().enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
    }

    /// Boundary `C_k -> C_{k-1}` as sparse entries (row = face, col = simplex).
    /// Degenerate faces (composites that are identities) vanish.
    pub fn boundary(&self, c: &FinCat, k: usize) -> Result<(usize, usize, Vec<(usize, usize, i64)>), NerveError> {
        assert!(k >= 1 && k <= self.top_dimension());
        let cols = self.chains[k].len();
        let rows = if k == 1 { self.vertices } else { self.chains[k - 1].len() };
        let mut entries = Vec::new();
        if k == 1 {
            for (j, ch) in self.chains[1].iter().enumerate() {
                let m = ch[0] as usize;
                entries.push((c.tgt(m), j, 1));
                entries.push((c.src(m), j, -1));
            }
            return Ok((rows, cols, entries));
        }
        let lookup: HashMap<&[u32], usize> = self.chains[k - 1].iter().enumerate().map(|(i, ch)| (ch.as_slice(), i)).collect();
        for (j, ch) in self.chains[k].iter().enumerate() {
            for i in 0..=k {
                let face: Vec<u32> = if i == 0 {
                    ch[1..].to_vec()
                } else if i == k {
                    ch[..k - 1].to_vec()
                } else {
                    let comp = c.comp(ch[i] as usize, ch[i - 1] as usize).ok_or(NerveError::UndefinedComposite)?;
                    if c.is_identity(comp) {
                        continue;
                    }
                    let mut f = ch[..i - 1].to_vec();
                    f.push(comp as u32);
                    f.extend_from_slice(&ch[i + 1..]);
                    f
                };
                let row = lookup[face.as_slice()];
                entries.push((row, j, if i % 2 == 0 { 1 } else { -1 }));
            }
        }
        Ok((rows, cols, entries))
    }

    /// Integral homology in degrees whose value is determined by the stored
    /// simplices (all degrees if not truncated, else below the top).
    pub fn homology(&self, c: &FinCat) -> Result<Vec<HomologyGroup>, NerveError> {
        let top = self.top_dimension();
        let mut factors: Vec<Vec<i64>> = vec![Vec::new()];
        for k in 1..=top {
            let (r, cl, e) = self.boundary(c, k)?;
            factors.push(invariant_factors(r, cl, &e)?);
        }
        factors.push(Vec::new());
        let counts = self.counts();
        let last = if self.truncated { top.saturating_sub(1) } else { top };
        let mut out = Vec::new();
        for k in 0..=last {
            let rank_out = factors[k].len();
            let rank_in = factors[k + 1].len();
            let rank = counts[k] - rank_out - rank_in;
            let torsion = factors[k + 1].iter().copied().filter(|&d| d > 1).collect();
            out.push(HomologyGroup { rank, torsion });
        }
        Ok(out)
    }
}

/// Reduced homology: degree-0 rank lowered by one.
pub fn reduce(mut h: Vec<HomologyGroup>) -> Vec<HomologyGroup> {
    if let Some(h0) = h.first_mut() {
        h0.rank = h0.rank.saturating_sub(1);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::poset_cat;

    #[test]
    fn circle_poset_homology() {
        // a, b < x, y
        let c = poset_cat(4, |p, q| p == q || (p < 2 && q >= 2), "circle");
        let oc = OrderComplex::build(&c, 8, 10_000).unwrap();
        assert_eq!(oc.counts(), vec![4, 4]);
        assert_eq!(oc.euler_characteristic(), 0);
        let h = reduce(oc.homology(&c).unwrap());
        assert_eq!(h[0].rank, 0);
        assert_eq!(h[1].rank, 1);
    }

    #[test]
    fn chain_is_acyclic() {
        let c = poset_cat(4, |p, q| p <= q, "chain");
        let oc = OrderComplex::build(&c, 8, 10_000).unwrap();
        let h = reduce(oc.homology(&c).unwrap());
        assert!(h.iter().all(|g| g.is_zero()));
        assert_eq!(oc.euler_characteristic(), 1);
    }
}
