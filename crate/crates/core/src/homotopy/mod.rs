//! Weak contractibility of finite categories and coinitiality of functors.
//!
//! Verdicts are sound but not complete: `Unknown` is returned whenever the
//! available methods do not settle the question.

pub mod nerve;
pub mod pi1;
pub mod snf;

use std::sync::Arc;

use crate::fincat::{comma_category, terminal_cat, FinCat, Functor};
use crate::verdict::Verdict;
pub use nerve::{HomologyGroup, NerveError, OrderComplex};
pub use pi1::{nerve_presentation, simplify, Pi1Outcome, Presentation};

/// Smallest number of points of a finite space that is weakly contractible
/// without being contractible (Barmak-Minian). A non-trivial core with fewer
/// points is therefore not weakly contractible.
pub const MIN_NONCONTRACTIBLE_WEAKLY_CONTRACTIBLE: usize = 11;

#[derive(Clone, Copy, Debug)]
pub struct HomotopyConfig {
    pub dim_cap: usize,
    pub tietze_budget: usize,
    pub max_simplices: usize,
}

impl Default for HomotopyConfig {
    fn default() -> Self {
        HomotopyConfig { dim_cap: 8, tietze_budget: 50_000, max_simplices: 400_000 }
    }
}

fn describe_homology(k: usize, g: &HomologyGroup) -> String {
    if g.torsion.is_empty() {
        format!("reduced H_{k} has rank {}", g.rank)
    } else {
        format!("reduced H_{k} has rank {} and torsion {:?}", g.rank, g.torsion)
    }
}

/// Points remaining after repeatedly deleting beat points of a finite poset.
pub fn beat_point_core(c: &FinCat) -> Vec<usize> {
    let n = c.n_obj();
    let lt = |a: usize, b: usize| a != b && !c.hom(a, b).is_empty();
    let mut alive = vec![true; n];
    loop {
        let mut removed = false;
        for x in 0..n {
            if !alive[x] {
                continue;
            }
            let below: Vec<usize> = (0..n).filter(|&y| alive[y] && lt(y, x)).collect();
            let above: Vec<usize> = (0..n).filter(|&y| alive[y] && lt(x, y)).collect();
            let down_beat = below.iter().any(|&m| below.iter().all(|&y| y == m || lt(y, m)));
            let up_beat = above.iter().any(|&m| above.iter().all(|&y| y == m || lt(m, y)));
            if down_beat || up_beat {
                alive[x] = false;
                removed = true;
            }
        }
        if !removed {
            break;
        }
    }
    (0..n).filter(|&x| alive[x]).collect()
}

/// Beat-point reduction alone; defined on posets.
pub fn beat_point_verdict(c: &FinCat) -> Verdict {
    const M: &str = "beat-point core";
    if c.n_obj() == 0 {
        return Verdict::fails(M, "empty category");
    }
    if !c.is_poset() {
        return Verdict::unknown(M, "not a poset");
    }
    let core = beat_point_core(c);
    if core.len() == 1 {
        Verdict::holds(M)
    } else if core.len() < MIN_NONCONTRACTIBLE_WEAKLY_CONTRACTIBLE {
        Verdict::fails(M, format!("minimal core has {} points", core.len()))
    } else {
        Verdict::unknown(M, format!("core of {} points", core.len()))
    }
}

/// Reduced integral homology of the nerve plus the fundamental group from
/// the 2-skeleton; defined when every endomorphism of the skeleton is an
/// identity (finite-dimensional nerve).
pub fn homology_verdict(c: &FinCat, cfg: &HomotopyConfig) -> Verdict {
    const M: &str = "nerve homology + pi1";
    if c.n_obj() == 0 {
        return Verdict::fails(M, "empty category");
    }
    let (s, _) = c.skeleton();
    let directed = s.morphisms().all(|m| s.src(m) != s.tgt(m) || s.is_identity(m));
    let dim_cap = if directed { cfg.dim_cap } else { 2 };
    let oc = match OrderComplex::build(&s, dim_cap, cfg.max_simplices) {
        Ok(oc) => oc,
        Err(NerveError::TooLarge(n)) => return Verdict::unknown(M, format!("nerve exceeds {n} simplices")),
        Err(e) => return Verdict::unknown(M, format!("{e:?}")),
    };
    let h = match oc.homology(&s) {
        Ok(h) => nerve::reduce(h),
        Err(e) => return Verdict::unknown(M, format!("homology: {e:?}")),
    };
    if let Some((k, g)) = h.iter().enumerate().find(|(_, g)| !g.is_zero()) {
        return Verdict::fails(M, describe_homology(k, g));
    }
    if !directed {
        return Verdict::unknown(M, "infinite-dimensional nerve");
    }
    if oc.truncated {
        return Verdict::unknown(M, format!("nerve dimension exceeds cap {}", cfg.dim_cap));
    }
    let Some(p) = nerve_presentation(&s) else {
        return Verdict::unknown(M, "undefined composite in the 2-skeleton");
    };
    match simplify(&p, cfg.tietze_budget) {
        Pi1Outcome::Trivial => Verdict::holds(M),
        Pi1Outcome::Free(r) => Verdict::fails(M, format!("pi1 is free of rank {r}")),
        Pi1Outcome::Undecided { generators, relations } => Verdict::unknown(
            M,
            format!("pi1 presentation did not simplify ({generators} generators, {relations} relations)"),
        ),
    }
}

pub fn contractibility_verdict(c: &FinCat) -> Verdict {
    contractibility_verdict_with(c, &HomotopyConfig::default())
}

/// Weak contractibility of the nerve. Tries, in order: emptiness, initial or
/// terminal objects, connectivity, beat points (posets), homology and pi1.
pub fn contractibility_verdict_with(c: &FinCat, cfg: &HomotopyConfig) -> Verdict {
    if c.n_obj() == 0 {
        return Verdict::fails("emptiness", "empty category");
    }
    if let Some(x) = c.initial_object() {
        return Verdict::holds("initial object").with_note(format!("initial: {}", c.obj_label(x)));
    }
    if let Some(x) = c.terminal_object() {
        return Verdict::holds("terminal object").with_note(format!("terminal: {}", c.obj_label(x)));
    }
    let (s, _) = c.skeleton();
    let comps = s.components();
    let n_comp = comps.iter().max().map_or(0, |m| m + 1);
    if n_comp > 1 {
        return Verdict::fails("connectivity", format!("{n_comp} connected components"));
    }
    if s.is_poset() {
        let b = beat_point_verdict(&s);
        if b.is_holds() {
            return b;
        }
        if b.is_fails() {
            let h = homology_verdict(&s, cfg);
            let mut b = b;
            if h.is_fails() {
                b.witness.extend(h.witness);
            }
            return b;
        }
    }
    homology_verdict(&s, cfg)
}

/// Coinitiality: for every object `d` of the target the comma category
/// `F ↓ d` is weakly contractible.
pub fn is_coinitial(f: &Functor) -> Verdict {
    is_coinitial_with(f, &HomotopyConfig::default())
}

pub fn is_coinitial_with(f: &Functor, cfg: &HomotopyConfig) -> Verdict {
    let d = &f.target;
    let pt = Arc::new(terminal_cat());
    let parts = d.objects().map(|y| {
        let k = Functor::constant(pt.clone(), d.clone(), y);
        match comma_category(f, &k) {
            Ok(cm) => contractibility_verdict_with(&cm.cat, cfg).context(&format!("over {}", d.obj_label(y))),
            Err(e) => Verdict::unknown("comma", e.to_string()),
        }
    });
    let mut v = Verdict::all("comma categories weakly contractible", parts);
    v.witness.truncate(8);
    v
}

/// Cofinality: every `d ↓ F` weakly contractible.
pub fn is_cofinal(f: &Functor) -> Verdict {
    let d = &f.target;
    let pt = Arc::new(terminal_cat());
    let parts = d.objects().map(|y| {
        let k = Functor::constant(pt.clone(), d.clone(), y);
        match comma_category(&k, f) {
            Ok(cm) => contractibility_verdict(&cm.cat).context(&format!("under {}", d.obj_label(y))),
            Err(e) => Verdict::unknown("comma", e.to_string()),
        }
    });
    let mut v = Verdict::all("under-categories weakly contractible", parts);
    v.witness.truncate(8);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{monoid_cat, poset_cat, walking_arrow};

    #[test]
    fn circle_fails_with_rank_one() {
        let c = poset_cat(4, |p, q| p == q || (p < 2 && q >= 2), "circle");
        let v = contractibility_verdict(&c);
        assert!(v.is_fails());
        assert!(v.witness.iter().any(|w| w.contains("H_1 has rank 1")), "{:?}", v);
        assert!(homology_verdict(&c, &HomotopyConfig::default()).is_fails());
    }

    #[test]
    fn basic_cases() {
        assert!(contractibility_verdict(&walking_arrow()).is_holds());
        let z2 = monoid_cat(2, |a, b| a ^ b, "Z2");
        // H_1 of BZ2 is Z/2
        let v = contractibility_verdict(&z2);
        assert!(v.is_fails(), "{v:?}");
        assert!(v.witness[0].contains("torsion [2]"));
        // contractible, but the nerve is infinite-dimensional
        let idem = monoid_cat(2, |a, b| a | b, "idem");
        assert!(contractibility_verdict(&idem).is_unknown());
    }

    #[test]
    fn zigzag_holds() {
        // a <- b -> c
        let c = poset_cat(3, |p, q| p == q || (p == 1 && q != 1), "zig");
        assert!(contractibility_verdict(&c).is_holds());
        let d = poset_cat(3, |p, q| p == q || (q == 1 && p != 1), "zag");
        assert!(contractibility_verdict(&d).is_holds());
    }

    #[test]
    fn coinitial_identity() {
        let a = Arc::new(walking_arrow());
        assert!(is_coinitial(&Functor::identity(a)).is_holds());
    }
}
