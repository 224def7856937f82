//! The square `Env_π(O) -> lim_{el} Env_π`, `𝒪^act_{/O} -> lim_{el} 𝒪^act`
//! checked for being a pullback without building the pullback: the iso-comma
//! is explored object by object through the two pseudo-limit views.

use std::sync::Arc;

use super::fibers::{EnvelopeFibers, KeptFiber};
use crate::fincat::{CatError, FinCat, Functor, LimitObject, PseudoFunctor, PseudoLimitView};
use crate::verdict::Verdict;

pub(crate) const METHOD: &str = "envelope square is a pullback";

/// Everything needed at one object `O` of the base.
pub(crate) struct SquareData {
    pub index: Arc<FinCat>,
    pub over: PseudoFunctor,
    pub base: PseudoFunctor,
    /// `Env_π(E_a) -> 𝒪^act_{/E_a}` per index object
    pub lambda: Vec<Functor>,
    /// `Env_π(O) -> 𝒪^act_{/O}`
    pub vertical: Functor,
    pub cone_over: Vec<LimitObject>,
    pub cone_over_mor: Vec<Vec<u32>>,
    pub cone_base: Vec<LimitObject>,
    pub cone_base_mor: Vec<Vec<u32>>,
    /// objects at `O` left out because a transport leaves the model
    pub dropped: usize,
    /// kept part of `Env_π(E_a)` per index object
    pub kept_over: Vec<KeptFiber>,
    /// base object `E_a` per index object
    pub index_objects: Vec<usize>,
}

/// The cone `x ↦ ((α_a)_! x, γ)` over the elementary slice, in the local
/// numbering of the kept fibers.
fn cone(
    env: &EnvelopeFibers,
    arrows: &[usize],
    conn: &[usize],
    index: &FinCat,
    at: &KeptFiber,
    kept: &[KeptFiber],
) -> Result<(Vec<LimitObject>, Vec<Vec<u32>>), CatError> {
    let miss = |what: &str| CatError::Structure(format!("{what} leaves the model at {}", at.cat.name()));
    let mut objs = Vec::new();
    for &k in &at.objects {
        let fam = arrows
            .iter()
            .zip(kept)
            .map(|(&a, kf)| env.transport_obj(a, k).and_then(|v| kf.local_obj(v)).map(|v| v as u32).ok_or_else(|| miss("transport")))
            .collect::<Result<Vec<u32>, _>>()?;
        let theta = index
            .morphisms()
            .map(|u| {
                env.compositor(conn[u], arrows[index.src(u)], k)
                    .and_then(|v| kept[index.tgt(u)].local_mor(v))
                    .map(|v| v as u32)
                    .ok_or_else(|| miss("compositor"))
            })
            .collect::<Result<Vec<u32>, _>>()?;
        objs.push((fam, theta));
    }
    let mors = at
        .morphisms
        .iter()
        .map(|&m| {
            arrows
                .iter()
                .zip(kept)
                .map(|(&a, kf)| env.transport_mor(a, m).and_then(|v| kf.local_mor(v)).map(|v| v as u32).ok_or_else(|| miss("transport")))
                .collect::<Result<Vec<u32>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((objs, mors))
}

/// `x` stays in the model along every elementary arrow.
fn kept_at(env: &EnvelopeFibers, o: usize, arrows: &[usize], keep: &[Vec<bool>]) -> Vec<bool> {
    (0..env.fiber(o).objects.len())
        .map(|k| arrows.iter().enumerate().all(|(a, &arr)| env.transport_obj(arr, k).is_some_and(|t| keep[a][t])))
        .collect()
}

/// `Env_π(X) -> Env_ρ(X)` between kept fibers.
fn project_kept(
    over: &EnvelopeFibers,
    base: &EnvelopeFibers,
    map: &Functor,
    x: usize,
    src: &KeptFiber,
    tgt: &KeptFiber,
) -> Result<Functor, CatError> {
    let full = over.project_along(base, map, x);
    let err = || CatError::Structure(format!("projection leaves the kept part at {}", base.cand.base.base.obj_label(x)));
    let obj = src.objects.iter().map(|&k| tgt.local_obj(full.obj(k)).ok_or_else(err)).collect::<Result<_, _>>()?;
    let mor = src.morphisms.iter().map(|&m| tgt.local_mor(full.mor(m)).ok_or_else(err)).collect::<Result<_, _>>()?;
    Ok(Functor::new_unchecked(src.cat.clone(), tgt.cat.clone(), obj, mor))
}

impl SquareData {
    /// `over` against the identity candidate `base` on the same pattern.
    pub fn new(over: &EnvelopeFibers, base: &EnvelopeFibers, o: usize) -> Result<SquareData, CatError> {
        Self::new_along(over, base, &over.cand.proj, o)
    }

    /// `over` against any candidate `base`, compared along `map` over the
    /// pattern.
    pub fn new_along(over: &EnvelopeFibers, base: &EnvelopeFibers, map: &Functor, o: usize) -> Result<SquareData, CatError> {
        let pat = &over.cand.base;
        let el = pat.elementary_slice(o);
        let index = el.cat.clone();
        let obj_of: Vec<usize> = el.arrows.iter().map(|&a| pat.base.tgt(a)).collect();
        let keep_over = over.closed_families(&index, &obj_of, &el.conn);
        let keep_base = base.closed_families(&index, &obj_of, &el.conn);
        let (dp, kept_over) = over.pseudofunctor_kept(&index, &obj_of, &el.conn, &keep_over)?;
        let (db, kept_base) = base.pseudofunctor_kept(&index, &obj_of, &el.conn, &keep_base)?;
        let at_over = KeptFiber::new(over.fiber(o), &kept_at(over, o, &el.arrows, &keep_over));
        let at_base = KeptFiber::new(base.fiber(o), &kept_at(base, o, &el.arrows, &keep_base));
        let dropped = over.fiber(o).objects.len() - at_over.objects.len() + base.fiber(o).objects.len() - at_base.objects.len();
        let lambda = obj_of
            .iter()
            .enumerate()
            .map(|(a, &e)| project_kept(over, base, map, e, &kept_over[a], &kept_base[a]))
            .collect::<Result<Vec<_>, _>>()?;
        let vertical = project_kept(over, base, map, o, &at_over, &at_base)?;
        let (cone_over, cone_over_mor) = cone(over, &el.arrows, &el.conn, &index, &at_over, &kept_over)?;
        let (cone_base, cone_base_mor) = cone(base, &el.arrows, &el.conn, &index, &at_base, &kept_base)?;
        Ok(SquareData {
            index,
            over: dp,
            base: db,
            lambda,
            vertical,
            cone_over,
            cone_over_mor,
            cone_base,
            cone_base_mor,
            dropped,
            kept_over,
            index_objects: obj_of,
        })
    }

    fn lambda_obj(&self, l: &LimitObject) -> LimitObject {
        let idx = &self.index;
        let fam = l.0.iter().enumerate().map(|(a, &v)| self.lambda[a].obj(v as usize) as u32).collect();
        let theta = l.1.iter().enumerate().map(|(u, &t)| self.lambda[idx.tgt(u)].mor(t as usize) as u32).collect();
        (fam, theta)
    }

    fn lambda_mor(&self, comps: &[u32]) -> Vec<u32> {
        comps.iter().enumerate().map(|(a, &u)| self.lambda[a].mor(u as usize) as u32).collect()
    }

    /// The outer square commutes on the nose.
    fn commutes(&self) -> Option<String> {
        let a = &self.vertical.source;
        for x in a.objects() {
            if self.lambda_obj(&self.cone_over[x]) != self.cone_base[self.vertical.obj(x)] {
                return Some(format!("square does not commute at {}", a.obj_label(x)));
            }
        }
        for m in a.morphisms() {
            if self.lambda_mor(&self.cone_over_mor[m]) != self.cone_base_mor[self.vertical.mor(m)] {
                return Some(format!("square does not commute at {}", a.mor_label(m)));
            }
        }
        None
    }

    /// `x ↦ (Tx, Vx, id)` is fully faithful into the iso-comma.
    fn fully_faithful(&self) -> Option<String> {
        let a = &self.vertical.source;
        let b = &self.vertical.target;
        let view = PseudoLimitView::new(&self.over);
        for x in a.objects() {
            for y in a.objects() {
                let mut image: Vec<(Vec<u32>, usize)> = a
                    .hom(x, y)
                    .iter()
                    .map(|&m| (self.cone_over_mor[m as usize].clone(), self.vertical.mor(m as usize)))
                    .collect();
                image.sort();
                let n_image = image.len();
                image.dedup();
                if image.len() < n_image {
                    return Some(format!("not faithful on {} -> {}", a.obj_label(x), a.obj_label(y)));
                }
                let mut total = 0;
                for &mb in b.hom(self.vertical.obj(x), self.vertical.obj(y)) {
                    let want = &self.cone_base_mor[mb as usize];
                    total += view
                        .homs_where(&self.cone_over[x], &self.cone_over[y], |i, u| self.lambda[i].mor(u) == want[i] as usize)
                        .len();
                }
                if total != image.len() {
                    return Some(format!(
                        "not full on {} -> {}: {} maps in the pullback, {} upstairs",
                        a.obj_label(x),
                        a.obj_label(y),
                        total,
                        image.len()
                    ));
                }
            }
        }
        None
    }

    /// Every object `(ℓ, b, ι)` of the iso-comma is isomorphic to some
    /// `(Tx, Vx, id)`.
    fn essentially_surjective(&self) -> Option<String> {
        let a = &self.vertical.source;
        let b = &self.vertical.target;
        let view_over = PseudoLimitView::new(&self.over);
        let view_base = PseudoLimitView::new(&self.base);
        for ob in b.objects() {
            let sb = &self.cone_base[ob];
            let ells = view_over.objects_where(|i, v| {
                self.base.values[i].isomorphic(self.lambda[i].obj(v), sb.0[i] as usize).is_some()
            });
            let candidates: Vec<(usize, usize)> = a
                .objects()
                .flat_map(|x| {
                    let vx = self.vertical.obj(x);
                    b.hom(vx, ob).iter().filter(|&&m| b.is_iso(m as usize)).map(move |&m| (x, m as usize))
                })
                .collect();
            for ell in &ells {
                let lam = self.lambda_obj(ell);
                for iota in view_base.homs_where(&lam, sb, |i, u| self.base.values[i].is_iso(u)) {
                    let hit = candidates.iter().any(|&(x, mb)| {
                        let s = &self.cone_base_mor[mb];
                        let target: Option<Vec<usize>> = (0..iota.len())
                            .map(|i| {
                                let v = &self.base.values[i];
                                v.comp(v.inverse(iota[i] as usize)?, s[i] as usize)
                            })
                            .collect();
                        let Some(target) = target else { return false };
                        !view_over
                            .homs_where(&self.cone_over[x], ell, |i, u| {
                                self.lambda[i].mor(u) == target[i] && self.over.values[i].is_iso(u)
                            })
                            .is_empty()
                    });
                    if !hit {
                        let fam: Vec<&str> =
                            ell.0.iter().enumerate().map(|(i, &v)| self.over.values[i].obj_label(v as usize)).collect();
                        return Some(format!(
                            "family [{}] over {} is not glued from a single object",
                            fam.join(", "),
                            b.obj_label(ob)
                        ));
                    }
                }
            }
        }
        None
    }

    pub fn verdict(&self) -> Verdict {
        if let Some(w) = self.commutes() {
            return Verdict::unknown(METHOD, w);
        }
        if let Some(w) = self.fully_faithful() {
            return Verdict::fails(METHOD, w);
        }
        if let Some(w) = self.essentially_surjective() {
            return Verdict::fails(METHOD, w);
        }
        let v = Verdict::holds(METHOD);
        if self.dropped > 0 {
            return v.with_note(format!("{} envelope objects with transports above the cap left out", self.dropped));
        }
        v
    }
}
