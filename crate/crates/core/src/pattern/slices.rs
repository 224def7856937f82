//! Pushforward of elementary slices along active maps and the fibers used
//! by the soundness check.

use std::sync::Arc;

use super::AlgebraicPattern;
use crate::fincat::{comma_category, terminal_cat, CatError, Comma, FinCat, Functor};

/// Inert and active parts of `α ∘ ω` for an active `ω: X -> Y` and an inert
/// `α: Y -> E`.
pub fn active_pushforward(p: &AlgebraicPattern, omega: usize, alpha: usize) -> Result<(usize, usize), CatError> {
    let c = &p.base;
    let comp = c.comp(alpha, omega).ok_or_else(|| {
        CatError::Structure(format!("{} o {} is outside the model", c.mor_label(alpha), c.mor_label(omega)))
    })?;
    p.factor(comp)
        .ok_or_else(|| CatError::Structure(format!("{} has no factorization", c.mor_label(comp))))
}

/// The functor `el_{Y/} -> 𝒪^int_{X/}` sending `α` to the inert part of
/// `α ∘ ω`, with the inert and active parts recorded per object.
#[derive(Clone, Debug)]
pub struct Pushforward {
    pub omega: usize,
    pub functor: Functor,
    pub inert_part: Vec<usize>,
    pub active_part: Vec<usize>,
}

pub fn pushforward_functor(p: &AlgebraicPattern, omega: usize) -> Result<Pushforward, CatError> {
    let c = &p.base;
    let (x, y) = (c.src(omega), c.tgt(omega));
    let el = p.elementary_slice(y);
    let under = p.inert_under(x);
    let mut inert_part = Vec::with_capacity(el.arrows.len());
    let mut active_part = Vec::with_capacity(el.arrows.len());
    let mut obj = Vec::with_capacity(el.arrows.len());
    for &alpha in &el.arrows {
        let (i, a) = active_pushforward(p, omega, alpha)?;
        inert_part.push(i);
        active_part.push(a);
        obj.push(under.object_of_arrow(i).expect("inert arrows out of X are objects of the under-category"));
    }
    let mut mor = Vec::with_capacity(el.cat.n_mor());
    for m in el.cat.morphisms() {
        let (s, t) = (el.cat.src(m), el.cat.tgt(m));
        let target = c.comp(el.conn[m], active_part[s]);
        let hits: Vec<usize> = under
            .cat
            .hom(obj[s], obj[t])
            .iter()
            .map(|&v| v as usize)
            .filter(|&v| target.is_some() && c.comp(active_part[t], under.conn[v]) == target)
            .collect();
        match hits.as_slice() {
            [v] => mor.push(*v),
            [] => {
                return Err(CatError::Structure(format!(
                    "no inert filler for {} under {}",
                    el.cat.mor_label(m),
                    c.mor_label(omega)
                )))
            }
            _ => {
                return Err(CatError::Structure(format!(
                    "{} inert fillers for {} under {}",
                    hits.len(),
                    el.cat.mor_label(m),
                    c.mor_label(omega)
                )))
            }
        }
    }
    let functor = Functor::new(el.cat.clone(), under.cat.clone(), obj, mor)?;
    Ok(Pushforward { omega, functor, inert_part, active_part })
}

/// `el_{Y/} ×_{𝒪^int_{X/}} (𝒪^int_{X/})_{/β}` as a comma category, for an
/// inert `β` out of `X`.
pub fn el_beta_fiber(p: &AlgebraicPattern, pf: &Pushforward, beta: usize) -> Result<Comma, CatError> {
    let x = p.base.src(pf.omega);
    let under = p.inert_under(x);
    let b = under
        .object_of_arrow(beta)
        .ok_or_else(|| CatError::Structure(format!("{} is not an inert map out of the source", p.base.mor_label(beta))))?;
    let k = Functor::constant(Arc::new(terminal_cat()), under.cat.clone(), b);
    comma_category(&pf.functor, &k)
}

/// Same fiber when `𝒪^int_{X/}` is thin: the full subcategory of `el_{Y/}`
/// on those `α` whose pushforward maps to `β`. `None` if not thin.
pub fn el_beta_fiber_poset(p: &AlgebraicPattern, pf: &Pushforward, beta: usize) -> Option<FinCat> {
    let x = p.base.src(pf.omega);
    let under = p.inert_under(x);
    if !under.cat.is_thin() {
        return None;
    }
    let b = under.object_of_arrow(beta)?;
    let f = &pf.functor;
    let keep: Vec<usize> = f.source.objects().filter(|&a| !under.cat.hom(f.obj(a), b).is_empty()).collect();
    Some(f.source.full_subcategory(&keep, format!("el fiber over {}", p.base.mor_label(beta))).0)
}
