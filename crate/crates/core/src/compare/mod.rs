//! Hypotheses of the comparison theorem for pattern morphisms, and
//! transport of fibrous patterns along them.

pub mod enumerate;

#[cfg(test)]
mod tests;

use std::collections::HashMap;

use serde::Serialize;

pub use enumerate::{canonical_key, enumerate_segal_set_objects, Enumeration};

use crate::fibrous::{pullback_fibrous, EnvFiber, EnvelopeFibers, FibrousCandidate, FibrousReport};
use crate::fincat::{functor_is_equivalence, iso_comma, max_subgroupoid, CatError, Comma, FinCat, Functor, Slice};
use crate::homotopy::is_coinitial;
use crate::pattern::{check_extendable, check_sound, AlgebraicPattern, PatternMorphism};
use crate::verdict::Verdict;

/// Every `f^el_{X/}: 𝒪^el_{X/} -> 𝒫^el_{f(X)/}` is coinitial.
pub fn check_strong_segal(f: &PatternMorphism) -> Verdict {
    const M: &str = "elementary slices coinitial";
    let s = &f.source.base;
    let parts = s.objects().map(|x| is_coinitial(&f.el_slice_functor(x)).context(&format!("at {}", s.obj_label(x))));
    let mut v = Verdict::all(M, parts);
    v.witness.truncate(8);
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub strong_segal: Verdict,
    /// (i) `𝒪^el -> 𝒫^el`
    pub elementary: Verdict,
    /// (ii) `(𝒪^act_{/X})^≃ -> (𝒫^act_{/fX})^≃` for every `X`
    pub active_cores: Verdict,
    pub per_object: Vec<(String, Verdict)>,
    pub target_sound: Verdict,
    /// extendability of the target, up to the truncation
    pub target_extendable: Verdict,
    pub verdict: Verdict,
}

/// Elementary objects and inert maps between them.
pub fn elementary_subcategory(p: &AlgebraicPattern) -> (FinCat, Vec<usize>, Vec<usize>) {
    let b = &p.base;
    let keep_obj = p.elementary.clone();
    let keep_mor: Vec<bool> = b.morphisms().map(|m| p.inert[m] && keep_obj[b.src(m)] && keep_obj[b.tgt(m)]).collect();
    b.subcategory(&keep_obj, &keep_mor, format!("{}^el", p.name)).expect("inert maps between elementaries form a subcategory")
}

/// `f` restricted to elementary objects and inert maps.
pub fn elementary_functor(f: &PatternMorphism) -> Result<Functor, CatError> {
    let (src, s_obj, s_mor) = elementary_subcategory(&f.source);
    let (tgt, t_obj, t_mor) = elementary_subcategory(&f.target);
    let obj_local: HashMap<usize, usize> = t_obj.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let mor_local: HashMap<usize, usize> = t_mor.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let g = &f.functor;
    let obj = s_obj.iter().map(|&o| obj_local[&g.obj(o)]).collect();
    let mor = s_mor.iter().map(|&m| mor_local[&g.mor(m)]).collect();
    Functor::new(src.into(), tgt.into(), obj, mor)
}

/// `𝒪^act_{/X} -> 𝒫^act_{/fX}`.
pub fn active_slice_functor(f: &PatternMorphism, x: usize) -> Result<Functor, CatError> {
    let src: &Slice = f.source.active_slice(x);
    let tgt: &Slice = f.target.active_slice(f.functor.obj(x));
    let arrows: HashMap<usize, usize> = tgt.arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let conns: HashMap<(usize, usize, usize), usize> =
        tgt.conn.iter().enumerate().map(|(i, &c)| ((tgt.cat.src(i), tgt.cat.tgt(i), c), i)).collect();
    let g = &f.functor;
    let missing = |what: String| CatError::Structure(format!("{what} has no image in the target slice"));
    let obj = src
        .arrows
        .iter()
        .map(|&a| arrows.get(&g.mor(a)).copied().ok_or_else(|| missing(f.source.base.mor_label(a).to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let mor = src
        .cat
        .morphisms()
        .map(|m| {
            conns
                .get(&(obj[src.cat.src(m)], obj[src.cat.tgt(m)], g.mor(src.conn[m])))
                .copied()
                .ok_or_else(|| missing(src.cat.mor_label(m).to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Functor::new(src.cat.clone(), tgt.cat.clone(), obj, mor)
}

/// A functor restricted to the maximal subgroupoids.
fn on_cores(f: &Functor) -> Result<Functor, CatError> {
    let (src, s_mor) = max_subgroupoid(&f.source);
    let (tgt, t_mor) = max_subgroupoid(&f.target);
    let local: HashMap<usize, usize> = t_mor.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mor = s_mor.iter().map(|&m| local[&f.mor(m)]).collect();
    Functor::new(src.into(), tgt.into(), f.obj_map().to_vec(), mor)
}

fn equivalence(f: Result<Functor, CatError>, method: &str) -> Verdict {
    match f {
        Ok(f) => functor_is_equivalence(&f),
        Err(e) => Verdict::unknown(method, e.to_string()),
    }
}

pub fn check_comparison_hypotheses(f: &PatternMorphism) -> ComparisonReport {
    check_comparison_hypotheses_with(f, check_sound(&f.target).verdict)
}

/// As [`check_comparison_hypotheses`], with the soundness of the target
/// decided elsewhere (for span patterns, by the span criterion).
pub fn check_comparison_hypotheses_with(f: &PatternMorphism, target_sound: Verdict) -> ComparisonReport {
    let strong_segal = check_strong_segal(f);
    let elementary = equivalence(elementary_functor(f), "elementary restriction").context("elementary restriction");
    let s = &f.source.base;
    let per_object: Vec<(String, Verdict)> = s
        .objects()
        .map(|x| {
            let v = equivalence(active_slice_functor(f, x).and_then(|g| on_cores(&g)), "active slice cores");
            (s.obj_label(x).to_string(), v)
        })
        .collect();
    let mut active_cores =
        Verdict::all("active slice cores equivalent", per_object.iter().map(|(l, v)| v.clone().context(&format!("at {l}"))));
    active_cores.witness.truncate(8);
    let ext = check_extendable(&f.target);
    let mut target_extendable = ext.within_bound;
    if f.target.truncation.is_some() {
        target_extendable = target_extendable.with_note(f.target.truncation_note());
    }
    let verdict = Verdict::all(
        "comparison hypotheses",
        [
            strong_segal.clone().context("strong Segal"),
            elementary.clone(),
            active_cores.clone().context("active cores"),
            target_sound.clone().context("target soundness"),
            target_extendable.clone().context("target extendability"),
        ],
    );
    ComparisonReport { strong_segal, elementary, active_cores, per_object, target_sound, target_extendable, verdict }
}

/// `𝒜_𝒪(X) -> 𝒜_𝒫(fX)` is an equivalence for every `X`.
pub fn check_active_slices(f: &PatternMorphism) -> (Verdict, Vec<(String, Verdict)>) {
    const M: &str = "active slices equivalent";
    let s = &f.source.base;
    let per: Vec<(String, Verdict)> =
        s.objects().map(|x| (s.obj_label(x).to_string(), equivalence(active_slice_functor(f, x), M))).collect();
    let mut v = Verdict::all(M, per.iter().map(|(l, v)| v.clone().context(&format!("at {l}"))));
    v.witness.truncate(8);
    (v, per)
}

#[derive(Clone, Debug, Serialize)]
pub struct TransportReport {
    /// fibrousness of `f*π`
    pub fibrous: FibrousReport,
    /// `Env_{f*π}(X) -> Env_π(fX) ×_{𝒜_𝒫(fX)} 𝒜_𝒪(X)` are equivalences
    pub envelopes: Verdict,
    pub per_object: Vec<(String, Verdict)>,
    pub verdict: Verdict,
}

/// A slice morphism with the given ends and connecting map.
fn slice_morphism(slice: &Slice, src: usize, tgt: usize, conn: usize) -> Option<usize> {
    slice.cat.hom(src, tgt).iter().map(|&m| m as usize).find(|&m| slice.conn[m] == conn)
}

/// `Env_π(Y) -> 𝒜_𝒫(Y)`, `(e, ψ) ↦ ψ`.
fn envelope_to_slice(fiber: &EnvFiber, pi: &FibrousCandidate, slice: &Slice) -> Result<Functor, CatError> {
    let arrows: HashMap<usize, usize> = slice.arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let obj: Vec<usize> = fiber.objects.iter().map(|&(_, psi)| arrows[&psi]).collect();
    let mor = fiber
        .cat
        .morphisms()
        .map(|m| {
            slice_morphism(slice, obj[fiber.cat.src(m)], obj[fiber.cat.tgt(m)], pi.proj.mor(fiber.morphisms[m]))
                .ok_or_else(|| CatError::Structure("envelope morphism off the active slice".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Functor::new(fiber.cat.clone(), slice.cat.clone(), obj, mor)
}

/// `Env_{f*π}(X) -> Env_π(fX) ×_{𝒜_𝒫(fX)} 𝒜_𝒪(X)` on the iso-comma model
/// of the fiber product, `((e, o, θ), φ) ↦ ((e, f(φ) ∘ θ), φ, θ)`.
fn envelope_comparison(
    f: &PatternMorphism,
    pi: &FibrousCandidate,
    pulled: &EnvelopeFibers,
    pb: &Comma,
    env: &EnvelopeFibers,
    x: usize,
) -> Result<Functor, CatError> {
    let here = pulled.fiber(x);
    let fx = f.functor.obj(x);
    let there = env.fiber(fx);
    let t = &f.target.base;
    let src_slice = f.source.active_slice(x);
    let tgt_slice = f.target.active_slice(fx);
    let along = active_slice_functor(f, x)?;
    let product = iso_comma(&envelope_to_slice(there, pi, tgt_slice)?, &along)?;
    let outside = || CatError::Structure(format!("envelope at {} leaves the model", f.source.base.obj_label(x)));
    let src_arrows: HashMap<usize, usize> = src_slice.arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let tgt_arrows: HashMap<usize, usize> = tgt_slice.arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let obj = here
        .objects
        .iter()
        .map(|&(q, phi)| {
            let (e, _, theta) = pb.objects[q];
            let image = f.functor.mor(phi);
            let psi = t.comp(image, theta).ok_or_else(outside)?;
            let k = there.find_object(e, psi).ok_or_else(outside)?;
            let j = src_arrows[&phi];
            let zeta = slice_morphism(tgt_slice, tgt_arrows[&psi], tgt_arrows[&image], theta).ok_or_else(outside)?;
            product.find_object(k, j, zeta).ok_or_else(outside)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut lookup: HashMap<(usize, usize, usize, usize), usize> = HashMap::new();
    for (m, &(u, v)) in product.morphisms.iter().enumerate() {
        lookup.insert((product.cat.src(m), product.cat.tgt(m), u, v), m);
    }
    let mor = here
        .cat
        .morphisms()
        .map(|m| {
            let (s, d) = (here.cat.src(m), here.cat.tgt(m));
            let (u, v) = pb.morphisms[here.morphisms[m]];
            let (ks, kd) = (product.objects[obj[s]].0, product.objects[obj[d]].0);
            let (js, jd) = (product.objects[obj[s]].1, product.objects[obj[d]].1);
            let upper = there.find_morphism(ks, kd, u).ok_or_else(outside)?;
            let lower = slice_morphism(src_slice, js, jd, v).ok_or_else(outside)?;
            lookup.get(&(obj[s], obj[d], upper, lower)).copied().ok_or_else(outside)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Functor::new(here.cat.clone(), product.cat.clone(), obj, mor)
}

/// Pulls `π` back along `f`, re-checks fibrousness and compares envelopes
/// object by object. Refused unless `f` is strong Segal and `π` fibrous.
pub fn transport_demo(f: &PatternMorphism, pi: &FibrousCandidate) -> Result<TransportReport, CatError> {
    const M: &str = "envelope of the pullback matches the pulled-back envelope";
    let pb = pullback_fibrous(f, pi)?;
    let pulled = EnvelopeFibers::new(&pb.candidate);
    let env = EnvelopeFibers::new(pi);
    let s = &f.source.base;
    let per_object: Vec<(String, Verdict)> = s
        .objects()
        .map(|x| (s.obj_label(x).to_string(), equivalence(envelope_comparison(f, pi, &pulled, &pb.comma, &env, x), M)))
        .collect();
    let mut envelopes = Verdict::all(M, per_object.iter().map(|(l, v)| v.clone().context(&format!("at {l}"))));
    envelopes.witness.truncate(8);
    let verdict = Verdict::all("transport", [pb.report.verdict.clone().context("pullback fibrous"), envelopes.clone()]);
    Ok(TransportReport { fibrous: pb.report, envelopes, per_object, verdict })
}
