//! Free cocartesian fibrations `ℰ ×_𝓑 Ar_R(𝓑)`, the restriction `Q` back
//! along the identity inclusion, equifibered maps, and Segal envelopes of
//! fibrous patterns.

pub mod arrows;
pub mod fibration;
pub mod monoidal;
pub mod norms;
pub mod square;

#[cfg(test)]
mod tests;

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

pub use arrows::ArrowRightCat;
pub use fibration::{verify_cocartesian_fibration, CocartesianFibration, Fiber};
pub use square::Square;

use crate::fibrous::square::SquareData;
use crate::fibrous::{check_fibrous, is_cocartesian, EnvelopeFibers, FibrousCandidate};
use crate::fincat::{functor_is_equivalence, iso_comma, pseudo_limit_cat, CatBuilder, CatError, Comma, Functor, PseudoFunctor};
use crate::pattern::extend::index_sources;
use crate::pattern::{check_extendable, AlgebraicPattern};
use crate::verdict::Verdict;

/// `E(ℰ) = ℰ ×_𝓑 Ar_R(𝓑)`, fibered over `𝓑` by the target.
pub struct EnvelopeResult {
    pub fibration: CocartesianFibration,
    /// `(e, f) ↦ f`
    pub structure: Functor,
    /// `(e, f) ↦ e`
    pub first: Functor,
    /// `(e, object of Ar_R)` per object
    pub objects: Vec<(usize, usize)>,
    /// `(u, square)` per morphism
    pub morphisms: Vec<(usize, usize)>,
    obj_lookup: HashMap<(usize, usize), usize>,
}

impl EnvelopeResult {
    pub fn find_object(&self, e: usize, arrow_obj: usize) -> Option<usize> {
        self.obj_lookup.get(&(e, arrow_obj)).copied()
    }
}

/// Strict fiber product over `ev₀`. An edge `(α, (λ, β))` is designated when
/// `λ` is inert and `α` is cocartesian.
pub fn free_fibration(cand: &FibrousCandidate, ar: &ArrowRightCat) -> Result<EnvelopeResult, CatError> {
    if let Some((q, a, why)) = cand.missing.first() {
        return Err(CatError::Structure(format!(
            "no cocartesian lift of {} at {}: {why}",
            cand.base.base.mor_label(*a),
            cand.total().obj_label(*q)
        )));
    }
    let (p, pi) = (cand.total(), &cand.proj);
    let base = &cand.base.base;
    let mut b = CatBuilder::new(format!("E({})", p.name()));
    let mut objects = Vec::new();
    let mut obj_lookup = HashMap::new();
    for e in p.objects() {
        for &f in base.out_of(pi.obj(e)) {
            let Some(j) = ar.object_of(f as usize) else { continue };
            let o = b.add_object(format!("({}, {})", p.obj_label(e), base.mor_label(f as usize)));
            obj_lookup.insert((e, j), o);
            objects.push((e, j));
        }
    }
    let mut morphisms = Vec::new();
    let mut mor_lookup = HashMap::new();
    for (o, &(e, j)) in objects.iter().enumerate() {
        for &u in p.out_of(e) {
            let u = u as usize;
            for &(s, j2) in ar.squares_from(j, pi.mor(u)) {
                let o2 = obj_lookup[&(p.tgt(u), j2)];
                let m = b.add_morphism(format!("({}, {})", p.mor_label(u), ar.cat.mor_label(s)), o, o2);
                if o == o2 && p.is_identity(u) && ar.cat.is_identity(s) {
                    b.set_identity(o, m);
                }
                mor_lookup.insert((o, o2, u, s), m);
                morphisms.push((u, s));
            }
        }
    }
    let ends: Vec<(usize, usize)> = (0..b.n_mor()).map(|m| (b.morphism_src(m), b.morphism_tgt(m))).collect();
    let cat = b.build_with(|g, f| {
        let (u2, s2) = morphisms[g];
        let (u1, s1) = morphisms[f];
        mor_lookup.get(&(ends[f].0, ends[g].1, p.comp(u2, u1)?, ar.cat.comp(s2, s1)?)).copied()
    })?;
    let cat = Arc::new(cat);
    let cocartesian: Vec<bool> =
        p.morphisms().map(|u| cand.base.inert[pi.mor(u)] && is_cocartesian(pi, u).is_ok()).collect();
    let designated = morphisms.iter().map(|&(u, _)| cocartesian[u]).collect();
    let proj = Functor::new_unchecked(
        cat.clone(),
        base.clone(),
        objects.iter().map(|&(_, j)| ar.ev1.obj(j)).collect(),
        morphisms.iter().map(|&(_, s)| ar.ev1.mor(s)).collect(),
    );
    let structure = Functor::new_unchecked(
        cat.clone(),
        ar.cat.clone(),
        objects.iter().map(|o| o.1).collect(),
        morphisms.iter().map(|m| m.1).collect(),
    );
    let first =
        Functor::new_unchecked(cat, p.clone(), objects.iter().map(|o| o.0).collect(), morphisms.iter().map(|m| m.0).collect());
    Ok(EnvelopeResult { fibration: CocartesianFibration::new(proj, designated), structure, first, objects, morphisms, obj_lookup })
}

/// `Q(x) = 𝓑 ×_{Ar_R(𝓑)} 𝒟`, the iso-comma along the identity inclusion.
/// Its left projection is the functor to `𝓑`.
pub fn q_restrict(structure: &Functor, ar: &ArrowRightCat) -> Result<Comma, CatError> {
    iso_comma(&ar.include, structure)
}

/// The unit `ℰ -> Q(E(ℰ))`, `e ↦ (πe, (e, id), id)`.
pub fn roundtrip_unit(cand: &FibrousCandidate, ar: &ArrowRightCat, env: &EnvelopeResult, q: &Comma) -> Result<Functor, CatError> {
    let (p, pi) = (cand.total(), &cand.proj);
    let base = &cand.base.base;
    let missing = |what: String| CatError::Structure(format!("{what} missing from Q(E)"));
    let obj_index: HashMap<(usize, usize, usize), usize> = q.objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let mor_index: HashMap<(usize, usize, usize, usize), usize> =
        q.morphisms.iter().enumerate().map(|(i, &(u, v))| ((q.cat.src(i), q.cat.tgt(i), u, v), i)).collect();
    let env_mor: HashMap<(usize, usize), usize> = env.morphisms.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut obj = Vec::with_capacity(p.n_obj());
    for e in p.objects() {
        let x = pi.obj(e);
        let j = ar.include.obj(x);
        let d = env.find_object(e, j).ok_or_else(|| missing(p.obj_label(e).to_string()))?;
        obj.push(*obj_index.get(&(x, d, ar.cat.id(j))).ok_or_else(|| missing(p.obj_label(e).to_string()))?);
    }
    let mut mor = Vec::with_capacity(p.n_mor());
    for u in p.morphisms() {
        let h = pi.mor(u);
        let s = ar.include.mor(h);
        let w = *env_mor.get(&(u, s)).ok_or_else(|| missing(p.mor_label(u).to_string()))?;
        mor.push(*mor_index.get(&(obj[p.src(u)], obj[p.tgt(u)], h, w)).ok_or_else(|| missing(p.mor_label(u).to_string()))?);
    }
    let unit = Functor::new(p.clone(), q.cat.clone(), obj, mor)?;
    let over = q.proj_left.after(&unit);
    if over.obj_map() != pi.obj_map() || over.mor_map() != pi.mor_map() {
        return Err(CatError::Structure(format!("unit does not lie over {}", base.name())));
    }
    Ok(unit)
}

/// `Q(E(ℰ)) ≃ ℰ` over the base, through the unit.
pub fn check_roundtrip(cand: &FibrousCandidate, ar: &ArrowRightCat) -> Verdict {
    const M: &str = "unit into Q(E) is an equivalence over the base";
    let run = || -> Result<Verdict, CatError> {
        let env = free_fibration(cand, ar)?;
        let q = q_restrict(&env.structure, ar)?;
        let unit = roundtrip_unit(cand, ar, &env, &q)?;
        let v = functor_is_equivalence(&unit);
        Ok(if v.is_holds() { Verdict::holds(M) } else { Verdict::fails(M, v.witness.join("; ")) })
    };
    run().unwrap_or_else(|e| Verdict::unknown(M, e.to_string()))
}

#[derive(Clone, Debug, Serialize)]
pub struct EquifiberedReport {
    pub verdict: Verdict,
    /// one square per active map
    pub per_arrow: Vec<(String, Verdict)>,
    /// squares at actives into elementary objects only, when the base is sound
    pub reduced: Option<Verdict>,
    pub agree: Option<bool>,
}

/// The square `𝒟_a -> 𝒟_b` over `𝒯_a -> 𝒯_b` for an active `φ: a -> b`.
pub fn transport_square(
    upper: &CocartesianFibration,
    lower: &CocartesianFibration,
    map: &Functor,
    phi: usize,
) -> Result<Verdict, CatError> {
    let base = upper.base();
    let (a, b) = (base.src(phi), base.tgt(phi));
    let top = upper.transport(phi)?;
    let bottom = lower.transport(phi)?;
    let left = upper.restrict_to_fibers(lower, map, a);
    let right = upper.restrict_to_fibers(lower, map, b);
    let (fa, lb) = (upper.fiber(a), lower.fiber(b));
    let id = base.id(b);
    let iota = fa
        .objects
        .iter()
        .map(|&x| {
            let up = upper.lift(x, phi).expect("transport succeeded");
            let down = lower
                .lift(map.obj(x), phi)
                .ok_or_else(|| CatError::Structure(format!("no designated lift below {}", upper.total().obj_label(x))))?;
            lower
                .factor_through(down, map.mor(up), id)
                .and_then(|v| lb.local_mor(v))
                .ok_or_else(|| CatError::Structure(format!("image of the lift at {} is not cocartesian", upper.total().obj_label(x))))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Square { top: &top, left: &left, right: &right, bottom: &bottom, iota }.verdict())
}

/// For every active `φ: a -> b`, the transport square of fibers is
/// cartesian. `map` must commute with the projections. When the base is
/// sound, the squares at actives into elementary objects are also judged on
/// their own and compared.
pub fn check_equifibered(
    upper: &CocartesianFibration,
    lower: &CocartesianFibration,
    map: &Functor,
    pattern: &AlgebraicPattern,
    base_sound: &Verdict,
) -> EquifiberedReport {
    const M: &str = "transport squares over actives are cartesian";
    let lies_over = lower.proj.after(map);
    if lies_over.obj_map() != upper.proj.obj_map() || lies_over.mor_map() != upper.proj.mor_map() {
        let v = Verdict::unknown(M, "map does not commute with the projections");
        return EquifiberedReport { verdict: v, per_arrow: Vec::new(), reduced: None, agree: None };
    }
    let base = &pattern.base;
    let mut per_arrow = Vec::new();
    for phi in base.morphisms().filter(|&m| pattern.active[m]) {
        let v = transport_square(upper, lower, map, phi).unwrap_or_else(|e| Verdict::unknown(M, e.to_string()));
        per_arrow.push((phi, v));
    }
    let judge = |keep: &dyn Fn(usize) -> bool| {
        let parts = per_arrow.iter().filter(|(phi, _)| keep(*phi)).map(|(phi, v)| v.clone().context(&format!("at {}", base.mor_label(*phi))));
        let mut v = Verdict::all(M, parts);
        v.witness.truncate(8);
        v
    };
    let verdict = judge(&|_| true);
    let (reduced, agree) = if base_sound.is_holds() {
        let r = judge(&|phi| pattern.elementary[base.tgt(phi)]);
        let agree = r.status == verdict.status;
        (Some(r), Some(agree))
    } else {
        (None, None)
    };
    let per_arrow = per_arrow.into_iter().map(|(phi, v)| (base.mor_label(phi).to_string(), v)).collect();
    EquifiberedReport { verdict, per_arrow, reduced, agree }
}

/// [`check_equifibered`] for the structure map of a free fibration.
pub fn check_envelope_equifibered(env: &EnvelopeResult, ar: &ArrowRightCat, base_sound: &Verdict) -> EquifiberedReport {
    check_equifibered(&env.fibration, &ar.target_fibration(), &env.structure, &ar.pattern, base_sound)
}

pub struct SegalEnvelope {
    /// `X ↦ 𝒫 ×_𝒪 𝒪^act_{/X}`
    pub pseudofunctor: PseudoFunctor,
    /// the values satisfy the Segal condition, within the truncation
    pub segal: Verdict,
    /// the structure map to `𝒜_𝒪` is a relative Segal object
    pub relative_segal: Verdict,
    pub per_object: Vec<(String, Verdict)>,
}

/// The Segal envelope of a fibrous pattern over a sound base. Refused when
/// either hypothesis does not hold.
pub fn segal_envelope(cand: &FibrousCandidate) -> Result<SegalEnvelope, CatError> {
    let fibrous = check_fibrous(cand).verdict;
    if !fibrous.is_holds() {
        return Err(CatError::Structure(format!("not fibrous: {fibrous}")));
    }
    let sound = cand.base_soundness();
    if !sound.is_holds() {
        return Err(CatError::Structure(format!("base not sound: {sound}")));
    }
    let env = EnvelopeFibers::new(cand);
    let pseudofunctor = env.pseudofunctor()?;
    let ident = FibrousCandidate::identity(cand.base.clone());
    let base_env = EnvelopeFibers::new(&ident);
    let extendable = check_extendable(&cand.base).within_bound;
    let o = &cand.base.base;
    let mut per_object = Vec::new();
    let mut relative = Vec::new();
    for x in o.objects() {
        let label = o.obj_label(x).to_string();
        let sq = match SquareData::new(&env, &base_env, x) {
            Ok(sq) => sq,
            Err(e) => {
                let v = Verdict::unknown(SEGAL, e.to_string());
                relative.push(v.clone().context(&format!("at {label}")));
                per_object.push((label, v));
                continue;
            }
        };
        relative.push(sq.verdict().context(&format!("at {label}")));
        let v = if extendable.is_holds() {
            segal_at(cand, &env, &sq).unwrap_or_else(|e| Verdict::unknown(SEGAL, e.to_string()))
        } else {
            Verdict::unknown(SEGAL, format!("base not extendable within the truncation: {extendable}"))
        };
        per_object.push((label, v));
    }
    let mut segal = Verdict::all(SEGAL, per_object.iter().map(|(l, v)| v.clone().context(&format!("at {l}"))));
    segal.witness.truncate(8);
    let mut relative_segal = Verdict::all("envelope square is a pullback", relative);
    relative_segal.witness.truncate(8);
    Ok(SegalEnvelope { pseudofunctor, segal, relative_segal, per_object })
}

const SEGAL: &str = "envelope value is the pseudo-limit over el";

/// `Env(O) -> lim_{el} Env(E)` is fully faithful, and every family it
/// misses is larger than the truncation.
fn segal_at(cand: &FibrousCandidate, env: &EnvelopeFibers, sq: &SquareData) -> Result<Verdict, CatError> {
    let lim = pseudo_limit_cat(&sq.over)?;
    let src = sq.vertical.source.clone();
    let obj = sq
        .cone_over
        .iter()
        .map(|(f, t)| lim.find_object(f, t).ok_or_else(|| CatError::Structure("cone object outside the limit".into())))
        .collect::<Result<Vec<_>, _>>()?;
    let mor = src
        .morphisms()
        .map(|m| {
            lim.find_morphism(obj[src.src(m)], obj[src.tgt(m)], &sq.cone_over_mor[m])
                .ok_or_else(|| CatError::Structure("cone morphism outside the limit".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let cmp = Functor::new(src, lim.cat.clone(), obj.clone(), mor)?;
    if let Some(w) = cmp.faithfulness_witness().or_else(|| cmp.fullness_witness()) {
        return Ok(Verdict::fails(SEGAL, w));
    }
    let (reps, rep, _) = lim.cat.iso_classes();
    let mut hit = vec![false; lim.cat.n_obj()];
    for &o in &obj {
        hit[rep[o]] = true;
    }
    let base = &cand.base;
    let sources = index_sources(&sq.index);
    let mut artifacts = 0;
    for &r in &reps {
        if hit[r] {
            continue;
        }
        let fam = &lim.objects[r].0;
        let total = base.truncation.as_ref().map(|t| {
            sources
                .iter()
                .map(|&a| {
                    let k = sq.kept_over[a].objects[fam[a] as usize];
                    let (q, _) = env.fiber(sq.index_objects[a]).objects[k];
                    t.size[cand.proj.obj(q)]
                })
                .sum::<usize>()
        });
        match (total, &base.truncation) {
            (Some(n), Some(t)) if n > t.cap => artifacts += 1,
            _ => return Ok(Verdict::fails(SEGAL, format!("family {} not in the image", lim.cat.obj_label(r)))),
        }
    }
    let mut v = Verdict::holds(SEGAL);
    if artifacts > 0 {
        v = v.with_note(format!("{artifacts} families above the truncation cap"));
    }
    if sq.dropped > 0 {
        v = v.with_note(format!("{} objects with transports above the cap left out", sq.dropped));
    }
    Ok(v)
}
