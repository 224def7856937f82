//! Fibrous patterns: functors `π: 𝒫 -> 𝒪` with cocartesian lifts of inert
//! maps whose envelope satisfies the Segal condition relative to `𝒪`.

pub mod bridge;
pub mod fibers;
pub mod fixtures;
pub(crate) mod square;

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, OnceLock};

use serde::Serialize;

pub use fibers::{EnvFiber, EnvelopeFibers};

use crate::fincat::{functor_is_equivalence, iso_comma, pseudo_limit_cat, CatBuilder, CatError, Comma, FinCat, Functor, PseudoFunctor};
use crate::pattern::{check_sound, AlgebraicPattern, PatternMorphism, Truncation};
use crate::verdict::Verdict;

/// A functor into the base of a pattern, with cocartesian lifts of inert
/// maps precomputed where they exist.
pub struct FibrousCandidate {
    pub proj: Functor,
    pub base: Arc<AlgebraicPattern>,
    lifts: HashMap<(usize, usize), usize>,
    /// `(p, α, reason)` for every inert `α` out of `πp` without a lift
    pub missing: Vec<(usize, usize, String)>,
    base_sound: OnceLock<Verdict>,
}

impl FibrousCandidate {
    pub fn new(proj: Functor, base: Arc<AlgebraicPattern>) -> Result<Self, CatError> {
        if !Arc::ptr_eq(&proj.target, &base.base) && proj.target.n_mor() != base.base.n_mor() {
            return Err(CatError::Structure("projection does not land in the pattern base".into()));
        }
        let mut lifts = HashMap::new();
        let mut missing = Vec::new();
        let o = &base.base;
        for p in proj.source.objects() {
            for &alpha in o.out_of(proj.obj(p)) {
                let alpha = alpha as usize;
                if !base.inert[alpha] {
                    continue;
                }
                match find_cocartesian_lift(&proj, p, alpha) {
                    Ok(l) => {
                        lifts.insert((p, alpha), l);
                    }
                    Err(e) => missing.push((p, alpha, e)),
                }
            }
        }
        Ok(FibrousCandidate { proj, base, lifts, missing, base_sound: OnceLock::new() })
    }

    /// Identity on the base: every inert map is its own lift.
    pub fn identity(base: Arc<AlgebraicPattern>) -> Self {
        let proj = Functor::identity(base.base.clone());
        let lifts = base.base.morphisms().filter(|&m| base.inert[m]).map(|m| ((base.base.src(m), m), m)).collect();
        FibrousCandidate { proj, base, lifts, missing: Vec::new(), base_sound: OnceLock::new() }
    }

    /// Reuses an already computed soundness verdict for the base.
    pub fn with_base_soundness(self, v: Verdict) -> Self {
        let _ = self.base_sound.set(v);
        self
    }

    pub fn base_soundness(&self) -> &Verdict {
        self.base_sound.get_or_init(|| check_sound(&self.base).verdict)
    }

    pub fn total(&self) -> &Arc<FinCat> {
        &self.proj.source
    }

    /// The chosen cocartesian lift `p -> α_!p` of an inert `α`.
    pub fn lift(&self, p: usize, alpha: usize) -> Option<usize> {
        self.lifts.get(&(p, alpha)).copied()
    }

    /// The unique `u` with `u ∘ l = g` and `πu = h`, for cocartesian `l`.
    pub fn factor_through(&self, l: usize, g: usize, h: usize) -> Option<usize> {
        let p = &self.proj.source;
        let mut hits = p.hom(p.tgt(l), p.tgt(g)).iter().map(|&u| u as usize).filter(|&u| {
            self.proj.mor(u) == h && p.comp(u, l) == Some(g)
        });
        let u = hits.next()?;
        hits.next().is_none().then_some(u)
    }

    pub fn lifts_verdict(&self) -> Verdict {
        const M: &str = "cocartesian lifts of inert maps";
        let (p, o) = (&self.proj.source, &self.base.base);
        let parts = self.missing.iter().map(|(q, a, why)| {
            Verdict::fails(M, format!("{} along {}: {}", p.obj_label(*q), o.mor_label(*a), why))
        });
        let mut v = Verdict::all(M, parts);
        v.witness.truncate(8);
        v
    }
}

/// `f: p -> q` is π-cocartesian when, for every `r`, precomposition with `f`
/// together with `π` is a bijection `𝒫(q, r) -> 𝒫(p, r) ×_{𝒪(πp, πr)} 𝒪(πq, πr)`.
pub fn is_cocartesian(proj: &Functor, f: usize) -> Result<(), String> {
    let (p, o) = (&proj.source, &proj.target);
    let (src, tgt) = (p.src(f), p.tgt(f));
    let pf = proj.mor(f);
    for r in p.objects() {
        let mut over: HashMap<usize, usize> = HashMap::new();
        for &g in p.hom(src, r) {
            *over.entry(proj.mor(g as usize)).or_default() += 1;
        }
        let pairs: usize = o
            .hom(proj.obj(tgt), proj.obj(r))
            .iter()
            .map(|&h| o.comp(h as usize, pf).and_then(|hf| over.get(&hf).copied()).unwrap_or(0))
            .sum();
        let maps = p.hom(tgt, r);
        let mut seen = HashSet::new();
        for &u in maps {
            let u = u as usize;
            if !seen.insert((p.comp(u, f), proj.mor(u))) {
                return Err(format!("two maps out of {} agree after {} at {}", p.obj_label(tgt), p.mor_label(f), p.obj_label(r)));
            }
        }
        if maps.len() != pairs {
            return Err(format!("{} of {} compatible pairs at {} factor through {}", maps.len(), pairs, p.obj_label(r), p.mor_label(f)));
        }
    }
    Ok(())
}

/// A cocartesian morphism out of `p` over `α`: the identity when `α` is
/// one, otherwise the first by index.
pub fn find_cocartesian_lift(proj: &Functor, p: usize, alpha: usize) -> Result<usize, String> {
    let c = &proj.source;
    if proj.target.is_identity(alpha) {
        return Ok(c.id(p));
    }
    let over: Vec<usize> = c.out_of(p).iter().map(|&f| f as usize).filter(|&f| proj.mor(f) == alpha).collect();
    let mut first_failure = None;
    for &f in &over {
        match is_cocartesian(proj, f) {
            Ok(()) => return Ok(f),
            Err(e) => {
                first_failure.get_or_insert(e);
            }
        }
    }
    Err(first_failure.unwrap_or_else(|| "no morphism lies over it".to_string()))
}

#[derive(Clone, Debug, Serialize)]
pub struct FibrousReport {
    pub verdict: Verdict,
    pub lifts: Verdict,
    /// envelope square per base object
    pub direct: Option<Verdict>,
    /// via soundness of the base; absent when the base is not sound
    pub fast: Option<Verdict>,
    pub per_object: Vec<(String, Verdict)>,
}

#[derive(Clone, Copy, Debug)]
pub struct FibrousRoutes {
    pub direct: bool,
    pub fast: bool,
}

impl Default for FibrousRoutes {
    fn default() -> Self {
        FibrousRoutes { direct: true, fast: true }
    }
}

pub fn check_fibrous(cand: &FibrousCandidate) -> FibrousReport {
    check_fibrous_with(cand, FibrousRoutes::default())
}

/// Runs the requested routes. When both run they must agree; a
/// disagreement is reported as unknown.
pub fn check_fibrous_with(cand: &FibrousCandidate, routes: FibrousRoutes) -> FibrousReport {
    const M: &str = "fibrous";
    let lifts = cand.lifts_verdict();
    if lifts.is_fails() {
        let verdict = Verdict::all(M, [lifts.clone()]);
        return FibrousReport { verdict, lifts, direct: None, fast: None, per_object: Vec::new() };
    }
    let mut per_object = Vec::new();
    let direct = routes.direct.then(|| {
        let over = EnvelopeFibers::new(cand);
        let base_cand = FibrousCandidate::identity(cand.base.clone());
        let base = EnvelopeFibers::new(&base_cand);
        let o = &cand.base.base;
        for x in o.objects() {
            let v = match square::SquareData::new(&over, &base, x) {
                Ok(sq) => sq.verdict(),
                Err(e) => Verdict::unknown(square::METHOD, e.to_string()),
            };
            per_object.push((o.obj_label(x).to_string(), v));
        }
        let parts = per_object.iter().map(|(l, v)| v.clone().context(&format!("at {l}")));
        Verdict::all(square::METHOD, parts)
    });
    let fast = (routes.fast && cand.base_soundness().is_holds()).then(|| check_fibrous_sound_base(cand));
    let mut verdict = match (&direct, &fast) {
        (Some(d), Some(f)) if d.status != f.status => Verdict::unknown(M, format!("routes disagree: direct {}, fast {}", d.status, f.status)),
        (Some(d), _) => Verdict::all(M, [d.clone()]),
        (None, Some(f)) => Verdict::all(M, [f.clone()]),
        (None, None) => Verdict::unknown(M, "no route applies"),
    };
    verdict.witness.truncate(8);
    if let Some(t) = &cand.base.truncation {
        verdict = verdict.with_note(format!("relative to {}", t.note));
    }
    FibrousReport { verdict, lifts, direct, fast, per_object }
}

/// Criterion for a sound base: lifts exist (checked by the caller), maps
/// into `X1` are glued from maps into the elementary pushforwards, and the
/// fiber groupoids satisfy the Segal condition.
pub fn check_fibrous_sound_base(cand: &FibrousCandidate) -> Verdict {
    const M: &str = "fibrous over a sound base";
    let parts = [maps_are_glued(cand), fiber_groupoids_segal(cand)];
    let mut v = Verdict::all(M, parts);
    v.witness.truncate(8);
    v
}

fn maps_are_glued(cand: &FibrousCandidate) -> Verdict {
    const M: &str = "maps glue over the elementary slice";
    let (p, o, pi) = (&cand.proj.source, &cand.base.base, &cand.proj);
    for x1 in p.objects() {
        let e1 = pi.obj(x1);
        let el = cand.base.elementary_slice(e1);
        let idx = &el.cat;
        let lift_a: Vec<usize> = match el.arrows.iter().map(|&a| cand.lift(x1, a)).collect::<Option<Vec<_>>>() {
            Some(v) => v,
            None => return Verdict::unknown(M, "missing lift"),
        };
        let mut trans = Vec::with_capacity(idx.n_mor());
        for u in idx.morphisms() {
            match cand.factor_through(lift_a[idx.src(u)], lift_a[idx.tgt(u)], el.conn[u]) {
                Some(t) => trans.push(t),
                None => return Verdict::unknown(M, format!("no transport over {}", o.mor_label(el.conn[u]))),
            }
        }
        for x0 in p.objects() {
            for &h in o.hom(pi.obj(x0), e1) {
                let h = h as usize;
                let ups: Vec<usize> = p.hom(x0, x1).iter().map(|&u| u as usize).filter(|&u| pi.mor(u) == h).collect();
                let mut images = HashSet::new();
                for &u in &ups {
                    let fam: Vec<usize> = lift_a.iter().map(|&l| p.comp(l, u).expect("composable")).collect();
                    if !images.insert(fam) {
                        return Verdict::fails(M, format!("two maps {} -> {} over {} agree on the elementary slice", p.obj_label(x0), p.obj_label(x1), o.mor_label(h)));
                    }
                }
                let families = count_families(cand, x0, h, &el.arrows, &lift_a, idx, &trans);
                if families != ups.len() {
                    return Verdict::fails(
                        M,
                        format!("{} compatible families but {} maps {} -> {} over {}", families, ups.len(), p.obj_label(x0), p.obj_label(x1), o.mor_label(h)),
                    );
                }
            }
        }
    }
    Verdict::holds(M)
}

fn count_families(
    cand: &FibrousCandidate,
    x0: usize,
    h: usize,
    arrows: &[usize],
    lift_a: &[usize],
    idx: &FinCat,
    trans: &[usize],
) -> usize {
    let (p, o, pi) = (&cand.proj.source, &cand.base.base, &cand.proj);
    let options: Vec<Vec<usize>> = arrows
        .iter()
        .zip(lift_a)
        .map(|(&a, &l)| {
            let want = o.comp(a, h);
            p.hom(x0, p.tgt(l)).iter().map(|&g| g as usize).filter(|&g| Some(pi.mor(g)) == want).collect()
        })
        .collect();
    let mut chosen = vec![usize::MAX; arrows.len()];
    fn rec(k: usize, options: &[Vec<usize>], chosen: &mut Vec<usize>, idx: &FinCat, trans: &[usize], p: &FinCat) -> usize {
        if k == options.len() {
            return 1;
        }
        let mut n = 0;
        for &g in &options[k] {
            chosen[k] = g;
            let ok = idx.morphisms().all(|u| {
                let (a, b) = (idx.src(u), idx.tgt(u));
                if a > k || b > k {
                    return true;
                }
                p.comp(trans[u], chosen[a]) == Some(chosen[b])
            });
            if ok {
                n += rec(k + 1, options, chosen, idx, trans, p);
            }
        }
        chosen[k] = usize::MAX;
        n
    }
    rec(0, &options, &mut chosen, idx, trans, p)
}

/// `𝒫_E^≃`: objects over `E`, isomorphisms over `id_E`.
fn fiber_groupoid(cand: &FibrousCandidate, e: usize) -> (Arc<FinCat>, Vec<usize>, Vec<usize>) {
    let (p, o, pi) = (&cand.proj.source, &cand.base.base, &cand.proj);
    let objs: Vec<usize> = p.objects().filter(|&q| pi.obj(q) == e).collect();
    let (full, mor_map) = p.full_subcategory(&objs, format!("P_{}", o.obj_label(e)));
    let keep_obj = vec![true; full.n_obj()];
    let keep_mor: Vec<bool> = full.morphisms().map(|m| full.is_iso(m) && pi.mor(mor_map[m]) == o.id(e)).collect();
    let (g, _, sub_mor) = full.subcategory(&keep_obj, &keep_mor, format!("P_{}^iso", o.obj_label(e))).expect("isos over the identity");
    let mors = sub_mor.iter().map(|&m| mor_map[m]).collect();
    (Arc::new(g), objs, mors)
}

struct GroupoidFibers<'a> {
    cand: &'a FibrousCandidate,
    cats: Vec<(Arc<FinCat>, Vec<usize>, Vec<usize>)>,
    obj_local: Vec<HashMap<usize, usize>>,
    mor_local: Vec<HashMap<usize, usize>>,
}

impl<'a> GroupoidFibers<'a> {
    fn new(cand: &'a FibrousCandidate) -> Self {
        let cats: Vec<_> = cand.base.base.objects().map(|e| fiber_groupoid(cand, e)).collect();
        let obj_local = cats.iter().map(|(_, o, _)| o.iter().enumerate().map(|(i, &q)| (q, i)).collect()).collect();
        let mor_local = cats.iter().map(|(_, _, m)| m.iter().enumerate().map(|(i, &u)| (u, i)).collect()).collect();
        GroupoidFibers { cand, cats, obj_local, mor_local }
    }

    fn push_obj(&self, gamma: usize, q: usize) -> Option<usize> {
        Some(self.cand.proj.source.tgt(self.cand.lift(q, gamma)?))
    }

    /// `γ_!w` for an iso `w: q -> q'` over the identity.
    fn push_mor(&self, gamma: usize, w: usize) -> Option<usize> {
        let (p, o) = (&self.cand.proj.source, &self.cand.base.base);
        let (l, l2) = (self.cand.lift(p.src(w), gamma)?, self.cand.lift(p.tgt(w), gamma)?);
        self.cand.factor_through(l, p.comp(l2, w)?, o.id(o.tgt(gamma)))
    }

    /// `(γ2)_!(γ1)_!q -> (γ2γ1)_!q` over the identity.
    fn compare(&self, gamma2: usize, gamma1: usize, q: usize) -> Option<usize> {
        let (p, o) = (&self.cand.proj.source, &self.cand.base.base);
        let l1 = self.cand.lift(q, gamma1)?;
        let l2 = self.cand.lift(p.tgt(l1), gamma2)?;
        let l3 = self.cand.lift(q, o.comp(gamma2, gamma1)?)?;
        self.cand.factor_through(p.comp(l2, l1)?, l3, o.id(o.tgt(gamma2)))
    }

    fn diagram(&self, index: &Arc<FinCat>, obj_of: &[usize], conn: &[usize]) -> Option<PseudoFunctor> {
        let o = &self.cand.base.base;
        let values: Vec<Arc<FinCat>> = obj_of.iter().map(|&e| self.cats[e].0.clone()).collect();
        let mut transports = Vec::new();
        for u in index.morphisms() {
            let (a, b) = (obj_of[index.src(u)], obj_of[index.tgt(u)]);
            let obj = self.cats[a].1.iter().map(|&q| self.obj_local[b].get(&self.push_obj(conn[u], q)?).copied()).collect::<Option<Vec<_>>>()?;
            let mor = self.cats[a].2.iter().map(|&w| self.mor_local[b].get(&self.push_mor(conn[u], w)?).copied()).collect::<Option<Vec<_>>>()?;
            transports.push(Functor::new_unchecked(values[index.src(u)].clone(), values[index.tgt(u)].clone(), obj, mor));
        }
        let mut compositors = HashMap::new();
        for f in index.morphisms() {
            for &g in index.out_of(index.tgt(f)) {
                let g = g as usize;
                if index.comp(g, f).is_none() {
                    continue;
                }
                let e = obj_of[index.tgt(g)];
                let comps = self.cats[obj_of[index.src(f)]]
                    .1
                    .iter()
                    .map(|&q| self.mor_local[e].get(&self.compare(conn[g], conn[f], q)?).map(|&m| m as u32))
                    .collect::<Option<Vec<u32>>>()?;
                compositors.insert((g as u32, f as u32), comps);
            }
        }
        let unitors = index
            .objects()
            .map(|i| {
                let e = obj_of[i];
                self.cats[e].1.iter().map(|&q| self.mor_local[e].get(&self.cand.lift(q, o.id(e))?).map(|&m| m as u32)).collect()
            })
            .collect::<Option<Vec<Vec<u32>>>>()?;
        let pf = PseudoFunctor::new(index.clone(), values, transports, compositors, unitors);
        pf.validate().ok()?;
        Some(pf)
    }
}

fn fiber_groupoids_segal(cand: &FibrousCandidate) -> Verdict {
    const M: &str = "fiber groupoids are Segal";
    let fibers = GroupoidFibers::new(cand);
    let o = &cand.base.base;
    let mut parts = Vec::new();
    for x in o.objects() {
        let el = cand.base.elementary_slice(x);
        let obj_of: Vec<usize> = el.arrows.iter().map(|&a| o.tgt(a)).collect();
        let Some(diagram) = fibers.diagram(&el.cat, &obj_of, &el.conn) else {
            parts.push(Verdict::unknown(M, format!("fiber diagram at {} is incomplete", o.obj_label(x))));
            continue;
        };
        let lim = match pseudo_limit_cat(&diagram) {
            Ok(l) => l,
            Err(e) => {
                parts.push(Verdict::unknown(M, e.to_string()));
                continue;
            }
        };
        let (src, objs, mors) = &fibers.cats[x];
        let idx = &el.cat;
        let mut obj = Vec::new();
        let mut ok = true;
        for &q in objs {
            let found = (|| {
                let fam: Vec<u32> = el
                    .arrows
                    .iter()
                    .zip(&obj_of)
                    .map(|(&a, &e)| fibers.obj_local[e].get(&fibers.push_obj(a, q)?).map(|&v| v as u32))
                    .collect::<Option<_>>()?;
                let theta: Vec<u32> = idx
                    .morphisms()
                    .map(|u| {
                        let e = obj_of[idx.tgt(u)];
                        fibers.mor_local[e].get(&fibers.compare(el.conn[u], el.arrows[idx.src(u)], q)?).map(|&m| m as u32)
                    })
                    .collect::<Option<_>>()?;
                lim.find_object(&fam, &theta)
            })();
            match found {
                Some(v) => obj.push(v),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            parts.push(Verdict::unknown(M, format!("cone at {} is not a pseudo-limit object", o.obj_label(x))));
            continue;
        }
        let mut mor = Vec::new();
        for (m, &w) in mors.iter().enumerate() {
            let comps: Option<Vec<u32>> = el
                .arrows
                .iter()
                .zip(&obj_of)
                .map(|(&a, &e)| fibers.mor_local[e].get(&fibers.push_mor(a, w)?).map(|&v| v as u32))
                .collect();
            let (s, t) = (obj[src.src(m)], obj[src.tgt(m)]);
            match comps.and_then(|c| lim.find_morphism(s, t, &c)) {
                Some(v) => mor.push(v),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            parts.push(Verdict::unknown(M, format!("cone map at {} is not a pseudo-limit morphism", o.obj_label(x))));
            continue;
        }
        let cmp = Functor::new_unchecked(src.clone(), lim.cat.clone(), obj, mor);
        parts.push(functor_is_equivalence(&cmp).context(&format!("over {} ({} objects upstairs)", o.obj_label(x), src.n_obj())));
    }
    Verdict::all(M, parts)
}

/// The pattern structure on `𝒫` pulled back along a fibrous `π`: inert
/// maps are cocartesian maps over inert ones, active maps lie over active
/// ones, elementary objects over elementary ones.
pub fn induced_pattern_structure(cand: &FibrousCandidate) -> Result<PatternMorphism, CatError> {
    if let Some((q, a, why)) = cand.missing.first() {
        return Err(CatError::Structure(format!(
            "no cocartesian lift of {} at {}: {why}",
            cand.base.base.mor_label(*a),
            cand.total().obj_label(*q)
        )));
    }
    let (p, pi, base) = (cand.total(), &cand.proj, &cand.base);
    let inert = p.morphisms().map(|m| base.inert[pi.mor(m)] && is_cocartesian(pi, m).is_ok()).collect();
    let active = p.morphisms().map(|m| base.active[pi.mor(m)]).collect();
    let elementary = p.objects().map(|q| base.elementary[pi.obj(q)]).collect();
    let truncation = base.truncation.as_ref().map(|t| Truncation {
        size: p.objects().map(|q| t.size[pi.obj(q)]).collect(),
        cap: t.cap,
        note: t.note.clone(),
    });
    let pat = AlgebraicPattern::new(format!("{}/{}", p.name(), base.name), p.clone(), inert, active, elementary, truncation);
    PatternMorphism::new(pi.clone(), Arc::new(pat), base.clone())
}

/// Every `f^el_{X/}` is an equivalence.
pub fn check_iso_segal(f: &PatternMorphism) -> Verdict {
    const M: &str = "elementary slices are preserved";
    let s = &f.source.base;
    let parts = s.objects().map(|x| functor_is_equivalence(&f.el_slice_functor(x)).context(&format!("at {}", s.obj_label(x))));
    let mut v = Verdict::all(M, parts);
    v.witness.truncate(8);
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct OverReport {
    /// `F: 𝒬 -> 𝒫` against the induced structure on `𝒫`
    pub upper: Verdict,
    /// `πF: 𝒬 -> 𝒪`
    pub composite: Verdict,
    pub agree: bool,
}

/// `F` is fibrous over the induced structure on `𝒫` exactly when `πF` is
/// fibrous over `𝒪`; both sides are checked.
pub fn check_fibrous_over(upper: &Functor, lower: &FibrousCandidate) -> Result<OverReport, CatError> {
    let induced = induced_pattern_structure(lower)?;
    let upper_cand = FibrousCandidate::new(upper.clone(), induced.source.clone())?;
    let comp = FibrousCandidate::new(lower.proj.after(upper), lower.base.clone())?
        .with_base_soundness(lower.base_soundness().clone());
    let u = check_fibrous(&upper_cand).verdict;
    let c = check_fibrous(&comp).verdict;
    let agree = u.status == c.status;
    Ok(OverReport { upper: u, composite: c, agree })
}

/// `f^*π: 𝒪 ×_𝒫 ℰ -> 𝒪` for a strong Segal `f: 𝒪 -> 𝒫` and a fibrous
/// `π: ℰ -> 𝒫`, as the iso-comma with its right projection.
pub struct Pullback {
    pub comma: Comma,
    pub candidate: FibrousCandidate,
    pub report: FibrousReport,
}

pub fn pullback_fibrous(f: &PatternMorphism, pi: &FibrousCandidate) -> Result<Pullback, CatError> {
    let segal = crate::compare::check_strong_segal(f);
    if !segal.is_holds() {
        return Err(CatError::Structure(format!("pattern morphism is not strong Segal: {segal}")));
    }
    let fib = check_fibrous(pi);
    if !fib.verdict.is_holds() {
        return Err(CatError::Structure(format!("projection is not fibrous: {}", fib.verdict)));
    }
    let comma = iso_comma(&pi.proj, &f.functor)?;
    let candidate = FibrousCandidate::new(comma.proj_right.clone(), f.source.clone())?;
    let report = check_fibrous(&candidate);
    Ok(Pullback { comma, candidate, report })
}

/// `𝒫 ⊔ 𝒫 -> 𝒫`, the fold of two disjoint copies.
pub fn disjoint_double(c: &Arc<FinCat>) -> (Arc<FinCat>, Functor) {
    let mut b = CatBuilder::new(format!("{}+{}", c.name(), c.name()));
    for copy in 0..2 {
        for o in c.objects() {
            b.add_object(format!("{}#{copy}", c.obj_label(o)));
        }
    }
    let (no, nm) = (c.n_obj(), c.n_mor());
    for copy in 0..2 {
        for m in c.morphisms() {
            let id = b.add_morphism(format!("{}#{copy}", c.mor_label(m)), c.src(m) + copy * no, c.tgt(m) + copy * no);
            if c.is_identity(m) {
                b.set_identity(c.src(m) + copy * no, id);
            }
        }
    }
    let cat = b
        .build_with(|g, f| {
            if (g < nm) != (f < nm) {
                return None;
            }
            let off = if f < nm { 0 } else { nm };
            c.comp(g - off, f - off).map(|h| h + off)
        })
        .expect("coproduct composes");
    let cat = Arc::new(cat);
    let obj = (0..2 * no).map(|o| o % no).collect();
    let mor = (0..2 * nm).map(|m| m % nm).collect();
    let fold = Functor::new_unchecked(cat.clone(), c.clone(), obj, mor);
    (cat, fold)
}

#[cfg(test)]
mod tests;
