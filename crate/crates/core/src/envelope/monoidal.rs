//! Symmetric monoidal categories over `(𝔽, ⊔)`, modeled as Segal
//! fibrations over `𝔽*^{≤k}` with a map to `Ar_act(𝔽*^{≤k})`: the
//! binary-fold reduction of equifiberedness and the decomposition
//! conditions (1) and (2′).

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::Serialize;

use super::{check_equifibered, free_fibration, transport_square, ArrowRightCat, CocartesianFibration, EquifiberedReport};
use crate::catalog::finstar::pointed_map_label;
use crate::catalog::operads::parse_pointed_map;
use crate::catalog::{fin_star, Flavor};
use crate::fibrous::FibrousCandidate;
use crate::fincat::{CatError, FinCat, Functor};
use crate::pattern::check_sound;
use crate::verdict::Verdict;

pub struct MonoidalModel {
    pub name: String,
    /// `(𝔽, ⊔)` over `𝔽*^{≤k}`
    pub ar: ArrowRightCat,
    pub total: CocartesianFibration,
    /// the monoidal functor to `𝔽`, as a map into `Ar_act`
    pub map: Functor,
    /// size of each object in the truncated model, at most `k` over `⟨1⟩`
    pub weight: Vec<usize>,
}

struct Labels(HashMap<String, usize>);

impl Labels {
    fn new(c: &FinCat) -> Self {
        Labels(c.morphisms().map(|m| (c.mor_label(m).to_string(), m)).collect())
    }

    fn get(&self, m: usize, n: usize, f: &[u8]) -> usize {
        self.0[&pointed_map_label(m, n, f)]
    }
}

/// `μ_n: ⟨n⟩ ⇝ ⟨1⟩`
fn fold(labels: &Labels, n: usize) -> usize {
    labels.get(n, 1, &vec![1; n])
}

/// `ρ_i: ⟨n⟩ ↣ ⟨1⟩`
fn restriction(labels: &Labels, n: usize, i: usize) -> usize {
    let f: Vec<u8> = (0..n).map(|j| (j == i) as u8).collect();
    labels.get(n, 1, &f)
}

fn own_weight(ar: &ArrowRightCat) -> Vec<usize> {
    ar.cat.objects().map(|j| ar.ev0.obj(j)).collect()
}

impl MonoidalModel {
    pub fn k(&self) -> usize {
        self.ar.pattern.base.n_obj() - 1
    }

    /// `|π(x)|`
    pub fn size(&self, x: usize) -> usize {
        self.ar.ev0.obj(self.map.obj(x))
    }

    /// `𝔽 -> 𝔽` itself.
    pub fn identity(k: usize) -> Result<Self, CatError> {
        let ar = ArrowRightCat::new(Arc::new(fin_star(k, Flavor::Flat)))?;
        let total = ar.target_fibration();
        let map = Functor::identity(ar.cat.clone());
        let weight = own_weight(&ar);
        Ok(MonoidalModel { name: format!("F<={k}"), ar, total, map, weight })
    }

    /// The envelope of a fibrous pattern over `𝔽*^{≤k}`.
    pub fn envelope(cand: &FibrousCandidate) -> Result<Self, CatError> {
        let ar = ArrowRightCat::new(cand.base.clone())?;
        let env = free_fibration(cand, &ar)?;
        let weight = env.objects.iter().map(|&(_, j)| ar.ev0.obj(j)).collect();
        Ok(MonoidalModel { name: format!("Env({})", cand.total().name()), ar, total: env.fibration, map: env.structure, weight })
    }

    /// `𝔽 -> * -> 𝔽`: every finite set goes to the empty one.
    pub fn terminal(k: usize) -> Result<Self, CatError> {
        let ar = ArrowRightCat::new(Arc::new(fin_star(k, Flavor::Flat)))?;
        let base = ar.pattern.base.clone();
        let labels = Labels::new(&base);
        let empty: Vec<usize> = (0..=k).map(|n| ar.object_of(labels.get(0, n, &[])).expect("empty maps are active")).collect();
        let obj: Vec<usize> = ar.arrows.iter().map(|&f| empty[base.tgt(f)]).collect();
        let mor = ar
            .cat
            .morphisms()
            .map(|s| {
                let (src, tgt) = (obj[ar.cat.src(s)], obj[ar.cat.tgt(s)]);
                ar.find_square(src, tgt, base.id(0), ar.squares[s].1).expect("squares out of the empty set")
            })
            .collect();
        let total = ar.target_fibration();
        let map = Functor::new_unchecked(ar.cat.clone(), ar.cat.clone(), obj, mor);
        let weight = own_weight(&ar);
        Ok(MonoidalModel { name: format!("F<={k} -> *"), ar, total, map, weight })
    }

    /// `x ↦ x ⊔ x` on sets of size at most `k/2`. No object of size one
    /// lies over a singleton.
    pub fn doubling(k: usize) -> Result<Self, CatError> {
        let ar = ArrowRightCat::new(Arc::new(fin_star(k, Flavor::Flat)))?;
        let base = ar.pattern.base.clone();
        let labels = Labels::new(&base);
        let keep: Vec<usize> = ar.cat.objects().filter(|&j| 2 * base.src(ar.arrows[j]) <= k).collect();
        let (cat, mors) = ar.cat.full_subcategory(&keep, format!("F<={}", k / 2));
        let cat = Arc::new(cat);
        let double = |h: usize| {
            let (m, n) = (base.src(h), base.tgt(h));
            let f = parse_pointed_map(base.mor_label(h));
            let g: Vec<u8> = f.iter().copied().chain(f.iter().map(|&x| if x == 0 { 0 } else { x + n as u8 })).collect();
            labels.get(2 * m, 2 * n, &g)
        };
        let folds: Vec<Option<usize>> = (0..=k)
            .map(|m| {
                (2 * m <= k).then(|| {
                    let f: Vec<u8> = (1..=m as u8).chain(1..=m as u8).collect();
                    labels.get(2 * m, m, &f)
                })
            })
            .collect();
        let obj: Vec<usize> = keep
            .iter()
            .map(|&j| {
                let f = ar.arrows[j];
                let composite = base.comp(f, folds[base.src(f)].expect("kept")).expect("composable");
                ar.object_of(composite).expect("composites of actives are active")
            })
            .collect();
        let mor: Vec<usize> = mors
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let (h, k) = ar.squares[s];
                ar.find_square(obj[cat.src(i)], obj[cat.tgt(i)], double(h), k).expect("doubled square")
            })
            .collect();
        let proj = Functor::new_unchecked(
            cat.clone(),
            base.clone(),
            keep.iter().map(|&j| ar.ev1.obj(j)).collect(),
            mors.iter().map(|&s| ar.ev1.mor(s)).collect(),
        );
        let designated = mors.iter().map(|&s| ar.pattern.inert[ar.squares[s].0]).collect();
        let total = CocartesianFibration::new(proj, designated);
        let weight = keep.iter().map(|&j| 2 * ar.ev0.obj(j)).collect();
        let map = Functor::new(cat, ar.cat.clone(), obj, mor)?;
        Ok(MonoidalModel { name: format!("F<={} doubled", k / 2), ar, total, map, weight })
    }

    fn lower(&self) -> CocartesianFibration {
        self.ar.target_fibration()
    }
}

const SEGAL: &str = "fibers over <n> are n-fold products within the truncation";

/// `𝒞_⟨n⟩ -> 𝒞_⟨1⟩^n` is fully faithful, and hits every tuple of total
/// weight at most `k`.
pub fn check_model_segal(model: &MonoidalModel) -> Verdict {
    let base = &model.ar.pattern.base;
    let labels = Labels::new(base);
    let one = model.total.fiber(1);
    let (reps, rep, _) = one.cat.iso_classes();
    let mut parts = Vec::new();
    for n in 0..=model.k() {
        let fiber = model.total.fiber(n);
        let legs = match (0..n).map(|i| model.total.transport(restriction(&labels, n, i))).collect::<Result<Vec<_>, _>>() {
            Ok(l) => l,
            Err(e) => return Verdict::unknown(SEGAL, e.to_string()),
        };
        let c = &fiber.cat;
        let mut hit = HashSet::new();
        'pairs: for w in c.objects() {
            hit.insert(legs.iter().map(|l| rep[l.obj(w)]).collect::<Vec<_>>());
            for w2 in c.objects() {
                let homs = c.hom(w, w2);
                let product: usize = legs.iter().map(|l| one.cat.hom(l.obj(w), l.obj(w2)).len()).product();
                let images: HashSet<Vec<usize>> = homs.iter().map(|&u| legs.iter().map(|l| l.mor(u as usize)).collect()).collect();
                if images.len() != homs.len() || homs.len() != product {
                    parts.push(Verdict::fails(
                        SEGAL,
                        format!("{} -> {} over <{n}>: {} maps, {} in the product", c.obj_label(w), c.obj_label(w2), homs.len(), product),
                    ));
                    break 'pairs;
                }
            }
        }
        let sizes: HashMap<usize, usize> = reps.iter().map(|&r| (r, model.weight[one.objects[r]])).collect();
        let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..n {
            tuples = tuples.into_iter().flat_map(|t| reps.iter().map(move |&r| [t.clone(), vec![r]].concat())).collect();
        }
        let k = model.k();
        if let Some(t) = tuples.iter().find(|t| t.iter().map(|r| sizes[r]).sum::<usize>() <= k && !hit.contains(*t)) {
            let names: Vec<&str> = t.iter().map(|&r| one.cat.obj_label(r)).collect();
            parts.push(Verdict::fails(SEGAL, format!("no object over <{n}> restricts to ({})", names.join(", "))));
        }
    }
    Verdict::all(SEGAL, parts)
}

#[derive(Clone, Debug, Serialize)]
pub struct MonoidalReport {
    /// the square at `μ₂: ⟨2⟩ ⇝ ⟨1⟩` alone
    pub verdict: Verdict,
    pub full: EquifiberedReport,
    pub agree: bool,
}

/// Equifiberedness over `(𝔽, ⊔)` through the binary fold only, with the
/// square at every active map computed alongside.
pub fn check_monoidal_equifibered_over_f(model: &MonoidalModel) -> Result<MonoidalReport, CatError> {
    const M: &str = "fold square C x C -> C over F x F -> F is cartesian";
    let segal = check_model_segal(model);
    if !segal.is_holds() {
        return Err(CatError::Structure(format!("input is not Segal: {}", segal.witness.first().or(segal.reason.as_ref()).map_or("", |s| s))));
    }
    let base = &model.ar.pattern.base;
    if model.k() < 2 {
        return Err(CatError::Structure("the fold <2> -> <1> needs k >= 2".into()));
    }
    let mu = fold(&Labels::new(base), 2);
    let lower = model.lower();
    let binary = transport_square(&model.total, &lower, &model.map, mu)?;
    let binary = Verdict { method: M.into(), ..binary };
    let full = check_equifibered(&model.total, &lower, &model.map, &model.ar.pattern, &check_sound(&model.ar.pattern).verdict);
    let agree = binary.status == full.verdict.status;
    let verdict = if agree { binary } else { Verdict::unknown(M, format!("fold square {binary} but full family {}", full.verdict)) };
    Ok(MonoidalReport { verdict, full, agree })
}

#[derive(Clone, Debug, Serialize)]
pub struct HkReport {
    pub verdict: Verdict,
    /// (1): objects are tensor products of objects over a singleton
    pub decomposition: Verdict,
    /// (2′) at n = 2 and n = 0
    pub mapping: Verdict,
}

const HK: &str = "decomposition (1) and mapping condition (2')";

pub fn check_hk_conditions(model: &MonoidalModel) -> HkReport {
    let segal = check_model_segal(model);
    if !segal.is_holds() {
        let v = Verdict::unknown(HK, format!("input is not Segal: {segal}"));
        return HkReport { verdict: v.clone(), decomposition: v.clone(), mapping: v };
    }
    let run = || -> Result<(Verdict, Verdict), CatError> { Ok((decomposition(model)?, mapping(model)?)) };
    let (decomposition, mapping) = match run() {
        Ok(p) => p,
        Err(e) => {
            let v = Verdict::unknown(HK, e.to_string());
            return HkReport { verdict: v.clone(), decomposition: v.clone(), mapping: v };
        }
    };
    let verdict = Verdict::all(HK, [decomposition.clone(), mapping.clone()]);
    HkReport { verdict, decomposition, mapping }
}

/// (1): every `x` over `⟨1⟩` is `μ_!(y)` for some `y` over `⟨|πx|⟩` whose
/// restrictions all have size one.
fn decomposition(model: &MonoidalModel) -> Result<Verdict, CatError> {
    const M: &str = "every object is a tensor product of objects of size one";
    let base = &model.ar.pattern.base;
    let labels = Labels::new(base);
    let one = model.total.fiber(1);
    let (_, rep, _) = one.cat.iso_classes();
    let mut products: Vec<HashSet<usize>> = Vec::new();
    for n in 0..=model.k() {
        let mu = model.total.transport(fold(&labels, n))?;
        let legs = (0..n).map(|i| model.total.transport(restriction(&labels, n, i))).collect::<Result<Vec<_>, _>>()?;
        let ok = model.total.fiber(n).cat.objects().filter(|&y| legs.iter().all(|l| model.size(one.objects[l.obj(y)]) == 1));
        products.push(ok.map(|y| rep[mu.obj(y)]).collect());
    }
    let mut parts = Vec::new();
    for x in one.cat.objects() {
        let m = model.size(one.objects[x]);
        if !products[m].contains(&rep[x]) {
            parts.push(Verdict::fails(M, format!("{} (size {m}) is no product of objects of size one", one.cat.obj_label(x))));
        }
    }
    let mut v = Verdict::all(M, parts);
    v.witness.truncate(8);
    Ok(v)
}

/// (2′): `μ_!` maps `𝒞_⟨n⟩(w, w')` bijectively onto the maps
/// `μ_!w -> μ_!w'` lying over a map of the form `h_1 ⊔ ⋯ ⊔ h_n`.
fn mapping(model: &MonoidalModel) -> Result<Verdict, CatError> {
    const M: &str = "tensor maps are exactly the decomposed maps";
    let base = &model.ar.pattern.base;
    let labels = Labels::new(base);
    let one = model.total.fiber(1);
    let total = model.total.total();
    let mut parts = Vec::new();
    for n in [0, 2] {
        let mu = fold(&labels, n);
        let push = model.total.transport(mu)?;
        let fiber = model.total.fiber(n);
        // the inert part of the square under the chosen lift at w
        let twist: Vec<usize> = fiber
            .objects
            .iter()
            .map(|&w| {
                let l = model.total.lift(w, mu).expect("transport succeeded");
                model.ar.squares[model.map.mor(l)].0
            })
            .collect();
        let arrow = |w: usize| model.ar.arrows[model.map.obj(fiber.objects[w])];
        'pairs: for w in fiber.cat.objects() {
            for w2 in fiber.cat.objects() {
                let (f, f2) = (arrow(w), arrow(w2));
                let back = base.inverse(twist[w2]).expect("lifts of actives twist by isomorphisms");
                let decomposed: HashSet<usize> = one
                    .cat
                    .hom(push.obj(w), push.obj(w2))
                    .iter()
                    .map(|&g| g as usize)
                    .filter(|&g| {
                        let h = model.ar.squares[model.map.mor(one.morphisms[g])].0;
                        let h = base.comp(back, base.comp(h, twist[w]).expect("composable")).expect("composable");
                        base.comp(f2, h) == Some(f)
                    })
                    .collect();
                let homs = fiber.cat.hom(w, w2);
                let images: HashSet<usize> = homs.iter().map(|&u| push.mor(u as usize)).collect();
                if images.len() != homs.len() || images != decomposed {
                    parts.push(Verdict::fails(
                        M,
                        format!(
                            "{} -> {} over <{n}>: {} maps, {} distinct tensors, {} decomposed maps",
                            total.obj_label(fiber.objects[w]),
                            total.obj_label(fiber.objects[w2]),
                            homs.len(),
                            images.len(),
                            decomposed.len()
                        ),
                    ));
                    break 'pairs;
                }
            }
        }
    }
    Ok(Verdict::all(M, parts))
}
