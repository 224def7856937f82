//! Extendability: the active slice `𝒪^act_{/X}` compared with the
//! pseudo-limit of the active slices over `𝒪^el_{X/}`.
//!
//! In a truncated model, transporting an active map along an inert one can
//! leave the model. Such objects are dropped (and reported), and the
//! comparison runs on what remains. Families of the pseudo-limit that are not
//! hit are classified as truncation artifacts when the object they would
//! assemble into is larger than the cap.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::AlgebraicPattern;
use crate::fincat::{CatError, FinCat, Functor, LimitObject, PseudoFunctor, PseudoLimitView};

/// Largest pseudo-limit whose objects are enumerated.
const OBJECT_CAP: usize = 20_000;
use crate::verdict::Verdict;

/// Transport of active slices along arbitrary morphisms of the base, by
/// taking active parts of composites.
pub struct ActiveSlices<'a> {
    pub pattern: &'a AlgebraicPattern,
    lookup: Vec<HashMap<usize, usize>>,
}

impl<'a> ActiveSlices<'a> {
    pub fn new(p: &'a AlgebraicPattern) -> Self {
        let lookup = p
            .base
            .objects()
            .map(|o| p.active_slice(o).arrows.iter().enumerate().map(|(k, &a)| (a, k)).collect())
            .collect();
        ActiveSlices { pattern: p, lookup }
    }

    pub fn object_of(&self, arrow: usize) -> Option<usize> {
        let c = &self.pattern.base;
        self.lookup[c.tgt(arrow)].get(&arrow).copied()
    }

    /// `φ_!(k)` together with the inert part of `φ ∘ a_k`.
    pub fn transport_obj(&self, phi: usize, k: usize) -> Option<(usize, usize)> {
        let p = self.pattern;
        let a = p.active_slice(p.base.src(phi)).arrows[k];
        let (i, a2) = p.factor_composite(phi, a)?;
        Some((self.object_of(a2)?, i))
    }

    /// `φ_!(w)`: the active filler between the transported objects.
    pub fn transport_mor(&self, phi: usize, w: usize) -> Option<usize> {
        let p = self.pattern;
        let c = &p.base;
        let s = p.active_slice(c.src(phi));
        let t = p.active_slice(c.tgt(phi));
        let (k1, k2) = (s.cat.src(w), s.cat.tgt(w));
        let (t1, i1) = self.transport_obj(phi, k1)?;
        let (t2, i2) = self.transport_obj(phi, k2)?;
        let want = c.comp(i2, s.conn[w])?;
        let mut hits = t.cat.hom(t1, t2).iter().map(|&v| v as usize).filter(|&v| c.comp(t.conn[v], i1) == Some(want));
        let v = hits.next()?;
        hits.next().is_none().then_some(v)
    }

    /// The comparison `ψ_!φ_!(k) -> (ψφ)_!(k)`.
    pub fn compositor(&self, psi: usize, phi: usize, k: usize) -> Option<usize> {
        let p = self.pattern;
        let c = &p.base;
        let (k1, i1) = self.transport_obj(phi, k)?;
        let (k2, i2) = self.transport_obj(psi, k1)?;
        let (k3, i3) = self.transport_obj(c.comp(psi, phi)?, k)?;
        let t = p.active_slice(c.tgt(psi));
        let i21 = c.comp(i2, i1)?;
        let mut hits = t.cat.hom(k2, k3).iter().map(|&v| v as usize).filter(|&v| c.comp(t.conn[v], i21) == Some(i3));
        let v = hits.next()?;
        hits.next().is_none().then_some(v)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MissingFamily {
    pub object: String,
    /// source of the active map chosen at each index object
    pub family: Vec<String>,
    pub total_size: Option<usize>,
    pub artifact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtendReport {
    /// the comparison functors are all equivalences
    pub verdict: Verdict,
    /// every failure is explained by the truncation
    pub within_bound: Verdict,
    pub per_object: Vec<(String, Verdict)>,
    pub missing: Vec<MissingFamily>,
    /// objects of `𝒪^act_{/X}` dropped because a transport leaves the model
    pub dropped: Vec<(String, usize)>,
}

struct ObjectOutcome {
    verdict: Verdict,
    genuine: bool,
    missing: Vec<MissingFamily>,
    dropped: usize,
}

pub fn check_extendable(p: &AlgebraicPattern) -> ExtendReport {
    const M: &str = "active slice equivalent to pseudo-limit over el";
    let slices = ActiveSlices::new(p);
    let mut per_object = Vec::new();
    let mut missing = Vec::new();
    let mut dropped = Vec::new();
    let mut genuine = Vec::new();
    for x in p.base.objects() {
        let label = p.base.obj_label(x).to_string();
        let out = match extend_at(p, &slices, x) {
            Ok(o) => o,
            Err(e) => ObjectOutcome {
                verdict: Verdict::unknown(M, e.to_string()),
                genuine: false,
                missing: vec![],
                dropped: 0,
            },
        };
        if out.dropped > 0 {
            dropped.push((label.clone(), out.dropped));
        }
        if out.genuine {
            genuine.push(label.clone());
        }
        missing.extend(out.missing);
        per_object.push((label, out.verdict));
    }
    let parts = per_object.iter().map(|(l, v)| v.clone().context(&format!("at {l}")));
    let mut verdict = Verdict::all(M, parts);
    verdict.witness.truncate(8);
    if verdict.is_holds() && !dropped.is_empty() {
        verdict = Verdict::unknown(M, format!("transports leave the model at {} objects", dropped.len()));
    }
    let any_unknown = per_object.iter().any(|(_, v)| v.is_unknown());
    let within_bound = if !genuine.is_empty() {
        Verdict::fails("extendable within truncation", format!("genuine failure at {}", genuine.join(", ")))
    } else if any_unknown {
        Verdict::unknown("extendable within truncation", "undecided objects")
    } else {
        let n_art = missing.iter().filter(|m| m.artifact).count();
        let mut v = Verdict::holds("extendable within truncation");
        if n_art > 0 {
            v = v.with_note(format!("{n_art} unhit families exceed the truncation cap"));
        }
        if !dropped.is_empty() {
            v = v.with_note(format!("{} objects with transports outside the model", dropped.len()));
        }
        v
    };
    if p.truncation.is_some() {
        verdict = verdict.with_note(p.truncation_note());
    }
    ExtendReport { verdict, within_bound, per_object, missing, dropped }
}

fn extend_at(p: &AlgebraicPattern, sl: &ActiveSlices, x: usize) -> Result<ObjectOutcome, CatError> {
    const M: &str = "active slice equivalent to pseudo-limit over el";
    let c = &p.base;
    let el = p.elementary_slice(x);
    let idx = el.cat.clone();
    let target_of = |a: usize| c.tgt(el.arrows[a]);
    // greatest family of subsets closed under all index transports
    let mut keep: Vec<Vec<bool>> = idx.objects().map(|a| vec![true; p.active_slice(target_of(a)).arrows.len()]).collect();
    loop {
        let mut changed = false;
        for a in idx.objects() {
            for k in 0..keep[a].len() {
                if !keep[a][k] {
                    continue;
                }
                let ok = idx.out_of(a).iter().all(|&u| {
                    let u = u as usize;
                    sl.transport_obj(el.conn[u], k).is_some_and(|(k2, _)| keep[idx.tgt(u)][k2])
                });
                if !ok {
                    keep[a][k] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut values = Vec::new();
    let mut local: Vec<HashMap<usize, usize>> = Vec::new();
    let mut global: Vec<Vec<usize>> = Vec::new();
    let mut mor_local: Vec<HashMap<usize, usize>> = Vec::new();
    for a in idx.objects() {
        let s = p.active_slice(target_of(a));
        let objs: Vec<usize> = (0..keep[a].len()).filter(|&k| keep[a][k]).collect();
        let (v, mm) = s.cat.full_subcategory(&objs, format!("A({})", c.obj_label(target_of(a))));
        local.push(objs.iter().enumerate().map(|(i, &k)| (k, i)).collect());
        mor_local.push(mm.iter().enumerate().map(|(i, &m)| (m, i)).collect());
        global.push(objs);
        values.push(Arc::new(v));
    }
    let err = |s: String| CatError::Structure(s);
    let mut transports = Vec::new();
    for u in idx.morphisms() {
        let (a, b) = (idx.src(u), idx.tgt(u));
        let phi = el.conn[u];
        let sv = p.active_slice(target_of(a));
        let obj: Vec<usize> = global[a]
            .iter()
            .map(|&k| local[b][&sl.transport_obj(phi, k).unwrap().0])
            .collect();
        let src_mm = &values[a];
        let mut mor = Vec::with_capacity(src_mm.n_mor());
        let inv_mor: HashMap<usize, usize> = mor_local[a].iter().map(|(&g, &l)| (l, g)).collect();
        for m in src_mm.morphisms() {
            let w = inv_mor[&m];
            debug_assert!(sv.cat.src(w) < sv.arrows.len());
            let v = sl
                .transport_mor(phi, w)
                .ok_or_else(|| err(format!("no unique active filler along {}", c.mor_label(phi))))?;
            mor.push(mor_local[b][&v]);
        }
        transports.push(Functor::new(values[a].clone(), values[b].clone(), obj, mor)?);
    }
    let mut compositors = HashMap::new();
    for f in idx.morphisms() {
        for &g in idx.out_of(idx.tgt(f)) {
            let g = g as usize;
            if idx.comp(g, f).is_none() {
                continue;
            }
            let tgt = idx.tgt(g);
            let comps = global[idx.src(f)]
                .iter()
                .map(|&k| {
                    sl.compositor(el.conn[g], el.conn[f], k)
                        .and_then(|w| mor_local[tgt].get(&w).copied())
                        .map(|w| w as u32)
                        .ok_or_else(|| err(format!("no unique compositor at {} o {}", idx.mor_label(g), idx.mor_label(f))))
                })
                .collect::<Result<Vec<u32>, CatError>>()?;
            compositors.insert((g as u32, f as u32), comps);
        }
    }
    let unitors = idx.objects().map(|a| values[a].objects().map(|o| values[a].id(o) as u32).collect()).collect();
    let pf = PseudoFunctor::new(idx.clone(), values.clone(), transports, compositors, unitors);
    pf.validate()?;
    // the pseudo-limit is only explored through hom-sets between the objects
    // the comparison meets, and through isomorphisms for essential surjectivity
    let view = PseudoLimitView::new(&pf);
    let objects = view.objects_where(|_, _| true);
    if objects.len() > OBJECT_CAP {
        return Err(CatError::SizeCap(format!("pseudo-limit at {}: {} objects", c.obj_label(x), objects.len())));
    }
    let object_lookup: HashMap<&LimitObject, usize> = objects.iter().enumerate().map(|(i, o)| (o, i)).collect();

    // objects of the active slice at X whose transports all stay in the model
    let ax = p.active_slice(x);
    let mut src_objs = Vec::new();
    let mut families = Vec::new();
    let mut n_dropped = 0;
    'obj: for k in 0..ax.arrows.len() {
        let mut fam = Vec::with_capacity(idx.n_obj());
        for a in idx.objects() {
            match sl.transport_obj(el.arrows[a], k).and_then(|(k2, _)| local[a].get(&k2).copied()) {
                Some(l) => fam.push(l as u32),
                None => {
                    n_dropped += 1;
                    continue 'obj;
                }
            }
        }
        src_objs.push(k);
        families.push(fam);
    }
    let (dom, dom_mm) = ax.cat.full_subcategory(&src_objs, format!("A({})", c.obj_label(x)));
    let mut obj_img = Vec::new();
    for (i, &k) in src_objs.iter().enumerate() {
        let theta: Vec<u32> = idx
            .morphisms()
            .map(|u| {
                let b = idx.tgt(u);
                sl.compositor(el.conn[u], el.arrows[idx.src(u)], k)
                    .and_then(|w| mor_local[b].get(&w).copied())
                    .map(|w| w as u32)
                    .ok_or_else(|| err(format!("no unique coherence cell along {}", idx.mor_label(u))))
            })
            .collect::<Result<_, _>>()?;
        let o = object_lookup
            .get(&(families[i].clone(), theta))
            .copied()
            .ok_or_else(|| err(format!("{} does not give a coherent family", c.mor_label(ax.arrows[k]))))?;
        obj_img.push(o);
    }
    let mut mor_img: Vec<Vec<u32>> = Vec::with_capacity(dom.n_mor());
    for &w in &dom_mm {
        let comps: Vec<u32> = idx
            .objects()
            .map(|a| {
                sl.transport_mor(el.arrows[a], w)
                    .and_then(|v| mor_local[a].get(&v).copied())
                    .map(|v| v as u32)
                    .ok_or_else(|| err(format!("no unique filler for {}", ax.cat.mor_label(w))))
            })
            .collect::<Result<_, _>>()?;
        mor_img.push(comps);
    }

    let mut verdict = Verdict::holds(M);
    let mut genuine = false;
    'pairs: for s in dom.objects() {
        for t in dom.objects() {
            let limit_hom = view.homs_where(&objects[obj_img[s]], &objects[obj_img[t]], |_, _| true);
            let mut image: Vec<&Vec<u32>> = dom.hom(s, t).iter().map(|&m| &mor_img[m as usize]).collect();
            if let Some(m) = image.iter().find(|comps| limit_hom.binary_search(comps).is_err()) {
                return Err(err(format!("image {m:?} is not a morphism of the limit")));
            }
            image.sort_unstable();
            let before = image.len();
            image.dedup();
            let hom = format!("Hom({}, {})", dom.obj_label(s), dom.obj_label(t));
            let w = if image.len() < before {
                format!("not faithful on {hom}")
            } else if image.len() < limit_hom.len() {
                format!("not full on {hom}: {} of {} hit", image.len(), limit_hom.len())
            } else {
                continue;
            };
            verdict = Verdict::fails(M, w);
            genuine = true;
            break 'pairs;
        }
    }
    // unhit iso classes of the pseudo-limit
    let isomorphic = |o: usize, q: usize| {
        !view.homs_where(&objects[o], &objects[q], |i, u| pf.values[i].is_iso(u)).is_empty()
    };
    let mut hit_reps: Vec<usize> = Vec::new();
    for &o in &obj_img {
        if !hit_reps.iter().any(|&r| r == o || isomorphic(o, r)) {
            hit_reps.push(o);
        }
    }
    let mut hit = vec![false; objects.len()];
    for &o in &obj_img {
        hit[o] = true;
    }
    let mut reps: Vec<usize> = Vec::new();
    for o in 0..objects.len() {
        if hit[o] || hit_reps.iter().any(|&r| isomorphic(o, r)) || reps.iter().any(|&r| isomorphic(o, r)) {
            continue;
        }
        reps.push(o);
    }
    let sources = index_sources(&idx);
    let mut missing = Vec::new();
    for &r in &reps {
        let fam = &objects[r].0;
        let labels: Vec<String> = idx
            .objects()
            .map(|a| {
                let arrow = p.active_slice(target_of(a)).arrows[global[a][fam[a] as usize]];
                c.obj_label(c.src(arrow)).to_string()
            })
            .collect();
        let total = p.truncation.as_ref().map(|t| {
            sources
                .iter()
                .map(|&a| t.size[c.src(p.active_slice(target_of(a)).arrows[global[a][fam[a] as usize]])])
                .sum::<usize>()
        });
        let artifact = match (total, &p.truncation) {
            (Some(n), Some(t)) => n > t.cap,
            _ => false,
        };
        if !artifact {
            genuine = true;
        }
        missing.push(MissingFamily { object: c.obj_label(x).to_string(), family: labels, total_size: total, artifact });
    }
    if !missing.is_empty() {
        let m0 = &missing[0];
        let w = format!(
            "{} families not in the image, e.g. ({}){}",
            missing.len(),
            m0.family.join(", "),
            m0.total_size.map_or(String::new(), |n| format!(" of total size {n}"))
        );
        verdict = if verdict.is_fails() { verdict.with_witness(w) } else { Verdict::fails(M, w) };
    }
    Ok(ObjectOutcome { verdict, genuine, missing, dropped: n_dropped })
}

/// One index object per iso class among those not reached by a
/// non-invertible morphism.
pub(crate) fn index_sources(idx: &FinCat) -> Vec<usize> {
    let (reps, _, _) = idx.iso_classes();
    reps.into_iter()
        .filter(|&a| !idx.incoming(a).iter().any(|&m| !idx.is_iso(m as usize)))
        .collect()
}
