//! Segal conditions for set-valued presheaves on a pattern.

use super::AlgebraicPattern;
use crate::fincat::{finset_limit, CatError, FinSetDiagram, FinSetLimit};
use crate::verdict::Verdict;

/// Natural transformation between two set-valued diagrams on one index.
#[derive(Clone, Debug)]
pub struct DiagramMap {
    pub source: FinSetDiagram,
    pub target: FinSetDiagram,
    /// `components[o][x]` is the image of `x ∈ source(o)`
    pub components: Vec<Vec<u32>>,
}

impl DiagramMap {
    pub fn new(source: FinSetDiagram, target: FinSetDiagram, components: Vec<Vec<u32>>) -> Result<Self, CatError> {
        let c = &source.index;
        if target.index.n_obj() != c.n_obj() || target.index.n_mor() != c.n_mor() || components.len() != c.n_obj() {
            return Err(CatError::Structure("diagram map between different index shapes".into()));
        }
        for o in c.objects() {
            if components[o].len() != source.sizes[o] || components[o].iter().any(|&y| y as usize >= target.sizes[o]) {
                return Err(CatError::Structure(format!("component at {} has wrong domain or codomain", c.obj_label(o))));
            }
        }
        for m in c.morphisms() {
            let (s, t) = (c.src(m), c.tgt(m));
            for x in 0..source.sizes[s] {
                let a = components[t][source.apply(m, x)];
                let b = target.apply(m, components[s][x] as usize) as u32;
                if a != b {
                    return Err(CatError::Structure(format!("not natural at {}", c.mor_label(m))));
                }
            }
        }
        Ok(DiagramMap { source, target, components })
    }
}

fn check_index(p: &AlgebraicPattern, d: &FinSetDiagram) -> Result<(), CatError> {
    if d.index.n_obj() != p.base.n_obj() || d.index.n_mor() != p.base.n_mor() {
        return Err(CatError::Structure("presheaf index does not match the pattern".into()));
    }
    Ok(())
}

/// Limit of `F` over `𝒪^el_{X/}` and the image of each `x ∈ F(X)` in it.
pub fn segal_comparison(p: &AlgebraicPattern, d: &FinSetDiagram, x: usize) -> (FinSetLimit, Vec<usize>) {
    let el = p.elementary_slice(x);
    let restricted = d.restrict(&p.el_target_functor(x));
    let lim = finset_limit(&restricted);
    let image = (0..d.sizes[x])
        .map(|e| {
            let fam: Vec<u32> = el.arrows.iter().map(|&a| d.apply(a, e) as u32).collect();
            lim.find(&fam).expect("images of elements are compatible families")
        })
        .collect();
    (lim, image)
}

fn bijection_defect(image: &[usize], n: usize) -> Option<String> {
    let mut hit = vec![0usize; n];
    for &i in image {
        hit[i] += 1;
    }
    if let Some(i) = hit.iter().position(|&h| h > 1) {
        return Some(format!("not injective: {} elements map to family {i}", hit[i]));
    }
    hit.iter().position(|&h| h == 0).map(|i| format!("not surjective: family {i} is not hit"))
}

/// `F(X) -> lim_{𝒪^el_{X/}} F` is a bijection for every object `X`.
pub fn check_segal_set(p: &AlgebraicPattern, d: &FinSetDiagram) -> Verdict {
    const M: &str = "Segal map bijective at every object";
    if let Err(e) = check_index(p, d) {
        return Verdict::unknown(M, e.to_string());
    }
    let parts = p.base.objects().map(|x| {
        let (lim, image) = segal_comparison(p, d, x);
        match bijection_defect(&image, lim.len()) {
            None => Verdict::holds(M),
            Some(w) => Verdict::fails(
                M,
                format!("at {}: |F(X)| = {}, limit has {}; {w}", p.base.obj_label(x), d.sizes[x], lim.len()),
            ),
        }
    });
    let v = Verdict::all(M, parts);
    if p.truncation.is_some() {
        v.with_note(p.truncation_note())
    } else {
        v
    }
}

/// For `η: F -> G`, every square `F(X) -> G(X) ×_{lim G} lim F` is a
/// bijection.
pub fn check_relative_segal_set(p: &AlgebraicPattern, eta: &DiagramMap) -> Verdict {
    const M: &str = "relative Segal squares are pullbacks";
    let (f, g) = (&eta.source, &eta.target);
    if let Err(e) = check_index(p, f) {
        return Verdict::unknown(M, e.to_string());
    }
    let parts = p.base.objects().map(|x| {
        let el = p.elementary_slice(x);
        let targets: Vec<usize> = el.arrows.iter().map(|&a| p.base.tgt(a)).collect();
        let (lim_f, img_f) = segal_comparison(p, f, x);
        let (lim_g, img_g) = segal_comparison(p, g, x);
        // η applied to each F-family, as a G-family
        let eta_lim: Vec<usize> = lim_f
            .families
            .iter()
            .map(|fam| {
                let mapped: Vec<u32> = fam.iter().zip(&targets).map(|(&e, &t)| eta.components[t][e as usize]).collect();
                lim_g.find(&mapped).expect("η maps compatible families to compatible families")
            })
            .collect();
        // pullback G(X) ×_{lim G} lim F, enumerated as pairs
        let mut pairs = std::collections::HashMap::new();
        for (gx, &gi) in img_g.iter().enumerate() {
            for (li, &ei) in eta_lim.iter().enumerate() {
                if gi == ei {
                    let k = pairs.len();
                    pairs.insert((gx, li), k);
                }
            }
        }
        let image: Vec<usize> = (0..f.sizes[x])
            .map(|e| pairs[&(eta.components[x][e] as usize, img_f[e])])
            .collect();
        match bijection_defect(&image, pairs.len()) {
            None => Verdict::holds(M),
            Some(w) => Verdict::fails(
                M,
                format!("at {}: |F(X)| = {}, pullback has {}; {w}", p.base.obj_label(x), f.sizes[x], pairs.len()),
            ),
        }
    });
    Verdict::all(M, parts)
}
