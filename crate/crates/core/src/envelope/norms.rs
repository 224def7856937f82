//! `G`-symmetric monoidal maps over `Span(𝔽_G)`: equifiberedness through
//! the fold `G/H ⊔ G/H -> G/H` and the norms `G/K -> G/H` only.

use serde::Serialize;

use super::{check_equifibered, transport_square, CocartesianFibration, EquifiberedReport};
use crate::catalog::GSetCat;
use crate::fincat::Functor;
use crate::span::SpanPattern;
use crate::verdict::Verdict;

/// Forward spans of the folds at each orbit and of the non-invertible maps
/// between orbits, one per pair of orbits.
pub fn norm_arrows(span: &SpanPattern, gs: &GSetCat) -> (Vec<(String, usize)>, Vec<(String, usize)>) {
    let c = &gs.cat;
    let mut folds = Vec::new();
    for x in gs.orbits() {
        let Some((s, i1, i2)) = gs.coproduct(x, x) else { continue };
        let mut img = vec![0u32; gs.n_points(s)];
        for p in 0..gs.n_points(x) {
            img[gs.maps[i1][p] as usize] = p as u32;
            img[gs.maps[i2][p] as usize] = p as u32;
        }
        let fold = gs.find_map(s, x, &img).expect("codiagonal is equivariant");
        folds.push((format!("tensor at {}", c.obj_label(x)), span.spans.forward_span(fold)));
    }
    let mut norms = Vec::new();
    for x in gs.orbits() {
        for y in gs.orbits() {
            if let Some(&m) = c.hom(x, y).iter().find(|&&m| !c.is_iso(m as usize)) {
                norms.push((format!("norm {} -> {}", c.obj_label(x), c.obj_label(y)), span.spans.forward_span(m as usize)));
            }
        }
    }
    (folds, norms)
}

#[derive(Clone, Debug, Serialize)]
pub struct NormReport {
    pub verdict: Verdict,
    pub tensor: Vec<(String, Verdict)>,
    pub norms: Vec<(String, Verdict)>,
    pub full: EquifiberedReport,
    pub agree: bool,
}

/// The fold and norm squares, compared with the square at every active map.
pub fn check_norm_squares(
    upper: &CocartesianFibration,
    lower: &CocartesianFibration,
    map: &Functor,
    span: &SpanPattern,
    gs: &GSetCat,
    base_sound: &Verdict,
) -> NormReport {
    const M: &str = "fold and norm squares are cartesian";
    let (folds, norms) = norm_arrows(span, gs);
    let judge = |arrows: Vec<(String, usize)>| -> Vec<(String, Verdict)> {
        arrows
            .into_iter()
            .map(|(l, phi)| {
                let v = transport_square(upper, lower, map, phi).unwrap_or_else(|e| Verdict::unknown(M, e.to_string()));
                (l, v)
            })
            .collect()
    };
    let tensor = judge(folds);
    let norms = judge(norms);
    let full = check_equifibered(upper, lower, map, &span.pattern, base_sound);
    let reduced = Verdict::all(M, tensor.iter().chain(&norms).map(|(l, v)| v.clone().context(l)));
    let agree = reduced.status == full.verdict.status;
    let verdict =
        if agree { reduced } else { Verdict::unknown(M, format!("reduced squares {reduced} but full family {}", full.verdict)) };
    NormReport { verdict, tensor, norms, full, agree }
}
