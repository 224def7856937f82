//! Soundness: weak contractibility of the el-fibers of every active map.

use serde::Serialize;

use super::slices::{el_beta_fiber, el_beta_fiber_poset, pushforward_functor};
use super::AlgebraicPattern;
use crate::homotopy::contractibility_verdict;
use crate::verdict::Verdict;

#[derive(Clone, Debug, Serialize)]
pub struct SoundRow {
    pub omega: String,
    pub beta: String,
    pub fiber_objects: usize,
    pub fiber_morphisms: usize,
    /// "poset" or "comma"
    pub route: &'static str,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct SoundReport {
    pub verdict: Verdict,
    pub rows: Vec<SoundRow>,
}

/// For every active `ω: X -> Y` and every `β` in `𝒪^el_{X/}`, checks that
/// the fiber of the pushforward over `β` is weakly contractible.
pub fn check_sound(p: &AlgebraicPattern) -> SoundReport {
    check_sound_routes(p, true)
}

/// `use_poset_route = false` forces the comma-category route everywhere.
pub fn check_sound_routes(p: &AlgebraicPattern, use_poset_route: bool) -> SoundReport {
    let c = &p.base;
    let mut rows = Vec::new();
    for omega in c.morphisms().filter(|&m| p.active[m]) {
        let x = c.src(omega);
        let pf = match pushforward_functor(p, omega) {
            Ok(pf) => pf,
            Err(e) => {
                rows.push(SoundRow {
                    omega: c.mor_label(omega).to_string(),
                    beta: "*".into(),
                    fiber_objects: 0,
                    fiber_morphisms: 0,
                    route: "none",
                    verdict: Verdict::unknown("pushforward", e.to_string()),
                });
                continue;
            }
        };
        for &beta in &p.elementary_slice(x).arrows {
            let fast = if use_poset_route { el_beta_fiber_poset(p, &pf, beta) } else { None };
            let (cat, route) = match fast {
                Some(f) => (f, "poset"),
                None => match el_beta_fiber(p, &pf, beta) {
                    Ok(cm) => ((*cm.cat).clone(), "comma"),
                    Err(e) => {
                        rows.push(SoundRow {
                            omega: c.mor_label(omega).to_string(),
                            beta: c.mor_label(beta).to_string(),
                            fiber_objects: 0,
                            fiber_morphisms: 0,
                            route: "comma",
                            verdict: Verdict::unknown("comma", e.to_string()),
                        });
                        continue;
                    }
                },
            };
            rows.push(SoundRow {
                omega: c.mor_label(omega).to_string(),
                beta: c.mor_label(beta).to_string(),
                fiber_objects: cat.n_obj(),
                fiber_morphisms: cat.n_mor(),
                route,
                verdict: contractibility_verdict(&cat),
            });
        }
    }
    let parts = rows
        .iter()
        .map(|r| r.verdict.clone().context(&format!("omega={} beta={}", r.omega, r.beta)));
    let mut verdict = Verdict::all("el-fibers weakly contractible", parts);
    verdict.witness.truncate(8);
    if p.truncation.is_some() {
        verdict = verdict.with_note(p.truncation_note());
    }
    SoundReport { verdict, rows }
}
