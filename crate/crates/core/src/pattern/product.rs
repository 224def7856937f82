use std::sync::Arc;

use super::AlgebraicPattern;
use crate::fincat::product_cat;

/// Product pattern: a morphism is inert (active) when both coordinates are,
/// an object is elementary when both coordinates are.
pub fn product_pattern(p: &AlgebraicPattern, q: &AlgebraicPattern) -> AlgebraicPattern {
    let (c, objs, mors) = product_cat(&p.base, &q.base);
    let inert = mors.iter().map(|&(a, b)| p.inert[a] && q.inert[b]).collect();
    let active = mors.iter().map(|&(a, b)| p.active[a] && q.active[b]).collect();
    let elementary = objs.iter().map(|&(a, b)| p.elementary[a] && q.elementary[b]).collect();
    AlgebraicPattern::new(format!("{} x {}", p.name, q.name), Arc::new(c), inert, active, elementary, None)
}
