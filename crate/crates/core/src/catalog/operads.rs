//! Categories of operators of the four built-in set operads, and the
//! cut functor from `Δ^op` to pointed finite sets.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::finstar::{delta_op, fin_star, fiber_sizes, pointed_map_label, Flavor};
use crate::fincat::{CatBuilder, CatError, Functor};
use crate::pattern::{AlgebraicPattern, PatternMorphism, Truncation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperadKind {
    /// associative: one operation per linear order of the inputs
    Ass,
    /// commutative: one operation per arity
    Comm,
    /// trivial: only the unary identity
    Triv,
    /// unital trivial: arities 0 and 1
    E0,
}

impl OperadKind {
    pub fn name(self) -> &'static str {
        match self {
            OperadKind::Ass => "Ass",
            OperadKind::Comm => "Comm",
            OperadKind::Triv => "Triv",
            OperadKind::E0 => "E0",
        }
    }

    fn allows_arity(self, n: usize) -> bool {
        match self {
            OperadKind::Ass | OperadKind::Comm => true,
            OperadKind::Triv => n == 1,
            OperadKind::E0 => n <= 1,
        }
    }

    fn ordered(self) -> bool {
        self == OperadKind::Ass
    }
}

/// A morphism of a category of operators: the pointed map plus the rank of
/// each element inside its fiber.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Operator {
    m: usize,
    n: usize,
    map: Vec<u8>,
    rank: Vec<u8>,
}

fn natural_ranks(map: &[u8]) -> Vec<u8> {
    let mut seen = HashMap::new();
    map.iter()
        .map(|&j| {
            if j == 0 {
                return 0;
            }
            let r = seen.entry(j).or_insert(0u8);
            *r += 1;
            *r - 1
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, (n - 1) as u8);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// All rank assignments of a pointed map: a linear order on each fiber.
fn orderings(map: &[u8], n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![0u8; map.len()]];
    for j in 1..=n as u8 {
        let fiber: Vec<usize> = (0..map.len()).filter(|&i| map[i] == j).collect();
        let mut next = Vec::new();
        for base in &out {
            for perm in permutations(fiber.len()) {
                let mut r = base.clone();
                for (k, &i) in fiber.iter().enumerate() {
                    r[i] = perm[k];
                }
                next.push(r);
            }
        }
        out = next;
    }
    out
}

fn operator_label(op: &Operator, ordered: bool) -> String {
    let base = pointed_map_label(op.m, op.n, &op.map);
    if ordered {
        format!("{base}{{{}}}", op.rank.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(","))
    } else {
        base
    }
}

/// The category of operators `𝒪^⊗` truncated at `⟨k⟩`, with the pattern
/// structure lifted along the forgetful map to `𝔽*^{≤k}`, and that map.
pub fn operad_of_operators(kind: OperadKind, k: usize) -> (AlgebraicPattern, PatternMorphism) {
    let name = format!("{}<={k}", kind.name());
    let mut b = CatBuilder::new(&name);
    for n in 0..=k {
        b.add_object(format!("<{n}>"));
    }
    let target = Arc::new(fin_star(k, Flavor::Flat));
    let target_index: HashMap<&str, usize> =
        target.base.mor_labels().iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let mut ops: Vec<Operator> = Vec::new();
    let mut lookup: HashMap<Operator, usize> = HashMap::new();
    for m in 0..=k {
        for n in 0..=k {
            for f in target.base.hom(m, n) {
                let label = target.base.mor_label(*f as usize);
                let map: Vec<u8> = parse_pointed_map(label);
                if !fiber_sizes(&map, n)[1..].iter().all(|&s| kind.allows_arity(s)) {
                    continue;
                }
                let ranks = if kind.ordered() { orderings(&map, n) } else { vec![natural_ranks(&map)] };
                for rank in ranks {
                    let op = Operator { m, n, map: map.clone(), rank };
                    let id = b.add_morphism(operator_label(&op, kind.ordered()), m, n);
                    if m == n && op.map.iter().enumerate().all(|(i, &x)| x as usize == i + 1) {
                        b.set_identity(m, id);
                    }
                    lookup.insert(op.clone(), id);
                    ops.push(op);
                }
            }
        }
    }
    let cat = b
        .build_with(|g, f| {
            let (of, og) = (&ops[f], &ops[g]);
            let map: Vec<u8> = of.map.iter().map(|&x| if x == 0 { 0 } else { og.map[x as usize - 1] }).collect();
            // order the composite fiber over l by (rank of j over l, rank of i over j)
            let keys: Vec<(u8, u8)> = (0..of.m)
                .map(|i| {
                    let j = of.map[i];
                    if j == 0 {
                        (0, 0)
                    } else {
                        (og.rank[j as usize - 1], of.rank[i])
                    }
                })
                .collect();
            let rank: Vec<u8> = (0..of.m)
                .map(|i| {
                    if map[i] == 0 {
                        return 0;
                    }
                    (0..of.m).filter(|&i2| map[i2] == map[i] && keys[i2] < keys[i]).count() as u8
                })
                .collect();
            let rank = if kind.ordered() { rank } else { natural_ranks(&map) };
            lookup.get(&Operator { m: of.m, n: og.n, map, rank }).copied()
        })
        .expect("operators compose");
    let mor_map: Vec<usize> = ops.iter().map(|op| target_index[pointed_map_label(op.m, op.n, &op.map).as_str()]).collect();
    let inert = mor_map.iter().map(|&m| target.inert[m]).collect();
    let active = mor_map.iter().map(|&m| target.active[m]).collect();
    let elementary = (0..=k).map(|n| n == 1).collect();
    let truncation = Truncation { size: (0..=k).collect(), cap: k, note: format!("objects <n> with n <= {k}") };
    let cat = Arc::new(cat);
    let p = AlgebraicPattern::new(name, cat.clone(), inert, active, elementary, Some(truncation));
    let functor = Functor::new_unchecked(cat, target.base.clone(), (0..=k).collect(), mor_map);
    let pi = PatternMorphism::new(functor, Arc::new(p.clone()), target).expect("forgetful map is a pattern morphism");
    (p, pi)
}

/// Inverse of [`pointed_map_label`] on the images part.
pub fn parse_pointed_map(label: &str) -> Vec<u8> {
    let inner = label.rsplit_once(":[").map(|(_, r)| r.trim_end_matches(']')).unwrap_or("");
    inner.split(',').filter(|s| !s.is_empty()).map(|s| s.parse().expect("pointed map label")).collect()
}

/// `𝔠(φ)(i) = j` when `φ(j-1) < i ≤ φ(j)`, else the base point.
pub fn cut_map(phi: &[u8], a: usize) -> Vec<u8> {
    (1..=a as u8)
        .map(|i| (1..phi.len()).find(|&j| phi[j - 1] < i && i <= phi[j]).map_or(0, |j| j as u8))
        .collect()
}

/// The cut functor `Δ^{op,♭}_{≤n, M} -> 𝔽*^{≤k}`, `[a] ↦ ⟨a⟩`.
pub fn cut_functor(n: usize, m_cap: usize, k: usize) -> Result<PatternMorphism, CatError> {
    if m_cap > k {
        return Err(CatError::Structure(format!("simplex cap {m_cap} exceeds pointed-set cap {k}")));
    }
    let source = Arc::new(delta_op(n, m_cap, Flavor::Flat));
    let target = Arc::new(fin_star(k, Flavor::Flat));
    let (_, data) = super::finstar::delta_op_cat(m_cap);
    let mor: Vec<usize> = data
        .iter()
        .map(|(a, b, phi)| {
            let label = pointed_map_label(*a, *b, &cut_map(phi, *a));
            target.base.find_morphism(&label).expect("cut map lies in the truncation")
        })
        .collect();
    let functor = Functor::new(source.base.clone(), target.base.clone(), (0..=m_cap).collect(), mor)?;
    PatternMorphism::new(functor, source, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::validate_pattern;

    #[test]
    fn comm_is_fin_star() {
        let (p, pi) = operad_of_operators(OperadKind::Comm, 2);
        assert_eq!(p.base.n_mor(), pi.target.base.n_mor());
        assert!(pi.functor.is_equivalence());
    }

    #[test]
    fn ass_fold_has_two_orders() {
        let (p, pi) = operad_of_operators(OperadKind::Ass, 2);
        let fold = pi.target.base.find_morphism(&pointed_map_label(2, 1, &[1, 1])).unwrap();
        let over = p.base.morphisms().filter(|&m| pi.functor.mor(m) == fold).count();
        assert_eq!(over, 2);
        assert!(validate_pattern(&p).verdict.is_holds());
    }

    #[test]
    fn triv_and_e0_arities() {
        let (t, _) = operad_of_operators(OperadKind::Triv, 2);
        assert!(t.base.hom(0, 1).is_empty());
        let (e, _) = operad_of_operators(OperadKind::E0, 2);
        assert_eq!(e.base.hom(0, 1).len(), 1);
        assert_eq!(e.base.hom(2, 1).len(), 3);
    }

    #[test]
    fn cut_examples() {
        assert_eq!(cut_map(&[0], 1), vec![0]);
        assert_eq!(cut_map(&[0, 2], 2), vec![1, 1]);
        assert_eq!(cut_map(&[0, 1, 2], 2), vec![1, 2]);
        let c = cut_functor(3, 3, 3).unwrap();
        assert!(c.functor.validate().is_ok());
    }
}
