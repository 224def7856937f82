//! Set-valued Segal objects with values of bounded size, up to
//! isomorphism.
//!
//! A Segal set is determined by its restriction to elementary objects and
//! inert maps between them, together with one function
//! `lim_{el_{Z/}} -> X(E)` per non-invertible active `Z ⇝ E` into an
//! elementary. Those choices are enumerated; the value at every object is
//! the limit over its elementary slice, and every other function is
//! assembled through the inert-active factorization. Candidates that are not
//! functors are dropped.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::elementary_subcategory;
use crate::fincat::{finset_limit, CatError, FinSetDiagram, FinSetLimit};
use crate::pattern::{check_segal_set, AlgebraicPattern};

#[derive(Clone, Debug)]
pub struct Enumeration {
    /// one canonical representative per isomorphism class
    pub diagrams: Vec<FinSetDiagram>,
    /// assignments tried
    pub candidates: usize,
    /// assignments that are functors
    pub functorial: usize,
}

/// All functions `{0..n} -> {0..m}` in lexicographic order.
fn functions(n: usize, m: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|f: Vec<u32>| (0..m as u32).map(move |y| [f.clone(), vec![y]].concat())).collect();
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, (n - 1) as u32);
            out.push(q);
        }
    }
    out
}

/// Mixed-radix counter over `radix`, yielding each digit vector once.
fn odometer(radix: &[usize], mut visit: impl FnMut(&[usize])) {
    if radix.contains(&0) {
        return;
    }
    let mut digits = vec![0; radix.len()];
    loop {
        visit(&digits);
        let mut i = 0;
        loop {
            if i == radix.len() {
                return;
            }
            digits[i] += 1;
            if digits[i] < radix[i] {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Where the component at one elementary arrow of `X(g)(x)` comes from.
enum Recipe {
    /// `α ∘ g` is itself an elementary arrow out of the source
    Direct(usize),
    /// through the free function of an active, after restricting along the
    /// inert part
    Via { free: usize, restrict: Vec<usize> },
}

struct Assembly {
    limits: Vec<FinSetLimit>,
    /// per morphism, per elementary arrow of its target
    recipes: Vec<Vec<Recipe>>,
    /// `(source, elementary target)` per free active
    free: Vec<(usize, usize)>,
}

fn assemble(p: &AlgebraicPattern, el_sizes: &[usize], el_maps: &HashMap<usize, Vec<u32>>) -> Result<Assembly, CatError> {
    let b = &p.base;
    let mut limits = Vec::new();
    let mut arrow_index: Vec<HashMap<usize, usize>> = Vec::new();
    for o in b.objects() {
        let slice = p.elementary_slice(o);
        let sizes = slice.arrows.iter().map(|&a| el_sizes[b.tgt(a)]).collect();
        let maps = slice.conn.iter().map(|c| el_maps[c].clone()).collect();
        limits.push(finset_limit(&FinSetDiagram { index: slice.cat.clone(), sizes, maps }));
        arrow_index.push(slice.arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect());
    }
    let actives: Vec<usize> = b.morphisms().filter(|&m| p.active[m] && p.elementary[b.tgt(m)] && !b.is_iso(m)).collect();
    let free_index: HashMap<usize, usize> = actives.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let outside = |what: &str| CatError::Structure(format!("{what} outside the model"));
    let mut recipes = Vec::with_capacity(b.n_mor());
    for g in b.morphisms() {
        let (o, o2) = (b.src(g), b.tgt(g));
        let mut per = Vec::new();
        for &alpha in &p.elementary_slice(o2).arrows {
            let comp = b.comp(alpha, g).ok_or_else(|| outside("composite"))?;
            if let Some(&i) = arrow_index[o].get(&comp) {
                per.push(Recipe::Direct(i));
                continue;
            }
            let (lam, omega) = p.factor(comp).ok_or_else(|| outside("factorization"))?;
            let free = *free_index.get(&omega).ok_or_else(|| outside("active part"))?;
            let restrict = p
                .elementary_slice(b.tgt(lam))
                .arrows
                .iter()
                .map(|&beta| b.comp(beta, lam).and_then(|c| arrow_index[o].get(&c).copied()).ok_or_else(|| outside("restriction")))
                .collect::<Result<Vec<_>, _>>()?;
            per.push(Recipe::Via { free, restrict });
        }
        recipes.push(per);
    }
    let free = actives.iter().map(|&m| (b.src(m), b.tgt(m))).collect();
    Ok(Assembly { limits, recipes, free })
}

/// The diagram for one choice of free functions, or `None` when some value
/// is not a compatible family.
fn build(p: &AlgebraicPattern, asm: &Assembly, free_fns: &[&Vec<u32>]) -> Option<FinSetDiagram> {
    let b = &p.base;
    let sizes: Vec<usize> = asm.limits.iter().map(|l| l.len()).collect();
    let mut maps = Vec::with_capacity(b.n_mor());
    let mut comps = Vec::new();
    let mut scratch = Vec::new();
    for g in b.morphisms() {
        let (o, o2) = (b.src(g), b.tgt(g));
        let mut f = Vec::with_capacity(sizes[o]);
        for fam in &asm.limits[o].families {
            comps.clear();
            for r in &asm.recipes[g] {
                comps.push(match r {
                    Recipe::Direct(i) => fam[*i],
                    Recipe::Via { free, restrict } => {
                        scratch.clear();
                        scratch.extend(restrict.iter().map(|&i| fam[i]));
                        let z = asm.limits[asm.free[*free].0].find(&scratch)?;
                        free_fns[*free][z]
                    }
                });
            }
            f.push(asm.limits[o2].find(&comps)? as u32);
        }
        maps.push(f);
    }
    Some(FinSetDiagram { index: b.clone(), sizes, maps })
}

/// Every Segal set over `p` whose values at elementary objects have at
/// most `cap` elements, one per isomorphism class. Gives up once more than
/// `budget` assignments would have to be tried.
pub fn enumerate_segal_set_objects(p: &AlgebraicPattern, cap: usize, budget: usize) -> Result<Enumeration, CatError> {
    let b = &p.base;
    let (el, el_obj, el_mor) = elementary_subcategory(p);
    let el = Arc::new(el);
    let mut candidates = 0usize;
    let mut functorial = 0usize;
    let mut seen = BTreeSet::new();
    let mut diagrams = Vec::new();
    let over_budget = || CatError::Structure(format!("more than {budget} assignments; raise the budget or lower the cap"));

    let non_id: Vec<usize> = el.morphisms().filter(|&m| !el.is_identity(m)).collect();
    let size_radix = vec![cap + 1; el.n_obj()];
    let mut el_diagrams = Vec::new();
    let mut err = None;
    odometer(&size_radix, |sizes| {
        let options: Vec<Vec<Vec<u32>>> = non_id.iter().map(|&m| functions(sizes[el.src(m)], sizes[el.tgt(m)])).collect();
        let radix: Vec<usize> = options.iter().map(|o| o.len()).collect();
        if radix.iter().try_fold(1usize, |acc, &r| acc.checked_mul(r)).is_none_or(|n| n > budget) {
            err = Some(over_budget());
            return;
        }
        odometer(&radix, |digits| {
            let mut maps: Vec<Vec<u32>> = el.morphisms().map(|m| (0..sizes[el.src(m)] as u32).collect()).collect();
            for (i, &m) in non_id.iter().enumerate() {
                maps[m] = options[i][digits[i]].clone();
            }
            let d = FinSetDiagram { index: el.clone(), sizes: sizes.to_vec(), maps };
            if d.validate().is_ok() {
                el_diagrams.push(d);
            }
        });
    });
    if let Some(e) = err {
        return Err(e);
    }

    for d in el_diagrams {
        let mut el_sizes = vec![0; b.n_obj()];
        for (i, &o) in el_obj.iter().enumerate() {
            el_sizes[o] = d.sizes[i];
        }
        let el_maps: HashMap<usize, Vec<u32>> = el_mor.iter().enumerate().map(|(i, &m)| (m, d.maps[i].clone())).collect();
        let asm = assemble(p, &el_sizes, &el_maps)?;
        let options: Vec<Vec<Vec<u32>>> =
            asm.free.iter().map(|&(z, e)| functions(asm.limits[z].len(), el_sizes[e])).collect();
        let radix: Vec<usize> = options.iter().map(|o| o.len()).collect();
        let total = radix.iter().try_fold(1usize, |acc, &r| acc.checked_mul(r));
        match total {
            Some(n) if candidates + n <= budget => candidates += n,
            _ => return Err(over_budget()),
        }
        odometer(&radix, |digits| {
            let chosen: Vec<&Vec<u32>> = digits.iter().enumerate().map(|(i, &k)| &options[i][k]).collect();
            let Some(diagram) = build(p, &asm, &chosen) else { return };
            if diagram.validate().is_err() {
                return;
            }
            functorial += 1;
            if !check_segal_set(p, &diagram).is_holds() {
                return;
            }
            let canon = canonical_form(p, &diagram);
            if seen.insert(encode(&canon)) {
                diagrams.push(canon);
            }
        });
    }
    diagrams.sort_by_key(encode);
    Ok(Enumeration { diagrams, candidates, functorial })
}

fn encode(d: &FinSetDiagram) -> Vec<u32> {
    let mut out: Vec<u32> = d.sizes.iter().map(|&s| s as u32).collect();
    for m in &d.maps {
        out.extend(m);
    }
    out
}

/// Smallest relabeling of a Segal set by permutations of its elementary
/// values. Every other value is renumbered in the order of its permuted
/// elementary components, which is a bijection since those components are
/// jointly injective.
pub fn canonical_form(p: &AlgebraicPattern, d: &FinSetDiagram) -> FinSetDiagram {
    let b = &p.base;
    let el_obj = p.elementary_objects();
    let perms: Vec<Vec<Vec<u32>>> = el_obj.iter().map(|&e| permutations(d.sizes[e])).collect();
    let radix: Vec<usize> = perms.iter().map(|v| v.len()).collect();
    let mut best: Option<(Vec<u32>, FinSetDiagram)> = None;
    odometer(&radix, |digits| {
        let mut sigma: HashMap<usize, &Vec<u32>> = HashMap::new();
        for (i, &e) in el_obj.iter().enumerate() {
            sigma.insert(e, &perms[i][digits[i]]);
        }
        let mut relabel: Vec<Vec<u32>> = Vec::with_capacity(b.n_obj());
        for o in b.objects() {
            let slice = p.elementary_slice(o);
            let moved: Vec<Vec<u32>> = (0..d.sizes[o])
                .map(|x| slice.arrows.iter().map(|&a| sigma[&b.tgt(a)][d.maps[a][x] as usize]).collect())
                .collect();
            let mut order: Vec<usize> = (0..d.sizes[o]).collect();
            order.sort_by(|&x, &y| moved[x].cmp(&moved[y]));
            let mut r = vec![0u32; d.sizes[o]];
            for (rank, &x) in order.iter().enumerate() {
                r[x] = rank as u32;
            }
            relabel.push(r);
        }
        let mut maps = Vec::with_capacity(b.n_mor());
        for m in b.morphisms() {
            let (s, t) = (b.src(m), b.tgt(m));
            let mut f = vec![0u32; d.sizes[s]];
            for x in 0..d.sizes[s] {
                f[relabel[s][x] as usize] = relabel[t][d.maps[m][x] as usize];
            }
            maps.push(f);
        }
        let cand = FinSetDiagram { index: b.clone(), sizes: d.sizes.clone(), maps };
        let key = encode(&cand);
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, cand));
        }
    });
    best.map(|(_, d)| d).unwrap_or_else(|| d.clone())
}

/// Encoding of [`canonical_form`]; equal exactly for isomorphic Segal sets.
pub fn canonical_key(p: &AlgebraicPattern, d: &FinSetDiagram) -> Vec<u32> {
    encode(&canonical_form(p, d))
}
