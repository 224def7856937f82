//! Set-valued diagrams as categories over a pattern: the category of
//! elements, and the relative Segal condition read off its envelope.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;

use super::square::SquareData;
use super::{EnvelopeFibers, FibrousCandidate};
use crate::fincat::{CatBuilder, CatError, FinCat, FinSetDiagram, Functor};
use crate::pattern::{AlgebraicPattern, DiagramMap};
use crate::verdict::Verdict;

/// `∫X -> 𝒪` with objects `(o, x)` and morphisms `(m, x): (o, x) -> (o', X(m)x)`.
pub struct Elements {
    pub proj: Functor,
    /// `(o, x)` per object
    pub objects: Vec<(usize, usize)>,
    /// `(m, x)` per morphism
    pub morphisms: Vec<(usize, usize)>,
    obj_lookup: HashMap<(usize, usize), usize>,
    mor_lookup: HashMap<(usize, usize), usize>,
}

impl Elements {
    pub fn new(d: &FinSetDiagram, name: &str) -> Result<Elements, CatError> {
        let c = &d.index;
        let mut b = CatBuilder::new(format!("el({name})"));
        let mut objects = Vec::new();
        let mut obj_lookup = HashMap::new();
        for o in c.objects() {
            for x in 0..d.sizes[o] {
                obj_lookup.insert((o, x), b.add_object(format!("{}:{x}", c.obj_label(o))));
                objects.push((o, x));
            }
        }
        let mut morphisms = Vec::new();
        let mut mor_lookup = HashMap::new();
        for m in c.morphisms() {
            let (s, t) = (c.src(m), c.tgt(m));
            for x in 0..d.sizes[s] {
                let k = b.add_morphism(
                    format!("{}@{x}", c.mor_label(m)),
                    obj_lookup[&(s, x)],
                    obj_lookup[&(t, d.apply(m, x))],
                );
                if c.is_identity(m) {
                    b.set_identity(obj_lookup[&(s, x)], k);
                }
                mor_lookup.insert((m, x), k);
                morphisms.push((m, x));
            }
        }
        let cat = b.build_with(|g, f| {
            let ((mg, _), (mf, x)) = (morphisms[g], morphisms[f]);
            c.comp(mg, mf).and_then(|h| mor_lookup.get(&(h, x)).copied())
        })?;
        let proj = Functor::new(
            Arc::new(cat),
            c.clone(),
            objects.iter().map(|&(o, _)| o).collect(),
            morphisms.iter().map(|&(m, _)| m).collect(),
        )?;
        Ok(Elements { proj, objects, morphisms, obj_lookup, mor_lookup })
    }

    pub fn find_object(&self, o: usize, x: usize) -> Option<usize> {
        self.obj_lookup.get(&(o, x)).copied()
    }

    pub fn find_morphism(&self, m: usize, x: usize) -> Option<usize> {
        self.mor_lookup.get(&(m, x)).copied()
    }
}

/// `∫η: ∫X -> ∫Y`.
pub fn elements_map(eta: &DiagramMap, over: &Elements, under: &Elements) -> Result<Functor, CatError> {
    let miss = || CatError::Structure("component leaves the target diagram".into());
    let obj = over
        .objects
        .iter()
        .map(|&(o, x)| under.find_object(o, eta.components[o][x] as usize).ok_or_else(miss))
        .collect::<Result<Vec<_>, _>>()?;
    let c = &eta.source.index;
    let mor = over
        .morphisms
        .iter()
        .map(|&(m, x)| under.find_morphism(m, eta.components[c.src(m)][x] as usize).ok_or_else(miss))
        .collect::<Result<Vec<_>, _>>()?;
    Functor::new(over.proj.source.clone(), under.proj.source.clone(), obj, mor)
}

/// The relative Segal condition for `η`, decided on the envelopes of the
/// categories of elements: at every object the square of envelopes over the
/// elementary slice must be a pullback.
pub fn check_relative_segal_unstraightened(p: &Arc<AlgebraicPattern>, eta: &DiagramMap) -> Verdict {
    const M: &str = "envelope squares of the categories of elements are pullbacks";
    let build = || -> Result<Vec<(String, Verdict)>, CatError> {
        let over = Elements::new(&eta.source, "X")?;
        let under = Elements::new(&eta.target, "Y")?;
        let map = elements_map(eta, &over, &under)?;
        let cx = FibrousCandidate::new(over.proj.clone(), p.clone())?;
        let cy = FibrousCandidate::new(under.proj.clone(), p.clone())?;
        let (ex, ey) = (EnvelopeFibers::new(&cx), EnvelopeFibers::new(&cy));
        p.base
            .objects()
            .map(|o| Ok((p.base.obj_label(o).to_string(), SquareData::new_along(&ex, &ey, &map, o)?.verdict())))
            .collect()
    };
    match build() {
        Ok(per) => Verdict::all(M, per.into_iter().map(|(l, v)| v.context(&format!("at {l}")))),
        Err(e) => Verdict::unknown(M, e.to_string()),
    }
}

/// The representable `Hom(a, -)`.
pub fn representable(c: &Arc<FinCat>, a: usize) -> FinSetDiagram {
    let position = |o: usize| -> HashMap<usize, u32> {
        c.hom(a, o).iter().enumerate().map(|(i, &f)| (f as usize, i as u32)).collect()
    };
    let at: Vec<HashMap<usize, u32>> = c.objects().map(position).collect();
    let sizes = c.objects().map(|o| c.hom(a, o).len()).collect();
    let maps = c
        .morphisms()
        .map(|m| {
            let t = c.tgt(m);
            c.hom(a, c.src(m)).iter().map(|&f| at[t][&c.comp(m, f as usize).expect("composable")]).collect()
        })
        .collect();
    FinSetDiagram { index: c.clone(), sizes, maps }
}

/// `⊔_i Hom(a_i, -)`, with the offset of each summand per object.
pub fn coproduct_of_representables(c: &Arc<FinCat>, reps: &[usize]) -> (FinSetDiagram, Vec<Vec<usize>>) {
    let parts: Vec<FinSetDiagram> = reps.iter().map(|&a| representable(c, a)).collect();
    let mut offsets = vec![vec![0; c.n_obj()]; parts.len()];
    let mut sizes = vec![0; c.n_obj()];
    for (i, d) in parts.iter().enumerate() {
        for o in c.objects() {
            offsets[i][o] = sizes[o];
            sizes[o] += d.sizes[o];
        }
    }
    let maps = c
        .morphisms()
        .map(|m| {
            let t = c.tgt(m);
            let mut f = Vec::with_capacity(sizes[c.src(m)]);
            for (i, d) in parts.iter().enumerate() {
                f.extend(d.maps[m].iter().map(|&y| (y as usize + offsets[i][t]) as u32));
            }
            f
        })
        .collect();
    (FinSetDiagram { index: c.clone(), sizes, maps }, offsets)
}

/// A random map `⊔_i Hom(a_i, -) -> ⊔_j Hom(b_j, -)`: each summand `i` goes
/// to a summand `j` through precomposition with some `b_j -> a_i`.
pub fn random_representable_map(c: &Arc<FinCat>, max_summands: usize, rng: &mut impl Rng) -> DiagramMap {
    random_map_between_representables(c, max_summands, rng)
}

fn random_map_between_representables(c: &Arc<FinCat>, max_summands: usize, rng: &mut impl Rng) -> DiagramMap {
    loop {
        let ny = rng.gen_range(1..=max_summands);
        let targets: Vec<usize> = (0..ny).map(|_| rng.gen_range(0..c.n_obj())).collect();
        let nx = rng.gen_range(1..=max_summands);
        let sources: Vec<usize> = (0..nx).map(|_| rng.gen_range(0..c.n_obj())).collect();
        // for each source summand, a target summand and a map b_j -> a_i
        let mut choice = Vec::with_capacity(nx);
        for &a in &sources {
            let options: Vec<(usize, usize)> =
                targets.iter().enumerate().flat_map(|(j, &b)| c.hom(b, a).iter().map(move |&g| (j, g as usize))).collect();
            if options.is_empty() {
                break;
            }
            choice.push(options[rng.gen_range(0..options.len())]);
        }
        if choice.len() < nx {
            continue;
        }
        let (x, _) = coproduct_of_representables(c, &sources);
        let (y, y_off) = coproduct_of_representables(c, &targets);
        let mut components = vec![Vec::new(); c.n_obj()];
        for o in c.objects() {
            for (i, &a) in sources.iter().enumerate() {
                let (j, g) = choice[i];
                let b = targets[j];
                let within: HashMap<usize, usize> = c.hom(b, o).iter().enumerate().map(|(k, &f)| (f as usize, k)).collect();
                for &f in c.hom(a, o) {
                    let fg = c.comp(f as usize, g).expect("composable");
                    components[o].push((y_off[j][o] + within[&fg]) as u32);
                }
            }
        }
        return DiagramMap::new(x, y, components).expect("precomposition is natural");
    }
}


/// The smallest quotient of `d` identifying each given pair `(o, x, y)`,
/// with the quotient map.
pub fn quotient(d: &FinSetDiagram, pairs: &[(usize, usize, usize)]) -> (FinSetDiagram, Vec<Vec<u32>>) {
    let c = &d.index;
    let mut parent: Vec<Vec<usize>> = c.objects().map(|o| (0..d.sizes[o]).collect()).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut pending: Vec<(usize, usize, usize)> = pairs.to_vec();
    while let Some((o, x, y)) = pending.pop() {
        let (rx, ry) = (root(&mut parent[o], x), root(&mut parent[o], y));
        if rx == ry {
            continue;
        }
        parent[o][rx.max(ry)] = rx.min(ry);
        for &m in c.out_of(o) {
            let m = m as usize;
            pending.push((c.tgt(m), d.apply(m, rx), d.apply(m, ry)));
        }
    }
    let mut class: Vec<Vec<u32>> = Vec::with_capacity(c.n_obj());
    let mut sizes = Vec::with_capacity(c.n_obj());
    for o in c.objects() {
        let mut number = HashMap::new();
        let cl: Vec<u32> = (0..d.sizes[o])
            .map(|x| {
                let r = root(&mut parent[o], x);
                let next = number.len() as u32;
                *number.entry(r).or_insert(next)
            })
            .collect();
        sizes.push(number.len());
        class.push(cl);
    }
    let mut maps: Vec<Vec<u32>> = c.morphisms().map(|m| vec![0; sizes[c.src(m)]]).collect();
    for m in c.morphisms() {
        let (s, t) = (c.src(m), c.tgt(m));
        for x in 0..d.sizes[s] {
            maps[m][class[s][x] as usize] = class[t][d.apply(m, x)];
        }
    }
    (FinSetDiagram { index: c.clone(), sizes, maps }, class)
}

/// A random map between coproducts of representables, with half of the
/// samples glued along a random pair of elements of the source (and the
/// image pair in the target), so that non-Segal shapes such as glued
/// simplices turn up as well.
pub fn random_glued_map(c: &Arc<FinCat>, max_summands: usize, rng: &mut impl Rng) -> DiagramMap {
    let eta = random_map_between_representables(c, max_summands, rng);
    if rng.gen_bool(0.5) {
        return eta;
    }
    let inhabited: Vec<usize> = c.objects().filter(|&o| eta.source.sizes[o] >= 2).collect();
    if inhabited.is_empty() {
        return eta;
    }
    let o = inhabited[rng.gen_range(0..inhabited.len())];
    let n = eta.source.sizes[o];
    let x = rng.gen_range(0..n);
    let y = (x + rng.gen_range(1..n)) % n;
    let (xs, qx) = quotient(&eta.source, &[(o, x, y)]);
    // identify the images of every glued pair in the target
    let mut image_pairs = Vec::new();
    for k in c.objects() {
        let mut first: HashMap<u32, usize> = HashMap::new();
        for (e, &cl) in qx[k].iter().enumerate() {
            let img = eta.components[k][e] as usize;
            match first.get(&cl) {
                Some(&f) => image_pairs.push((k, f, img)),
                None => {
                    first.insert(cl, img);
                }
            }
        }
    }
    let (ys, qy) = quotient(&eta.target, &image_pairs);
    let mut components: Vec<Vec<u32>> = c.objects().map(|k| vec![0; xs.sizes[k]]).collect();
    for k in c.objects() {
        for (e, &cl) in qx[k].iter().enumerate() {
            components[k][cl as usize] = qy[k][eta.components[k][e] as usize];
        }
    }
    DiagramMap::new(xs, ys, components).expect("quotients are compatible")
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::catalog::{delta_op, fin_star, Flavor};
    use crate::pattern::{check_relative_segal_set, check_segal_set};

    #[test]
    fn elements_of_a_representable() {
        let p = fin_star(2, Flavor::Flat);
        let h = representable(&p.base, 1);
        h.validate().unwrap();
        let el = Elements::new(&h, "h").unwrap();
        // Hom(<1>, <n>) has n + 1 elements
        assert_eq!(el.objects.len(), 1 + 2 + 3);
    }

    const SAMPLES: usize = 24;

    #[test]
    fn both_routes_agree_on_random_maps() {
        for p in [fin_star(2, Flavor::Flat), delta_op(2, 2, Flavor::Flat), delta_op(2, 2, Flavor::Natural)] {
            let p = Arc::new(p);
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let (mut holds, mut fails) = (0, 0);
            for _ in 0..SAMPLES {
                let eta = random_glued_map(&p.base, 2, &mut rng);
                let direct = check_relative_segal_set(&p, &eta);
                let via = check_relative_segal_unstraightened(&p, &eta);
                assert_eq!(direct.status, via.status, "{}: {direct} vs {via}", p.name);
                if direct.is_holds() {
                    holds += 1;
                } else {
                    fails += 1;
                }
            }
            assert!(holds > 0 && fails > 0, "{}: {holds} hold, {fails} fail", p.name);
        }
    }

    #[test]
    fn representable_of_the_unit_is_segal() {
        let p = fin_star(2, Flavor::Flat);
        assert!(check_segal_set(&p, &representable(&p.base, 0)).is_holds());
        assert!(check_segal_set(&p, &representable(&p.base, 2)).is_fails());
    }
}
