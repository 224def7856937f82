use std::sync::Arc;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use algpat::catalog::{delta_op, fin_star, Flavor};
use algpat::compare::{canonical_key, enumerate_segal_set_objects};
use algpat::fibrous::bridge::{check_relative_segal_unstraightened, coproduct_of_representables, quotient, random_glued_map};
use algpat::fincat::{
    check_equivalence, discrete_cat, finset_limit, functor_is_equivalence, iso_comma, poset_cat, product_cat,
    pseudo_limit_cat, FinCat, FinSetDiagram, Functor, PseudoFunctor,
};
use algpat::homotopy::{beat_point_verdict, contractibility_verdict, homology_verdict, HomotopyConfig, OrderComplex};
use algpat::pattern::{check_relative_segal_set, check_segal_set};
use algpat::verdict::Status;

/// Transitive closure of the strict relation `i < j` whenever bit `(i, j)`
/// is set, for `i < j`.
fn random_poset(n: usize, bits: &[bool], name: &str) -> FinCat {
    let mut leq = vec![vec![false; n]; n];
    let mut k = 0;
    for i in 0..n {
        leq[i][i] = true;
        for j in i + 1..n {
            leq[i][j] = bits[k % bits.len()];
            k += 1;
        }
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][m] && leq[m][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    poset_cat(n, |x, y| leq[x][y], name)
}

fn poset_strategy(max: usize) -> impl Strategy<Value = FinCat> {
    (1..=max, prop::collection::vec(any::<bool>(), 28)).prop_map(|(n, bits)| random_poset(n, &bits, "P"))
}

/// A random functor on `c`: a quotient of a coproduct of representables.
fn random_diagram(c: &Arc<FinCat>, rng: &mut ChaCha8Rng) -> FinSetDiagram {
    use rand::Rng;
    let reps: Vec<usize> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..c.n_obj())).collect();
    let (d, _) = coproduct_of_representables(c, &reps);
    let o = rng.gen_range(0..c.n_obj());
    if d.sizes[o] < 2 || rng.gen_bool(0.3) {
        return d;
    }
    let x = rng.gen_range(0..d.sizes[o]);
    let y = rng.gen_range(0..d.sizes[o]);
    quotient(&d, &[(o, x, y)]).0
}

/// The same diagram with the elements of every value permuted.
fn shuffled(d: &FinSetDiagram, rng: &mut ChaCha8Rng) -> FinSetDiagram {
    let c = &d.index;
    let perm: Vec<Vec<u32>> = c
        .objects()
        .map(|o| {
            let mut p: Vec<u32> = (0..d.sizes[o] as u32).collect();
            p.shuffle(rng);
            p
        })
        .collect();
    let mut maps: Vec<Vec<u32>> = c.morphisms().map(|m| vec![0; d.sizes[c.src(m)]]).collect();
    for m in c.morphisms() {
        let (s, t) = (c.src(m), c.tgt(m));
        for x in 0..d.sizes[s] {
            maps[m][perm[s][x] as usize] = perm[t][d.apply(m, x)];
        }
    }
    FinSetDiagram { index: c.clone(), sizes: d.sizes.clone(), maps }
}

fn decided(s: Status) -> bool {
    s != Status::Unknown
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn posets_are_categories(c in poset_strategy(7)) {
        prop_assert!(c.validate().is_ok());
        prop_assert!(c.check_associativity().is_ok());
    }

    #[test]
    fn contractibility_is_symmetric_under_opposites(c in poset_strategy(7)) {
        let a = contractibility_verdict(&c);
        let b = contractibility_verdict(&c.opposite());
        prop_assert_eq!(a.status, b.status, "{} vs {}", a, b);
    }

    #[test]
    fn acyclic_nerves_have_unit_euler_characteristic(c in poset_strategy(7)) {
        let oc = OrderComplex::build(&c, 8, 100_000).unwrap();
        let alternating: i64 = oc.counts().iter().enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum();
        prop_assert_eq!(oc.euler_characteristic(), alternating);
        if homology_verdict(&c, &HomotopyConfig::default()).is_holds() {
            prop_assert_eq!(alternating, 1);
        }
    }

    #[test]
    fn equivalence_is_reflexive_and_survives_permutation(c in poset_strategy(6), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut obj: Vec<usize> = c.objects().collect();
        obj.shuffle(&mut rng);
        let mut mor: Vec<usize> = c.morphisms().collect();
        mor.shuffle(&mut rng);
        let d = Arc::new(c.permuted(&obj, &mor).relabeled(|o| format!("x{o}"), |m| format!("f{m}")));
        let c = Arc::new(c);
        prop_assert!(check_equivalence(&c, &c).0.is_holds());
        let (forward, _) = check_equivalence(&c, &d);
        let (backward, _) = check_equivalence(&d, &c);
        prop_assert!(forward.is_holds());
        prop_assert_eq!(forward.status, backward.status);
    }

    #[test]
    fn iso_comma_with_identity_recovers_the_source(c in poset_strategy(6), keep in prop::collection::vec(any::<bool>(), 6)) {
        let objs: Vec<usize> = c.objects().filter(|&o| keep[o] || o == 0).collect();
        let (sub, mor_map) = c.full_subcategory(&objs, "S");
        let c = Arc::new(c);
        let f = Functor::new(Arc::new(sub), c.clone(), objs.clone(), mor_map).unwrap();
        let comma = iso_comma(&f, &Functor::identity(c.clone())).unwrap();
        prop_assert!(functor_is_equivalence(&comma.proj_left).is_holds());
    }

    #[test]
    fn limit_over_an_initial_object_is_its_value(c in poset_strategy(6), seed in any::<u64>()) {
        // put a bottom element under everything
        let n = c.n_obj() + 1;
        let below = |x: usize, y: usize| x == 0 || (x > 0 && y > 0 && !c.hom(x - 1, y - 1).is_empty());
        let idx = Arc::new(poset_cat(n, below, "cone"));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_diagram(&idx, &mut rng);
        prop_assert!(d.validate().is_ok());
        let lim = finset_limit(&d);
        prop_assert_eq!(lim.len(), d.sizes[0]);
        let mut at_bottom: Vec<usize> = (0..lim.len()).map(|i| lim.project(i, 0)).collect();
        at_bottom.sort_unstable();
        at_bottom.dedup();
        prop_assert_eq!(at_bottom.len(), d.sizes[0]);
    }

    #[test]
    fn pseudo_limit_over_discrete_index_is_the_product(a in poset_strategy(3), b in poset_strategy(3)) {
        let idx = Arc::new(discrete_cat(2));
        let values = vec![Arc::new(a.clone()), Arc::new(b.clone())];
        let transports = vec![Functor::identity(values[0].clone()), Functor::identity(values[1].clone())];
        let pf = PseudoFunctor::from_strict(idx, values, transports).unwrap();
        let lim = pseudo_limit_cat(&pf).unwrap();
        let (prod, _, _) = product_cat(&a, &b);
        let (v, _) = check_equivalence(&lim.cat, &Arc::new(prod));
        prop_assert!(v.is_holds());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, ..ProptestConfig::default() })]

    /// The two contractibility routes never contradict each other.
    #[test]
    fn beat_points_and_homology_agree(c in poset_strategy(8)) {
        let b = beat_point_verdict(&c);
        let h = homology_verdict(&c, &HomotopyConfig::default());
        if decided(b.status) && decided(h.status) {
            prop_assert_eq!(b.status, h.status, "{} vs {}", b, h);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn segal_condition_is_invariant_under_isomorphism(seed in any::<u64>()) {
        let p = fin_star(2, Flavor::Flat);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_diagram(&p.base, &mut rng);
        let e = shuffled(&d, &mut rng);
        prop_assert!(e.validate().is_ok());
        prop_assert_eq!(check_segal_set(&p, &d).status, check_segal_set(&p, &e).status);
    }

    #[test]
    fn relative_segal_routes_agree(seed in any::<u64>(), which in 0..3usize) {
        let p = Arc::new(match which {
            0 => fin_star(2, Flavor::Flat),
            1 => delta_op(2, 2, Flavor::Flat),
            _ => delta_op(2, 2, Flavor::Natural),
        });
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let eta = random_glued_map(&p.base, 2, &mut rng);
        let direct = check_relative_segal_set(&p, &eta);
        let via = check_relative_segal_unstraightened(&p, &eta);
        prop_assert_eq!(direct.status, via.status, "{} vs {}", direct, via);
    }
}

#[test]
fn canonical_keys_ignore_relabeling() {
    let p = fin_star(3, Flavor::Flat);
    let e = enumerate_segal_set_objects(&p, 2, 1 << 20).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for d in &e.diagrams {
        for _ in 0..5 {
            let s = shuffled(d, &mut rng);
            assert_eq!(canonical_key(&p, d), canonical_key(&p, &s));
        }
    }
}
