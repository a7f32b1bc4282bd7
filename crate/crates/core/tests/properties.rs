mod support;

use std::sync::Arc;

use groupoid_calculus::bibundle::{
    apply_bibundle, bibundle_from_functor, bibundle_isomorphism, compose_bibundles, invert_bibundle,
};
use groupoid_calculus::bundle::{bundle_isomorphism, gauge_groupoid, pullback_bundle, trivialize, unit_bundle, validate_bundle_morphism};
use groupoid_calculus::construct::{diagonal_functor, fiber_product_groupoid, pullback_groupoid};
use groupoid_calculus::corpus::{random_functor, random_groupoid, random_morita_functor, random_transitive_groupoid, standard_extensions};
use groupoid_calculus::format::{parse_groupoid, render_groupoid};
use groupoid_calculus::functor::GroupoidMap;
use groupoid_calculus::gerbe::certify_gerbe;
use groupoid_calculus::group::FinGroup;
use groupoid_calculus::groupoid::FinGroupoid;
use groupoid_calculus::iso::{groupoid_isomorphic, verify_isomorphism};
use groupoid_calculus::morita::{are_morita_equivalent, is_morita_morphism, match_skeletons, pullback_extension, skeleton};
use groupoid_calculus::search::{Meter, Search};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random surjection onto `n` points from `n + extra` points.
fn surjection(r: &mut ChaCha8Rng, n: usize, extra: usize) -> (Vec<String>, Vec<usize>) {
    let mut map: Vec<usize> = (0..n).collect();
    map.extend((0..extra).map(|_| r.gen_range(0..n)));
    let names = (0..map.len()).map(|i| format!("n{i}")).collect();
    (names, map)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn isotropy_groups_are_groups(seed in any::<u64>()) {
        let g = random_groupoid(&mut rng(seed), 16);
        prop_assert!(g.validate().is_ok());
        for x in 0..g.num_objects() {
            prop_assert!(g.isotropy_at(x).validate().is_ok());
        }
        prop_assert_eq!(g.is_transitive(), g.orbits().len() <= 1);
    }

    #[test]
    fn action_groupoid_counts(n in 1usize..6, m in 1usize..4) {
        // Z/(nm) acts on Z/n by translation.
        let k = n * m;
        let group = FinGroup::cyclic(k);
        let points: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        let g = FinGroupoid::action_groupoid(&group, &points, |a, x| (a + x) % n).unwrap();
        prop_assert!(g.validate().is_ok());
        prop_assert_eq!(g.num_arrows(), k * n);
    }

    #[test]
    fn isomorphism_is_reflexive_and_symmetric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_groupoid(&mut r, 16);
        let b = groupoid_calculus::corpus::shuffled(&a, &mut r);
        let w = groupoid_isomorphic(&a, &a, &mut Meter::default()).found().expect("reflexive");
        prop_assert!(verify_isomorphism(&a, &a, &w));
        let ab = groupoid_isomorphic(&a, &b, &mut Meter::default()).found().expect("relabelled copy");
        prop_assert!(verify_isomorphism(&a, &b, &ab));
        prop_assert!(verify_isomorphism(&b, &a, &ab.inverse()));
        prop_assert!(groupoid_isomorphic(&b, &a, &mut Meter::default()).is_found());
    }

    #[test]
    fn render_parse_is_exact(seed in any::<u64>()) {
        let g = random_groupoid(&mut rng(seed), 16);
        let text = render_groupoid(&g);
        let back = parse_groupoid(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(render_groupoid(&back), text);
    }

    #[test]
    fn pullbacks_are_morita(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = Arc::new(random_groupoid(&mut r, 12));
        prop_assume!(g.num_objects() > 0);
        let extra = r.gen_range(0..2);
        let (names, map) = surjection(&mut r, g.num_objects(), extra);
        let pb = pullback_groupoid(&g, &names, &map).unwrap();
        prop_assert!(pb.groupoid.validate().is_ok());
        prop_assert!(pb.projection.validate().is_ok());
        prop_assert!(is_morita_morphism(&pb.projection).unwrap().is_morita());
        prop_assert!(match_skeletons(&skeleton(&g), &skeleton(&pb.groupoid), &mut Meter::default()).is_found());

        let objects: Vec<String> = g.objects().to_vec();
        let identity = pullback_groupoid(&g, &objects, &(0..g.num_objects()).collect::<Vec<_>>()).unwrap();
        prop_assert!(groupoid_isomorphic(&identity.groupoid, &g, &mut Meter::default()).is_found());
    }

    #[test]
    fn fiber_products_are_groupoids(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cod = Arc::new(random_groupoid(&mut r, 8));
        let a = Arc::new(random_groupoid(&mut r, 8));
        let b = Arc::new(random_groupoid(&mut r, 8));
        let (Some(phi), Some(psi)) = (random_functor(&mut r, &a, &cod), random_functor(&mut r, &b, &cod)) else {
            return Ok(());
        };
        let fp = fiber_product_groupoid(&phi, &psi).unwrap();
        prop_assert!(fp.groupoid.validate().is_ok());
        prop_assert!(fp.to_left.validate().is_ok() && fp.to_right.validate().is_ok());
    }

    #[test]
    fn morita_equivalence_is_an_equivalence(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_groupoid(&mut r, 12);
        let b = random_groupoid(&mut r, 12);
        let c = random_groupoid(&mut r, 12);
        let eq = |x: &FinGroupoid, y: &FinGroupoid| match are_morita_equivalent(x, y, &mut Meter::default()) {
            Search::Found(_) => true,
            Search::NotFound => false,
            Search::BudgetExceeded => panic!("small instances stay within budget"),
        };
        prop_assert!(eq(&a, &a));
        prop_assert_eq!(eq(&a, &b), eq(&b, &a));
        if eq(&a, &b) && eq(&b, &c) {
            prop_assert!(eq(&a, &c));
        }
    }

    #[test]
    fn morita_agrees_with_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_groupoid(&mut r, 12);
        let b = if r.gen_bool(0.5) { groupoid_calculus::corpus::shuffled(&a, &mut r) } else { random_groupoid(&mut r, 12) };
        prop_assume!(a.num_objects() <= 4 && b.num_objects() <= 4);
        let oracle = support::brute_force_equivalent(&a, &b, 2_000_000)
            .or_else(|| support::brute_force_equivalent(&b, &a, 2_000_000));
        if let Some(o) = oracle {
            prop_assert_eq!(are_morita_equivalent(&a, &b, &mut Meter::default()).is_found(), o);
        }
    }

    #[test]
    fn morita_morphisms_match_hom_set_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = if r.gen_bool(0.5) {
            random_morita_functor(&mut r, 12)
        } else {
            let a = Arc::new(random_groupoid(&mut r, 12));
            let b = Arc::new(random_groupoid(&mut r, 12));
            match random_functor(&mut r, &a, &b) {
                Some(m) => m,
                None => return Ok(()),
            }
        };
        prop_assert_eq!(is_morita_morphism(&m).unwrap().is_morita(), support::is_equivalence_functor(&m));
        prop_assert_eq!(bibundle_from_functor(&m).is_biprincipal(), support::is_equivalence_functor(&m));
    }

    #[test]
    fn bundles_behave(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = Arc::new(random_groupoid(&mut r, 12));
        prop_assume!(g.num_objects() > 0);
        let b = unit_bundle(&g);
        prop_assert!(b.validate().is_ok());

        let (names, map) = surjection(&mut r, g.num_objects(), 2);
        let pulled = pullback_bundle(&b, &names, &map).unwrap();
        prop_assert!(pulled.validate().is_ok());
        for (n, &m) in map.iter().enumerate() {
            prop_assert_eq!(pulled.fiber(n).count(), b.fiber(m).count());
        }

        let t = trivialize(&pulled).unwrap();
        let base: Vec<usize> = (0..pulled.base().len()).collect();
        prop_assert!(validate_bundle_morphism(&pulled, &t.trivial, &t.iso, &base).unwrap().is_ok());
        prop_assert!(bundle_isomorphism(&pulled, &t.trivial, &mut Meter::default()).unwrap().is_found());

        let gauge = gauge_groupoid(&b).unwrap();
        prop_assert!(groupoid_isomorphic(&gauge.groupoid, &g, &mut Meter::default()).is_found());
    }

    #[test]
    fn bibundle_algebra(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = Arc::new(random_groupoid(&mut r, 8));
        let b = Arc::new(random_groupoid(&mut r, 8));
        let c = Arc::new(random_groupoid(&mut r, 8));
        let (Some(f), Some(g)) = (random_functor(&mut r, &a, &b), random_functor(&mut r, &b, &c)) else {
            return Ok(());
        };
        let (pf, pg) = (bibundle_from_functor(&f), bibundle_from_functor(&g));
        prop_assert!(pf.validate().is_ok() && pg.validate().is_ok());
        let composite = compose_bibundles(&pf, &pg).unwrap().bibundle;
        prop_assert!(composite.validate().is_ok());
        let direct = bibundle_from_functor(&f.then(&g).unwrap());
        prop_assert!(bibundle_isomorphism(&direct, &composite, &mut Meter::default()).unwrap().is_found());

        let ua = unit_bundle(&a);
        let once = apply_bibundle(&composite, &ua).unwrap().bundle;
        let twice = apply_bibundle(&pg, &apply_bibundle(&pf, &ua).unwrap().bundle).unwrap().bundle;
        prop_assert!(once.validate().is_ok());
        prop_assert!(bundle_isomorphism(&once, &twice, &mut Meter::default()).unwrap().is_found());

        let id = bibundle_from_functor(&GroupoidMap::identity(a.clone()));
        let left_unit = compose_bibundles(&id, &pf).unwrap().bibundle;
        prop_assert!(bibundle_isomorphism(&left_unit, &pf, &mut Meter::default()).unwrap().is_found());
    }

    #[test]
    fn inverse_of_a_morita_bibundle(seed in any::<u64>()) {
        let m = random_morita_functor(&mut rng(seed), 12);
        let p = bibundle_from_functor(&m);
        prop_assert!(p.is_biprincipal());
        let q = invert_bibundle(&p).unwrap();
        prop_assert!(q.validate().is_ok());
        let id = bibundle_from_functor(&GroupoidMap::identity(m.dom().clone()));
        let round = compose_bibundles(&p, &q).unwrap().bibundle;
        prop_assert!(bibundle_isomorphism(&round, &id, &mut Meter::default()).unwrap().is_found());
    }

    #[test]
    fn transitive_groupoids_reduce_to_isotropy(seed in any::<u64>()) {
        let g = random_transitive_groupoid(&mut rng(seed), 16);
        let one = FinGroupoid::from_group(&g.isotropy_at(0), "pt");
        prop_assert!(are_morita_equivalent(&g, &one, &mut Meter::default()).is_found());
    }
}

#[test]
fn diagonal_splits_both_projections() {
    for (name, e) in standard_extensions() {
        let (fp, diag) = diagonal_functor(&e).unwrap();
        assert!(diag.validate().is_ok(), "{name}");
        let id = GroupoidMap::identity(e.dom().clone());
        assert_eq!(diag.then(&fp.to_left).unwrap(), id, "{name}");
        assert_eq!(diag.then(&fp.to_right).unwrap(), id, "{name}");
        assert_eq!(fp.groupoid.num_objects(), e.cod().num_arrows(), "{name}");
    }
}

#[test]
fn gerbe_data_is_invariant_under_pullback() {
    for (name, e) in standard_extensions() {
        let base = certify_gerbe(&e, &mut Meter::default()).unwrap();
        let objects = e.dom().objects().to_vec();
        let (new, map) = groupoid_calculus::morita::collapse_first(&objects);
        let pulled = pullback_extension(&e, &new, &map).unwrap();
        let other = certify_gerbe(&pulled.extension, &mut Meter::default()).unwrap();
        assert_eq!(base.transitive, other.transitive, "{name}");
        let same = match_skeletons(
            &skeleton(&base.fiber_product.groupoid),
            &skeleton(&other.fiber_product.groupoid),
            &mut Meter::default(),
        );
        assert!(same.is_found(), "{name}");
    }
}
