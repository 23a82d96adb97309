//! Structural invariants of the cover calculus, checked on random instances.

use coarse_lab::cover::{ball_cover, lebesgue_number, mesh, multiplicity, refines, star_cover, star_set, Cover};
use coarse_lab::disjointness::{lattice_partition, min_gap};
use coarse_lab::fuzz::{chain_families, map_instance, random_ball_members, random_scale, random_space};
use coarse_lab::generate::rng;
use coarse_lab::io::{from_json, to_json, CoverFile, SpaceFile};
use coarse_lab::maps::{certify_n_to_1, CoarseMap};
use coarse_lab::metrization::close_under_stars;
use coarse_lab::FiniteMetricSpace;
use proptest::prelude::*;

fn instance(seed: u64) -> (FiniteMetricSpace, Cover, Cover) {
    let mut g = rng(seed);
    let x = random_space(&mut g, 24);
    let mut v = random_ball_members(&mut g, &x, 4.0);
    v.extend((0..x.len()).map(|p| vec![p]));
    let w = random_ball_members(&mut g, &x, 3.0);
    (x, Cover::new(v).unwrap(), Cover::new(w).unwrap())
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn star_cover_coarsens(seed in any::<u64>()) {
        let (_, v, w) = instance(seed);
        prop_assert!(refines(&v, &star_cover(&v, &w)));
    }

    #[test]
    fn star_set_monotone(seed in any::<u64>()) {
        let (_, v, w) = instance(seed);
        let a = &v.members()[0];
        let wider = star_cover(&w, &w);
        let small = star_set(a, &w);
        let big = star_set(a, &wider);
        prop_assert!(small.iter().all(|p| big.contains(p)));
    }

    #[test]
    fn star_mesh_bound(seed in any::<u64>()) {
        let (x, v, w) = instance(seed);
        let st = star_cover(&v, &w);
        prop_assert!(mesh(&x, &st) <= mesh(&x, &v) + 2.0 * mesh(&x, &w));
    }

    #[test]
    fn ball_cover_lebesgue(seed in any::<u64>()) {
        let mut g = rng(seed);
        let x = random_space(&mut g, 24);
        let r = random_scale(&mut g, &x, 8.0);
        let u = ball_cover(&x, r).unwrap();
        prop_assert!(lebesgue_number(&x, &u).unwrap() >= r);
    }

    #[test]
    fn multiplicity_counts_members(seed in any::<u64>()) {
        let (x, v, _) = instance(seed);
        let m = multiplicity(&v);
        prop_assert!(m >= 1 && m <= v.len());
        let best = (0..x.len()).map(|p| v.members().iter().filter(|a| a.contains(&p)).count()).max().unwrap();
        prop_assert_eq!(m, best);
    }

    #[test]
    fn lattice_blocks_separated(seed in any::<u64>(), r in 0u32..6) {
        let (x, v, _) = instance(seed);
        let r = f64::from(r);
        let part = lattice_partition(&x, &v, r);
        let merged = part.merged(&v);
        prop_assert!(min_gap(&x, &merged).min_gap > r);
        let flat: usize = part.blocks.iter().map(Vec::len).sum();
        prop_assert_eq!(flat, v.len());
    }

    #[test]
    fn space_json_round_trip(seed in any::<u64>()) {
        let mut g = rng(seed);
        let x = random_space(&mut g, 16);
        let text = to_json(&SpaceFile::from_space(&x)).unwrap();
        let back = from_json::<SpaceFile>(&text, "space").unwrap().into_space().unwrap();
        prop_assert_eq!(x.to_matrix(), back.to_matrix());
    }

    #[test]
    fn cover_json_round_trip(seed in any::<u64>()) {
        let (_, v, _) = instance(seed);
        let text = to_json(&CoverFile::from_cover(&v)).unwrap();
        let back = from_json::<CoverFile>(&text, "cover").unwrap().into_cover().unwrap();
        prop_assert_eq!(v, back);
    }

    #[test]
    fn n_nonincreasing_in_gap(seed in any::<u64>()) {
        let mut g = rng(seed);
        let inst = map_instance(&mut g, 20);
        let s = inst.cert.scale_s;
        let ns: Vec<usize> = (0..5).map(|r| certify_n_to_1(&inst.map, s, f64::from(r)).unwrap().n).collect();
        prop_assert!(ns.windows(2).all(|w| w[0] >= w[1]), "{:?}", ns);
    }

    #[test]
    fn identity_is_one_to_one(seed in any::<u64>(), r in 1u32..5) {
        let mut g = rng(seed);
        let x = random_space(&mut g, 20);
        let f = CoarseMap::identity(x);
        let cert = certify_n_to_1(&f, 0.0, f64::from(r)).unwrap();
        prop_assert_eq!(cert.n, 1);
        prop_assert!(cert.verify(&f).is_ok());
    }

    #[test]
    fn certificates_verify(seed in any::<u64>()) {
        let mut g = rng(seed);
        let inst = map_instance(&mut g, 20);
        prop_assert!(inst.cert.verify(&inst.map).is_ok());
    }

    #[test]
    fn star_closure_idempotent(seed in any::<u64>()) {
        let mut g = rng(seed);
        let x = random_space(&mut g, 16);
        let fams = chain_families(&mut g, &x);
        let chain = close_under_stars(x.len(), &fams).unwrap();
        prop_assert!(chain.validate().is_ok());
        let again = close_under_stars(x.len(), chain.levels()).unwrap();
        prop_assert_eq!(chain.levels(), again.levels());
    }
}
