use goi::graphing::{execute, measure, normalize_ae, Graphing, DEFAULT_FUEL};
use goi::props::graphing::{random_graphing, random_refinement, random_triple, trefoil_sides};
use goi::{Linear, Odds};
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;

#[test]
fn graphing_trefoil() {
    let mut rng = SplitMix64::seed_from_u64(3);
    for _ in 0..40 {
        let t = random_triple(&mut rng, 2, 8).unwrap();
        for g in &t {
            g.validate().unwrap();
        }
        let (l, r) = trefoil_sides(&t, &Odds, DEFAULT_FUEL).unwrap();
        assert_eq!(l, r);
        let (l, r) = trefoil_sides(&t, &Linear, DEFAULT_FUEL).unwrap();
        assert_eq!(l, r);
    }
}

#[test]
fn execution_is_associative_up_to_normal_form() {
    let mut rng = SplitMix64::seed_from_u64(5);
    for _ in 0..30 {
        let [f, g, h] = random_triple(&mut rng, 2, 4).unwrap();
        let a = execute(&execute(&f, &g, DEFAULT_FUEL).unwrap(), &h, DEFAULT_FUEL).unwrap();
        let b = execute(&f, &execute(&g, &h, DEFAULT_FUEL).unwrap(), DEFAULT_FUEL).unwrap();
        assert_eq!(normalize_ae(&a).unwrap(), normalize_ae(&b).unwrap());
    }
}

#[test]
fn refinements_share_a_normal_form() {
    let mut rng = SplitMix64::seed_from_u64(9);
    for _ in 0..60 {
        let g = random_graphing(&mut rng, &[0, 1, 2], 2, 5).unwrap();
        let r = random_refinement(&mut rng, &g).unwrap();
        let n = normalize_ae(&g).unwrap();
        assert_eq!(n, normalize_ae(&r).unwrap());
        assert_eq!(normalize_ae(&n).unwrap(), n);
    }
}

#[test]
fn lift_by_singleton_keeps_measure() {
    let mut rng = SplitMix64::seed_from_u64(13);
    for _ in 0..20 {
        let [f, g, _] = random_triple(&mut rng, 2, 4).unwrap();
        let fl = f.lift(1, goi::thick::Lift::Dagger);
        assert_eq!(measure(&f, &g, &Odds, DEFAULT_FUEL).unwrap(), measure(&fl, &g, &Odds, DEFAULT_FUEL).unwrap());
    }
}

#[test]
fn empty_partner_restricts_to_symmetric_difference() {
    let mut rng = SplitMix64::seed_from_u64(17);
    let f = random_graphing(&mut rng, &[0, 1], 1, 4).unwrap();
    let e = Graphing::new(goi::dyadic::CellSet::intervals([1]), 1);
    let h = execute(&f, &e, DEFAULT_FUEL).unwrap();
    assert_eq!(h.carrier, goi::dyadic::CellSet::intervals([0]));
    for ed in &h.edges {
        assert!(ed.source().is_subset(&h.carrier) && ed.target().is_subset(&h.carrier));
    }
}
