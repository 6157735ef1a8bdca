use goi::graph::DEFAULT_PATH_FUEL;
use goi::props::thick::{adjunction_sides, finite_thick_triple, random_tests, random_thick_triple};
use goi::samples::*;
use goi::thick::{contraction_graph, execute_thick, measure_sliced, universal_equiv, Convention, Sliced, ThickGraph};
use goi::{rat, Error, Ext, Linear, Odds};
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;

fn same(a: &ThickGraph, b: &ThickGraph) {
    assert_eq!(a.carrier, b.carrier);
    assert_eq!(a.canonical(), b.canonical());
}

#[test]
fn two_thick_graphs() {
    same(&execute_thick(&thick_g(), &thick_h(), DEFAULT_PATH_FUEL).unwrap(), &thick_gh());
}

fn relabel(g: &ThickGraph, map: &std::collections::BTreeMap<String, String>) -> ThickGraph {
    ThickGraph {
        carrier: g.carrier.iter().map(|v| map[v].clone()).collect(),
        dialect: g.dialect.clone(),
        graph: g.graph.map_vertices(|(v, d)| (map[v].clone(), d.clone())),
    }
}

#[test]
fn contraction_figures() {
    let (phi, psi) = ctr_maps();
    let ctr = contraction_graph(&phi, &psi).unwrap();
    same(&execute_thick(&ctr, &ctr_a(), DEFAULT_PATH_FUEL).unwrap(), &ctr_a_result());
    same(&execute_thick(&ctr, &ctr_b(), DEFAULT_PATH_FUEL).unwrap(), &ctr_b_result());
    let b = ctr_b();
    let t = execute_thick(&relabel(&b, &phi), &relabel(&b, &psi), DEFAULT_PATH_FUEL).unwrap();
    same(&t, &ctr_b_target());
}

#[test]
fn contraction_example_graph() {
    let straight = bijection(&[(1, 9), (2, 8), (3, 7)]);
    let crossing = bijection(&[(1, 4), (2, 5), (3, 6)]);
    let g = contraction_graph::<goi::Rational>(&straight, &crossing).unwrap();
    assert_eq!(g.graph.edges.len(), 12);
    let has = |a: (&str, &str), b: (&str, &str)| {
        g.graph.edges.iter().any(|e| (e.src.0.as_str(), e.src.1[0].as_str()) == a && (e.dst.0.as_str(), e.dst.1[0].as_str()) == b)
    };
    assert!(has(("1", "1"), ("9", "1")) && has(("9", "1"), ("1", "1")));
    assert!(has(("1", "2"), ("4", "1")) && has(("4", "1"), ("1", "2")));
}

fn zero_on(carrier: &ThickGraph) -> ThickGraph {
    ThickGraph::new(carrier.carrier.iter().cloned(), vec![goi::thick::atom("1")])
}

#[test]
fn contraction_of_one_slice_is_equivalent_to_its_target() {
    let (phi, psi) = ctr_maps();
    let ctr = contraction_graph(&phi, &psi).unwrap();
    let a = ctr_a();
    let got = Sliced::single(execute_thick(&ctr, &a, DEFAULT_PATH_FUEL).unwrap());
    let t = execute_thick(&relabel(&a, &phi), &relabel(&a, &psi), DEFAULT_PATH_FUEL).unwrap();
    let target = Sliced { slices: vec![(rat(1, 2), t.clone()), (rat(1, 2), zero_on(&t))] };
    let mut rng = SplitMix64::seed_from_u64(8);
    let tests = random_tests(&mut rng, &got, &target, 100, &Linear).unwrap();
    assert!(universal_equiv(&got, &target, &tests, &Linear).unwrap());
    let tests = random_tests(&mut rng, &got, &target, 100, &Odds).unwrap();
    assert!(universal_equiv(&got, &target, &tests, &Odds).unwrap());
}

#[test]
fn contraction_of_two_slices_is_distinguished() {
    let (phi, psi) = ctr_maps();
    let ctr = contraction_graph(&phi, &psi).unwrap();
    let got = Sliced::single(execute_thick(&ctr, &ctr_b(), DEFAULT_PATH_FUEL).unwrap());
    let t = ctr_b_target();
    let target = Sliced { slices: vec![(rat(1, 2), t.clone()), (rat(1, 2), zero_on(&t))] };
    let h = Sliced::single(ctr_witness());
    assert_eq!(measure_sliced(&got, &h, &Linear, Convention::Normalized).unwrap(), Ext::Fin(rat(1, 4)));
    assert_eq!(measure_sliced(&target, &h, &Linear, Convention::Normalized).unwrap(), Ext::Fin(rat(1, 8)));
}

#[test]
fn numerical_trefoil() {
    let mut rng = SplitMix64::seed_from_u64(9);
    let mut nonzero = 0;
    for _ in 0..150 {
        let (_, s, _) = finite_thick_triple(&mut rng, 3, false, &Odds).unwrap();
        assert_eq!(s.normalized.0, s.normalized.1);
        assert_eq!(s.unnormalized.0, s.unnormalized.1);
        if !s.normalized.0.is_zero() {
            nonzero += 1;
        }
    }
    assert!(nonzero > 20, "{nonzero}");
}

#[test]
fn numerical_adjunction() {
    let mut rng = SplitMix64::seed_from_u64(10);
    let mut done = 0;
    while done < 100 {
        let t = random_thick_triple(&mut rng, 3, true);
        match adjunction_sides(&t, &Linear) {
            Ok((l, r)) => {
                assert_eq!(l, r);
                done += 1;
            }
            Err(Error::Infinite(_)) => continue,
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn universal_equivalence_of_sums() {
    let (g1, g2) = universal_pair();
    let mut rng = SplitMix64::seed_from_u64(12);
    let tests = random_tests(&mut rng, &g1, &g2, 200, &Odds).unwrap();
    assert!(universal_equiv(&g1, &g2, &tests, &Odds).unwrap());
    // the same graphs with slice weights 1 are told apart
    let g3 = Sliced { slices: g2.slices.iter().map(|(_, g)| (rat(1, 1), g.clone())).collect() };
    assert!(!universal_equiv(&g1, &g3, &tests, &Odds).unwrap());
}
