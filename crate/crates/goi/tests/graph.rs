use std::collections::BTreeSet;

use goi::graph::{alternating_paths, execute, measure, one_circuits, Graph, Side, DEFAULT_PATH_FUEL};
use goi::props::graph::{finite_triple, geometric_sides, random_graph, random_owners, trefoil_sides};
use goi::{rat, Error, Ext, Linear, Odds, Rational};
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

type Step = (Side, usize);

fn edge<'a>(f: &'a Graph, g: &'a Graph, (s, i): Step) -> &'a goi::graph::Edge {
    if s == Side::Left {
        &f.edges[i]
    } else {
        &g.edges[i]
    }
}

fn all_steps(f: &Graph, g: &Graph) -> Vec<Step> {
    (0..f.edges.len()).map(|i| (Side::Left, i)).chain((0..g.edges.len()).map(|i| (Side::Right, i))).collect()
}

fn links(f: &Graph, g: &Graph, a: Step, b: Step) -> bool {
    a.0 != b.0 && edge(f, g, a).dst == edge(f, g, b).src
}

/// Every sequence of at most `n` steps, by plain enumeration.
fn sequences(f: &Graph, g: &Graph, n: usize) -> Vec<Vec<Step>> {
    let steps = all_steps(f, g);
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Step>> = steps.iter().map(|&s| vec![s]).collect();
    for _ in 0..n {
        out.extend(layer.iter().cloned());
        let mut next = Vec::new();
        for p in &layer {
            for &s in &steps {
                if links(f, g, *p.last().unwrap(), s) {
                    let mut q = p.clone();
                    q.push(s);
                    next.push(q);
                }
            }
        }
        layer = next;
    }
    out
}

fn random_pair(rng: &mut impl Rng) -> (Graph, Graph) {
    let vs: Vec<String> = (0..4).map(|i| format!("v{i}")).collect();
    let a: Vec<String> = vs.iter().filter(|_| rng.gen_bool(0.7)).cloned().collect();
    let b: Vec<String> = vs.iter().filter(|_| rng.gen_bool(0.7)).cloned().collect();
    let (na, nb) = (rng.gen_range(0..4), rng.gen_range(0..4));
    (random_graph(rng, &a, na), random_graph(rng, &b, nb))
}

#[test]
fn paths_match_enumeration() {
    let mut rng = SplitMix64::seed_from_u64(1);
    let mut checked = 0;
    for _ in 0..300 {
        let (f, g) = random_pair(&mut rng);
        let v: BTreeSet<String> = f.vertices.symmetric_difference(&g.vertices).cloned().collect();
        let Ok(got) = alternating_paths(&f, &g, &v, DEFAULT_PATH_FUEL) else { continue };
        // a finite path set never repeats an edge
        let n = f.edges.len() + g.edges.len();
        let mut want: Vec<Vec<Step>> = sequences(&f, &g, n)
            .into_iter()
            .filter(|p| v.contains(&edge(&f, &g, p[0]).src) && v.contains(&edge(&f, &g, *p.last().unwrap()).dst))
            .collect();
        want.sort();
        let mut got: Vec<Vec<Step>> = got.into_iter().map(|p| p.steps).collect();
        got.sort();
        assert_eq!(got, want);
        checked += 1;
    }
    assert!(checked > 200);
}

fn rotations(p: &[Step]) -> Vec<Vec<Step>> {
    (0..p.len()).map(|k| p[k..].iter().chain(&p[..k]).copied().collect()).collect()
}

#[test]
fn circuits_match_enumeration() {
    let mut rng = SplitMix64::seed_from_u64(2);
    let mut checked = 0;
    for _ in 0..300 {
        let (f, g) = random_pair(&mut rng);
        let got = match one_circuits(&f, &g) {
            Ok(c) => c,
            Err(Error::Infinite(_)) => continue,
            Err(e) => panic!("{e}"),
        };
        let key = |p: &[Step]| -> Vec<(Side, String)> { p.iter().map(|&s| (s.0, edge(&f, &g, s).id.clone())).collect() };
        let mut want: Vec<Vec<(Side, String)>> = Vec::new();
        for p in sequences(&f, &g, 8) {
            if !links(&f, &g, *p.last().unwrap(), p[0]) {
                continue;
            }
            let rs = rotations(&p);
            let primitive = rs.iter().skip(1).all(|r| *r != p);
            let least = rs.iter().map(|r| key(r)).min().unwrap();
            if primitive && key(&p) == least {
                want.push(least);
            }
        }
        want.sort();
        let mut got: Vec<Vec<(Side, String)>> = got.iter().map(|c| key(&c.steps)).collect();
        got.sort();
        assert_eq!(got, want);
        checked += 1;
    }
    assert!(checked > 200);
}

#[test]
fn composition_example() {
    let f = Graph::new(["1".to_string(), "2".to_string()]).edge("e", "1".to_string(), "2".to_string(), rat(1, 2));
    let g = Graph::new(["2".to_string(), "3".to_string()]).edge("f", "2".to_string(), "3".to_string(), rat(1, 3));
    let h = execute(&f, &g, DEFAULT_PATH_FUEL).unwrap();
    assert_eq!(h.vertices, ["1".to_string(), "3".to_string()].into_iter().collect());
    assert_eq!(h.edges.len(), 1);
    assert_eq!(h.edges[0].weight, rat(1, 6));
    assert!(execute(&f, &Graph::empty(), DEFAULT_PATH_FUEL).unwrap().same_up_to_renaming(&f));
}

#[test]
fn trefoil_on_random_triples() {
    let mut rng = SplitMix64::seed_from_u64(3);
    let mut nonzero = 0;
    for _ in 0..200 {
        let (t, _) = finite_triple(&mut rng).unwrap();
        let (l, r) = geometric_sides(&t).unwrap();
        assert_eq!(l, r);
        let (l, r) = trefoil_sides(&t, &Odds).unwrap();
        assert_eq!(l, r);
        if !l.is_zero() {
            nonzero += 1;
        }
        let (l, r) = trefoil_sides(&t, &Linear).unwrap();
        assert_eq!(l, r);
    }
    assert!(nonzero > 30, "{nonzero}");
}

#[test]
fn execution_is_associative() {
    let mut rng = SplitMix64::seed_from_u64(4);
    for _ in 0..200 {
        let (t, _) = finite_triple(&mut rng).unwrap();
        let [f, g, h] = &t;
        let a = execute(f, g, DEFAULT_PATH_FUEL).and_then(|x| execute(&x, h, DEFAULT_PATH_FUEL));
        let b = execute(g, h, DEFAULT_PATH_FUEL).and_then(|x| execute(f, &x, DEFAULT_PATH_FUEL));
        if let (Ok(a), Ok(b)) = (a, b) {
            assert!(a.same_up_to_renaming(&b));
        }
    }
}

#[test]
fn renaming_preserves_measure() {
    let mut rng = SplitMix64::seed_from_u64(5);
    for _ in 0..100 {
        let vs = random_owners(&mut rng, 4);
        let f = random_graph(&mut rng, &vs[0], 3);
        let g = random_graph(&mut rng, &vs[1], 3);
        let mut r = f.clone();
        r.edges.reverse();
        for (i, e) in r.edges.iter_mut().enumerate() {
            e.id = format!("r{i}");
        }
        let a: Result<Ext<Rational>, _> = measure(&f, &g, &Odds);
        if let Ok(a) = a {
            assert_eq!(a, measure(&r, &g, &Odds).unwrap());
        }
    }
}
