use rand::seq::SliceRandom;
use rand::Rng;

use super::graphing::random_weight;
use crate::error::{Error, Result};
use crate::graph::{execute, measure, one_circuits, Graph, DEFAULT_PATH_FUEL};
use crate::scalar::{Ext, Quantifier, Rational};

pub type Triple = [Graph; 3];

/// Vertex sets for three graphs over `pool` vertices, no vertex shared by
/// all three.
pub fn random_owners(rng: &mut impl Rng, pool: usize) -> [Vec<String>; 3] {
    let owners: &[&[usize]] = &[&[0], &[1], &[2], &[0, 1], &[1, 2], &[0, 2], &[0, 1], &[1, 2], &[0, 2]];
    let mut out: [Vec<String>; 3] = Default::default();
    for v in 0..pool {
        for &k in *owners.choose(rng).unwrap() {
            out[k].push(format!("v{v}"));
        }
    }
    out
}

pub fn random_graph(rng: &mut impl Rng, vs: &[String], edges: usize) -> Graph {
    let mut g = Graph::new(vs.iter().cloned());
    if vs.is_empty() {
        return g;
    }
    for i in 0..edges {
        let s = vs.choose(rng).unwrap().clone();
        let t = vs.choose(rng).unwrap().clone();
        g.add_edge(format!("e{i}"), s, t, random_weight(rng));
    }
    g
}

/// At most 6 vertices and 8 edges in total.
pub fn random_triple(rng: &mut impl Rng) -> Triple {
    let pool = rng.gen_range(2..=4);
    let vs = random_owners(rng, pool);
    let mut left = 8;
    let mut mk = |vs: &[String]| {
        let n = rng.gen_range(1..=left.min(3));
        left -= n;
        random_graph(rng, vs, n)
    };
    [mk(&vs[0]), mk(&vs[1]), mk(&vs[2])]
}

fn weights(f: &Graph, g: &Graph) -> Result<Vec<Rational>> {
    Ok(one_circuits(f, g)?.into_iter().map(|c| c.weight).collect())
}

/// Sorted circuit weights of `C(F,G⊡H) ∪ C(G,H)` and `C(H,F⊡G) ∪ C(F,G)`.
pub fn geometric_sides(t: &Triple) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let [f, g, h] = t;
    let mut l = weights(f, &execute(g, h, DEFAULT_PATH_FUEL)?)?;
    l.extend(weights(g, h)?);
    let mut r = weights(h, &execute(f, g, DEFAULT_PATH_FUEL)?)?;
    r.extend(weights(f, g)?);
    l.sort();
    r.sort();
    Ok((l, r))
}

/// `⟦F,G⊡H⟧ + ⟦G,H⟧` and `⟦H,F⊡G⟧ + ⟦F,G⟧`.
pub fn trefoil_sides(t: &Triple, m: &dyn Quantifier<Rational>) -> Result<(Ext<Rational>, Ext<Rational>)> {
    let [f, g, h] = t;
    let l = measure(f, &execute(g, h, DEFAULT_PATH_FUEL)?, m)? + measure(g, h, m)?;
    let r = measure(h, &execute(f, g, DEFAULT_PATH_FUEL)?, m)? + measure(f, g, m)?;
    Ok((l, r))
}

/// Draw triples until both sides have finitely many paths and circuits.
/// Returns the triple and the number of rejected draws.
pub fn finite_triple(rng: &mut impl Rng) -> Result<(Triple, usize)> {
    for rejected in 0..10_000 {
        let t = random_triple(rng);
        match geometric_sides(&t) {
            Ok(_) => return Ok((t, rejected)),
            Err(Error::Infinite(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Fuel { what: "rejected random draws", bound: 10_000 })
}
