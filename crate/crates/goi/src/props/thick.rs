use rand::seq::SliceRandom;
use rand::Rng;

use super::graph::random_owners;
use super::graphing::random_weight;
use crate::error::{Error, Result};
use crate::graph::DEFAULT_PATH_FUEL;
use crate::scalar::{Ext, Quantifier, Rational};
use crate::thick::{atom, execute_thick, measure_sliced, measure_thick, measure_thick_raw, Convention, Sliced, ThickGraph};

pub type Triple = [ThickGraph; 3];

pub fn random_thick(rng: &mut impl Rng, tag: &str, carrier: &[String], dialect: usize, edges: usize) -> ThickGraph {
    let dial: Vec<_> = (0..dialect).map(|d| atom(&format!("{tag}{d}"))).collect();
    let mut g = ThickGraph::new(carrier.iter().cloned(), dial.clone());
    if carrier.is_empty() {
        return g;
    }
    for i in 0..edges {
        let (s, t) = (carrier.choose(rng).unwrap(), carrier.choose(rng).unwrap());
        let (a, b) = (dial.choose(rng).unwrap().clone(), dial.choose(rng).unwrap().clone());
        let w = random_weight(rng);
        g = g.edge(&format!("{tag}{i}"), (s, a), (t, b), w);
    }
    g
}

/// Dialects of size at most `max_dialect`; with `separate`, the carriers of
/// the second and third graphs are disjoint.
pub fn random_thick_triple(rng: &mut impl Rng, max_dialect: usize, separate: bool) -> Triple {
    let pool = rng.gen_range(2..=4);
    let mut vs = random_owners(rng, pool);
    if separate {
        let shared: Vec<String> = vs[1].iter().filter(|v| vs[2].contains(v)).cloned().collect();
        vs[2].retain(|v| !shared.contains(v));
    }
    let mut mk = |k: usize, tag: &str| {
        let d = rng.gen_range(1..=max_dialect);
        let n = rng.gen_range(1..=3);
        random_thick(rng, tag, &vs[k], d, n)
    };
    [mk(0, "f"), mk(1, "g"), mk(2, "h")]
}

pub struct ThickSides {
    /// `⟦F,G⊡H⟧ + ⟦G,H⟧` and `⟦H,F⊡G⟧ + ⟦F,G⟧`.
    pub normalized: (Ext<Rational>, Ext<Rational>),
    /// The same with raw circuit sums and the factors `n^F`, `n^H`.
    pub unnormalized: (Ext<Rational>, Ext<Rational>),
}

pub fn thick_sides(t: &Triple, m: &dyn Quantifier<Rational>) -> Result<ThickSides> {
    let [f, g, h] = t;
    let gh = execute_thick(g, h, DEFAULT_PATH_FUEL)?;
    let fg = execute_thick(f, g, DEFAULT_PATH_FUEL)?;
    let normalized = (
        measure_thick(f, &gh, m)? + measure_thick(g, h, m)?,
        measure_thick(h, &fg, m)? + measure_thick(f, g, m)?,
    );
    let nf = Rational::from_integer((f.n() as i64).into());
    let nh = Rational::from_integer((h.n() as i64).into());
    let unnormalized = (
        measure_thick_raw(f, &gh, m)? + measure_thick_raw(g, h, m)?.scale(&nf),
        measure_thick_raw(h, &fg, m)? + measure_thick_raw(f, g, m)?.scale(&nh),
    );
    Ok(ThickSides { normalized, unnormalized })
}

/// `⟦F,G⊡H⟧` and `⟦H,F⊡G⟧ + ⟦F,G⟧`, for `S^G ∩ S^H = ∅`.
pub fn adjunction_sides(t: &Triple, m: &dyn Quantifier<Rational>) -> Result<(Ext<Rational>, Ext<Rational>)> {
    let [f, g, h] = t;
    let l = measure_thick(f, &execute_thick(g, h, DEFAULT_PATH_FUEL)?, m)?;
    let r = measure_thick(h, &execute_thick(f, g, DEFAULT_PATH_FUEL)?, m)? + measure_thick(f, g, m)?;
    Ok((l, r))
}

/// Redraw while some side has infinitely many paths or circuits.
pub fn finite_thick_triple(rng: &mut impl Rng, max_dialect: usize, separate: bool, m: &dyn Quantifier<Rational>) -> Result<(Triple, ThickSides, usize)> {
    for rejected in 0..10_000 {
        let t = random_thick_triple(rng, max_dialect, separate);
        match thick_sides(&t, m) {
            Ok(s) => return Ok((t, s, rejected)),
            Err(Error::Infinite(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Fuel { what: "rejected random draws", bound: 10_000 })
}

/// A formal sum of one or two random thick graphs on `carrier`.
pub fn random_sliced(rng: &mut impl Rng, carrier: &[String], max_dialect: usize, max_edges: usize) -> Sliced {
    let mut out = Sliced { slices: Vec::new() };
    for i in 0..rng.gen_range(1..=2) {
        let (d, n) = (rng.gen_range(1..=max_dialect), rng.gen_range(0..=max_edges));
        let g = random_thick(rng, &format!("t{i}_"), carrier, d, n);
        out.slices.push((random_weight(rng), g));
    }
    out
}

/// Random tests against which both `f` and `g` have finite circuit sets.
pub fn random_tests(rng: &mut impl Rng, f: &Sliced, g: &Sliced, count: usize, m: &dyn Quantifier<Rational>) -> Result<Vec<Sliced>> {
    let carrier: Vec<String> = f.carrier().into_iter().collect();
    let mut out = Vec::new();
    let mut rejected = 0;
    while out.len() < count {
        let t = random_sliced(rng, &carrier, 2, 4);
        let ok = measure_sliced(f, &t, m, Convention::Normalized).and_then(|_| measure_sliced(g, &t, m, Convention::Normalized));
        match ok {
            Ok(_) => out.push(t),
            Err(Error::Infinite(_)) if rejected < 100 * count => rejected += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
