//! Named batteries of seeded random cases.
//!
//! Case `i` draws from its own generator, seeded by the `i`-th output of a
//! SplitMix64 stream started at the battery seed, so results do not depend
//! on how cases are spread over threads.

use std::thread;

use rand::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use super::dyadic::{inflation_case, measure_case};
use super::graph::{finite_triple, geometric_sides, trefoil_sides};
use super::graphing as pg;
use super::project::promotion_case;
use super::thick::{adjunction_sides, finite_thick_triple, random_tests, random_thick_triple};
use crate::error::{Error, Result};
use crate::graph::{self, DEFAULT_PATH_FUEL};
use crate::graphing::{self as gr, normalize_ae};
use crate::samples;
use crate::scalar::{rat, Linear, Odds};
use crate::thick::{contraction_graph, execute_thick, measure_sliced, Convention, Sliced, ThickGraph};

pub const NAMES: [&str; 7] = ["trefoil", "trefoil-thick", "trefoil-graphing", "measure-preserve", "promotion", "contraction", "assoc"];

/// Verdict on one case, with the number of draws discarded because a side
/// had infinitely many paths or circuits.
struct Case {
    mismatch: Option<String>,
    redrawn: usize,
}

impl Case {
    fn redrawn(mut self, n: usize) -> Case {
        self.redrawn += n;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub name: String,
    pub total: usize,
    pub exact: usize,
    /// Draws discarded because a side had infinitely many paths or circuits.
    pub redrawn: usize,
    /// `(case index, message)`, sorted by index.
    pub failures: Vec<(usize, String)>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.exact == self.total
    }

    pub fn summary(&self) -> String {
        format!("{}: {}/{} exact ({} redrawn)", self.name, self.exact, self.total, self.redrawn)
    }
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Case {
    Case { mismatch: if ok { None } else { Some(what()) }, redrawn: 0 }
}

/// Redraw on [`Error::Infinite`] up to `limit` times.
fn redraw(limit: usize, mut f: impl FnMut() -> Result<Case>) -> Result<Case> {
    for n in 0..=limit {
        match f() {
            Ok(c) => return Ok(c.redrawn(n)),
            Err(Error::Infinite(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Fuel { what: "redraws", bound: limit })
}

fn contraction_pair() -> Result<(Sliced, Sliced)> {
    let (phi, psi) = samples::ctr_maps();
    let ctr = contraction_graph(&phi, &psi)?;
    let a = samples::ctr_a();
    let got = Sliced::single(execute_thick(&ctr, &a, DEFAULT_PATH_FUEL)?);
    let rename = |m: &std::collections::BTreeMap<String, String>| ThickGraph {
        carrier: a.carrier.iter().map(|v| m[v].clone()).collect(),
        dialect: a.dialect.clone(),
        graph: a.graph.map_vertices(|(v, d)| (m[v].clone(), d.clone())),
    };
    let t = execute_thick(&rename(&phi), &rename(&psi), DEFAULT_PATH_FUEL)?;
    let zero = ThickGraph::new(t.carrier.iter().cloned(), vec![crate::thick::atom("1")]);
    Ok((got, Sliced { slices: vec![(rat(1, 2), t), (rat(1, 2), zero)] }))
}

fn run_case(name: &str, seed: u64, fuel: usize) -> Result<Case> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let rng = &mut rng;
    match name {
        "trefoil" => {
            let (t, rejected) = finite_triple(rng)?;
            let (gl, gr) = geometric_sides(&t)?;
            let (l, r) = trefoil_sides(&t, &Odds)?;
            Ok(check(gl == gr && l == r, || format!("{l} vs {r}")).redrawn(rejected))
        }
        "trefoil-thick" => {
            let (_, s, rejected) = finite_thick_triple(rng, 3, false, &Odds)?;
            let trefoil = s.normalized.0 == s.normalized.1 && s.unnormalized.0 == s.unnormalized.1;
            let adj = redraw(1000, || {
                let (l, r) = adjunction_sides(&random_thick_triple(rng, 3, true), &Linear)?;
                Ok(check(l == r, || format!("adjunction {l} vs {r}")))
            })?;
            let c = if trefoil {
                adj
            } else {
                check(false, || format!("normalized {:?}, unnormalized {:?}", s.normalized, s.unnormalized)).redrawn(adj.redrawn)
            };
            Ok(c.redrawn(rejected))
        }
        "trefoil-graphing" => redraw(1000, || {
            let t = pg::random_triple(rng, 2, 8)?;
            let (l, r) = pg::trefoil_sides(&t, &Odds, fuel)?;
            Ok(check(l == r, || format!("{l} vs {r}")))
        }),
        "measure-preserve" => {
            let c = measure_case(rng, 6)?;
            let i = inflation_case(rng)?;
            let ok = c.before == c.after && c.round_trip && i.holds();
            Ok(check(ok, || format!("{} through {:?}: {} -> {}; inflation by 2^{}: {} -> {}", c.cell, c.gens, c.before, c.after, i.delta, i.before, i.after)))
        }
        "promotion" => {
            let c = promotion_case(rng, 4, fuel)?;
            Ok(check(c.holds(), || format!("lhs {:?}\nrhs {:?}", c.lhs, c.rhs)))
        }
        "contraction" => {
            let (got, target) = contraction_pair()?;
            let t = random_tests(rng, &got, &target, 1, &Odds)?;
            let a = measure_sliced(&got, &t[0], &Odds, Convention::Normalized)?;
            let b = measure_sliced(&target, &t[0], &Odds, Convention::Normalized)?;
            Ok(check(a == b, || format!("{a} vs {b}")))
        }
        "assoc" => {
            let (t, _) = finite_triple(rng)?;
            let [f, g, h] = &t;
            let a = graph::execute(f, g, DEFAULT_PATH_FUEL).and_then(|x| graph::execute(&x, h, DEFAULT_PATH_FUEL));
            let b = graph::execute(g, h, DEFAULT_PATH_FUEL).and_then(|x| graph::execute(f, &x, DEFAULT_PATH_FUEL));
            let graphs = match (a, b) {
                (Ok(a), Ok(b)) => a.same_up_to_renaming(&b),
                (Err(Error::Infinite(_)), Err(Error::Infinite(_))) => true,
                (Err(e), _) | (_, Err(e)) => return Err(e),
            };
            let [f, g, h] = pg::random_triple(rng, 2, 4)?;
            let x = normalize_ae(&gr::execute(&gr::execute(&f, &g, fuel)?, &h, fuel)?)?;
            let y = normalize_ae(&gr::execute(&f, &gr::execute(&g, &h, fuel)?, fuel)?)?;
            Ok(check(graphs && x == y, || format!("graphs agree: {graphs}, graphings agree: {}", x == y)))
        }
        _ => Err(Error::Precondition(format!("unknown battery `{name}`; expected one of {}", NAMES.join(", ")))),
    }
}

/// Runs `iters` cases of the named battery on up to `workers` threads.
pub fn run(name: &str, seed: u64, iters: usize, fuel: usize, workers: usize) -> Result<Outcome> {
    if !NAMES.contains(&name) {
        return Err(Error::Precondition(format!("unknown battery `{name}`; expected one of {}", NAMES.join(", "))));
    }
    let mut master = SplitMix64::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..iters).map(|_| master.next_u64()).collect();
    let workers = workers.clamp(1, iters.max(1));
    let chunk = iters.div_ceil(workers).max(1);
    let mut results: Vec<(usize, Result<Case>)> = thread::scope(|s| {
        let handles: Vec<_> = seeds
            .chunks(chunk)
            .enumerate()
            .map(|(k, part)| {
                s.spawn(move || part.iter().enumerate().map(|(i, sd)| (k * chunk + i, run_case(name, *sd, fuel))).collect::<Vec<_>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("battery worker panicked")).collect()
    });
    results.sort_by_key(|(i, _)| *i);
    let mut out = Outcome { name: name.to_string(), total: iters, exact: 0, redrawn: 0, failures: Vec::new() };
    for (i, r) in results {
        let c = r.unwrap_or_else(|e| check(false, || format!("error: {e}")));
        out.redrawn += c.redrawn;
        match c.mismatch {
            None => out.exact += 1,
            Some(m) => out.failures.push((i, m)),
        }
    }
    Ok(out)
}

/// Worker count from the machine.
pub fn default_workers() -> usize {
    thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}
