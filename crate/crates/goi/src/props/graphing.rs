use rand::seq::SliceRandom;
use rand::Rng;

use crate::dyadic::{Axis, BitMap, Branch, Cell, CellSet, Gen, PosMap, Space, Src};
use crate::error::Result;
use crate::graphing::{execute, measure, Graphing};
use crate::scalar::{rat, Ext, Quantifier, Rational};

pub const WEIGHTS: [(i64, i64); 5] = [(1, 1), (1, 2), (1, 3), (2, 3), (1, 4)];

pub fn random_weight(rng: &mut impl Rng) -> Rational {
    let (p, q) = *WEIGHTS.choose(rng).unwrap();
    rat(p, q)
}

/// A map from `piece` to the unit interval at `to`: a translation, maybe
/// after the track swap, maybe rewriting the digit that cut out `piece`.
fn random_map(rng: &mut impl Rng, piece: &Cell, to: i64) -> Result<BitMap> {
    let mut out = if rng.gen_bool(0.25) {
        Gen::TauHat(Axis::X).on(Space::Line, &[piece.base])?.branches[0].out[0].clone()
    } else {
        PosMap::identity(Axis::X)
    };
    if let Some((&(_, p), _)) = piece.bits.iter().next() {
        // only a digit the guard already fixes may be overwritten
        if rng.gen_bool(0.3) && out.eval(p) == Src::In(Axis::X, p) {
            let bit = rng.gen_bool(0.5);
            let orig = out.clone();
            out = PosMap::from_fn(orig.threshold().max(p), orig.period(), |q| {
                if q == p {
                    Src::Const(bit)
                } else {
                    orig.eval(q)
                }
            })?;
        }
    }
    let br = Branch::new(piece.clone(), to, vec![out])?;
    BitMap::new(Space::Line, Space::Line, vec![br])
}

/// Deterministic graphing on the given unit intervals: every point is the
/// source of at most one edge.
pub fn random_graphing(rng: &mut impl Rng, bases: &[i64], dialect: u32, max_edges: usize) -> Result<Graphing> {
    let mut g = Graphing::new(CellSet::intervals(bases.iter().copied()), dialect);
    let mut slots = Vec::new();
    for &b in bases {
        for d in 0..dialect {
            slots.push((b, d));
        }
    }
    slots.shuffle(rng);
    for (b, d) in slots {
        if g.edges.len() >= max_edges {
            break;
        }
        let pieces: Vec<Cell> = match rng.gen_range(0..5) {
            0 => continue,
            1 => vec![Cell::line(b)],
            _ => {
                let p = rng.gen_range(1..=3);
                let all = vec![Cell::line(b).with(Axis::X, p, false), Cell::line(b).with(Axis::X, p, true)];
                if rng.gen_bool(0.5) {
                    all
                } else {
                    vec![all[rng.gen_range(0..2)].clone()]
                }
            }
        };
        for piece in pieces {
            if g.edges.len() >= max_edges {
                break;
            }
            let to = *bases.choose(rng).unwrap();
            let id = format!("e{}", g.edges.len());
            let w = random_weight(rng);
            let m = random_map(rng, &piece, to)?;
            g = g.edge(id, w, (d, rng.gen_range(0..dialect)), m);
        }
    }
    Ok(g)
}

/// Carriers for three graphings over a pool of unit intervals, each
/// interval shared by at most two of them.
pub fn random_carriers(rng: &mut impl Rng, pool: usize) -> [Vec<i64>; 3] {
    loop {
        let mut out: [Vec<i64>; 3] = Default::default();
        for b in 0..pool as i64 {
            let owners: &[&[usize]] = &[&[0], &[1], &[2], &[0, 1], &[1, 2], &[0, 2], &[0, 1], &[1, 2], &[0, 2]];
            for &k in *owners.choose(rng).unwrap() {
                out[k].push(b);
            }
        }
        if out.iter().all(|v| !v.is_empty()) {
            return out;
        }
    }
}

pub fn random_triple(rng: &mut impl Rng, max_dialect: u32, max_edges: usize) -> Result<[Graphing; 3]> {
    let cs = random_carriers(rng, 4);
    let mut mk = |bases: &Vec<i64>| -> Result<Graphing> {
        let d = rng.gen_range(1..=max_dialect);
        random_graphing(rng, bases, d, max_edges)
    };
    Ok([mk(&cs[0])?, mk(&cs[1])?, mk(&cs[2])?])
}

/// `⟦F,G⊡H⟧ + ⟦G,H⟧` and `⟦G,H⊡F⟧ + ⟦H,F⟧`.
pub fn trefoil_sides(
    t: &[Graphing; 3],
    m: &dyn Quantifier<Rational>,
    fuel: usize,
) -> Result<(Ext<Rational>, Ext<Rational>)> {
    let [f, g, h] = t;
    let lhs = measure(f, &execute(g, h, fuel)?, m, fuel)? + measure(g, h, m, fuel)?;
    let rhs = measure(g, &execute(h, f, fuel)?, m, fuel)? + measure(h, f, m, fuel)?;
    Ok((lhs, rhs))
}

/// Split every branch guard along a few extra digits.
pub fn random_refinement(rng: &mut impl Rng, g: &Graphing) -> Result<Graphing> {
    let mut out = g.clone();
    for e in &mut out.edges {
        let mut brs = Vec::new();
        for b in &e.map.branches {
            let mut cells = vec![b.guard.clone()];
            for _ in 0..rng.gen_range(0..3) {
                let p = rng.gen_range(1..=5);
                cells = cells
                    .into_iter()
                    .flat_map(|c| {
                        if c.bits.contains_key(&(Axis::X, p)) || rng.gen_bool(0.3) {
                            vec![c]
                        } else {
                            vec![c.clone().with(Axis::X, p, false), c.with(Axis::X, p, true)]
                        }
                    })
                    .collect();
            }
            for c in cells {
                brs.push(Branch::new(c, b.base, b.out.clone())?);
            }
        }
        e.map = BitMap::new(Space::Line, Space::Line, brs)?;
    }
    Ok(out)
}
