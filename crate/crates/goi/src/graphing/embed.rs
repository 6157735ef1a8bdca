//! Dialects moved into the `[0,1)` factor and the result folded back onto
//! the line by digit interleaving.

use super::{GEdge, Graphing};
use crate::dyadic::{binary, slot, Axis, BitMap, Branch, Cell, CellSet, Gen, PosMap, Space, Src};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dialect element `d` is stored as the digits `words[d]` at the `y`
/// positions `positions`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DialectCode {
    pub positions: Vec<u32>,
    pub words: Vec<Vec<bool>>,
}

fn width(n: u32) -> u32 {
    n.next_power_of_two().trailing_zeros()
}

impl DialectCode {
    /// Binary index, most significant digit first, on the first track-0
    /// slots. Sizes are padded to a power of two.
    pub fn standard(n: u32) -> DialectCode {
        let w = width(n);
        DialectCode { positions: (0..w).map(|j| slot(j, 0)).collect(), words: (0..n).map(|d| binary(d, w)).collect() }
    }

    /// Code of a product dialect `f + n_f·a` after the tracks of the two
    /// factors have been merged on track 0: digit `j` of `f` sits in block
    /// `2j` and digit `j` of `a` in block `2j+1`.
    pub fn merged(nf: u32, na: u32) -> DialectCode {
        let (wf, wa) = (width(nf), width(na));
        let mut positions: Vec<u32> = (0..wf).map(|j| slot(2 * j, 0)).collect();
        positions.extend((0..wa).map(|j| slot(2 * j + 1, 0)));
        let words = (0..nf * na)
            .map(|d| {
                let mut w = binary(d % nf, wf);
                w.extend(binary(d / nf, wa));
                w
            })
            .collect();
        DialectCode { positions, words }
    }
}

/// `Ω(V × [0,1))`.
pub fn omega_carrier(v: &CellSet) -> Result<CellSet> {
    let plane = CellSet::new(Space::Plane, v.cells().iter().map(|c| Cell { space: Space::Plane, ..c.clone() }))?;
    Ok(Gen::Interleave.on(Space::Plane, &v.bases())?.image(&plane))
}

fn fold(plane: &BitMap, from: &[i64], to: &[i64]) -> Result<BitMap> {
    let inner = plane.after(&Gen::Deinterleave.on(Space::Line, from)?)?;
    Gen::Interleave.on(Space::Plane, to)?.after(&inner)
}

/// The branch `b` acting on `x`, with the dialect word at `sd` rewritten to
/// the one at `dd` in `y`.
fn plane_branch(b: &Branch, code: &DialectCode, sd: u32, dd: u32) -> Result<Branch> {
    let mut guard = Cell { space: Space::Plane, ..b.guard.clone() };
    for (p, bit) in code.positions.iter().zip(&code.words[sd as usize]) {
        guard.bits.insert((Axis::Y, *p), *bit);
    }
    let t = code.positions.iter().copied().max().unwrap_or(0);
    let word = &code.words[dd as usize];
    let y = PosMap::from_fn(t, 1, |q| match code.positions.iter().position(|p| *p == q) {
        Some(i) => Src::Const(word[i]),
        None => Src::In(Axis::Y, q),
    })?;
    Branch::new(guard, b.base, vec![b.out[0].clone(), y])
}

pub fn embed_dialect_with<W: Scalar>(g: &Graphing<W>, code: &DialectCode) -> Result<Graphing<W>> {
    if code.words.len() < g.dialect as usize {
        return Err(Error::Precondition("dialect code too small for the dialect".into()));
    }
    let mut out = Graphing::new(omega_carrier(&g.carrier)?, 1);
    for e in &g.edges {
        let mut brs = Vec::new();
        for b in &e.map.branches {
            brs.push(plane_branch(b, code, e.src_dial, e.dst_dial)?);
        }
        let plane = BitMap::new(Space::Plane, Space::Plane, brs)?;
        let from = e.map.domain().bases();
        let mut to: Vec<i64> = e.map.branches.iter().map(|b| b.base).collect();
        to.sort();
        to.dedup();
        out.edges.push(GEdge { id: e.id.clone(), weight: e.weight.clone(), src_dial: 0, dst_dial: 0, map: fold(&plane, &from, &to)? });
    }
    Ok(out)
}

/// `!_Ω`: the dialect encoded on track 0 of the `[0,1)` factor, then folded
/// onto the line.
pub fn embed_dialect<W: Scalar>(g: &Graphing<W>) -> Result<Graphing<W>> {
    embed_dialect_with(g, &DialectCode::standard(g.dialect))
}

/// `Ω ∘ (x ↦ x+k, y ↦ gens(y)) ∘ Ω⁻¹` on the unit intervals at `bases`.
pub fn omega_conjugate(bases: &[i64], k: i64, gens: &[Gen]) -> Result<BitMap> {
    let mut m = BitMap::identity(&CellSet::new(Space::Plane, bases.iter().map(|b| Cell::unit(Space::Plane, *b)))?);
    for g in gens {
        m = g.on(Space::Plane, bases)?.after(&m)?;
    }
    m = Gen::Translate(k).on(Space::Plane, bases)?.after(&m)?;
    let to: Vec<i64> = bases.iter().map(|b| b + k).collect();
    fold(&m, bases, &to)
}
