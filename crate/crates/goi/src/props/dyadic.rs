use rand::Rng;

use crate::dyadic::{write_prefix, Axis, BitMap, Cell, CellSet, Gen, Space};
use crate::error::Result;
use crate::scalar::Rational;

pub fn random_cell(rng: &mut impl Rng, space: Space, base: i64, max_pos: u32, max_bits: usize) -> Cell {
    let mut c = Cell::unit(space, base);
    for _ in 0..rng.gen_range(0..=max_bits) {
        let axis = if space == Space::Plane && rng.gen_bool(0.5) { Axis::Y } else { Axis::X };
        c.bits.insert((axis, rng.gen_range(1..=max_pos)), rng.gen_bool(0.5));
    }
    c
}

/// A random measure-preserving generator acting on `space`.
pub fn random_gen(rng: &mut impl Rng, space: Space) -> Gen {
    let axis = if space == Space::Plane && rng.gen_bool(0.5) { Axis::Y } else { Axis::X };
    match rng.gen_range(0..5) {
        0 => Gen::TauHat(axis),
        1 => Gen::ThetaHat(axis),
        2 => Gen::ThetaHatInv(axis),
        3 if space == Space::Plane => Gen::Interleave,
        3 => Gen::Deinterleave,
        _ => {
            let width = rng.gen_range(1..=2);
            let n = 1 << width;
            Gen::SliceTranslate { axis, width, from: rng.gen_range(0..n), to: rng.gen_range(0..n) }
        }
    }
}

pub fn random_composition(rng: &mut impl Rng, start: Space, len: usize) -> Vec<Gen> {
    let mut space = start;
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        let g = random_gen(rng, space);
        space = g.target(space).expect("generator chosen for its space");
        out.push(g);
    }
    out
}

/// The composite of `gens` (applied left to right) on the unit interval at `base`.
pub fn compose_gens(gens: &[Gen], start: Space, base: i64) -> Result<BitMap> {
    let mut acc = BitMap::identity(&CellSet::new(start, [Cell::unit(start, base)])?);
    for g in gens {
        let step = g.on(acc.to, &[base])?;
        acc = step.after(&acc)?;
    }
    Ok(acc)
}

pub struct MeasureCase {
    pub cell: Cell,
    pub gens: Vec<Gen>,
    pub before: Rational,
    pub after: Rational,
    pub round_trip: bool,
}

/// Transport a random cell through a random composite and compare measures;
/// also check that the preimage of the image is the part of the cell in the
/// composite's domain.
pub fn measure_case(rng: &mut impl Rng, max_len: usize) -> Result<MeasureCase> {
    let start = if rng.gen_bool(0.5) { Space::Line } else { Space::Plane };
    let cell = random_cell(rng, start, 0, 12, 6);
    let len = rng.gen_range(1..=max_len);
    let gens = random_composition(rng, start, len);
    let f = compose_gens(&gens, start, 0)?;
    let x = CellSet::cell(cell.clone());
    let inside = x.intersect(&f.domain())?;
    let img = f.image(&x);
    Ok(MeasureCase {
        cell,
        gens,
        before: inside.measure(),
        after: img.measure(),
        round_trip: f.preimage(&img) == inside,
    })
}

pub struct InflationCase {
    pub delta: usize,
    pub before: Rational,
    pub after: Rational,
}

impl InflationCase {
    pub fn holds(&self) -> bool {
        self.after == &self.before * Rational::from_integer((1i64 << self.delta).into())
    }
}

/// Drop a random prefix of `δ ≤ 3` digits from a random cell lying under
/// that prefix; the measure of the image must grow by exactly `2^δ`.
pub fn inflation_case(rng: &mut impl Rng) -> Result<InflationCase> {
    let delta = rng.gen_range(1..=3usize);
    let prefix: Vec<bool> = (0..delta).map(|_| rng.gen_bool(0.5)).collect();
    let write = BitMap::new(Space::Line, Space::Line, vec![write_prefix(0, 0, &prefix)?])?;
    let drop = write.inverse()?;
    let mut cell = random_cell(rng, Space::Line, 0, 10, 4);
    for (i, b) in prefix.iter().enumerate() {
        cell.bits.insert((Axis::X, i as u32 + 1), *b);
    }
    let x = CellSet::cell(cell);
    Ok(InflationCase { delta, before: x.measure(), after: drop.image(&x).measure() })
}
