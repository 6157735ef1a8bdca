//! Cell algebra and digit maps checked against a pointwise simulation on
//! sampled binary expansions.

use goi::dyadic::{binary, write_prefix, Axis, BitMap, Cell, CellSet, Gen, Space};
use goi::props::dyadic::{compose_gens, random_cell, random_composition};
use goi::rat;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

const DIGITS: usize = 1 << 13;

/// A point with `DIGITS` known fractional digits per coordinate; digits
/// beyond the known prefix are unknown.
#[derive(Clone, Debug)]
struct Point {
    space: Space,
    base: i64,
    x: Vec<bool>,
    y: Vec<bool>,
}

impl Point {
    fn digits(&self, a: Axis) -> &Vec<bool> {
        match a {
            Axis::X => &self.x,
            Axis::Y => &self.y,
        }
    }

    fn digits_mut(&mut self, a: Axis) -> &mut Vec<bool> {
        match a {
            Axis::X => &mut self.x,
            Axis::Y => &mut self.y,
        }
    }

    /// `Some(b)` if the point is decided by its known digits.
    fn in_cell(&self, c: &Cell) -> Option<bool> {
        if c.space != self.space || c.base != self.base {
            return Some(false);
        }
        let mut unknown = false;
        for (&(a, p), &b) in &c.bits {
            match self.digits(a).get(p as usize - 1) {
                Some(d) if *d != b => return Some(false),
                Some(_) => {}
                None => unknown = true,
            }
        }
        if unknown {
            None
        } else {
            Some(true)
        }
    }

    fn in_set(&self, s: &CellSet) -> Option<bool> {
        let mut unknown = false;
        for c in s.cells() {
            match self.in_cell(c) {
                Some(true) => return Some(true),
                None => unknown = true,
                Some(false) => {}
            }
        }
        if unknown {
            None
        } else {
            Some(false)
        }
    }
}

fn sample_in(rng: &mut impl Rng, c: &Cell) -> Point {
    let mut p = Point {
        space: c.space,
        base: c.base,
        x: (0..DIGITS).map(|_| rng.gen_bool(0.5)).collect(),
        y: if c.space == Space::Plane { (0..DIGITS).map(|_| rng.gen_bool(0.5)).collect() } else { Vec::new() },
    };
    for (&(a, q), &b) in &c.bits {
        p.digits_mut(a)[q as usize - 1] = b;
    }
    p
}

/// Track position `(block, slot)` of a 0-based digit index, and back.
fn split(i: usize) -> (usize, usize) {
    (i / 3, i % 3)
}

fn join(x: usize, k: usize) -> usize {
    3 * x + k
}

fn theta_pair(x: usize, k: usize) -> (usize, usize) {
    match k {
        0 => (2 * x, 0),
        1 => (2 * x + 1, 0),
        _ if x.is_multiple_of(2) => (x / 2, 1),
        _ => (x / 2, 2),
    }
}

fn theta_digits(d: &[bool]) -> Vec<bool> {
    let n = d.len() / 2 / 3 * 3;
    let mut out = vec![None; n];
    for (i, b) in d.iter().enumerate() {
        let (x, k) = split(i);
        let (x2, k2) = theta_pair(x, k);
        let j = join(x2, k2);
        if j < n {
            out[j] = Some(*b);
        }
    }
    out.into_iter().map_while(|b| b).collect()
}

fn theta_inv_digits(d: &[bool]) -> Vec<bool> {
    let n = d.len() / 2 / 3 * 3;
    (0..n)
        .map(|i| {
            let (x, k) = split(i);
            let (x2, k2) = theta_pair(x, k);
            d[join(x2, k2)]
        })
        .collect()
}

fn simulate(g: Gen, p: &Point) -> Option<Point> {
    let mut q = p.clone();
    match g {
        Gen::Translate(k) => q.base += k,
        Gen::TauHat(a) => {
            let d = q.digits_mut(a);
            for x in 0..d.len() / 3 {
                d.swap(3 * x, 3 * x + 1);
            }
        }
        Gen::ThetaHat(a) => *q.digits_mut(a) = theta_digits(p.digits(a)),
        Gen::ThetaHatInv(a) => *q.digits_mut(a) = theta_inv_digits(p.digits(a)),
        Gen::Interleave => {
            q.space = Space::Line;
            q.x = p.x.iter().zip(&p.y).flat_map(|(a, b)| [*a, *b]).collect();
            q.y = Vec::new();
        }
        Gen::Deinterleave => {
            q.space = Space::Plane;
            q.x = p.x.iter().step_by(2).copied().collect();
            q.y = p.x.iter().skip(1).step_by(2).copied().collect();
        }
        Gen::SliceTranslate { axis, width, from, to } => {
            let d = q.digits_mut(axis);
            let cur: Vec<bool> = (0..width as usize).map(|j| d[3 * j]).collect();
            if cur != binary(from, width) {
                return None;
            }
            for (j, b) in binary(to, width).into_iter().enumerate() {
                d[3 * j] = b;
            }
        }
    }
    Some(q)
}

fn check_against_simulation(seed: u64, cases: usize) {
    let mut rng = SplitMix64::seed_from_u64(seed);
    for _ in 0..cases {
        let start = if rng.gen_bool(0.5) { Space::Line } else { Space::Plane };
        let cell = random_cell(&mut rng, start, 0, 10, 5);
        let len = rng.gen_range(1..=4);
        let gens = random_composition(&mut rng, start, len);
        let f = compose_gens(&gens, start, 0).unwrap();
        let img = f.image(&CellSet::cell(cell.clone()));
        let dom = f.domain();
        for _ in 0..20 {
            let p = sample_in(&mut rng, &cell);
            let mut cur = Some(p.clone());
            for g in &gens {
                cur = cur.and_then(|c| simulate(*g, &c));
            }
            match cur {
                None => assert_eq!(p.in_set(&dom), Some(false), "{gens:?}"),
                Some(q) => {
                    assert_eq!(p.in_set(&dom), Some(true), "{gens:?}");
                    assert_ne!(q.in_set(&img), Some(false), "{gens:?} {cell} -> {img}");
                }
            }
        }
    }
}

#[test]
fn composites_agree_with_digit_simulation() {
    check_against_simulation(7, 150);
}

#[test]
fn tau_swaps_first_two_digits() {
    let t = Gen::TauHat(Axis::X).on(Space::Line, &[0]).unwrap();
    let c = Cell::parse("[0; x:1=1,x:2=0]").unwrap();
    let img = t.image(&CellSet::cell(c));
    assert_eq!(img, CellSet::parse("[0; x:1=0,x:2=1]").unwrap());
    assert_eq!(img.measure(), rat(1, 4));
}

#[test]
fn theta_round_trip_on_sampled_points() {
    let mut rng = SplitMix64::seed_from_u64(11);
    let th = Gen::ThetaHat(Axis::X).on(Space::Line, &[0]).unwrap();
    let back = Gen::ThetaHatInv(Axis::X).on(Space::Line, &[0]).unwrap();
    let id = back.after(&th).unwrap();
    assert!(id.branches.iter().all(|b| b.is_identity()));
    for _ in 0..1000 {
        let p = sample_in(&mut rng, &Cell::line(0));
        let q = simulate(Gen::ThetaHatInv(Axis::X), &simulate(Gen::ThetaHat(Axis::X), &p).unwrap()).unwrap();
        assert_eq!(&q.x[..], &p.x[..q.x.len()]);
    }
}

#[test]
fn interleave_example() {
    // frac(x) = .10, y = .10  ->  .1100
    let f = Gen::Interleave.on(Space::Plane, &[0]).unwrap();
    let c = Cell::parse("[0|I; x:1=1,x:2=0,y:1=1,y:2=0]").unwrap();
    assert_eq!(f.image(&CellSet::cell(c)), CellSet::parse("[0; x:1=1,x:2=1,x:3=0,x:4=0]").unwrap());
}

#[test]
fn slice_translate_moves_half_onto_half() {
    let f = Gen::SliceTranslate { axis: Axis::X, width: 1, from: 0, to: 1 }.on(Space::Line, &[0]).unwrap();
    assert_eq!(f.domain(), CellSet::parse("[0; x:1=0]").unwrap());
    assert_eq!(f.codomain(), CellSet::parse("[0; x:1=1]").unwrap());
    assert_eq!(f.codomain().measure(), rat(1, 2));
}

#[test]
fn prefix_drop_doubles() {
    let write = BitMap::new(Space::Line, Space::Line, vec![write_prefix(0, 0, &[false]).unwrap()]).unwrap();
    let drop = write.inverse().unwrap();
    let half = CellSet::parse("[0; x:1=0]").unwrap();
    let img = drop.image(&half);
    assert_eq!(img, CellSet::intervals([0]));
    assert_eq!(img.measure(), rat(2, 1) * half.measure());
}

#[test]
fn integer_translate() {
    let f = Gen::Translate(5).on(Space::Line, &[0]).unwrap();
    assert_eq!(f.codomain(), CellSet::intervals([5]));
}

#[test]
fn partition_of_three_tracks() {
    // 4 slices on track 0 and 2 on track 1: 8 cells of measure 1/8
    let parts = goi::dyadic::partition_cells(&[4, 2, 1]).unwrap();
    assert_eq!(parts.len(), 8);
    let mut union = CellSet::empty(Space::Line);
    for (i, p) in parts.iter().enumerate() {
        assert_eq!(p.measure(), rat(1, 8));
        for q in &parts[i + 1..] {
            assert!(p.is_disjoint(q));
        }
        union = union.union(p).unwrap();
    }
    assert_eq!(union, CellSet::intervals([0]));
    assert!(goi::dyadic::partition_cells(&[3, 1, 1]).is_err());
    assert_eq!(goi::dyadic::partition_cells(&[1, 1, 1]).unwrap(), vec![CellSet::intervals([0])]);
}

fn arb_cellset() -> impl Strategy<Value = CellSet> {
    let cell = (0i64..2, prop::collection::btree_map(1u32..7, any::<bool>(), 0..4)).prop_map(|(base, bits)| {
        let mut c = Cell::line(base);
        for (p, b) in bits {
            c.bits.insert((Axis::X, p), b);
        }
        c
    });
    prop::collection::vec(cell, 0..5).prop_map(|cs| CellSet::new(Space::Line, cs).unwrap())
}

proptest! {
    #[test]
    fn inclusion_exclusion(x in arb_cellset(), y in arb_cellset()) {
        let u = x.union(&y).unwrap();
        let i = x.intersect(&y).unwrap();
        prop_assert_eq!(x.measure() + y.measure(), u.measure() + i.measure());
        prop_assert_eq!(x.difference(&y).unwrap().measure(), x.measure() - i.measure());
    }

    #[test]
    fn canonical_form_is_idempotent(x in arb_cellset()) {
        let again = CellSet::new(Space::Line, x.cells().to_vec()).unwrap();
        prop_assert_eq!(&again, &x);
        prop_assert_eq!(CellSet::parse(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn image_preimage_adjunction(seed in any::<u64>()) {
        let mut rng = SplitMix64::seed_from_u64(seed);
        let start = if rng.gen_bool(0.5) { Space::Line } else { Space::Plane };
        let gens = random_composition(&mut rng, start, 3);
        let f = compose_gens(&gens, start, 0).unwrap();
        let x = CellSet::cell(random_cell(&mut rng, start, 0, 9, 4));
        let inside = x.intersect(&f.domain()).unwrap();
        let img = f.image(&x);
        prop_assert_eq!(img.measure(), inside.measure());
        prop_assert_eq!(f.preimage(&img), inside);
        prop_assert!(f.is_injective());
    }
}
