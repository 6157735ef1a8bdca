use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Coordinate whose fractional binary digits a position refers to: `X` is
/// the fractional part of the line coordinate, `Y` the `[0,1)` factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
        }
    }

    pub fn name(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
        }
    }
}

/// `Line` is ℝ; `Plane` is ℝ × [0,1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Space {
    Line,
    Plane,
}

impl Space {
    pub fn axes(self) -> &'static [Axis] {
        match self {
            Space::Line => &[Axis::X],
            Space::Plane => &[Axis::X, Axis::Y],
        }
    }
}

/// Digit position, counted from 1 after the binary point.
pub type Pos = (Axis, u32);

/// A unit interval `[base, base+1)` (times `[0,1)` in the plane) with
/// finitely many fixed binary digits.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub space: Space,
    pub base: i64,
    pub bits: BTreeMap<Pos, bool>,
}

pub fn pow2_inv(k: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

impl Cell {
    pub fn unit(space: Space, base: i64) -> Cell {
        Cell { space, base, bits: BTreeMap::new() }
    }

    pub fn line(base: i64) -> Cell {
        Cell::unit(Space::Line, base)
    }

    pub fn with(mut self, axis: Axis, p: u32, b: bool) -> Cell {
        self.bits.insert((axis, p), b);
        self
    }

    pub fn measure(&self) -> Rational {
        pow2_inv(self.bits.len())
    }

    pub fn intersect(&self, other: &Cell) -> Option<Cell> {
        if self.space != other.space || self.base != other.base {
            return None;
        }
        let mut bits = self.bits.clone();
        for (k, v) in &other.bits {
            match bits.get(k) {
                Some(w) if w != v => return None,
                _ => {
                    bits.insert(*k, *v);
                }
            }
        }
        Some(Cell { space: self.space, base: self.base, bits })
    }

    /// `self ⊇ other`.
    pub fn contains(&self, other: &Cell) -> bool {
        self.space == other.space
            && self.base == other.base
            && self.bits.iter().all(|(k, v)| other.bits.get(k) == Some(v))
    }

    pub fn minus(&self, other: &Cell) -> Vec<Cell> {
        if self.intersect(other).is_none() {
            return vec![self.clone()];
        }
        if other.contains(self) {
            return Vec::new();
        }
        let (&k, &v) = other.bits.iter().find(|(k, _)| !self.bits.contains_key(k)).unwrap();
        let keep = self.clone().with(k.0, k.1, !v);
        let mut out = vec![keep];
        out.extend(self.clone().with(k.0, k.1, v).minus(other));
        out
    }

    /// Whether a point, given by its base and enough digits, lies in the cell.
    pub fn holds(&self, base: i64, digit: impl Fn(Pos) -> bool) -> bool {
        base == self.base && self.bits.iter().all(|(&k, &v)| digit(k) == v)
    }

    pub fn parse(s: &str) -> Result<Cell> {
        let bad = || Error::Parse(format!("malformed cell `{s}`"));
        let inner = s.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
        let (head, rest) = inner.split_once(';').unwrap_or((inner, ""));
        let (base, space) = match head.trim().strip_suffix("|I") {
            Some(b) => (b, Space::Plane),
            None => (head, Space::Line),
        };
        let base: i64 = base.trim().parse().map_err(|_| bad())?;
        let mut cell = Cell::unit(space, base);
        for item in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (ap, b) = item.split_once('=').ok_or_else(bad)?;
            let (a, p) = ap.split_once(':').ok_or_else(bad)?;
            let axis = match a.trim() {
                "x" => Axis::X,
                "y" if space == Space::Plane => Axis::Y,
                _ => return Err(bad()),
            };
            let p: u32 = p.trim().parse().map_err(|_| bad())?;
            let b = match b.trim() {
                "0" => false,
                "1" => true,
                _ => return Err(bad()),
            };
            if p == 0 || cell.bits.insert((axis, p), b).is_some() {
                return Err(bad());
            }
        }
        Ok(cell)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.base)?;
        if self.space == Space::Plane {
            write!(f, "|I")?;
        }
        write!(f, ";")?;
        let items: Vec<String> =
            self.bits.iter().map(|((a, p), b)| format!("{}:{}={}", a.name(), p, u8::from(*b))).collect();
        if !items.is_empty() {
            write!(f, " {}", items.join(","))?;
        }
        write!(f, "]")
    }
}

/// A finite union of cells, kept as the disjoint cells read off a reduced
/// ordered decision diagram over digit positions. Equal sets have equal
/// representations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellSet {
    pub space: Space,
    cells: Vec<Cell>,
}

#[derive(PartialEq)]
enum Node {
    False,
    True,
    Split(Pos, Box<Node>, Box<Node>),
}

fn build(cs: &[BTreeMap<Pos, bool>]) -> Node {
    if cs.is_empty() {
        return Node::False;
    }
    if cs.iter().any(|c| c.is_empty()) {
        return Node::True;
    }
    let v = cs.iter().filter_map(|c| c.keys().next()).min().copied().unwrap();
    let side = |b: bool| -> Vec<BTreeMap<Pos, bool>> {
        cs.iter()
            .filter(|c| c.get(&v).is_none_or(|x| *x == b))
            .map(|c| {
                let mut c = c.clone();
                c.remove(&v);
                c
            })
            .collect()
    };
    let n0 = build(&side(false));
    let n1 = build(&side(true));
    if n0 == n1 {
        n0
    } else {
        Node::Split(v, Box::new(n0), Box::new(n1))
    }
}

fn collect(n: &Node, prefix: &mut BTreeMap<Pos, bool>, out: &mut Vec<BTreeMap<Pos, bool>>) {
    match n {
        Node::False => {}
        Node::True => out.push(prefix.clone()),
        Node::Split(v, a, b) => {
            prefix.insert(*v, false);
            collect(a, prefix, out);
            prefix.insert(*v, true);
            collect(b, prefix, out);
            prefix.remove(v);
        }
    }
}

impl CellSet {
    pub fn empty(space: Space) -> CellSet {
        CellSet { space, cells: Vec::new() }
    }

    pub fn new(space: Space, cells: impl IntoIterator<Item = Cell>) -> Result<CellSet> {
        let mut by_base: BTreeMap<i64, Vec<BTreeMap<Pos, bool>>> = BTreeMap::new();
        for c in cells {
            if c.space != space {
                return Err(Error::Precondition(format!("cell {c} is not in the {space:?} space")));
            }
            by_base.entry(c.base).or_default().push(c.bits);
        }
        let mut out = Vec::new();
        for (base, cs) in by_base {
            let mut paths = Vec::new();
            collect(&build(&cs), &mut BTreeMap::new(), &mut paths);
            out.extend(paths.into_iter().map(|bits| Cell { space, base, bits }));
        }
        Ok(CellSet { space, cells: out })
    }

    pub fn cell(c: Cell) -> CellSet {
        let space = c.space;
        CellSet::new(space, [c]).unwrap()
    }

    /// Union of whole unit intervals on the line.
    pub fn intervals(bases: impl IntoIterator<Item = i64>) -> CellSet {
        CellSet::new(Space::Line, bases.into_iter().map(Cell::line)).unwrap()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn measure(&self) -> Rational {
        self.cells.iter().fold(Rational::zero(), |a, c| a + c.measure())
    }

    pub fn bases(&self) -> Vec<i64> {
        let mut b: Vec<i64> = self.cells.iter().map(|c| c.base).collect();
        b.dedup();
        b
    }

    fn check(&self, other: &CellSet) -> Result<()> {
        if self.space != other.space {
            return Err(Error::Precondition("cell sets live in different spaces".into()));
        }
        Ok(())
    }

    pub fn union(&self, other: &CellSet) -> Result<CellSet> {
        self.check(other)?;
        CellSet::new(self.space, self.cells.iter().chain(&other.cells).cloned())
    }

    pub fn intersect(&self, other: &CellSet) -> Result<CellSet> {
        self.check(other)?;
        let mut out = Vec::new();
        for a in &self.cells {
            for b in &other.cells {
                out.extend(a.intersect(b));
            }
        }
        CellSet::new(self.space, out)
    }

    pub fn difference(&self, other: &CellSet) -> Result<CellSet> {
        self.check(other)?;
        let mut cur: Vec<Cell> = self.cells.clone();
        for b in &other.cells {
            cur = cur.iter().flat_map(|a| a.minus(b)).collect();
        }
        CellSet::new(self.space, cur)
    }

    pub fn combine(&self, kind: Combine, other: &CellSet) -> Result<CellSet> {
        match kind {
            Combine::Union => self.union(other),
            Combine::Intersect => self.intersect(other),
            Combine::Difference => self.difference(other),
        }
    }

    pub fn is_disjoint(&self, other: &CellSet) -> bool {
        self.intersect(other).map(|s| s.is_empty()).unwrap_or(true)
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.difference(other).map(|s| s.is_empty()).unwrap_or(false)
    }

    pub fn holds(&self, base: i64, digit: impl Fn(Pos) -> bool + Copy) -> bool {
        self.cells.iter().any(|c| c.holds(base, digit))
    }

    /// Translate every cell by an integer.
    pub fn shift(&self, k: i64) -> CellSet {
        let cells = self.cells.iter().map(|c| Cell { base: c.base + k, ..c.clone() });
        CellSet::new(self.space, cells).unwrap()
    }

    pub fn parse(s: &str) -> Result<CellSet> {
        let mut cells = Vec::new();
        let mut depth = 0;
        let mut start = None;
        for (i, ch) in s.char_indices() {
            match ch {
                '[' => {
                    if depth == 0 {
                        start = Some(i);
                    }
                    depth += 1;
                }
                ']' => {
                    depth -= 1;
                    if depth == 0 {
                        cells.push(Cell::parse(&s[start.unwrap()..=i])?);
                    }
                }
                _ => {}
            }
        }
        let space = cells.first().map_or(Space::Line, |c| c.space);
        CellSet::new(space, cells)
    }
}

impl fmt::Display for CellSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cells.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.cells.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combine {
    Union,
    Intersect,
    Difference,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn halves_merge() {
        let a = Cell::line(0).with(Axis::X, 1, false);
        let b = Cell::line(0).with(Axis::X, 1, true);
        let u = CellSet::cell(a).union(&CellSet::cell(b)).unwrap();
        assert_eq!(u, CellSet::intervals([0]));
        assert_eq!(u.measure(), rat(1, 1));
    }

    #[test]
    fn merging_is_order_independent() {
        let c = |b1, b2| Cell::line(0).with(Axis::X, 1, b1).with(Axis::X, 2, b2);
        let a = CellSet::new(Space::Line, [c(false, false), c(false, true), c(true, false)]).unwrap();
        let b = CellSet::new(
            Space::Line,
            [Cell::line(0).with(Axis::X, 2, false), Cell::line(0).with(Axis::X, 1, false)],
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.measure(), rat(3, 4));
    }

    #[test]
    fn depth_three_partition() {
        let mut cells = Vec::new();
        for i in 0..8u32 {
            let mut c = Cell::line(3);
            for p in 1..=3 {
                c = c.with(Axis::X, p, (i >> (3 - p)) & 1 == 1);
            }
            assert_eq!(c.measure(), rat(1, 8));
            cells.push(c);
        }
        assert_eq!(CellSet::new(Space::Line, cells).unwrap(), CellSet::intervals([3]));
        assert_eq!(CellSet::empty(Space::Line).measure(), rat(0, 1));
    }

    #[test]
    fn difference_and_text() {
        let u = CellSet::intervals([0]);
        let q = CellSet::parse("[0; x:2=1]").unwrap();
        let d = u.difference(&q).unwrap();
        assert_eq!(d.measure(), rat(1, 2));
        assert!(d.is_disjoint(&q));
        assert_eq!(CellSet::parse(&d.to_string()).unwrap(), d);
        assert!(Cell::parse("[0; y:1=0]").is_err());
        assert_eq!(Cell::parse("[2|I; x:1=0,y:3=1]").unwrap().measure(), rat(1, 4));
    }
}
