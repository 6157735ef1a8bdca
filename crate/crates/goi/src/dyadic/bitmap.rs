use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use super::cell::{Axis, Cell, CellSet, Pos, Space};
use super::posmap::{PosMap, Src};
use crate::error::{Error, Result};

/// Free equality classes allowed when enumerating a fixed-point set.
const FIXED_FREE_LIMIT: usize = 20;

/// One piece of a piecewise affine dyadic map: on `guard`, the output lies
/// in the unit interval at `base` and its digits are routed by `out`, one
/// [`PosMap`] per output axis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Branch {
    pub guard: Cell,
    pub base: i64,
    pub out: Vec<PosMap>,
}

impl Branch {
    pub fn new(guard: Cell, base: i64, out: Vec<PosMap>) -> Result<Branch> {
        Branch { guard, base, out }.normalized()
    }

    fn normalized(self) -> Result<Branch> {
        let keys: Vec<Pos> = self.guard.bits.keys().copied().collect();
        let g = &self.guard.bits;
        let fixed = |p: Pos| g.get(&p).copied();
        let out = self.out.iter().map(|pm| pm.substitute(&fixed, &keys)).collect::<Result<_>>()?;
        Ok(Branch { out, ..self })
    }

    pub fn out_space(&self) -> Space {
        if self.out.len() == 2 {
            Space::Plane
        } else {
            Space::Line
        }
    }

    fn out_axes(&self) -> impl Iterator<Item = (Axis, &PosMap)> {
        self.out_space().axes().iter().copied().zip(self.out.iter())
    }

    pub fn image_cell(&self, c: &Cell) -> Option<Cell> {
        let d = self.guard.intersect(c)?;
        let mut img = Cell::unit(self.out_space(), self.base);
        for (a, pm) in self.out_axes() {
            for (i, s) in pm.head().iter().enumerate() {
                if let Src::Const(b) = s {
                    img.bits.insert((a, i as u32 + 1), *b);
                }
            }
            for (&(b, p), &v) in &d.bits {
                for q in pm.preimages(b, p) {
                    img.bits.insert((a, q), v);
                }
            }
        }
        Some(img)
    }

    pub fn preimage_cell(&self, y: &Cell) -> Option<Cell> {
        if y.base != self.base || y.space != self.out_space() {
            return None;
        }
        let mut c = self.guard.clone();
        for (&(a, q), &b) in &y.bits {
            match self.out[a.index()].eval(q) {
                Src::Const(v) if v != b => return None,
                Src::Const(_) => {}
                Src::In(ax, p) => match c.bits.insert((ax, p), b) {
                    Some(old) if old != b => return None,
                    _ => {}
                },
            }
        }
        Some(c)
    }

    /// `self` after `inner`, on the part of `inner`'s guard that lands in
    /// `self`'s guard.
    pub fn after(&self, inner: &Branch) -> Result<Option<Branch>> {
        let Some(dom) = inner.preimage_cell(&self.guard) else {
            return Ok(None);
        };
        let out = self.out.iter().map(|pm| pm.compose(&inner.out)).collect::<Result<_>>()?;
        Branch::new(dom, self.base, out).map(Some)
    }

    pub fn inverse(&self) -> Result<Branch> {
        let guard = self.image_cell(&self.guard).expect("guard meets itself");
        let mut out = Vec::new();
        for &b in self.guard.space.axes() {
            let mut t = self.guard.bits.keys().filter(|k| k.0 == b).map(|k| k.1).max().unwrap_or(0);
            let mut l = 1u32;
            for (_, pm) in self.out_axes() {
                t = t.max(pm.max_input(b));
                for c in pm.tail().iter().filter(|c| c.axis == b) {
                    l = l.lcm(&c.slope);
                }
            }
            let bad = std::cell::Cell::new(None);
            let pm = PosMap::from_fn(t, l, |p| {
                if let Some(v) = self.guard.bits.get(&(b, p)) {
                    return Src::Const(*v);
                }
                let hits: Vec<(Axis, u32)> = self
                    .out_axes()
                    .flat_map(|(a, pm)| pm.preimages(b, p).into_iter().map(move |q| (a, q)))
                    .collect();
                if hits.len() != 1 {
                    bad.set(Some((b, p, hits.len())));
                    return Src::Const(false);
                }
                Src::In(hits[0].0, hits[0].1)
            });
            if let Some((b, p, n)) = bad.get() {
                return Err(Error::Precondition(format!(
                    "map is not invertible: input digit {}{} is read {} times",
                    b.name(),
                    p,
                    n
                )));
            }
            out.push(pm?);
        }
        Branch::new(guard, self.guard.base, out)
    }

    /// Points of the guard mapped to themselves, up to a null set.
    pub fn fixed_support(&self) -> Result<CellSet> {
        let space = self.guard.space;
        if self.out_space() != space || self.base != self.guard.base {
            return Ok(CellSet::empty(space));
        }
        if !self.out_axes().all(|(a, pm)| pm.is_identity_on(a)) {
            return Ok(CellSet::empty(space));
        }
        #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
        enum Node {
            K(bool),
            P(Pos),
        }
        let mut parent: BTreeMap<Node, Node> = BTreeMap::new();
        fn find(parent: &mut BTreeMap<Node, Node>, n: Node) -> Node {
            let p = *parent.entry(n).or_insert(n);
            if p == n {
                return n;
            }
            let r = find(parent, p);
            parent.insert(n, r);
            r
        }
        let union = |parent: &mut BTreeMap<Node, Node>, a: Node, b: Node| {
            let (ra, rb) = (find(parent, a), find(parent, b));
            if ra != rb {
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent.insert(hi, lo);
            }
        };
        for (&p, &b) in &self.guard.bits {
            union(&mut parent, Node::P(p), Node::K(b));
        }
        for (a, pm) in self.out_axes() {
            for (i, s) in pm.head().iter().enumerate() {
                let me = Node::P((a, i as u32 + 1));
                let other = match *s {
                    Src::Const(b) => Node::K(b),
                    Src::In(ax, p) => Node::P((ax, p)),
                };
                union(&mut parent, me, other);
            }
        }
        let nodes: Vec<Node> = parent.keys().copied().collect();
        let mut classes: BTreeMap<Node, Vec<Pos>> = BTreeMap::new();
        for n in nodes {
            let r = find(&mut parent, n);
            if let Node::P(p) = n {
                classes.entry(r).or_default().push(p);
            }
        }
        if find(&mut parent, Node::K(false)) == find(&mut parent, Node::K(true)) {
            return Ok(CellSet::empty(space));
        }
        let mut fixed = Cell::unit(space, self.base);
        let mut free = Vec::new();
        for (r, ps) in classes {
            match r {
                Node::K(b) => ps.iter().for_each(|p| {
                    fixed.bits.insert(*p, b);
                }),
                Node::P(_) if ps.len() > 1 => free.push(ps),
                Node::P(_) => {}
            }
        }
        if free.len() > FIXED_FREE_LIMIT {
            return Err(Error::Fuel { what: "fixed-point classes", bound: FIXED_FREE_LIMIT });
        }
        let mut cells = Vec::with_capacity(1 << free.len());
        for mask in 0u64..(1 << free.len()) {
            let mut c = fixed.clone();
            for (i, ps) in free.iter().enumerate() {
                for p in ps {
                    c.bits.insert(*p, mask >> i & 1 == 1);
                }
            }
            cells.push(c);
        }
        CellSet::new(space, cells)
    }

    pub fn is_identity(&self) -> bool {
        if self.base != self.guard.base || self.out_space() != self.guard.space {
            return false;
        }
        let ids = self.guard.space.axes().iter().map(|a| PosMap::identity(*a)).collect();
        Branch::new(self.guard.clone(), self.base, ids).is_ok_and(|id| id.out == self.out)
    }
}

/// A partial map between spaces given by finitely many branches.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitMap {
    pub from: Space,
    pub to: Space,
    pub branches: Vec<Branch>,
}

impl BitMap {
    pub fn new(from: Space, to: Space, branches: Vec<Branch>) -> Result<BitMap> {
        for b in &branches {
            if b.guard.space != from || b.out_space() != to {
                return Err(Error::Precondition("branch does not match the map's spaces".into()));
            }
        }
        Ok(BitMap { from, to, branches })
    }

    pub fn identity(dom: &CellSet) -> BitMap {
        let space = dom.space;
        let branches = dom
            .cells()
            .iter()
            .map(|c| Branch {
                guard: c.clone(),
                base: c.base,
                out: space.axes().iter().map(|a| PosMap::identity(*a)).collect(),
            })
            .collect();
        BitMap { from: space, to: space, branches }
    }

    pub fn domain(&self) -> CellSet {
        CellSet::new(self.from, self.branches.iter().map(|b| b.guard.clone())).unwrap()
    }

    pub fn codomain(&self) -> CellSet {
        self.image(&self.domain())
    }

    pub fn image(&self, s: &CellSet) -> CellSet {
        let mut out = Vec::new();
        for b in &self.branches {
            for c in s.cells() {
                out.extend(b.image_cell(c));
            }
        }
        CellSet::new(self.to, out).unwrap()
    }

    pub fn preimage(&self, s: &CellSet) -> CellSet {
        let mut out = Vec::new();
        for b in &self.branches {
            for c in s.cells() {
                out.extend(b.preimage_cell(c));
            }
        }
        CellSet::new(self.from, out).unwrap()
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &BitMap) -> Result<BitMap> {
        if inner.to != self.from {
            return Err(Error::Precondition("composed maps do not share a space".into()));
        }
        let mut branches = Vec::new();
        for ib in &inner.branches {
            for ob in &self.branches {
                branches.extend(ob.after(ib)?);
            }
        }
        branches.sort();
        Ok(BitMap { from: inner.from, to: self.to, branches })
    }

    pub fn inverse(&self) -> Result<BitMap> {
        let mut branches = self.branches.iter().map(Branch::inverse).collect::<Result<Vec<_>>>()?;
        branches.sort();
        Ok(BitMap { from: self.to, to: self.from, branches })
    }

    pub fn restrict(&self, s: &CellSet) -> Result<BitMap> {
        let mut branches = Vec::new();
        for b in &self.branches {
            for c in s.cells() {
                if let Some(g) = b.guard.intersect(c) {
                    branches.push(Branch::new(g, b.base, b.out.clone())?);
                }
            }
        }
        branches.sort();
        Ok(BitMap { from: self.from, to: self.to, branches })
    }

    /// Injective on its domain: every branch invertible, guards and images
    /// pairwise disjoint.
    pub fn is_injective(&self) -> bool {
        let n = self.branches.len();
        if self.branches.iter().any(|b| b.inverse().is_err()) {
            return false;
        }
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (&self.branches[i], &self.branches[j]);
                if a.guard.intersect(&b.guard).is_some() {
                    return false;
                }
                let ia = CellSet::cell(a.image_cell(&a.guard).unwrap());
                let ib = CellSet::cell(b.image_cell(&b.guard).unwrap());
                if !ia.is_disjoint(&ib) {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.guard, self.base)?;
        for pm in &self.out {
            write!(f, " {pm}")?;
        }
        Ok(())
    }
}

impl fmt::Display for BitMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.branches {
            writeln!(f, "{b}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn shift_right(from: i64, to: i64, bit: bool) -> Branch {
        let pm = PosMap::from_fn(1, 1, |q| if q == 1 { Src::Const(bit) } else { Src::In(Axis::X, q - 1) }).unwrap();
        Branch::new(Cell::line(from), to, vec![pm]).unwrap()
    }

    #[test]
    fn halving_round_trip() {
        let b = shift_right(0, 5, true);
        let img = b.image_cell(&Cell::line(0)).unwrap();
        assert_eq!(img, Cell::line(5).with(Axis::X, 1, true));
        assert_eq!(img.measure(), rat(1, 2));
        let inv = b.inverse().unwrap();
        assert_eq!(inv.guard, img);
        let back = b.after(&inv).unwrap().unwrap();
        assert!(back.is_identity());
        assert!(inv.after(&b).unwrap().unwrap().is_identity());
    }

    #[test]
    fn fixed_points_of_swap() {
        let pm = PosMap::from_fn(2, 1, |q| Src::In(Axis::X, match q {
            1 => 2,
            2 => 1,
            q => q,
        }))
        .unwrap();
        let b = Branch::new(Cell::line(0), 0, vec![pm]).unwrap();
        let fx = b.fixed_support().unwrap();
        assert_eq!(fx.measure(), rat(1, 2));
        assert!(shift_right(0, 0, true).fixed_support().unwrap().is_empty());
    }

    #[test]
    fn dropping_a_digit_is_not_invertible() {
        let pm = PosMap::from_fn(0, 1, |q| Src::In(Axis::X, q + 1)).unwrap();
        let b = Branch::new(Cell::line(0), 0, vec![pm]).unwrap();
        assert!(b.inverse().is_err());
        let guarded = Branch::new(Cell::line(0).with(Axis::X, 1, false), 0, b.out.clone()).unwrap();
        assert!(guarded.inverse().is_ok());
    }
}
