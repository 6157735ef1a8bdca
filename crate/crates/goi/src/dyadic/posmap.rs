use std::fmt;

use num_integer::Integer;

use super::cell::{Axis, Pos};
use crate::error::{Error, Result};

/// Where an output digit comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Src {
    Const(bool),
    In(Axis, u32),
}

/// Tail class `k ↦ In(axis, slope·k + offset)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Class {
    pub axis: Axis,
    pub slope: u32,
    pub offset: u32,
}

/// Digit routing for one output coordinate.
///
/// Output position `q ≤ T` reads `head[q-1]`. For `q > T`, write
/// `q - T - 1 = M·k + r`; then the digit is read from `tail[r]` at `k`.
/// The canonical form has minimal period `M` and then minimal threshold `T`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PosMap {
    head: Vec<Src>,
    tail: Vec<Class>,
}

const FIT_LIMIT: u32 = 1 << 14;

impl PosMap {
    pub fn identity(axis: Axis) -> PosMap {
        PosMap { head: Vec::new(), tail: vec![Class { axis, slope: 1, offset: 1 }] }
    }

    pub fn threshold(&self) -> u32 {
        self.head.len() as u32
    }

    pub fn period(&self) -> u32 {
        self.tail.len() as u32
    }

    pub fn head(&self) -> &[Src] {
        &self.head
    }

    pub fn tail(&self) -> &[Class] {
        &self.tail
    }

    pub fn eval(&self, q: u32) -> Src {
        debug_assert!(q >= 1);
        let t = self.threshold();
        if q <= t {
            return self.head[(q - 1) as usize];
        }
        let m = self.period();
        let (k, r) = ((q - t - 1) / m, (q - t - 1) % m);
        let c = self.tail[r as usize];
        Src::In(c.axis, c.slope * k + c.offset)
    }

    fn fit_raw(t: u32, m: u32, f: &impl Fn(u32) -> Src) -> Option<PosMap> {
        let head: Vec<Src> = (1..=t).map(f).collect();
        let mut tail = Vec::with_capacity(m as usize);
        for r in 0..m {
            let at = |k: u32| match f(t + 1 + r + m * k) {
                Src::In(a, p) => Some((a, p as i64)),
                Src::Const(_) => None,
            };
            let (a0, p0) = at(0)?;
            let (a1, p1) = at(1)?;
            let slope = p1 - p0;
            if slope < 1 {
                return None;
            }
            for k in 2..4 {
                if at(k)? != (a0, p0 + slope * k as i64) || a1 != a0 {
                    return None;
                }
            }
            tail.push(Class { axis: a0, slope: slope as u32, offset: p0 as u32 });
        }
        Some(PosMap { head, tail })
    }

    /// Fit a routing function known to be affine-periodic beyond `t` with
    /// period dividing `m`. Bounds are doubled if the samples disagree.
    pub fn from_fn(t: u32, m: u32, f: impl Fn(u32) -> Src) -> Result<PosMap> {
        let (mut t, mut m) = (t, m.max(1));
        loop {
            if let Some(p) = PosMap::fit_raw(t, m, &f) {
                let horizon = t + 4 * m + 8;
                if (1..=horizon).all(|q| p.eval(q) == f(q)) {
                    return Ok(p.canonical());
                }
            }
            if t > FIT_LIMIT || m > FIT_LIMIT {
                return Err(Error::Fuel { what: "digit routing fit", bound: FIT_LIMIT as usize });
            }
            t = 2 * t + 1;
            m *= 2;
        }
    }

    pub fn same(&self, other: &PosMap) -> bool {
        let l = self.threshold().max(other.threshold()) + 2 * self.period().lcm(&other.period());
        (1..=l).all(|q| self.eval(q) == other.eval(q))
    }

    pub fn canonical(&self) -> PosMap {
        let mut cur = self.clone();
        loop {
            let m = cur.period();
            let e = |q: u32| cur.eval(q);
            let smaller = (1..m)
                .filter(|d| m.is_multiple_of(*d))
                .find_map(|d| PosMap::fit_raw(cur.threshold(), d, &e).filter(|c| c.same(&cur)));
            if let Some(c) = smaller {
                cur = c;
                continue;
            }
            let t = cur.threshold();
            if t > 0 {
                if let Some(c) = PosMap::fit_raw(t - 1, m, &e).filter(|c| c.same(&cur)) {
                    cur = c;
                    continue;
                }
            }
            return cur;
        }
    }

    /// Output positions reading input digit `(axis, p)`.
    pub fn preimages(&self, axis: Axis, p: u32) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .head
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Src::In(axis, p))
            .map(|(i, _)| i as u32 + 1)
            .collect();
        let (t, m) = (self.threshold(), self.period());
        for (r, c) in self.tail.iter().enumerate() {
            if c.axis == axis && p >= c.offset && (p - c.offset).is_multiple_of(c.slope) {
                out.push(t + 1 + r as u32 + m * ((p - c.offset) / c.slope));
            }
        }
        out
    }

    /// Replace reads of fixed input digits by constants.
    pub fn substitute(&self, fixed: &dyn Fn(Pos) -> Option<bool>, positions: &[Pos]) -> Result<PosMap> {
        let mut t = self.threshold();
        for &(a, p) in positions {
            for q in self.preimages(a, p) {
                t = t.max(q);
            }
        }
        PosMap::from_fn(t, self.period(), |q| match self.eval(q) {
            Src::In(a, p) => fixed((a, p)).map_or(Src::In(a, p), Src::Const),
            s => s,
        })
    }

    /// `self` after `inner`: reads of input `(B, p)` go through `inner[B]`.
    pub fn compose(&self, inner: &[PosMap]) -> Result<PosMap> {
        let ti = inner.iter().map(PosMap::threshold).max().unwrap_or(0);
        let mi = inner.iter().fold(1u32, |a, p| a.lcm(&p.period()));
        let k0 = self
            .tail
            .iter()
            .map(|c| {
                let need = ti as i64 + 1 - c.offset as i64;
                if need <= 0 {
                    0
                } else {
                    (need + c.slope as i64 - 1) / c.slope as i64
                }
            })
            .max()
            .unwrap_or(0) as u32;
        let t = self.threshold() + self.period() * k0;
        PosMap::from_fn(t, self.period() * mi, |q| match self.eval(q) {
            Src::In(b, p) => inner[b.index()].eval(p),
            s => s,
        })
    }

    pub fn is_identity_on(&self, axis: Axis) -> bool {
        let (t, m) = (self.threshold(), self.period());
        self.tail
            .iter()
            .enumerate()
            .all(|(r, c)| c.axis == axis && c.slope == m && c.offset == t + 1 + r as u32)
    }

    pub fn max_input(&self, axis: Axis) -> u32 {
        let h = self.head.iter().filter_map(|s| match s {
            Src::In(a, p) if *a == axis => Some(*p),
            _ => None,
        });
        let c = self.tail.iter().filter(|c| c.axis == axis).map(|c| c.offset);
        h.chain(c).max().unwrap_or(0)
    }

    pub fn from_parts(head: Vec<Src>, tail: Vec<Class>) -> Result<PosMap> {
        if tail.is_empty() || tail.iter().any(|c| c.slope == 0 || c.offset == 0) {
            return Err(Error::Parse("tail classes need positive slope and offset".into()));
        }
        if head.iter().any(|s| matches!(s, Src::In(_, 0))) {
            return Err(Error::Parse("digit positions start at 1".into()));
        }
        Ok(PosMap { head, tail }.canonical())
    }
}

impl fmt::Display for Src {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Src::Const(b) => write!(f, "{}", u8::from(*b)),
            Src::In(a, p) => write!(f, "{}{}", a.name(), p),
        }
    }
}

impl fmt::Display for PosMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h: Vec<String> = self.head.iter().map(|s| s.to_string()).collect();
        let t: Vec<String> =
            self.tail.iter().map(|c| format!("{}({}k+{})", c.axis.name(), c.slope, c.offset)).collect();
        write!(f, "<{} | {}>", h.join(" "), t.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_canonical_from_any_period() {
        let id = PosMap::from_fn(5, 6, |q| Src::In(Axis::X, q)).unwrap();
        assert_eq!(id, PosMap::identity(Axis::X));
        assert!(id.is_identity_on(Axis::X));
    }

    #[test]
    fn threshold_shrinks_through_rotation() {
        // swap digits 1 and 2, then identity
        let f = |q| Src::In(Axis::X, if q == 1 { 2 } else if q == 2 { 1 } else { q });
        let p = PosMap::from_fn(0, 1, f).unwrap();
        assert_eq!(p.threshold(), 2);
        assert_eq!(p.period(), 1);
        assert_eq!(p.preimages(Axis::X, 1), vec![2]);
        assert_eq!(p.preimages(Axis::X, 7), vec![7]);
    }

    #[test]
    fn compose_shift_with_drop() {
        // write a 1 in front, then drop the first digit again
        let write = PosMap::from_fn(1, 1, |q| if q == 1 { Src::Const(true) } else { Src::In(Axis::X, q - 1) }).unwrap();
        let drop = PosMap::from_fn(0, 1, |q| Src::In(Axis::X, q + 1)).unwrap();
        assert_eq!(drop.compose(std::slice::from_ref(&write)).unwrap(), PosMap::identity(Axis::X));
        let twice = write.compose(std::slice::from_ref(&write)).unwrap();
        assert_eq!(twice.eval(1), Src::Const(true));
        assert_eq!(twice.eval(2), Src::Const(true));
        assert_eq!(twice.eval(9), Src::In(Axis::X, 7));
    }
}
