use std::fmt;

use super::bitmap::{BitMap, Branch};
use super::cell::{Axis, Cell, CellSet, Space};
use super::posmap::{PosMap, Src};
use crate::error::{Error, Result};

/// Position of slot `k ∈ {0,1,2}` of block `x` when a digit sequence is
/// read as three interleaved tracks.
pub fn slot(x: u32, k: u32) -> u32 {
    3 * x + k + 1
}

/// Bits of `v` on `width` digits, most significant first.
pub fn binary(v: u32, width: u32) -> Vec<bool> {
    (0..width).map(|j| v >> (width - 1 - j) & 1 == 1).collect()
}

/// Elementary measure-preserving maps. Per-axis generators act on one
/// coordinate and leave the other alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gen {
    /// Integer translation.
    Translate(i64),
    /// Swap tracks 0 and 1.
    TauHat(Axis),
    /// Merge tracks 0 and 1 into track 0 and split track 2.
    ThetaHat(Axis),
    ThetaHatInv(Axis),
    /// `ℝ × [0,1) → ℝ`, alternating the digits of both coordinates.
    Interleave,
    Deinterleave,
    /// Rewrite a binary index stored on the first `width` track-0 digits.
    SliceTranslate { axis: Axis, width: u32, from: u32, to: u32 },
}

fn tau(q: u32) -> u32 {
    match (q - 1) % 3 {
        0 => q + 1,
        1 => q - 1,
        _ => q,
    }
}

fn theta(q: u32) -> u32 {
    match (q % 6, q % 3) {
        (1, _) => q.div_ceil(2),
        (4, _) => q / 2,
        (_, 2) => 2 * q - 1,
        _ => 2 * q,
    }
}

fn theta_inv(q: u32) -> u32 {
    match (q % 3, q % 6) {
        (1, _) => 2 * q - 1,
        (2, _) => 2 * q,
        (_, 3) => q.div_ceil(2),
        _ => q / 2,
    }
}

impl Gen {
    pub fn inverse(self) -> Gen {
        match self {
            Gen::Translate(k) => Gen::Translate(-k),
            Gen::TauHat(a) => Gen::TauHat(a),
            Gen::ThetaHat(a) => Gen::ThetaHatInv(a),
            Gen::ThetaHatInv(a) => Gen::ThetaHat(a),
            Gen::Interleave => Gen::Deinterleave,
            Gen::Deinterleave => Gen::Interleave,
            Gen::SliceTranslate { axis, width, from, to } => Gen::SliceTranslate { axis, width, from: to, to: from },
        }
    }

    pub fn target(self, from: Space) -> Option<Space> {
        match (self, from) {
            (Gen::Interleave, Space::Plane) => Some(Space::Line),
            (Gen::Interleave, Space::Line) => None,
            (Gen::Deinterleave, Space::Line) => Some(Space::Plane),
            (Gen::Deinterleave, Space::Plane) => None,
            (Gen::TauHat(Axis::Y) | Gen::ThetaHat(Axis::Y) | Gen::ThetaHatInv(Axis::Y), Space::Line) => None,
            (Gen::SliceTranslate { axis: Axis::Y, .. }, Space::Line) => None,
            _ => Some(from),
        }
    }

    fn routes(self, from: Space) -> Result<Vec<PosMap>> {
        let per_axis = |target: Axis, f: fn(u32) -> u32, m: u32| -> Result<Vec<PosMap>> {
            from.axes()
                .iter()
                .map(|&a| if a == target { PosMap::from_fn(0, m, |q| Src::In(a, f(q))) } else { Ok(PosMap::identity(a)) })
                .collect()
        };
        match self {
            Gen::Translate(_) => Ok(from.axes().iter().map(|a| PosMap::identity(*a)).collect()),
            Gen::TauHat(a) => per_axis(a, tau, 3),
            Gen::ThetaHat(a) => per_axis(a, theta, 6),
            Gen::ThetaHatInv(a) => per_axis(a, theta_inv, 6),
            Gen::Interleave => Ok(vec![PosMap::from_fn(0, 2, |q| {
                if q % 2 == 1 {
                    Src::In(Axis::X, q.div_ceil(2))
                } else {
                    Src::In(Axis::Y, q / 2)
                }
            })?]),
            Gen::Deinterleave => Ok(vec![
                PosMap::from_fn(0, 1, |q| Src::In(Axis::X, 2 * q - 1))?,
                PosMap::from_fn(0, 1, |q| Src::In(Axis::X, 2 * q))?,
            ]),
            Gen::SliceTranslate { axis, width, to, .. } => {
                let bits = binary(to, width);
                from.axes()
                    .iter()
                    .map(|&a| {
                        if a != axis {
                            return Ok(PosMap::identity(a));
                        }
                        PosMap::from_fn(3 * width, 1, |q| {
                            if (q - 1) % 3 == 0 && (q - 1) / 3 < width {
                                Src::Const(bits[((q - 1) / 3) as usize])
                            } else {
                                Src::In(a, q)
                            }
                        })
                    })
                    .collect()
            }
        }
    }

    /// The generator restricted to the unit intervals at `bases`.
    pub fn on(self, from: Space, bases: &[i64]) -> Result<BitMap> {
        let to = self
            .target(from)
            .ok_or_else(|| Error::Precondition(format!("{self} does not act on the {from:?} space")))?;
        let routes = self.routes(from)?;
        let mut branches = Vec::new();
        for &b in bases {
            let mut guard = Cell::unit(from, b);
            if let Gen::SliceTranslate { axis, width, from: i, .. } = self {
                for (j, bit) in binary(i, width).into_iter().enumerate() {
                    guard.bits.insert((axis, slot(j as u32, 0)), bit);
                }
            }
            let out_base = if let Gen::Translate(k) = self { b + k } else { b };
            branches.push(Branch::new(guard, out_base, routes.clone())?);
        }
        BitMap::new(from, to, branches)
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::Translate(k) => write!(f, "translate({k})"),
            Gen::TauHat(a) => write!(f, "tau_hat({})", a.name()),
            Gen::ThetaHat(a) => write!(f, "theta_hat({})", a.name()),
            Gen::ThetaHatInv(a) => write!(f, "theta_hat_inv({})", a.name()),
            Gen::Interleave => write!(f, "interleave"),
            Gen::Deinterleave => write!(f, "deinterleave"),
            Gen::SliceTranslate { axis, width, from, to } => {
                write!(f, "slice({},{width}:{from}->{to})", axis.name())
            }
        }
    }
}

/// Send `[from, from+1)` onto the part of `[to, to+1)` whose first digits
/// are `bits`, shifting every digit right.
pub fn write_prefix(from: i64, to: i64, bits: &[bool]) -> Result<Branch> {
    let n = bits.len() as u32;
    let pm = PosMap::from_fn(n, 1, |q| if q <= n { Src::Const(bits[(q - 1) as usize]) } else { Src::In(Axis::X, q - n) })?;
    Branch::new(Cell::line(from), to, vec![pm])
}

/// Cells of `[0,1)` indexed by `(i₀,i₁,i₂)`, lexicographically: cell
/// `(i₀,i₁,i₂)` fixes the first `log₂ nₖ` digits of track `k` to `iₖ`.
pub fn partition_cells(sizes: &[u32; 3]) -> Result<Vec<CellSet>> {
    let mut widths = [0u32; 3];
    for (k, n) in sizes.iter().enumerate() {
        if !n.is_power_of_two() {
            return Err(Error::Precondition(format!("track {k} has {n} slices, not a power of two")));
        }
        widths[k] = n.trailing_zeros();
    }
    let mut out = Vec::new();
    for i0 in 0..sizes[0] {
        for i1 in 0..sizes[1] {
            for i2 in 0..sizes[2] {
                let mut c = Cell::line(0);
                for (k, i) in [i0, i1, i2].into_iter().enumerate() {
                    for (j, b) in binary(i, widths[k]).into_iter().enumerate() {
                        c.bits.insert((Axis::X, slot(j as u32, k as u32)), b);
                    }
                }
                out.push(CellSet::cell(c));
            }
        }
    }
    Ok(out)
}
