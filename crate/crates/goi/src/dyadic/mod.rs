//! Exact dyadic geometry: cells, finite unions of cells, and piecewise maps
//! acting on binary digits.

pub mod bitmap;
pub mod cell;
pub mod generators;
pub mod posmap;

pub use bitmap::{BitMap, Branch};
pub use cell::{Axis, Cell, CellSet, Combine, Pos, Space};
pub use generators::{binary, partition_cells, slot, write_prefix, Gen};
pub use posmap::{Class, PosMap, Src};
