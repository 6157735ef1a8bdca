//! Seeded random instances and the property checks run by the acceptance
//! suite and the `prop` command.

pub mod battery;
pub mod dyadic;
pub mod ell;
pub mod graph;
pub mod graphing;
pub mod project;
pub mod thick;
