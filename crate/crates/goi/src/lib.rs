pub mod dyadic;
pub mod ell;
pub mod error;
pub mod graph;
pub mod graphing;
pub mod io;
pub mod project;
pub mod props;
pub mod samples;
pub mod scalar;
pub mod thick;

pub use error::{Error, Result};
pub use scalar::{rat, Ext, Linear, Odds, Quantifier, Rational, Scalar};

pub type ExactGraph = graph::Graph<Rational>;
pub type FloatGraph = graph::Graph<f64>;
