//! The polarized sequent calculus: formulas, proofs, localization, and the
//! interpretation of proofs as projects.

pub mod formula;
pub mod interp;
pub mod proof;
pub mod reduce;

pub use formula::{parse_formula, Formula, Kind, Literal, Loc};
pub use interp::{battery, interpret, opponents, verify_soundness, Basis, Report, BATTERY_CAP};
pub use proof::{check, check_proof, localize, parse_proof, Derivation, Diagnostic, Enumeration, Proof, Rule, Sequent};
pub use reduce::reduce_once;
