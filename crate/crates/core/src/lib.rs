//! Exact computations with 3-Lie algebras, their representations and
//! cohomology, twisted Rota-Baxter operators, NS-3-Lie algebras, and
//! Nijenhuis and Reynolds operators.
//!
//! All arithmetic is over arbitrary-precision rationals. Structures that
//! downstream constructions depend on carry a `verified` flag that only the
//! corresponding checker can set.

pub mod alternating;
pub mod error;
pub mod exactlin;
pub mod families;
pub mod format;
pub mod fixtures;
pub mod nsnr;
pub mod repcoh;
pub mod report;
pub mod threelie;
pub mod trbo;

pub use error::{Error, Result};
pub use exactlin::{Matrix, Rational, Vector};
pub use report::{Outcome, Report, Violation};
