//! Symbolic-numeric toolkit for germs of holomorphic vector fields and
//! diffeomorphisms at the origin of ℂⁿ: truncated power-series algebra,
//! finite-group linearization, resonance analysis, invariant-series solvers,
//! blow-ups and projectivization, Darboux invariant-curve search, numerical
//! holonomy, and orbit experiments.

pub mod error;
pub mod rat;
pub mod scalar;
pub mod index;
pub mod series;
pub mod linalg;
pub mod diffeo;
pub mod resonance;
pub mod vfield;
pub mod blowup;
pub mod darboux;

pub use error::{Error, Result};
pub use index::MultiIndex;
pub use rat::Rat;
pub use scalar::{C64, Cyclo, GaussRat, Scalar};
pub use series::{TruncatedSeries, EXACT_ORDER};
