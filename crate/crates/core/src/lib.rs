//! Exact and certified computation around jet differentials, Borel-type
//! partition structure, Grassmannian degeneracy strata, hyperbolicity
//! certificates for low-degree hypersurfaces, and Nevanlinna-theory numerics.
//!
//! The crate is organized in three layers:
//!
//! - exact/certified scalar and polynomial arithmetic: [`rational`], [`ball`],
//!   [`coeff`], [`poly`], [`univar`], [`series`], [`textio`];
//! - symbolic structure on top of it: [`jet`] (k-jet differentials, germs,
//!   Wronskians), [`borel`] (power-sum instances, chart transfer, partition
//!   recovery), [`grassmann`] (stratum codimension counts and rank evidence),
//!   [`hypersurf`] (certificate checkers and instance constructors);
//! - floating-point analysis: [`nevanlinna`] (circle averages, counting and
//!   characteristic functions, an elliptic defect model, curvature and
//!   growth-lemma probes).
//!
//! Exact arithmetic is `Rational` (arbitrary precision, always reduced,
//! positive denominator). Certified arithmetic is [`ball::ComplexBall`]
//! (midpoint + outward-rounded radius): every operation returns a ball that
//! contains the exact result, and certificate operations answer `Unknown`
//! rather than guess when a ball straddles zero.

pub mod ball;
pub mod borel;
pub mod coeff;
pub mod error;
pub mod grassmann;
pub mod hypersurf;
pub mod jet;
pub(crate) mod linalg;
pub mod nevanlinna;
pub mod poly;
pub mod rational;
pub mod series;
pub mod textio;
pub mod univar;

pub use ball::ComplexBall;
pub use coeff::CoeffField;
pub use error::Error;
pub use jet::{CurveGerm, JetDifferential, JetMonomial};
pub use poly::{Monomial, Polynomial, VarSet};
pub use rational::Rational;
pub use series::TruncatedSeries;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
