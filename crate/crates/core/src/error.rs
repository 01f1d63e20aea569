//! Crate-wide error type.
//!
//! Precondition violations reject with a specific variant; numerical
//! indecision on the ball track is *not* an error (operations report
//! `Unknown` through their result types instead).

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    /// A ball that straddles zero cannot be inverted or used as a pivot.
    #[error("ball contains zero (precision {prec} bits); raise precision and retry")]
    BallContainsZero { prec: usize },

    #[error("variable sets differ: [{left}] vs [{right}]")]
    VarMismatch { left: String, right: String },

    #[error("polynomial is not univariate in a single declared variable")]
    NotUnivariate,

    #[error("degree-zero input where positive degree is required")]
    DegreeZero,

    #[error("series has nonzero constant term where zero is required")]
    ConstantTermNonzero,

    #[error("series has zero constant term where a unit is required")]
    ConstantTermZero,

    #[error("truncation order {have} too small; need at least {need}")]
    TruncationTooSmall { have: usize, need: usize },

    #[error("jet differential is not weight-homogeneous")]
    NotHomogeneous,

    #[error("germ component {index} vanishes identically")]
    GermComponentZero { index: usize },

    #[error("parse error at byte {at}: {msg}")]
    Parse { at: usize, msg: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerical evaluation failed: {0}")]
    Numerical(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
