//! Exact arithmetic: ℚ, ℚ[k] and the rational function field ℚ(k).

mod poly;
mod rational;
mod scalar;

pub use poly::Poly;
pub use rational::{gen_binomial, Rational};
pub use scalar::{LevelConstants, Scalar};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero in ℚ(k)")]
    DivisionByZero,
    #[error("pole at k = {at}: denominator {denominator} vanishes")]
    Pole { denominator: String, at: Rational },
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}
