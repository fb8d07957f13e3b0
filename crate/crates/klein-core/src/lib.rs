//! Exact Cayley-Klein model of the hyperbolic plane.
//!
//! Coordinates live in the constructible closure of the rationals
//! ([`scalar::Real`]). Points, rimpoints and chords live in [`model`];
//! half-turns, reflections and the constructions built from them live in
//! [`transforms`]. [`verify`] runs seeded property suites against the model and
//! [`oval`] checks abstract ovals over small prime fields exhaustively.

pub mod fault;
pub mod model;
pub mod oval;
pub mod scalar;
pub mod scene;
pub mod transforms;
pub mod verify;

use thiserror::Error;

/// Errors raised by constructions and arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("construction error: {0}")]
    Construction(String),
    #[error("division by an exact zero")]
    DivisionByZero,
    #[error("square root of a negative value")]
    NegativeSqrt,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use model::{AnyPoint, Intersection, Line, PairClass, Point, Ray, Rimpoint};
pub use scalar::{Rational, Real};
pub use transforms::{Generator, Motion};
