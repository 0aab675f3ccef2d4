//! Exact rational geometry: scalars, vectors, an LP kernel, and symmetric
//! polytope unit balls with their gauge norm.

pub mod ball;
pub mod builtin;
pub mod gauge;
pub mod linalg;
pub mod lp;
pub mod rational;

use thiserror::Error;

pub use ball::{BallSpec, PolytopeBall};
pub use gauge::{Gauge, PointFrame};
pub use linalg::Matrix;
pub use rational::{floor_int, frac, int, max_rat, parse_rational, rat, Rational, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("a ball needs at least one vertex of positive dimension")]
    Empty,
    #[error("duplicate point {0}")]
    DuplicatePoint(Vector),
    #[error("vertex set is not symmetric: {0} has no opposite")]
    NotSymmetric(Vector),
    #[error("vertices span a subspace of rank {rank} < {dim}")]
    DegenerateSpan { rank: usize, dim: usize },
    #[error("point has norm {0}, expected 1")]
    NotOnSphere(Rational),
    #[error("radius must be nonnegative, got {0}")]
    NegativeRadius(Rational),
    #[error("malformed ball description: {0}")]
    Format(String),
}
