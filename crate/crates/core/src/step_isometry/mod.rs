//! Step-isometries: bijections preserving `floor(||x - y||)`.
//!
//! On `l_inf^d` they are coordinate permutations with signs, composed with
//! maps `floor(t) + g(frac(t))` for increasing bijections `g` of `[0, 1)`;
//! here each `g` is piecewise linear with rational breakpoints so that
//! evaluation and inversion stay exact. On a general space they factor
//! through the `U (+) l_inf^d` decomposition.

mod bijection;
mod factorized;
mod linf;
mod verify;

use thiserror::Error;

pub use bijection::{eval_g, Breakpoint, MonotoneBijection01};
pub use factorized::{
    affine_isometry_from_basis, apply_factorized, check_factorization_consistency, AffineMap, FactorizationCheck, FactorizedStepIsometry,
};
pub use linf::{apply_linf, random_step_isometry, StepIsometrySpec};
pub use verify::{verify_step_isometry, StepCheck};

use crate::exact_geometry::{GeometryError, Rational, Vector};

#[derive(Debug, Error)]
pub enum StepIsometryError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("{0} is outside [0, 1)")]
    OutOfDomain(Rational),
    #[error("invalid bijection: {0}")]
    InvalidBijection(String),
    #[error("invalid step-isometry: {0}")]
    InvalidSpec(String),
    #[error("expected dimension {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("map is not injective: {0} repeats")]
    NotInjective(Vector),
    #[error("points do not form an affine basis")]
    NotAffineBasis,
    #[error("not an isometry: {0}")]
    NotAnIsometry(String),
}
