//! The back-and-forth matching game between two `G_p` drawn on the same
//! fibred sample of `V = (U (+) R)_inf`, and the four-point gadget used to
//! probe whether a partial isomorphism extends.
//!
//! A partial isomorphism maps each point to a point on the same fibre (same
//! `U`-component). Its `R`-parts must stay compatible with an increasing
//! `f` satisfying `f(t + 1) = f(t) + 1`, which is what keeps the combined
//! map a step-isometry of `V` fixing `U`.

mod fibred;
mod gadget;
mod game;
mod state;

use thiserror::Error;

pub use fibred::{make_fibred_sample, FibredGraph, FibredPoint, FibredSample, FibredSampleSpec, FibredWindow};
pub use gadget::{attach_s0_gadget, s0_experiment, unit_distance_pairs, S0Gadget, S0Params, S0Report, S0Trial, GADGET, GADGET_EDGE};
pub use game::{audit_state, bf_run, bf_run_from, bf_step, BfReport, BlockReason, Direction, StepOutcome};
pub use state::{frac_pair, FracOrder, FracWindow, PartialIso};

use crate::exact_geometry::GeometryError;
use crate::step_isometry::StepIsometryError;

#[derive(Debug, Error)]
pub enum BfError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Step(#[from] StepIsometryError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("could not draw points meeting the sample constraints; window too small")]
    WindowTooSmall,
    #[error("the two graphs are not built on the same U-points")]
    IncompatibleSamples,
    #[error("vertex index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("vertex {0} is already matched")]
    AlreadyMatched(usize),
    #[error("gadget sample has unit-distance pairs besides the two gadget pairs")]
    GadgetAudit,
}
