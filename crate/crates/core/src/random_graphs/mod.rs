//! Finite samples of typical dense sets, the unit graph `G_0` on them, its
//! Bernoulli subgraphs `G_p`, and hop-distance audits.

mod audit;
mod graph;
mod io;
mod probability;
mod sample;

use thiserror::Error;

pub use audit::{bj_audit, edge_agreement_probability, AgreementEstimate, BjReport, BjRow};
pub use graph::{bernoulli_subgraph, graph_distance, unit_graph, Adjacency, BitGraph, GeomGraph};
pub use io::{read_graph, write_graph, GraphFile};
pub use probability::Probability;
pub use sample::{dyadic_in, sample_typical_points, PointSample, Typicality, SAMPLE_BITS};

use crate::exact_geometry::{GeometryError, Rational};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("rejection sampling gave up after {attempts} attempts; window too small for the typicality constraints")]
    WindowTooSmall { attempts: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("probability {0} must lie in [0, 1] with numerator and denominator below 2^64")]
    BadProbability(Rational),
    #[error("vertex index {index} out of range for {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("expected the unit graph (p = 1)")]
    NotUnitGraph,
    #[error("graph file: {0}")]
    Format(String),
}
