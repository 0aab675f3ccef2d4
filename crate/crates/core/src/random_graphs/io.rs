use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::exact_geometry::rational::serde_rational;
use crate::exact_geometry::{BallSpec, PointFrame, Rational, Vector};

use super::graph::{Adjacency, GeomGraph};
use super::probability::Probability;
use super::sample::{PointSample, Typicality};
use super::GraphError;

/// On-disk form of a [`GeomGraph`]: exact coordinates as strings plus an edge list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Value>,
    pub ball: BallSpec,
    #[serde(with = "serde_rational")]
    pub window: Rational,
    pub sample_seed: u64,
    pub typicality: Typicality,
    pub p: Probability,
    pub rng_seed: u64,
    pub points: Vec<Vector>,
    pub edges: Vec<(usize, usize)>,
}

impl GraphFile {
    pub fn from_graph(g: &GeomGraph, config: Option<serde_json::Value>) -> Self {
        GraphFile {
            config,
            ball: g.sample.ball().to_spec(),
            window: g.sample.window.clone(),
            sample_seed: g.sample.seed,
            typicality: g.sample.typicality,
            p: g.p,
            rng_seed: g.rng_seed,
            points: g.sample.points.clone(),
            edges: g.edges().collect(),
        }
    }

    /// Rebuilds the graph, rejecting out-of-range or repeated edges and any
    /// edge whose endpoints are not at norm below 1.
    pub fn into_graph(self) -> Result<GeomGraph, GraphError> {
        let ball = self.ball.into_ball()?;
        let n = self.points.len();
        for p in &self.points {
            if p.dim() != ball.dim() {
                return Err(GraphError::Format(format!("point {p} has the wrong dimension")));
            }
        }
        let frame = PointFrame::new(ball.gauge(), &self.points);
        let mut seen = HashSet::new();
        for &(i, j) in &self.edges {
            if i >= n || j >= n {
                return Err(GraphError::IndexOutOfRange { index: i.max(j), n });
            }
            if i == j || !seen.insert((i.min(j), i.max(j))) {
                return Err(GraphError::Format(format!("edge ({i}, {j}) is a loop or repeated")));
            }
            if !frame.norm_lt(i, j, 1) {
                return Err(GraphError::Format(format!("edge ({i}, {j}) joins points at norm >= 1")));
            }
        }
        let sample = PointSample { ball: Some(ball), points: self.points, window: self.window, seed: self.sample_seed, typicality: self.typicality };
        Ok(GeomGraph::from_edges(sample, &self.edges, self.p, self.rng_seed))
    }
}

pub fn write_graph(g: &GeomGraph, config: Option<serde_json::Value>) -> String {
    let mut text = serde_json::to_string_pretty(&GraphFile::from_graph(g, config)).expect("graph serialises");
    text.push('\n');
    text
}

pub fn read_graph(text: &str) -> Result<GeomGraph, GraphError> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| GraphError::Format(e.to_string()))?;
    let g = file.into_graph()?;
    debug_assert!(g.len() == g.sample.len());
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random_graphs::graph::tests::line_sample;
    use crate::random_graphs::{bernoulli_subgraph, unit_graph};

    #[test]
    fn round_trip() {
        let g0 = unit_graph(&line_sample(&[(0, 1), (3, 4), (3, 2), (9, 4), (1, 3)]));
        let g = bernoulli_subgraph(&g0, "1/2".parse().unwrap(), 4).unwrap();
        let text = write_graph(&g, None);
        assert_eq!(read_graph(&text).unwrap(), g);
        assert_eq!(write_graph(&read_graph(&text).unwrap(), None), text);
    }

    #[test]
    fn long_edges_are_refused() {
        let g = unit_graph(&line_sample(&[(0, 1), (3, 2)]));
        let mut file = GraphFile::from_graph(&g, None);
        file.edges.push((0, 1));
        assert!(matches!(file.into_graph(), Err(GraphError::Format(_))));
    }
}
