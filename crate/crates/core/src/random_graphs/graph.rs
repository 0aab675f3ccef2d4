use std::collections::VecDeque;

use crate::exact_geometry::PointFrame;
use crate::rng::pair_key;

use super::probability::Probability;
use super::sample::PointSample;
use super::GraphError;

/// Read access to an undirected simple graph on `0..len()`.
pub trait Adjacency {
    fn len(&self) -> usize;

    fn adjacent(&self, i: usize, j: usize) -> bool;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A graph on a point sample with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeomGraph {
    pub sample: PointSample,
    adjacency: Vec<Vec<usize>>,
    pub p: Probability,
    pub rng_seed: u64,
}

impl GeomGraph {
    pub(crate) fn from_edges(sample: PointSample, edges: &[(usize, usize)], p: Probability, rng_seed: u64) -> Self {
        let mut adjacency = vec![Vec::new(); sample.len()];
        for &(i, j) in edges {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        for row in &mut adjacency {
            row.sort_unstable();
            row.dedup();
        }
        GeomGraph { sample, adjacency, p, rng_seed }
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(i, row)| row.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn to_bits(&self) -> BitGraph {
        let mut b = BitGraph::new(self.len());
        for (i, j) in self.edges() {
            b.add_edge(i, j);
        }
        b
    }
}

impl Adjacency for GeomGraph {
    fn len(&self) -> usize {
        self.adjacency.len()
    }

    fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }
}

/// Adjacency rows as `u64` bitsets, for breadth-first search by word.
#[derive(Debug, Clone)]
pub struct BitGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl BitGraph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitGraph { n, words, rows: vec![0; n * words] }
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        self.rows[i * self.words + j / 64] |= 1 << (j % 64);
        self.rows[j * self.words + i / 64] |= 1 << (i % 64);
    }

    /// Hop distances from `src`, `u32::MAX` where unreachable.
    pub fn bfs(&self, src: usize) -> Vec<u32> {
        let w = self.words;
        let mut dist = vec![u32::MAX; self.n];
        let mut visited = vec![0u64; w];
        let mut frontier = vec![0u64; w];
        let mut next = vec![0u64; w];
        visited[src / 64] |= 1 << (src % 64);
        frontier[src / 64] |= 1 << (src % 64);
        let mut level = 0;
        loop {
            next.iter_mut().for_each(|x| *x = 0);
            let mut any = false;
            for (k, &word) in frontier.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let v = k * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    dist[v] = level;
                    for (acc, row) in next.iter_mut().zip(&self.rows[v * w..(v + 1) * w]) {
                        *acc |= row;
                    }
                }
            }
            for (nx, vis) in next.iter_mut().zip(visited.iter_mut()) {
                *nx &= !*vis;
                *vis |= *nx;
                any |= *nx != 0;
            }
            if !any {
                return dist;
            }
            std::mem::swap(&mut frontier, &mut next);
            level += 1;
        }
    }
}

impl Adjacency for BitGraph {
    fn len(&self) -> usize {
        self.n
    }

    fn adjacent(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }
}

/// `G_0`: all pairs at norm strictly below 1.
pub fn unit_graph(sample: &PointSample) -> GeomGraph {
    let frame = PointFrame::new(sample.ball().gauge(), &sample.points);
    let n = sample.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if frame.norm_lt(i, j, 1) {
                edges.push((i, j));
            }
        }
    }
    GeomGraph::from_edges(sample.clone(), &edges, Probability::ONE, 0)
}

/// Keeps each edge of `G_0` independently with probability `p`. The coin of
/// edge `{i, j}` depends only on `(seed, i, j)`.
pub fn bernoulli_subgraph(g0: &GeomGraph, p: Probability, seed: u64) -> Result<GeomGraph, GraphError> {
    if !g0.p.is_one() {
        return Err(GraphError::NotUnitGraph);
    }
    let kept: Vec<(usize, usize)> = g0.edges().filter(|&(i, j)| p.coin(pair_key(seed, i, j))).collect();
    Ok(GeomGraph::from_edges(g0.sample.clone(), &kept, p, seed))
}

/// Hop count from `i` to `j`; `None` when unreachable.
pub fn graph_distance(g: &GeomGraph, i: usize, j: usize) -> Result<Option<usize>, GraphError> {
    let n = g.len();
    for index in [i, j] {
        if index >= n {
            return Err(GraphError::IndexOutOfRange { index, n });
        }
    }
    let mut dist = vec![usize::MAX; n];
    dist[i] = 0;
    let mut queue = VecDeque::from([i]);
    while let Some(v) = queue.pop_front() {
        if v == j {
            return Ok(Some(dist[v]));
        }
        for &w in g.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exact_geometry::builtin::cube;
    use crate::exact_geometry::{int, rat, Vector};
    use crate::random_graphs::Typicality;

    pub(crate) fn line_sample(xs: &[(i64, i64)]) -> PointSample {
        PointSample {
            ball: Some(cube(1)),
            points: xs.iter().map(|&x| Vector::from_fracs(&[x])).collect(),
            window: int(2),
            seed: 0,
            typicality: Typicality::default(),
        }
    }

    #[test]
    fn unit_graph_on_the_line() {
        let g = unit_graph(&line_sample(&[(0, 1), (1, 2), (9, 8)]));
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        let g = unit_graph(&line_sample(&[(0, 1), (1, 1)]));
        assert_eq!(g.edge_count(), 0);
        let g = unit_graph(&line_sample(&[(0, 1), (1, 5), (-1, 5), (2, 5), (-1, 4)]));
        assert_eq!(g.edge_count(), 10);
    }

    #[test]
    fn subgraph_extremes() {
        let g0 = unit_graph(&line_sample(&[(0, 1), (1, 5), (-1, 5), (2, 5), (-1, 4)]));
        let all = bernoulli_subgraph(&g0, Probability::ONE, 3).unwrap();
        assert_eq!(all.edges().collect::<Vec<_>>(), g0.edges().collect::<Vec<_>>());
        assert_eq!(bernoulli_subgraph(&g0, Probability::ZERO, 3).unwrap().edge_count(), 0);
        let half = bernoulli_subgraph(&g0, Probability::new(&rat(1, 2)).unwrap(), 3).unwrap();
        assert!(matches!(bernoulli_subgraph(&half, Probability::ONE, 1), Err(GraphError::NotUnitGraph)));
    }

    #[test]
    fn distances() {
        let g = unit_graph(&line_sample(&[(0, 1), (3, 4), (3, 2), (7, 1)]));
        assert_eq!(graph_distance(&g, 0, 0).unwrap(), Some(0));
        assert_eq!(graph_distance(&g, 0, 1).unwrap(), Some(1));
        assert_eq!(graph_distance(&g, 0, 2).unwrap(), Some(2));
        assert_eq!(graph_distance(&g, 0, 3).unwrap(), None);
        assert!(matches!(graph_distance(&g, 0, 9), Err(GraphError::IndexOutOfRange { index: 9, n: 4 })));
        let bits = g.to_bits().bfs(0);
        assert_eq!(bits, vec![0, 1, 2, u32::MAX]);
    }
}
