use serde::{Deserialize, Serialize};

use crate::exact_geometry::PointFrame;
use crate::rng;

use super::graph::{Adjacency, GeomGraph};
use super::probability::Probability;
use super::GraphError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BjRow {
    pub k: u32,
    pub pairs: u64,
    pub satisfied: u64,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BjReport {
    pub k_max: u32,
    pub rows: Vec<BjRow>,
    /// Pairs at hop distance `m` with norm at least `m`.
    pub one_sided_violations: u64,
    pub unreachable_pairs: u64,
}

impl BjReport {
    pub fn min_fraction(&self) -> f64 {
        self.rows.iter().map(|r| r.fraction).fold(1.0, f64::min)
    }

    /// Satisfied (pair, k) instances over all of them.
    pub fn overall_fraction(&self) -> f64 {
        let pairs: u64 = self.rows.iter().map(|r| r.pairs).sum();
        let ok: u64 = self.rows.iter().map(|r| r.satisfied).sum();
        if pairs == 0 {
            1.0
        } else {
            ok as f64 / pairs as f64
        }
    }
}

/// For every pair and `2 <= k <= k_max`, checks `norm < k <=> d_G <= k`,
/// and separately counts failures of `d_G = m => norm < m` for every `m`.
pub fn bj_audit(g: &GeomGraph, k_max: u32) -> Result<BjReport, GraphError> {
    if k_max < 2 {
        return Err(GraphError::InvalidParameter("k_max must be at least 2".into()));
    }
    let frame = PointFrame::new(g.sample.ball().gauge(), &g.sample.points);
    let bits = g.to_bits();
    let n = g.len();
    let ks = (k_max - 1) as usize;
    let mut satisfied = vec![0u64; ks];
    let mut pairs = 0u64;
    let mut one_sided = 0u64;
    let mut unreachable = 0u64;
    for i in 0..n {
        let dist = bits.bfs(i);
        for (j, &d) in dist.iter().enumerate().skip(i + 1) {
            pairs += 1;
            let floor = frame.floor_norm(i, j);
            if d == u32::MAX {
                unreachable += 1;
            } else if floor >= u64::from(d) {
                one_sided += 1;
            }
            for (slot, k) in satisfied.iter_mut().zip(2..=k_max) {
                let close = floor < u64::from(k);
                let near = d <= k;
                if close == near {
                    *slot += 1;
                }
            }
        }
    }
    let rows = (2..=k_max)
        .zip(satisfied)
        .map(|(k, s)| BjRow { k, pairs, satisfied: s, fraction: if pairs == 0 { 1.0 } else { s as f64 / pairs as f64 } })
        .collect();
    Ok(BjReport { k_max, rows, one_sided_violations: one_sided, unreachable_pairs: unreachable })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementEstimate {
    pub p: Probability,
    pub trials: u64,
    pub agreed: u64,
    pub rate: f64,
}

/// Fraction of trials in which two independent `Bernoulli(p)` draws agree.
pub fn edge_agreement_probability(p: Probability, trials: u64, seed: u64) -> Result<AgreementEstimate, GraphError> {
    if trials == 0 {
        return Err(GraphError::InvalidParameter("trials must be at least 1".into()));
    }
    let agreed = (0..trials)
        .filter(|&t| {
            let mut r = rng::stream(seed, t);
            p.draw(&mut r) == p.draw(&mut r)
        })
        .count() as u64;
    Ok(AgreementEstimate { p, trials, agreed, rate: agreed as f64 / trials as f64 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geometry::rat;
    use crate::random_graphs::graph::tests::line_sample;
    use crate::random_graphs::unit_graph;

    #[test]
    fn isolated_pair_fails_the_biconditional() {
        let g = unit_graph(&line_sample(&[(0, 1), (3, 2)]));
        let r = bj_audit(&g, 2).unwrap();
        assert_eq!(r.rows[0].pairs, 1);
        assert_eq!(r.rows[0].satisfied, 0);
        assert_eq!(r.one_sided_violations, 0);
        assert_eq!(r.unreachable_pairs, 1);
        assert!(bj_audit(&g, 1).is_err());
    }

    #[test]
    fn path_satisfies_both_sides() {
        let g = unit_graph(&line_sample(&[(0, 1), (3, 4), (3, 2), (9, 4)]));
        let r = bj_audit(&g, 3).unwrap();
        assert_eq!(r.one_sided_violations, 0);
        assert_eq!(r.min_fraction(), 1.0);
    }

    #[test]
    fn agreement_rates() {
        assert_eq!(edge_agreement_probability(Probability::ONE, 100, 1).unwrap().rate, 1.0);
        let half = edge_agreement_probability(Probability::new(&rat(1, 2)).unwrap(), 10_000, 7).unwrap();
        assert!((half.rate - 0.5).abs() <= 0.02);
        let est = edge_agreement_probability(Probability::new(&rat(3, 10)).unwrap(), 10_000, 7).unwrap();
        assert!((est.rate - 0.58).abs() <= 0.02, "{}", est.rate);
        assert!(edge_agreement_probability(Probability::ONE, 0, 1).is_err());
    }
}
