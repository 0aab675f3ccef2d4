use serde::{Deserialize, Serialize};

use crate::exact_geometry::Vector;
use crate::random_graphs::{Adjacency, Probability};
use crate::step_isometry::verify_step_isometry;

use super::fibred::FibredGraph;
use super::state::{frac_pair, PartialIso};
use super::BfError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Extend the domain: match a vertex of `g`.
    Forward,
    /// Extend the range: match a vertex of `g2`.
    Backward,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", content = "detail", rename_all = "snake_case")]
pub enum BlockReason {
    /// No unused point on the fibre has its `R`-component in the interval.
    NoCandidateInInterval,
    /// Candidates exist in the interval but none has the right adjacency.
    AdjacencyUnsatisfiable,
    /// A state failed the edge or floor-distance audit.
    AuditFailed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Matched(usize),
    Blocked(BlockReason),
}

fn check_compatible(g: &FibredGraph, g2: &FibredGraph) -> Result<(), BfError> {
    if g.sample.u_points() != g2.sample.u_points() || g.len() != g2.len() {
        return Err(BfError::IncompatibleSamples);
    }
    Ok(())
}

/// Whether `a -> b` extends `state` consistently: same fibre, admissible
/// fractional image, and the same closeness and adjacency towards every
/// matched pair.
fn admissible(g: &FibredGraph, g2: &FibredGraph, state: &PartialIso, a: usize, b: usize) -> (bool, bool) {
    let (s, s2) = (&g.sample, &g2.sample);
    if s.fibre_of(a) != s2.fibre_of(b) {
        return (false, false);
    }
    let (x, y) = frac_pair(s.w(a), s2.w(b));
    if !state.frac_order().admits(&x, &y) {
        return (false, false);
    }
    let edges_ok = state.pairs().iter().all(|&(c, d)| {
        let near = s.close(a, c);
        near == s2.close(b, d) && (!near || g.adjacent(a, c) == g2.adjacent(b, d))
    });
    (true, edges_ok)
}

/// Extends `state` by matching `vertex` (of `g` when going forward, of
/// `g2` when going backward). The vertex's own index is tried first, then
/// the remaining candidates on its fibre in increasing index order.
pub fn bf_step(g: &FibredGraph, g2: &FibredGraph, state: &mut PartialIso, vertex: usize, direction: Direction) -> Result<StepOutcome, BfError> {
    check_compatible(g, g2)?;
    let (own, other) = match direction {
        Direction::Forward => (&g.sample, &g2.sample),
        Direction::Backward => (&g2.sample, &g.sample),
    };
    if vertex >= own.len() {
        return Err(BfError::IndexOutOfRange(vertex));
    }
    let already = match direction {
        Direction::Forward => state.image(vertex).is_some(),
        Direction::Backward => state.preimage(vertex).is_some(),
    };
    if already {
        return Err(BfError::AlreadyMatched(vertex));
    }
    let members = other.fibre_members(own.fibre_of(vertex));
    let order = members.iter().copied().filter(|&c| c == vertex).chain(members.iter().copied().filter(|&c| c != vertex));
    let mut in_interval = false;
    for c in order {
        let unused = match direction {
            Direction::Forward => state.preimage(c).is_none(),
            Direction::Backward => state.image(c).is_none(),
        };
        if !unused {
            continue;
        }
        let (a, b) = match direction {
            Direction::Forward => (vertex, c),
            Direction::Backward => (c, vertex),
        };
        let (interval, edges) = admissible(g, g2, state, a, b);
        in_interval |= interval;
        if interval && edges {
            let inserted = state.insert(a, b, g.sample.w(a), g2.sample.w(b));
            debug_assert!(inserted);
            return Ok(StepOutcome::Matched(c));
        }
    }
    Ok(StepOutcome::Blocked(if in_interval { BlockReason::AdjacencyUnsatisfiable } else { BlockReason::NoCandidateInInterval }))
}

/// Edge preservation, fibre preservation, fractional monotonicity and the
/// floor-distance check on the matched pairs.
pub fn audit_state(g: &FibredGraph, g2: &FibredGraph, state: &PartialIso) -> Result<(), String> {
    let pairs = state.pairs();
    if !state.frac_order().is_monotone() {
        return Err("fractional order is not monotone".into());
    }
    for (k, &(a, b)) in pairs.iter().enumerate() {
        if g.sample.u_points()[g.sample.fibre_of(a)] != g2.sample.u_points()[g2.sample.fibre_of(b)] {
            return Err(format!("pair {a} -> {b} moves the U-component"));
        }
        for &(c, d) in &pairs[..k] {
            if g.adjacent(a, c) != g2.adjacent(b, d) {
                return Err(format!("edge {{{a}, {c}}} is not preserved"));
            }
        }
    }
    let points: Vec<(Vector, Vector)> = pairs.iter().map(|&(a, b)| (g.sample.v_point(a), g2.sample.v_point(b))).collect();
    match verify_step_isometry(g.sample.v_ball(), &points) {
        Ok(check) if check.holds() => Ok(()),
        Ok(check) => Err(format!("floor distances differ: {check:?}")),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BfReport {
    pub seed: u64,
    pub n_u: usize,
    pub points: usize,
    pub p: Probability,
    pub budget: usize,
    pub steps_attempted: usize,
    /// Pairs in the initial state.
    pub seeded: usize,
    pub matched: usize,
    pub blocked: Option<BlockReason>,
    pub exhausted: bool,
    /// Number of states (initial one included) that passed every audit.
    pub audited_states: usize,
    pub audits_passed: bool,
    /// Pairs in matching order.
    pub trace: Vec<(usize, usize)>,
}

impl BfReport {
    /// Reached the budget or matched everything, with every audit passed.
    pub fn completed(&self) -> bool {
        self.blocked.is_none() && self.audits_passed
    }
}

/// Alternating forward and backward steps from an empty state.
pub fn bf_run(g: &FibredGraph, g2: &FibredGraph, budget: usize, seed: u64) -> Result<BfReport, BfError> {
    bf_run_from(g, g2, PartialIso::new(), budget, seed)
}

/// Alternates forward and backward steps from `state`, each time taking the
/// first unmatched index; every intermediate state is audited.
pub fn bf_run_from(g: &FibredGraph, g2: &FibredGraph, mut state: PartialIso, budget: usize, seed: u64) -> Result<BfReport, BfError> {
    if budget == 0 {
        return Err(BfError::InvalidParameter("budget must be at least 1".into()));
    }
    check_compatible(g, g2)?;
    let n = g.len();
    let mut report = BfReport {
        seed,
        n_u: g.sample.n_u(),
        points: n,
        p: g.p,
        budget,
        steps_attempted: 0,
        seeded: state.len(),
        matched: state.len(),
        blocked: None,
        exhausted: false,
        audited_states: 0,
        audits_passed: true,
        trace: state.pairs().to_vec(),
    };
    if let Err(msg) = audit_state(g, g2, &state) {
        report.audits_passed = false;
        report.blocked = Some(BlockReason::AuditFailed(msg));
        return Ok(report);
    }
    report.audited_states = 1;
    let (mut next_dom, mut next_img) = (0, 0);
    for step in 0..budget {
        let direction = if step % 2 == 0 { Direction::Forward } else { Direction::Backward };
        let vertex = match direction {
            Direction::Forward => {
                while next_dom < n && state.image(next_dom).is_some() {
                    next_dom += 1;
                }
                next_dom
            }
            Direction::Backward => {
                while next_img < n && state.preimage(next_img).is_some() {
                    next_img += 1;
                }
                next_img
            }
        };
        if vertex >= n {
            report.exhausted = true;
            break;
        }
        report.steps_attempted += 1;
        match bf_step(g, g2, &mut state, vertex, direction)? {
            StepOutcome::Matched(c) => {
                report.trace.push(match direction {
                    Direction::Forward => (vertex, c),
                    Direction::Backward => (c, vertex),
                });
                report.matched = state.len();
                if let Err(msg) = audit_state(g, g2, &state) {
                    report.audits_passed = false;
                    report.blocked = Some(BlockReason::AuditFailed(msg));
                    break;
                }
                report.audited_states += 1;
            }
            StepOutcome::Blocked(reason) => {
                report.blocked = Some(reason);
                break;
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::back_forth::{make_fibred_sample, FibredWindow};
    use crate::exact_geometry::builtin::builtin;
    use crate::exact_geometry::{int, rat};
    use crate::step_isometry::random_step_isometry;

    fn graphs(fibre_n: usize, p: &str, s1: u64, s2: u64) -> (FibredGraph, FibredGraph) {
        let w = FibredWindow { u_radius: int(3), fibre_length: rat(1, 8), stagger: true };
        let s = Arc::new(make_fibred_sample(&builtin("hexagon").unwrap(), 8, fibre_n, &w, 5).unwrap());
        let p: Probability = p.parse().unwrap();
        (FibredGraph::new(s.clone(), p, s1), FibredGraph::new(s, p, s2))
    }

    #[test]
    fn identical_graphs_match_identically() {
        let (g, _) = graphs(6, "1/2", 1, 2);
        let r = bf_run(&g, &g, 30, 0).unwrap();
        assert!(r.completed());
        assert_eq!(r.matched, 30);
        assert!(r.trace.iter().all(|(a, b)| a == b));
        let r = bf_run(&g, &g, 1000, 0).unwrap();
        assert_eq!(r.matched, 48);
        assert!(r.exhausted);
    }

    #[test]
    fn empty_state_maps_vertex_to_itself() {
        let (g, _) = graphs(4, "1/2", 1, 2);
        let mut st = PartialIso::new();
        assert_eq!(bf_step(&g, &g, &mut st, 5, Direction::Forward).unwrap(), StepOutcome::Matched(5));
        assert!(matches!(bf_step(&g, &g, &mut st, 5, Direction::Forward), Err(BfError::AlreadyMatched(5))));
    }

    #[test]
    fn unit_graphs_match_fully() {
        let (g, g2) = graphs(5, "1", 1, 2);
        let r = bf_run(&g, &g2, 100, 0).unwrap();
        assert!(r.completed());
        assert_eq!(r.matched, 40);
    }

    #[test]
    fn relabelled_graph_is_matched() {
        let (g, _) = graphs(40, "1/2", 1, 2);
        let mut spec = random_step_isometry(1, 3, 17);
        spec.eps[0] = 1;
        let image = Arc::new(g.sample.map_fibres(&spec).unwrap());
        let g2 = FibredGraph::new(image, g.p, g.seed);
        let r = bf_run(&g, &g2, 50, 0).unwrap();
        assert!(r.audits_passed);
        assert!(r.completed(), "{:?}", r.blocked);
    }

    #[test]
    fn audits_catch_bad_states() {
        let (g, g2) = graphs(3, "1/2", 1, 2);
        let mut st = PartialIso::new();
        // Force a pair across fibres.
        assert!(st.insert(0, 1, g.sample.w(0), g2.sample.w(1)));
        assert!(audit_state(&g, &g2, &st).is_err());
        let r = bf_run_from(&g, &g2, st, 5, 0).unwrap();
        assert!(!r.audits_passed);
    }
}
