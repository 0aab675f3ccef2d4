use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact_geometry::lp::{LpProblem, LpResult, Relation, Sense};
use crate::exact_geometry::{PolytopeBall, Rational, Vector};

/// A 1-dimensional face `[a, b]` of the unit ball.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremeLine {
    pub endpoints: (Vector, Vector),
    /// `b - a` scaled to norm 1, first nonzero coordinate positive.
    pub direction: Vector,
    /// A functional equal to 1 on the segment and below 1 on every other
    /// vertex; zero on a line, where the ball is its own only edge.
    pub witness: Vector,
}

/// Supporting functional exposing exactly `{a, b}`, if one exists.
fn exposing_functional(vertices: &[Vector], a: usize, b: usize) -> Option<Vector> {
    let d = vertices[a].dim();
    // Variables: c_1..c_d (free), t (margin).
    let mut objective = vec![Rational::zero(); d + 1];
    objective[d] = Rational::one();
    let mut lp = LpProblem::new(Sense::Maximize, objective);
    for k in 0..=d {
        lp.set_free(k);
    }
    for &i in &[a, b] {
        let mut row = vertices[i].coords().to_vec();
        row.push(Rational::zero());
        lp.constrain(row, Relation::Eq, Rational::one());
    }
    for (k, v) in vertices.iter().enumerate() {
        if k == a || k == b {
            continue;
        }
        let mut row = v.coords().to_vec();
        row.push(Rational::one());
        lp.constrain(row, Relation::LessEq, Rational::one());
    }
    let mut cap = vec![Rational::zero(); d + 1];
    cap[d] = Rational::one();
    lp.constrain(cap, Relation::LessEq, Rational::one());
    match lp.solve() {
        LpResult::Optimal { value, point } if value.is_positive() => Some(Vector::new(point[..d].to_vec())),
        _ => None,
    }
}

/// Scales to norm 1 and fixes the sign so that the first nonzero coordinate is positive.
pub fn canonical_direction(ball: &PolytopeBall, v: &Vector) -> Vector {
    let n = ball.gauge().norm(v);
    v.scale(&n.recip()).sign_normalized()
}

/// All extreme lines, ordered by endpoint indices.
pub fn extreme_lines(ball: &PolytopeBall) -> Vec<ExtremeLine> {
    let vs = ball.vertices();
    if ball.dim() == 1 {
        return vec![ExtremeLine {
            endpoints: (vs[0].clone(), vs[1].clone()),
            direction: canonical_direction(ball, &(&vs[1] - &vs[0])),
            witness: Vector::zeros(1),
        }];
    }
    let mut out = Vec::new();
    for a in 0..vs.len() {
        for b in a + 1..vs.len() {
            if (&vs[a] + &vs[b]).is_zero() {
                continue;
            }
            if let Some(witness) = exposing_functional(vs, a, b) {
                out.push(ExtremeLine {
                    endpoints: (vs[a].clone(), vs[b].clone()),
                    direction: canonical_direction(ball, &(&vs[b] - &vs[a])),
                    witness,
                });
            }
        }
    }
    out
}

/// Distinct directions of the given lines, lexicographically descending.
pub fn line_directions(lines: &[ExtremeLine]) -> Vec<Vector> {
    let mut dirs: Vec<Vector> = lines.iter().map(|l| l.direction.clone()).collect();
    dirs.sort_by(|a, b| b.cmp(a));
    dirs.dedup();
    dirs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geometry::builtin::{builtin, cross_polytope, cube};

    #[test]
    fn square_has_four_edges_in_two_directions() {
        let lines = extreme_lines(&cube(2));
        assert_eq!(lines.len(), 4);
        assert_eq!(line_directions(&lines), vec![Vector::from_ints(&[1, 0]), Vector::from_ints(&[0, 1])]);
    }

    #[test]
    fn edge_counts() {
        assert_eq!(extreme_lines(&cube(3)).len(), 12);
        let oct = extreme_lines(&cross_polytope(3));
        assert_eq!(oct.len(), 12);
        assert_eq!(line_directions(&oct).len(), 6);
        assert_eq!(extreme_lines(&builtin("hexagon").unwrap()).len(), 6);
    }

    #[test]
    fn witnesses_expose_the_segment() {
        let ball = builtin("hexagonal_prism").unwrap();
        for line in extreme_lines(&ball) {
            assert!(line.witness.dot(&line.endpoints.0).is_one());
            assert!(line.witness.dot(&line.endpoints.1).is_one());
            for v in ball.vertices() {
                if v != &line.endpoints.0 && v != &line.endpoints.1 {
                    assert!(line.witness.dot(v) < Rational::one());
                }
            }
            assert!(ball.norm(&line.direction).unwrap().is_one());
        }
    }
}
