use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::exact_geometry::linalg::{in_span, span_basis, Matrix};
use crate::exact_geometry::{max_rat, rat, Gauge, PolytopeBall, Rational, Vector};
use crate::rng;

use super::lines::{extreme_lines, line_directions};
use super::{DecompositionError, MaxFormulaWitness};

/// Number of random vectors in the max-formula battery.
pub const BATTERY_RANDOM: usize = 100;
const BATTERY_SEED: u64 = 0x6c69_6e66;

/// Accepted `l_inf`-direction `x` with its witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinfDirection {
    pub direction: Vector,
    /// Vertex index pairs `(v, v - 2x)`.
    pub pairs: Vec<(usize, usize)>,
    /// Basis of the complement `W`, spanned by the midpoints `v - x`.
    pub complement_basis: Vec<Vector>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    /// Neither `v - 2x` nor `v + 2x` is a vertex.
    UnpairedVertex(Vector),
    /// The midpoints do not span a hyperplane avoiding `x`.
    MidpointSpanWrong { rank: usize, contains_direction: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted(LinfDirection),
    Rejected(Rejection),
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted(_))
    }
}

/// Vertices, pairwise midpoints and seeded random vectors.
pub(crate) fn battery(ball: &PolytopeBall) -> Vec<Vector> {
    let vs = ball.vertices();
    let mut out = vs.to_vec();
    let half = rat(1, 2);
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            out.push((&vs[i] + &vs[j]).scale(&half));
        }
    }
    let mut r = rng::seeded(BATTERY_SEED);
    out.extend((0..BATTERY_RANDOM).map(|_| rng::small_vector(&mut r, ball.dim(), 64, 16)));
    out
}

/// Checks `||a x + w|| = max(|a|, ||w||)` on `tests`, splitting along `x` and `W`.
fn check_max_formula(gauge: &Gauge, x: &Vector, w_basis: &[Vector], tests: &[Vector]) -> Result<(), DecompositionError> {
    let mut cols = vec![x.clone()];
    cols.extend(w_basis.iter().cloned());
    let inv = Matrix::from_columns(&cols).inverse().expect("x and W span the space");
    for y in tests {
        let alpha = inv.mul_vec(y)[0].clone();
        let w = y - &x.scale(&alpha);
        let expect = max_rat(&alpha.abs(), &gauge.norm(&w)).clone();
        let got = gauge.norm(y);
        if got != expect {
            return Err(DecompositionError::MaxFormulaViolated(Box::new(MaxFormulaWitness {
                direction: x.clone(),
                witness: y.clone(),
                norm: got,
                expected: expect,
            })));
        }
    }
    Ok(())
}

/// Decides whether `x` is an `l_inf`-direction of the ball.
pub fn is_linf_direction(ball: &PolytopeBall, x: &Vector) -> Result<Verdict, DecompositionError> {
    let n = ball.norm(x)?;
    if !n.is_one() {
        return Err(DecompositionError::NotUnitNorm(n));
    }
    let two_x = x.scale(&Rational::from_integer(2.into()));
    let mut pairs = Vec::new();
    let mut midpoints = Vec::new();
    for (i, v) in ball.vertices().iter().enumerate() {
        if let Some(j) = ball.vertex_index(&(v - &two_x)) {
            pairs.push((i, j));
            midpoints.push(v - x);
        } else if !ball.is_vertex(&(v + &two_x)) {
            return Ok(Verdict::Rejected(Rejection::UnpairedVertex(v.clone())));
        }
    }
    let w_basis = span_basis(&midpoints);
    let contains_direction = in_span(&w_basis, x);
    if w_basis.len() + 1 != ball.dim() || contains_direction {
        return Ok(Verdict::Rejected(Rejection::MidpointSpanWrong { rank: w_basis.len(), contains_direction }));
    }
    check_max_formula(ball.gauge(), x, &w_basis, &battery(ball))?;
    Ok(Verdict::Accepted(LinfDirection { direction: x.clone(), pairs, complement_basis: w_basis }))
}

pub(crate) fn accepted_among(ball: &PolytopeBall, dirs: &[Vector]) -> Result<Vec<LinfDirection>, DecompositionError> {
    let mut out = Vec::new();
    for d in dirs {
        if let Verdict::Accepted(l) = is_linf_direction(ball, d)? {
            out.push(l);
        }
    }
    Ok(out)
}

/// All `l_inf`-directions (sign-normalised), lexicographically descending.
pub fn linf_directions(ball: &PolytopeBall) -> Result<Vec<LinfDirection>, DecompositionError> {
    accepted_among(ball, &line_directions(&extreme_lines(ball)))
}
