//! Facet-table evaluation of the ball norm for bulk queries.
//!
//! The norm of a symmetric polytope is `max_f <a_f, x>` over its facet
//! functionals. The table is found by brute force over `dim`-subsets of
//! vertices (each candidate hyperplane certified against every vertex),
//! which is only attempted below [`FACET_SUBSET_LIMIT`] subsets; above it
//! every query falls back to the LP gauge. Point sets whose coordinates fit
//! a common `i128` frame get an integer fast path through [`PointFrame`].

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ball::PolytopeBall;
use super::linalg::Matrix;
use super::rational::{floor_int, Rational, Vector};

pub const FACET_SUBSET_LIMIT: u128 = 2_000_000;

const FAST_BOUND: i128 = 1 << 62;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k as u128).fold(1u128, |acc, i| acc.saturating_mul(n as u128 - i) / (i + 1))
}

#[derive(Debug, Clone)]
struct ScaledFacets {
    rows: Vec<Vec<i128>>,
    denom: i128,
}

#[derive(Debug, Clone)]
pub struct Gauge {
    dim: usize,
    vertices: Vec<Vector>,
    facets: Option<Vec<Vector>>,
    scaled: Option<ScaledFacets>,
}

impl Gauge {
    pub fn new(ball: &PolytopeBall) -> Self {
        let vertices = ball.vertices().to_vec();
        let dim = ball.dim();
        let facets = (binomial(vertices.len(), dim) <= FACET_SUBSET_LIMIT).then(|| enumerate_facets(&vertices, dim));
        let scaled = facets.as_deref().and_then(scale_facets);
        Gauge { dim, vertices, facets, scaled }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Facet functionals, when the table was built.
    pub fn facets(&self) -> Option<&[Vector]> {
        self.facets.as_deref()
    }

    pub fn norm(&self, x: &Vector) -> Rational {
        assert_eq!(x.dim(), self.dim, "dimension mismatch in gauge");
        if x.is_zero() {
            return Rational::zero();
        }
        match &self.facets {
            Some(f) => f.iter().map(|a| a.dot(x)).max().unwrap_or_else(Rational::zero),
            None => lp_norm(&self.vertices, x),
        }
    }

    pub fn floor_norm(&self, x: &Vector) -> BigInt {
        floor_int(&self.norm(x))
    }
}

fn lp_norm(vertices: &[Vector], x: &Vector) -> Rational {
    use super::lp::{LpProblem, LpResult, Relation, Sense};
    let mut lp = LpProblem::new(Sense::Minimize, vec![Rational::one(); vertices.len()]);
    for r in 0..x.dim() {
        lp.constrain(vertices.iter().map(|v| v[r].clone()).collect(), Relation::Eq, x[r].clone());
    }
    match lp.solve() {
        LpResult::Optimal { value, .. } => value,
        other => unreachable!("gauge LP always solvable: {other:?}"),
    }
}

fn enumerate_facets(vertices: &[Vector], dim: usize) -> Vec<Vector> {
    let n = vertices.len();
    let ones = Vector::new(vec![Rational::one(); dim]);
    let mut found = BTreeSet::new();
    let mut combo: Vec<usize> = (0..dim).collect();
    loop {
        let m = Matrix::from_rows(combo.iter().map(|&i| vertices[i].clone()).collect());
        if let Some(inv) = m.inverse() {
            let a = inv.mul_vec(&ones);
            if !found.contains(&a) && vertices.iter().all(|v| a.dot(v) <= Rational::one()) {
                found.insert(-&a);
                found.insert(a);
            }
        }
        // next combination in lexicographic order
        let Some(pos) = (0..dim).rev().find(|&i| combo[i] < n - dim + i) else {
            break;
        };
        combo[pos] += 1;
        for i in pos + 1..dim {
            combo[i] = combo[i - 1] + 1;
        }
    }
    found.into_iter().collect()
}

fn scale_facets(facets: &[Vector]) -> Option<ScaledFacets> {
    let q = facets.iter().fold(BigInt::one(), |acc, a| acc.lcm(&a.common_denominator()));
    let rows = facets
        .iter()
        .map(|a| {
            a.coords()
                .iter()
                .map(|c| (c.numer() * (&q / c.denom())).to_i128().filter(|x| x.abs() < FAST_BOUND))
                .collect::<Option<Vec<i128>>>()
        })
        .collect::<Option<Vec<_>>>()?;
    let denom = q.to_i128().filter(|x| *x < FAST_BOUND)?;
    Some(ScaledFacets { rows, denom })
}

enum FrameRepr {
    Integer { coords: Vec<Vec<i128>>, denom: i128 },
    Exact(Vec<Vector>),
}

/// A fixed point set prepared for repeated pairwise norm queries.
pub struct PointFrame<'g> {
    gauge: &'g Gauge,
    repr: FrameRepr,
}

impl<'g> PointFrame<'g> {
    pub fn new(gauge: &'g Gauge, points: &[Vector]) -> Self {
        let repr = Self::integer_repr(gauge, points).unwrap_or_else(|| FrameRepr::Exact(points.to_vec()));
        PointFrame { gauge, repr }
    }

    fn integer_repr(gauge: &Gauge, points: &[Vector]) -> Option<FrameRepr> {
        let facets = gauge.scaled.as_ref()?;
        let d = points.iter().fold(BigInt::one(), |acc, p| acc.lcm(&p.common_denominator()));
        let denom = d.to_i128().filter(|x| *x < FAST_BOUND)?;
        let coords = points
            .iter()
            .map(|p| {
                p.coords()
                    .iter()
                    .map(|c| (c.numer() * (&d / c.denom())).to_i128().filter(|x| x.abs() < FAST_BOUND))
                    .collect::<Option<Vec<i128>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        // |row . (x - y)| <= dim * max|row| * 2 max|x| must stay inside i128
        let max_row = facets.rows.iter().flatten().map(|x| x.unsigned_abs()).max().unwrap_or(0);
        let max_coord = coords.iter().flatten().map(|x| x.unsigned_abs()).max().unwrap_or(0);
        let bound = max_row.checked_mul(2 * max_coord)?.checked_mul(gauge.dim as u128 + 1)?;
        (bound < (1u128 << 126)).then_some(FrameRepr::Integer { coords, denom })
    }

    pub fn len(&self) -> usize {
        match &self.repr {
            FrameRepr::Integer { coords, .. } => coords.len(),
            FrameRepr::Exact(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn uses_integer_path(&self) -> bool {
        matches!(self.repr, FrameRepr::Integer { .. })
    }

    /// `(numerator, denominator)` of `norm(p_i - p_j)` on the integer path.
    fn scaled_norm(&self, i: usize, j: usize) -> Option<(i128, i128)> {
        let FrameRepr::Integer { coords, denom } = &self.repr else {
            return None;
        };
        let facets = self.gauge.scaled.as_ref().expect("integer frame implies scaled facets");
        let (a, b) = (&coords[i], &coords[j]);
        let best = facets
            .rows
            .iter()
            .map(|row| row.iter().zip(a.iter().zip(b)).map(|(r, (x, y))| r * (x - y)).sum::<i128>())
            .max()
            .unwrap_or(0);
        Some((best, facets.denom * denom))
    }

    pub fn norm(&self, i: usize, j: usize) -> Rational {
        match (&self.repr, self.scaled_norm(i, j)) {
            (_, Some((n, d))) => BigRational::new(n.into(), d.into()),
            (FrameRepr::Exact(p), None) => self.gauge.norm(&(&p[i] - &p[j])),
            _ => unreachable!(),
        }
    }

    /// `floor(norm(p_i - p_j))`.
    pub fn floor_norm(&self, i: usize, j: usize) -> u64 {
        match self.scaled_norm(i, j) {
            Some((n, d)) => (n.div_euclid(d)) as u64,
            None => floor_int(&self.norm(i, j)).to_u64().expect("norm fits in u64"),
        }
    }

    /// `norm(p_i - p_j) < k`.
    pub fn norm_lt(&self, i: usize, j: usize, k: u64) -> bool {
        match self.scaled_norm(i, j) {
            Some((n, d)) => n < d * k as i128,
            None => self.norm(i, j) < BigRational::from_integer(k.into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geometry::rational::rat;

    fn hexagon() -> PolytopeBall {
        PolytopeBall::validate(
            [[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [-1, -1]].iter().map(|c| Vector::from_ints(c)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn hexagon_has_six_facets() {
        let g = Gauge::new(&hexagon());
        assert_eq!(g.facets().unwrap().len(), 6);
    }

    #[test]
    fn gauge_matches_lp_on_samples() {
        let ball = hexagon();
        let g = ball.gauge();
        for (a, b) in [(1, 3), (-2, 5), (7, -7), (0, 1), (3, 3)] {
            let x = Vector::new(vec![rat(a, 4), rat(b, 3)]);
            assert_eq!(g.norm(&x), ball.norm(&x).unwrap(), "at {x}");
        }
    }

    #[test]
    fn frame_integer_path_agrees_with_exact() {
        let ball = hexagon();
        let pts: Vec<Vector> = (0..6).map(|i| Vector::new(vec![rat(i * 7 - 9, 8), rat(5 - 3 * i, 6)])).collect();
        let frame = PointFrame::new(ball.gauge(), &pts);
        assert!(frame.uses_integer_path());
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                let exact = ball.norm(&(&pts[i] - &pts[j])).unwrap();
                assert_eq!(frame.norm(i, j), exact);
                assert_eq!(BigInt::from(frame.floor_norm(i, j)), floor_int(&exact));
                assert_eq!(frame.norm_lt(i, j, 1), exact < Rational::one());
            }
        }
    }
}
