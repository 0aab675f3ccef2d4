use std::collections::HashMap;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::gauge::Gauge;
use super::linalg::rank;
use super::lp::{LpProblem, LpResult, Relation, Sense};
use super::rational::{Rational, Vector};
use super::GeometryError;

/// Symmetric convex polytope given by its vertices; the unit ball of a norm.
///
/// Invariants (checked by [`PolytopeBall::validate`]): the vertex set is
/// closed under negation, every vertex is extreme, and the vertices span the
/// ambient space.
#[derive(Debug)]
pub struct PolytopeBall {
    dim: usize,
    vertices: Vec<Vector>,
    index: HashMap<Vector, usize>,
    gauge: OnceLock<Gauge>,
}

impl Clone for PolytopeBall {
    fn clone(&self) -> Self {
        PolytopeBall {
            dim: self.dim,
            vertices: self.vertices.clone(),
            index: self.index.clone(),
            gauge: self.gauge.clone(),
        }
    }
}

impl PartialEq for PolytopeBall {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for PolytopeBall {}

/// Convex-combination membership: is `x` in conv(`points`)?
pub(crate) fn in_convex_hull(points: &[&Vector], x: &Vector) -> bool {
    if points.is_empty() {
        return false;
    }
    let mut lp = LpProblem::feasibility(points.len());
    for r in 0..x.dim() {
        lp.constrain(points.iter().map(|p| p[r].clone()).collect(), Relation::Eq, x[r].clone());
    }
    lp.constrain(vec![Rational::one(); points.len()], Relation::Eq, Rational::one());
    lp.solve().is_feasible()
}

impl PolytopeBall {
    /// Checks the ball invariants, dropping points that are not extreme.
    /// Asymmetric input is an error rather than being symmetrised.
    pub fn validate(points: Vec<Vector>) -> Result<Self, GeometryError> {
        let dim = points.first().map(Vector::dim).ok_or(GeometryError::Empty)?;
        if dim == 0 {
            return Err(GeometryError::Empty);
        }
        if let Some(bad) = points.iter().find(|p| p.dim() != dim) {
            return Err(GeometryError::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        let mut seen = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if seen.insert(p.clone(), i).is_some() {
                return Err(GeometryError::DuplicatePoint(p.clone()));
            }
        }
        if let Some(p) = points.iter().find(|p| !seen.contains_key(&-*p)) {
            return Err(GeometryError::NotSymmetric(p.clone()));
        }
        let extreme: Vec<bool> = (0..points.len())
            .map(|i| {
                let others: Vec<&Vector> =
                    points.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p).collect();
                !in_convex_hull(&others, &points[i])
            })
            .collect();
        let vertices: Vec<Vector> =
            points.into_iter().zip(extreme).filter_map(|(p, keep)| keep.then_some(p)).collect();
        let r = rank(&vertices);
        if r < dim {
            return Err(GeometryError::DegenerateSpan { rank: r, dim });
        }
        Ok(Self::from_checked(dim, vertices))
    }

    fn from_checked(dim: usize, vertices: Vec<Vector>) -> Self {
        let index = vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        PolytopeBall { dim, vertices, index, gauge: OnceLock::new() }
    }

    /// The unit ball of the `l_inf`-sum `(A (+) B)_inf`, i.e. `conv(A x B)`.
    pub fn linf_sum(a: &PolytopeBall, b: &PolytopeBall) -> PolytopeBall {
        let mut vertices = Vec::with_capacity(a.vertices.len() * b.vertices.len());
        for va in &a.vertices {
            for vb in &b.vertices {
                let mut c = va.coords().to_vec();
                c.extend_from_slice(vb.coords());
                vertices.push(Vector::new(c));
            }
        }
        // Products of vertices are exactly the vertices of the product polytope.
        Self::from_checked(a.dim + b.dim, vertices)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn vertex_index(&self, v: &Vector) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn is_vertex(&self, v: &Vector) -> bool {
        self.index.contains_key(v)
    }

    /// Facet-table evaluator for bulk norm queries, built on first use.
    pub fn gauge(&self) -> &Gauge {
        self.gauge.get_or_init(|| Gauge::new(self))
    }

    pub(crate) fn check_dim(&self, x: &Vector) -> Result<(), GeometryError> {
        if x.dim() != self.dim {
            return Err(GeometryError::DimensionMismatch { expected: self.dim, found: x.dim() });
        }
        Ok(())
    }

    /// Minkowski gauge `min { t >= 0 : x in tB }`, solved as an exact LP over
    /// conic coefficients of the vertices.
    pub fn norm(&self, x: &Vector) -> Result<Rational, GeometryError> {
        self.check_dim(x)?;
        if x.is_zero() {
            return Ok(Rational::zero());
        }
        Ok(self.norm_lp(x))
    }

    pub(crate) fn norm_lp(&self, x: &Vector) -> Rational {
        let n = self.vertices.len();
        let mut lp = LpProblem::new(Sense::Minimize, vec![Rational::one(); n]);
        for r in 0..self.dim {
            lp.constrain(self.vertices.iter().map(|v| v[r].clone()).collect(), Relation::Eq, x[r].clone());
        }
        match lp.solve() {
            LpResult::Optimal { value, .. } => value,
            other => unreachable!("gauge LP of a spanning symmetric ball is always solvable: {other:?}"),
        }
    }

    fn require_unit(&self, v: &Vector) -> Result<(), GeometryError> {
        let n = self.norm(v)?;
        if !n.is_one() {
            return Err(GeometryError::NotOnSphere(n));
        }
        Ok(())
    }

    /// True iff `v` is not a convex combination of the other vertices.
    pub fn is_extreme_point(&self, v: &Vector) -> Result<bool, GeometryError> {
        self.require_unit(v)?;
        let others: Vec<&Vector> = self.vertices.iter().filter(|w| *w != v).collect();
        Ok(!in_convex_hull(&others, v))
    }

    /// Metric test: `v` is extreme iff `B(0,1) ∩ B(2v,1) = {v}`. Each
    /// coordinate is maximised and minimised over the intersection.
    pub fn is_extreme_via_balls(&self, v: &Vector) -> Result<bool, GeometryError> {
        self.require_unit(v)?;
        let n = self.vertices.len();
        // variables: lambda (y = sum lambda_i v_i), mu (y - 2v = sum mu_i v_i)
        let base = |objective: Vec<Rational>, sense: Sense| {
            let mut lp = LpProblem::new(sense, objective);
            for r in 0..self.dim {
                let mut row: Vec<Rational> = self.vertices.iter().map(|w| w[r].clone()).collect();
                row.extend(self.vertices.iter().map(|w| -&w[r]));
                lp.constrain(row, Relation::Eq, &v[r] * Rational::from_integer(2.into()));
            }
            let mut lam = vec![Rational::one(); n];
            lam.resize(2 * n, Rational::zero());
            lp.constrain(lam, Relation::LessEq, Rational::one());
            let mut mu = vec![Rational::zero(); n];
            mu.resize(2 * n, Rational::one());
            lp.constrain(mu, Relation::LessEq, Rational::one());
            lp
        };
        for r in 0..self.dim {
            let mut objective: Vec<Rational> = self.vertices.iter().map(|w| w[r].clone()).collect();
            objective.resize(2 * n, Rational::zero());
            let hi = base(objective.clone(), Sense::Maximize).solve();
            let lo = base(objective, Sense::Minimize).solve();
            match (hi.value(), lo.value()) {
                (Some(a), Some(b)) if a == b => {}
                (Some(_), Some(_)) => return Ok(false),
                _ => unreachable!("intersection contains v and is bounded"),
            }
        }
        Ok(true)
    }

    /// `norm(x - center) <= r`, exactly.
    pub fn closed_ball_contains(&self, center: &Vector, r: &Rational, x: &Vector) -> Result<bool, GeometryError> {
        use num_traits::Signed;
        if r.is_negative() {
            return Err(GeometryError::NegativeRadius(r.clone()));
        }
        self.check_dim(center)?;
        self.check_dim(x)?;
        Ok(self.norm(&(x - center))? <= *r)
    }

    pub fn to_spec(&self) -> BallSpec {
        BallSpec { dim: self.dim, vertices: self.vertices.clone() }
    }
}

/// JSON form: `{"dim": 2, "vertices": [["1","1"], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallSpec {
    pub dim: usize,
    pub vertices: Vec<Vector>,
}

impl BallSpec {
    pub fn into_ball(self) -> Result<PolytopeBall, GeometryError> {
        if let Some(v) = self.vertices.iter().find(|v| v.dim() != self.dim) {
            return Err(GeometryError::DimensionMismatch { expected: self.dim, found: v.dim() });
        }
        PolytopeBall::validate(self.vertices)
    }

    pub fn from_json(text: &str) -> Result<PolytopeBall, GeometryError> {
        let spec: BallSpec = serde_json::from_str(text).map_err(|e| GeometryError::Format(e.to_string()))?;
        spec.into_ball()
    }
}
