//! Structure of a polytope norm: extreme lines, `l_inf`-directions, and the
//! splitting `V = (U (+) l_inf^d)_inf`.
//!
//! The splitting is computed two ways. The direction route takes `W` to be
//! the span of the accepted `l_inf`-directions and `U` the intersection of
//! their complements. The matroid route discards extreme-line directions
//! that are not spanned by the others; the survivors span `U` and the
//! discarded ones span `W`. [`linf_decomposition`] requires both to agree.

mod isometry;
mod lattice;
mod lines;
mod linf;
mod well_spanned;

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use isometry::{linear_isometry_group, LinearIsometry, DEFAULT_VERTEX_LIMIT};
pub use lattice::{lattice_cover, LatticeCoeffs};
pub use lines::{canonical_direction, extreme_lines, line_directions, ExtremeLine};
pub use linf::{is_linf_direction, linf_directions, LinfDirection, Rejection, Verdict, BATTERY_RANDOM};
pub use well_spanned::{max_well_spanned_subspace, WellSpanned};

use crate::exact_geometry::linalg::{in_span, intersect_spans, rank, span_basis, Matrix};
use crate::exact_geometry::{max_rat, GeometryError, PolytopeBall, Rational, Vector};
use crate::rng;

#[derive(Debug, Error)]
pub enum DecompositionError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("direction has norm {0}, expected 1")]
    NotUnitNorm(Rational),
    #[error("max formula fails for direction {} at {}: norm {}, expected {}", .0.direction, .0.witness, .0.norm, .0.expected)]
    MaxFormulaViolated(Box<MaxFormulaWitness>),
    #[error("decomposition cross-check failed: {0}")]
    CrossCheckFailure(String),
    #[error("ball has {count} vertices, above the isometry search limit {limit}")]
    TooManyVertices { count: usize, limit: usize },
    #[error("isometry group is not closed: {0}")]
    GroupClosure(String),
}

/// A test point `a x + w` whose norm is not `max(|a|, ||w||)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxFormulaWitness {
    pub direction: Vector,
    pub witness: Vector,
    pub norm: Rational,
    pub expected: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionMethod {
    Directions,
    WellSpanned,
    CrossChecked,
}

/// `V = U (+) span(x_1..x_d)` with `||u + sum a_i x_i|| = max(||u||, |a_i|)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinfDecomposition {
    pub dim: usize,
    pub linf: Vec<LinfDirection>,
    /// Canonical basis of `U`.
    pub u_basis: Vec<Vector>,
    pub method: DecompositionMethod,
    /// Inverse of the matrix with columns `x_1..x_d, u_1..u_k`.
    pub change_of_basis: Matrix,
}

impl LinfDecomposition {
    pub fn linf_dim(&self) -> usize {
        self.linf.len()
    }

    pub fn u_dim(&self) -> usize {
        self.u_basis.len()
    }

    pub fn directions(&self) -> Vec<Vector> {
        self.linf.iter().map(|l| l.direction.clone()).collect()
    }

    /// `(a, u)` with `x = sum a_i x_i + u`.
    pub fn split(&self, x: &Vector) -> (Vec<Rational>, Vector) {
        let c = self.change_of_basis.mul_vec(x).into_coords();
        let k = self.linf.len();
        let u = self.u_basis.iter().zip(&c[k..]).fold(Vector::zeros(self.dim), |acc, (b, t)| &acc + &b.scale(t));
        (c[..k].to_vec(), u)
    }

    /// Coordinates of `u` in `u_basis`.
    pub fn u_coords(&self, u: &Vector) -> Vec<Rational> {
        let c = self.change_of_basis.mul_vec(u).into_coords();
        c[self.linf.len()..].to_vec()
    }

    pub fn compose(&self, a: &[Rational], u: &Vector) -> Vector {
        self.linf.iter().zip(a).fold(u.clone(), |acc, (l, t)| &acc + &l.direction.scale(t))
    }
}

fn same_span(a: &[Vector], b: &[Vector]) -> bool {
    span_basis(a) == span_basis(b)
}

fn complement_intersection(linf: &[LinfDirection], dim: usize) -> Vec<Vector> {
    let mut u: Vec<Vector> = (0..dim).map(|i| Vector::unit(dim, i)).collect();
    for l in linf {
        u = intersect_spans(&u, &l.complement_basis, dim);
    }
    span_basis(&u)
}

/// Splitting by the direction route alone.
pub fn decompose_by_directions(ball: &PolytopeBall) -> Result<LinfDecomposition, DecompositionError> {
    let linf = linf_directions(ball)?;
    let u = complement_intersection(&linf, ball.dim());
    assemble(ball.dim(), linf, u, DecompositionMethod::Directions)
}

/// Splitting by the matroid route alone. Discarded directions are reported
/// as `l_inf`-directions after the max-formula check.
pub fn decompose_by_well_spanned(ball: &PolytopeBall) -> Result<LinfDecomposition, DecompositionError> {
    let ws = max_well_spanned_subspace(ball);
    let mut removed = ws.removed.clone();
    removed.sort_by(|a, b| b.cmp(a));
    let linf = linf::accepted_among(ball, &removed)?;
    if linf.len() != removed.len() {
        return Err(DecompositionError::CrossCheckFailure("a discarded direction is not an l_inf-direction".into()));
    }
    assemble(ball.dim(), linf, ws.basis, DecompositionMethod::WellSpanned)
}

fn assemble(dim: usize, linf: Vec<LinfDirection>, u_basis: Vec<Vector>, method: DecompositionMethod) -> Result<LinfDecomposition, DecompositionError> {
    let mut cols: Vec<Vector> = linf.iter().map(|l| l.direction.clone()).collect();
    cols.extend(u_basis.iter().cloned());
    if cols.len() != dim || rank(&cols) != dim {
        return Err(DecompositionError::CrossCheckFailure(format!(
            "{} directions and dim U = {} do not give a direct sum of dimension {dim}",
            linf.len(),
            u_basis.len()
        )));
    }
    let change_of_basis = Matrix::from_columns(&cols).inverse().expect("full rank");
    Ok(LinfDecomposition { dim, linf, u_basis, method, change_of_basis })
}

/// Both routes, required to agree, followed by a seeded check of the max formula.
pub fn linf_decomposition(ball: &PolytopeBall) -> Result<LinfDecomposition, DecompositionError> {
    let lines = extreme_lines(ball);
    let dirs = line_directions(&lines);
    let linf = linf::accepted_among(ball, &dirs)?;
    let u_direct = complement_intersection(&linf, ball.dim());
    let ws = well_spanned::well_spanned_from(&dirs);

    let linf_dirs: Vec<Vector> = linf.iter().map(|l| l.direction.clone()).collect();
    if !same_span(&u_direct, &ws.basis) {
        return Err(DecompositionError::CrossCheckFailure("U differs between the two routes".into()));
    }
    if !same_span(&linf_dirs, &ws.removed) || linf_dirs.len() != ws.removed.len() {
        return Err(DecompositionError::CrossCheckFailure("discarded directions differ from l_inf-directions".into()));
    }
    for l in &linf {
        if ws.basis.iter().any(|u| !in_span(&l.complement_basis, u)) {
            return Err(DecompositionError::CrossCheckFailure(format!("U is not inside the complement of {}", l.direction)));
        }
    }
    let dec = assemble(ball.dim(), linf, ws.basis, DecompositionMethod::CrossChecked)?;
    check_sup_norm(ball, &dec)?;
    Ok(dec)
}

fn check_sup_norm(ball: &PolytopeBall, dec: &LinfDecomposition) -> Result<(), DecompositionError> {
    let gauge = ball.gauge();
    let mut r = rng::seeded(0x7375_705f);
    for _ in 0..BATTERY_RANDOM {
        let a: Vec<Rational> = (0..dec.linf_dim()).map(|_| rng::small_rational(&mut r, 64, 16)).collect();
        let u = dec.u_basis.iter().fold(Vector::zeros(dec.dim), |acc, b| &acc + &b.scale(&rng::small_rational(&mut r, 64, 16)));
        let x = dec.compose(&a, &u);
        let expected = a.iter().fold(gauge.norm(&u), |m, t| max_rat(&m, &t.abs()).clone());
        let got = gauge.norm(&x);
        if got != expected {
            return Err(DecompositionError::CrossCheckFailure(format!("norm of {x} is {got}, expected {expected}")));
        }
        let (a2, u2) = dec.split(&x);
        if a2 != a || u2 != u {
            return Err(DecompositionError::CrossCheckFailure("split does not invert compose".into()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geometry::builtin::{builtin, cross_polytope, cube};

    #[test]
    fn prism_splits_into_hexagon_and_axis() {
        let dec = linf_decomposition(&builtin("hexagonal_prism").unwrap()).unwrap();
        assert_eq!(dec.directions(), vec![Vector::from_ints(&[0, 0, 1])]);
        assert_eq!(dec.u_basis, vec![Vector::from_ints(&[1, 0, 0]), Vector::from_ints(&[0, 1, 0])]);
        assert_eq!(dec.method, DecompositionMethod::CrossChecked);
    }

    #[test]
    fn routes_agree_on_builtins() {
        for name in crate::exact_geometry::builtin::BUILTIN_NAMES {
            let ball = builtin(name).unwrap();
            let a = decompose_by_directions(&ball).unwrap();
            let b = decompose_by_well_spanned(&ball).unwrap();
            assert_eq!(a.u_basis, b.u_basis);
            assert_eq!(a.directions(), b.directions());
            linf_decomposition(&ball).unwrap();
        }
    }

    #[test]
    fn cube_has_trivial_u() {
        let dec = linf_decomposition(&cube(3)).unwrap();
        assert_eq!(dec.linf_dim(), 3);
        assert_eq!(dec.u_dim(), 0);
        let dec = linf_decomposition(&cross_polytope(3)).unwrap();
        assert_eq!(dec.linf_dim(), 0);
        assert_eq!(dec.u_dim(), 3);
    }
}
