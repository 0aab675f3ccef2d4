use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::decomposition::LinfDecomposition;
use crate::exact_geometry::linalg::{rank, Matrix};
use crate::exact_geometry::{PolytopeBall, Vector};

use super::linf::StepIsometrySpec;
use super::verify::check_injective;
use super::StepIsometryError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMap {
    pub linear: Matrix,
    pub translation: Vector,
}

impl AffineMap {
    pub fn identity(dim: usize) -> Self {
        AffineMap { linear: Matrix::identity(dim), translation: Vector::zeros(dim) }
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        &self.linear.mul_vec(x) + &self.translation
    }
}

fn maps_set_onto_itself(m: &Matrix, set: &BTreeSet<Vector>) -> bool {
    let images: BTreeSet<Vector> = set.iter().map(|v| m.mul_vec(v)).collect();
    &images == set
}

/// `f(u + w) = f_U(u) + f_W(w)` over a decomposition. `u_map` acts on
/// ambient coordinates and must preserve `U`; `w_map` acts on the
/// coordinates along the `l_inf`-directions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizedStepIsometry {
    pub decomposition: LinfDecomposition,
    pub u_map: AffineMap,
    pub w_map: StepIsometrySpec,
}

impl FactorizedStepIsometry {
    /// Checks that `u_map` is an isometry of `U`: its linear part permutes
    /// the vertices of the section `B ∩ U`, which are the `U`-components of
    /// the ball's vertices.
    pub fn new(ball: &PolytopeBall, decomposition: LinfDecomposition, u_map: AffineMap, w_map: StepIsometrySpec) -> Result<Self, StepIsometryError> {
        w_map.validate()?;
        if w_map.dim() != decomposition.linf_dim() {
            return Err(StepIsometryError::DimensionMismatch { expected: decomposition.linf_dim(), found: w_map.dim() });
        }
        let (_, t_u) = decomposition.split(&u_map.translation);
        if t_u != u_map.translation {
            return Err(StepIsometryError::NotAnIsometry("translation leaves U".into()));
        }
        let section: BTreeSet<Vector> = ball.vertices().iter().map(|v| decomposition.split(v).1).collect();
        let section_dirs: BTreeSet<Vector> = section.iter().filter(|v| !v.is_zero()).cloned().collect();
        if !maps_set_onto_itself(&u_map.linear, &section_dirs) {
            return Err(StepIsometryError::NotAnIsometry("linear part does not permute the U-section vertices".into()));
        }
        Ok(FactorizedStepIsometry { decomposition, u_map, w_map })
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector, StepIsometryError> {
        if x.dim() != self.decomposition.dim {
            return Err(StepIsometryError::DimensionMismatch { expected: self.decomposition.dim, found: x.dim() });
        }
        let (a, u) = self.decomposition.split(x);
        let a2 = self.w_map.apply(&Vector::new(a))?;
        Ok(self.decomposition.compose(a2.coords(), &self.u_map.apply(&u)))
    }
}

pub fn apply_factorized(f: &FactorizedStepIsometry, x: &Vector) -> Result<Vector, StepIsometryError> {
    f.apply(x)
}

/// The affine map sending `domain[k]` to `image[k]`, accepted only when its
/// linear part maps the vertex set onto itself.
pub fn affine_isometry_from_basis(ball: &PolytopeBall, domain: &[Vector], image: &[Vector]) -> Result<AffineMap, StepIsometryError> {
    let d = ball.dim();
    if domain.len() != d + 1 || image.len() != d + 1 {
        return Err(StepIsometryError::NotAffineBasis);
    }
    for p in domain.iter().chain(image) {
        ball.check_dim(p)?;
    }
    let dcols: Vec<Vector> = domain[1..].iter().map(|p| p - &domain[0]).collect();
    let icols: Vec<Vector> = image[1..].iter().map(|p| p - &image[0]).collect();
    if rank(&dcols) != d {
        return Err(StepIsometryError::NotAffineBasis);
    }
    let dinv = Matrix::from_columns(&dcols).inverse().expect("full rank");
    let linear = Matrix::from_columns(&icols).mul(&dinv);
    let vertices: BTreeSet<Vector> = ball.vertices().iter().cloned().collect();
    if !maps_set_onto_itself(&linear, &vertices) {
        return Err(StepIsometryError::NotAnIsometry("linear part does not permute the vertices".into()));
    }
    let translation = &image[0] - &linear.mul_vec(&domain[0]);
    Ok(AffineMap { linear, translation })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum FactorizationCheck {
    Consistent,
    /// Equal `U`-components map to different ones, or the reverse.
    NotWellDefined { i: usize, j: usize },
    /// Observed `U`-points at different distances after the map.
    DistanceChanged { i: usize, j: usize },
}

impl FactorizationCheck {
    pub fn holds(&self) -> bool {
        matches!(self, FactorizationCheck::Consistent)
    }
}

/// Necessary conditions for a finite map to factor over `decomposition`:
/// the induced map on `U`-components is a well-defined injection that
/// preserves the norm distance between observed `U`-points.
pub fn check_factorization_consistency(
    ball: &PolytopeBall,
    decomposition: &LinfDecomposition,
    pairs: &[(Vector, Vector)],
) -> Result<FactorizationCheck, StepIsometryError> {
    for (x, y) in pairs {
        ball.check_dim(x)?;
        ball.check_dim(y)?;
    }
    check_injective(pairs)?;
    let mut forward: HashMap<Vector, (usize, Vector)> = HashMap::new();
    let mut backward: HashMap<Vector, (usize, Vector)> = HashMap::new();
    let mut reps: Vec<(usize, Vector, Vector)> = Vec::new();
    for (k, (x, y)) in pairs.iter().enumerate() {
        let ux = decomposition.split(x).1;
        let uy = decomposition.split(y).1;
        if let Some((i, seen)) = forward.get(&ux) {
            if seen != &uy {
                return Ok(FactorizationCheck::NotWellDefined { i: *i, j: k });
            }
            continue;
        }
        if let Some((i, _)) = backward.get(&uy) {
            return Ok(FactorizationCheck::NotWellDefined { i: *i, j: k });
        }
        forward.insert(ux.clone(), (k, uy.clone()));
        backward.insert(uy.clone(), (k, ux.clone()));
        reps.push((k, ux, uy));
    }
    let gauge = ball.gauge();
    for a in 0..reps.len() {
        for b in a + 1..reps.len() {
            let (i, ux, uy) = &reps[a];
            let (j, vx, vy) = &reps[b];
            if gauge.norm(&(ux - vx)) != gauge.norm(&(uy - vy)) {
                return Ok(FactorizationCheck::DistanceChanged { i: *i, j: *j });
            }
        }
    }
    Ok(FactorizationCheck::Consistent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::linf_decomposition;
    use crate::exact_geometry::builtin::{builtin, cube};
    use crate::exact_geometry::{int, rat};
    use crate::rng;
    use crate::step_isometry::{random_step_isometry, verify_step_isometry};

    fn prism_map() -> (PolytopeBall, FactorizedStepIsometry) {
        let ball = builtin("hexagonal_prism").unwrap();
        let dec = linf_decomposition(&ball).unwrap();
        let u_map = AffineMap { linear: Matrix::scalar(3, &int(-1)), translation: Vector::from_fracs(&[(1, 3), (-2, 5), (0, 1)]) };
        let w_map = random_step_isometry(1, 3, 9);
        assert!(!w_map.g[0].is_identity());
        let f = FactorizedStepIsometry::new(&ball, dec, u_map, w_map).unwrap();
        (ball, f)
    }

    fn sample_pairs(ball: &PolytopeBall, f: &FactorizedStepIsometry, n: usize, seed: u64) -> Vec<(Vector, Vector)> {
        let mut r = rng::seeded(seed);
        (0..n)
            .map(|_| {
                let x = rng::small_vector(&mut r, ball.dim(), 400, 37);
                let y = f.apply(&x).unwrap();
                (x, y)
            })
            .collect()
    }

    #[test]
    fn prism_factorized_map_is_a_step_isometry() {
        let (ball, f) = prism_map();
        let pairs = sample_pairs(&ball, &f, 50, 3);
        assert!(verify_step_isometry(&ball, &pairs).unwrap().holds());
        assert!(check_factorization_consistency(&ball, &f.decomposition, &pairs).unwrap().holds());
    }

    #[test]
    fn identity_factorization_and_cube_reduction() {
        let ball = cube(3);
        let dec = linf_decomposition(&ball).unwrap();
        let spec = random_step_isometry(3, 2, 4);
        let f = FactorizedStepIsometry::new(&ball, dec, AffineMap::identity(3), spec.clone()).unwrap();
        let x = Vector::from_fracs(&[(7, 3), (-1, 9), (5, 2)]);
        assert_eq!(f.apply(&x).unwrap(), spec.apply(&x).unwrap());
        let (ball, f) = prism_map();
        let id = FactorizedStepIsometry::new(&ball, f.decomposition.clone(), AffineMap::identity(3), StepIsometrySpec::identity(1)).unwrap();
        assert_eq!(id.apply(&x).unwrap(), x);
    }

    #[test]
    fn non_isometric_u_map_is_rejected() {
        let ball = builtin("hexagonal_prism").unwrap();
        let dec = linf_decomposition(&ball).unwrap();
        let stretch = AffineMap { linear: Matrix::scalar(3, &int(2)), translation: Vector::zeros(3) };
        assert!(matches!(
            FactorizedStepIsometry::new(&ball, dec, stretch, StepIsometrySpec::identity(1)),
            Err(StepIsometryError::NotAnIsometry(_))
        ));
    }

    #[test]
    fn affine_basis_examples() {
        let sq = cube(2);
        let o = Vector::from_ints(&[0, 0]);
        let e1 = Vector::from_ints(&[1, 0]);
        let e2 = Vector::from_ints(&[0, 1]);
        let dom = [o.clone(), e1.clone(), e2.clone()];
        assert!(affine_isometry_from_basis(&sq, &dom, &dom).unwrap().linear.is_identity());
        let swap = affine_isometry_from_basis(&sq, &dom, &[o.clone(), e2.clone(), e1.clone()]).unwrap();
        assert_eq!(swap.apply(&Vector::from_ints(&[3, -1])), Vector::from_ints(&[-1, 3]));
        let scaled = [o.clone(), Vector::from_ints(&[2, 0]), e2.clone()];
        assert!(matches!(affine_isometry_from_basis(&sq, &dom, &scaled), Err(StepIsometryError::NotAnIsometry(_))));
        let flat = [o, e1.clone(), e1];
        assert!(matches!(affine_isometry_from_basis(&sq, &flat, &dom), Err(StepIsometryError::NotAffineBasis)));
    }

    #[test]
    fn swapped_fibres_are_inconsistent() {
        let ball = builtin("hexagonal_prism").unwrap();
        let dec = linf_decomposition(&ball).unwrap();
        // U-distances: |p-q| = 1, |p-r| = 3, |q-r| = 2.
        let p = Vector::from_ints(&[0, 0, 0]);
        let q = Vector::from_ints(&[1, 0, 0]);
        let r = Vector::from_ints(&[3, 0, 0]);
        let lift = |v: &Vector, h: i64| &v.clone() + &Vector::new(vec![int(0), int(0), rat(h, 4)]);
        let pairs = vec![(lift(&p, 1), lift(&q, 1)), (lift(&q, 2), lift(&p, 2)), (lift(&r, 3), lift(&r, 3))];
        assert_eq!(check_factorization_consistency(&ball, &dec, &pairs).unwrap(), FactorizationCheck::DistanceChanged { i: 0, j: 2 });
        assert!(check_factorization_consistency(&ball, &dec, &pairs[..1]).unwrap().holds());
    }
}
