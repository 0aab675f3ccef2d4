use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::exact_geometry::linalg::{coordinates_in, greedy_independent};
use crate::exact_geometry::{floor_int, rat, GeometryError, PolytopeBall, Rational, Vector};

/// Integer combination `sum k_i e_i` of linearly independent extreme points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeCoeffs {
    pub spanning_extremes: Vec<Vector>,
    pub coeffs: Vec<BigInt>,
}

impl LatticeCoeffs {
    pub fn point(&self) -> Vector {
        let dim = self.spanning_extremes[0].dim();
        self.spanning_extremes
            .iter()
            .zip(&self.coeffs)
            .fold(Vector::zeros(dim), |acc, (e, k)| &acc + &e.scale(&Rational::from_integer(k.clone())))
    }
}

/// Lattice point of the first independent vertices within `dim / 2` of `v`.
///
/// Coordinates in the vertex basis are rounded half up, so each coordinate
/// moves by at most 1/2 and the triangle inequality gives the bound.
pub fn lattice_cover(ball: &PolytopeBall, v: &Vector) -> Result<LatticeCoeffs, GeometryError> {
    ball.check_dim(v)?;
    let basis: Vec<Vector> = greedy_independent(ball.vertices()).into_iter().map(|i| ball.vertices()[i].clone()).collect();
    let coords = coordinates_in(&basis, v).expect("vertices span the space");
    let half = rat(1, 2);
    let coeffs = coords.iter().map(|a| floor_int(&(a + &half))).collect();
    Ok(LatticeCoeffs { spanning_extremes: basis, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geometry::builtin::{cross_polytope, cube};

    #[test]
    fn square_example() {
        let sq = cube(2);
        let v = Vector::from_fracs(&[(1, 4), (3, 4)]);
        let c = lattice_cover(&sq, &v).unwrap();
        let p = c.point();
        assert_eq!(p, Vector::from_ints(&[1, 1]));
        assert_eq!(sq.norm(&(&v - &p)).unwrap(), rat(3, 4));
    }

    #[test]
    fn diamond_attains_the_bound() {
        let ball = cross_polytope(2);
        let v = Vector::from_fracs(&[(1, 2), (1, 2)]);
        let p = lattice_cover(&ball, &v).unwrap().point();
        assert_eq!(ball.norm(&(&v - &p)).unwrap(), rat(1, 1));
    }
}
