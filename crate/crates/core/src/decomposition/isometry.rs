use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::exact_geometry::linalg::{coordinates_in, greedy_independent, Matrix};
use crate::exact_geometry::{PolytopeBall, Rational, Vector};

use super::DecompositionError;

pub const DEFAULT_VERTEX_LIMIT: usize = 48;

/// Linear isometry of the ball norm, with its action on the vertex list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearIsometry {
    pub matrix: Matrix,
    /// `permutation[i]` is the index of the image of vertex `i`.
    pub permutation: Vec<usize>,
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&i| p[i]).collect()
}

/// All linear maps permuting the vertices, found by searching images of a
/// vertex basis. Refuses balls with more than `vertex_limit` vertices.
pub fn linear_isometry_group(ball: &PolytopeBall, vertex_limit: usize) -> Result<Vec<LinearIsometry>, DecompositionError> {
    let vs = ball.vertices();
    let n = vs.len();
    if n > vertex_limit {
        return Err(DecompositionError::TooManyVertices { count: n, limit: vertex_limit });
    }
    let gauge = ball.gauge();
    let d = ball.dim();
    let basis_idx = greedy_independent(vs);
    let basis: Vec<Vector> = basis_idx.iter().map(|&i| vs[i].clone()).collect();
    let coords: Vec<Vec<Rational>> = vs.iter().map(|v| coordinates_in(&basis, v).expect("vertices span")).collect();
    let pair_norms = |a: &Vector, b: &Vector| (gauge.norm(&(a + b)), gauge.norm(&(a - b)));
    let table: Vec<Vec<(Rational, Rational)>> = (0..n).map(|i| (0..n).map(|j| pair_norms(&vs[i], &vs[j])).collect()).collect();
    let target: Vec<Vec<(Rational, Rational)>> =
        (0..d).map(|i| (0..d).map(|j| table[basis_idx[i]][basis_idx[j]].clone()).collect()).collect();
    let b_inv = Matrix::from_columns(&basis).inverse().expect("basis is independent");

    let mut group = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(d);
    let mut stack: Vec<usize> = vec![0];
    // Depth-first search over images of the basis vertices.
    while let Some(next) = stack.pop() {
        let k = chosen.len();
        if next >= n {
            if chosen.pop().is_none() {
                break;
            }
            continue;
        }
        stack.push(next + 1);
        if !(0..k).all(|l| table[chosen[l]][next] == target[l][k]) {
            continue;
        }
        chosen.push(next);
        if chosen.len() < d {
            stack.push(0);
            continue;
        }
        let images: Vec<&Vector> = chosen.iter().map(|&i| &vs[i]).collect();
        let perm: Option<Vec<usize>> = coords
            .iter()
            .map(|c| {
                let img = images.iter().zip(c).fold(Vector::zeros(d), |acc, (w, k)| &acc + &w.scale(k));
                ball.vertex_index(&img)
            })
            .collect();
        if let Some(permutation) = perm {
            let cols: Vec<Vector> = images.into_iter().cloned().collect();
            group.push(LinearIsometry { matrix: Matrix::from_columns(&cols).mul(&b_inv), permutation });
        }
        chosen.pop();
    }
    check_group(&group, n)?;
    Ok(group)
}

fn check_group(group: &[LinearIsometry], n: usize) -> Result<(), DecompositionError> {
    let perms: HashSet<&Vec<usize>> = group.iter().map(|g| &g.permutation).collect();
    let identity: Vec<usize> = (0..n).collect();
    if !perms.contains(&identity) {
        return Err(DecompositionError::GroupClosure("identity missing".into()));
    }
    for g in group {
        let mut inv = vec![0; n];
        for (i, &j) in g.permutation.iter().enumerate() {
            inv[j] = i;
        }
        if !perms.contains(&inv) {
            return Err(DecompositionError::GroupClosure("inverse missing".into()));
        }
        for h in group {
            if !perms.contains(&compose(&g.permutation, &h.permutation)) {
                return Err(DecompositionError::GroupClosure("product missing".into()));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geometry::builtin::{builtin, cross_polytope, cube};

    fn order(ball: &PolytopeBall) -> usize {
        linear_isometry_group(ball, DEFAULT_VERTEX_LIMIT).unwrap().len()
    }

    #[test]
    fn hyperoctahedral_orders() {
        assert_eq!(order(&cube(2)), 8);
        assert_eq!(order(&cube(3)), 48);
        assert_eq!(order(&cross_polytope(3)), 48);
        assert_eq!(order(&builtin("hexagon").unwrap()), 12);
        assert_eq!(order(&builtin("hexagonal_prism").unwrap()), 24);
    }

    #[test]
    fn matrices_preserve_the_norm() {
        let ball = builtin("hexagon").unwrap();
        let x = Vector::from_fracs(&[(1, 3), (-2, 7)]);
        let n = ball.norm(&x).unwrap();
        for g in linear_isometry_group(&ball, DEFAULT_VERTEX_LIMIT).unwrap() {
            assert_eq!(ball.norm(&g.matrix.mul_vec(&x)).unwrap(), n);
        }
    }

    #[test]
    fn vertex_guard() {
        let big = cube(4);
        assert!(matches!(linear_isometry_group(&big, 8), Err(DecompositionError::TooManyVertices { count: 16, limit: 8 })));
    }
}
