//! Exact dense linear algebra over the rationals.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{Rational, Vector};

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(mut rows: Vec<Vec<Rational>>) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &factor * p;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(vectors: &[Vector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    rref(vectors.iter().map(|v| v.coords().to_vec()).collect()).1.len()
}

/// Canonical basis (RREF rows) of the span of `vectors`.
pub fn span_basis(vectors: &[Vector]) -> Vec<Vector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    rref(vectors.iter().map(|v| v.coords().to_vec()).collect())
        .0
        .into_iter()
        .map(Vector::new)
        .collect()
}

pub fn in_span(vectors: &[Vector], v: &Vector) -> bool {
    if v.is_zero() {
        return true;
    }
    let mut all = vectors.to_vec();
    all.push(v.clone());
    rank(&all) == rank(vectors)
}

/// Indices of the greedy (lexicographically first) independent subsequence.
pub fn greedy_independent(vectors: &[Vector]) -> Vec<usize> {
    let mut chosen: Vec<Vector> = Vec::new();
    let mut idx = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        if !in_span(&chosen, v) {
            chosen.push(v.clone());
            idx.push(i);
        }
    }
    idx
}

/// Coefficients `c` with `sum c_i basis_i = v`, if `v` lies in the span.
/// `basis` must be linearly independent.
pub fn coordinates_in(basis: &[Vector], v: &Vector) -> Option<Vec<Rational>> {
    let k = basis.len();
    if k == 0 {
        return v.is_zero().then(Vec::new);
    }
    let d = v.dim();
    let rows: Vec<Vec<Rational>> = (0..d)
        .map(|r| {
            let mut row: Vec<Rational> = basis.iter().map(|b| b[r].clone()).collect();
            row.push(v[r].clone());
            row
        })
        .collect();
    let (reduced, pivots) = rref(rows);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut out = vec![Rational::zero(); k];
    for (row, &p) in reduced.iter().zip(&pivots) {
        out[p] = row[k].clone();
    }
    Some(out)
}

/// Row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    rows: Vec<Vector>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vector>) -> Self {
        if let Some(first) = rows.first() {
            assert!(rows.iter().all(|r| r.dim() == first.dim()), "ragged matrix");
        }
        Matrix { rows }
    }

    pub fn from_columns(cols: &[Vector]) -> Self {
        let nrows = cols.first().map_or(0, Vector::dim);
        Matrix::from_rows(
            (0..nrows)
                .map(|r| Vector::new(cols.iter().map(|c| c[r].clone()).collect()))
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_rows((0..n).map(|i| Vector::unit(n, i)).collect())
    }

    pub fn scalar(n: usize, k: &Rational) -> Self {
        Matrix::from_rows((0..n).map(|i| Vector::unit(n, i).scale(k)).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vector::dim)
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn column(&self, c: usize) -> Vector {
        Vector::new(self.rows.iter().map(|r| r[c].clone()).collect())
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.rows[r][c]
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        Vector::new(self.rows.iter().map(|r| r.dot(v)).collect())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ncols(), other.nrows(), "dimension mismatch in matrix product");
        let cols: Vec<Vector> = (0..other.ncols()).map(|c| other.column(c)).collect();
        Matrix::from_rows(
            self.rows
                .iter()
                .map(|r| Vector::new(cols.iter().map(|c| r.dot(c)).collect()))
                .collect(),
        )
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_columns(&self.rows)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.nrows();
        if n != self.ncols() {
            return None;
        }
        let rows: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.coords().to_vec();
                row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        let (reduced, pivots) = rref(rows);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_rows(
            reduced.into_iter().map(|r| Vector::new(r[n..].to_vec())).collect(),
        ))
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.nrows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geometry::rational::rat;

    #[test]
    fn rank_and_span() {
        let vs = [
            Vector::from_ints(&[1, 0, -1]),
            Vector::from_ints(&[0, 1, -1]),
            Vector::from_ints(&[1, -1, 0]),
        ];
        assert_eq!(rank(&vs), 2);
        assert!(in_span(&vs[..2], &vs[2]));
        assert!(!in_span(&vs[..2], &Vector::from_ints(&[0, 0, 1])));
        assert_eq!(greedy_independent(&vs), vec![0, 1]);
    }

    #[test]
    fn coordinates_solve_exactly() {
        let basis = [Vector::from_ints(&[1, 1]), Vector::from_ints(&[1, -1])];
        let c = coordinates_in(&basis, &Vector::from_fracs(&[(1, 4), (3, 4)])).unwrap();
        assert_eq!(c, vec![rat(1, 2), rat(-1, 4)]);
        let line = [Vector::from_ints(&[1, 1])];
        assert!(coordinates_in(&line, &Vector::from_ints(&[1, 0])).is_none());
    }

    #[test]
    fn inverse_round_trips() {
        let m = Matrix::from_rows(vec![Vector::from_ints(&[2, 1]), Vector::from_ints(&[1, 1])]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let singular = Matrix::from_rows(vec![Vector::from_ints(&[1, 2]), Vector::from_ints(&[2, 4])]);
        assert!(singular.inverse().is_none());
    }
}

/// Basis of `{ c : sum c_i v_i = 0 }`.
pub fn null_space(vectors: &[Vector]) -> Vec<Vec<Rational>> {
    let k = vectors.len();
    if k == 0 {
        return Vec::new();
    }
    let d = vectors[0].dim();
    let rows: Vec<Vec<Rational>> = (0..d).map(|r| vectors.iter().map(|v| v[r].clone()).collect()).collect();
    let (reduced, pivots) = rref(rows);
    (0..k)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut sol = vec![Rational::zero(); k];
            sol[free] = Rational::one();
            for (row, &p) in reduced.iter().zip(&pivots) {
                sol[p] = -&row[free];
            }
            sol
        })
        .collect()
}

/// Canonical basis of `span(a) ∩ span(b)`.
pub fn intersect_spans(a: &[Vector], b: &[Vector], dim: usize) -> Vec<Vector> {
    let a = span_basis(a);
    let b = span_basis(b);
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut all = a.clone();
    all.extend(b.iter().map(|v| -v));
    let vectors: Vec<Vector> = null_space(&all)
        .into_iter()
        .map(|c| {
            a.iter().zip(&c).fold(Vector::zeros(dim), |acc, (v, k)| &acc + &v.scale(k))
        })
        .collect();
    span_basis(&vectors)
}

#[cfg(test)]
mod subspace_tests {
    use super::*;

    #[test]
    fn plane_intersection_is_a_line() {
        let a = [Vector::from_ints(&[1, 0, 0]), Vector::from_ints(&[0, 1, 0])];
        let b = [Vector::from_ints(&[1, 1, 0]), Vector::from_ints(&[0, 0, 1])];
        assert_eq!(intersect_spans(&a, &b, 3), vec![Vector::from_ints(&[1, 1, 0])]);
        assert!(intersect_spans(&a, &[Vector::from_ints(&[0, 0, 1])], 3).is_empty());
    }
}
