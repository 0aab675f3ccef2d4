use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::Signed;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::decomposition::LinfDecomposition;
use crate::exact_geometry::rational::serde_rational;
use crate::exact_geometry::{frac, PolytopeBall, Rational, Vector};
use crate::rng;

use super::GraphError;

/// Coordinates are drawn on a grid of `2^SAMPLE_BITS` cells per window side.
pub const SAMPLE_BITS: u32 = 32;

/// `lo + len * (2m + 1) / 2^(SAMPLE_BITS + 1)` for uniform `m`: the odd
/// offset puts the point at a cell midpoint, never on a cell boundary.
pub fn dyadic_in<R: Rng>(rng: &mut R, lo: &Rational, len: &Rational) -> Rational {
    let m: u64 = rng.gen_range(0..1u64 << SAMPLE_BITS);
    let t = Rational::new(BigInt::from(2 * m + 1), BigInt::from(1u64 << (SAMPLE_BITS + 1)));
    lo + len * t
}

/// Which genericity conditions the sampler enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Typicality {
    /// No two points differ by an integer in any `l_inf` coordinate.
    pub integer_free: bool,
    /// No two points share a `U`-component.
    pub distinct_u: bool,
}

impl Typicality {
    /// Both conditions wherever they are satisfiable.
    pub fn for_decomposition(dec: &LinfDecomposition) -> Self {
        Typicality { integer_free: dec.linf_dim() > 0, distinct_u: dec.u_dim() > 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSample {
    #[serde(skip)]
    pub ball: Option<PolytopeBall>,
    pub points: Vec<Vector>,
    #[serde(with = "serde_rational")]
    pub window: Rational,
    pub seed: u64,
    pub typicality: Typicality,
}

impl PointSample {
    pub fn ball(&self) -> &PolytopeBall {
        self.ball.as_ref().expect("sample carries its ball")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Re-checks distinctness and the recorded typicality flags exactly.
    pub fn audit(&self, dec: &LinfDecomposition) -> Result<(), String> {
        let mut seen = HashSet::new();
        let mut fracs: Vec<HashSet<Rational>> = vec![HashSet::new(); dec.linf_dim()];
        let mut us = HashSet::new();
        for (i, x) in self.points.iter().enumerate() {
            if !seen.insert(x) {
                return Err(format!("point {i} repeats"));
            }
            let (a, u) = dec.split(x);
            if self.typicality.integer_free {
                for (k, ak) in a.iter().enumerate() {
                    if !fracs[k].insert(frac(ak)) {
                        return Err(format!("point {i} differs from an earlier point by an integer in coordinate {k}"));
                    }
                }
            }
            if self.typicality.distinct_u && !us.insert(u) {
                return Err(format!("point {i} repeats a U-component"));
            }
        }
        Ok(())
    }
}

/// `n` points uniform on the grid in `[-R, R]^d`, resampling any point that
/// breaks the requested typicality against the points already accepted.
pub fn sample_typical_points(
    ball: &PolytopeBall,
    dec: &LinfDecomposition,
    window: &Rational,
    n: usize,
    seed: u64,
    typicality: Typicality,
) -> Result<PointSample, GraphError> {
    if n == 0 {
        return Err(GraphError::InvalidParameter("n must be at least 1".into()));
    }
    if !window.is_positive() {
        return Err(GraphError::InvalidParameter(format!("window {window} must be positive")));
    }
    if dec.dim != ball.dim() {
        return Err(GraphError::InvalidParameter("decomposition does not match the ball".into()));
    }
    let mut r = rng::seeded(seed);
    let lo = -window;
    let len = window * Rational::from_integer(2.into());
    let mut points = Vec::with_capacity(n);
    let mut seen = HashSet::new();
    let mut fracs: Vec<HashSet<Rational>> = vec![HashSet::new(); dec.linf_dim()];
    let mut us = HashSet::new();
    let guard = 100 * n;
    let mut attempts = 0;
    while points.len() < n {
        attempts += 1;
        if attempts > guard {
            return Err(GraphError::WindowTooSmall { attempts: guard });
        }
        let x = Vector::new((0..ball.dim()).map(|_| dyadic_in(&mut r, &lo, &len)).collect());
        if seen.contains(&x) {
            continue;
        }
        let (a, u) = dec.split(&x);
        let fa: Vec<Rational> = a.iter().map(frac).collect();
        if typicality.integer_free && fa.iter().zip(&fracs).any(|(f, set)| set.contains(f)) {
            continue;
        }
        if typicality.distinct_u && us.contains(&u) {
            continue;
        }
        if typicality.integer_free {
            for (f, set) in fa.into_iter().zip(fracs.iter_mut()) {
                set.insert(f);
            }
        }
        if typicality.distinct_u {
            us.insert(u);
        }
        seen.insert(x.clone());
        points.push(x);
    }
    Ok(PointSample { ball: Some(ball.clone()), points, window: window.clone(), seed, typicality })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::linf_decomposition;
    use crate::exact_geometry::builtin::{builtin, cube};
    use crate::exact_geometry::{int, rat};

    #[test]
    fn single_point_and_determinism() {
        let sq = cube(2);
        let dec = linf_decomposition(&sq).unwrap();
        let t = Typicality::for_decomposition(&dec);
        let one = sample_typical_points(&sq, &dec, &int(3), 1, 5, t).unwrap();
        assert_eq!(one.len(), 1);
        let a = sample_typical_points(&sq, &dec, &int(3), 50, 5, t).unwrap();
        let b = sample_typical_points(&sq, &dec, &int(3), 50, 5, t).unwrap();
        assert_eq!(a, b);
        assert!(a.points.iter().flat_map(|p| p.coords()).all(|c| c.abs() < int(3)));
    }

    #[test]
    fn hundred_points_are_integer_free() {
        let sq = cube(2);
        let dec = linf_decomposition(&sq).unwrap();
        let s = sample_typical_points(&sq, &dec, &rat(3, 2), 100, 1, Typicality::for_decomposition(&dec)).unwrap();
        for i in 0..100 {
            for j in i + 1..100 {
                for k in 0..2 {
                    assert!(!(&s.points[i][k] - &s.points[j][k]).is_integer());
                }
            }
        }
        s.audit(&dec).unwrap();
    }

    #[test]
    fn impossible_constraints_hit_the_guard() {
        let sq = cube(2);
        let dec = linf_decomposition(&sq).unwrap();
        let t = Typicality { integer_free: true, distinct_u: true };
        assert!(matches!(sample_typical_points(&sq, &dec, &int(1), 3, 0, t), Err(GraphError::WindowTooSmall { attempts: 300 })));
        let hex = builtin("hexagon").unwrap();
        let dec = linf_decomposition(&hex).unwrap();
        let s = sample_typical_points(&hex, &dec, &int(2), 40, 0, Typicality::for_decomposition(&dec)).unwrap();
        s.audit(&dec).unwrap();
        assert!(sample_typical_points(&hex, &dec, &int(0), 4, 0, Typicality::default()).is_err());
    }
}
