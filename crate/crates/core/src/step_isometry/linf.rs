use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::exact_geometry::{floor_int, frac, rat, Rational, Vector};
use crate::rng;

use super::bijection::MonotoneBijection01;
use super::StepIsometryError;

/// Step-isometry of `l_inf^d`: coordinate `i` of the input moves to
/// coordinate `sigma[i]` as `eps[i] * (floor(x) + g[i](frac(x)))`, then
/// `offset` (the image of 0) is added.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepIsometrySpec {
    pub sigma: Vec<usize>,
    pub eps: Vec<i8>,
    pub g: Vec<MonotoneBijection01>,
    pub offset: Vector,
}

impl StepIsometrySpec {
    pub fn identity(d: usize) -> Self {
        StepIsometrySpec { sigma: (0..d).collect(), eps: vec![1; d], g: vec![MonotoneBijection01::identity(); d], offset: Vector::zeros(d) }
    }

    pub fn new(sigma: Vec<usize>, eps: Vec<i8>, g: Vec<MonotoneBijection01>, offset: Vector) -> Result<Self, StepIsometryError> {
        let spec = StepIsometrySpec { sigma, eps, g, offset };
        spec.validate()?;
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        self.sigma.len()
    }

    pub fn validate(&self) -> Result<(), StepIsometryError> {
        let d = self.sigma.len();
        if self.eps.len() != d || self.g.len() != d || self.offset.dim() != d {
            return Err(StepIsometryError::InvalidSpec("sigma, eps, g and offset lengths differ".into()));
        }
        let mut seen = vec![false; d];
        for &s in &self.sigma {
            if s >= d || std::mem::replace(&mut seen[s], true) {
                return Err(StepIsometryError::InvalidSpec("sigma is not a permutation".into()));
            }
        }
        if self.eps.iter().any(|e| e.abs() != 1) {
            return Err(StepIsometryError::InvalidSpec("signs must be +1 or -1".into()));
        }
        Ok(())
    }

    fn sign(&self, i: usize) -> Rational {
        Rational::from_integer(BigInt::from(self.eps[i]))
    }

    /// `floor(x) + g_i(frac(x))`, the increasing part of coordinate `i`.
    fn lift(&self, i: usize, x: &Rational) -> Rational {
        Rational::from_integer(floor_int(x)) + self.g[i].eval(&frac(x)).expect("frac is in [0, 1)")
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector, StepIsometryError> {
        if x.dim() != self.dim() {
            return Err(StepIsometryError::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        let mut out = self.offset.clone().into_coords();
        for i in 0..self.dim() {
            out[self.sigma[i]] += self.sign(i) * self.lift(i, &x[i]);
        }
        Ok(Vector::new(out))
    }

    /// The inverse map, again in the family.
    ///
    /// Output coordinate `j = sigma[i]` is `y = eps H(x) + c`, so
    /// `x = k(y) = H^{-1}(eps (y - c))`. `k` is affine between the points
    /// `frac(c + eps s)` for the breakpoint values `s` of `g_i`, which gives
    /// the new breakpoints; the new offset is `k(0)` and the new `g` is
    /// `eps (k(t) - k(0))`.
    pub fn inverse(&self) -> Self {
        let d = self.dim();
        let mut sigma = vec![0; d];
        let mut eps = vec![1; d];
        let mut g = vec![MonotoneBijection01::identity(); d];
        let mut offset = vec![Rational::zero(); d];
        for (i, off) in offset.iter_mut().enumerate() {
            let j = self.sigma[i];
            let e = self.sign(i);
            let c = &self.offset[j];
            let ginv = self.g[i].inverse();
            let k = |y: &Rational| {
                let s = &e * (y - c);
                Rational::from_integer(floor_int(&s)) + ginv.eval(&frac(&s)).expect("frac is in [0, 1)")
            };
            let k0 = k(&Rational::zero());
            let mut ts: Vec<Rational> = self.g[i].breakpoints().iter().map(|b| frac(&(c + &e * &b.g))).collect();
            ts.push(Rational::zero());
            ts.sort();
            ts.dedup();
            let pairs = ts.into_iter().map(|t| {
                let v = &e * (k(&t) - &k0);
                (t, v)
            });
            sigma[j] = i;
            eps[j] = self.eps[i];
            g[j] = MonotoneBijection01::new(pairs.collect()).expect("inverse of a bijection is a bijection");
            *off = k0;
        }
        StepIsometrySpec { sigma, eps, g, offset: Vector::new(offset) }
    }
}

pub fn apply_linf(spec: &StepIsometrySpec, x: &Vector) -> Result<Vector, StepIsometryError> {
    spec.apply(x)
}

/// Random member of the family: uniform permutation and signs,
/// `breakpoint_count` interior breakpoints per coordinate on a grid of
/// denominator `DENOM`, offset with denominator 8.
pub fn random_step_isometry(d: usize, breakpoint_count: usize, seed: u64) -> StepIsometrySpec {
    const DENOM: i64 = 1 << 12;
    let mut r = rng::seeded(seed);
    let mut sigma: Vec<usize> = (0..d).collect();
    sigma.shuffle(&mut r);
    let eps = (0..d).map(|_| if r.gen::<bool>() { 1 } else { -1 }).collect();
    let count = breakpoint_count.min(DENOM as usize - 1);
    let grid = |r: &mut rand_chacha::ChaCha8Rng| {
        let mut ks: Vec<i64> = sample(r, DENOM as usize - 1, count).into_iter().map(|k| k as i64 + 1).collect();
        ks.sort_unstable();
        ks
    };
    let g = (0..d)
        .map(|_| {
            let ts = grid(&mut r);
            let gs = grid(&mut r);
            let mut pairs = vec![(Rational::zero(), Rational::zero())];
            pairs.extend(ts.iter().zip(&gs).map(|(&t, &s)| (rat(t, DENOM), rat(s, DENOM))));
            MonotoneBijection01::new(pairs).expect("sorted distinct grid points")
        })
        .collect();
    let offset = rng::small_vector(&mut r, d, 64, 8);
    StepIsometrySpec { sigma, eps, g, offset }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quarter() -> MonotoneBijection01 {
        MonotoneBijection01::new(vec![(rat(0, 1), rat(0, 1)), (rat(1, 2), rat(1, 4))]).unwrap()
    }

    #[test]
    fn spec_examples() {
        let x = Vector::from_fracs(&[(3, 7), (-5, 2)]);
        assert_eq!(apply_linf(&StepIsometrySpec::identity(2), &x).unwrap(), x);
        let one = StepIsometrySpec::new(vec![0], vec![1], vec![quarter()], Vector::zeros(1)).unwrap();
        assert_eq!(apply_linf(&one, &Vector::from_fracs(&[(7, 2)])).unwrap(), Vector::from_fracs(&[(13, 4)]));
        let swap = StepIsometrySpec::new(vec![1, 0], vec![1, -1], vec![MonotoneBijection01::identity(); 2], Vector::zeros(2)).unwrap();
        assert_eq!(apply_linf(&swap, &Vector::from_fracs(&[(3, 2), (-1, 4)])).unwrap(), Vector::from_fracs(&[(1, 4), (3, 2)]));
    }

    #[test]
    fn validation() {
        assert!(StepIsometrySpec::new(vec![0, 0], vec![1, 1], vec![quarter(); 2], Vector::zeros(2)).is_err());
        assert!(StepIsometrySpec::new(vec![0], vec![2], vec![quarter()], Vector::zeros(1)).is_err());
        assert!(matches!(StepIsometrySpec::identity(2).apply(&Vector::zeros(3)), Err(StepIsometryError::DimensionMismatch { .. })));
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(random_step_isometry(2, 3, 11), random_step_isometry(2, 3, 11));
        assert!(random_step_isometry(3, 0, 5).g.iter().all(MonotoneBijection01::is_identity));
    }

    #[test]
    fn inverse_undoes_apply() {
        for seed in 0..20 {
            let spec = random_step_isometry(1 + (seed as usize % 3), 4, seed);
            let inv = spec.inverse();
            let mut r = rng::seeded(seed + 100);
            for _ in 0..20 {
                let x = rng::small_vector(&mut r, spec.dim(), 200, 7);
                let y = spec.apply(&x).unwrap();
                assert_eq!(inv.apply(&y).unwrap(), x);
                assert_eq!(spec.apply(&inv.apply(&x).unwrap()).unwrap(), x);
            }
        }
    }
}
