use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact_geometry::rational::serde_rational;
use crate::exact_geometry::Rational;

use super::StepIsometryError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Breakpoint {
    #[serde(with = "serde_rational")]
    pub t: Rational,
    #[serde(with = "serde_rational")]
    pub g: Rational,
}

/// Piecewise-linear increasing bijection of `[0, 1)`, through `(0, 0)`, the
/// listed breakpoints, and the implied endpoint `(1, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Breakpoint>", into = "Vec<Breakpoint>")]
pub struct MonotoneBijection01 {
    breakpoints: Vec<Breakpoint>,
}

impl TryFrom<Vec<Breakpoint>> for MonotoneBijection01 {
    type Error = StepIsometryError;

    fn try_from(breakpoints: Vec<Breakpoint>) -> Result<Self, Self::Error> {
        let bad = |msg: &str| Err(StepIsometryError::InvalidBijection(msg.to_string()));
        match breakpoints.first() {
            Some(b) if b.t.is_zero() && b.g.is_zero() => {}
            _ => return bad("first breakpoint must be (0, 0)"),
        }
        if breakpoints.windows(2).any(|w| w[0].t >= w[1].t || w[0].g >= w[1].g) {
            return bad("breakpoints must strictly increase in both coordinates");
        }
        let last = breakpoints.last().expect("nonempty");
        if last.t >= Rational::one() || last.g >= Rational::one() {
            return bad("breakpoints must lie in [0, 1)");
        }
        Ok(MonotoneBijection01 { breakpoints })
    }
}

impl From<MonotoneBijection01> for Vec<Breakpoint> {
    fn from(g: MonotoneBijection01) -> Self {
        g.breakpoints
    }
}

fn interpolate(points: &[(&Rational, &Rational)], x: &Rational) -> Rational {
    let k = points.partition_point(|(a, _)| *a <= x) - 1;
    let one = Rational::one();
    let (x0, y0) = points[k];
    let (x1, y1) = points.get(k + 1).copied().unwrap_or((&one, &one));
    y0 + (x - x0) * (y1 - y0) / (x1 - x0)
}

impl MonotoneBijection01 {
    pub fn identity() -> Self {
        MonotoneBijection01 { breakpoints: vec![Breakpoint { t: Rational::zero(), g: Rational::zero() }] }
    }

    /// From `(t, g(t))` pairs; the leading `(0, 0)` must be included.
    pub fn new(pairs: Vec<(Rational, Rational)>) -> Result<Self, StepIsometryError> {
        pairs.into_iter().map(|(t, g)| Breakpoint { t, g }).collect::<Vec<_>>().try_into()
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breakpoints
    }

    pub fn is_identity(&self) -> bool {
        self.breakpoints.iter().all(|b| b.t == b.g)
    }

    pub fn eval(&self, t: &Rational) -> Result<Rational, StepIsometryError> {
        check_unit(t)?;
        let pts: Vec<_> = self.breakpoints.iter().map(|b| (&b.t, &b.g)).collect();
        Ok(interpolate(&pts, t))
    }

    pub fn eval_inverse(&self, s: &Rational) -> Result<Rational, StepIsometryError> {
        check_unit(s)?;
        let pts: Vec<_> = self.breakpoints.iter().map(|b| (&b.g, &b.t)).collect();
        Ok(interpolate(&pts, s))
    }

    pub fn inverse(&self) -> Self {
        MonotoneBijection01 { breakpoints: self.breakpoints.iter().map(|b| Breakpoint { t: b.g.clone(), g: b.t.clone() }).collect() }
    }
}

fn check_unit(t: &Rational) -> Result<(), StepIsometryError> {
    if t < &Rational::zero() || t >= &Rational::one() {
        return Err(StepIsometryError::OutOfDomain(t.clone()));
    }
    Ok(())
}

pub fn eval_g(g: &MonotoneBijection01, t: &Rational) -> Result<Rational, StepIsometryError> {
    g.eval(t)
}
