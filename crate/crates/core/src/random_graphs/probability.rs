use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact_geometry::{parse_rational, Rational};

use super::GraphError;

/// Exact probability `num / den` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Probability {
    num: u64,
    den: u64,
}

impl Probability {
    pub const ONE: Probability = Probability { num: 1, den: 1 };
    pub const ZERO: Probability = Probability { num: 0, den: 1 };

    pub fn new(p: &Rational) -> Result<Self, GraphError> {
        let bad = || GraphError::BadProbability(p.clone());
        if p.is_negative() || p > &Rational::one() {
            return Err(bad());
        }
        let num = p.numer().to_u64().ok_or_else(bad)?;
        let den = p.denom().to_u64().ok_or_else(bad)?;
        Ok(Probability { num, den })
    }

    pub fn value(&self) -> Rational {
        Rational::new(self.num.into(), self.den.into())
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Exact Bernoulli draw.
    pub fn draw<R: Rng>(&self, rng: &mut R) -> bool {
        rng.gen_range(0..self.den) < self.num
    }

    /// Bernoulli draw determined by `key` alone.
    pub fn coin(&self, key: u64) -> bool {
        self.draw(&mut SplitMix64::seed_from_u64(key))
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl FromStr for Probability {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let p = parse_rational(s).map_err(|e| GraphError::InvalidParameter(e.to_string()))?;
        Probability::new(&p)
    }
}

impl Serialize for Probability {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Probability {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geometry::rat;

    #[test]
    fn parsing_and_range() {
        assert_eq!("3/10".parse::<Probability>().unwrap().value(), rat(3, 10));
        assert!("0.3".parse::<Probability>().is_err());
        assert!("11/10".parse::<Probability>().is_err());
        assert!("-1/2".parse::<Probability>().is_err());
        assert_eq!(serde_json::to_string(&Probability::new(&rat(1, 2)).unwrap()).unwrap(), "\"1/2\"");
    }

    #[test]
    fn extreme_coins() {
        for key in 0..100 {
            assert!(Probability::ONE.coin(key));
            assert!(!Probability::ZERO.coin(key));
        }
    }
}
