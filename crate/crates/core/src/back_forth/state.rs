use std::collections::{BTreeMap, HashMap};
use std::ops::Bound;

use num_traits::One;

use crate::exact_geometry::{floor_int, frac, Rational};

/// Values `y` allowed as the image of a fractional part `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FracWindow {
    Any,
    Exact(Rational),
    /// Open interval.
    Between(Rational, Rational),
}

impl FracWindow {
    pub fn contains(&self, y: &Rational) -> bool {
        match self {
            FracWindow::Any => true,
            FracWindow::Exact(v) => v == y,
            FracWindow::Between(lo, hi) => lo < y && y < hi,
        }
    }
}

/// The partial map `x -> y` on `[0, 1)` induced by matched pairs, where a
/// pair `w -> w'` contributes `frac(w) -> w' - floor(w)`. It stays
/// extendable to an increasing `f` on `R` with `f(x + 1) = f(x) + 1` iff the
/// `y` values increase with `x` and the last is below the first plus one.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FracOrder {
    map: BTreeMap<Rational, Rational>,
}

impl FracOrder {
    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.map.iter()
    }

    /// The interval between the images of the cyclic neighbours of `x`.
    pub fn window(&self, x: &Rational) -> FracWindow {
        if let Some(y) = self.map.get(x) {
            return FracWindow::Exact(y.clone());
        }
        let (Some((_, first)), Some((_, last))) = (self.map.first_key_value(), self.map.last_key_value()) else {
            return FracWindow::Any;
        };
        let one = Rational::one();
        let lo = match self.map.range((Bound::Unbounded, Bound::Excluded(x))).next_back() {
            Some((_, y)) => y.clone(),
            None => last - &one,
        };
        let hi = match self.map.range((Bound::Excluded(x), Bound::Unbounded)).next() {
            Some((_, y)) => y.clone(),
            None => first + &one,
        };
        FracWindow::Between(lo, hi)
    }

    pub fn admits(&self, x: &Rational, y: &Rational) -> bool {
        self.window(x).contains(y)
    }

    pub(crate) fn insert(&mut self, x: Rational, y: Rational) {
        self.map.insert(x, y);
    }

    /// Strict monotonicity and the wrap-around condition.
    pub fn is_monotone(&self) -> bool {
        let ys: Vec<&Rational> = self.map.values().collect();
        if ys.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        match (ys.first(), ys.last()) {
            (Some(a), Some(b)) => *b < &(*a + Rational::one()),
            _ => true,
        }
    }
}

/// Contribution of the pair `w -> w2` to the [`FracOrder`].
pub fn frac_pair(w: &Rational, w2: &Rational) -> (Rational, Rational) {
    (frac(w), w2 - Rational::from_integer(floor_int(w)))
}

/// A partial bijection between two fibred samples.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialIso {
    pairs: Vec<(usize, usize)>,
    forward: HashMap<usize, usize>,
    backward: HashMap<usize, usize>,
    frac: FracOrder,
}

impl PartialIso {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn frac_order(&self) -> &FracOrder {
        &self.frac
    }

    pub fn image(&self, a: usize) -> Option<usize> {
        self.forward.get(&a).copied()
    }

    pub fn preimage(&self, b: usize) -> Option<usize> {
        self.backward.get(&b).copied()
    }

    /// Records `a -> b`; `w`, `w2` are their `R`-components. Returns false
    /// (leaving the state unchanged) when either end is taken or the
    /// fractional order would break.
    pub fn insert(&mut self, a: usize, b: usize, w: &Rational, w2: &Rational) -> bool {
        let (x, y) = frac_pair(w, w2);
        if self.forward.contains_key(&a) || self.backward.contains_key(&b) || !self.frac.admits(&x, &y) {
            return false;
        }
        self.frac.insert(x, y);
        self.forward.insert(a, b);
        self.backward.insert(b, a);
        self.pairs.push((a, b));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geometry::rat;

    #[test]
    fn windows_wrap_around() {
        let mut f = FracOrder::default();
        assert_eq!(f.window(&rat(1, 2)), FracWindow::Any);
        f.insert(rat(1, 4), rat(1, 3));
        assert_eq!(f.window(&rat(1, 2)), FracWindow::Between(rat(1, 3), rat(4, 3)));
        assert_eq!(f.window(&rat(1, 8)), FracWindow::Between(rat(-2, 3), rat(1, 3)));
        assert_eq!(f.window(&rat(1, 4)), FracWindow::Exact(rat(1, 3)));
        f.insert(rat(3, 4), rat(1, 2));
        assert_eq!(f.window(&rat(1, 2)), FracWindow::Between(rat(1, 3), rat(1, 2)));
        assert_eq!(f.window(&rat(7, 8)), FracWindow::Between(rat(1, 2), rat(4, 3)));
        assert!(f.is_monotone());
    }

    #[test]
    fn inserts_respect_the_order() {
        let mut s = PartialIso::new();
        assert!(s.insert(0, 0, &rat(0, 1), &rat(0, 1)));
        assert!(s.insert(1, 1, &rat(1, 1), &rat(1, 1)));
        assert!(!s.insert(2, 2, &rat(2, 1), &rat(5, 2)));
        assert!(s.insert(2, 2, &rat(3, 2), &rat(3, 2)));
        assert!(!s.insert(3, 3, &rat(7, 4), &rat(5, 4)));
        assert!(!s.insert(2, 3, &rat(1, 3), &rat(1, 3)));
        assert_eq!(s.len(), 3);
        assert!(s.frac_order().is_monotone());
        assert_eq!(frac_pair(&rat(-3, 2), &rat(7, 5)), (rat(1, 2), rat(17, 5)));
    }
}
