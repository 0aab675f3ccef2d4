use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact_geometry::builtin::cube;
use crate::exact_geometry::rational::serde_rational;
use crate::exact_geometry::{frac, int, BallSpec, PolytopeBall, Rational, Vector};
use crate::random_graphs::{dyadic_in, Adjacency, Probability};
use crate::rng::{self, pair_key};
use crate::step_isometry::StepIsometrySpec;

use super::BfError;

/// Where sample points are drawn. `U`-points are uniform in
/// `[-u_radius, u_radius]^k`. Each fibre covers a window of length
/// `fibre_length` in the `R`-direction: `[-fibre_length/2, fibre_length/2)`
/// for every fibre, or, when `stagger` is set, `[f/n_u, f/n_u + fibre_length)`
/// for fibre `f`, so that different fibres use different fractional ranges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibredWindow {
    #[serde(with = "serde_rational")]
    pub u_radius: Rational,
    #[serde(with = "serde_rational")]
    pub fibre_length: Rational,
    pub stagger: bool,
}

impl FibredWindow {
    fn validate(&self) -> Result<(), BfError> {
        if !self.u_radius.is_positive() || !self.fibre_length.is_positive() {
            return Err(BfError::InvalidParameter("window radii must be positive".into()));
        }
        Ok(())
    }

    fn fibre_start(&self, f: usize, n_u: usize) -> Rational {
        if self.stagger {
            Rational::new(f.into(), n_u.into())
        } else {
            -&self.fibre_length / int(2)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FibredPoint {
    pub fibre: usize,
    #[serde(with = "serde_rational")]
    pub w: Rational,
}

/// Points of `V = (U (+) R)_inf` grouped by `U`-component. Point indices
/// follow the enumeration order used by the back-and-forth game.
#[derive(Debug, Clone)]
pub struct FibredSample {
    u_ball: PolytopeBall,
    v_ball: PolytopeBall,
    u_points: Vec<Vector>,
    points: Vec<FibredPoint>,
    members: Vec<Vec<usize>>,
    /// Fibre draw ranges `(start, length)`; `None` for fixed fibres.
    ranges: Vec<Option<(Rational, Rational)>>,
    u_norm: Vec<Rational>,
    u_close: Vec<bool>,
    pub window: Option<FibredWindow>,
    pub seed: u64,
}

impl PartialEq for FibredSample {
    fn eq(&self, other: &Self) -> bool {
        self.u_ball == other.u_ball && self.u_points == other.u_points && self.points == other.points
    }
}

impl FibredSample {
    /// Builds a sample from explicit parts, checking the invariants. Points
    /// are enumerated fibre by fibre, round robin.
    pub fn from_parts(u_ball: PolytopeBall, u_points: Vec<Vector>, fibres: Vec<Vec<Rational>>) -> Result<Self, BfError> {
        if u_points.len() != fibres.len() {
            return Err(BfError::InvalidParameter("one fibre per U-point expected".into()));
        }
        let rounds = fibres.iter().map(Vec::len).max().unwrap_or(0);
        let mut points = Vec::new();
        for r in 0..rounds {
            for (f, ws) in fibres.iter().enumerate() {
                if let Some(w) = ws.get(r) {
                    points.push(FibredPoint { fibre: f, w: w.clone() });
                }
            }
        }
        let ranges = vec![None; u_points.len()];
        let s = Self::assemble(u_ball, u_points, points, ranges, None, 0)?;
        s.check_invariants()?;
        Ok(s)
    }

    fn assemble(
        u_ball: PolytopeBall,
        u_points: Vec<Vector>,
        points: Vec<FibredPoint>,
        ranges: Vec<Option<(Rational, Rational)>>,
        window: Option<FibredWindow>,
        seed: u64,
    ) -> Result<Self, BfError> {
        for u in &u_points {
            u_ball.check_dim(u)?;
        }
        let v_ball = PolytopeBall::linf_sum(&u_ball, &cube(1));
        let mut s = FibredSample {
            u_ball,
            v_ball,
            members: Vec::new(),
            u_norm: Vec::new(),
            u_close: Vec::new(),
            u_points,
            points,
            ranges,
            window,
            seed,
        };
        s.refresh();
        Ok(s)
    }

    fn refresh(&mut self) {
        let n_u = self.u_points.len();
        self.members = vec![Vec::new(); n_u];
        for (i, p) in self.points.iter().enumerate() {
            self.members[p.fibre].push(i);
        }
        let gauge = self.u_ball.gauge();
        self.u_norm = (0..n_u * n_u).map(|k| gauge.norm(&(&self.u_points[k / n_u] - &self.u_points[k % n_u]))).collect();
        self.u_close = self.u_norm.iter().map(|x| x < &Rational::one()).collect();
    }

    fn check_invariants(&self) -> Result<(), BfError> {
        let us: HashSet<&Vector> = self.u_points.iter().collect();
        if us.len() != self.u_points.len() {
            return Err(BfError::InvalidParameter("U-points must be distinct".into()));
        }
        let mut fracs = HashSet::new();
        for (i, p) in self.points.iter().enumerate() {
            if !fracs.insert(frac(&p.w)) {
                return Err(BfError::InvalidParameter(format!("point {i} differs from another by an integer in the R-component")));
            }
        }
        Ok(())
    }

    pub fn u_ball(&self) -> &PolytopeBall {
        &self.u_ball
    }

    /// The unit ball of `V`, with the `R`-direction last.
    pub fn v_ball(&self) -> &PolytopeBall {
        &self.v_ball
    }

    pub fn u_points(&self) -> &[Vector] {
        &self.u_points
    }

    pub fn points(&self) -> &[FibredPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn n_u(&self) -> usize {
        self.u_points.len()
    }

    /// Point indices on fibre `f`, ascending.
    pub fn fibre_members(&self, f: usize) -> &[usize] {
        &self.members[f]
    }

    /// `R`-components on fibre `f`, in index order.
    pub fn fibre_values(&self, f: usize) -> Vec<&Rational> {
        self.members[f].iter().map(|&i| &self.points[i].w).collect()
    }

    pub fn fibre_of(&self, i: usize) -> usize {
        self.points[i].fibre
    }

    pub fn w(&self, i: usize) -> &Rational {
        &self.points[i].w
    }

    pub fn u_norm(&self, f: usize, g: usize) -> &Rational {
        &self.u_norm[f * self.n_u() + g]
    }

    /// Point `i` in `V` coordinates.
    pub fn v_point(&self, i: usize) -> Vector {
        let p = &self.points[i];
        let mut c = self.u_points[p.fibre].coords().to_vec();
        c.push(p.w.clone());
        Vector::new(c)
    }

    pub fn flat_points(&self) -> Vec<Vector> {
        (0..self.len()).map(|i| self.v_point(i)).collect()
    }

    /// `||x_i - x_j|| < 1` in `V`.
    pub fn close(&self, i: usize, j: usize) -> bool {
        let (a, b) = (&self.points[i], &self.points[j]);
        self.u_close[a.fibre * self.n_u() + b.fibre] && (&a.w - &b.w).abs() < Rational::one()
    }

    pub(crate) fn range(&self, f: usize) -> Option<&(Rational, Rational)> {
        self.ranges[f].as_ref()
    }

    pub(crate) fn set_w(&mut self, i: usize, w: Rational) {
        self.points[i].w = w;
    }

    pub(crate) fn set_u(&mut self, f: usize, u: Vector) {
        self.u_points[f] = u;
        self.refresh();
    }

    /// Inserts fixed points on a new fibre at `u`, ahead of every existing
    /// fibre and point.
    pub(crate) fn prepend_fibre(&self, u: Vector, ws: Vec<Rational>) -> Self {
        let mut u_points = vec![u];
        u_points.extend(self.u_points.iter().cloned());
        let mut points: Vec<FibredPoint> = ws.into_iter().map(|w| FibredPoint { fibre: 0, w }).collect();
        points.extend(self.points.iter().map(|p| FibredPoint { fibre: p.fibre + 1, w: p.w.clone() }));
        let mut ranges = vec![None];
        ranges.extend(self.ranges.iter().cloned());
        Self::assemble(self.u_ball.clone(), u_points, points, ranges, self.window.clone(), self.seed).expect("dimensions already checked")
    }

    /// The image of the sample under `w -> spec(w)` on every fibre. When
    /// `spec` is a step-isometry of `R`, this is a step-isometry of `V`
    /// fixing `U`.
    pub fn map_fibres(&self, spec: &StepIsometrySpec) -> Result<Self, BfError> {
        if spec.dim() != 1 {
            return Err(BfError::InvalidParameter("fibre map must act on R".into()));
        }
        let mut out = self.clone();
        for p in &mut out.points {
            p.w = spec.apply(&Vector::new(vec![p.w.clone()]))?[0].clone();
        }
        out.ranges = vec![None; out.n_u()];
        out.check_invariants()?;
        Ok(out)
    }

    pub fn to_spec(&self) -> FibredSampleSpec {
        FibredSampleSpec {
            u_ball: self.u_ball.to_spec(),
            u_points: self.u_points.clone(),
            points: self.points.clone(),
            window: self.window.clone(),
            seed: self.seed,
        }
    }
}

/// Serialisable form of a [`FibredSample`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibredSampleSpec {
    pub u_ball: BallSpec,
    pub u_points: Vec<Vector>,
    pub points: Vec<FibredPoint>,
    pub window: Option<FibredWindow>,
    pub seed: u64,
}

/// `n_u` distinct `U`-points with `fibre_n` `R`-components each; no two
/// `R`-components anywhere differ by an integer. Points are enumerated round
/// robin over the fibres; within a fibre the enumeration visits the sorted
/// values in bisection order, so early points spread over the fibre window.
pub fn make_fibred_sample(u_ball: &PolytopeBall, n_u: usize, fibre_n: usize, window: &FibredWindow, seed: u64) -> Result<FibredSample, BfError> {
    if n_u == 0 || fibre_n == 0 {
        return Err(BfError::InvalidParameter("n_u and fibre_n must be at least 1".into()));
    }
    window.validate()?;
    let mut r = rng::seeded(seed);
    let k = u_ball.dim();
    let lo = -&window.u_radius;
    let len = &window.u_radius * int(2);
    let mut seen = HashSet::new();
    let mut u_points = Vec::with_capacity(n_u);
    let mut attempts = 0;
    while u_points.len() < n_u {
        attempts += 1;
        if attempts > 100 * n_u {
            return Err(BfError::WindowTooSmall);
        }
        let u = Vector::new((0..k).map(|_| dyadic_in(&mut r, &lo, &len)).collect());
        if seen.insert(u.clone()) {
            u_points.push(u);
        }
    }
    let ranges: Vec<Option<(Rational, Rational)>> = (0..n_u).map(|f| Some((window.fibre_start(f, n_u), window.fibre_length.clone()))).collect();
    let total = n_u * fibre_n;
    let mut fracs = HashSet::with_capacity(total);
    let mut fibres: Vec<Vec<Rational>> = vec![Vec::with_capacity(fibre_n); n_u];
    let mut attempts = 0;
    for _ in 0..fibre_n {
        for (f, range) in ranges.iter().enumerate() {
            let (start, length) = range.as_ref().expect("sampled fibres have ranges");
            loop {
                attempts += 1;
                if attempts > 100 * total {
                    return Err(BfError::WindowTooSmall);
                }
                let w = dyadic_in(&mut r, start, length);
                if fracs.insert(frac(&w)) {
                    fibres[f].push(w);
                    break;
                }
            }
        }
    }
    for ws in &mut fibres {
        ws.sort();
        *ws = bisection_order(ws.len()).into_iter().map(|k| ws[k].clone()).collect();
    }
    let points = (0..fibre_n).flat_map(|r| fibres.iter().enumerate().map(move |(f, ws)| FibredPoint { fibre: f, w: ws[r].clone() })).collect();
    FibredSample::assemble(u_ball.clone(), u_points, points, ranges, Some(window.clone()), seed)
}

/// Permutation of `0..n` listing midpoints first: the middle, then the
/// middles of both halves, and so on breadth first.
fn bisection_order(n: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(n);
    let mut queue = VecDeque::from([(0, n)]);
    while let Some((lo, hi)) = queue.pop_front() {
        if lo < hi {
            let mid = lo + (hi - lo) / 2;
            out.push(mid);
            queue.push_back((lo, mid));
            queue.push_back((mid + 1, hi));
        }
    }
    out
}

/// Lazily evaluated `G_p` on a fibred sample: `{i, j}` is an edge when the
/// points are at norm below 1 and the coin keyed by `(seed, i, j)` lands.
#[derive(Debug, Clone)]
pub struct FibredGraph {
    pub sample: Arc<FibredSample>,
    pub p: Probability,
    pub seed: u64,
}

impl FibredGraph {
    pub fn new(sample: Arc<FibredSample>, p: Probability, seed: u64) -> Self {
        FibredGraph { sample, p, seed }
    }
}

impl Adjacency for FibredGraph {
    fn len(&self) -> usize {
        self.sample.len()
    }

    fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.sample.close(i, j) && self.p.coin(pair_key(self.seed, i, j))
    }
}

pub(crate) fn zero_u(sample: &FibredSample) -> Vector {
    Vector::new(vec![Rational::zero(); sample.u_ball.dim()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geometry::builtin::builtin;
    use crate::exact_geometry::rat;

    pub(crate) fn window() -> FibredWindow {
        FibredWindow { u_radius: int(2), fibre_length: rat(1, 2), stagger: false }
    }

    #[test]
    fn single_fibre() {
        let s = make_fibred_sample(&cube(1), 1, 5, &window(), 3).unwrap();
        assert_eq!(s.len(), 5);
        let ws = s.fibre_values(0);
        for i in 0..5 {
            for j in i + 1..5 {
                assert!(!(ws[i] - ws[j]).is_integer());
            }
        }
    }

    #[test]
    fn hexagon_fibres_and_determinism() {
        let hex = builtin("hexagon").unwrap();
        let s = make_fibred_sample(&hex, 10, 50, &window(), 8).unwrap();
        assert_eq!(s.len(), 500);
        s.check_invariants().unwrap();
        assert_eq!(s.fibre_members(3).len(), 50);
        assert_eq!(s.fibre_of(13), 3);
        assert_eq!(s, make_fibred_sample(&hex, 10, 50, &window(), 8).unwrap());
        assert_eq!(s.v_ball().dim(), 3);
        assert_eq!(s.v_point(0).dim(), 3);
    }

    #[test]
    fn staggered_ranges_are_disjoint_mod_one() {
        let w = FibredWindow { u_radius: int(3), fibre_length: rat(1, 4), stagger: true };
        let s = make_fibred_sample(&cube(1), 4, 20, &w, 1).unwrap();
        for i in 0..s.len() {
            let f = s.fibre_of(i);
            let x = frac(s.w(i));
            assert!(x >= rat(f as i64, 4) && x < rat(f as i64 + 1, 4));
        }
    }

    #[test]
    fn bisection_visits_midpoints_first() {
        assert_eq!(bisection_order(7), vec![3, 1, 5, 0, 2, 4, 6]);
        let mut v = bisection_order(200);
        v.sort_unstable();
        assert_eq!(v, (0..200).collect::<Vec<_>>());
        let s = make_fibred_sample(&cube(1), 1, 3, &window(), 4).unwrap();
        assert!(s.w(1) < s.w(0) && s.w(0) < s.w(2));
    }

    #[test]
    fn from_parts_rejects_integer_differences() {
        let u = vec![Vector::from_ints(&[0]), Vector::from_ints(&[5])];
        assert!(FibredSample::from_parts(cube(1), u.clone(), vec![vec![rat(1, 3)], vec![rat(4, 3)]]).is_err());
        let s = FibredSample::from_parts(cube(1), u, vec![vec![rat(1, 3), rat(1, 5)], vec![rat(1, 7)]]).unwrap();
        assert_eq!(s.fibre_members(0), &[0, 2]);
    }
}
