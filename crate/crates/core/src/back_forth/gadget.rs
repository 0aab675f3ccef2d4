use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exact_geometry::builtin::builtin;
use crate::exact_geometry::{frac, int, rat, BallSpec, PolytopeBall, Rational, Vector};
use crate::random_graphs::{dyadic_in, Adjacency, Probability};
use crate::rng;

use super::fibred::{make_fibred_sample, zero_u, FibredGraph, FibredSample, FibredWindow};
use super::game::bf_run_from;
use super::state::PartialIso;
use super::BfError;

/// Indices of the gadget points `0, u, 3u/2, 5u/2` in a gadgeted sample.
pub const GADGET: [usize; 4] = [0, 1, 2, 3];
/// The only gadget pair at norm below 1.
pub const GADGET_EDGE: (usize, usize) = (1, 2);

/// A fibred sample with `{0, u, 3u/2, 5u/2}` on the fibre over `U = 0`,
/// `u` the unit vector along `R`.
#[derive(Debug, Clone)]
pub struct S0Gadget {
    pub sample: FibredSample,
    pub u: Vector,
    pub resampled: usize,
}

/// All pairs at norm exactly 1, found fibre pair by fibre pair: a pair is
/// at unit distance iff its `U`-distance is 1 and `|dw| <= 1`, or `|dw| = 1`
/// and its `U`-distance is at most 1.
pub fn unit_distance_pairs(s: &FibredSample) -> Vec<(usize, usize)> {
    let one = Rational::one();
    let mut out = HashSet::new();
    let mut by_w: HashMap<&Rational, Vec<usize>> = HashMap::new();
    for i in 0..s.len() {
        by_w.entry(s.w(i)).or_default().push(i);
    }
    for i in 0..s.len() {
        let up = s.w(i) + &one;
        for &j in by_w.get(&up).into_iter().flatten() {
            if s.u_norm(s.fibre_of(i), s.fibre_of(j)) <= &one {
                out.insert((i.min(j), i.max(j)));
            }
        }
    }
    for f in 0..s.n_u() {
        for g in f + 1..s.n_u() {
            if s.u_norm(f, g) == &one {
                for &i in s.fibre_members(f) {
                    for &j in s.fibre_members(g) {
                        if (s.w(i) - s.w(j)).abs() <= one {
                            out.insert((i.min(j), i.max(j)));
                        }
                    }
                }
            }
        }
    }
    let mut v: Vec<_> = out.into_iter().collect();
    v.sort_unstable();
    v
}

/// Adds the gadget on a new fibre over `U = 0` at indices `0..4`, then
/// redraws sample points until the only unit-distance pairs are `{0, u}`
/// and `{3u/2, 5u/2}` and no sample point differs from a gadget point by an
/// integer along `R`.
pub fn attach_s0_gadget(sample: &FibredSample, seed: u64) -> Result<S0Gadget, BfError> {
    let ws = vec![Rational::zero(), int(1), rat(3, 2), rat(5, 2)];
    let mut s = sample.prepend_fibre(zero_u(sample), ws);
    let mut r = rng::seeded(seed);
    let n = s.len();
    let guard = 100 * n.max(1);
    let mut resampled = 0;
    loop {
        let mut bad_points: Vec<usize> = Vec::new();
        let mut bad_fibres: Vec<usize> = Vec::new();
        let gadget_fracs = [Rational::zero(), rat(1, 2)];
        for i in GADGET.len()..n {
            if gadget_fracs.contains(&frac(s.w(i))) {
                bad_points.push(i);
            }
        }
        for f in 1..s.n_u() {
            if (0..f).any(|g| s.u_norm(f, g) == &Rational::one() || s.u_points()[g] == s.u_points()[f]) {
                bad_fibres.push(f);
            }
        }
        for (i, j) in unit_distance_pairs(&s) {
            if (i, j) != (0, 1) && (i, j) != (2, 3) {
                bad_points.push(j.max(GADGET.len()));
            }
        }
        if bad_points.is_empty() && bad_fibres.is_empty() {
            break;
        }
        resampled += bad_points.len() + bad_fibres.len();
        if resampled > guard {
            return Err(BfError::WindowTooSmall);
        }
        let window = s.window.clone().ok_or_else(|| BfError::InvalidParameter("sample has no window to redraw from".into()))?;
        for f in bad_fibres {
            let lo = -&window.u_radius;
            let len = &window.u_radius * int(2);
            let u = Vector::new((0..s.u_ball().dim()).map(|_| dyadic_in(&mut r, &lo, &len)).collect());
            s.set_u(f, u);
        }
        let mut fracs: HashSet<Rational> = (0..n).map(|i| frac(s.w(i))).collect();
        for i in bad_points {
            let (start, length) = s.range(s.fibre_of(i)).cloned().ok_or_else(|| BfError::InvalidParameter(format!("point {i} cannot be redrawn")))?;
            fracs.remove(&frac(s.w(i)));
            let w = loop {
                let w = dyadic_in(&mut r, &start, &length);
                if fracs.insert(frac(&w)) {
                    break w;
                }
            };
            s.set_w(i, w);
        }
    }
    let mut u = vec![Rational::zero(); s.u_ball().dim()];
    u.push(Rational::one());
    Ok(S0Gadget { sample: s, u: Vector::new(u), resampled })
}

impl S0Gadget {
    /// The identity on the gadget points.
    pub fn identity_state(&self) -> PartialIso {
        let mut st = PartialIso::new();
        for i in GADGET {
            let ok = st.insert(i, i, self.sample.w(i), self.sample.w(i));
            debug_assert!(ok);
        }
        st
    }

    pub fn audit(&self) -> bool {
        unit_distance_pairs(&self.sample) == vec![(0, 1), (2, 3)]
    }
}

/// Parameters of one gadget experiment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct S0Params {
    pub u_ball: BallSpec,
    pub n_u: usize,
    pub fibre_n: usize,
    pub window: FibredWindow,
    pub p: Probability,
    pub budget: usize,
}

impl S0Params {
    /// Hexagon-normed `U`, 60 fibres over a `[-8, 8]^2` window, fibre
    /// windows of length `1/60` staggered through `[0, 1)`.
    pub fn hexagon(fibre_n: usize, p: Probability, budget: usize) -> Self {
        S0Params {
            u_ball: builtin("hexagon").expect("builtin").to_spec(),
            n_u: 60,
            fibre_n,
            window: FibredWindow { u_radius: int(8), fibre_length: rat(1, 60), stagger: true },
            p,
            budget,
        }
    }

    /// Small samples for estimating the gadget agreement rate.
    pub fn quick(p: Probability) -> Self {
        S0Params {
            u_ball: builtin("hexagon").expect("builtin").to_spec(),
            n_u: 4,
            fibre_n: 2,
            window: FibredWindow { u_radius: int(2), fibre_length: rat(1, 4), stagger: true },
            p,
            budget: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct S0Trial {
    pub trial: u64,
    pub agreed: bool,
    /// Present when the graphs agreed on the gadget edge.
    pub bf_completed: Option<bool>,
    pub matched: usize,
    pub audits_passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct S0Report {
    pub trials: Vec<S0Trial>,
    pub agreement_rate: f64,
    /// Completed runs among trials that agreed on the gadget edge.
    pub conditional_rate: f64,
    pub audits_passed: bool,
}

fn run_trial(params: &S0Params, u_ball: &PolytopeBall, seed: u64, t: u64) -> Result<S0Trial, BfError> {
    let base = make_fibred_sample(u_ball, params.n_u, params.fibre_n, &params.window, rng::derive_seed(seed, 4 * t))?;
    let gadget = attach_s0_gadget(&base, rng::derive_seed(seed, 4 * t + 1))?;
    if !gadget.audit() {
        return Err(BfError::GadgetAudit);
    }
    let state = gadget.identity_state();
    let sample = Arc::new(gadget.sample);
    let g = FibredGraph::new(sample.clone(), params.p, rng::derive_seed(seed, 4 * t + 2));
    let g2 = FibredGraph::new(sample, params.p, rng::derive_seed(seed, 4 * t + 3));
    let (a, b) = GADGET_EDGE;
    let agreed = g.adjacent(a, b) == g2.adjacent(a, b);
    if !agreed {
        return Ok(S0Trial { trial: t, agreed, bf_completed: None, matched: 0, audits_passed: true });
    }
    let report = bf_run_from(&g, &g2, state, params.budget, seed)?;
    Ok(S0Trial { trial: t, agreed, bf_completed: Some(report.completed()), matched: report.matched, audits_passed: report.audits_passed })
}

/// Per trial: a gadgeted sample, two independent `G_p`, agreement on the
/// gadget edge, and when they agree a run seeded with the identity on the
/// gadget. Trials run in parallel on independent seeds.
pub fn s0_experiment(params: &S0Params, trials: u64, seed: u64) -> Result<S0Report, BfError> {
    if trials == 0 {
        return Err(BfError::InvalidParameter("trials must be at least 1".into()));
    }
    let u_ball = params.u_ball.clone().into_ball()?;
    let rows: Vec<S0Trial> = (0..trials).into_par_iter().map(|t| run_trial(params, &u_ball, seed, t)).collect::<Result<_, _>>()?;
    let agreed = rows.iter().filter(|r| r.agreed).count();
    let completed = rows.iter().filter(|r| r.bf_completed == Some(true)).count();
    Ok(S0Report {
        agreement_rate: agreed as f64 / trials as f64,
        conditional_rate: if agreed == 0 { 0.0 } else { completed as f64 / agreed as f64 },
        audits_passed: rows.iter().all(|r| r.audits_passed),
        trials: rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geometry::builtin::cube;

    #[test]
    fn bare_gadget_has_two_unit_pairs() {
        let empty = FibredSample::from_parts(cube(1), vec![Vector::from_ints(&[3])], vec![vec![]]).unwrap();
        let gad = attach_s0_gadget(&empty, 0).unwrap();
        assert!(gad.audit());
        assert_eq!(gad.sample.len(), 4);
        let v = gad.sample.v_ball();
        let pts = gad.sample.flat_points();
        assert_eq!(v.norm(&(&pts[1] - &pts[2])).unwrap(), rat(1, 2));
        assert_eq!(v.norm(&(&pts[0] - &pts[1])).unwrap(), int(1));
        assert_eq!(gad.u, Vector::from_ints(&[0, 1]));
    }

    #[test]
    fn offending_points_are_redrawn() {
        let w = FibredWindow { u_radius: int(2), fibre_length: rat(1, 2), stagger: false };
        let base = make_fibred_sample(&builtin("hexagon").unwrap(), 10, 50, &w, 2).unwrap();
        let gad = attach_s0_gadget(&base, 1).unwrap();
        assert!(gad.audit());
        assert_eq!(gad.sample.len(), 504);
        // A fibre at U-distance exactly 1 from the gadget fibre must move.
        let forced = FibredSample::from_parts(cube(1), vec![Vector::from_ints(&[1])], vec![vec![rat(1, 3)]]).unwrap();
        assert!(matches!(attach_s0_gadget(&forced, 0), Err(BfError::InvalidParameter(_))));
    }

    #[test]
    fn identity_start_and_agreement() {
        let params = S0Params::quick(Probability::ONE);
        let r = s0_experiment(&params, 20, 3).unwrap();
        assert_eq!(r.agreement_rate, 1.0);
        assert!(r.audits_passed);
        let r = s0_experiment(&S0Params::quick("3/10".parse().unwrap()), 2000, 3).unwrap();
        assert!((r.agreement_rate - 0.58).abs() < 0.04, "{}", r.agreement_rate);
    }
}
