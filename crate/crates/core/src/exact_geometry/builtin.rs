//! Named example balls used by the CLI and the test corpus.

use std::collections::HashSet;

use super::ball::PolytopeBall;
use super::rational::Vector;
use crate::rng;

pub const BUILTIN_NAMES: &[&str] = &[
    "interval",
    "square",
    "cube_1",
    "cube_2",
    "cube_3",
    "cube_4",
    "cross_polytope_2",
    "cross_polytope_3",
    "cross_polytope_4",
    "l1_plane",
    "octahedron",
    "hexagon",
    "hexagonal_prism",
];

/// Unit ball of `l_inf^d`; vertices are sign patterns, `+` before `-`.
pub fn cube(d: usize) -> PolytopeBall {
    let vertices = (0..1u32 << d)
        .map(|mask| {
            let coords: Vec<i64> = (0..d).map(|i| if mask >> (d - 1 - i) & 1 == 0 { 1 } else { -1 }).collect();
            Vector::from_ints(&coords)
        })
        .collect();
    PolytopeBall::validate(vertices).expect("cube is a valid ball")
}

/// Unit ball of `l_1^d`: `e_1, -e_1, e_2, -e_2, ...`.
pub fn cross_polytope(d: usize) -> PolytopeBall {
    let vertices = (0..d).flat_map(|i| [Vector::unit(d, i), -&Vector::unit(d, i)]).collect();
    PolytopeBall::validate(vertices).expect("cross polytope is a valid ball")
}

/// Irregular symmetric hexagon with vertices `±(1,0), ±(0,1), ±(1,1)`.
pub fn hexagon() -> PolytopeBall {
    let vertices = [[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [-1, -1]].iter().map(|c| Vector::from_ints(c)).collect();
    PolytopeBall::validate(vertices).expect("hexagon is a valid ball")
}

/// `conv(H x {±1})`: the hexagon plane `l_inf`-summed with a line.
pub fn hexagonal_prism() -> PolytopeBall {
    PolytopeBall::linf_sum(&hexagon(), &cube(1))
}

pub fn builtin(name: &str) -> Option<PolytopeBall> {
    let ball = match name {
        "interval" | "cube_1" => cube(1),
        "square" | "cube_2" => cube(2),
        "cube_3" => cube(3),
        "cube_4" => cube(4),
        "l1_plane" | "cross_polytope_2" => cross_polytope(2),
        "octahedron" | "cross_polytope_3" => cross_polytope(3),
        "cross_polytope_4" => cross_polytope(4),
        "hexagon" => hexagon(),
        "hexagonal_prism" => hexagonal_prism(),
        _ => return None,
    };
    Some(ball)
}

/// Convex hull of `pairs` random integer points in `[-range, range]^d` and
/// their negatives, redrawn until the hull is full-dimensional.
pub fn random_symmetric(d: usize, pairs: usize, range: i64, seed: u64) -> PolytopeBall {
    assert!(d >= 1 && pairs >= d && range >= 1, "need d >= 1, pairs >= d, range >= 1");
    let mut r = rng::seeded(seed);
    loop {
        let mut seen = HashSet::new();
        let mut points = Vec::with_capacity(2 * pairs);
        while points.len() < 2 * pairs {
            let v = rng::small_vector(&mut r, d, range, 1);
            if !v.is_zero() && !seen.contains(&v) {
                seen.insert(-&v);
                seen.insert(v.clone());
                points.push(-&v);
                points.push(v);
            }
        }
        if let Ok(ball) = PolytopeBall::validate(points) {
            return ball;
        }
    }
}
