use proptest::prelude::*;

use rado_lab::back_forth::PartialIso;
use rado_lab::decomposition::{linear_isometry_group, linf_decomposition, DEFAULT_VERTEX_LIMIT};
use rado_lab::exact_geometry::{builtin, floor_int, rat, Matrix, PolytopeBall, Rational, Vector};
use rado_lab::step_isometry::{random_step_isometry, verify_step_isometry, AffineMap, FactorizedStepIsometry};

fn rational() -> impl Strategy<Value = Rational> {
    (-400i64..=400, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

fn vector(dim: usize) -> impl Strategy<Value = Vector> {
    proptest::collection::vec(rational(), dim).prop_map(Vector::new)
}

fn points(dim: usize, n: usize) -> impl Strategy<Value = Vec<Vector>> {
    proptest::collection::btree_set(vector(dim), 2..=n).prop_map(|s| s.into_iter().collect())
}

/// `floor` of the max-norm, written out by hand.
fn linf_floor(x: &Vector, y: &Vector) -> num_bigint::BigInt {
    let m = x.coords().iter().zip(y.coords()).map(|(a, b)| if a > b { a - b } else { b - a }).max().unwrap();
    floor_int(&m)
}

fn pairs_under(f: impl Fn(&Vector) -> Vector, xs: &[Vector]) -> Vec<(Vector, Vector)> {
    xs.iter().map(|x| (x.clone(), f(x))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn family_members_preserve_floor_distance(seed in any::<u64>(), d in 1usize..=3, k in 0usize..=4, xs in points(3, 12)) {
        let spec = random_step_isometry(d, k, seed);
        let xs: Vec<Vector> = xs.into_iter().map(|x| Vector::new(x.coords()[..d].to_vec())).collect();
        let ys: Vec<Vector> = xs.iter().map(|x| spec.apply(x).unwrap()).collect();
        for i in 0..xs.len() {
            for j in 0..i {
                prop_assert_eq!(linf_floor(&xs[i], &xs[j]), linf_floor(&ys[i], &ys[j]));
            }
        }
        let check = verify_step_isometry(&builtin::cube(d), &pairs_under(|x| spec.apply(x).unwrap(), &xs)).unwrap();
        prop_assert!(check.holds());
    }

    #[test]
    fn inverse_undoes_and_composition_stays_sound(s1 in any::<u64>(), s2 in any::<u64>(), xs in points(2, 10)) {
        let f = random_step_isometry(2, 3, s1);
        let g = random_step_isometry(2, 2, s2);
        let finv = f.inverse();
        finv.validate().unwrap();
        for x in &xs {
            prop_assert_eq!(&finv.apply(&f.apply(x).unwrap()).unwrap(), x);
            prop_assert_eq!(&f.apply(&finv.apply(x).unwrap()).unwrap(), x);
        }
        let gf = pairs_under(|x| g.apply(&f.apply(x).unwrap()).unwrap(), &xs);
        prop_assert!(verify_step_isometry(&builtin::cube(2), &gf).unwrap().holds());
    }

    #[test]
    fn linear_isometries_are_step_isometries(idx in 0usize..12, t in vector(2), xs in points(2, 10)) {
        let ball = builtin::hexagon();
        let group = linear_isometry_group(&ball, DEFAULT_VERTEX_LIMIT).unwrap();
        let m = &group[idx % group.len()].matrix;
        let pairs = pairs_under(|x| &m.mul_vec(x) + &t, &xs);
        prop_assert!(verify_step_isometry(&ball, &pairs).unwrap().holds());
    }

    #[test]
    fn facet_gauge_matches_lp(seed in 0u64..40, x in vector(3)) {
        let ball = builtin::random_symmetric(3, 4, 5, seed);
        prop_assert_eq!(ball.gauge().norm(&x), ball.norm(&x).unwrap());
    }

    #[test]
    fn split_compose_round_trip_and_max_rule(x in vector(3)) {
        let ball = builtin::hexagonal_prism();
        let dec = linf_decomposition(&ball).unwrap();
        let (a, u) = dec.split(&x);
        prop_assert_eq!(&dec.compose(&a, &u), &x);
        let mut expect = ball.norm(&u).unwrap();
        for t in &a {
            let t = if *t < Rational::from_integer(0.into()) { -t } else { t.clone() };
            expect = expect.max(t);
        }
        prop_assert_eq!(ball.norm(&x).unwrap(), expect);
    }

    #[test]
    fn factorized_maps_are_step_isometries(idx in 0usize..12, tx in rational(), ty in rational(), seed in any::<u64>(), xs in points(3, 10)) {
        let ball = builtin::hexagonal_prism();
        let dec = linf_decomposition(&ball).unwrap();
        let hex_group = linear_isometry_group(&builtin::hexagon(), DEFAULT_VERTEX_LIMIT).unwrap();
        let m2 = &hex_group[idx % hex_group.len()].matrix;
        let zero = Rational::from_integer(0.into());
        let one = Rational::from_integer(1.into());
        let linear = Matrix::from_rows(vec![
            Vector::new(vec![m2.get(0, 0).clone(), m2.get(0, 1).clone(), zero.clone()]),
            Vector::new(vec![m2.get(1, 0).clone(), m2.get(1, 1).clone(), zero.clone()]),
            Vector::new(vec![zero.clone(), zero.clone(), one]),
        ]);
        let u_map = AffineMap { linear, translation: Vector::new(vec![tx, ty, zero]) };
        let f = FactorizedStepIsometry::new(&ball, dec, u_map, random_step_isometry(1, 3, seed)).unwrap();
        let pairs = pairs_under(|x| f.apply(x).unwrap(), &xs);
        prop_assert!(verify_step_isometry(&ball, &pairs).unwrap().holds());
    }

    #[test]
    fn frac_order_stays_monotone(ops in proptest::collection::vec((rational(), rational()), 1..40)) {
        let mut iso = PartialIso::new();
        for (k, (w, w2)) in ops.iter().enumerate() {
            let before = iso.clone();
            if iso.insert(k, k, w, w2) {
                prop_assert!(iso.frac_order().is_monotone());
            } else {
                prop_assert_eq!(&iso, &before);
            }
        }
    }
}

#[test]
fn unsound_map_is_caught() {
    // a shear of the square moves a unit step by more than one
    let ball: PolytopeBall = builtin::cube(2);
    let shear = |x: &Vector| Vector::new(vec![&x[0] + &x[1], x[1].clone()]);
    let xs = [Vector::from_ints(&[0, 0]), Vector::from_fracs(&[(1, 2), (9, 10)])];
    assert!(!verify_step_isometry(&ball, &pairs_under(shear, &xs)).unwrap().holds());
}
