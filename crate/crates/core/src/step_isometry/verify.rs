use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::exact_geometry::{PointFrame, PolytopeBall, Vector};

use super::StepIsometryError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum StepCheck {
    Holds,
    Violation { i: usize, j: usize, domain_floor: u64, image_floor: u64 },
}

impl StepCheck {
    pub fn holds(&self) -> bool {
        matches!(self, StepCheck::Holds)
    }
}

pub(crate) fn check_injective(pairs: &[(Vector, Vector)]) -> Result<(), StepIsometryError> {
    let mut xs = HashSet::with_capacity(pairs.len());
    let mut ys = HashSet::with_capacity(pairs.len());
    for (x, y) in pairs {
        if !xs.insert(x) {
            return Err(StepIsometryError::NotInjective(x.clone()));
        }
        if !ys.insert(y) {
            return Err(StepIsometryError::NotInjective(y.clone()));
        }
    }
    Ok(())
}

/// Compares `floor(||x_i - x_j||)` with `floor(||y_i - y_j||)` for all `i < j`.
pub fn verify_step_isometry(ball: &PolytopeBall, pairs: &[(Vector, Vector)]) -> Result<StepCheck, StepIsometryError> {
    for (x, y) in pairs {
        ball.check_dim(x)?;
        ball.check_dim(y)?;
    }
    check_injective(pairs)?;
    let xs: Vec<Vector> = pairs.iter().map(|p| p.0.clone()).collect();
    let ys: Vec<Vector> = pairs.iter().map(|p| p.1.clone()).collect();
    let gauge = ball.gauge();
    let fx = PointFrame::new(gauge, &xs);
    let fy = PointFrame::new(gauge, &ys);
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            let (a, b) = (fx.floor_norm(i, j), fy.floor_norm(i, j));
            if a != b {
                return Ok(StepCheck::Violation { i, j, domain_floor: a, image_floor: b });
            }
        }
    }
    Ok(StepCheck::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geometry::builtin::cube;

    #[test]
    fn line_examples() {
        let line = cube(1);
        let pts = |v: &[(i64, i64)]| v.iter().map(|&p| Vector::from_fracs(&[p])).collect::<Vec<_>>();
        let x = pts(&[(0, 1), (3, 5)]);
        let id: Vec<_> = x.iter().map(|v| (v.clone(), v.clone())).collect();
        assert!(verify_step_isometry(&line, &id).unwrap().holds());
        let moved = vec![(x[0].clone(), x[0].clone()), (x[1].clone(), pts(&[(6, 5)])[0].clone())];
        assert_eq!(verify_step_isometry(&line, &moved).unwrap(), StepCheck::Violation { i: 0, j: 1, domain_floor: 0, image_floor: 1 });
    }

    #[test]
    fn repeated_points_are_rejected() {
        let a = Vector::from_ints(&[0]);
        let b = Vector::from_ints(&[1]);
        let pairs = vec![(a.clone(), b.clone()), (b.clone(), b)];
        assert!(matches!(verify_step_isometry(&cube(1), &pairs), Err(StepIsometryError::NotInjective(_))));
    }
}
