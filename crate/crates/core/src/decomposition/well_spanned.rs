use serde::{Deserialize, Serialize};

use crate::exact_geometry::linalg::{rank, span_basis};
use crate::exact_geometry::{PolytopeBall, Vector};

use super::lines::{extreme_lines, line_directions};

/// Result of repeatedly discarding extreme-line directions that are not in
/// the span of the remaining ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WellSpanned {
    /// Canonical (reduced echelon) basis of `U`.
    pub basis: Vec<Vector>,
    /// Directions spanning `U`.
    pub surviving: Vec<Vector>,
    /// Discarded directions, in discard order.
    pub removed: Vec<Vector>,
}

pub(crate) fn well_spanned_from(dirs: &[Vector]) -> WellSpanned {
    let mut surviving = dirs.to_vec();
    let mut removed = Vec::new();
    loop {
        let full = rank(&surviving);
        let loner = (0..surviving.len()).find(|&i| {
            let others: Vec<Vector> = surviving.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v.clone()).collect();
            rank(&others) < full
        });
        match loner {
            Some(i) => removed.push(surviving.remove(i)),
            None => break,
        }
    }
    WellSpanned { basis: span_basis(&surviving), surviving, removed }
}

/// The maximal well-spanned subspace `U` of the ball.
pub fn max_well_spanned_subspace(ball: &PolytopeBall) -> WellSpanned {
    well_spanned_from(&line_directions(&extreme_lines(ball)))
}
