//! A small exact linear-programming kernel.
//!
//! Dense two-phase simplex over [`Rational`] with Bland's rule, so it
//! terminates without perturbation. Problem sizes here are tiny (tens of
//! variables and rows), so the tableau is recomputed naively.

use num_traits::{Signed, Zero};

use super::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    LessEq,
    Eq,
    GreaterEq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpResult {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpResult::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpResult::Infeasible)
    }
}

/// `optimize objective . x` subject to the constraints, with `x >= 0` except
/// for variables marked free.
#[derive(Clone, Debug)]
pub struct LpProblem {
    num_vars: usize,
    sense: Sense,
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
    free: Vec<bool>,
}

impl LpProblem {
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        let num_vars = objective.len();
        LpProblem { num_vars, sense, objective, constraints: Vec::new(), free: vec![false; num_vars] }
    }

    /// A pure feasibility problem over `num_vars` variables.
    pub fn feasibility(num_vars: usize) -> Self {
        Self::new(Sense::Maximize, vec![Rational::zero(); num_vars])
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn constrain(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars, "constraint width must match variable count");
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Exact check that `point` satisfies every constraint and sign bound.
    pub fn satisfies(&self, point: &[Rational]) -> bool {
        if point.len() != self.num_vars {
            return false;
        }
        let signs_ok = point.iter().zip(&self.free).all(|(x, &free)| free || !x.is_negative());
        signs_ok
            && self.constraints.iter().all(|c| {
                let lhs: Rational = c.coeffs.iter().zip(point).map(|(a, x)| a * x).sum();
                match c.relation {
                    Relation::LessEq => lhs <= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                    Relation::GreaterEq => lhs >= c.rhs,
                }
            })
    }

    pub fn solve(&self) -> LpResult {
        let result = Tableau::build(self).solve(self);
        if let LpResult::Optimal { point, .. } = &result {
            debug_assert!(self.satisfies(point), "simplex certificate violates constraints");
        }
        result
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    ncols: usize,
    /// structural column pair (positive part, negative part) per variable
    var_cols: Vec<(usize, Option<usize>)>,
    artificial_start: usize,
}

impl Tableau {
    fn build(lp: &LpProblem) -> Self {
        let mut var_cols = Vec::with_capacity(lp.num_vars);
        let mut next = 0;
        for &free in &lp.free {
            if free {
                var_cols.push((next, Some(next + 1)));
                next += 2;
            } else {
                var_cols.push((next, None));
                next += 1;
            }
        }
        let structural = next;

        // Normalise to nonnegative right-hand sides.
        let normalized: Vec<(Vec<Rational>, Relation, Rational)> = lp
            .constraints
            .iter()
            .map(|c| {
                let mut row = vec![Rational::zero(); structural];
                for (j, a) in c.coeffs.iter().enumerate() {
                    let (p, n) = var_cols[j];
                    row[p] = a.clone();
                    if let Some(n) = n {
                        row[n] = -a;
                    }
                }
                if c.rhs.is_negative() {
                    let rel = match c.relation {
                        Relation::LessEq => Relation::GreaterEq,
                        Relation::GreaterEq => Relation::LessEq,
                        Relation::Eq => Relation::Eq,
                    };
                    (row.into_iter().map(|x| -x).collect(), rel, -&c.rhs)
                } else {
                    (row, c.relation, c.rhs.clone())
                }
            })
            .collect();

        let slack_count = normalized.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
        let artificial_count = normalized.iter().filter(|(_, r, _)| *r != Relation::LessEq).count();
        let artificial_start = structural + slack_count;
        let ncols = artificial_start + artificial_count;

        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let (mut slack, mut art) = (structural, artificial_start);
        for (coeffs, rel, rhs) in normalized {
            let mut row = coeffs;
            row.resize(ncols + 1, Rational::zero());
            match rel {
                Relation::LessEq => {
                    row[slack] = Rational::from_integer(1.into());
                    basis.push(slack);
                    slack += 1;
                }
                Relation::GreaterEq => {
                    row[slack] = Rational::from_integer((-1).into());
                    slack += 1;
                    row[art] = Rational::from_integer(1.into());
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = Rational::from_integer(1.into());
                    basis.push(art);
                    art += 1;
                }
            }
            row[ncols] = rhs;
            rows.push(row);
        }
        Tableau { rows, basis, ncols, var_cols, artificial_start }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximises `cost . x` over columns `< allowed`. Returns false if unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> bool {
        loop {
            let mut entering = None;
            for j in 0..allowed {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut reduced = cost[j].clone();
                for (row, &b) in self.rows.iter().zip(&self.basis) {
                    if !cost[b].is_zero() && !row[j].is_zero() {
                        reduced -= &cost[b] * &row[j];
                    }
                }
                if reduced.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else {
                return true;
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[self.ncols] / &row[c];
                let better = match &leaving {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((r, _)) = leaving else {
                return false;
            };
            self.pivot(r, c);
        }
    }

    fn objective_value(&self, cost: &[Rational]) -> Rational {
        self.rows.iter().zip(&self.basis).map(|(row, &b)| &cost[b] * &row[self.ncols]).sum()
    }

    fn solve(mut self, lp: &LpProblem) -> LpResult {
        // Phase one: drive the artificial variables to zero.
        if self.artificial_start < self.ncols {
            let mut cost = vec![Rational::zero(); self.ncols];
            for c in cost.iter_mut().skip(self.artificial_start) {
                *c = Rational::from_integer((-1).into());
            }
            self.optimize(&cost, self.ncols);
            if self.objective_value(&cost).is_negative() {
                return LpResult::Infeasible;
            }
            let mut r = 0;
            while r < self.rows.len() {
                if self.basis[r] >= self.artificial_start {
                    match (0..self.artificial_start).find(|&j| !self.rows[r][j].is_zero()) {
                        Some(j) => self.pivot(r, j),
                        None => {
                            // redundant row
                            self.rows.remove(r);
                            self.basis.remove(r);
                            continue;
                        }
                    }
                }
                r += 1;
            }
        }

        let mut cost = vec![Rational::zero(); self.ncols];
        for (j, a) in lp.objective.iter().enumerate() {
            let a = match lp.sense {
                Sense::Maximize => a.clone(),
                Sense::Minimize => -a,
            };
            let (p, n) = self.var_cols[j];
            if let Some(n) = n {
                cost[n] = -&a;
            }
            cost[p] = a;
        }
        if !self.optimize(&cost, self.artificial_start) {
            return LpResult::Unbounded;
        }

        let mut col_values = vec![Rational::zero(); self.ncols];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            col_values[b] = row[self.ncols].clone();
        }
        let point: Vec<Rational> = self
            .var_cols
            .iter()
            .map(|&(p, n)| match n {
                Some(n) => &col_values[p] - &col_values[n],
                None => col_values[p].clone(),
            })
            .collect();
        let value = lp.objective.iter().zip(&point).map(|(a, x)| a * x).sum();
        LpResult::Optimal { value, point }
    }
}
