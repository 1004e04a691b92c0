//! Dense two-phase simplex with Bland's rule.
//!
//! Problems here are tiny (at most a few hundred columns), so the solver keeps
//! a full tableau, including the artificial columns, for the whole run. Their
//! phase-one reduced costs give the Farkas multipliers when the program is
//! infeasible.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

impl<T> Constraint<T> {
    pub fn new(coeffs: Vec<T>, relation: Relation, rhs: T) -> Self {
        Self {
            coeffs,
            relation,
            rhs,
        }
    }
}

/// `minimize c^T x` subject to the constraints and `x >= 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram<T> {
    num_vars: usize,
    objective: Vec<T>,
    constraints: Vec<Constraint<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<T> {
    Optimal {
        x: Vec<T>,
        value: T,
    },
    /// `y` with `sum_i y_i a_i <= 0` componentwise, `y_i <= 0` on `Le` rows,
    /// `y_i >= 0` on `Ge` rows and `b^T y > 0`.
    Infeasible {
        farkas: Vec<T>,
        phase_one_value: T,
    },
    Unbounded,
}

#[derive(Debug, Clone, Copy)]
pub struct LpOptions {
    pub max_iterations: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self {
            max_iterations: 50_000,
        }
    }
}

impl<T: Real> LinearProgram<T> {
    pub fn new(num_vars: usize, objective: Vec<T>) -> Self {
        assert_eq!(objective.len(), num_vars, "objective length");
        Self {
            num_vars,
            objective,
            constraints: Vec::new(),
        }
    }

    /// Pure feasibility problem (zero objective).
    pub fn feasibility(num_vars: usize) -> Self {
        Self::new(num_vars, vec![T::zero(); num_vars])
    }

    pub fn add(&mut self, constraint: Constraint<T>) -> &mut Self {
        assert_eq!(constraint.coeffs.len(), self.num_vars, "constraint width");
        self.constraints.push(constraint);
        self
    }

    pub fn constraints(&self) -> &[Constraint<T>] {
        &self.constraints
    }

    pub fn solve(&self, options: LpOptions) -> Result<LpOutcome<T>> {
        let mut tableau = Tableau::build(self, options.max_iterations);
        let mut budget = options.max_iterations;

        // phase one
        tableau.set_phase_one_costs();
        match tableau.run(|_| true, &mut budget)? {
            Run::Optimal => {}
            Run::Unbounded => unreachable!("phase one is bounded below by zero"),
        }
        let w = tableau.objective_value();
        let b_norm = tableau.rhs_norm();
        if w > T::decision_tol() * T::one().max(b_norm) {
            let farkas = (0..tableau.rows)
                .map(|i| tableau.sign[i] * (T::one() - tableau.cost[tableau.art_col(i)]))
                .collect();
            return Ok(LpOutcome::Infeasible {
                farkas,
                phase_one_value: w,
            });
        }

        // phase two
        tableau.drive_out_artificials();
        tableau.set_costs(&self.objective);
        let first_art = tableau.first_art;
        match tableau.run(|j| j < first_art, &mut budget)? {
            Run::Unbounded => Ok(LpOutcome::Unbounded),
            Run::Optimal => {
                let x = tableau.structural_solution(self.num_vars);
                let value = x
                    .iter()
                    .zip(&self.objective)
                    .map(|(&a, &b)| a * b)
                    .sum();
                Ok(LpOutcome::Optimal { x, value })
            }
        }
    }
}

enum Run {
    Optimal,
    Unbounded,
}

struct Tableau<T> {
    rows: usize,
    cols: usize,
    first_art: usize,
    /// row-major `rows x (cols + 1)`, last column is the right-hand side
    data: Vec<T>,
    basis: Vec<usize>,
    cost: Vec<T>,
    objective: Vec<T>,
    /// `-1` where the row was negated to make its right-hand side nonnegative
    sign: Vec<T>,
    tol: T,
    cap: usize,
}

impl<T: Real> Tableau<T> {
    fn build(lp: &LinearProgram<T>, cap: usize) -> Self {
        let rows = lp.constraints.len();
        let slack_count = lp
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        let first_art = lp.num_vars + slack_count;
        let cols = first_art + rows;
        let width = cols + 1;
        let mut data = vec![T::zero(); rows * width];
        let mut sign = vec![T::one(); rows];
        let mut slack = lp.num_vars;
        for (i, c) in lp.constraints.iter().enumerate() {
            let row = &mut data[i * width..(i + 1) * width];
            row[..lp.num_vars].copy_from_slice(&c.coeffs);
            match c.relation {
                Relation::Le => {
                    row[slack] = T::one();
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -T::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            row[cols] = c.rhs;
            if c.rhs < T::zero() {
                sign[i] = -T::one();
                for v in row[..first_art].iter_mut() {
                    *v = -*v;
                }
                row[cols] = -row[cols];
            }
            row[first_art + i] = T::one();
        }
        Self {
            rows,
            cols,
            first_art,
            data,
            basis: (first_art..cols).collect(),
            cost: vec![T::zero(); cols],
            objective: vec![T::zero(); cols],
            sign,
            tol: T::lit(T::PIVOT_TOL),
            cap,
        }
    }

    #[inline]
    fn at(&self, r: usize, c: usize) -> T {
        self.data[r * (self.cols + 1) + c]
    }

    #[inline]
    fn rhs(&self, r: usize) -> T {
        self.at(r, self.cols)
    }

    fn art_col(&self, row: usize) -> usize {
        self.first_art + row
    }

    fn rhs_norm(&self) -> T {
        (0..self.rows).map(|r| self.rhs(r).abs()).sum()
    }

    fn set_phase_one_costs(&mut self) {
        let mut c = vec![T::zero(); self.cols];
        for v in c[self.first_art..].iter_mut() {
            *v = T::one();
        }
        self.set_full_costs(c);
    }

    fn set_costs(&mut self, structural: &[T]) {
        let mut c = vec![T::zero(); self.cols];
        c[..structural.len()].copy_from_slice(structural);
        self.set_full_costs(c);
    }

    /// Reduced costs `d = c - c_B B^{-1} A` for the current basis.
    fn set_full_costs(&mut self, c: Vec<T>) {
        let mut d = c.clone();
        for r in 0..self.rows {
            let cb = c[self.basis[r]];
            if cb == T::zero() {
                continue;
            }
            for (j, dj) in d.iter_mut().enumerate() {
                *dj = *dj - cb * self.at(r, j);
            }
        }
        self.cost = d;
        self.objective = c;
    }

    fn objective_value(&self) -> T {
        (0..self.rows)
            .map(|r| self.objective[self.basis[r]] * self.rhs(r))
            .sum()
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let width = self.cols + 1;
        let p = self.at(r, c);
        for j in 0..width {
            self.data[r * width + j] = self.data[r * width + j] / p;
        }
        let pivot_row: Vec<T> = self.data[r * width..(r + 1) * width].to_vec();
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.data[i * width + c];
            if f == T::zero() {
                continue;
            }
            for j in 0..width {
                self.data[i * width + j] = self.data[i * width + j] - f * pivot_row[j];
            }
            self.data[i * width + c] = T::zero();
        }
        let f = self.cost[c];
        if f != T::zero() {
            for j in 0..self.cols {
                self.cost[j] = self.cost[j] - f * pivot_row[j];
            }
            self.cost[c] = T::zero();
        }
        self.basis[r] = c;
    }

    /// Bland's rule: lowest-index improving column, lowest-index basic variable among ratio ties.
    fn run(&mut self, allowed: impl Fn(usize) -> bool, budget: &mut usize) -> Result<Run> {
        loop {
            let entering = (0..self.cols).find(|&j| allowed(j) && self.cost[j] < -self.tol);
            let Some(c) = entering else {
                return Ok(Run::Optimal);
            };
            let mut leaving: Option<(usize, T)> = None;
            for r in 0..self.rows {
                let a = self.at(r, c);
                if a <= self.tol {
                    continue;
                }
                let ratio = self.rhs(r).max(T::zero()) / a;
                leaving = match leaving {
                    None => Some((r, ratio)),
                    Some((br, bratio)) => {
                        let slack = self.tol * T::one().max(bratio.abs());
                        if ratio < bratio - slack
                            || (ratio <= bratio + slack && self.basis[r] < self.basis[br])
                        {
                            Some((r, ratio))
                        } else {
                            Some((br, bratio))
                        }
                    }
                };
            }
            let Some((r, _)) = leaving else {
                return Ok(Run::Unbounded);
            };
            if *budget == 0 {
                return Err(Error::IterationLimit(self.cap));
            }
            *budget -= 1;
            self.pivot(r, c);
        }
    }

    fn drive_out_artificials(&mut self) {
        for r in 0..self.rows {
            if self.basis[r] < self.first_art {
                continue;
            }
            let candidate = (0..self.first_art)
                .filter(|&j| self.at(r, j).abs() > self.tol)
                .max_by(|&a, &b| {
                    self.at(r, a)
                        .abs()
                        .partial_cmp(&self.at(r, b).abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            if let Some(c) = candidate {
                self.pivot(r, c);
            }
            // otherwise the row is redundant and its artificial stays basic at zero
        }
    }

    fn structural_solution(&self, n: usize) -> Vec<T> {
        let mut x = vec![T::zero(); n];
        for r in 0..self.rows {
            if self.basis[r] < n {
                x[self.basis[r]] = self.rhs(r).max(T::zero());
            }
        }
        x
    }
}
