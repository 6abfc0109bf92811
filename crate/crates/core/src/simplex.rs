//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Problems have the form `maximize c·x` subject to rows `a_i·x (≤|≥|=) b_i`
//! and `x ≥ 0`. Infeasible problems come back with a Farkas certificate
//! read off the phase-one duals.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub const DEFAULT_PIVOT_CAP: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Row {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rational>,
    rows: Vec<Row>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<Rational>,
        value: Rational,
    },
    /// `y` with `yᵀA ≤ 0` componentwise and `yᵀb > 0`, where `y_i ≤ 0` on
    /// `≤` rows, `y_i ≥ 0` on `≥` rows and free on equality rows. No
    /// `x ≥ 0` can then satisfy the rows.
    Infeasible {
        certificate: Vec<Rational>,
    },
    Unbounded,
}

impl LinearProgram {
    /// A problem in `num_vars` nonnegative variables with a zero objective.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// Sets the coefficients of the objective to be maximized.
    pub fn maximize(&mut self, objective: Vec<Rational>) {
        assert_eq!(objective.len(), self.num_vars);
        self.objective = objective;
    }

    pub fn add_row(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.rows.push(Row {
            coeffs,
            relation,
            rhs,
        });
    }

    /// Sparse convenience form of [`LinearProgram::add_row`].
    pub fn add_sparse_row(
        &mut self,
        terms: &[(usize, Rational)],
        relation: Relation,
        rhs: Rational,
    ) {
        let mut coeffs = vec![Rational::zero(); self.num_vars];
        for (j, c) in terms {
            coeffs[*j] += c;
        }
        self.add_row(coeffs, relation, rhs);
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        self.solve_capped(DEFAULT_PIVOT_CAP)
    }

    pub fn solve_capped(&self, pivot_cap: usize) -> Result<LpOutcome> {
        Tableau::build(self).run(self, pivot_cap)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Column {
    Structural,
    Slack,
    Artificial,
}

struct Tableau {
    /// `m` rows of `columns.len() + 1` entries; the last entry is the rhs.
    cells: Vec<Vec<Rational>>,
    kinds: Vec<Column>,
    basis: Vec<usize>,
    /// Reduced costs of the current phase, plus the negated objective value.
    reduced: Vec<Rational>,
    costs: Vec<Rational>,
    /// Column that formed the identity basis for each row at the start.
    initial_basic: Vec<usize>,
    /// +1 or -1: rows were negated to make the rhs nonnegative.
    row_sign: Vec<i8>,
    pivots: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let m = lp.rows.len();
        let n = lp.num_vars;
        let slack_count = lp
            .rows
            .iter()
            .filter(|r| r.relation != Relation::Eq)
            .count();

        let mut kinds = vec![Column::Structural; n];
        kinds.extend(std::iter::repeat_n(Column::Slack, slack_count));
        let mut cells = vec![Vec::new(); m];
        let mut row_sign = vec![1i8; m];
        let mut initial_basic = vec![0; m];
        let mut slack_col = n;
        let mut needs_artificial = Vec::new();

        let mut slack_entries = Vec::with_capacity(m);
        for (i, row) in lp.rows.iter().enumerate() {
            let flip = row.rhs.is_negative();
            row_sign[i] = if flip { -1 } else { 1 };
            let relation = match (row.relation, flip) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => r,
            };
            let slack = match row.relation {
                Relation::Eq => None,
                _ => {
                    let col = slack_col;
                    slack_col += 1;
                    Some((col, if relation == Relation::Le { 1 } else { -1 }))
                }
            };
            slack_entries.push(slack);
            match (relation, slack) {
                (Relation::Le, Some((col, _))) => initial_basic[i] = col,
                _ => needs_artificial.push(i),
            }
        }

        let first_artificial = kinds.len();
        kinds.extend(std::iter::repeat_n(
            Column::Artificial,
            needs_artificial.len(),
        ));
        for (a, &i) in needs_artificial.iter().enumerate() {
            initial_basic[i] = first_artificial + a;
        }

        let width = kinds.len();
        for (i, row) in lp.rows.iter().enumerate() {
            let sign = Rational::from_integer(row_sign[i].into());
            let mut cells_i = vec![Rational::zero(); width + 1];
            for (j, c) in row.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    cells_i[j] = c * &sign;
                }
            }
            if let Some((col, s)) = slack_entries[i] {
                cells_i[col] = Rational::from_integer(s.into());
            }
            cells_i[initial_basic[i]] = Rational::one();
            cells_i[width] = &row.rhs * &sign;
            cells[i] = cells_i;
        }

        Tableau {
            cells,
            kinds,
            basis: initial_basic.clone(),
            reduced: Vec::new(),
            costs: Vec::new(),
            initial_basic,
            row_sign,
            pivots: 0,
        }
    }

    fn width(&self) -> usize {
        self.kinds.len()
    }

    /// Installs minimization costs and recomputes the reduced-cost row.
    fn set_costs(&mut self, costs: Vec<Rational>) {
        let width = self.width();
        let mut reduced = costs.clone();
        reduced.push(Rational::zero());
        for (i, row) in self.cells.iter().enumerate() {
            let cb = &costs[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for j in 0..=width {
                if !row[j].is_zero() {
                    reduced[j] -= cb * &row[j];
                }
            }
        }
        self.costs = costs;
        self.reduced = reduced;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let width = self.width();
        let inv = self.cells[r][c].recip();
        for j in 0..=width {
            if !self.cells[r][j].is_zero() {
                self.cells[r][j] *= &inv;
            }
        }
        let pivot_row = self.cells[r].clone();
        for (i, row) in self.cells.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for j in 0..=width {
                if !pivot_row[j].is_zero() {
                    row[j] -= &factor * &pivot_row[j];
                }
            }
        }
        if !self.reduced[c].is_zero() {
            let factor = self.reduced[c].clone();
            for j in 0..=width {
                if !pivot_row[j].is_zero() {
                    self.reduced[j] -= &factor * &pivot_row[j];
                }
            }
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Minimizes the installed costs. Returns false when unbounded.
    fn optimize(&mut self, allow_artificial: bool, pivot_cap: usize) -> Result<bool> {
        let width = self.width();
        loop {
            let entering = (0..width).find(|&j| {
                (allow_artificial || self.kinds[j] != Column::Artificial)
                    && self.reduced[j].is_negative()
            });
            let Some(c) = entering else {
                return Ok(true);
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.cells.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[width] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return Ok(false);
            };
            if self.pivots >= pivot_cap {
                return Err(Error::PivotCap(pivot_cap));
            }
            self.pivot(r, c);
        }
    }

    fn run(mut self, lp: &LinearProgram, pivot_cap: usize) -> Result<LpOutcome> {
        let width = self.width();
        let phase_one: Vec<Rational> = self
            .kinds
            .iter()
            .map(|k| {
                if *k == Column::Artificial {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        self.set_costs(phase_one);
        self.optimize(true, pivot_cap)?;

        let infeasibility = -self.reduced[width].clone();
        if infeasibility.is_positive() {
            // y'_r = c_col - d_col for the column that started basic in row r.
            let certificate = (0..self.cells.len())
                .map(|r| {
                    let col = self.initial_basic[r];
                    let y = &self.costs[col] - &self.reduced[col];
                    y * Rational::from_integer(self.row_sign[r].into())
                })
                .collect();
            return Ok(LpOutcome::Infeasible { certificate });
        }

        // Drive zero-level artificials out of the basis where possible.
        for r in 0..self.cells.len() {
            if self.kinds[self.basis[r]] != Column::Artificial {
                continue;
            }
            if let Some(c) = (0..width)
                .find(|&j| self.kinds[j] != Column::Artificial && !self.cells[r][j].is_zero())
            {
                self.pivot(r, c);
            }
        }

        let mut phase_two = vec![Rational::zero(); width];
        for (j, c) in lp.objective.iter().enumerate() {
            phase_two[j] = -c.clone();
        }
        self.set_costs(phase_two);
        if !self.optimize(false, pivot_cap)? {
            return Ok(LpOutcome::Unbounded);
        }

        let mut x = vec![Rational::zero(); lp.num_vars];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < lp.num_vars {
                x[b] = self.cells[r][width].clone();
            }
        }
        let value = lp
            .objective
            .iter()
            .zip(&x)
            .map(|(c, v)| c * v)
            .fold(Rational::zero(), |a, b| a + b);
        Ok(LpOutcome::Optimal { x, value })
    }
}
