//! Floating-point twin of the exact simplex. Same layout (one artificial per
//! row, Dantzig pricing, Bland after a degenerate stall), `f64` arithmetic
//! with tolerances and periodic refactorization. Its answers are only hints:
//! the basis it ends on is handed to the exact solver.

use num_traits::ToPrimitive;

use super::{BasicVar, LpStatus, SparseColumn, StandardLp, BLAND_AFTER};
use crate::numeric::Rational;

const PRIMAL_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    One,
    Two,
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug)]
pub struct FloatSimplex {
    b: Vec<f64>,
    sign: Vec<f64>,
    columns: Vec<Vec<(usize, f64)>>,
    costs: Vec<f64>,
    basis: Vec<BasicVar>,
    basic_row: Vec<Option<usize>>,
    binv: Vec<Vec<f64>>,
    xb: Vec<f64>,
    since_refactor: usize,
    pivots: usize,
    status: Option<LpStatus>,
}

impl FloatSimplex {
    pub fn new(lp: &StandardLp) -> Self {
        let m = lp.rows();
        let b: Vec<f64> = lp.rhs().iter().map(to_f64).collect();
        let sign: Vec<f64> = b.iter().map(|v| if *v < 0.0 { -1.0 } else { 1.0 }).collect();
        let mut s = FloatSimplex {
            xb: b.iter().map(|v| v.abs()).collect(),
            binv: (0..m).map(|r| (0..m).map(|c| if r == c { sign[r] } else { 0.0 }).collect()).collect(),
            b,
            sign,
            columns: Vec::new(),
            costs: Vec::new(),
            basis: (0..m).map(BasicVar::Artificial).collect(),
            basic_row: Vec::new(),
            since_refactor: 0,
            pivots: 0,
            status: None,
        };
        for j in 0..lp.cols() {
            s.add_column(lp.column(j), lp.cost(j));
        }
        s
    }

    pub fn add_column(&mut self, column: &SparseColumn, cost: &Rational) {
        self.columns.push(column.iter().map(|(r, v)| (*r, to_f64(v))).collect());
        self.costs.push(to_f64(cost));
        self.basic_row.push(None);
        if self.status == Some(LpStatus::Optimal) {
            self.status = None;
        }
    }

    pub fn pivots(&self) -> usize {
        self.pivots
    }

    /// Basic variable of each basis position.
    pub fn basis(&self) -> &[BasicVar] {
        &self.basis
    }

    pub fn primal(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.columns.len()];
        for (v, xb) in self.basis.iter().zip(&self.xb) {
            if let BasicVar::Column(j) = v {
                x[*j] = *xb;
            }
        }
        x
    }

    pub fn value(&self) -> f64 {
        self.primal().iter().zip(&self.costs).map(|(x, c)| x * c).sum()
    }

    /// Phase II duals `c_B B^{-1}`.
    pub fn duals(&self) -> Vec<f64> {
        self.working_duals(Phase::Two)
    }

    pub fn solve(&mut self) -> LpStatus {
        if self.artificial_mass() > PRIMAL_TOL {
            self.run(Phase::One);
            if self.artificial_mass() > PRIMAL_TOL {
                self.status = Some(LpStatus::Infeasible);
                return LpStatus::Infeasible;
            }
        }
        let status = self.run(Phase::Two);
        self.status = Some(status);
        status
    }

    fn artificial_mass(&self) -> f64 {
        self.basis
            .iter()
            .zip(&self.xb)
            .filter(|(v, _)| matches!(v, BasicVar::Artificial(_)))
            .map(|(_, x)| x.max(0.0))
            .sum()
    }

    fn var_cost(&self, v: BasicVar, phase: Phase) -> f64 {
        match (v, phase) {
            (BasicVar::Artificial(_), Phase::One) => 1.0,
            (BasicVar::Artificial(_), Phase::Two) => 0.0,
            (BasicVar::Column(_), Phase::One) => 0.0,
            (BasicVar::Column(j), Phase::Two) => self.costs[j],
        }
    }

    fn working_duals(&self, phase: Phase) -> Vec<f64> {
        let m = self.b.len();
        let mut y = vec![0.0; m];
        for (i, v) in self.basis.iter().enumerate() {
            let cb = self.var_cost(*v, phase);
            if cb != 0.0 {
                for (yr, bir) in y.iter_mut().zip(&self.binv[i]) {
                    *yr += cb * bir;
                }
            }
        }
        y
    }

    fn reduced_cost(&self, j: usize, y: &[f64], phase: Phase) -> f64 {
        let c = if phase == Phase::One { 0.0 } else { self.costs[j] };
        self.columns[j].iter().fold(c, |acc, (r, a)| acc - y[*r] * a)
    }

    fn ftran(&self, j: usize) -> Vec<f64> {
        self.binv
            .iter()
            .map(|row| self.columns[j].iter().map(|(r, a)| row[*r] * a).sum())
            .collect()
    }

    fn basic_column(&self, v: BasicVar) -> Vec<(usize, f64)> {
        match v {
            BasicVar::Column(j) => self.columns[j].clone(),
            BasicVar::Artificial(r) => vec![(r, self.sign[r])],
        }
    }

    /// Recomputes `B^{-1}` and `x_B` from scratch by Gauss-Jordan elimination
    /// with partial pivoting. Returns false if the basis looks singular.
    fn refactor(&mut self) -> bool {
        let m = self.b.len();
        let mut a = vec![vec![0.0; 2 * m]; m];
        for (c, v) in self.basis.iter().enumerate() {
            for (r, val) in self.basic_column(*v) {
                a[r][c] = val;
            }
        }
        for (r, row) in a.iter_mut().enumerate() {
            row[m + r] = 1.0;
        }
        for col in 0..m {
            let p = (col..m)
                .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
                .expect("non-empty");
            if a[p][col].abs() < 1e-12 {
                return false;
            }
            a.swap(p, col);
            let inv = 1.0 / a[col][col];
            a[col].iter_mut().for_each(|v| *v *= inv);
            let pivot_row = a[col].clone();
            for (r, row) in a.iter_mut().enumerate() {
                let f = row[col];
                if r != col && f != 0.0 {
                    row.iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= f * p);
                }
            }
        }
        // Row `i` of the reduced matrix is row `i` of `B^{-1}` because basis
        // position `i` is column `i` of `B`.
        self.binv = a.into_iter().map(|row| row[m..].to_vec()).collect();
        self.xb = self
            .binv
            .iter()
            .map(|row| row.iter().zip(&self.b).map(|(u, v)| u * v).sum::<f64>().max(0.0))
            .collect();
        self.since_refactor = 0;
        true
    }

    fn pivot(&mut self, row: usize, entering: usize, alpha: &[f64]) {
        let inv = 1.0 / alpha[row];
        self.binv[row].iter_mut().for_each(|v| *v *= inv);
        self.xb[row] *= inv;
        let prow = self.binv[row].clone();
        let xr = self.xb[row];
        for (i, a) in alpha.iter().enumerate() {
            if i == row || *a == 0.0 {
                continue;
            }
            self.binv[i].iter_mut().zip(&prow).for_each(|(v, p)| *v -= a * p);
            self.xb[i] = (self.xb[i] - a * xr).max(0.0);
        }
        if let BasicVar::Column(old) = self.basis[row] {
            self.basic_row[old] = None;
        }
        self.basis[row] = BasicVar::Column(entering);
        self.basic_row[entering] = Some(row);
        self.pivots += 1;
        self.since_refactor += 1;
        if self.since_refactor >= REFACTOR_EVERY {
            let saved = (self.binv.clone(), self.xb.clone());
            if !self.refactor() {
                (self.binv, self.xb) = saved;
            }
        }
    }

    fn run(&mut self, phase: Phase) -> LpStatus {
        let patience = BLAND_AFTER + 4 * self.b.len();
        let mut degenerate_run = 0usize;
        loop {
            let y = self.working_duals(phase);
            let bland = degenerate_run >= patience;
            let mut entering: Option<(usize, f64)> = None;
            for j in 0..self.columns.len() {
                if self.basic_row[j].is_some() {
                    continue;
                }
                let d = self.reduced_cost(j, &y, phase);
                if d >= -DUAL_TOL {
                    continue;
                }
                if bland {
                    entering = Some((j, d));
                    break;
                }
                if entering.is_none_or(|(_, best)| d < best) {
                    entering = Some((j, d));
                }
            }
            let Some((q, _)) = entering else {
                return LpStatus::Optimal;
            };
            let alpha = self.ftran(q);
            let stuck = (phase == Phase::Two)
                .then(|| {
                    (0..alpha.len())
                        .filter(|&i| {
                            matches!(self.basis[i], BasicVar::Artificial(_))
                                && self.xb[i] <= PRIMAL_TOL
                                && alpha[i].abs() > PIVOT_TOL
                        })
                        .min_by_key(|&i| self.basis[i])
                })
                .flatten();
            // Harris ratio test: the loosest bound first, then the largest
            // pivot among rows within it.
            let leaving = stuck.or_else(|| {
                let bound = alpha
                    .iter()
                    .zip(&self.xb)
                    .filter(|(a, _)| **a > PIVOT_TOL)
                    .map(|(a, x)| (x + PRIMAL_TOL) / a)
                    .min_by(f64::total_cmp)?;
                (0..alpha.len())
                    .filter(|&i| alpha[i] > PIVOT_TOL && self.xb[i] / alpha[i] <= bound)
                    .max_by(|&i, &j| {
                        if bland {
                            self.basis[j].cmp(&self.basis[i])
                        } else {
                            alpha[i].total_cmp(&alpha[j])
                        }
                    })
            });
            let Some(row) = leaving else {
                return LpStatus::Unbounded;
            };
            if self.xb[row] <= PRIMAL_TOL {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(row, q, &alpha);
        }
    }
}
