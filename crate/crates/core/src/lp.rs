//! Exact primal simplex for `min c.x  s.t.  A x = b, x >= 0`.
//!
//! Revised form: the solver keeps an explicit dense basis inverse and prices
//! columns from the duals, so a column costs one sparse dot product until it
//! enters. Entering columns follow Dantzig's rule, ties in the ratio test are
//! broken lexicographically, and a long degenerate stall hands over to Bland's
//! rule, so the solver never cycles. Phase I starts from one artificial per
//! row; artificials left basic at zero on redundant rows stay there for good.
//!
//! [`Simplex`] can be re-solved after appending columns. The previous basis is
//! still primal feasible, so only Phase II runs again.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::Rational;
use scalar::Scalar;

pub mod float;
pub mod restricted;
mod scalar;

pub use restricted::{build_restricted_mot, duals_to_potentials, RestrictedMot, RowMap};

/// Sparse column: `(row, coefficient)` pairs with non-zero coefficients.
pub type SparseColumn = Vec<(usize, Rational)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardLp {
    rows: usize,
    columns: Vec<SparseColumn>,
    b: Vec<Rational>,
    c: Vec<Rational>,
}

impl StandardLp {
    /// No columns yet.
    pub fn new(b: Vec<Rational>) -> Self {
        StandardLp {
            rows: b.len(),
            columns: Vec::new(),
            b,
            c: Vec::new(),
        }
    }

    /// From a row-major dense matrix.
    pub fn from_dense(a: &[Vec<Rational>], b: Vec<Rational>, c: Vec<Rational>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch {
                left: a.len(),
                right: b.len(),
            });
        }
        let mut lp = StandardLp::new(b);
        for (j, cost) in c.into_iter().enumerate() {
            let mut col = Vec::new();
            for (r, row) in a.iter().enumerate() {
                let v = row.get(j).ok_or(Error::LengthMismatch {
                    left: row.len(),
                    right: j + 1,
                })?;
                if !v.is_zero() {
                    col.push((r, v.clone()));
                }
            }
            lp.push_column(col, cost)?;
        }
        Ok(lp)
    }

    pub fn push_column(&mut self, column: SparseColumn, cost: Rational) -> Result<usize> {
        if let Some(&(r, _)) = column.iter().find(|(r, _)| *r >= self.rows) {
            return Err(Error::IndexOutOfRange {
                index: r,
                limit: self.rows,
            });
        }
        self.columns.push(column.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        self.c.push(cost);
        Ok(self.columns.len() - 1)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &SparseColumn {
        &self.columns[j]
    }

    pub fn cost(&self, j: usize) -> &Rational {
        &self.c[j]
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.b
    }

    /// `A x`.
    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.rows];
        for (col, xj) in self.columns.iter().zip(x) {
            if xj.is_zero() {
                continue;
            }
            for (r, a) in col {
                out[*r] += a * xj;
            }
        }
        out
    }

    /// `c_j - y . A_j`.
    pub fn reduced_cost(&self, j: usize, dual: &[Rational]) -> Rational {
        self.columns[j]
            .iter()
            .fold(self.c[j].clone(), |acc, (r, a)| acc - &dual[*r] * a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Basic feasible point (zeros unless optimal).
    pub primal: Vec<Rational>,
    /// One value per row.
    pub dual: Vec<Rational>,
    pub value: Rational,
    /// Structural columns in the basis, in row order.
    pub basis: Vec<usize>,
    pub pivots: usize,
}

/// Solves from scratch.
pub fn simplex_solve(lp: &StandardLp) -> LpSolution {
    let mut s = Simplex::new(lp.clone());
    s.solve()
}

/// Consecutive degenerate pivots tolerated, beyond a multiple of the row
/// count, before switching to Bland's rule.
const BLAND_AFTER: usize = 100;

/// Basic variable: a structural column or the artificial of a row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BasicVar {
    Column(usize),
    Artificial(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    One,
    Two,
}

/// Persistent simplex state for column generation.
#[derive(Clone, Debug)]
pub struct Simplex {
    lp: StandardLp,
    columns: Vec<Vec<(usize, Scalar)>>,
    costs: Vec<Scalar>,
    basis: Vec<BasicVar>,
    /// Row of each basic structural column.
    basic_row: Vec<Option<usize>>,
    binv: Vec<Vec<Scalar>>,
    xb: Vec<Scalar>,
    pivots: usize,
    status: Option<LpStatus>,
}

impl Simplex {
    pub fn new(lp: StandardLp) -> Self {
        let m = lp.rows;
        // The artificial of row `r` has coefficient `sign(b_r)`, so it starts
        // at `|b_r|`.
        let xb = lp.b.iter().map(|v| Scalar::from(&v.abs())).collect();
        let binv = (0..m)
            .map(|r| {
                (0..m)
                    .map(|c| match (r == c, lp.b[r].is_negative()) {
                        (false, _) => Scalar::zero(),
                        (true, false) => Scalar::one(),
                        (true, true) => -&Scalar::one(),
                    })
                    .collect()
            })
            .collect();
        let columns = lp
            .columns
            .iter()
            .map(|col| col.iter().map(|(r, v)| (*r, Scalar::from(v))).collect())
            .collect();
        let costs = lp.c.iter().map(Scalar::from).collect();
        Simplex {
            basic_row: vec![None; lp.cols()],
            basis: (0..m).map(BasicVar::Artificial).collect(),
            columns,
            costs,
            lp,
            binv,
            xb,
            pivots: 0,
            status: None,
        }
    }

    /// Starts from the given basis instead of the artificial one: `basis[i]`
    /// is the variable of position `i`. `None` unless the basis is square,
    /// non-singular and primal feasible.
    pub fn from_basis(lp: StandardLp, basis: &[BasicVar]) -> Option<Self> {
        let mut s = Simplex::new(lp);
        let m = s.lp.rows;
        if basis.len() != m {
            return None;
        }
        let mut a: Vec<Vec<Scalar>> = vec![vec![Scalar::zero(); 2 * m]; m];
        for (c, v) in basis.iter().enumerate() {
            match *v {
                BasicVar::Column(j) => {
                    for (r, val) in s.columns.get(j)? {
                        a[*r][c] = val.clone();
                    }
                }
                BasicVar::Artificial(r) if r < m => {
                    a[r][c] = if s.lp.b[r].is_negative() { -&Scalar::one() } else { Scalar::one() };
                }
                BasicVar::Artificial(_) => return None,
            }
        }
        for (r, row) in a.iter_mut().enumerate() {
            row[m + r] = Scalar::one();
        }
        for col in 0..m {
            let p = (col..m).find(|&r| !a[r][col].is_zero())?;
            a.swap(p, col);
            let inv = a[col][col].recip();
            for v in a[col].iter_mut().filter(|v| !v.is_zero()) {
                *v = &*v * &inv;
            }
            let nz: Vec<usize> = (0..2 * m).filter(|&c| !a[col][c].is_zero()).collect();
            let pivot_row = a[col].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r == col || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for &c in &nz {
                    row[c] = &row[c] - &(&f * &pivot_row[c]);
                }
            }
        }
        s.binv = a.into_iter().map(|row| row[m..].to_vec()).collect();
        let b: Vec<Scalar> = s.lp.b.iter().map(Scalar::from).collect();
        s.xb = s
            .binv
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&b)
                    .filter(|(u, _)| !u.is_zero())
                    .fold(Scalar::zero(), |acc, (u, v)| &acc + &(u * v))
            })
            .collect();
        if s.xb.iter().any(Scalar::is_negative) {
            return None;
        }
        s.basis = basis.to_vec();
        for (i, v) in basis.iter().enumerate() {
            if let BasicVar::Column(j) = v {
                if s.basic_row[*j].replace(i).is_some() {
                    return None;
                }
            }
        }
        Some(s)
    }

    pub fn lp(&self) -> &StandardLp {
        &self.lp
    }

    /// Appends a column; the current basis stays valid.
    pub fn add_column(&mut self, column: SparseColumn, cost: Rational) -> Result<usize> {
        let scaled = column.iter().map(|(r, v)| (*r, Scalar::from(v))).collect();
        let c = Scalar::from(&cost);
        let j = self.lp.push_column(column, cost)?;
        self.columns.push(scaled);
        self.costs.push(c);
        self.basic_row.push(None);
        if self.status == Some(LpStatus::Optimal) {
            self.status = None;
        }
        Ok(j)
    }

    pub fn solve(&mut self) -> LpSolution {
        if self.artificial_mass().is_positive() {
            self.run(Phase::One);
            if self.artificial_mass().is_positive() {
                self.status = Some(LpStatus::Infeasible);
                return self.solution();
            }
        }
        self.drive_out_artificials();
        let status = self.run(Phase::Two);
        self.status = Some(status);
        self.solution()
    }

    fn artificial_mass(&self) -> Scalar {
        self.basis
            .iter()
            .zip(&self.xb)
            .filter(|(v, _)| matches!(v, BasicVar::Artificial(_)))
            .fold(Scalar::zero(), |acc, (_, x)| &acc + x)
    }

    fn var_cost(&self, v: BasicVar, phase: Phase) -> Scalar {
        match (v, phase) {
            (BasicVar::Artificial(_), Phase::One) => Scalar::one(),
            (BasicVar::Artificial(_), Phase::Two) => Scalar::zero(),
            (BasicVar::Column(_), Phase::One) => Scalar::zero(),
            (BasicVar::Column(j), Phase::Two) => self.costs[j].clone(),
        }
    }

    /// `c_B B^{-1}`.
    fn working_duals(&self, phase: Phase) -> Vec<Scalar> {
        let m = self.lp.rows;
        let mut y = vec![Scalar::zero(); m];
        for (i, v) in self.basis.iter().enumerate() {
            let cb = self.var_cost(*v, phase);
            if cb.is_zero() {
                continue;
            }
            for (yr, bir) in y.iter_mut().zip(&self.binv[i]) {
                if !bir.is_zero() {
                    *yr = &*yr + &(&cb * bir);
                }
            }
        }
        y
    }

    fn reduced_cost(&self, j: usize, y: &[Scalar], phase: Phase) -> Scalar {
        self.columns[j]
            .iter()
            .fold(self.var_cost(BasicVar::Column(j), phase), |acc, (r, a)| {
                if y[*r].is_zero() {
                    acc
                } else {
                    &acc - &(&y[*r] * a)
                }
            })
    }

    /// Compares rows `i` and `j` of `B^{-1}` scaled by `1 / a_i` and `1 / a_j`.
    fn lex_less(&self, i: usize, a_i: &Scalar, j: usize, a_j: &Scalar) -> bool {
        for (u, v) in self.binv[i].iter().zip(&self.binv[j]) {
            if u.is_zero() && v.is_zero() {
                continue;
            }
            match (u * a_j).cmp(&(v * a_i)) {
                Ordering::Less => return true,
                Ordering::Greater => return false,
                Ordering::Equal => {}
            }
        }
        self.basis[i] < self.basis[j]
    }

    /// `B^{-1} A_j`.
    fn ftran(&self, j: usize) -> Vec<Scalar> {
        self.binv
            .iter()
            .map(|row| {
                self.columns[j].iter().fold(Scalar::zero(), |acc, (r, a)| {
                    if row[*r].is_zero() {
                        acc
                    } else {
                        &acc + &(&row[*r] * a)
                    }
                })
            })
            .collect()
    }

    fn pivot(&mut self, row: usize, entering: usize, alpha: &[Scalar]) {
        let inv = alpha[row].recip();
        for v in self.binv[row].iter_mut() {
            if !v.is_zero() {
                *v = &*v * &inv;
            }
        }
        self.xb[row] = &self.xb[row] * &inv;
        let prow = self.binv[row].clone();
        let nz: Vec<usize> = (0..prow.len()).filter(|&c| !prow[c].is_zero()).collect();
        let xr = self.xb[row].clone();
        for (i, a) in alpha.iter().enumerate() {
            if i == row || a.is_zero() {
                continue;
            }
            let target = &mut self.binv[i];
            for &c in &nz {
                target[c] = &target[c] - &(a * &prow[c]);
            }
            if !xr.is_zero() {
                self.xb[i] = &self.xb[i] - &(a * &xr);
            }
        }
        if let BasicVar::Column(old) = self.basis[row] {
            self.basic_row[old] = None;
        }
        self.basis[row] = BasicVar::Column(entering);
        self.basic_row[entering] = Some(row);
        self.pivots += 1;
    }

    fn run(&mut self, phase: Phase) -> LpStatus {
        let mut y = self.working_duals(phase);
        let patience = BLAND_AFTER + 4 * self.lp.rows;
        let mut degenerate_run = 0usize;
        loop {
            // Dantzig's rule with a lexicographic ratio test. After a long run
            // of degenerate pivots Bland's rule takes over until the point
            // moves, which rules out cycling whatever the state of the basis.
            let bland = degenerate_run >= patience;
            let mut entering: Option<(usize, Scalar)> = None;
            for j in 0..self.columns.len() {
                if self.basic_row[j].is_some() {
                    continue;
                }
                let d = self.reduced_cost(j, &y, phase);
                if !d.is_negative() {
                    continue;
                }
                if bland {
                    entering = Some((j, d));
                    break;
                }
                if entering.as_ref().is_none_or(|(_, best)| d < *best) {
                    entering = Some((j, d));
                }
            }
            let Some((q, d_q)) = entering else {
                return LpStatus::Optimal;
            };
            let alpha = self.ftran(q);

            // An artificial sitting at zero leaves as soon as it can, whatever
            // the sign of its entry; this keeps it at zero.
            let stuck = (phase == Phase::Two)
                .then(|| {
                    (0..alpha.len())
                        .filter(|&i| {
                            matches!(self.basis[i], BasicVar::Artificial(_)) && !alpha[i].is_zero()
                        })
                        .min_by_key(|&i| self.basis[i])
                })
                .flatten();
            let leaving = stuck.or_else(|| {
                let mut best: Option<(usize, Scalar)> = None;
                for (i, a) in alpha.iter().enumerate() {
                    if !a.is_positive() {
                        continue;
                    }
                    let ratio = &self.xb[i] / a;
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => match ratio.cmp(br) {
                            Ordering::Less => true,
                            Ordering::Greater => false,
                            Ordering::Equal if bland => self.basis[i] < self.basis[*bi],
                            Ordering::Equal => self.lex_less(i, a, *bi, &alpha[*bi]),
                        },
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
                best.map(|(i, _)| i)
            });
            let Some(row) = leaving else {
                return LpStatus::Unbounded;
            };
            if self.xb[row].is_zero() {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(row, q, &alpha);
            let prow = &self.binv[row];
            for (yr, p) in y.iter_mut().zip(prow) {
                if !p.is_zero() {
                    *yr = &*yr + &(&d_q * p);
                }
            }
        }
    }

    /// Pivots zero-level artificials out wherever some structural column has a
    /// non-zero entry in their row.
    fn drive_out_artificials(&mut self) {
        for row in 0..self.lp.rows {
            if !matches!(self.basis[row], BasicVar::Artificial(_)) {
                continue;
            }
            debug_assert!(self.xb[row].is_zero());
            let binv_row = &self.binv[row];
            let candidate = (0..self.columns.len()).find(|&j| {
                self.basic_row[j].is_none()
                    && !self.columns[j]
                        .iter()
                        .fold(Scalar::zero(), |acc, (r, a)| &acc + &(&binv_row[*r] * a))
                        .is_zero()
            });
            if let Some(j) = candidate {
                let alpha = self.ftran(j);
                self.pivot(row, j, &alpha);
            }
        }
    }

    /// Snapshot of the current basis as a solution.
    pub fn solution(&self) -> LpSolution {
        let status = self.status.unwrap_or(LpStatus::Infeasible);
        let n = self.lp.cols();
        let mut primal = vec![Rational::zero(); n];
        let mut basis = Vec::new();
        if status == LpStatus::Optimal {
            for (i, v) in self.basis.iter().enumerate() {
                if let BasicVar::Column(j) = v {
                    primal[*j] = self.xb[i].to_rational();
                    basis.push(*j);
                }
            }
        }
        // Artificial columns carry the row signs, so `binv` already inverts
        // the basis in the original rows.
        let dual = self.working_duals(Phase::Two).iter().map(Scalar::to_rational).collect();
        let value = primal.iter().zip(&self.lp.c).map(|(x, c)| x * c).sum();
        LpSolution {
            status,
            primal,
            dual,
            value,
            basis,
            pivots: self.pivots,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, ratio};
    use crate::reference::enumerate_vertices;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    fn check_certificate(lp: &StandardLp, sol: &LpSolution) {
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(lp.apply(&sol.primal), lp.rhs());
        assert!(sol.primal.iter().all(|v| !v.is_negative()));
        let dual_obj: Rational = sol.dual.iter().zip(lp.rhs()).map(|(y, b)| y * b).sum();
        assert_eq!(dual_obj, sol.value);
        for j in 0..lp.cols() {
            assert!(!lp.reduced_cost(j, &sol.dual).is_negative());
        }
    }

    #[test]
    fn bland_picks_the_first_column() {
        // min -x1 - x2  s.t.  x1 + x2 + s = 1
        let lp = StandardLp::from_dense(&dense(&[&[1, 1, 1]]), vec![int(1)], vec![int(-1), int(-1), int(0)]).unwrap();
        let sol = simplex_solve(&lp);
        assert_eq!(sol.value, int(-1));
        assert_eq!(sol.primal, vec![int(1), int(0), int(0)]);
        check_certificate(&lp, &sol);
    }

    #[test]
    fn contradictory_equalities_are_infeasible() {
        let lp = StandardLp::from_dense(&dense(&[&[1], &[1]]), vec![int(1), int(2)], vec![int(0)]).unwrap();
        assert_eq!(simplex_solve(&lp).status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_direction_is_reported() {
        // min -x1 s.t. x1 - x2 = 1
        let lp = StandardLp::from_dense(&dense(&[&[1, -1]]), vec![int(1)], vec![int(-1), int(0)]).unwrap();
        assert_eq!(simplex_solve(&lp).status, LpStatus::Unbounded);
    }

    #[test]
    fn negative_right_hand_sides_are_flipped() {
        // -x1 - x2 = -2, x1 - x2 = 0 -> x = (1, 1)
        let lp = StandardLp::from_dense(&dense(&[&[-1, -1], &[1, -1]]), vec![int(-2), int(0)], vec![int(3), int(1)]).unwrap();
        let sol = simplex_solve(&lp);
        assert_eq!(sol.primal, vec![int(1), int(1)]);
        check_certificate(&lp, &sol);
    }

    /// Beale's example: cycles under the textbook largest-coefficient rule.
    #[test]
    fn beale_cycling_instance_terminates() {
        let q = |n, d| ratio(n, d);
        let a = vec![
            vec![int(1), int(0), int(0), q(1, 4), int(-8), int(-1), int(9)],
            vec![int(0), int(1), int(0), q(1, 2), int(-12), q(-1, 2), int(3)],
            vec![int(0), int(0), int(1), int(0), int(0), int(1), int(0)],
        ];
        let b = vec![int(0), int(0), int(1)];
        let c = vec![int(0), int(0), int(0), q(-3, 4), int(20), q(-1, 2), int(6)];
        let lp = StandardLp::from_dense(&a, b, c).unwrap();
        let sol = simplex_solve(&lp);
        let best = enumerate_vertices(&lp)
            .unwrap()
            .iter()
            .map(|x| x.iter().zip(&c_of(&lp)).map(|(a, b)| a * b).sum::<Rational>())
            .min()
            .unwrap();
        assert_eq!(best, q(-5, 4));
        assert_eq!(sol.value, best);
        check_certificate(&lp, &sol);
    }

    fn c_of(lp: &StandardLp) -> Vec<Rational> {
        (0..lp.cols()).map(|j| lp.cost(j).clone()).collect()
    }

    #[test]
    fn redundant_rows_keep_their_artificials() {
        // 2x2 transport: four rows of rank three.
        let a = dense(&[&[1, 1, 0, 0], &[0, 0, 1, 1], &[1, 0, 1, 0], &[0, 1, 0, 1]]);
        let b = vec![ratio(1, 2), ratio(1, 2), ratio(1, 4), ratio(3, 4)];
        let c = vec![int(0), int(1), int(1), int(0)];
        let lp = StandardLp::from_dense(&a, b, c).unwrap();
        let sol = simplex_solve(&lp);
        assert_eq!(sol.value, ratio(1, 4));
        assert!(sol.primal.iter().filter(|v| !v.is_zero()).count() <= 3);
        check_certificate(&lp, &sol);
    }

    #[test]
    fn random_programs_match_vertex_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..60 {
            let m = rng.random_range(1..4);
            let n = rng.random_range(m..7);
            let a: Vec<Vec<Rational>> = (0..m)
                .map(|_| (0..n).map(|_| int(rng.random_range(-3..4))).collect())
                .collect();
            // Right-hand side from a non-negative point keeps most instances feasible.
            let x0: Vec<Rational> = (0..n).map(|_| int(rng.random_range(0..3))).collect();
            let b: Vec<Rational> = a.iter().map(|row| row.iter().zip(&x0).map(|(p, q)| p * q).sum()).collect();
            let c: Vec<Rational> = (0..n).map(|_| int(rng.random_range(0..5))).collect();
            let lp = StandardLp::from_dense(&a, b, c.clone()).unwrap();
            let sol = simplex_solve(&lp);
            let vertices = enumerate_vertices(&lp).unwrap();
            let best = vertices.iter().map(|x| x.iter().zip(&c).map(|(p, q)| p * q).sum::<Rational>()).min();
            match sol.status {
                LpStatus::Optimal => {
                    assert_eq!(Some(sol.value.clone()), best);
                    check_certificate(&lp, &sol);
                }
                LpStatus::Infeasible => assert!(vertices.is_empty()),
                LpStatus::Unbounded => panic!("non-negative costs cannot be unbounded"),
            }
        }
    }

    #[test]
    fn warm_start_after_adding_columns() {
        let a = dense(&[&[1, 1, 0, 0], &[0, 0, 1, 1], &[1, 0, 1, 0], &[0, 1, 0, 1]]);
        let b = vec![ratio(1, 2), ratio(1, 2), ratio(1, 2), ratio(1, 2)];
        let full = StandardLp::from_dense(&a, b.clone(), vec![int(5), int(1), int(1), int(5)]).unwrap();
        let mut lp = StandardLp::new(b);
        lp.push_column(full.column(0).clone(), int(5)).unwrap();
        lp.push_column(full.column(3).clone(), int(5)).unwrap();
        let mut s = Simplex::new(lp);
        assert_eq!(s.solve().value, int(5));
        s.add_column(full.column(1).clone(), int(1)).unwrap();
        s.add_column(full.column(2).clone(), int(1)).unwrap();
        let sol = s.solve();
        assert_eq!(sol.value, int(1));
        check_certificate(s.lp(), &sol);
    }

    #[test]
    fn starts_from_a_given_basis() {
        let a = dense(&[&[1, 1, 0, 0], &[0, 0, 1, 1], &[1, 0, 1, 0], &[0, 1, 0, 1]]);
        let b = vec![ratio(1, 2), ratio(1, 2), ratio(1, 2), ratio(1, 2)];
        let lp = StandardLp::from_dense(&a, b, vec![int(5), int(1), int(1), int(5)]).unwrap();
        // Rank 3: one artificial stays, at zero.
        let basis = [BasicVar::Column(0), BasicVar::Column(3), BasicVar::Column(1), BasicVar::Artificial(3)];
        let mut s = Simplex::from_basis(lp.clone(), &basis).unwrap();
        let sol = s.solve();
        assert_eq!(sol.value, int(1));
        check_certificate(s.lp(), &sol);

        let singular = [BasicVar::Column(0), BasicVar::Column(1), BasicVar::Column(2), BasicVar::Column(3)];
        assert!(Simplex::from_basis(lp.clone(), &singular).is_none());
        assert!(Simplex::from_basis(lp.clone(), &basis[..3]).is_none());
        // With column sums (1/4, 3/4) this basis has x_2 = 1/2 and x_0 = -1/4.
        let skewed = StandardLp::from_dense(
            &a,
            vec![ratio(1, 2), ratio(1, 2), ratio(1, 4), ratio(3, 4)],
            vec![int(5), int(1), int(1), int(5)],
        )
        .unwrap();
        let infeasible = [BasicVar::Column(0), BasicVar::Column(1), BasicVar::Column(2), BasicVar::Artificial(3)];
        assert!(Simplex::from_basis(skewed.clone(), &infeasible).is_none());
        let feasible = [BasicVar::Column(0), BasicVar::Column(1), BasicVar::Column(3), BasicVar::Artificial(2)];
        assert!(Simplex::from_basis(skewed, &feasible).is_some());
    }
}
