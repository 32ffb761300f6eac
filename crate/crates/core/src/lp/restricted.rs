//! The multimarginal transport LP restricted to a set of tuples.
//!
//! One row per `(marginal i, atom j)` with right-hand side `[mu_i]_j`; one
//! column per tuple with a 1 in each of its `k` rows and the tuple's cost.

use num_traits::One;

use super::{LpSolution, LpStatus, SparseColumn, StandardLp};
use crate::error::{Error, Result};
use crate::model::{BarycenterInstance, DualPotentials, IndexTuple};
use crate::oracle::tuple_cost;

/// Maps `(i, j)` to a row and back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowMap {
    offsets: Vec<usize>,
    sizes: Vec<usize>,
}

impl RowMap {
    pub fn new(inst: &BarycenterInstance) -> Self {
        let sizes = inst.sizes();
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for &n in &sizes {
            offsets.push(acc);
            acc += n;
        }
        RowMap { offsets, sizes }
    }

    pub fn row(&self, i: usize, j: usize) -> usize {
        self.offsets[i] + j
    }

    pub fn rows(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn column(&self, tuple: &IndexTuple) -> SparseColumn {
        tuple
            .iter()
            .enumerate()
            .map(|(i, j)| (self.row(i, j), crate::numeric::Rational::one()))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct RestrictedMot {
    pub lp: StandardLp,
    /// Column `c` of `lp` is `tuples[c]`.
    pub tuples: Vec<IndexTuple>,
    pub rows: RowMap,
}

pub fn build_restricted_mot(tuples: &[IndexTuple], inst: &BarycenterInstance) -> Result<RestrictedMot> {
    if tuples.is_empty() {
        return Err(Error::InvalidInstance("restricted tuple set is empty".into()));
    }
    let rows = RowMap::new(inst);
    let b = inst
        .measures()
        .iter()
        .flat_map(|m| m.masses().iter().cloned())
        .collect();
    let mut lp = StandardLp::new(b);
    for t in tuples {
        lp.push_column(rows.column(t), tuple_cost(t, inst)?)?;
    }
    Ok(RestrictedMot {
        lp,
        tuples: tuples.to_vec(),
        rows,
    })
}

/// Reads `[p_i]_j` off the dual value of row `(i, j)`.
pub fn duals_to_potentials(sol: &LpSolution, rows: &RowMap) -> Result<DualPotentials> {
    if sol.status != LpStatus::Optimal {
        return Err(Error::NotOptimal(sol.status));
    }
    if sol.dual.len() != rows.rows() {
        return Err(Error::LengthMismatch {
            left: sol.dual.len(),
            right: rows.rows(),
        });
    }
    Ok(DualPotentials {
        p: rows
            .sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| (0..n).map(|j| sol.dual[rows.row(i, j)].clone()).collect())
            .collect(),
    })
}
