//! Pricing oracle: given dual potentials, find the tuple of minimum reduced
//! cost `C_j - sum_i [p_i]_{j_i}` over all `n_1 x ... x n_k` tuples.
//!
//! Swapping the minimization over tuples with the one over the barycentric
//! point `y` shows that only tuples whose cells `E_{1,j_1} ∩ ... ∩ E_{k,j_k}`
//! are non-empty can win, where `E_{i,j}` is the power cell of `x_{i,j}` with
//! weight `[p_i]_j / lambda_i`. Two routes enumerate those tuples:
//!
//! * [`CellStrategy::Overlay`] intersects the `k` clipped power diagrams cell
//!   by cell and keeps every intersection of positive area.
//! * [`CellStrategy::Arrangement`] collects the facet lines of all diagrams,
//!   takes one point in every cell of their arrangement and locates it.
//!
//! Both produce the same tuple set; the overlay route is much cheaper once
//! there are more than a few dozen lines.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{
    enclosing_half_width, enumerate_arrangement_cells_with, locate_tuple, power_diagram_in_box,
    BoundingBox, ConvexPolygon, Line,
};
use crate::model::{BarycenterInstance, DualPotentials, IndexTuple, Point};
use crate::numeric::{Rational, Vec2};
use crate::par::{self, Parallelism};

/// Default cap on exhaustive enumeration.
pub const DEFAULT_BRUTEFORCE_BUDGET: u128 = 1_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CellStrategy {
    #[default]
    Overlay,
    Arrangement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    pub strategy: CellStrategy,
    pub parallelism: Parallelism,
    /// Keep at most this many violated tuples in [`SepResult::violated`].
    pub violated_limit: usize,
    /// Enumeration budget when falling back to brute force (dimension > 2).
    pub bruteforce_budget: u128,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            strategy: CellStrategy::default(),
            parallelism: Parallelism::default(),
            violated_limit: usize::MAX,
            bruteforce_budget: DEFAULT_BRUTEFORCE_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SepResult {
    /// Lexicographically smallest minimizer.
    pub tuple: IndexTuple,
    /// `tuple_cost(tuple) - sum_i [p_i]_{tuple_i}`.
    pub value: Rational,
    /// `sum_i lambda_i x_{i, tuple_i}`, the optimal `y` for the tuple.
    pub witness: Point,
    /// Tuples with negative reduced cost, most violated first, ties broken
    /// lexicographically.
    pub violated: Vec<(IndexTuple, Rational)>,
    /// Number of distinct tuples evaluated.
    pub candidates: usize,
}

/// `w_i = p_i / lambda_i`.
pub fn weights_from_potentials(
    p: &DualPotentials,
    lambda: &[Rational],
) -> Result<Vec<Vec<Rational>>> {
    if p.p.len() != lambda.len() {
        return Err(Error::LengthMismatch {
            left: p.p.len(),
            right: lambda.len(),
        });
    }
    p.p.iter()
        .zip(lambda)
        .map(|(pi, li)| {
            if !li.is_positive() {
                return Err(Error::InvalidInstance("weights must be positive".into()));
            }
            Ok(pi.iter().map(|v| v / li).collect())
        })
        .collect()
}

/// `sum_i lambda_i x_{i, j_i}`.
pub fn barycentric_point(tuple: &IndexTuple, inst: &BarycenterInstance) -> Result<Point> {
    inst.check_tuple(tuple)?;
    let mut y = vec![Rational::zero(); inst.dimension()];
    for (i, j) in tuple.iter().enumerate() {
        let l = &inst.weights()[i];
        for (c, x) in y.iter_mut().zip(inst.atom(i, j)) {
            *c += l * x;
        }
    }
    Ok(y)
}

/// `C_j = sum_i lambda_i ||x_{i, j_i} - ybar||^2` with `ybar` the barycentric
/// point of the tuple.
pub fn tuple_cost(tuple: &IndexTuple, inst: &BarycenterInstance) -> Result<Rational> {
    let y = barycentric_point(tuple, inst)?;
    Ok(tuple
        .iter()
        .enumerate()
        .map(|(i, j)| {
            let d2: Rational = inst
                .atom(i, j)
                .iter()
                .zip(&y)
                .map(|(a, b)| {
                    let d = a - b;
                    &d * &d
                })
                .sum();
            &inst.weights()[i] * d2
        })
        .sum())
}

/// Evaluates reduced costs through the expanded form
/// `sum_i (lambda_i ||x_{i,j_i}||^2 - [p_i]_{j_i}) - ||sum_i lambda_i x_{i,j_i}||^2`.
struct ReducedCost {
    /// `lambda_i x_{i,j}`.
    scaled: Vec<Vec<Point>>,
    /// `lambda_i ||x_{i,j}||^2 - [p_i]_j`.
    offset: Vec<Vec<Rational>>,
    dimension: usize,
}

impl ReducedCost {
    fn new(p: &DualPotentials, inst: &BarycenterInstance) -> Self {
        let mut scaled = Vec::with_capacity(inst.k());
        let mut offset = Vec::with_capacity(inst.k());
        for (i, m) in inst.measures().iter().enumerate() {
            let l = &inst.weights()[i];
            scaled.push(
                m.atoms()
                    .iter()
                    .map(|a| a.iter().map(|c| l * c).collect())
                    .collect(),
            );
            offset.push(
                m.atoms()
                    .iter()
                    .zip(&p.p[i])
                    .map(|(a, pij)| l * a.iter().map(|c| c * c).sum::<Rational>() - pij)
                    .collect(),
            );
        }
        ReducedCost {
            scaled,
            offset,
            dimension: inst.dimension(),
        }
    }

    fn eval(&self, tuple: &[usize]) -> (Rational, Point) {
        let mut y = vec![Rational::zero(); self.dimension];
        let mut acc = Rational::zero();
        for (i, &j) in tuple.iter().enumerate() {
            for (c, s) in y.iter_mut().zip(&self.scaled[i][j]) {
                *c += s;
            }
            acc += &self.offset[i][j];
        }
        let norm: Rational = y.iter().map(|c| c * c).sum();
        (acc - norm, y)
    }
}

fn finish(
    evaluated: Vec<(IndexTuple, Rational, Point)>,
    candidates: usize,
    limit: usize,
) -> SepResult {
    let (tuple, value, witness) = evaluated
        .iter()
        .min_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)))
        .cloned()
        .expect("at least one candidate tuple");
    let mut violated: Vec<(IndexTuple, Rational)> = evaluated
        .into_iter()
        .filter(|(_, v, _)| v.is_negative())
        .map(|(t, v, _)| (t, v))
        .collect();
    violated.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    violated.truncate(limit);
    SepResult {
        tuple,
        value,
        witness,
        violated,
        candidates,
    }
}

/// Minimum reduced cost tuple with default options.
pub fn sep(p: &DualPotentials, inst: &BarycenterInstance) -> Result<SepResult> {
    sep_with(p, inst, &OracleOptions::default())
}

/// Minimum reduced cost tuple. Dimensions 1 and 2 use the geometric
/// enumeration; higher dimensions fall back to [`sep_bruteforce_with`].
pub fn sep_with(
    p: &DualPotentials,
    inst: &BarycenterInstance,
    opts: &OracleOptions,
) -> Result<SepResult> {
    p.check_shape(inst)?;
    if inst.dimension() > 2 {
        return sep_bruteforce_with(p, inst, opts.bruteforce_budget, opts);
    }
    let tuples = candidate_tuples(p, inst, opts)?;
    let costs = ReducedCost::new(p, inst);
    let evaluated = par::map(opts.parallelism, &tuples, |t| {
        let (v, y) = costs.eval(t.as_slice());
        (t.clone(), v, y)
    });
    Ok(finish(evaluated, tuples.len(), opts.violated_limit))
}

/// Tuples of all non-empty cells of the intersected power diagrams, sorted.
/// Identical `(point, weight)` pairs within a marginal appear only under their
/// smallest index.
pub fn candidate_tuples(
    p: &DualPotentials,
    inst: &BarycenterInstance,
    opts: &OracleOptions,
) -> Result<Vec<IndexTuple>> {
    p.check_shape(inst)?;
    if inst.dimension() > 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: inst.dimension(),
        });
    }
    let w = weights_from_potentials(p, inst.weights())?;
    let sites: Vec<Vec<Vec2>> = (0..inst.k())
        .map(|i| (0..inst.measure(i).len()).map(|j| inst.atom2(i, j)).collect())
        .collect();
    let m = enclosing_half_width(sites.iter().zip(&w).map(|(s, w)| (&s[..], &w[..])));
    let idx: Vec<usize> = (0..inst.k()).collect();
    let diagrams = par::map(opts.parallelism, &idx, |&i| {
        power_diagram_in_box(&sites[i], &w[i], &m)
    });

    let tuples = match opts.strategy {
        CellStrategy::Overlay => {
            let square = ConvexPolygon::square(&m);
            let bb = square.bbox();
            let mut current: Vec<(Vec<usize>, ConvexPolygon, BoundingBox)> =
                vec![(Vec::new(), square, bb)];
            for d in &diagrams {
                let cells: Vec<(usize, &ConvexPolygon, BoundingBox)> = d
                    .cells
                    .iter()
                    .enumerate()
                    .filter_map(|(j, c)| c.as_ref().map(|c| (j, c, c.bbox())))
                    .collect();
                current = par::flat_map(opts.parallelism, &current, |(prefix, poly, bb)| {
                    cells
                        .iter()
                        .filter(|(_, _, cbb)| bb.overlaps(cbb))
                        .filter_map(|(j, cell, _)| {
                            let piece = poly.intersect(cell, &d.halfplanes)?;
                            let mut t = prefix.clone();
                            t.push(*j);
                            let pbb = piece.bbox();
                            Some((t, piece, pbb))
                        })
                        .collect()
                });
            }
            let mut tuples: Vec<IndexTuple> = current
                .into_iter()
                .map(|(t, _, _)| IndexTuple::new(t))
                .collect();
            tuples.sort();
            tuples
        }
        CellStrategy::Arrangement => {
            let lines: BTreeSet<Line> = diagrams
                .iter()
                .flat_map(|d| d.facet_lines.iter().cloned())
                .collect();
            let lines: Vec<Line> = lines.into_iter().collect();
            let hint: Vec<Vec2> = sites.iter().flatten().cloned().collect();
            let reps = enumerate_arrangement_cells_with(&lines, &hint, opts.parallelism);
            let located = par::map(opts.parallelism, &reps, |y| locate_tuple(y, inst, &w));
            let set: BTreeSet<IndexTuple> = located.into_iter().collect();
            set.into_iter().collect()
        }
    };
    Ok(tuples)
}

/// Exhaustive minimum over all tuples, default options.
pub fn sep_bruteforce(
    p: &DualPotentials,
    inst: &BarycenterInstance,
    budget: u128,
) -> Result<SepResult> {
    sep_bruteforce_with(p, inst, budget, &OracleOptions::default())
}

pub fn sep_bruteforce_with(
    p: &DualPotentials,
    inst: &BarycenterInstance,
    budget: u128,
    opts: &OracleOptions,
) -> Result<SepResult> {
    p.check_shape(inst)?;
    let total = inst.tuple_count().unwrap_or(u128::MAX);
    if total > budget {
        return Err(Error::BudgetExceeded {
            needed: total,
            budget,
        });
    }
    let sizes = inst.sizes();
    let limit = opts.violated_limit;
    // Evaluated through tuple_cost, independently of the expanded form used by
    // the geometric route.
    let chunks = par::chunked(opts.parallelism, total as u64, 4096, |start, end| {
        let mut best: Option<(IndexTuple, Rational)> = None;
        let mut violated = Vec::new();
        for flat in start..end {
            let t = unflatten(flat, &sizes);
            let v = tuple_cost(&t, inst).expect("in range") - p.tuple_sum(&t);
            if best.as_ref().is_none_or(|(bt, bv)| v < *bv || (v == *bv && t < *bt)) {
                best = Some((t.clone(), v.clone()));
            }
            if v.is_negative() {
                violated.push((t, v));
            }
        }
        vec![(best, violated)]
    });
    let mut best: Option<(IndexTuple, Rational)> = None;
    let mut violated = Vec::new();
    for (b, v) in chunks {
        if let Some((t, val)) = b {
            if best.as_ref().is_none_or(|(bt, bv)| val < *bv || (val == *bv && t < *bt)) {
                best = Some((t, val));
            }
        }
        violated.extend(v);
    }
    let (tuple, value) = best.expect("non-empty instance");
    violated.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    violated.truncate(limit);
    let witness = barycentric_point(&tuple, inst)?;
    Ok(SepResult {
        tuple,
        value,
        witness,
        violated,
        candidates: total as usize,
    })
}

/// Row-major mixed-radix decoding: the last marginal varies fastest.
pub(crate) fn unflatten(mut flat: u64, sizes: &[usize]) -> IndexTuple {
    let mut idx = vec![0; sizes.len()];
    for i in (0..sizes.len()).rev() {
        idx[i] = (flat % sizes[i] as u64) as usize;
        flat /= sizes[i] as u64;
    }
    IndexTuple::new(idx)
}
