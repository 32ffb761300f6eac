//! Slow, independent oracles for tests: vertex enumeration, the dense
//! multimarginal LP, and random point-location probes of the cell enumeration.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::colgen::MotSolution;
use crate::error::{Error, Result};
use crate::geometry::locate_tuple;
use crate::lp::{build_restricted_mot, duals_to_potentials, simplex_solve, LpStatus, StandardLp};
use crate::model::{BarycenterInstance, DualPotentials, IndexTuple};
use crate::numeric::{solve_linear_system, LinearSolve, Rational, Vec2};
use crate::oracle::{candidate_tuples, unflatten, weights_from_potentials, OracleOptions};
use crate::par;

pub const DEFAULT_DENSE_BUDGET: u128 = 10_000;

/// Every basic feasible solution of `A x = b, x >= 0`, by trying all sets of
/// at most `rows` columns. Exponential; meant for a handful of columns.
pub fn enumerate_vertices(lp: &StandardLp) -> Result<Vec<Vec<Rational>>> {
    let (m, n) = (lp.rows(), lp.cols());
    let dense: Vec<Vec<Rational>> = (0..n)
        .map(|j| {
            let mut col = vec![Rational::zero(); m];
            for (r, v) in lp.column(j) {
                col[*r] = v.clone();
            }
            col
        })
        .collect();
    let mut found = BTreeSet::new();
    let mut subset = Vec::new();
    collect_vertices(&dense, lp.rhs(), m.min(n), 0, &mut subset, &mut found)?;
    Ok(found.into_iter().collect())
}

fn collect_vertices(
    columns: &[Vec<Rational>],
    b: &[Rational],
    max_size: usize,
    next: usize,
    subset: &mut Vec<usize>,
    found: &mut BTreeSet<Vec<Rational>>,
) -> Result<()> {
    let a: Vec<Vec<Rational>> = (0..b.len())
        .map(|r| subset.iter().map(|&j| columns[j][r].clone()).collect())
        .collect();
    let solution = if subset.is_empty() {
        b.iter().all(Zero::is_zero).then(Vec::new)
    } else {
        match solve_linear_system(&a, b)? {
            LinearSolve::Unique(x) => Some(x),
            _ => None,
        }
    };
    if let Some(x) = solution {
        if x.iter().all(|v| !v.is_negative()) {
            let mut full = vec![Rational::zero(); columns.len()];
            for (&j, v) in subset.iter().zip(x) {
                full[j] = v;
            }
            found.insert(full);
        }
    }
    if subset.len() == max_size {
        return Ok(());
    }
    for j in next..columns.len() {
        subset.push(j);
        collect_vertices(columns, b, max_size, j + 1, subset, found)?;
        subset.pop();
    }
    Ok(())
}

/// The multimarginal LP over all `prod_i n_i` tuples, solved in one shot.
pub fn brute_mot(inst: &BarycenterInstance, budget: u128) -> Result<MotSolution> {
    let total = inst.tuple_count().unwrap_or(u128::MAX);
    if total > budget {
        return Err(Error::BudgetExceeded { needed: total, budget });
    }
    let sizes = inst.sizes();
    let tuples: Vec<IndexTuple> = (0..total as u64).map(|f| unflatten(f, &sizes)).collect();
    let dense = build_restricted_mot(&tuples, inst)?;
    let sol = simplex_solve(&dense.lp);
    if sol.status != LpStatus::Optimal {
        return Err(Error::NotOptimal(sol.status));
    }
    let potentials = duals_to_potentials(&sol, &dense.rows)?;
    let coupling = sol
        .primal
        .iter()
        .zip(&tuples)
        .filter(|(x, _)| x.is_positive())
        .map(|(x, t)| (t.clone(), x.clone()))
        .collect();
    Ok(MotSolution {
        coupling,
        potentials,
        value: sol.value,
        iterations: 1,
        columns_generated: 0,
        tuples,
        sep_value: Rational::zero(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    pub samples: usize,
    pub candidates: usize,
    /// First sampled point whose tuple the enumeration missed.
    pub counterexample: Option<(Vec2, IndexTuple)>,
}

impl CoverageReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Samples random rational points and checks that each one's power-diagram
/// tuple is among the enumerated candidates. Three quarters of the samples
/// fall in the sites' bounding box padded by its own size, the rest in a box
/// eight times wider. Sample `s` uses its own generator seeded by `(seed, s)`.
pub fn coverage_probe(
    inst: &BarycenterInstance,
    p: &DualPotentials,
    samples: usize,
    seed: u64,
) -> Result<CoverageReport> {
    coverage_probe_with(inst, p, samples, seed, &OracleOptions::default())
}

pub fn coverage_probe_with(
    inst: &BarycenterInstance,
    p: &DualPotentials,
    samples: usize,
    seed: u64,
    opts: &OracleOptions,
) -> Result<CoverageReport> {
    let candidates: BTreeSet<IndexTuple> = candidate_tuples(p, inst, opts)?.into_iter().collect();
    let w = weights_from_potentials(p, inst.weights())?;

    let sites: Vec<Vec2> = (0..inst.k())
        .flat_map(|i| (0..inst.measure(i).len()).map(move |j| (i, j)))
        .map(|(i, j)| inst.atom2(i, j))
        .collect();
    let lo_x = sites.iter().map(|s| s.x.clone()).min().expect("non-empty");
    let hi_x = sites.iter().map(|s| s.x.clone()).max().expect("non-empty");
    let lo_y = sites.iter().map(|s| s.y.clone()).min().expect("non-empty");
    let hi_y = sites.iter().map(|s| s.y.clone()).max().expect("non-empty");
    let one = Rational::from_integer(1.into());
    let span = [&hi_x - &lo_x, &hi_y - &lo_y].into_iter().max().unwrap().max(one);
    let center = Vec2::new((&lo_x + &hi_x) / Rational::from_integer(2.into()), (&lo_y + &hi_y) / Rational::from_integer(2.into()));

    let idx: Vec<usize> = (0..samples).collect();
    let mode = opts.parallelism;
    let missed = par::map(mode, &idx, |&s| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (s as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let half = if s % 4 == 3 { &span * Rational::from_integer(8.into()) } else { span.clone() };
        let y = &center + &Vec2::new(random_unit(&mut rng) * &half, random_unit(&mut rng) * &half);
        let t = locate_tuple(&y, inst, &w);
        (!candidates.contains(&t)).then_some((y, t))
    });
    Ok(CoverageReport {
        samples,
        candidates: candidates.len(),
        counterexample: missed.into_iter().flatten().next(),
    })
}

/// Uniform on `[-1, 1]` with a large random odd denominator.
fn random_unit(rng: &mut impl Rng) -> Rational {
    let den: i64 = rng.random_range(1 << 30..1 << 31) | 1;
    let num: i64 = rng.random_range(-den..=den);
    Rational::new(BigInt::from(num), BigInt::from(den))
}
