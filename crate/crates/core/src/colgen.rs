//! Column generation for the multimarginal transport LP.
//!
//! The restricted LP over a tuple set `S` is solved, its duals are handed to
//! the pricing oracle, and tuples with negative reduced cost (up to a batch
//! size) join `S`. When the oracle reports a non-negative minimum at the
//! exact restricted duals, they are feasible for the full dual and the
//! restricted vertex is optimal for the full problem.
//!
//! By default the search runs on a floating-point simplex and switches to the
//! exact one, started from the last floating-point basis, once the rounded
//! duals stop producing new columns. Pricing is exact throughout. Potentials
//! are smoothed towards the best Lagrangian point seen so far, which damps
//! the oscillation of degenerate duals.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::float::FloatSimplex;
use crate::lp::{
    build_restricted_mot, duals_to_potentials, simplex_solve, BasicVar, LpStatus, RowMap, Simplex, StandardLp,
};
use crate::model::{BarycenterInstance, DualPotentials, IndexTuple, SparseCoupling};
use crate::numeric::{round_to_multiple, Rational};
use crate::oracle::{
    sep_bruteforce_with, sep_with, tuple_cost, CellStrategy, OracleOptions, SepResult,
    DEFAULT_BRUTEFORCE_BUDGET,
};
use crate::par::Parallelism;

/// Which pricing oracle to call.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    /// Power-diagram enumeration (dimensions 1 and 2; brute force above).
    Geometric(CellStrategy),
    /// Exhaustive enumeration of all tuples.
    BruteForce { budget: u128 },
}

impl Default for OracleKind {
    fn default() -> Self {
        OracleKind::Geometric(CellStrategy::Overlay)
    }
}

/// Initial restricted tuple set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SeedRule {
    /// The north-west rule in index order only.
    NorthWest,
    /// North-west in index order plus sorted projections.
    #[default]
    Projections,
}

/// How the restricted LPs are solved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LpBackend {
    /// Exact simplex throughout.
    Exact,
    /// Floating-point simplex while columns are being found, then the exact
    /// simplex from the last floating-point basis until the exact duals
    /// price out. The result is exact either way.
    #[default]
    FloatGuided,
}

/// Floating-point and smoothed potentials are rounded to multiples of
/// `2^-POTENTIAL_GRID_BITS`; any potentials give a valid lower bound.
const POTENTIAL_GRID_BITS: u32 = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColgenConfig {
    pub oracle: OracleKind,
    /// Most violated tuples added per round.
    pub batch: usize,
    /// `None` means `prod_i n_i`, or `10^6` if that overflows.
    pub max_iterations: Option<u64>,
    /// Keep the simplex basis between rounds instead of re-running Phase I.
    pub warm_start: bool,
    /// Price at `alpha * center + (1 - alpha) * duals`, where the center is
    /// the potential with the best Lagrangian bound so far. A round that finds
    /// no column improving on the duals retries with a smaller `alpha`, down
    /// to the duals themselves. `None` always prices at the duals.
    pub smoothing: Option<Rational>,
    pub seed: SeedRule,
    pub lp: LpBackend,
    pub parallelism: Parallelism,
}

impl Default for ColgenConfig {
    fn default() -> Self {
        ColgenConfig {
            oracle: OracleKind::default(),
            batch: 50,
            max_iterations: None,
            warm_start: true,
            smoothing: Some(Rational::new(4.into(), 5.into())),
            seed: SeedRule::default(),
            lp: LpBackend::default(),
            parallelism: Parallelism::default(),
        }
    }
}

impl ColgenConfig {
    fn oracle_options(&self, limit: usize) -> OracleOptions {
        let strategy = match self.oracle {
            OracleKind::Geometric(s) => s,
            OracleKind::BruteForce { .. } => CellStrategy::Overlay,
        };
        OracleOptions {
            strategy,
            parallelism: self.parallelism,
            violated_limit: limit,
            bruteforce_budget: DEFAULT_BRUTEFORCE_BUDGET,
        }
    }

    fn iteration_cap(&self, inst: &BarycenterInstance) -> u64 {
        self.max_iterations.unwrap_or_else(|| {
            inst.tuple_count()
                .and_then(|c| u64::try_from(c).ok())
                .unwrap_or(1_000_000)
        })
    }
}

/// Runs the configured oracle.
pub fn price(
    p: &DualPotentials,
    inst: &BarycenterInstance,
    config: &ColgenConfig,
) -> Result<SepResult> {
    let opts = config.oracle_options(config.batch.max(1));
    match config.oracle {
        OracleKind::Geometric(_) => sep_with(p, inst, &opts),
        OracleKind::BruteForce { budget } => sep_bruteforce_with(p, inst, budget, &opts),
    }
}

/// Per-round progress.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationRecord {
    /// 1-based round number. The floating-point and exact passes of the
    /// round that switches solvers share it.
    pub iteration: u64,
    /// `|S|` when the restricted LP was solved.
    pub columns: usize,
    /// Restricted optimum; rounded from `f64` unless `exact_lp`.
    pub restricted_value: Rational,
    pub exact_lp: bool,
    /// Minimum reduced cost at the last priced potentials.
    pub sep_value: Rational,
    /// Whether those potentials were the restricted LP's duals rather than a
    /// smoothed point.
    pub priced_at_duals: bool,
    /// Best Lagrangian lower bound `sum_i <p_i, mu_i> + sep(p)` so far.
    pub lower_bound: Rational,
    /// Tuples evaluated by the oracle.
    pub candidates: usize,
    /// Columns added after this round.
    pub added: usize,
    /// Time spent in the simplex and in the oracle this round.
    pub lp_time: Duration,
    pub oracle_time: Duration,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotSolution {
    /// Vertex of the transportation polytope.
    pub coupling: SparseCoupling,
    pub potentials: DualPotentials,
    pub value: Rational,
    /// Restricted LP solves.
    pub iterations: u64,
    /// Tuples added beyond the initial set.
    pub columns_generated: usize,
    /// Final tuple set `S`.
    pub tuples: Vec<IndexTuple>,
    /// Oracle value at the final potentials; non-negative on success.
    pub sep_value: Rational,
}

/// Multi-marginal north-west corner rule. Walks one frontier index per
/// marginal, emits the frontier tuple with the smallest residual mass, and
/// advances a marginal whose residual hits zero. When several hit zero at
/// once they advance one at a time, emitting zero-mass tuples in between, so
/// the tuple set always has exactly `sum_i n_i - k + 1` members and its
/// columns are linearly independent: each tuple touches a row no earlier
/// tuple touched. The coupling keeps only the positive masses.
pub fn initial_tuple_set(inst: &BarycenterInstance) -> (Vec<IndexTuple>, SparseCoupling) {
    let orders: Vec<Vec<usize>> = inst.sizes().into_iter().map(|n| (0..n).collect()).collect();
    north_west(inst, &orders)
}

/// The north-west rule run over each measure's atoms in the given order.
fn north_west(inst: &BarycenterInstance, orders: &[Vec<usize>]) -> (Vec<IndexTuple>, SparseCoupling) {
    let k = inst.k();
    let mass = |i: usize, pos: usize| inst.measure(i).masses()[orders[i][pos]].clone();
    let mut pos = vec![0usize; k];
    let mut residual: Vec<Rational> = (0..k).map(|i| mass(i, 0)).collect();
    let mut tuples = Vec::new();
    let mut coupling = SparseCoupling::new();
    loop {
        let step = residual.iter().min().expect("k >= 1").clone();
        let t = IndexTuple::new((0..k).map(|i| orders[i][pos[i]]).collect());
        tuples.push(t.clone());
        coupling.add(t, step.clone());
        for r in residual.iter_mut() {
            *r -= &step;
        }
        let next = (0..k).find(|&i| residual[i].is_zero() && pos[i] + 1 < orders[i].len());
        match next {
            Some(i) => {
                pos[i] += 1;
                residual[i] = mass(i, pos[i]);
            }
            None => break,
        }
    }
    (tuples, coupling)
}

/// Coordinate axes, then `e_a + e_b` and `e_a - e_b` for `a < b`.
fn projection_directions(d: usize) -> Vec<Vec<i64>> {
    let unit = |a: usize| (0..d).map(|c| i64::from(c == a)).collect::<Vec<_>>();
    let mut dirs: Vec<Vec<i64>> = (0..d).map(unit).collect();
    for a in 0..d {
        for b in a + 1..d {
            for sign in [1, -1] {
                let mut v = unit(a);
                v[b] = sign;
                dirs.push(v);
            }
        }
    }
    dirs
}

/// Starting columns: the north-west rule in index order (a full-rank basis),
/// plus the supports of the north-west couplings of atoms sorted along each
/// projection direction, which are the optimal couplings of the projected
/// measures.
pub fn projection_seed(inst: &BarycenterInstance) -> Vec<IndexTuple> {
    let (mut tuples, _) = initial_tuple_set(inst);
    let mut seen: HashSet<IndexTuple> = tuples.iter().cloned().collect();
    for dir in projection_directions(inst.dimension()) {
        let orders: Vec<Vec<usize>> = inst
            .measures()
            .iter()
            .map(|m| {
                let keys: Vec<Rational> = m
                    .atoms()
                    .iter()
                    .map(|x| x.iter().zip(&dir).map(|(c, &s)| c * Rational::from_integer(s.into())).sum())
                    .collect();
                let mut order: Vec<usize> = (0..m.len()).collect();
                order.sort_by(|&a, &b| keys[a].cmp(&keys[b]).then(a.cmp(&b)));
                order
            })
            .collect();
        let (_, coupling) = north_west(inst, &orders);
        for (t, _) in coupling.iter() {
            if seen.insert(t.clone()) {
                tuples.push(t.clone());
            }
        }
    }
    tuples
}

pub fn solve_mot(inst: &BarycenterInstance, config: &ColgenConfig) -> Result<MotSolution> {
    solve_mot_with_progress(inst, config, |_| {})
}

enum Engine {
    Float(FloatSimplex),
    Exact(Simplex),
}

/// The exact solver, started from `basis` when that basis is usable.
fn exact_engine(lp: &StandardLp, basis: Option<&[BasicVar]>) -> Engine {
    let warm = basis.and_then(|b| Simplex::from_basis(lp.clone(), b));
    Engine::Exact(warm.unwrap_or_else(|| Simplex::new(lp.clone())))
}

/// Floating-point duals as potentials on the `2^-POTENTIAL_GRID_BITS` grid.
fn float_potentials(y: &[f64], rows: &RowMap, grid: &Rational) -> Result<DualPotentials> {
    let p = (0..rows.sizes().len())
        .map(|i| {
            (0..rows.sizes()[i])
                .map(|j| {
                    Rational::from_float(y[rows.row(i, j)])
                        .map(|v| round_to_multiple(&v, grid))
                        .ok_or(Error::NotOptimal(LpStatus::Unbounded))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(DualPotentials { p })
}

pub fn solve_mot_with_progress(
    inst: &BarycenterInstance,
    config: &ColgenConfig,
    mut on_iteration: impl FnMut(&IterationRecord),
) -> Result<MotSolution> {
    let start = Instant::now();
    let cap = config.iteration_cap(inst);
    let rows = RowMap::new(inst);
    let seed = match config.seed {
        SeedRule::NorthWest => initial_tuple_set(inst).0,
        SeedRule::Projections => projection_seed(inst),
    };
    let restricted = build_restricted_mot(&seed, inst)?;
    let mut tuples = restricted.tuples;
    let mut in_set: HashSet<IndexTuple> = tuples.iter().cloned().collect();
    let mut lp = restricted.lp;
    let mut engine = match config.lp {
        LpBackend::Exact => exact_engine(&lp, None),
        LpBackend::FloatGuided => Engine::Float(FloatSimplex::new(&lp)),
    };
    let mut iteration = 0u64;
    // Potentials with the best Lagrangian bound seen so far.
    let mut center: Option<(DualPotentials, Rational)> = None;
    let grid = Rational::new(1.into(), BigInt::from(1u64) << POTENTIAL_GRID_BITS);

    loop {
        iteration += 1;
        let lp_start = Instant::now();
        if let Engine::Float(f) = &mut engine {
            if f.solve() != LpStatus::Optimal {
                engine = exact_engine(&lp, None);
            }
        }
        let (duals, restricted_value, exact) = match &mut engine {
            Engine::Float(f) => {
                let value = Rational::from_float(f.value()).unwrap_or_default();
                (float_potentials(&f.duals(), &rows, &grid)?, value, None)
            }
            Engine::Exact(simplex) => {
                let sol = if config.warm_start {
                    simplex.solve()
                } else {
                    simplex_solve(simplex.lp())
                };
                if sol.status != LpStatus::Optimal {
                    return Err(Error::NotOptimal(sol.status));
                }
                (duals_to_potentials(&sol, &rows)?, sol.value.clone(), Some(sol))
            }
        };
        let lp_time = lp_start.elapsed();

        let oracle_start = Instant::now();
        let mut new_tuples: Vec<IndexTuple> = Vec::new();
        let mut candidates = 0;
        let mut misprices = 0u32;
        let (sep_value, at_duals) = loop {
            let alpha = config
                .smoothing
                .as_ref()
                .filter(|_| center.is_some())
                .map(|a| Rational::one() - (Rational::one() - a) * Rational::from_integer((misprices + 1).into()))
                .filter(|a| a.is_positive());
            let point = match (&alpha, &center) {
                (Some(a), Some((c, _))) => mix(c, &duals, a, &grid),
                _ => duals.clone(),
            };
            let at_duals = alpha.is_none();
            let priced = price(&point, inst, config)?;
            candidates += priced.candidates;
            let bound = point.objective(inst) + &priced.value;
            if center.as_ref().is_none_or(|(_, b)| bound > *b) {
                center = Some((point, bound));
            }
            if at_duals && !priced.value.is_negative() {
                break (priced.value, true);
            }
            let mut improving = false;
            for (t, _) in &priced.violated {
                if in_set.contains(t) || new_tuples.contains(t) {
                    if at_duals && exact.is_some() {
                        return Err(Error::RepeatedColumn(t.to_string()));
                    }
                    continue;
                }
                if new_tuples.len() >= config.batch.max(1) {
                    break;
                }
                improving |= at_duals || (tuple_cost(t, inst)? - duals.tuple_sum(t)).is_negative();
                new_tuples.push(t.clone());
            }
            if improving || at_duals {
                break (priced.value, at_duals);
            }
            misprices += 1;
        };
        let oracle_time = oracle_start.elapsed();
        let mut record = IterationRecord {
            iteration,
            columns: tuples.len(),
            restricted_value,
            exact_lp: exact.is_some(),
            sep_value: sep_value.clone(),
            lower_bound: center.as_ref().map(|(_, b)| b.clone()).expect("priced at least once"),
            priced_at_duals: at_duals,
            candidates,
            added: 0,
            lp_time,
            oracle_time,
            elapsed: start.elapsed(),
        };

        match exact {
            Some(sol) if at_duals && !sep_value.is_negative() => {
                on_iteration(&record);
                let coupling = sol
                    .primal
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| x.is_positive())
                    .map(|(c, x)| (tuples[c].clone(), x.clone()))
                    .collect();
                return Ok(MotSolution {
                    coupling,
                    potentials: duals,
                    value: sol.value,
                    iterations: iteration,
                    columns_generated: tuples.len() - seed.len(),
                    tuples,
                    sep_value,
                });
            }
            None if new_tuples.is_empty() => {
                // Nothing left that the rounded duals can price out: hand the
                // final basis to the exact solver, within the same round.
                if let Engine::Float(f) = &engine {
                    engine = exact_engine(&lp, Some(f.basis()));
                }
                on_iteration(&record);
                iteration -= 1;
                continue;
            }
            _ => {}
        }
        if iteration >= cap {
            return Err(Error::IterationCap(cap));
        }

        for t in new_tuples {
            let column = rows.column(&t);
            let cost = tuple_cost(&t, inst)?;
            match &mut engine {
                Engine::Float(f) => f.add_column(&column, &cost),
                Engine::Exact(simplex) => {
                    simplex.add_column(column.clone(), cost.clone())?;
                }
            }
            lp.push_column(column, cost)?;
            in_set.insert(t.clone());
            tuples.push(t);
            record.added += 1;
        }
        on_iteration(&record);
    }
}

/// `alpha * center + (1 - alpha) * duals`, rounded to multiples of `grid`.
fn mix(center: &DualPotentials, duals: &DualPotentials, alpha: &Rational, grid: &Rational) -> DualPotentials {
    let beta = Rational::one() - alpha;
    DualPotentials {
        p: center
            .p
            .iter()
            .zip(&duals.p)
            .map(|(c, d)| {
                c.iter()
                    .zip(d)
                    .map(|(u, v)| round_to_multiple(&(alpha * u + &beta * v), grid))
                    .collect()
            })
            .collect(),
    }
}

/// Result of [`verify_certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    /// First failed check, `None` if everything passed.
    pub failure: Option<String>,
    pub primal_value: Rational,
    pub dual_value: Rational,
    pub sep_value: Option<Rational>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn gap(&self) -> Rational {
        &self.primal_value - &self.dual_value
    }
}

/// Rechecks an optimality certificate from scratch: positive masses, exact
/// marginals, primal value from tuple costs, equal dual objective, and a fresh
/// oracle call with no negative reduced cost.
pub fn verify_certificate(sol: &MotSolution, inst: &BarycenterInstance) -> CertificateReport {
    verify_certificate_with(sol, inst, &ColgenConfig::default())
}

pub fn verify_certificate_with(
    sol: &MotSolution,
    inst: &BarycenterInstance,
    config: &ColgenConfig,
) -> CertificateReport {
    let mut report = CertificateReport {
        failure: None,
        primal_value: Rational::zero(),
        dual_value: sol.potentials.objective(inst),
        sep_value: None,
    };
    let fail = |mut r: CertificateReport, msg: String| {
        r.failure = Some(msg);
        r
    };

    for (t, m) in sol.coupling.iter() {
        if let Err(e) = inst.check_tuple(t) {
            return fail(report, format!("tuple {t}: {e}"));
        }
        if !m.is_positive() {
            return fail(report, format!("non-positive mass at {t}"));
        }
    }
    for (i, measure) in inst.measures().iter().enumerate() {
        match sol.coupling.marginal(i, measure.len()) {
            Ok(marg) if marg == measure.masses() => {}
            _ => return fail(report, format!("marginal {} does not match", i + 1)),
        }
    }
    report.primal_value = sol
        .coupling
        .iter()
        .map(|(t, m)| m * tuple_cost(t, inst).expect("checked above"))
        .sum();
    if report.primal_value != sol.value {
        let msg = format!("recomputed cost {} differs from reported {}", report.primal_value, sol.value);
        return fail(report, msg);
    }
    if sol.potentials.check_shape(inst).is_err() {
        return fail(report, "potentials have the wrong shape".into());
    }
    if report.dual_value != report.primal_value {
        let msg = format!("duality gap {}", report.gap());
        return fail(report, msg);
    }
    match price(&sol.potentials, inst, config) {
        Ok(r) => {
            let negative = r.value.is_negative();
            let msg = format!("tuple {} has reduced cost {}", r.tuple, r.value);
            report.sep_value = Some(r.value);
            if negative {
                return fail(report, msg);
            }
        }
        Err(e) => return fail(report, format!("oracle failed: {e}")),
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DiscreteMeasure, Point};
    use crate::numeric::{int, ratio};
    use crate::reference::brute_mot;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(x: i64, y: i64) -> Point {
        vec![int(x), int(y)]
    }

    fn random_instance(rng: &mut impl Rng, k: usize, n: usize) -> BarycenterInstance {
        let measures = (0..k)
            .map(|_| {
                let atoms = (0..n)
                    .map(|_| vec![ratio(rng.random_range(-8..=8), 4), ratio(rng.random_range(-8..=8), 4)])
                    .collect();
                let raw: Vec<i64> = (0..n).map(|_| rng.random_range(1..5)).collect();
                let total: i64 = raw.iter().sum();
                DiscreteMeasure::new(atoms, raw.iter().map(|&r| ratio(r, total)).collect()).unwrap()
            })
            .collect();
        BarycenterInstance::new(2, measures, vec![ratio(1, k as i64); k]).unwrap()
    }

    #[test]
    fn northwest_corner_by_hand() {
        let inst = BarycenterInstance::new(
            2,
            vec![
                DiscreteMeasure::new(vec![pt(0, 0), pt(1, 0)], vec![ratio(1, 2), ratio(1, 2)]).unwrap(),
                DiscreteMeasure::new(vec![pt(0, 0), pt(1, 0)], vec![ratio(1, 4), ratio(3, 4)]).unwrap(),
            ],
            vec![ratio(1, 2), ratio(1, 2)],
        )
        .unwrap();
        let (s, p) = initial_tuple_set(&inst);
        let expected: Vec<IndexTuple> = [[0, 0], [0, 1], [1, 1]].iter().map(|t| IndexTuple::new(t.to_vec())).collect();
        assert_eq!(s, expected);
        let masses: Vec<Rational> = expected.iter().map(|t| p.get(t).unwrap().clone()).collect();
        assert_eq!(masses, vec![ratio(1, 4), ratio(1, 4), ratio(1, 2)]);
        assert_eq!(s.len(), inst.sparsity_bound());
    }

    #[test]
    fn northwest_corner_edge_cases() {
        let diracs = BarycenterInstance::new(
            2,
            vec![DiscreteMeasure::dirac(pt(1, 1)); 3],
            vec![ratio(1, 3); 3],
        )
        .unwrap();
        let (s, p) = initial_tuple_set(&diracs);
        assert_eq!(s, vec![IndexTuple::new(vec![0, 0, 0])]);
        assert_eq!(p.total_mass(), int(1));

        let single = BarycenterInstance::new(
            2,
            vec![DiscreteMeasure::new(vec![pt(0, 0), pt(1, 0), pt(2, 0)], vec![ratio(1, 2), ratio(1, 4), ratio(1, 4)]).unwrap()],
            vec![int(1)],
        )
        .unwrap();
        let (s, p) = initial_tuple_set(&single);
        assert_eq!(s.len(), 3);
        assert_eq!(p.marginal(0, 3).unwrap(), single.measure(0).masses());

        // Simultaneous exhaustion advances one marginal at a time.
        let uniform = BarycenterInstance::new(
            2,
            vec![DiscreteMeasure::new(vec![pt(0, 0), pt(1, 0)], vec![ratio(1, 2); 2]).unwrap(); 2],
            vec![ratio(1, 2); 2],
        )
        .unwrap();
        let (s, p) = initial_tuple_set(&uniform);
        let expected: Vec<IndexTuple> = [[0, 0], [1, 0], [1, 1]].iter().map(|t| IndexTuple::new(t.to_vec())).collect();
        assert_eq!(s, expected);
        assert_eq!(p.support_size(), 2);
        assert_eq!(p.get(&expected[1]), None);
    }

    #[test]
    fn northwest_corner_is_feasible_and_sparse() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let k = rng.random_range(1..5);
            let n = rng.random_range(1..6);
            let inst = random_instance(&mut rng, k, n);
            let (s, p) = initial_tuple_set(&inst);
            assert!(p.is_feasible_for(&inst));
            assert_eq!(s.len(), inst.sparsity_bound());
            assert!(p.iter().all(|(t, _)| s.contains(t)));
        }
    }

    #[test]
    fn single_measure_costs_nothing() {
        let inst = BarycenterInstance::new(
            2,
            vec![DiscreteMeasure::new(vec![pt(0, 0), pt(4, 1)], vec![ratio(1, 3), ratio(2, 3)]).unwrap()],
            vec![int(1)],
        )
        .unwrap();
        let sol = solve_mot(&inst, &ColgenConfig::default()).unwrap();
        assert_eq!(sol.value, int(0));
        assert_eq!(sol.coupling.marginal(0, 2).unwrap(), inst.measure(0).masses());
        assert!(verify_certificate(&sol, &inst).passed());
    }

    #[test]
    fn two_diracs_cost_one() {
        let inst = BarycenterInstance::new(
            2,
            vec![DiscreteMeasure::dirac(pt(0, 0)), DiscreteMeasure::dirac(pt(2, 0))],
            vec![ratio(1, 2), ratio(1, 2)],
        )
        .unwrap();
        let exact = ColgenConfig { lp: LpBackend::Exact, ..Default::default() };
        let sol = solve_mot(&inst, &exact).unwrap();
        assert_eq!(sol.value, int(1));
        assert_eq!(sol.iterations, 1);
        let mut records = Vec::new();
        let sol = solve_mot_with_progress(&inst, &ColgenConfig::default(), |r| records.push(r.clone())).unwrap();
        assert_eq!(sol.iterations, 1);
        // A floating-point pass, then the exact confirmation in the same round.
        assert_eq!(records.iter().map(|r| (r.iteration, r.exact_lp)).collect::<Vec<_>>(), vec![(1, false), (1, true)]);
    }

    #[test]
    fn matches_dense_lp_under_every_configuration() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let configs = [
            ColgenConfig::default(),
            ColgenConfig { batch: 1, warm_start: false, ..Default::default() },
            ColgenConfig { oracle: OracleKind::Geometric(CellStrategy::Arrangement), ..Default::default() },
            ColgenConfig { oracle: OracleKind::BruteForce { budget: 1000 }, batch: 3, ..Default::default() },
            ColgenConfig { parallelism: Parallelism::Sequential, ..Default::default() },
            ColgenConfig { lp: LpBackend::Exact, smoothing: None, seed: SeedRule::NorthWest, ..Default::default() },
            ColgenConfig { lp: LpBackend::Exact, ..Default::default() },
        ];
        for _ in 0..12 {
            let inst = random_instance(&mut rng, 3, 3);
            let dense = brute_mot(&inst, 10_000).unwrap();
            for config in &configs {
                let sol = solve_mot(&inst, config).unwrap();
                assert_eq!(sol.value, dense.value);
                assert!(sol.coupling.support_size() <= inst.sparsity_bound());
                assert!(verify_certificate(&sol, &inst).passed());
            }
        }
    }

    #[test]
    fn restricted_values_bracket_the_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..8 {
            let inst = random_instance(&mut rng, 3, 4);
            let opt = brute_mot(&inst, 10_000).unwrap().value;
            let mut records = Vec::new();
            let config = ColgenConfig { batch: 1, lp: LpBackend::Exact, smoothing: None, ..Default::default() };
            let sol = solve_mot_with_progress(&inst, &config, |r| records.push(r.clone())).unwrap();
            assert_eq!(sol.value, opt);
            for w in records.windows(2) {
                assert!(w[1].restricted_value <= w[0].restricted_value);
                assert!(w[0].lower_bound <= w[1].lower_bound);
            }
            for r in &records {
                assert!(r.priced_at_duals);
                assert!(&r.restricted_value + &r.sep_value <= opt);
                assert!(r.lower_bound <= opt);
                assert!(opt <= r.restricted_value);
            }
            let last = records.last().unwrap();
            assert_eq!(last.restricted_value, opt);
            assert!(sol.iterations as u128 <= inst.tuple_count().unwrap());
        }
    }

    #[test]
    fn smoothed_float_rounds_keep_a_valid_lower_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..6 {
            let inst = random_instance(&mut rng, 4, 4);
            let opt = brute_mot(&inst, 10_000).unwrap().value;
            let mut records = Vec::new();
            let config = ColgenConfig { batch: 2, ..Default::default() };
            let sol = solve_mot_with_progress(&inst, &config, |r| records.push(r.clone())).unwrap();
            assert_eq!(sol.value, opt);
            for w in records.windows(2) {
                assert!(w[0].lower_bound <= w[1].lower_bound);
                assert!(w[0].exact_lp <= w[1].exact_lp);
            }
            assert!(records.iter().all(|r| r.lower_bound <= opt));
            let last = records.last().unwrap();
            assert!(last.exact_lp && last.priced_at_duals);
            assert!(sol.iterations as u128 <= inst.tuple_count().unwrap());
            assert_eq!(last.lower_bound, opt);
        }
    }

    #[test]
    fn projection_seed_extends_the_north_west_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let inst = random_instance(&mut rng, 5, 3);
        let (nw, _) = initial_tuple_set(&inst);
        let seed = projection_seed(&inst);
        assert_eq!(&seed[..nw.len()], &nw[..]);
        assert_eq!(seed.iter().collect::<HashSet<_>>().len(), seed.len());
        assert_eq!(projection_directions(2), vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, -1]]);
        assert_eq!(projection_directions(3).len(), 9);
    }

    #[test]
    fn certificate_rejects_perturbations() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inst = random_instance(&mut rng, 3, 3);
        let sol = solve_mot(&inst, &ColgenConfig::default()).unwrap();
        assert!(verify_certificate(&sol, &inst).passed());

        let mut bad = sol.clone();
        let (t, _) = bad.coupling.iter().next().map(|(t, m)| (t.clone(), m.clone())).unwrap();
        bad.coupling.add(t, ratio(1, 1000));
        let report = verify_certificate(&bad, &inst);
        assert!(report.failure.unwrap().contains("marginal"));

        // Raise a potential on a tight tuple: the dual objective moves off the primal.
        let mut bad = sol.clone();
        let (t, _) = sol.coupling.iter().next().unwrap();
        bad.potentials.p[0][t.get(0)] += ratio(1, 100);
        assert!(!verify_certificate(&bad, &inst).passed());

        // Constant shifts that cancel leave every reduced cost and the objective alone.
        let mut shifted = sol.clone();
        shifted.potentials.p[0].iter_mut().for_each(|v| *v += ratio(1, 100));
        shifted.potentials.p[1].iter_mut().for_each(|v| *v -= ratio(1, 100));
        assert!(verify_certificate(&shifted, &inst).passed());

        // A balanced transfer keeps the objective but breaks dual feasibility,
        // so only the oracle check can catch it.
        let mut infeasible = sol.clone();
        let (a, b) = (t.get(0), t.get(1));
        let big = int(100);
        infeasible.potentials.p[0][a] += &big * &inst.measure(1).masses()[b];
        infeasible.potentials.p[1][b] -= &big * &inst.measure(0).masses()[a];
        let report = verify_certificate(&infeasible, &inst);
        assert_eq!(report.dual_value, sol.value);
        assert!(report.sep_value.unwrap().is_negative());
        assert!(report.failure.unwrap().contains("reduced cost"));
    }

    #[test]
    fn iteration_cap_is_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let inst = random_instance(&mut rng, 3, 4);
        let config = ColgenConfig { batch: 1, max_iterations: Some(1), ..Default::default() };
        match solve_mot(&inst, &config) {
            Err(Error::IterationCap(1)) => {}
            Ok(sol) => assert_eq!(sol.iterations, 1),
            Err(e) => panic!("unexpected error {e}"),
        }
    }
}
