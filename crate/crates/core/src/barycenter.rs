//! Barycenters from multimarginal couplings: exact and grid-rounded solves,
//! and an independent evaluation of the barycenter objective.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::colgen::{solve_mot_with_progress, verify_certificate_with, ColgenConfig, IterationRecord, MotSolution};
use crate::error::{Error, Result};
use crate::lp::{simplex_solve, LpStatus, StandardLp};
use crate::model::{BarycenterInstance, DiscreteMeasure, IndexTuple, Point, SparseCoupling};
use crate::numeric::{ceil, round_to_multiple, Rational};
use crate::oracle::barycentric_point;
use crate::par::{self, Parallelism};

/// `(barycenter atom, source atom, mass)`.
pub type TransportEntry = (usize, usize, Rational);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarycenterSolution {
    pub barycenter: DiscreteMeasure,
    pub cost: Rational,
    /// One plan per input measure, sorted by barycenter atom then source atom.
    pub transport_maps: Vec<Vec<TransportEntry>>,
    pub mot: MotSolution,
}

/// Image of `coupling` under `(x_1, ..., x_k) -> sum_i lambda_i x_i`.
/// Tuples landing on the same point share one atom. The map sends each tuple
/// of the coupling to its atom's index.
pub fn pushforward(
    coupling: &SparseCoupling,
    inst: &BarycenterInstance,
) -> Result<(DiscreteMeasure, BTreeMap<IndexTuple, usize>)> {
    let mut atoms: Vec<Point> = Vec::new();
    let mut masses: Vec<Rational> = Vec::new();
    let mut index: HashMap<Point, usize> = HashMap::new();
    let mut map = BTreeMap::new();
    for (t, m) in coupling.iter() {
        let y = barycentric_point(t, inst)?;
        let a = *index.entry(y.clone()).or_insert_with(|| {
            atoms.push(y);
            masses.push(Rational::zero());
            atoms.len() - 1
        });
        masses[a] += m;
        map.insert(t.clone(), a);
    }
    Ok((DiscreteMeasure::new(atoms, masses)?, map))
}

/// Per-measure plans `nu -> mu_i` read off the coupling.
pub fn transport_maps(
    coupling: &SparseCoupling,
    atom_map: &BTreeMap<IndexTuple, usize>,
    k: usize,
) -> Vec<Vec<TransportEntry>> {
    (0..k)
        .map(|i| {
            let mut plan: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
            for (t, m) in coupling.iter() {
                *plan.entry((atom_map[t], t.get(i))).or_insert_with(Rational::zero) += m;
            }
            plan.into_iter().map(|((a, j), m)| (a, j, m)).collect()
        })
        .collect()
}

pub fn solve_exact(inst: &BarycenterInstance) -> Result<BarycenterSolution> {
    solve_exact_with(inst, &ColgenConfig::default())
}

/// Solves the multimarginal problem, rechecks its certificate, and pushes the
/// coupling forward.
pub fn solve_exact_with(inst: &BarycenterInstance, config: &ColgenConfig) -> Result<BarycenterSolution> {
    solve_exact_with_progress(inst, config, |_| {})
}

pub fn solve_exact_with_progress(
    inst: &BarycenterInstance,
    config: &ColgenConfig,
    on_iteration: impl FnMut(&IterationRecord),
) -> Result<BarycenterSolution> {
    let mot = solve_mot_with_progress(inst, config, on_iteration)?;
    let report = verify_certificate_with(&mot, inst, config);
    if let Some(failure) = report.failure {
        return Err(Error::Certificate(failure));
    }
    let (barycenter, atom_map) = pushforward(&mot.coupling, inst)?;
    Ok(BarycenterSolution {
        barycenter,
        cost: mot.value.clone(),
        transport_maps: transport_maps(&mot.coupling, &atom_map, inst.k()),
        mot,
    })
}

/// A rounded copy of an instance. Atoms are stored relative to `offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantizedInstance {
    pub instance: BarycenterInstance,
    pub offset: Point,
    pub delta_x: Rational,
    pub delta_lambda: Rational,
    /// Largest squared norm of a translated atom.
    pub radius_sq: Rational,
}

/// Smallest integer `s >= 0` with `s^2 >= v`.
fn ceil_sqrt(v: &Rational) -> BigInt {
    let c = ceil(v).max(BigInt::zero());
    let s = c.sqrt();
    if &s * &s < c {
        s + 1
    } else {
        s
    }
}

/// Translates so every coordinate's minimum is zero, rounds coordinates to
/// multiples of `delta_x` and weights to multiples of `delta_lambda`.
///
/// With `R` the largest squared norm after translation:
/// `delta_x = eps / (16 k max(1, ceil(sqrt(d R))))` and
/// `delta_lambda = min(eps / (16 k max(1, ceil(4 R))), 1 / (2 k^2))`.
/// Each atom moves by at most `sqrt(d) delta_x / 2`, which shifts every
/// squared distance inside the hull by at most `eps / (8 k)` plus a
/// second-order term. Weights are rounded with a floor of `delta_lambda` and
/// the residual goes to the largest weight, so the weights move by at most
/// `2 k delta_lambda` in total, and every distance is at most `4 R`. Together
/// the objective moves by well under `eps`.
pub fn quantize_instance(inst: &BarycenterInstance, eps: &Rational) -> Result<QuantizedInstance> {
    if !eps.is_positive() {
        return Err(Error::NonPositiveEpsilon);
    }
    let d = inst.dimension();
    let k = inst.k();
    let offset: Point = (0..d)
        .map(|c| {
            inst.measures()
                .iter()
                .flat_map(|m| m.atoms().iter().map(move |a| a[c].clone()))
                .min()
                .expect("instances have atoms")
        })
        .collect();
    let shifted = inst.map_atoms(|a| a.iter().zip(&offset).map(|(x, o)| x - o).collect());
    let radius_sq = shifted
        .measures()
        .iter()
        .flat_map(|m| m.atoms())
        .map(|a| a.iter().map(|x| x * x).sum::<Rational>())
        .max()
        .unwrap_or_else(Rational::zero);

    let kk = Rational::from_integer(BigInt::from(k));
    let sixteen_k = Rational::from_integer(16.into()) * &kk;
    let one = BigInt::one();
    let dr = Rational::from_integer(BigInt::from(d)) * &radius_sq;
    let delta_x = eps / (&sixteen_k * Rational::from_integer(ceil_sqrt(&dr).max(one.clone())));
    let four_r = Rational::from_integer(4.into()) * &radius_sq;
    let cap = Rational::new(one.clone(), BigInt::from(2) * BigInt::from(k) * BigInt::from(k));
    let delta_lambda = (eps / (&sixteen_k * Rational::from_integer(ceil(&four_r).max(one)))).min(cap);

    let mut weights: Vec<Rational> = inst
        .weights()
        .iter()
        .map(|l| round_to_multiple(l, &delta_lambda).max(delta_lambda.clone()))
        .collect();
    let total: Rational = weights.iter().sum();
    let largest = (0..k)
        .max_by(|&a, &b| weights[a].cmp(&weights[b]).then(b.cmp(&a)))
        .expect("k >= 1");
    weights[largest] += Rational::one() - total;

    let measures = shifted
        .measures()
        .iter()
        .map(|m| {
            let atoms = m
                .atoms()
                .iter()
                .map(|a| a.iter().map(|x| round_to_multiple(x, &delta_x)).collect())
                .collect();
            DiscreteMeasure::new(atoms, m.masses().to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QuantizedInstance {
        instance: BarycenterInstance::new(d, measures, weights)?,
        offset,
        delta_x,
        delta_lambda,
        radius_sq,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxSolution {
    /// Barycenter in the original coordinates; `cost` is the exact optimum of
    /// the rounded instance.
    pub solution: BarycenterSolution,
    pub quantized: QuantizedInstance,
}

pub fn solve_approx(inst: &BarycenterInstance, eps: &Rational) -> Result<ApproxSolution> {
    solve_approx_with(inst, eps, &ColgenConfig::default())
}

pub fn solve_approx_with(
    inst: &BarycenterInstance,
    eps: &Rational,
    config: &ColgenConfig,
) -> Result<ApproxSolution> {
    solve_approx_with_progress(inst, eps, config, |_| {})
}

pub fn solve_approx_with_progress(
    inst: &BarycenterInstance,
    eps: &Rational,
    config: &ColgenConfig,
    on_iteration: impl FnMut(&IterationRecord),
) -> Result<ApproxSolution> {
    let quantized = quantize_instance(inst, eps)?;
    let mut solution = solve_exact_with_progress(&quantized.instance, config, on_iteration)?;
    let atoms = solution
        .barycenter
        .atoms()
        .iter()
        .map(|a| a.iter().zip(&quantized.offset).map(|(x, o)| x + o).collect())
        .collect();
    solution.barycenter = DiscreteMeasure::new(atoms, solution.barycenter.masses().to_vec())?;
    Ok(ApproxSolution { solution, quantized })
}

/// Squared 2-Wasserstein distance, from the transportation LP.
pub fn ot_cost(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<Rational> {
    if mu.dimension() != nu.dimension() {
        return Err(Error::DimensionMismatch {
            expected: mu.dimension(),
            found: nu.dimension(),
        });
    }
    let (n, m) = (mu.len(), nu.len());
    let b = mu.masses().iter().chain(nu.masses()).cloned().collect();
    let mut lp = StandardLp::new(b);
    for (a, x) in mu.atoms().iter().enumerate() {
        for (c, y) in nu.atoms().iter().enumerate() {
            let cost: Rational = x.iter().zip(y).map(|(p, q)| (p - q) * (p - q)).sum();
            lp.push_column(vec![(a, Rational::one()), (n + c, Rational::one())], cost)?;
        }
    }
    debug_assert_eq!(lp.cols(), n * m);
    let sol = simplex_solve(&lp);
    if sol.status != LpStatus::Optimal {
        return Err(Error::NotOptimal(sol.status));
    }
    Ok(sol.value)
}

/// `sum_i lambda_i W(mu_i, nu)`.
pub fn objective(nu: &DiscreteMeasure, inst: &BarycenterInstance) -> Result<Rational> {
    objective_with(nu, inst, Parallelism::default())
}

pub fn objective_with(nu: &DiscreteMeasure, inst: &BarycenterInstance, mode: Parallelism) -> Result<Rational> {
    let terms = par::map(mode, inst.measures(), |mu| ot_cost(mu, nu));
    terms
        .into_iter()
        .zip(inst.weights())
        .map(|(t, l)| t.map(|t| t * l))
        .sum()
}
