//! Problem and solution data: measures, instances, couplings, potentials.
//!
//! Indices are 0-based in memory. Anything user-facing ([`IndexTuple`]'s
//! `Display`, the JSON files) uses 1-based indices.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{Rational, Vec2};

/// A point in `dimension`-space.
pub type Point = Vec<Rational>;

/// Finitely supported probability measure: strictly positive masses summing
/// to exactly one. Repeated atoms are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteMeasure {
    atoms: Vec<Point>,
    masses: Vec<Rational>,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<Point>, masses: Vec<Rational>) -> Result<Self> {
        if atoms.len() != masses.len() {
            return Err(Error::LengthMismatch {
                left: atoms.len(),
                right: masses.len(),
            });
        }
        if atoms.is_empty() {
            return Err(Error::InvalidInstance("measure has no atoms".into()));
        }
        let dim = atoms[0].len();
        if let Some(bad) = atoms.iter().find(|a| a.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        if masses.iter().any(|m| !m.is_positive()) {
            return Err(Error::InvalidInstance("masses must be positive".into()));
        }
        let total: Rational = masses.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidInstance(format!(
                "masses sum to {total}, not 1"
            )));
        }
        Ok(DiscreteMeasure { atoms, masses })
    }

    /// Single atom of mass one.
    pub fn dirac(atom: Point) -> Self {
        DiscreteMeasure {
            atoms: vec![atom],
            masses: vec![Rational::one()],
        }
    }

    pub fn atoms(&self) -> &[Point] {
        &self.atoms
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.atoms[0].len()
    }
}

/// Unvalidated measure as read from a file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawMeasure {
    pub atoms: Vec<Point>,
    pub masses: Vec<Rational>,
}

/// Unvalidated instance; turn it into a [`BarycenterInstance`] with
/// [`validate_instance`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawInstance {
    pub dimension: usize,
    pub measures: Vec<RawMeasure>,
    pub weights: Vec<Rational>,
}

/// `k` measures with strictly positive barycentric weights summing to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarycenterInstance {
    dimension: usize,
    measures: Vec<DiscreteMeasure>,
    weights: Vec<Rational>,
}

impl BarycenterInstance {
    /// Builds and validates in one step (no stripping of zero entries).
    pub fn new(
        dimension: usize,
        measures: Vec<DiscreteMeasure>,
        weights: Vec<Rational>,
    ) -> Result<Self> {
        validate_instance(RawInstance {
            dimension,
            measures: measures
                .into_iter()
                .map(|m| RawMeasure {
                    atoms: m.atoms,
                    masses: m.masses,
                })
                .collect(),
            weights,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn measures(&self) -> &[DiscreteMeasure] {
        &self.measures
    }

    pub fn measure(&self, i: usize) -> &DiscreteMeasure {
        &self.measures[i]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Number of marginals `k`.
    pub fn k(&self) -> usize {
        self.measures.len()
    }

    /// Support sizes `n_1, ..., n_k`.
    pub fn sizes(&self) -> Vec<usize> {
        self.measures.iter().map(DiscreteMeasure::len).collect()
    }

    /// `sum_i n_i - k + 1`: the rank of the marginal constraints and hence the
    /// support bound of any vertex coupling.
    pub fn sparsity_bound(&self) -> usize {
        self.sizes().iter().sum::<usize>() - self.k() + 1
    }

    /// `prod_i n_i`, or `None` on overflow.
    pub fn tuple_count(&self) -> Option<u128> {
        self.measures
            .iter()
            .try_fold(1u128, |acc, m| acc.checked_mul(m.len() as u128))
    }

    pub fn atom(&self, i: usize, j: usize) -> &Point {
        &self.measures[i].atoms[j]
    }

    /// Atom `(i, j)` as a plane point. Dimension 1 embeds on the x-axis.
    pub fn atom2(&self, i: usize, j: usize) -> Vec2 {
        let a = self.atom(i, j);
        Vec2::new(
            a.first().cloned().unwrap_or_else(Rational::zero),
            a.get(1).cloned().unwrap_or_else(Rational::zero),
        )
    }

    /// Checks that `tuple` indexes into this instance.
    pub fn check_tuple(&self, tuple: &IndexTuple) -> Result<()> {
        if tuple.len() != self.k() {
            return Err(Error::LengthMismatch {
                left: tuple.len(),
                right: self.k(),
            });
        }
        for (j, m) in tuple.iter().zip(&self.measures) {
            if j >= m.len() {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    limit: m.len(),
                });
            }
        }
        Ok(())
    }

    /// Applies `f` to every atom, keeping masses and weights.
    pub fn map_atoms(&self, mut f: impl FnMut(&Point) -> Point) -> BarycenterInstance {
        BarycenterInstance {
            dimension: self.dimension,
            measures: self
                .measures
                .iter()
                .map(|m| DiscreteMeasure {
                    atoms: m.atoms.iter().map(&mut f).collect(),
                    masses: m.masses.clone(),
                })
                .collect(),
            weights: self.weights.clone(),
        }
    }
}

impl From<&BarycenterInstance> for RawInstance {
    fn from(inst: &BarycenterInstance) -> Self {
        RawInstance {
            dimension: inst.dimension,
            measures: inst
                .measures
                .iter()
                .map(|m| RawMeasure {
                    atoms: m.atoms.clone(),
                    masses: m.masses.clone(),
                })
                .collect(),
            weights: inst.weights.clone(),
        }
    }
}

/// Strips zero-weight measures and zero-mass atoms, then checks that what
/// remains is a proper instance.
pub fn validate_instance(raw: RawInstance) -> Result<BarycenterInstance> {
    let RawInstance {
        dimension,
        measures,
        weights,
    } = raw;
    if dimension == 0 {
        return Err(Error::InvalidInstance("dimension must be positive".into()));
    }
    if measures.len() != weights.len() {
        return Err(Error::LengthMismatch {
            left: measures.len(),
            right: weights.len(),
        });
    }
    if weights.iter().any(Signed::is_negative) {
        return Err(Error::InvalidInstance("negative weight".into()));
    }
    let weight_sum: Rational = weights.iter().sum();
    if !weight_sum.is_one() {
        return Err(Error::InvalidInstance(format!(
            "weights sum to {weight_sum}, not 1"
        )));
    }

    let mut kept_measures = Vec::new();
    let mut kept_weights = Vec::new();
    for (idx, (m, w)) in measures.into_iter().zip(weights).enumerate() {
        if m.atoms.len() != m.masses.len() {
            return Err(Error::LengthMismatch {
                left: m.atoms.len(),
                right: m.masses.len(),
            });
        }
        if let Some(a) = m.atoms.iter().find(|a| a.len() != dimension) {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                found: a.len(),
            });
        }
        if m.masses.iter().any(Signed::is_negative) {
            return Err(Error::InvalidInstance(format!(
                "measure {} has a negative mass",
                idx + 1
            )));
        }
        let total: Rational = m.masses.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidInstance(format!(
                "masses of measure {} sum to {total}, not 1",
                idx + 1
            )));
        }
        if w.is_zero() {
            continue;
        }
        let (atoms, masses) = m
            .atoms
            .into_iter()
            .zip(m.masses)
            .filter(|(_, mass)| !mass.is_zero())
            .unzip();
        kept_measures.push(DiscreteMeasure { atoms, masses });
        kept_weights.push(w);
    }
    if kept_measures.is_empty() {
        return Err(Error::InvalidInstance("no measure has positive weight".into()));
    }
    Ok(BarycenterInstance {
        dimension,
        measures: kept_measures,
        weights: kept_weights,
    })
}

/// One atom index per marginal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexTuple(Vec<usize>);

impl IndexTuple {
    /// From 0-based indices.
    pub fn new(indices: Vec<usize>) -> Self {
        IndexTuple(indices)
    }

    /// From 1-based indices, as written in files. `None` if any index is 0.
    pub fn from_one_based(indices: &[usize]) -> Option<Self> {
        indices
            .iter()
            .map(|&j| j.checked_sub(1))
            .collect::<Option<Vec<_>>>()
            .map(IndexTuple)
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|j| j + 1).collect()
    }

    pub fn get(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (n, j) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", j + 1)?;
        }
        write!(f, ")")
    }
}

/// Sparse `k`-way tensor; zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseCoupling {
    entries: BTreeMap<IndexTuple, Rational>,
}

impl SparseCoupling {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `mass` to the entry at `tuple`. Entries that cancel to zero are
    /// removed.
    pub fn add(&mut self, tuple: IndexTuple, mass: Rational) {
        if mass.is_zero() {
            return;
        }
        let entry = self.entries.entry(tuple).or_insert_with(Rational::zero);
        *entry += mass;
        if entry.is_zero() {
            self.entries.retain(|_, v| !v.is_zero());
        }
    }

    pub fn get(&self, tuple: &IndexTuple) -> Option<&Rational> {
        self.entries.get(tuple)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IndexTuple, &Rational)> {
        self.entries.iter()
    }

    /// Number of non-zero entries.
    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn total_mass(&self) -> Rational {
        self.entries.values().sum()
    }

    /// The `i`-th marginal as a vector of length `len`: entry `l` sums the mass
    /// of all tuples whose `i`-th index is `l`.
    pub fn marginal(&self, i: usize, len: usize) -> Result<Vec<Rational>> {
        let mut out = vec![Rational::zero(); len];
        for (tuple, mass) in &self.entries {
            if i >= tuple.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    limit: tuple.len(),
                });
            }
            let j = tuple.get(i);
            if j >= len {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    limit: len,
                });
            }
            out[j] += mass;
        }
        Ok(out)
    }

    /// Whether every marginal matches the instance exactly and every mass is
    /// positive.
    pub fn is_feasible_for(&self, inst: &BarycenterInstance) -> bool {
        self.entries.values().all(Signed::is_positive)
            && inst.measures().iter().enumerate().all(|(i, m)| {
                self.marginal(i, m.len())
                    .map(|marg| marg == m.masses())
                    .unwrap_or(false)
            })
    }
}

impl FromIterator<(IndexTuple, Rational)> for SparseCoupling {
    fn from_iter<I: IntoIterator<Item = (IndexTuple, Rational)>>(iter: I) -> Self {
        let mut c = SparseCoupling::new();
        for (t, m) in iter {
            c.add(t, m);
        }
        c
    }
}

/// Dual variables `p_1, ..., p_k`, one per atom of each marginal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPotentials {
    pub p: Vec<Vec<Rational>>,
}

impl DualPotentials {
    pub fn zeros(inst: &BarycenterInstance) -> Self {
        DualPotentials {
            p: inst
                .sizes()
                .into_iter()
                .map(|n| vec![Rational::zero(); n])
                .collect(),
        }
    }

    /// `sum_i <p_i, mu_i>`, the dual objective.
    pub fn objective(&self, inst: &BarycenterInstance) -> Rational {
        self.p
            .iter()
            .zip(inst.measures())
            .map(|(p, m)| {
                p.iter()
                    .zip(m.masses())
                    .map(|(a, b)| a * b)
                    .sum::<Rational>()
            })
            .sum()
    }

    /// `sum_i [p_i]_{j_i}`.
    pub fn tuple_sum(&self, tuple: &IndexTuple) -> Rational {
        tuple.iter().enumerate().map(|(i, j)| &self.p[i][j]).sum()
    }

    pub fn check_shape(&self, inst: &BarycenterInstance) -> Result<()> {
        if self.p.len() != inst.k() {
            return Err(Error::LengthMismatch {
                left: self.p.len(),
                right: inst.k(),
            });
        }
        for (p, m) in self.p.iter().zip(inst.measures()) {
            if p.len() != m.len() {
                return Err(Error::LengthMismatch {
                    left: p.len(),
                    right: m.len(),
                });
            }
        }
        Ok(())
    }
}
