//! JSON instance and solution files. Rationals are written as exact `p/q`
//! strings; fields ending in `_approx` are `f64` conveniences and are ignored
//! on input.

use std::fmt;

use exact_barycenter::colgen::CertificateReport;
use exact_barycenter::model::{
    validate_instance, BarycenterInstance, DiscreteMeasure, DualPotentials, IndexTuple, RawInstance,
    RawMeasure, SparseCoupling,
};
use exact_barycenter::numeric::{parse_rational, render_rational, to_f64, Rational};
use exact_barycenter::{BarycenterSolution, MotSolution};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A rational that reads from a string (`"3/4"`, `"0.75"`) or a JSON number
/// and always writes as `"p/q"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rat(pub Rational);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&render_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct RatVisitor;
        impl Visitor<'_> for RatVisitor {
            type Value = Rat;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as \"p/q\", a decimal string or a number")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rat, E> {
                parse_rational(v).map(Rat).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
                Ok(Rat(Rational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
                Ok(Rat(Rational::from_integer(v.into())))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rat, E> {
                // The shortest decimal that round-trips, read exactly.
                parse_rational(&v.to_string()).map(Rat).map_err(E::custom)
            }
        }
        d.deserialize_any(RatVisitor)
    }
}

fn rats(v: &[Rational]) -> Vec<Rat> {
    v.iter().cloned().map(Rat).collect()
}

fn unrat(v: Vec<Rat>) -> Vec<Rational> {
    v.into_iter().map(|r| r.0).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureFile {
    pub atoms: Vec<Vec<Rat>>,
    pub masses: Vec<Rat>,
}

impl From<&DiscreteMeasure> for MeasureFile {
    fn from(m: &DiscreteMeasure) -> Self {
        MeasureFile {
            atoms: m.atoms().iter().map(|a| rats(a)).collect(),
            masses: rats(m.masses()),
        }
    }
}

impl MeasureFile {
    fn raw(self) -> RawMeasure {
        RawMeasure {
            atoms: self.atoms.into_iter().map(unrat).collect(),
            masses: unrat(self.masses),
        }
    }

    pub fn to_measure(&self) -> exact_barycenter::Result<DiscreteMeasure> {
        let raw = self.clone().raw();
        DiscreteMeasure::new(raw.atoms, raw.masses)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub dimension: usize,
    pub weights: Vec<Rat>,
    pub measures: Vec<MeasureFile>,
}

impl From<&BarycenterInstance> for InstanceFile {
    fn from(inst: &BarycenterInstance) -> Self {
        InstanceFile {
            dimension: inst.dimension(),
            weights: rats(inst.weights()),
            measures: inst.measures().iter().map(MeasureFile::from).collect(),
        }
    }
}

impl InstanceFile {
    pub fn validate(self) -> exact_barycenter::Result<BarycenterInstance> {
        validate_instance(RawInstance {
            dimension: self.dimension,
            weights: unrat(self.weights),
            measures: self.measures.into_iter().map(MeasureFile::raw).collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingEntry {
    /// Zero-based atom index per measure.
    pub tuple: Vec<usize>,
    pub mass: Rat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub primal_value: Rat,
    pub dual_value: Rat,
    pub sep_value: Rat,
    pub gap: Rat,
    pub potentials: Vec<Vec<Rat>>,
    pub coupling: Vec<CouplingEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantizationFile {
    pub eps: Rat,
    pub delta_x: Rat,
    pub delta_lambda: Rat,
    pub offset: Vec<Rat>,
    /// Cost of the rounded instance.
    pub rounded_cost: Rat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsFile {
    pub iterations: u64,
    pub columns: usize,
    pub columns_generated: usize,
    pub support_size: usize,
    pub wall_time_seconds: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantization: Option<QuantizationFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub cost: Rat,
    pub cost_approx: f64,
    pub barycenter: MeasureFile,
    /// Per input measure, `[barycenter atom, source atom, mass]` triples with
    /// zero-based indices.
    pub transport_maps: Vec<Vec<(usize, usize, Rat)>>,
    pub certificate: CertificateFile,
    pub stats: StatsFile,
}

impl SolutionFile {
    pub fn new(sol: &BarycenterSolution, report: &CertificateReport, wall_time_seconds: f64) -> Self {
        let mot = &sol.mot;
        SolutionFile {
            cost: Rat(sol.cost.clone()),
            cost_approx: to_f64(&sol.cost),
            barycenter: MeasureFile::from(&sol.barycenter),
            transport_maps: sol
                .transport_maps
                .iter()
                .map(|m| m.iter().map(|(a, b, w)| (*a, *b, Rat(w.clone()))).collect())
                .collect(),
            certificate: CertificateFile {
                primal_value: Rat(report.primal_value.clone()),
                dual_value: Rat(report.dual_value.clone()),
                sep_value: Rat(report.sep_value.clone().unwrap_or_else(|| mot.sep_value.clone())),
                gap: Rat(report.gap()),
                potentials: mot.potentials.p.iter().map(|p| rats(p)).collect(),
                coupling: mot
                    .coupling
                    .iter()
                    .map(|(t, m)| CouplingEntry { tuple: t.as_slice().to_vec(), mass: Rat(m.clone()) })
                    .collect(),
            },
            stats: StatsFile {
                iterations: mot.iterations,
                columns: mot.tuples.len(),
                columns_generated: mot.columns_generated,
                support_size: sol.barycenter.len(),
                wall_time_seconds,
                quantization: None,
            },
        }
    }

    pub fn potentials(&self) -> DualPotentials {
        DualPotentials {
            p: self.certificate.potentials.iter().map(|p| p.iter().map(|r| r.0.clone()).collect()).collect(),
        }
    }

    /// The transport part of the certificate, in the form the verifier takes.
    pub fn mot_solution(&self) -> MotSolution {
        let mut coupling = SparseCoupling::new();
        let mut tuples = Vec::new();
        for e in &self.certificate.coupling {
            let t = IndexTuple::new(e.tuple.clone());
            coupling.add(t.clone(), e.mass.0.clone());
            tuples.push(t);
        }
        MotSolution {
            coupling,
            potentials: self.potentials(),
            value: self.cost.0.clone(),
            iterations: self.stats.iterations,
            columns_generated: self.stats.columns_generated,
            tuples,
            sep_value: self.certificate.sep_value.0.clone(),
        }
    }
}
