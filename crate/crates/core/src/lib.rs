//! Exact Wasserstein barycenters of discrete measures in the plane.
//!
//! The barycenter problem is solved through its multimarginal transport LP.
//! Columns are generated by a pricing oracle that enumerates the non-empty
//! cells of overlaid power diagrams. A floating-point simplex steers the
//! search and an exact rational simplex settles the final restricted LP, so
//! the result comes with a zero-gap certificate.
//!
//! ```
//! use exact_barycenter::{generate, solve_exact, numeric::int};
//!
//! let inst = generate::diracs(vec![vec![int(0), int(0)], vec![int(2), int(0)]]).unwrap();
//! let sol = solve_exact(&inst).unwrap();
//! assert_eq!(sol.cost, int(1));
//! assert_eq!(sol.barycenter.atoms(), &[vec![int(1), int(0)]]);
//! ```

pub mod barycenter;
pub mod colgen;
pub mod error;
pub mod generate;
pub mod geometry;
pub mod lp;
pub mod model;
pub mod numeric;
pub mod oracle;
pub mod par;
pub mod reference;

pub use barycenter::{objective, ot_cost, quantize_instance, solve_approx, solve_exact, BarycenterSolution};
pub use colgen::{solve_mot, verify_certificate, ColgenConfig, MotSolution, OracleKind};
pub use error::{Error, Result};
pub use model::{BarycenterInstance, DiscreteMeasure, DualPotentials, IndexTuple, SparseCoupling};
pub use numeric::Rational;
pub use oracle::{sep, CellStrategy, SepResult};
pub use par::Parallelism;
