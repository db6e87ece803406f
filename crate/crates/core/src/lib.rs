//! Majorization lattice on ordered probability vectors, with Rényi and
//! Tsallis entropies and a harness for checking entropy inequalities on it.
//!
//! ```
//! use majlat_core::{join, meet, OrderedPmf};
//!
//! let p = OrderedPmf::new(&[0.6, 0.2, 0.2]).unwrap();
//! let q = OrderedPmf::new(&[0.45, 0.4, 0.15]).unwrap();
//! assert!(meet(&p, &q).approx_eq(&OrderedPmf::new(&[0.45, 0.35, 0.2]).unwrap(), 1e-12));
//! assert!(join(&p, &q).approx_eq(&OrderedPmf::new(&[0.6, 0.25, 0.15]).unwrap(), 1e-12));
//! ```

pub mod couplings;
pub mod econ;
pub mod entropy;
pub mod error;
pub mod inequalities;
pub mod io;
pub mod lattice;
pub mod pmf;

pub use couplings::{
    aggregate_by_extremum, comonotone_coupling, comonotone_many, independent_coupling, marginal,
    sorted_mass_vector, Axis, Coupling, CouplingKind, Extremum,
};
pub use econ::{check_metric_axioms, entropy_distance, renyi_theil, theil, DistanceValue};
pub use entropy::{entropy, renyi, shannon, tsallis, AlphaOrder, Family, LogBase};
pub use error::{Error, Result};
pub use lattice::{beta_vector, concavify, join, join_many, meet, meet_many, LatticePair};
pub use pmf::{LorenzCurve, OrderedPmf, Partition, RawVector, CMP_TOL, NORM_TOL, SUPP_TOL};
