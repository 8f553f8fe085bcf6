//! World-function geometry over finite point sets.
//!
//! A σ-space is a finite set of points Ω with a real function σ on ordered
//! pairs that vanishes on the diagonal. From σ alone this crate builds the
//! scalar product of point-pair vectors, decides when two vectors are
//! equivalent, and finds which linear combinations of vectors exist.

pub mod equivalence;
pub mod error;
pub mod generate;
pub mod linear;
pub mod oracle;
pub mod space;
pub mod table_file;
pub mod vector;

pub use equivalence::{equivalence_classes, equivalent, EquivalenceWitness, Partition, Slot};
pub use error::{Error, Result};
pub use linear::{
    chain_sum, construct_guaranteed, guaranteed_case, negate, solve_combination, survey_linearity, CaseId,
    Coefficients, CombinationResult, SolveOptions, SurveyReport, SurveyRow,
};
pub use space::{euclidean_sigma, GridSpec, PointId, SigmaSpace, DEFAULT_TOLERANCE};
pub use vector::{norm_squared, scalar_product, verify_identities, IdentityId, IdentityReport, Vector};
