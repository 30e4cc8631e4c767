//! Finite Grothendieck sites and presheaves of finite-dimensional rational
//! vector spaces.

pub mod category;
pub mod cech;
pub mod fixtures;
pub mod integral;
pub mod json;
pub mod morphism;
pub mod plus;
pub mod presheaf;
#[allow(clippy::module_inception)]
pub mod site;

use crate::linalg::LinalgError;
use thiserror::Error;

pub use category::{FiniteCategory, Morphism};
pub use cech::{cech_complex, glue, is_flabby, is_sheaf, restriction_to_cover, satisfies_descent, CechComplex, FlabbyWitness};
pub use integral::{nerve, nerve_cochains, punctured_cover, set_cover_nerve_cohomology};
pub use morphism::{
    adjunction_check, compose_pushforward_compare, pullback, pushforward, AdjunctionReport, ComparisonReport,
    Pulled, Pushed, SiteMorphismData,
};
pub use plus::{plus_construction, refinement_choices_agree, sheafify, Plus};
pub use presheaf::{nat_space, NatTrans, Presheaf};
pub use site::{poset_site, FibreProduct, FiniteSite, Pullback};

#[derive(Debug, Error)]
pub enum SiteError {
    #[error("malformed site: {0}")]
    Malformed(String),
    #[error("no pullback witness for ({f}, {g})")]
    MissingPullback { f: String, g: String },
    #[error("presheaf is not functorial: {0}")]
    NotFunctorial(String),
    #[error("pulled-back family is not a listed covering of {0}")]
    MissingCovering(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
