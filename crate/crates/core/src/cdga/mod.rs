//! Finite-dimensional commutative differential graded algebras over `Q`.

mod algebra;
mod build;
mod cohomology;
pub mod fixtures;
mod json;
mod morphism;
mod validate;

pub use algebra::{point, Cdga, CdgaError, Degree, Element};
pub use build::{contractible, exterior_algebra, free_cdga, free_cdga_with_monomials, product_cdga, tensor_cdga, Generator};
pub use cohomology::{betti, cohomology_ring, CohomologyRing};
pub use json::{from_json, to_json, CdgaJson};
pub use morphism::CdgaMorphism;
pub use validate::{validate_cdga, ValidationReport, Violation};
