//! Gerbes with connection on finite covers of algebra models, their twisted
//! Čech–de Rham total complex and the comparison with `Ω[[z]]_λ`.

mod connection;
mod cover;
pub mod fixtures;
mod json;
mod phi;
mod total;

pub use connection::{
    alternating_value, curvature, sort_with_sign, validate_connection, ConnectionReport, ConnectionViolation,
    GerbeConnection,
};
pub use cover::{CoverDatum, CoverViolation};
pub use json::{ConnectionJson, CoverJson, FaceJson, GerbeJson, SimplexJson};
pub use phi::{bs1_bar_complex, bs1_complex, h0_column_check, phi_map, theorem_main_check, H0Report, PhiMap, TheoremReport};
pub use total::{add_cochains, build_total_complex, Cell, Cochain, Cochains, TotalComplex};

use crate::cdga::CdgaError;
use crate::linalg::LinalgError;
use crate::twisted::TwistError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GerbeError {
    #[error("malformed gerbe datum: {0}")]
    Malformed(String),
    #[error("connection fails validation: {}", .0.join("; "))]
    ValidationFailed(Vec<String>),
    #[error("no global 3-form restricts to the local curvatures")]
    NoGlobalForm,
    #[error("the global curvature is not unique: restrictions are not jointly injective in degree 3")]
    NotUnique,
    #[error("the global curvature is not closed")]
    NotClosed,
    #[error("D∘D is nonzero ({nnz} entries)")]
    DSquaredNonzero { nnz: usize },
    #[error("degree {degree} exceeds the truncation of the complex")]
    DegreeOverflow { degree: usize },
    #[error("cochain has a cell outside degree {degree} (column {column}, tuple {tuple:?})")]
    CellOutside { degree: usize, column: usize, tuple: Vec<usize> },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Cdga(#[from] CdgaError),
    #[error(transparent)]
    Twist(#[from] TwistError),
}
