//! Brute-force reference implementations. Nothing here calls the sparse
//! elimination code.

pub mod dense;
pub mod diagram;
pub mod divisors;
pub mod mayer_vietoris;
pub mod random;
pub mod twisted;

pub use dense::{dense_rank, DenseMatrix};
pub use diagram::{exhaustive_colimit_dim, exhaustive_limit, DenseSpace, Diagram};
pub use divisors::{cochain_cohomology, invariant_factors, simplicial_cochains, AbelianGroup};
pub use mayer_vietoris::mayer_vietoris_betti;
pub use twisted::{dense_betti, dense_twisted_betti};
