//! Exact computations for twisted de Rham cohomology, gerbe Cech-de Rham
//! total complexes and finite-site sheaf theory.

pub mod cdga;
pub mod gerbe;
pub mod linalg;
pub mod oracle;
pub mod site;
pub mod spectral;
pub mod twisted;
