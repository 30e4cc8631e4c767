//! Small named models used throughout the tests and the CLI.

use super::algebra::{point, Cdga};
use super::build::{contractible, exterior_algebra, free_cdga, Generator};
use crate::linalg::rat;

/// `Λ(x₃)`, a formal model of the 3-sphere.
pub fn s3() -> Cdga {
    exterior_algebra("s3", &[(3, None)]).expect("s3")
}

/// `Λ(a₁, b₁, c₁)`, a formal model of the 3-torus.
pub fn t3() -> Cdga {
    exterior_algebra("t3", &[(1, None), (1, None), (1, None)]).expect("t3")
}

/// Cohomology ring of `S² × S³`.
pub fn s2xs3() -> Cdga {
    exterior_algebra("s2xs3", &[(2, Some(1)), (3, None)]).expect("s2xs3")
}

/// Truncated polynomial algebra `Q[x₂]/x³`, a model of the complex projective plane.
pub fn cp2() -> Cdga {
    exterior_algebra("cp2", &[(2, Some(2))]).expect("cp2")
}

/// `Λ(s₂, u₁; du = s)` truncated above degree 4; acyclic.
pub fn disk() -> Cdga {
    contractible(2)
}

pub fn point_model() -> Cdga {
    point()
}

/// `Λ(a, b, c, β; dβ = abc)` truncated above degree 3: the torus with the
/// top class made exact.
pub fn t3_beta() -> Cdga {
    let gens = [
        Generator::new("a", 1),
        Generator::new("b", 1),
        Generator::new("c", 1),
        Generator::new("beta", 2).with_d(vec![(rat(1), vec![0, 1, 2])]),
    ];
    free_cdga("t3_beta", &gens, 3).expect("t3_beta")
}

/// Every bundled model, by name.
pub fn all() -> Vec<Cdga> {
    vec![point_model(), s3(), t3(), s2xs3(), cp2(), disk(), t3_beta()]
}

pub fn by_name(name: &str) -> Option<Cdga> {
    all().into_iter().find(|c| c.name() == name)
}
