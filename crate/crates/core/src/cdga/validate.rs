use super::algebra::Cdga;
use crate::linalg::{rational::sign, SparseVec};
use std::fmt;

/// A violated CDGA axiom, with the basis indices that witness it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DifferentialDegree { basis: usize, target: usize },
    DSquared { basis: usize },
    ProductDegree { left: usize, right: usize, target: usize },
    Unit { basis: usize },
    Commutativity { left: usize, right: usize },
    Associativity { a: usize, b: usize, c: usize },
    Leibniz { left: usize, right: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DifferentialDegree { basis, target } => {
                write!(f, "d(e{basis}) has a component on e{target} of the wrong degree")
            }
            Violation::DSquared { basis } => write!(f, "d(d(e{basis})) != 0"),
            Violation::ProductDegree { left, right, target } => {
                write!(f, "e{left}*e{right} has a component on e{target} of the wrong degree")
            }
            Violation::Unit { basis } => write!(f, "unit does not act as identity on e{basis}"),
            Violation::Commutativity { left, right } => {
                write!(f, "graded commutativity fails for (e{left}, e{right})")
            }
            Violation::Associativity { a, b, c } => {
                write!(f, "associativity fails for (e{a}, e{b}, e{c})")
            }
            Violation::Leibniz { left, right } => write!(f, "Leibniz rule fails for (e{left}, e{right})"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks every axiom exhaustively on basis elements, pairs and triples.
pub fn validate_cdga(c: &Cdga) -> ValidationReport {
    let n = c.dim();
    let deg = c.degrees();
    let mut out = Vec::new();
    for j in 0..n {
        let dj = c.d(&SparseVec::unit(j));
        for (k, _) in dj.iter() {
            if deg[k] != deg[j] + 1 {
                out.push(Violation::DifferentialDegree { basis: j, target: k });
            }
        }
        if !c.d(&dj).is_zero() {
            out.push(Violation::DSquared { basis: j });
        }
    }
    for i in 0..n {
        let e = SparseVec::unit(i);
        if c.basis_product(0, i) != &e || c.basis_product(i, 0) != &e {
            out.push(Violation::Unit { basis: i });
        }
    }
    for i in 0..n {
        for j in 0..n {
            let p = c.basis_product(i, j);
            for (k, _) in p.iter() {
                if deg[k] != deg[i] + deg[j] {
                    out.push(Violation::ProductDegree { left: i, right: j, target: k });
                }
            }
            if j >= i {
                let q = c.basis_product(j, i).scale(&sign(deg[i] * deg[j] % 2 == 1));
                if p != &q {
                    out.push(Violation::Commutativity { left: i, right: j });
                }
            }
            let ei = SparseVec::unit(i);
            let ej = SparseVec::unit(j);
            let lhs = c.d(p);
            let rhs = c
                .mul(&c.d(&ei), &ej)
                .add(&c.mul(&ei, &c.d(&ej)).scale(&sign(deg[i] % 2 == 1)));
            if lhs != rhs {
                out.push(Violation::Leibniz { left: i, right: j });
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = c.basis_product(a, b);
            for cc in 0..n {
                let left = c.mul(ab, &SparseVec::unit(cc));
                let right = c.mul(&SparseVec::unit(a), c.basis_product(b, cc));
                if left != right {
                    out.push(Violation::Associativity { a, b, c: cc });
                }
            }
        }
    }
    ValidationReport { violations: out }
}
