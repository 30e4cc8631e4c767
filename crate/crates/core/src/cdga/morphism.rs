use super::algebra::{same_algebra, Cdga, CdgaError, Degree, Element};
use crate::linalg::{SparseMatrix, SparseVec};
use std::sync::Arc;

/// A degree-0 unital multiplicative chain map between two algebras.
#[derive(Debug, Clone)]
pub struct CdgaMorphism {
    source: Arc<Cdga>,
    target: Arc<Cdga>,
    matrix: SparseMatrix,
}

impl CdgaMorphism {
    /// Validates every morphism axiom on basis elements and pairs.
    pub fn new(source: Arc<Cdga>, target: Arc<Cdga>, matrix: SparseMatrix) -> Result<Self, CdgaError> {
        let f = CdgaMorphism { source, target, matrix };
        match f.violations().into_iter().next() {
            None => Ok(f),
            Some(v) => Err(CdgaError::NotMorphism(v)),
        }
    }

    /// Skips validation; use [`Self::violations`] to inspect the result.
    pub fn new_unchecked(source: Arc<Cdga>, target: Arc<Cdga>, matrix: SparseMatrix) -> Self {
        CdgaMorphism { source, target, matrix }
    }

    pub fn identity(a: &Arc<Cdga>) -> Self {
        CdgaMorphism { source: Arc::clone(a), target: Arc::clone(a), matrix: SparseMatrix::identity(a.dim()) }
    }

    pub fn source(&self) -> &Arc<Cdga> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Cdga> {
        &self.target
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn violations(&self) -> Vec<String> {
        let (s, t, m) = (&self.source, &self.target, &self.matrix);
        let mut out = Vec::new();
        if m.shape() != (t.dim(), s.dim()) {
            out.push(format!("matrix is {:?}, expected {:?}", m.shape(), (t.dim(), s.dim())));
            return out;
        }
        if m.column(0) != &t.unit() {
            out.push("not unital".to_string());
        }
        for j in 0..s.dim() {
            let img = m.column(j);
            let ok = match t.degree(img) {
                Degree::Zero => true,
                Degree::Of(k) => k == s.degree_of_basis(j),
                Degree::Mixed => false,
            };
            if !ok {
                out.push(format!("image of e{j} has the wrong degree"));
            }
            if t.d(img) != m.mul_vec(&s.d(&SparseVec::unit(j))) {
                out.push(format!("does not commute with d on e{j}"));
            }
        }
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                let lhs = m.mul_vec(s.basis_product(i, j));
                let rhs = t.mul(m.column(i), m.column(j));
                if lhs != rhs {
                    out.push(format!("not multiplicative on (e{i}, e{j})"));
                }
            }
        }
        out
    }

    pub fn apply_vec(&self, v: &SparseVec) -> SparseVec {
        self.matrix.mul_vec(v)
    }

    /// Image of a homogeneous element of the source.
    pub fn apply(&self, e: &Element) -> Result<Element, CdgaError> {
        if !same_algebra(e.algebra(), &self.source) {
            return Err(CdgaError::ParentMismatch);
        }
        if e.degree() == Degree::Mixed {
            return Err(CdgaError::DegreeMismatch { expected: None, found: Degree::Mixed });
        }
        let image = self.target.element(self.matrix.mul_vec(e.coeffs()));
        debug_assert_eq!(image.d().coeffs(), &self.matrix.mul_vec(e.d().coeffs()));
        Ok(image)
    }

    pub fn compose(&self, then: &CdgaMorphism) -> Result<CdgaMorphism, CdgaError> {
        if !same_algebra(&self.target, &then.source) {
            return Err(CdgaError::ParentMismatch);
        }
        let matrix = then.matrix.mul(&self.matrix)?;
        Ok(CdgaMorphism { source: Arc::clone(&self.source), target: Arc::clone(&then.target), matrix })
    }
}
