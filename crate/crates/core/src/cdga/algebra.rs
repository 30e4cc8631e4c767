use crate::linalg::{Rational, ShapeError, SparseMatrix, SparseVec};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CdgaError {
    #[error("malformed algebra tables: {0}")]
    Malformed(String),
    #[error("even-degree generator {index} (degree {degree}) needs a truncation cap")]
    CapRequired { index: usize, degree: usize },
    #[error("expected a homogeneous element of degree {expected:?}, got {found}")]
    DegreeMismatch { expected: Option<usize>, found: Degree },
    #[error("element belongs to a different algebra")]
    ParentMismatch,
    #[error("differential of the twist is nonzero")]
    NotClosed,
    #[error("not a CDGA morphism: {0}")]
    NotMorphism(String),
}

impl From<ShapeError> for CdgaError {
    fn from(e: ShapeError) -> Self {
        CdgaError::Malformed(e.to_string())
    }
}

/// Degree of an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Zero,
    Of(usize),
    Mixed,
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Zero => write!(f, "zero"),
            Degree::Of(k) => write!(f, "{k}"),
            Degree::Mixed => write!(f, "mixed"),
        }
    }
}

/// Finite-dimensional graded-commutative DG algebra over `Q` given by structure tables.
///
/// Basis element 0 is the unit. `differential` is square with column `j`
/// holding `d(e_j)`; `product[i * dim + j]` holds `e_i * e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cdga {
    name: String,
    degrees: Vec<usize>,
    top_degree: usize,
    differential: SparseMatrix,
    product: Vec<SparseVec>,
    by_degree: Vec<Vec<usize>>,
    position: Vec<usize>,
}

impl Cdga {
    /// Checks structural well-formedness only; the algebra axioms are checked by
    /// [`super::validate::validate_cdga`].
    pub fn from_tables(
        name: impl Into<String>,
        degrees: Vec<usize>,
        top_degree: usize,
        differential: SparseMatrix,
        product: Vec<SparseVec>,
    ) -> Result<Self, CdgaError> {
        let n = degrees.len();
        if n == 0 {
            return Err(CdgaError::Malformed("empty basis".into()));
        }
        if degrees[0] != 0 {
            return Err(CdgaError::Malformed("basis element 0 must have degree 0".into()));
        }
        if let Some((i, d)) = degrees.iter().enumerate().find(|(_, &d)| d > top_degree) {
            return Err(CdgaError::Malformed(format!(
                "basis element {i} has degree {d} above top degree {top_degree}"
            )));
        }
        if differential.shape() != (n, n) {
            return Err(CdgaError::Malformed(format!(
                "differential is {:?}, expected {n}x{n}",
                differential.shape()
            )));
        }
        if product.len() != n * n {
            return Err(CdgaError::Malformed(format!(
                "product table has {} entries, expected {}",
                product.len(),
                n * n
            )));
        }
        if let Some(v) = product.iter().find(|v| v.max_index().map_or(false, |m| m >= n)) {
            return Err(CdgaError::Malformed(format!("product entry {v} out of range")));
        }
        let mut by_degree = vec![Vec::new(); top_degree + 1];
        let mut position = vec![0; n];
        for (i, &d) in degrees.iter().enumerate() {
            position[i] = by_degree[d].len();
            by_degree[d].push(i);
        }
        Ok(Cdga { name: name.into(), degrees, top_degree, differential, product, by_degree, position })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn degree_of_basis(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn top_degree(&self) -> usize {
        self.top_degree
    }

    pub fn differential(&self) -> &SparseMatrix {
        &self.differential
    }

    pub fn product_table(&self) -> &[SparseVec] {
        &self.product
    }

    /// Basis indices of degree `k` (empty above the top degree).
    pub fn basis_of_degree(&self, k: usize) -> &[usize] {
        self.by_degree.get(k).map_or(&[], |v| v.as_slice())
    }

    pub fn dim_of_degree(&self, k: usize) -> usize {
        self.basis_of_degree(k).len()
    }

    /// Position of basis element `i` inside its degree block.
    pub fn position_in_degree(&self, i: usize) -> usize {
        self.position[i]
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec {
        &self.product[i * self.dim() + j]
    }

    pub fn unit(&self) -> SparseVec {
        SparseVec::unit(0)
    }

    pub fn d(&self, v: &SparseVec) -> SparseVec {
        self.differential.mul_vec(v)
    }

    pub fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut acc: Vec<(usize, Rational)> = Vec::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                let xy = x * y;
                for (k, c) in self.basis_product(i, j).iter() {
                    acc.push((k, &xy * c));
                }
            }
        }
        SparseVec::from_pairs(acc)
    }

    pub fn degree(&self, v: &SparseVec) -> Degree {
        let mut deg = None;
        for (i, _) in v.iter() {
            match deg {
                None => deg = Some(self.degrees[i]),
                Some(d) if d != self.degrees[i] => return Degree::Mixed,
                _ => {}
            }
        }
        deg.map_or(Degree::Zero, Degree::Of)
    }

    /// Matrix of `x -> a * x` on the full basis.
    pub fn left_mult_matrix(&self, a: &SparseVec) -> SparseMatrix {
        let cols = (0..self.dim()).map(|j| self.mul(a, &SparseVec::unit(j))).collect();
        SparseMatrix::from_columns(self.dim(), cols)
    }

    /// The differential restricted to degree `k -> k + 1`, in degree-local coordinates.
    pub fn d_block(&self, k: usize) -> SparseMatrix {
        let rows = self.basis_of_degree(k + 1);
        let cols = self.basis_of_degree(k);
        self.differential.select(rows, cols)
    }

    /// Embeds a degree-local vector into the full basis.
    pub fn from_degree_local(&self, k: usize, v: &SparseVec) -> SparseVec {
        let idx = self.basis_of_degree(k);
        v.reindex(|i| Some(idx[i]))
    }

    /// Restricts a full vector to its degree-`k` component, in local coordinates.
    pub fn to_degree_local(&self, k: usize, v: &SparseVec) -> SparseVec {
        v.reindex(|i| (self.degrees[i] == k).then(|| self.position[i]))
    }

    /// Component of `v` in degree `k`, in full coordinates.
    pub fn component(&self, v: &SparseVec, k: usize) -> SparseVec {
        v.reindex(|i| (self.degrees[i] == k).then_some(i))
    }

    pub fn element(self: &Arc<Self>, coeffs: SparseVec) -> Element {
        Element { algebra: Arc::clone(self), coeffs }
    }

    pub fn basis_element(self: &Arc<Self>, i: usize) -> Element {
        self.element(SparseVec::unit(i))
    }

    /// Whether the parity-`p` part of the algebra is nonzero above degree `k`.
    pub fn has_forms_of_parity_above(&self, parity: usize, k: usize) -> bool {
        (k + 1..=self.top_degree).any(|d| d % 2 == parity && self.dim_of_degree(d) > 0)
    }
}

/// An element of a specific algebra.
#[derive(Clone, Debug)]
pub struct Element {
    algebra: Arc<Cdga>,
    coeffs: SparseVec,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra) && self.coeffs == other.coeffs
    }
}

pub(crate) fn same_algebra(a: &Arc<Cdga>, b: &Arc<Cdga>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Element {
    pub fn new(algebra: &Arc<Cdga>, coeffs: SparseVec) -> Result<Self, CdgaError> {
        if coeffs.max_index().map_or(false, |m| m >= algebra.dim()) {
            return Err(CdgaError::Malformed(format!("coefficient index out of range in {coeffs}")));
        }
        Ok(Element { algebra: Arc::clone(algebra), coeffs })
    }

    pub fn zero(algebra: &Arc<Cdga>) -> Self {
        Element { algebra: Arc::clone(algebra), coeffs: SparseVec::new() }
    }

    pub fn one(algebra: &Arc<Cdga>) -> Self {
        algebra.basis_element(0)
    }

    pub fn algebra(&self) -> &Arc<Cdga> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &SparseVec {
        &self.coeffs
    }

    pub fn degree(&self) -> Degree {
        self.algebra.degree(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// Checks the element is homogeneous of degree `k` (zero counts).
    pub fn expect_degree(&self, k: usize) -> Result<(), CdgaError> {
        match self.degree() {
            Degree::Zero => Ok(()),
            Degree::Of(d) if d == k => Ok(()),
            found => Err(CdgaError::DegreeMismatch { expected: Some(k), found }),
        }
    }

    pub fn d(&self) -> Element {
        Element { algebra: Arc::clone(&self.algebra), coeffs: self.algebra.d(&self.coeffs) }
    }

    pub fn mul(&self, other: &Element) -> Result<Element, CdgaError> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(CdgaError::ParentMismatch);
        }
        Ok(Element {
            algebra: Arc::clone(&self.algebra),
            coeffs: self.algebra.mul(&self.coeffs, &other.coeffs),
        })
    }

    pub fn add(&self, other: &Element) -> Result<Element, CdgaError> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(CdgaError::ParentMismatch);
        }
        Ok(Element { algebra: Arc::clone(&self.algebra), coeffs: self.coeffs.add(&other.coeffs) })
    }

    pub fn scale(&self, f: &Rational) -> Element {
        Element { algebra: Arc::clone(&self.algebra), coeffs: self.coeffs.scale(f) }
    }
}

/// Structure constants for `Q` itself.
pub fn point() -> Cdga {
    Cdga::from_tables("point", vec![0], 0, SparseMatrix::zeros(1, 1), vec![SparseVec::unit(0)])
        .expect("point algebra")
}

pub(crate) fn unit_product_table(n: usize, f: impl Fn(usize, usize) -> SparseVec) -> Vec<SparseVec> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(f(i, j));
        }
    }
    out
}
