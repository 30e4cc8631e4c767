//! Exact pivoted elimination: rank, kernels, images, subspaces and quotients.
//!
//! Everything here is built on [`Echelon`], an incrementally grown list of
//! vectors with distinct leading indices. Each stored vector optionally keeps
//! its expression in terms of the generators that were inserted, which is how
//! kernels, solutions and quotient coordinates are read off.

use super::rational::Rational;
use super::sparse::{SparseMatrix, SparseVec};
use num::{One, Zero};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("d_out * d_in is nonzero ({nnz} nonzero entries)")]
    CompositionNonzero { nnz: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("vector is not in the numerator subspace")]
    NotInSubspace,
}

/// Outcome of inserting a generator into an [`Echelon`].
#[derive(Debug, Clone)]
pub enum Insertion {
    /// The vector was independent; it now occupies the returned slot.
    Independent(usize),
    /// The vector was dependent; the payload is the relation among tags
    /// (a tag-space vector whose generator combination vanishes).
    Dependent(SparseVec),
}

#[derive(Debug, Clone)]
pub struct Echelon {
    ambient: usize,
    rows: Vec<SparseVec>,
    exprs: Option<Vec<SparseVec>>,
    pivot_of: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new(ambient: usize) -> Self {
        Echelon { ambient, rows: Vec::new(), exprs: None, pivot_of: HashMap::new() }
    }

    pub fn tracking(ambient: usize) -> Self {
        Echelon { ambient, rows: Vec::new(), exprs: Some(Vec::new()), pivot_of: HashMap::new() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Fully reduces `v`. Returns the remainder (zero at every pivot index) and,
    /// when tracking, the tag-space combination that was subtracted.
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut v = v.clone();
        let mut acc = SparseVec::new();
        let mut start = 0usize;
        loop {
            let entries = v.entries();
            let from = entries.partition_point(|(i, _)| *i < start);
            let hit = entries[from..]
                .iter()
                .find(|(i, _)| self.pivot_of.contains_key(i))
                .map(|(i, c)| (*i, c.clone()));
            let Some((r, c)) = hit else { break };
            let k = self.pivot_of[&r];
            v = v.add_scaled(&self.rows[k], &-c.clone());
            if let Some(exprs) = &self.exprs {
                acc = acc.add_scaled(&exprs[k], &c);
            }
            start = r + 1;
        }
        (v, acc)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Inserts `v` whose tag-space expression is `expr`.
    pub fn insert(&mut self, v: &SparseVec, expr: SparseVec) -> Insertion {
        let (rem, acc) = self.reduce(v);
        let expr = expr.sub(&acc);
        match rem.leading() {
            None => Insertion::Dependent(expr),
            Some((lead, lc)) => {
                let inv = Rational::one() / lc;
                let slot = self.rows.len();
                self.pivot_of.insert(lead, slot);
                self.rows.push(rem.scale(&inv));
                if let Some(exprs) = &mut self.exprs {
                    exprs.push(expr.scale(&inv));
                }
                Insertion::Independent(slot)
            }
        }
    }

    pub fn push(&mut self, v: &SparseVec) -> bool {
        matches!(self.insert(v, SparseVec::new()), Insertion::Independent(_))
    }
}

pub fn rank(m: &SparseMatrix) -> usize {
    let mut ech = Echelon::new(m.nrows());
    for c in m.columns() {
        ech.push(c);
    }
    ech.rank()
}

/// A basis of `{v : m v = 0}`.
pub fn kernel_basis(m: &SparseMatrix) -> Subspace {
    let mut ech = Echelon::tracking(m.nrows());
    let mut kernel = Vec::new();
    for (j, c) in m.columns().iter().enumerate() {
        if let Insertion::Dependent(rel) = ech.insert(c, SparseVec::unit(j)) {
            kernel.push(rel);
        }
    }
    Subspace::from_independent(m.ncols(), kernel)
}

pub fn image_basis(m: &SparseMatrix) -> Subspace {
    Subspace::span(m.nrows(), m.columns().iter().cloned())
}

/// `dim ker(d_out) - rank(d_in)`; fails when the composite is nonzero.
pub fn cohomology_dim(d_in: &SparseMatrix, d_out: &SparseMatrix) -> Result<usize, LinalgError> {
    if d_in.nrows() != d_out.ncols() {
        return Err(LinalgError::Shape(format!(
            "d_in has {} rows but d_out has {} columns",
            d_in.nrows(),
            d_out.ncols()
        )));
    }
    let comp = d_out.mul(d_in).map_err(|e| LinalgError::Shape(e.to_string()))?;
    if !comp.is_zero() {
        return Err(LinalgError::CompositionNonzero { nnz: comp.nnz() });
    }
    Ok(d_out.ncols() - rank(d_out) - rank(d_in))
}

/// Some `x` with `m x = b`, or `None` when the system is inconsistent.
pub fn solve_linear(m: &SparseMatrix, b: &SparseVec) -> Option<SparseVec> {
    let mut ech = Echelon::tracking(m.nrows());
    for (j, c) in m.columns().iter().enumerate() {
        ech.insert(c, SparseVec::unit(j));
    }
    let (rem, acc) = ech.reduce(b);
    rem.is_zero().then_some(acc)
}

/// A linear subspace of `Q^ambient` with an explicit independent basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<SparseVec>,
    echelon: Echelon,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), echelon: Echelon::tracking(ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_independent(ambient, (0..ambient).map(SparseVec::unit).collect())
    }

    /// Span of arbitrary vectors; dependent ones are discarded.
    pub fn span<I: IntoIterator<Item = SparseVec>>(ambient: usize, vecs: I) -> Self {
        let mut s = Subspace::zero(ambient);
        for v in vecs {
            s.extend_with(v);
        }
        s
    }

    fn from_independent(ambient: usize, vecs: Vec<SparseVec>) -> Self {
        let s = Self::span(ambient, vecs.iter().cloned());
        debug_assert_eq!(s.dim(), vecs.len());
        s
    }

    /// Adds `v` to the basis if it is independent; returns whether it was.
    pub fn extend_with(&mut self, v: SparseVec) -> bool {
        let tag = self.basis.len();
        match self.echelon.insert(&v, SparseVec::unit(tag)) {
            Insertion::Independent(_) => {
                self.basis.push(v);
                true
            }
            Insertion::Dependent(_) => false,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.echelon.contains(v)
    }

    /// Coordinates of `v` with respect to [`Self::basis`].
    pub fn coords(&self, v: &SparseVec) -> Option<SparseVec> {
        let (rem, acc) = self.echelon.reduce(v);
        rem.is_zero().then_some(acc)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in &other.basis {
            s.extend_with(v.clone());
        }
        s
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.ambient);
        }
        let a = self.basis_matrix();
        let b = other.basis_matrix().scale(&-Rational::one());
        let ker = kernel_basis(&a.hstack(&b));
        let k = self.dim();
        Subspace::span(
            self.ambient,
            ker.basis.iter().map(|v| a.mul_vec(&v.slice(0..k))),
        )
    }

    pub fn image_under(&self, m: &SparseMatrix) -> Subspace {
        Subspace::span(m.nrows(), self.basis.iter().map(|v| m.mul_vec(v)))
    }

    /// Columns are the basis vectors.
    pub fn basis_matrix(&self) -> SparseMatrix {
        SparseMatrix::from_columns(self.ambient, self.basis.clone())
    }
}

/// Explicit basis of a quotient `numerator / denominator` via lifted representatives.
#[derive(Debug, Clone)]
pub struct QuotientBasis {
    denom_dim: usize,
    reps: Vec<SparseVec>,
    echelon: Echelon,
}

impl QuotientBasis {
    /// `denominator` must lie inside `numerator`.
    pub fn new(numerator: &Subspace, denominator: &Subspace) -> Result<Self, LinalgError> {
        if !numerator.contains_subspace(denominator) {
            return Err(LinalgError::NotInSubspace);
        }
        let mut ech = Echelon::tracking(numerator.ambient());
        let denom_dim = denominator.dim();
        for (t, v) in denominator.basis().iter().enumerate() {
            ech.insert(v, SparseVec::unit(t));
        }
        let mut reps = Vec::new();
        for v in numerator.basis() {
            let tag = denom_dim + reps.len();
            if let Insertion::Independent(_) = ech.insert(v, SparseVec::unit(tag)) {
                reps.push(v.clone());
            }
        }
        Ok(QuotientBasis { denom_dim, reps, echelon: ech })
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[SparseVec] {
        &self.reps
    }

    /// Coordinates of the class of `v` in the representative basis.
    pub fn coords(&self, v: &SparseVec) -> Result<SparseVec, LinalgError> {
        let (rem, acc) = self.echelon.reduce(v);
        if !rem.is_zero() {
            return Err(LinalgError::NotInSubspace);
        }
        Ok(acc.reindex(|t| t.checked_sub(self.denom_dim)))
    }

    /// Whether `v` (assumed in the numerator) represents the zero class.
    pub fn is_trivial(&self, v: &SparseVec) -> Result<bool, LinalgError> {
        Ok(self.coords(v)?.is_zero())
    }
}

/// `ker(d_out) / im(d_in)` with chosen cocycle representatives.
#[derive(Debug, Clone)]
pub struct CohomologyGroup {
    pub cocycles: Subspace,
    pub boundaries: Subspace,
    pub quotient: QuotientBasis,
}

impl CohomologyGroup {
    pub fn new(d_in: &SparseMatrix, d_out: &SparseMatrix) -> Result<Self, LinalgError> {
        let cocycles = kernel_basis(d_out);
        let boundaries = image_basis(d_in);
        let quotient = QuotientBasis::new(&cocycles, &boundaries)
            .map_err(|_| LinalgError::CompositionNonzero { nnz: 0 })?;
        Ok(CohomologyGroup { cocycles, boundaries, quotient })
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }
}

/// Whether `m` is injective on the whole source.
pub fn is_injective(m: &SparseMatrix) -> bool {
    rank(m) == m.ncols()
}

pub fn is_invertible(m: &SparseMatrix) -> bool {
    m.nrows() == m.ncols() && is_injective(m)
}

/// Inverse of a square invertible matrix.
pub fn inverse(m: &SparseMatrix) -> Option<SparseMatrix> {
    if m.nrows() != m.ncols() {
        return None;
    }
    let n = m.nrows();
    let mut ech = Echelon::tracking(n);
    for (j, c) in m.columns().iter().enumerate() {
        if let Insertion::Dependent(_) = ech.insert(c, SparseVec::unit(j)) {
            return None;
        }
    }
    let cols = (0..n)
        .map(|i| {
            let (rem, acc) = ech.reduce(&SparseVec::unit(i));
            debug_assert!(rem.is_zero());
            acc
        })
        .collect();
    Some(SparseMatrix::from_columns(n, cols))
}

pub fn zero_vec_of(len: usize) -> Vec<Rational> {
    vec![Rational::zero(); len]
}
