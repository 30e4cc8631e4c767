//! Spectral sequence of the form-degree filtration on the two-periodic
//! twisted complex.
//!
//! Conventions: `F^s` is spanned by forms of degree `≥ s`, `D = d + λ` acts on
//! the whole algebra and `E_r^s` has parity `s mod 2`. With
//! `Z_r^s = F^s ∩ D⁻¹(F^(s+r))` the pages are
//! `E_r^s = Z_r^s / (Z_(r-1)^(s+1) + D Z_(r-1)^(s-r+1))` and `d_r: E_r^s → E_r^(s+r)`
//! is `[x] ↦ [Dx]`. So `d_0 = 0`, `d_1` is the de Rham differential and `d_3`
//! is multiplication by `[λ]`.

use crate::cdga::{cohomology_ring, Cdga};
use crate::linalg::{is_invertible, kernel_basis, LinalgError, QuotientBasis, SparseMatrix, SparseVec, Subspace};
use crate::twisted::TwistClass;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("E_3 is not identified with ordinary cohomology in degree {0}")]
    NotApplicable(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The algebra with `D = d + λ` and the form-degree filtration.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    levels: Vec<usize>,
    top: usize,
    d: SparseMatrix,
}

impl FilteredComplex {
    pub fn new(t: &TwistClass) -> Self {
        let c = t.algebra();
        FilteredComplex { levels: c.degrees().to_vec(), top: c.top_degree(), d: t.full_differential() }
    }

    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn differential(&self) -> &SparseMatrix {
        &self.d
    }

    /// Whether `D` never lowers the filtration.
    pub fn is_filtered(&self) -> bool {
        self.d.triplets().all(|(r, c, _)| self.levels[r] >= self.levels[c])
    }

    fn at_least(&self, s: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.levels[i] as i64 >= s).collect()
    }

    fn below(&self, s: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| (self.levels[i] as i64) < s).collect()
    }

    /// `F^s ∩ D⁻¹(F^(s+r))`; `r ≤ 0` gives `F^s`.
    pub fn z(&self, r: i64, s: i64) -> Subspace {
        let cols = self.at_least(s);
        let rows = if r <= 0 { Vec::new() } else { self.below(s + r) };
        let n = self.dim();
        if rows.is_empty() {
            return Subspace::span(n, cols.iter().map(|&i| SparseVec::unit(i)));
        }
        let sub = self.d.select(&rows, &cols);
        let ker = kernel_basis(&sub);
        Subspace::span(n, ker.basis().iter().map(|v| v.reindex(|i| Some(cols[i]))))
    }

    /// `Z_(r-1)^(s+1) + D Z_(r-1)^(s-r+1)`.
    pub fn b(&self, r: i64, s: i64) -> Subspace {
        let upper = self.z(r - 1, s + 1);
        let image = self.z(r - 1, s - r + 1).image_under(&self.d);
        upper.sum(&image)
    }

    pub fn cycles(&self, s: i64) -> Subspace {
        self.z(self.top as i64 + 2, s)
    }

    pub fn boundaries(&self, s: i64) -> Subspace {
        let f = Subspace::span(self.dim(), self.at_least(s).into_iter().map(SparseVec::unit));
        let im = Subspace::full(self.dim()).image_under(&self.d);
        f.intersection(&im)
    }
}

/// One page: a quotient basis per filtration degree and the matrices of `d_r`.
#[derive(Debug, Clone)]
pub struct Page {
    pub r: usize,
    pub terms: Vec<QuotientBasis>,
    /// `d[s]: E_r^s → E_r^(s+r)`; `None` when the target is beyond the top degree.
    pub d: Vec<Option<SparseMatrix>>,
}

impl Page {
    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(|q| q.dim()).collect()
    }

    /// `(even, odd)` totals.
    pub fn parity_dims(&self) -> (usize, usize) {
        let d = self.dims();
        (d.iter().step_by(2).sum(), d.iter().skip(1).step_by(2).sum())
    }

    pub fn differential_is_zero(&self) -> bool {
        self.d.iter().flatten().all(|m| m.is_zero())
    }

    /// `d_r ∘ d_r = 0` on every composable pair.
    pub fn d_squared_vanishes(&self) -> bool {
        (0..self.d.len()).all(|s| match (&self.d[s], self.d.get(s + self.r).and_then(|m| m.as_ref())) {
            (Some(a), Some(b)) => b.mul(a).map_or(false, |m| m.is_zero()),
            _ => true,
        })
    }

    /// Dimensions of the homology of `(E_r, d_r)` per filtration degree.
    pub fn homology_dims(&self) -> Vec<usize> {
        let rank = |m: &Option<SparseMatrix>| m.as_ref().map_or(0, crate::linalg::rank);
        (0..self.terms.len())
            .map(|s| {
                let incoming = if s >= self.r && self.r > 0 { rank(&self.d[s - self.r]) } else { 0 };
                self.terms[s].dim() - rank(&self.d[s]) - incoming
            })
            .collect()
    }
}

pub fn page(f: &FilteredComplex, r: usize) -> Result<Page, SpectralError> {
    let top = f.top as i64;
    let ri = r as i64;
    let terms = (0..=top)
        .map(|s| QuotientBasis::new(&f.z(ri, s), &f.b(ri, s)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut d = Vec::new();
    for s in 0..=f.top {
        let t = s + r;
        if r == 0 || t > f.top {
            d.push(if r == 0 { Some(SparseMatrix::zeros(terms[s].dim(), terms[s].dim())) } else { None });
            continue;
        }
        let cols = terms[s]
            .reps()
            .iter()
            .map(|x| terms[t].coords(&f.d.mul_vec(x)))
            .collect::<Result<Vec<_>, _>>()?;
        d.push(Some(SparseMatrix::from_columns(terms[t].dim(), cols)));
    }
    Ok(Page { r, terms, d })
}

/// Pages `E_0 ..= E_r_max`.
pub fn pages(f: &FilteredComplex, r_max: usize) -> Result<Vec<Page>, SpectralError> {
    (0..=r_max).map(|r| page(f, r)).collect()
}

/// `E_∞^s = Z_∞^s / (Z_∞^(s+1) + B_∞^s)`, per filtration degree.
pub fn e_infinity_dims(f: &FilteredComplex) -> Result<Vec<usize>, SpectralError> {
    (0..=f.top as i64)
        .map(|s| {
            let denom = f.cycles(s + 1).sum(&f.boundaries(s));
            Ok(QuotientBasis::new(&f.cycles(s), &denom)?.dim())
        })
        .collect()
}

/// First `r` with `E_r = E_∞` in every filtration degree.
pub fn stabilization_page(f: &FilteredComplex, r_max: usize) -> Result<Option<usize>, SpectralError> {
    let inf = e_infinity_dims(f)?;
    for r in 0..=r_max {
        if page(f, r)?.dims() == inf {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

/// Outcome of comparing `d_3` with multiplication by `[λ]`.
#[derive(Debug, Clone)]
pub struct D3Report {
    pub matches: bool,
    /// First filtration degree where the matrices differ.
    pub witness: Option<usize>,
    pub d3: Vec<SparseMatrix>,
    pub cup: Vec<SparseMatrix>,
}

/// Identifies `E_3^s` with `H^s` through the leading form-degree component of
/// representatives and compares `d_3` with `[λ]∪` in those coordinates.
pub fn d3_equals_lambda_cup(f: &FilteredComplex, t: &TwistClass) -> Result<D3Report, SpectralError> {
    let c: &Cdga = t.algebra();
    let ring = cohomology_ring(c)?;
    let e3 = page(f, 3)?;
    let top = c.top_degree();
    // ident[s]: E_3^s → H^s
    let mut ident = Vec::new();
    for s in 0..=top {
        let cols = e3.terms[s]
            .reps()
            .iter()
            .map(|x| ring.class_of(c, s, &c.component(x, s)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| SpectralError::NotApplicable(s))?;
        let m = SparseMatrix::from_columns(ring.dim(s), cols);
        if !is_invertible(&m) && !(m.nrows() == 0 && m.ncols() == 0) {
            return Err(SpectralError::NotApplicable(s));
        }
        ident.push(m);
    }
    let mut d3 = Vec::new();
    let mut cup = Vec::new();
    let mut witness = None;
    for s in 0..=top.saturating_sub(3) {
        if s + 3 > top {
            break;
        }
        let raw = e3.d[s].clone().expect("target within range");
        let inv = crate::linalg::inverse(&ident[s]).unwrap_or_else(|| SparseMatrix::zeros(0, 0));
        let in_h = ident[s + 3].mul(&raw).and_then(|m| m.mul(&inv)).map_err(|e| LinalgError::Shape(e.to_string()))?;
        let lam = ring.cup_matrix(c, t.lambda(), 3, s)?;
        if in_h != lam && witness.is_none() {
            witness = Some(s);
        }
        d3.push(in_h);
        cup.push(lam);
    }
    Ok(D3Report { matches: witness.is_none(), witness, d3, cup })
}
