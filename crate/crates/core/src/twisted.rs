//! Twisted complexes of a CDGA with a closed degree-3 twist, the comparison
//! maps from the two-periodic complex into the `z`-graded one, and gauge maps.

use crate::cdga::{Cdga, CdgaError, Degree};
use crate::linalg::rational::factorial;
use crate::linalg::{is_invertible, rat, CohomologyGroup, LinalgError, Rational, SparseMatrix, SparseVec};
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error("twist is not closed")]
    NotClosed,
    #[error("twist must be homogeneous of degree 3, got degree {0}")]
    WrongDegree(Degree),
    #[error("gauge parameter must be homogeneous of degree 2, got degree {0}")]
    GaugeDegree(Degree),
    #[error(transparent)]
    Cdga(#[from] CdgaError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A closed degree-3 element of an algebra.
#[derive(Debug, Clone)]
pub struct TwistClass {
    algebra: Arc<Cdga>,
    lambda: SparseVec,
}

impl TwistClass {
    pub fn new(algebra: Arc<Cdga>, lambda: SparseVec) -> Result<Self, TwistError> {
        match algebra.degree(&lambda) {
            Degree::Zero | Degree::Of(3) => {}
            other => return Err(TwistError::WrongDegree(other)),
        }
        if !algebra.d(&lambda).is_zero() {
            return Err(TwistError::NotClosed);
        }
        Ok(TwistClass { algebra, lambda })
    }

    pub fn zero(algebra: Arc<Cdga>) -> Self {
        TwistClass { algebra, lambda: SparseVec::new() }
    }

    pub fn algebra(&self) -> &Arc<Cdga> {
        &self.algebra
    }

    pub fn lambda(&self) -> &SparseVec {
        &self.lambda
    }

    /// `λ + dγ`.
    pub fn shifted_by(&self, gamma: &SparseVec) -> Result<TwistClass, TwistError> {
        TwistClass::new(Arc::clone(&self.algebra), self.lambda.add(&self.algebra.d(gamma)))
    }

    /// `d + λ·` on the whole algebra.
    pub fn full_differential(&self) -> SparseMatrix {
        let c = &self.algebra;
        c.differential()
            .add(&c.left_mult_matrix(&self.lambda))
            .expect("square matrices of equal size")
    }
}

/// `Ω^even ⇄ Ω^odd` with `d_λ = d + λ`.
#[derive(Debug, Clone)]
pub struct TwoPeriodicComplex {
    pub even_basis: Vec<usize>,
    pub odd_basis: Vec<usize>,
    pub d_even_to_odd: SparseMatrix,
    pub d_odd_to_even: SparseMatrix,
}

impl TwoPeriodicComplex {
    pub fn basis(&self, parity: usize) -> &[usize] {
        if parity % 2 == 0 {
            &self.even_basis
        } else {
            &self.odd_basis
        }
    }

    /// Differential out of the given parity.
    pub fn d_from(&self, parity: usize) -> &SparseMatrix {
        if parity % 2 == 0 {
            &self.d_even_to_odd
        } else {
            &self.d_odd_to_even
        }
    }

    pub fn cohomology(&self, parity: usize) -> Result<CohomologyGroup, LinalgError> {
        CohomologyGroup::new(self.d_from(parity + 1), self.d_from(parity))
    }

    /// `(dim H^even, dim H^odd)`.
    pub fn betti(&self) -> Result<(usize, usize), LinalgError> {
        Ok((self.cohomology(0)?.dim(), self.cohomology(1)?.dim()))
    }

    /// Embeds a parity-local vector into algebra coordinates.
    pub fn to_algebra(&self, parity: usize, v: &SparseVec) -> SparseVec {
        let b = self.basis(parity);
        v.reindex(|i| Some(b[i]))
    }
}

pub fn two_periodic_complex(t: &TwistClass) -> Result<TwoPeriodicComplex, TwistError> {
    let c = &t.algebra;
    let full = t.full_differential();
    let even_basis: Vec<usize> = (0..c.dim()).filter(|&i| c.degree_of_basis(i) % 2 == 0).collect();
    let odd_basis: Vec<usize> = (0..c.dim()).filter(|&i| c.degree_of_basis(i) % 2 == 1).collect();
    let d_even_to_odd = full.select(&odd_basis, &even_basis);
    let d_odd_to_even = full.select(&even_basis, &odd_basis);
    for (a, b) in [(&d_even_to_odd, &d_odd_to_even), (&d_odd_to_even, &d_even_to_odd)] {
        let comp = b.mul(a).map_err(|e| LinalgError::Shape(e.to_string()))?;
        if !comp.is_zero() {
            return Err(LinalgError::CompositionNonzero { nnz: comp.nnz() }.into());
        }
    }
    Ok(TwoPeriodicComplex { even_basis, odd_basis, d_even_to_odd, d_odd_to_even })
}

/// `Ω[[z]]` with `d_λ(z^n ω) = z^n dω + n z^(n-1) λω`, one finite piece per total degree.
#[derive(Debug, Clone)]
pub struct ZGradedComplex {
    max_degree: usize,
    /// `pieces[p]` lists the monomials `(n, basis index)` with `2n + deg = p`.
    pieces: Vec<Vec<(usize, usize)>>,
    index: Vec<HashMap<(usize, usize), usize>>,
    /// `d[p]` maps piece `p` to piece `p + 1`.
    d: Vec<SparseMatrix>,
}

impl ZGradedComplex {
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn piece(&self, p: usize) -> &[(usize, usize)] {
        &self.pieces[p]
    }

    pub fn dim(&self, p: usize) -> usize {
        self.pieces[p].len()
    }

    pub fn index_of(&self, p: usize, n: usize, basis: usize) -> Option<usize> {
        self.index[p].get(&(n, basis)).copied()
    }

    pub fn d(&self, p: usize) -> &SparseMatrix {
        &self.d[p]
    }

    fn d_into(&self, p: usize) -> SparseMatrix {
        if p == 0 {
            SparseMatrix::zeros(self.dim(0), 0)
        } else {
            self.d[p - 1].clone()
        }
    }

    pub fn cohomology(&self, p: usize) -> Result<CohomologyGroup, LinalgError> {
        CohomologyGroup::new(&self.d_into(p), &self.d[p])
    }

    /// `dim H^p` for `p = 0..=max_degree`.
    pub fn betti(&self) -> Result<Vec<usize>, LinalgError> {
        (0..=self.max_degree).map(|p| Ok(self.cohomology(p)?.dim())).collect()
    }
}

fn z_pieces(c: &Cdga, upto: usize) -> (Vec<Vec<(usize, usize)>>, Vec<HashMap<(usize, usize), usize>>) {
    let mut pieces = Vec::new();
    let mut index = Vec::new();
    for p in 0..=upto {
        let mut piece = Vec::new();
        for k in (p % 2..=p.min(c.top_degree())).step_by(2) {
            let n = (p - k) / 2;
            for &b in c.basis_of_degree(k) {
                piece.push((n, b));
            }
        }
        index.push(piece.iter().enumerate().map(|(i, &m)| (m, i)).collect());
        pieces.push(piece);
    }
    (pieces, index)
}

pub fn z_graded_complex(t: &TwistClass, max_degree: usize) -> Result<ZGradedComplex, TwistError> {
    let c = &t.algebra;
    let (pieces, index) = z_pieces(c, max_degree + 1);
    let mut d = Vec::new();
    for p in 0..=max_degree {
        let cols = pieces[p]
            .iter()
            .map(|&(n, b)| {
                let e = SparseVec::unit(b);
                let mut out = Vec::new();
                for (k, v) in c.d(&e).iter() {
                    out.push((index[p + 1][&(n, k)], v.clone()));
                }
                if n > 0 {
                    let nn = rat(n as i64);
                    for (k, v) in c.mul(&t.lambda, &e).iter() {
                        out.push((index[p + 1][&(n - 1, k)], &nn * v));
                    }
                }
                SparseVec::from_pairs(out)
            })
            .collect();
        d.push(SparseMatrix::from_columns(pieces[p + 1].len(), cols));
    }
    for p in 1..=max_degree {
        let comp = d[p].mul(&d[p - 1]).map_err(|e| LinalgError::Shape(e.to_string()))?;
        if !comp.is_zero() {
            return Err(LinalgError::CompositionNonzero { nnz: comp.nnz() }.into());
        }
    }
    Ok(ZGradedComplex { max_degree, pieces, index, d })
}

/// Which form degrees the comparison map sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiRange {
    /// Every form degree `k ≡ p (mod 2)` with `k ≤ p`.
    Full,
    /// Writing `p = 2q + e`, only form degrees `e + 2i` with `i ≤ ⌊q/2⌋`.
    Truncated,
}

/// Matrix of `ψ_p`: parity-`(p mod 2)` forms to the degree-`p` piece of `Ω[[z]]`,
/// sending `ω` of degree `k` to `z^((p-k)/2) ω / ((p-k)/2)!`.
#[derive(Debug, Clone)]
pub struct PsiMap {
    pub p: usize,
    pub matrix: SparseMatrix,
}

pub fn psi_map(per: &TwoPeriodicComplex, z: &ZGradedComplex, c: &Cdga, p: usize, range: PsiRange) -> PsiMap {
    let parity = p % 2;
    let q = p / 2;
    let cols = per
        .basis(parity)
        .iter()
        .map(|&b| {
            let k = c.degree_of_basis(b);
            let i = (k - parity) / 2;
            let allowed = k <= p
                && match range {
                    PsiRange::Full => true,
                    PsiRange::Truncated => i <= q / 2,
                };
            if !allowed {
                return SparseVec::new();
            }
            let n = (p - k) / 2;
            let row = z.index_of(p, n, b).expect("monomial in piece");
            SparseVec::from_pairs([(row, Rational::from_integer(1.into()) / factorial(n))])
        })
        .collect();
    PsiMap { p, matrix: SparseMatrix::from_columns(z.dim(p), cols) }
}

/// `d_λ ∘ ψ_p − ψ_(p+1) ∘ d_λ`; zero exactly when the square commutes.
pub fn psi_residual(per: &TwoPeriodicComplex, z: &ZGradedComplex, c: &Cdga, p: usize, range: PsiRange) -> SparseMatrix {
    let psi_p = psi_map(per, z, c, p, range).matrix;
    let psi_next = psi_map(per, z, c, p + 1, range).matrix;
    let lhs = z.d(p).mul(&psi_p).expect("shapes agree");
    let rhs = psi_next.mul(per.d_from(p % 2)).expect("shapes agree");
    lhs.sub(&rhs).expect("shapes agree")
}

/// Verdicts for one `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiReport {
    pub p: usize,
    pub chain_map: bool,
    pub invertible: bool,
    pub source_dim: usize,
    pub target_dim: usize,
}

/// Builds both complexes once and checks every `p` in `1..=p_max`.
pub fn psi_reports(t: &TwistClass, p_max: usize, range: PsiRange) -> Result<Vec<PsiReport>, TwistError> {
    let per = two_periodic_complex(t)?;
    let z = z_graded_complex(t, p_max + 1)?;
    let c = t.algebra();
    Ok((1..=p_max)
        .map(|p| {
            let m = psi_map(&per, &z, c, p, range).matrix;
            PsiReport {
                p,
                chain_map: psi_residual(&per, &z, c, p, range).is_zero(),
                invertible: is_invertible(&m),
                source_dim: m.ncols(),
                target_dim: m.nrows(),
            }
        })
        .collect())
}

/// `e^(−γT)` on each piece of `Ω[[z]]`: `ω z^n ↦ Σ_j C(n,j) (−γ)^j ω z^(n−j)`.
#[derive(Debug, Clone)]
pub struct GaugeTransform {
    pub forward: Vec<SparseMatrix>,
    pub backward: Vec<SparseMatrix>,
}

fn gauge_piece(z: &ZGradedComplex, c: &Cdga, gamma: &SparseVec, p: usize) -> SparseMatrix {
    let cols = z
        .piece(p)
        .iter()
        .map(|&(n, b)| {
            let mut out = SparseVec::new();
            let mut power = SparseVec::unit(b);
            let mut binom = rat(1);
            for j in 0..=n {
                for (k, v) in power.iter() {
                    let row = z.index_of(p, n - j, k).expect("monomial in piece");
                    out = out.add(&SparseVec::from_pairs([(row, &binom * v)]));
                }
                power = c.mul(gamma, &power).neg();
                binom = binom * rat((n - j) as i64) / rat(j as i64 + 1);
                if power.is_zero() {
                    break;
                }
            }
            out
        })
        .collect();
    SparseMatrix::from_columns(z.dim(p), cols)
}

/// The gauge map from `(Ω[[z]], d_λ)` to `(Ω[[z]], d_(λ+dγ))`, on pieces `0..=max_degree + 1`.
pub fn gauge_transform(z: &ZGradedComplex, c: &Cdga, gamma: &SparseVec) -> Result<GaugeTransform, TwistError> {
    match c.degree(gamma) {
        Degree::Zero | Degree::Of(2) => {}
        other => return Err(TwistError::GaugeDegree(other)),
    }
    let minus = gamma.neg();
    let top = z.max_degree() + 1;
    Ok(GaugeTransform {
        forward: (0..=top).map(|p| gauge_piece(z, c, gamma, p)).collect(),
        backward: (0..=top).map(|p| gauge_piece(z, c, &minus, p)).collect(),
    })
}

impl GaugeTransform {
    /// Checks `d' ∘ g = g ∘ d` on every piece and that `backward` inverts `forward`.
    pub fn verify(&self, from: &ZGradedComplex, to: &ZGradedComplex) -> bool {
        let n = from.max_degree();
        let intertwines = (0..=n).all(|p| {
            let lhs = to.d(p).mul(&self.forward[p]).expect("shapes");
            let rhs = self.forward[p + 1].mul(from.d(p)).expect("shapes");
            lhs == rhs
        });
        let inverse = self.forward.iter().zip(&self.backward).all(|(f, b)| {
            let id = SparseMatrix::identity(f.nrows());
            b.mul(f).map_or(false, |m| m == id) && f.mul(b).map_or(false, |m| m == id)
        });
        intertwines && inverse
    }
}

/// Twisted Betti numbers of the two-periodic complex.
pub fn twisted_betti(t: &TwistClass) -> Result<(usize, usize), TwistError> {
    Ok(two_periodic_complex(t)?.betti()?)
}

/// Ordinary Betti numbers folded by parity.
pub fn folded_betti(betti: &[usize]) -> (usize, usize) {
    let ev = betti.iter().step_by(2).sum();
    let odd = betti.iter().skip(1).step_by(2).sum();
    (ev, odd)
}
