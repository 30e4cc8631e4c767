use super::connection::{curvature, GerbeConnection};
use super::cover::CoverDatum;
use super::total::{build_total_complex, Cochain, Cochains, TotalComplex};
use super::GerbeError;
use crate::cdga::point;
use crate::linalg::{format_rational, is_invertible, kernel_basis, rank, SparseMatrix, SparseVec, Subspace};
use crate::twisted::{z_graded_complex, TwistClass, ZGradedComplex};
use serde::Serialize;
use std::sync::Arc;

/// `φ(ω z^n) = ι(ω)·l^n`, one matrix per total degree `0..=deg_max + 1`.
#[derive(Debug, Clone)]
pub struct PhiMap {
    pub matrices: Vec<SparseMatrix>,
    /// `l^n` for the powers that occur.
    pub powers: Vec<Cochain>,
}

pub fn phi_map(t: &TotalComplex, z: &ZGradedComplex) -> Result<PhiMap, GerbeError> {
    if z.max_degree() != t.deg_max {
        return Err(GerbeError::Malformed(format!(
            "z-graded complex stops at {} but the total complex at {}",
            z.max_degree(),
            t.deg_max
        )));
    }
    let top = t.deg_max + 1;
    let l = t.connection_element();
    let mut powers = vec![t.unit()];
    for _ in 0..top / 2 {
        let next = t.product(powers.last().expect("nonempty"), &l)?;
        powers.push(next);
    }
    let x = &t.cover().global;
    let mut matrices = Vec::new();
    for p in 0..=top {
        let mut cols = Vec::with_capacity(z.dim(p));
        for &(n, b) in z.piece(p) {
            let omega = t.include_global(&SparseVec::unit(b));
            let img = if n == 0 { omega } else { t.product(&omega, &powers[n])? };
            cols.push(t.to_vector(p, &img)?);
        }
        debug_assert!(x.dim() > 0);
        matrices.push(SparseMatrix::from_columns(t.dim(p), cols));
    }
    Ok(PhiMap { matrices, powers })
}

impl PhiMap {
    /// `D ∘ φ = φ ∘ d_λ` in every degree `≤ deg_max`.
    pub fn is_chain_map(&self, t: &TotalComplex, z: &ZGradedComplex) -> bool {
        (0..=t.deg_max).all(|n| {
            let lhs = t.d(n).mul(&self.matrices[n]).expect("shapes");
            let rhs = self.matrices[n + 1].mul(z.d(n)).expect("shapes");
            lhs == rhs
        })
    }

    pub fn is_unital(&self, t: &TotalComplex, z: &ZGradedComplex) -> bool {
        let Some(i) = z.index_of(0, 0, 0) else { return false };
        t.to_vector(0, &t.unit()).map_or(false, |u| self.matrices[0].column(i) == &u)
    }

    /// `l^j · l^k = l^(j+k)` for all stored powers.
    pub fn is_multiplicative(&self, t: &TotalComplex) -> Result<bool, GerbeError> {
        let n = self.powers.len();
        for j in 0..n {
            for k in 0..n - j {
                if t.product(&self.powers[j], &self.powers[k])? != self.powers[j + k] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Whether `φ` induces an isomorphism `H^n(Ω[[z]]_λ) → H^n(total)`.
    pub fn induces_iso(&self, t: &TotalComplex, z: &ZGradedComplex, n: usize) -> Result<bool, GerbeError> {
        let hz = z.cohomology(n)?;
        let ht = t.cohomology(n)?;
        if hz.dim() != ht.dim() {
            return Ok(false);
        }
        let mut cols = Vec::new();
        for rep in hz.quotient.reps() {
            match ht.quotient.coords(&self.matrices[n].mul_vec(rep)) {
                Ok(c) => cols.push(c),
                Err(_) => return Ok(false),
            }
        }
        Ok(is_invertible(&SparseMatrix::from_columns(ht.dim(), cols)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub cover: String,
    pub deg_max: usize,
    /// The curvature in the global basis, as `(index, "p/q")`.
    pub lambda: Vec<(usize, String)>,
    pub total_betti: Vec<usize>,
    pub twisted_betti: Vec<usize>,
    pub d_squared_zero: bool,
    pub phi_chain_map: bool,
    pub phi_unital: bool,
    pub phi_multiplicative: bool,
    pub iso_by_degree: Vec<bool>,
}

impl TheoremReport {
    pub fn verdict(&self) -> bool {
        self.d_squared_zero
            && self.phi_chain_map
            && self.phi_unital
            && self.phi_multiplicative
            && self.iso_by_degree.iter().all(|&b| b)
    }
}

/// Cohomology of the total complex against `Ω[[z]]_λ`, with the comparison `φ`.
pub fn theorem_main_check(
    cover: &CoverDatum,
    g: &GerbeConnection,
    kind: Cochains,
    deg_max: usize,
) -> Result<TheoremReport, GerbeError> {
    let t = build_total_complex(cover, g, kind, None, deg_max)?;
    let lambda = curvature(cover, g)?;
    let z = z_graded_complex(&TwistClass::new(Arc::clone(&cover.global), lambda.clone())?, deg_max)?;
    let phi = phi_map(&t, &z)?;
    let iso_by_degree = (0..=deg_max).map(|n| phi.induces_iso(&t, &z, n)).collect::<Result<Vec<_>, _>>()?;
    Ok(TheoremReport {
        cover: cover.name.clone(),
        deg_max,
        lambda: lambda.iter().map(|(i, v)| (i, format_rational(v))).collect(),
        total_betti: t.betti()?,
        twisted_betti: z.betti()?,
        d_squared_zero: t.d_squared_nnz() == 0,
        phi_chain_map: phi.is_chain_map(&t, &z),
        phi_unital: phi.is_unital(&t, &z),
        phi_multiplicative: phi.is_multiplicative(&t)?,
        iso_by_degree,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct H0Degree {
    pub degree: usize,
    pub equalizer_dim: usize,
    pub global_dim: usize,
    pub image_rank: usize,
    pub image_in_equalizer: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct H0Report {
    pub degrees: Vec<H0Degree>,
}

impl H0Report {
    pub fn holds(&self) -> bool {
        self.degrees.iter().all(|d| {
            d.image_in_equalizer && d.equalizer_dim == d.global_dim && d.image_rank == d.global_dim
        })
    }
}

/// Compares the equalizer of column 0 ⇒ column 1 (θ-free part) with the image
/// of the global forms, in each form degree up to `min(top, deg_max)`.
pub fn h0_column_check(t: &TotalComplex) -> Result<H0Report, GerbeError> {
    let x = &t.cover().global;
    let mut degrees = Vec::new();
    for k in 0..=x.top_degree().min(t.deg_max) {
        let cols: Vec<usize> = (0..t.dim(k)).filter(|&i| t.cells(k)[i].column == 0).collect();
        let rows: Vec<usize> =
            (0..t.dim(k + 1)).filter(|&i| t.cells(k + 1)[i].column == 1 && t.cells(k + 1)[i].mask == 0).collect();
        let m = t.d(k).select(&rows, &cols);
        let equalizer: Subspace = kernel_basis(&m);
        let mut position = vec![usize::MAX; t.dim(k)];
        for (j, &c) in cols.iter().enumerate() {
            position[c] = j;
        }
        let mut images = Vec::new();
        for &b in x.basis_of_degree(k) {
            let v = t.to_vector(k, &t.include_global(&SparseVec::unit(b)))?;
            images.push(v.reindex(|i| Some(position[i])));
        }
        let image = SparseMatrix::from_columns(cols.len(), images.clone());
        degrees.push(H0Degree {
            degree: k,
            equalizer_dim: equalizer.dim(),
            global_dim: x.dim_of_degree(k),
            image_rank: rank(&image),
            image_in_equalizer: images.iter().all(|v| m.mul_vec(v).is_zero()),
        });
    }
    Ok(H0Report { degrees })
}

/// The trivial gerbe over a point with the full (unnormalized) bar complex of `Λ(θ)`.
pub fn bs1_complex(deg_max: usize) -> Result<TotalComplex, GerbeError> {
    let cover = CoverDatum::constant("point", 1, &[vec![0]], Arc::new(point()))?;
    let g = GerbeConnection::trivial(&cover);
    build_total_complex(&cover, &g, Cochains::Full, None, deg_max)
}

/// `dim H^n` of [`bs1_complex`] for `n ≤ deg_max`.
pub fn bs1_bar_complex(deg_max: usize) -> Result<Vec<usize>, GerbeError> {
    bs1_complex(deg_max)?.betti()
}
