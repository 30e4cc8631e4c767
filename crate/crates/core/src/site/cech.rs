use super::presheaf::Presheaf;
use super::site::FiniteSite;
use super::SiteError;
use crate::linalg::{cohomology_dim, rat, solve_linear, SparseMatrix, SparseVec, Subspace};
use itertools::Itertools;
use std::collections::HashMap;

/// `Č^p(τ, F) = ⊕ F(U_{i0} ×_U … ×_U U_{ip})` over all ordered tuples, with the
/// alternating-sum differential.
#[derive(Debug, Clone)]
pub struct CechComplex {
    /// `tuples[p]` and the object of each tuple's fibre product.
    pub tuples: Vec<Vec<(Vec<usize>, usize)>>,
    pub offsets: Vec<Vec<usize>>,
    pub dims: Vec<usize>,
    /// `delta[p]: Č^p → Č^(p+1)` for `p < p_max`.
    pub delta: Vec<SparseMatrix>,
}

impl CechComplex {
    /// Dimensions of `H^0 ..= H^(p_max - 1)`.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        (0..self.delta.len())
            .map(|p| {
                let d_in = if p == 0 { SparseMatrix::zeros(self.dims[0], 0) } else { self.delta[p - 1].clone() };
                cohomology_dim(&d_in, &self.delta[p]).expect("delta squares to zero")
            })
            .collect()
    }

    pub fn delta_squared_vanishes(&self) -> bool {
        self.delta.windows(2).all(|w| w[1].mul(&w[0]).map_or(false, |m| m.is_zero()))
    }
}

/// Builds `Č^0 ..= Č^p_max` and `δ^0 ..= δ^(p_max - 1)`.
pub fn cech_complex(site: &FiniteSite, family: &[usize], f: &Presheaf, p_max: usize) -> Result<CechComplex, SiteError> {
    let n = family.len();
    let mut cache: HashMap<Vec<usize>, super::site::FibreProduct> = HashMap::new();
    let mut fp = |t: &Vec<usize>| -> Result<super::site::FibreProduct, SiteError> {
        if let Some(x) = cache.get(t) {
            return Ok(x.clone());
        }
        let x = site.fibre_product(family, t)?;
        cache.insert(t.clone(), x.clone());
        Ok(x)
    };
    let mut tuples = Vec::new();
    let mut offsets = Vec::new();
    let mut dims = Vec::new();
    for p in 0..=p_max {
        let mut ts = Vec::new();
        let mut off = Vec::new();
        let mut total = 0;
        for t in (0..p + 1).map(|_| 0..n).multi_cartesian_product() {
            let w = fp(&t)?.object;
            off.push(total);
            total += f.dims[w];
            ts.push((t, w));
        }
        if n == 0 {
            ts.clear();
            off.clear();
            total = 0;
        }
        tuples.push(ts);
        offsets.push(off);
        dims.push(total);
    }
    let mut delta = Vec::new();
    for p in 0..p_max {
        let mut trip = Vec::new();
        for (row_i, (t, w)) in tuples[p + 1].iter().enumerate() {
            let big = fp(t)?;
            for k in 0..=p + 1 {
                let mut small_t = t.clone();
                small_t.remove(k);
                let small = fp(&small_t)?;
                let h = site.face(&big, &small, k)?;
                let col_i = index_of(&tuples[p], &small_t, n);
                let m = &f.maps[h];
                let s = if k % 2 == 0 { rat(1) } else { rat(-1) };
                for (r, c, v) in m.triplets() {
                    trip.push((offsets[p + 1][row_i] + r, offsets[p][col_i] + c, v * &s));
                }
                debug_assert_eq!(m.nrows(), f.dims[*w]);
            }
        }
        delta.push(SparseMatrix::from_triplets(dims[p + 1], dims[p], trip).expect("in range"));
    }
    Ok(CechComplex { tuples, offsets, dims, delta })
}

/// Position of a tuple in lexicographic order of `n^(len)`.
fn index_of(tuples: &[(Vec<usize>, usize)], t: &[usize], n: usize) -> usize {
    let i = t.iter().fold(0, |acc, &x| acc * n + x);
    debug_assert_eq!(tuples[i].0, t);
    i
}

/// The map `F(U) → Č^0(τ, F)`, `x ↦ (F(f_i) x)_i`.
pub fn restriction_to_cover(object: usize, family: &[usize], f: &Presheaf) -> SparseMatrix {
    let mut blocks: Option<SparseMatrix> = None;
    for &m in family {
        let b = f.maps[m].clone();
        blocks = Some(match blocks {
            None => b,
            Some(acc) => acc.vstack(&b),
        });
    }
    blocks.unwrap_or_else(|| SparseMatrix::zeros(0, f.dims[object]))
}

/// Whether `F(U) → H^0(τ, F)` is an isomorphism.
pub fn satisfies_descent(site: &FiniteSite, object: usize, family: &[usize], f: &Presheaf) -> Result<bool, SiteError> {
    let c = cech_complex(site, family, f, 1)?;
    let res = restriction_to_cover(object, family, f);
    let h0 = crate::linalg::kernel_basis(&c.delta[0]);
    let image = Subspace::full(f.dims[object]).image_under(&res);
    Ok(crate::linalg::is_injective(&res) && image.dim() == h0.dim())
}

pub fn is_sheaf(site: &FiniteSite, f: &Presheaf) -> Result<bool, SiteError> {
    for o in 0..site.len() {
        for fam in &site.coverings[o] {
            if !satisfies_descent(site, o, fam, f)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// First `(object, covering index, degree)` with nonzero higher Čech cohomology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlabbyWitness {
    pub object: usize,
    pub covering: usize,
    pub degree: usize,
}

/// Checks `H^k(Č(τ, F)) = 0` for `1 ≤ k ≤ k_max` on every covering of every object.
pub fn is_flabby(site: &FiniteSite, f: &Presheaf, k_max: usize) -> Result<Option<FlabbyWitness>, SiteError> {
    for o in 0..site.len() {
        for (ci, fam) in site.coverings[o].iter().enumerate() {
            let c = cech_complex(site, fam, f, k_max + 1)?;
            let dims = c.cohomology_dims();
            if let Some(k) = (1..=k_max).find(|&k| dims[k] != 0) {
                return Ok(Some(FlabbyWitness { object: o, covering: ci, degree: k }));
            }
        }
    }
    Ok(None)
}

/// Solves for a section of `F(U)` restricting to the compatible family `x`.
pub fn glue(object: usize, family: &[usize], f: &Presheaf, x: &SparseVec) -> Option<SparseVec> {
    solve_linear(&restriction_to_cover(object, family, f), x)
}
