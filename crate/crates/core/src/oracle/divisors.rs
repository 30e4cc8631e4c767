use super::dense::DenseMatrix;
use itertools::Itertools;
use num::{BigInt, Integer, One, Signed, Zero};

/// Invariant factors of an integer matrix as quotients of determinantal
/// divisors: `D_k` is the gcd of all `k × k` minors and `d_k = D_k / D_(k-1)`.
pub fn invariant_factors(m: &DenseMatrix) -> Vec<BigInt> {
    let max_k = m.nrows().min(m.ncols());
    let mut prev = BigInt::one();
    let mut out = Vec::new();
    for k in 1..=max_k {
        let dk = determinantal_divisor(m, k);
        if dk.is_zero() {
            break;
        }
        out.push(&dk / &prev);
        prev = dk;
    }
    out
}

/// gcd of all `k × k` minors; zero when every minor vanishes.
pub fn determinantal_divisor(m: &DenseMatrix, k: usize) -> BigInt {
    let mut g = BigInt::zero();
    for rows in (0..m.nrows()).combinations(k) {
        for cols in (0..m.ncols()).combinations(k) {
            let det = m.submatrix(&rows, &cols).det();
            assert!(det.is_integer(), "integer matrix expected");
            g = g.gcd(&det.to_integer());
            if g.is_one() {
                return g;
            }
        }
    }
    g.abs()
}

/// An abelian group `Z^rank ⊕ ⊕ Z/t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

/// Cohomology of a cochain complex of free abelian groups given by
/// coboundaries `maps[k]: Z^dims[k] → Z^dims[k+1]` (rows × cols = dims[k+1] × dims[k]).
pub fn cochain_cohomology(dims: &[usize], maps: &[DenseMatrix]) -> Vec<AbelianGroup> {
    let rank_of = |k: usize| -> usize { maps.get(k).map_or(0, |m| m.rank()) };
    (0..dims.len())
        .map(|k| {
            let out_rank = rank_of(k);
            let (in_rank, torsion) = match k.checked_sub(1).and_then(|j| maps.get(j)) {
                Some(m) => (
                    m.rank(),
                    invariant_factors(m).into_iter().filter(|d| !d.is_one()).collect(),
                ),
                None => (0, Vec::new()),
            };
            AbelianGroup { rank: dims[k] - out_rank - in_rank, torsion }
        })
        .collect()
}

/// Coboundary matrices of the simplicial cochain complex of the full
/// subcomplex structure given by a list of maximal faces.
pub fn simplicial_cochains(facets: &[Vec<usize>]) -> (Vec<usize>, Vec<DenseMatrix>) {
    let mut by_dim: Vec<Vec<Vec<usize>>> = Vec::new();
    for f in facets {
        let mut f = f.clone();
        f.sort();
        for size in 1..=f.len() {
            for s in f.iter().cloned().combinations(size) {
                if by_dim.len() < size {
                    by_dim.resize(size, Vec::new());
                }
                if !by_dim[size - 1].contains(&s) {
                    by_dim[size - 1].push(s);
                }
            }
        }
    }
    for v in by_dim.iter_mut() {
        v.sort();
    }
    let dims: Vec<usize> = by_dim.iter().map(|v| v.len()).collect();
    let mut maps = Vec::new();
    for k in 0..by_dim.len().saturating_sub(1) {
        let mut m = DenseMatrix::zeros(dims[k + 1], dims[k]);
        for (r, big) in by_dim[k + 1].iter().enumerate() {
            for omit in 0..big.len() {
                let mut face = big.clone();
                face.remove(omit);
                let c = by_dim[k].iter().position(|x| *x == face).expect("face present");
                let s = if omit % 2 == 0 { 1 } else { -1 };
                m.set(r, c, crate::linalg::rat(s));
            }
        }
        maps.push(m);
    }
    (dims, maps)
}
