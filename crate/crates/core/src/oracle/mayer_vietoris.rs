use super::dense::DenseMatrix;
use super::twisted::{dense_betti, dense_twisted_differential};
use crate::cdga::Cdga;
use crate::linalg::Rational;
use num::Zero;

fn cocycles(c: &Cdga, k: usize) -> Vec<Vec<Rational>> {
    if k > c.top_degree() || c.dim_of_degree(k) == 0 {
        return Vec::new();
    }
    let d = dense_twisted_differential(c, &[]);
    let cols = c.basis_of_degree(k);
    let embed = |v: Vec<Rational>| {
        let mut full = vec![Rational::zero(); c.dim()];
        for (x, &i) in v.into_iter().zip(cols) {
            full[i] = x;
        }
        full
    };
    if k == c.top_degree() || c.dim_of_degree(k + 1) == 0 {
        return (0..cols.len()).map(|j| embed((0..cols.len()).map(|i| Rational::from_integer(((i == j) as i64).into())).collect())).collect();
    }
    d.submatrix(c.basis_of_degree(k + 1), cols).kernel().into_iter().map(embed).collect()
}

fn boundaries(c: &Cdga, k: usize) -> Vec<Vec<Rational>> {
    if k == 0 || k > c.top_degree() {
        return Vec::new();
    }
    let d = dense_twisted_differential(c, &[]);
    c.basis_of_degree(k - 1).iter().map(|&j| (0..c.dim()).map(|i| d.get(i, j).clone()).collect()).collect()
}

fn rank_of(vectors: &[Vec<Rational>], len: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    DenseMatrix::from_rows(vectors.to_vec()).transpose().rank().min(len)
}

/// Rank of `H^k(U0) ⊕ H^k(U1) → H^k(U01)`, `(x, y) ↦ f0 x − f1 y`.
fn difference_rank(u0: &Cdga, u1: &Cdga, u01: &Cdga, f0: &DenseMatrix, f1: &DenseMatrix, k: usize) -> usize {
    let b = boundaries(u01, k);
    let mut images = b.clone();
    for z in cocycles(u0, k) {
        images.push(f0.mul_vec(&z));
    }
    for z in cocycles(u1, k) {
        images.push(f1.mul_vec(&z));
    }
    rank_of(&images, u01.dim()) - rank_of(&b, u01.dim())
}

/// Betti numbers of `X` from the Mayer–Vietoris sequence of a two-set cover,
/// given the restrictions `f0: U0 → U01` and `f1: U1 → U01` (both surjective
/// as a pair, so the sequence is exact).
pub fn mayer_vietoris_betti(u0: &Cdga, u1: &Cdga, u01: &Cdga, f0: &DenseMatrix, f1: &DenseMatrix, top: usize) -> Vec<usize> {
    let (b0, b1, b01) = (dense_betti(u0), dense_betti(u1), dense_betti(u01));
    let at = |v: &[usize], k: usize| v.get(k).copied().unwrap_or(0);
    (0..=top)
        .map(|k| {
            let kernel = at(&b0, k) + at(&b1, k) - difference_rank(u0, u1, u01, f0, f1, k);
            let coker = if k == 0 { 0 } else { at(&b01, k - 1) - difference_rank(u0, u1, u01, f0, f1, k - 1) };
            kernel + coker
        })
        .collect()
}
