use super::dense::DenseMatrix;
use crate::cdga::Cdga;
use crate::linalg::Rational;
use num::Zero;

/// Full matrix of `d + λ·` read straight from the structure tables.
pub fn dense_twisted_differential(c: &Cdga, lambda: &[Rational]) -> DenseMatrix {
    let n = c.dim();
    let mut m = DenseMatrix::zeros(n, n);
    for (r, col, v) in c.differential().triplets() {
        m.set(r, col, m.get(r, col) + v);
    }
    for (i, li) in lambda.iter().enumerate() {
        if li.is_zero() {
            continue;
        }
        for j in 0..n {
            for (k, v) in c.basis_product(i, j).iter() {
                let cur = m.get(k, j) + li * v;
                m.set(k, j, cur);
            }
        }
    }
    m
}

/// `(dim H^even, dim H^odd)` of the two-periodic twisted complex, by dense ranks.
pub fn dense_twisted_betti(c: &Cdga, lambda: &[Rational]) -> (usize, usize) {
    let m = dense_twisted_differential(c, lambda);
    let even: Vec<usize> = (0..c.dim()).filter(|&i| c.degree_of_basis(i) % 2 == 0).collect();
    let odd: Vec<usize> = (0..c.dim()).filter(|&i| c.degree_of_basis(i) % 2 == 1).collect();
    let rank = |rows: &[usize], cols: &[usize]| {
        if rows.is_empty() || cols.is_empty() {
            0
        } else {
            m.submatrix(rows, cols).rank()
        }
    };
    let r_eo = rank(&odd, &even);
    let r_oe = rank(&even, &odd);
    (even.len() - r_eo - r_oe, odd.len() - r_oe - r_eo)
}

/// Ordinary Betti numbers from dense ranks of the degree blocks of `d`.
pub fn dense_betti(c: &Cdga) -> Vec<usize> {
    let m = dense_twisted_differential(c, &[]);
    let block = |k: usize| -> usize {
        let rows = c.basis_of_degree(k + 1);
        let cols = c.basis_of_degree(k);
        if rows.is_empty() || cols.is_empty() {
            0
        } else {
            m.submatrix(rows, cols).rank()
        }
    };
    (0..=c.top_degree())
        .map(|k| c.dim_of_degree(k) - block(k) - if k == 0 { 0 } else { block(k - 1) })
        .collect()
}
