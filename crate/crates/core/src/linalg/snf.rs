//! Smith normal form over the integers and integral (co)homology of chain complexes.

use super::rational::Rational;
use super::sparse::SparseMatrix;
use num::{BigInt, Integer, One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("entry ({row}, {col}) = {value} is not an integer")]
pub struct NotIntegral {
    pub row: usize,
    pub col: usize,
    pub value: String,
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    pub fn from_sparse(m: &SparseMatrix) -> Result<Self, NotIntegral> {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for (r, c, v) in m.triplets() {
            if !v.denom().is_one() {
                return Err(NotIntegral { row: r, col: c, value: v.to_string() });
            }
            out.set(r, c, v.numer().clone());
        }
        Ok(out)
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let trip = (0..self.rows).flat_map(|i| {
            (0..self.cols).map(move |j| (i, j, Rational::from_integer(self.get(i, j).clone())))
        });
        SparseMatrix::from_triplets(self.rows, self.cols, trip).expect("shape")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "IntMatrix::mul shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * f;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * f;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `u * m * v = d` with `u`, `v` unimodular and `d` diagonal, `d_1 | d_2 | ...`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Nonzero diagonal entries, all positive, each dividing the next.
    pub invariants: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// Invariant factors larger than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariants.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut t = 0;
    while t < r.min(c) {
        // smallest nonzero |entry| in the trailing block
        let Some((pi, pj)) = min_abs_entry(&a, t) else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..r {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t).div_floor(a.get(t, t));
                let nq = -q;
                a.add_row(i, t, &nq);
                u.add_row(i, t, &nq);
                if !a.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..c {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j).div_floor(a.get(t, t));
                let nq = -q;
                a.add_col(j, t, &nq);
                v.add_col(j, t, &nq);
                if !a.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let (pi, pj) = min_abs_in_cross(&a, t);
                a.swap_rows(t, pi);
                u.swap_rows(t, pi);
                a.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            // pivot must divide the rest of the block
            let p = a.get(t, t).clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let invariants = (0..r.min(c))
        .map(|i| a.get(i, i).clone())
        .filter(|x| !x.is_zero())
        .collect();
    SmithForm { d: a, u, v, invariants }
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().map_or(true, |(_, _, b)| ax < *b) {
                best = Some((i, j, ax));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn min_abs_in_cross(a: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t, a.get(t, t).abs());
    for i in t + 1..a.rows {
        let x = a.get(i, t);
        if !x.is_zero() && x.abs() < best.2 {
            best = (i, t, x.abs());
        }
    }
    for j in t + 1..a.cols {
        let x = a.get(t, j);
        if !x.is_zero() && x.abs() < best.2 {
            best = (t, j, x.abs());
        }
    }
    (best.0, best.1)
}

/// A finitely generated abelian group `Z^rank + sum Z/t_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl IntegralGroup {
    pub fn free(rank: usize) -> Self {
        IntegralGroup { rank, torsion: Vec::new() }
    }
}

impl fmt::Display for IntegralGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(if self.rank == 1 { "Z".to_string() } else { format!("Z^{}", self.rank) });
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Cohomology of `C^0 -> C^1 -> ...` where `maps[k]: C^k -> C^{k+1}`
/// (shape `dims[k+1] x dims[k]`). Missing trailing maps are zero.
pub fn integral_cohomology(dims: &[usize], maps: &[IntMatrix]) -> Vec<IntegralGroup> {
    let forms: Vec<SmithForm> = maps.iter().map(smith_normal_form).collect();
    (0..dims.len())
        .map(|k| {
            let out_rank = forms.get(k).map_or(0, |f| f.rank());
            let (in_rank, torsion) = match k.checked_sub(1).and_then(|j| forms.get(j)) {
                Some(f) => (f.rank(), f.torsion()),
                None => (0, Vec::new()),
            };
            IntegralGroup { rank: dims[k] - out_rank - in_rank, torsion }
        })
        .collect()
}

/// Homology of `C_0 <- C_1 <- ...` where `boundaries[k]: C_{k+1} -> C_k`
/// (shape `dims[k] x dims[k+1]`).
pub fn integral_homology(dims: &[usize], boundaries: &[IntMatrix]) -> Vec<IntegralGroup> {
    let forms: Vec<SmithForm> = boundaries.iter().map(smith_normal_form).collect();
    (0..dims.len())
        .map(|k| {
            let out_rank = k.checked_sub(1).and_then(|j| forms.get(j)).map_or(0, |f| f.rank());
            let (in_rank, torsion) = match forms.get(k) {
                Some(f) => (f.rank(), f.torsion()),
                None => (0, Vec::new()),
            };
            IntegralGroup { rank: dims[k] - out_rank - in_rank, torsion }
        })
        .collect()
}
