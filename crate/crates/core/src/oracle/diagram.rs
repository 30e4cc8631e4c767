use super::dense::DenseMatrix;
use crate::linalg::Rational;
use num::{One, Zero};

/// A finite diagram of finite-dimensional spaces. Each arrow `(from, to, m)`
/// carries a `dims[to] × dims[from]` matrix.
#[derive(Debug, Clone, Default)]
pub struct Diagram {
    pub dims: Vec<usize>,
    pub arrows: Vec<(usize, usize, DenseMatrix)>,
}

/// A subspace of `Q^ambient` given by a basis.
#[derive(Debug, Clone)]
pub struct DenseSpace {
    pub ambient: usize,
    pub basis: Vec<Vec<Rational>>,
}

impl DenseSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn offsets(dims: &[usize]) -> Vec<usize> {
    let mut off = vec![0];
    for d in dims {
        off.push(off.last().unwrap() + d);
    }
    off
}

/// One row block per arrow: `m · x_from − x_to`.
fn constraint_matrix(d: &Diagram) -> DenseMatrix {
    let off = offsets(&d.dims);
    let total = *off.last().unwrap();
    let mut rows = Vec::new();
    for (from, to, m) in &d.arrows {
        for r in 0..m.nrows() {
            let mut row = vec![Rational::zero(); total];
            for c in 0..m.ncols() {
                row[off[*from] + c] += m.get(r, c);
            }
            row[off[*to] + r] -= Rational::one();
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return DenseMatrix::zeros(0, total);
    }
    DenseMatrix::from_rows(rows)
}

/// The limit as the subspace of `⊕ V_o` of compatible families.
pub fn exhaustive_limit(d: &Diagram) -> DenseSpace {
    let total: usize = d.dims.iter().sum();
    let m = constraint_matrix(d);
    let basis = if m.nrows() == 0 {
        (0..total)
            .map(|i| {
                let mut v = vec![Rational::zero(); total];
                v[i] = Rational::one();
                v
            })
            .collect()
    } else {
        m.kernel()
    };
    DenseSpace { ambient: total, basis }
}

/// Dimension of the colimit `⊕ V_o / ⟨ι_to(m x) − ι_from(x)⟩`, with one
/// relation per arrow and basis vector `x` of its source.
pub fn exhaustive_colimit_dim(d: &Diagram) -> usize {
    let off = offsets(&d.dims);
    let total = *off.last().unwrap();
    let mut rows = Vec::new();
    for (from, to, m) in &d.arrows {
        for c in 0..m.ncols() {
            let mut row = vec![Rational::zero(); total];
            for r in 0..m.nrows() {
                row[off[*to] + r] += m.get(r, c);
            }
            row[off[*from] + c] -= Rational::one();
            rows.push(row);
        }
    }
    total - if rows.is_empty() { 0 } else { DenseMatrix::from_rows(rows).rank() }
}
