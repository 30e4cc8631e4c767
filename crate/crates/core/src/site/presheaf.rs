use super::category::FiniteCategory;
use super::SiteError;
use crate::linalg::{kernel_basis, rat, SparseMatrix, SparseVec};

/// A contravariant functor to finite-dimensional rational vector spaces.
/// `maps[m]` is `F(m): F(target) → F(source)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presheaf {
    pub dims: Vec<usize>,
    pub maps: Vec<SparseMatrix>,
}

impl Presheaf {
    pub fn constant(cat: &FiniteCategory, dim: usize) -> Self {
        Presheaf {
            dims: vec![dim; cat.len()],
            maps: cat.morphisms.iter().map(|_| SparseMatrix::identity(dim)).collect(),
        }
    }

    pub fn zero(cat: &FiniteCategory) -> Self {
        Presheaf { dims: vec![0; cat.len()], maps: cat.morphisms.iter().map(|_| SparseMatrix::zeros(0, 0)).collect() }
    }

    /// `⊕` of two presheaves.
    pub fn direct_sum(&self, other: &Presheaf) -> Presheaf {
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| block_diag(a, b))
            .collect();
        Presheaf { dims: self.dims.iter().zip(&other.dims).map(|(x, y)| x + y).collect(), maps }
    }

    pub fn violations(&self, cat: &FiniteCategory) -> Vec<String> {
        let mut out = Vec::new();
        if self.dims.len() != cat.len() || self.maps.len() != cat.morphisms.len() {
            out.push("presheaf does not match the category".into());
            return out;
        }
        for (i, m) in cat.morphisms.iter().enumerate() {
            if self.maps[i].shape() != (self.dims[m.source], self.dims[m.target]) {
                out.push(format!("F({}) has the wrong shape", m.name));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for o in 0..cat.len() {
            if self.maps[cat.identity(o)] != SparseMatrix::identity(self.dims[o]) {
                out.push(format!("F(id) is not the identity at {}", cat.objects[o]));
            }
        }
        for (g, f, gf) in cat.composition_table() {
            let lhs = &self.maps[gf];
            let rhs = self.maps[f].mul(&self.maps[g]).expect("shapes checked");
            if *lhs != rhs {
                out.push(format!(
                    "F({} o {}) != F({}) F({})",
                    cat.morphisms[g].name, cat.morphisms[f].name, cat.morphisms[f].name, cat.morphisms[g].name
                ));
            }
        }
        out
    }

    pub fn validate(&self, cat: &FiniteCategory) -> Result<(), SiteError> {
        match self.violations(cat).into_iter().next() {
            None => Ok(()),
            Some(v) => Err(SiteError::NotFunctorial(v)),
        }
    }
}

pub(crate) fn block_diag(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    let top = a.vstack(&SparseMatrix::zeros(b.nrows(), a.ncols()));
    let bottom = SparseMatrix::zeros(a.nrows(), b.ncols()).vstack(b);
    top.hstack(&bottom)
}

/// A natural transformation, one matrix per object (`B(X) × A(X)`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTrans {
    pub components: Vec<SparseMatrix>,
}

impl NatTrans {
    pub fn identity(a: &Presheaf) -> Self {
        NatTrans { components: a.dims.iter().map(|&d| SparseMatrix::identity(d)).collect() }
    }

    pub fn compose(&self, then: &NatTrans) -> NatTrans {
        NatTrans {
            components: self
                .components
                .iter()
                .zip(&then.components)
                .map(|(f, g)| g.mul(f).expect("composable components"))
                .collect(),
        }
    }

    pub fn is_natural(&self, cat: &FiniteCategory, a: &Presheaf, b: &Presheaf) -> bool {
        cat.morphisms.iter().enumerate().all(|(i, m)| {
            let lhs = b.maps[i].mul(&self.components[m.target]);
            let rhs = self.components[m.source].mul(&a.maps[i]);
            matches!((lhs, rhs), (Ok(l), Ok(r)) if l == r)
        })
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(crate::linalg::is_invertible)
    }

    /// Concatenation of all components' entries (column-major per object).
    pub fn flatten(&self, a: &Presheaf, b: &Presheaf) -> SparseVec {
        let mut out = Vec::new();
        let mut off = 0;
        for (x, m) in self.components.iter().enumerate() {
            for (r, c, v) in m.triplets() {
                out.push((off + c * b.dims[x] + r, v.clone()));
            }
            off += a.dims[x] * b.dims[x];
        }
        SparseVec::from_pairs(out)
    }

    pub fn unflatten(v: &SparseVec, a: &Presheaf, b: &Presheaf) -> NatTrans {
        let mut components = Vec::new();
        let mut off = 0;
        for x in 0..a.dims.len() {
            let size = a.dims[x] * b.dims[x];
            let trip = v.slice(off..off + size).iter().map(|(i, c)| (i % b.dims[x], i / b.dims[x], c.clone())).collect::<Vec<_>>();
            components.push(SparseMatrix::from_triplets(b.dims[x], a.dims[x], trip).expect("in range"));
            off += size;
        }
        NatTrans { components }
    }
}

/// Basis of `Nat(A, B)`, solving the naturality equations over all morphisms.
pub fn nat_space(cat: &FiniteCategory, a: &Presheaf, b: &Presheaf) -> Vec<NatTrans> {
    let mut off = vec![0];
    for x in 0..cat.len() {
        off.push(off[x] + a.dims[x] * b.dims[x]);
    }
    let unknowns = off[cat.len()];
    let var = |x: usize, r: usize, c: usize| off[x] + c * b.dims[x] + r;
    // One equation per morphism m: s → t and entry (r, c) of B(m) θ_t − θ_s A(m).
    let mut rows: Vec<SparseVec> = Vec::new();
    for (i, m) in cat.morphisms.iter().enumerate() {
        let (s, t) = (m.source, m.target);
        for r in 0..b.dims[s] {
            for c in 0..a.dims[t] {
                let mut eq = Vec::new();
                for k in 0..b.dims[t] {
                    let v = b.maps[i].get(r, k);
                    if v != rat(0) {
                        eq.push((var(t, k, c), v));
                    }
                }
                for k in 0..a.dims[s] {
                    let v = a.maps[i].get(k, c);
                    if v != rat(0) {
                        eq.push((var(s, r, k), -v));
                    }
                }
                let eq = SparseVec::from_pairs(eq);
                if !eq.is_zero() {
                    rows.push(eq);
                }
            }
        }
    }
    let system = SparseMatrix::from_columns(unknowns, rows).transpose();
    kernel_basis(&system).basis().iter().map(|v| NatTrans::unflatten(v, a, b)).collect()
}
