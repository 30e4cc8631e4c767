use super::algebra::Cdga;
use crate::linalg::{CohomologyGroup, LinalgError, SparseMatrix, SparseVec};

/// Cohomology of a CDGA, degree by degree, with chosen cocycle representatives.
#[derive(Debug, Clone)]
pub struct CohomologyRing {
    groups: Vec<CohomologyGroup>,
}

impl CohomologyRing {
    pub fn dims(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.dim()).collect()
    }

    pub fn dim(&self, k: usize) -> usize {
        self.groups.get(k).map_or(0, |g| g.dim())
    }

    pub fn group(&self, k: usize) -> &CohomologyGroup {
        &self.groups[k]
    }

    /// Cocycle representatives of a basis of `H^k`, in full algebra coordinates.
    pub fn representatives(&self, c: &Cdga, k: usize) -> Vec<SparseVec> {
        match self.groups.get(k) {
            Some(g) => g.quotient.reps().iter().map(|v| c.from_degree_local(k, v)).collect(),
            None => Vec::new(),
        }
    }

    /// Coordinates of the class of a degree-`k` cocycle (full coordinates).
    pub fn class_of(&self, c: &Cdga, k: usize, v: &SparseVec) -> Result<SparseVec, LinalgError> {
        match self.groups.get(k) {
            Some(g) => g.quotient.coords(&c.to_degree_local(k, v)),
            None if v.is_zero() => Ok(SparseVec::new()),
            None => Err(LinalgError::NotInSubspace),
        }
    }

    /// Matrix of `[x] -> [a * x]` from `H^k` to `H^(k + deg a)` for a cocycle `a`.
    pub fn cup_matrix(&self, c: &Cdga, a: &SparseVec, deg_a: usize, k: usize) -> Result<SparseMatrix, LinalgError> {
        let cols = self
            .representatives(c, k)
            .iter()
            .map(|x| self.class_of(c, k + deg_a, &c.mul(a, x)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SparseMatrix::from_columns(self.dim(k + deg_a), cols))
    }
}

pub fn cohomology_ring(c: &Cdga) -> Result<CohomologyRing, LinalgError> {
    let top = c.top_degree();
    let groups = (0..=top)
        .map(|k| {
            let d_in = if k == 0 { SparseMatrix::zeros(c.dim_of_degree(0), 0) } else { c.d_block(k - 1) };
            let d_out = c.d_block(k);
            CohomologyGroup::new(&d_in, &d_out)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CohomologyRing { groups })
}

pub fn betti(c: &Cdga) -> Result<Vec<usize>, LinalgError> {
    Ok(cohomology_ring(c)?.dims())
}
