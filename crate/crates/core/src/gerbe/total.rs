use super::connection::{alternating_value, validate_connection, GerbeConnection};
use super::cover::CoverDatum;
use super::GerbeError;
use crate::cdga::Cdga;
use crate::linalg::{CohomologyGroup, Rational, SparseMatrix, SparseVec};
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

/// Whether columns keep every cochain or only those killed by the codegeneracies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cochains {
    Full,
    Normalized,
}

/// A basis cell: `form · θ_mask` on the tuple `tuple` of column `column`.
/// Bit `b` of `mask` stands for `θ_(b+1)`; the θ's are multiplied in increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub column: usize,
    pub tuple: usize,
    pub mask: u32,
    pub form: usize,
}

pub type Cochain = BTreeMap<Cell, Rational>;

type Local = BTreeMap<(u32, usize), Rational>;

fn bump<K: Ord>(acc: &mut BTreeMap<K, Rational>, k: K, v: Rational) {
    if v.is_zero() {
        return;
    }
    match acc.entry(k) {
        Entry::Vacant(e) => {
            e.insert(v);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += v;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

fn theta_sign(m1: u32, m2: u32) -> bool {
    let mut odd = false;
    let mut rest = m2;
    while rest != 0 {
        let b = rest.trailing_zeros();
        rest &= rest - 1;
        if (m1 >> (b + 1)).count_ones() % 2 == 1 {
            odd = !odd;
        }
    }
    odd
}

/// Product in `Ω(U) ⊗ Λ(θ)` with elements written as `form · θ_mask`.
fn local_mul(u: &Cdga, x: &Local, y: &Local) -> Local {
    let mut out = Local::new();
    for (&(m1, f1), c1) in x {
        for (&(m2, f2), c2) in y {
            if m1 & m2 != 0 {
                continue;
            }
            let odd = (m1.count_ones() as usize * u.degree_of_basis(f2)) % 2 == 1;
            let neg = odd ^ theta_sign(m1, m2);
            let c = c1 * c2;
            for (g, v) in u.basis_product(f1, f2).iter() {
                let w = &c * v;
                bump(&mut out, (m1 | m2, g), if neg { -w } else { w });
            }
        }
    }
    out
}

fn theta(b: usize) -> Local {
    Local::from([((1u32 << (b - 1), 0), Rational::one())])
}

fn form_local(v: &SparseVec, mask: u32) -> Local {
    v.iter().map(|(g, c)| ((mask, g), c.clone())).collect()
}

fn sign_of(odd: bool) -> Rational {
    if odd {
        -Rational::one()
    } else {
        Rational::one()
    }
}

/// The twisted Čech–de Rham total complex, truncated to total degrees `≤ deg_max + 1`
/// and columns `≤ p_max`.
#[derive(Debug, Clone)]
pub struct TotalComplex {
    cover: CoverDatum,
    connection: GerbeConnection,
    pub kind: Cochains,
    pub p_max: usize,
    pub deg_max: usize,
    tuples: Vec<Vec<Vec<usize>>>,
    support: Vec<Vec<usize>>,
    tuple_index: Vec<HashMap<Vec<usize>, usize>>,
    basis: Vec<Vec<Cell>>,
    index: Vec<HashMap<Cell, usize>>,
    d: Vec<SparseMatrix>,
}

/// Validates the connection, then builds the complex and checks `D² = 0`.
pub fn build_total_complex(
    cover: &CoverDatum,
    g: &GerbeConnection,
    kind: Cochains,
    p_max: Option<usize>,
    deg_max: usize,
) -> Result<TotalComplex, GerbeError> {
    let report = validate_connection(cover, g);
    if !report.is_valid() {
        return Err(GerbeError::ValidationFailed(report.violations.iter().map(|v| v.to_string()).collect()));
    }
    let t = TotalComplex::build_unchecked(cover, g, kind, p_max, deg_max)?;
    let residual = t.d_squared_nnz();
    if residual != 0 {
        return Err(GerbeError::DSquaredNonzero { nnz: residual });
    }
    Ok(t)
}

impl TotalComplex {
    /// Builds without validating the connection; for fault injection.
    pub fn build_unchecked(
        cover: &CoverDatum,
        g: &GerbeConnection,
        kind: Cochains,
        p_max: Option<usize>,
        deg_max: usize,
    ) -> Result<Self, GerbeError> {
        let p_max = p_max.unwrap_or(deg_max + 1).min(deg_max + 1);
        if p_max >= 31 {
            return Err(GerbeError::Malformed("too many columns".into()));
        }
        if g.beta.len() != cover.charts {
            return Err(GerbeError::Malformed("one beta per chart expected".into()));
        }
        let mut tuples: Vec<Vec<Vec<usize>>> = vec![(0..cover.charts).map(|i| vec![i]).collect()];
        for p in 1..=p_max {
            let mut next = Vec::new();
            for t in &tuples[p - 1] {
                for c in 0..cover.charts {
                    let mut t2 = t.clone();
                    t2.push(c);
                    if cover.support(&t2).is_some() {
                        next.push(t2);
                    }
                }
            }
            tuples.push(next);
        }
        let support: Vec<Vec<usize>> =
            tuples.iter().map(|col| col.iter().map(|t| cover.support(t).expect("in nerve")).collect()).collect();
        let tuple_index = tuples
            .iter()
            .map(|col| col.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect())
            .collect();
        let mut t = TotalComplex {
            cover: cover.clone(),
            connection: g.clone(),
            kind,
            p_max,
            deg_max,
            tuples,
            support,
            tuple_index,
            basis: Vec::new(),
            index: Vec::new(),
            d: Vec::new(),
        };
        for n in 0..=deg_max + 1 {
            let cells = t.enumerate_cells(n);
            t.index.push(cells.iter().enumerate().map(|(i, c)| (*c, i)).collect());
            t.basis.push(cells);
        }
        for n in 0..=deg_max {
            let mut cols = Vec::with_capacity(t.basis[n].len());
            for &cell in &t.basis[n] {
                let mut out = Cochain::new();
                t.d_cell(cell, &mut out);
                cols.push(t.to_vector(n + 1, &out)?);
            }
            let m = SparseMatrix::from_columns(t.basis[n + 1].len(), cols);
            t.d.push(m);
        }
        Ok(t)
    }

    fn allowed(&self, tuple: &[usize], mask: u32) -> bool {
        match self.kind {
            Cochains::Full => true,
            Cochains::Normalized => (1..tuple.len()).all(|a| tuple[a - 1] != tuple[a] || mask >> (a - 1) & 1 == 1),
        }
    }

    fn enumerate_cells(&self, n: usize) -> Vec<Cell> {
        let mut out = Vec::new();
        for p in 0..=n.min(self.p_max) {
            for (ti, tuple) in self.tuples[p].iter().enumerate() {
                let u = self.cover.piece(self.support[p][ti]);
                for mask in 0u32..(1 << p) {
                    let j = mask.count_ones() as usize;
                    if p + j > n || n - p - j > u.top_degree() || !self.allowed(tuple, mask) {
                        continue;
                    }
                    for &form in u.basis_of_degree(n - p - j) {
                        out.push(Cell { column: p, tuple: ti, mask, form });
                    }
                }
            }
        }
        out
    }

    pub fn cover(&self) -> &CoverDatum {
        &self.cover
    }

    pub fn connection(&self) -> &GerbeConnection {
        &self.connection
    }

    pub fn tuple(&self, column: usize, id: usize) -> &[usize] {
        &self.tuples[column][id]
    }

    pub fn tuple_id(&self, tuple: &[usize]) -> Option<usize> {
        self.tuple_index.get(tuple.len().checked_sub(1)?)?.get(tuple).copied()
    }

    fn piece_of(&self, cell: &Cell) -> &Cdga {
        self.cover.piece(self.support[cell.column][cell.tuple])
    }

    pub fn cell_degree(&self, cell: &Cell) -> usize {
        cell.column + cell.mask.count_ones() as usize + self.piece_of(cell).degree_of_basis(cell.form)
    }

    pub fn cells(&self, n: usize) -> &[Cell] {
        &self.basis[n]
    }

    pub fn dim(&self, n: usize) -> usize {
        self.basis[n].len()
    }

    /// `D` from degree `n` to `n + 1`, for `n ≤ deg_max`.
    pub fn d(&self, n: usize) -> &SparseMatrix {
        &self.d[n]
    }

    fn d_into(&self, n: usize) -> SparseMatrix {
        if n == 0 {
            SparseMatrix::zeros(self.dim(0), 0)
        } else {
            self.d[n - 1].clone()
        }
    }

    /// Total number of nonzero entries of `D∘D` over all degrees.
    pub fn d_squared_nnz(&self) -> usize {
        (1..=self.deg_max).map(|n| self.d[n].mul(&self.d[n - 1]).expect("shapes").nnz()).sum()
    }

    pub fn cohomology(&self, n: usize) -> Result<CohomologyGroup, GerbeError> {
        Ok(CohomologyGroup::new(&self.d_into(n), &self.d[n])?)
    }

    /// `dim H^n` for `n = 0..=deg_max`.
    pub fn betti(&self) -> Result<Vec<usize>, GerbeError> {
        (0..=self.deg_max).map(|n| Ok(self.cohomology(n)?.dim())).collect()
    }

    /// Cohomology of the subcomplex without θ's: the untwisted Čech–de Rham complex.
    pub fn theta_free_betti(&self) -> Result<Vec<usize>, GerbeError> {
        let pick = |n: usize| -> Vec<usize> {
            self.basis[n].iter().enumerate().filter(|(_, c)| c.mask == 0).map(|(i, _)| i).collect()
        };
        let mut out = Vec::new();
        for n in 0..=self.deg_max {
            let (here, next) = (pick(n), pick(n + 1));
            let d_out = self.d[n].select(&next, &here);
            let d_in = if n == 0 { SparseMatrix::zeros(here.len(), 0) } else { self.d[n - 1].select(&here, &pick(n - 1)) };
            out.push(CohomologyGroup::new(&d_in, &d_out)?.dim());
        }
        Ok(out)
    }

    pub fn to_vector(&self, n: usize, x: &Cochain) -> Result<SparseVec, GerbeError> {
        let idx = self.index.get(n).ok_or(GerbeError::DegreeOverflow { degree: n })?;
        let mut pairs = Vec::with_capacity(x.len());
        for (cell, v) in x {
            let i = idx.get(cell).ok_or_else(|| GerbeError::CellOutside {
                degree: n,
                column: cell.column,
                tuple: self.tuples[cell.column][cell.tuple].clone(),
            })?;
            pairs.push((*i, v.clone()));
        }
        Ok(SparseVec::from_pairs(pairs))
    }

    pub fn from_vector(&self, n: usize, v: &SparseVec) -> Cochain {
        v.iter().map(|(i, c)| (self.basis[n][i], c.clone())).collect()
    }

    /// The total degree of a nonzero homogeneous cochain.
    pub fn degree_of(&self, x: &Cochain) -> Option<usize> {
        let mut degs = x.keys().map(|c| self.cell_degree(c));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    fn theta_image(&self, t: &[usize], ts: usize, q: usize, k: usize, a: usize) -> Local {
        if k == 0 || (k < q && a > k) {
            theta(a + 1)
        } else if k == q || a < k {
            theta(a)
        } else {
            let mut l = theta(k);
            l.extend(theta(k + 1));
            let big_a = alternating_value(&self.cover, &self.connection.big_a, &[t[k - 1], t[k], t[k + 1]], ts);
            for (f, c) in big_a.iter() {
                bump(&mut l, (0, f), c.clone());
            }
            l
        }
    }

    /// Pullback of `cell` along the `k`-th face of the tuple `t` in column `q`.
    fn pullback(&self, cell: Cell, t: &[usize], ts: usize, q: usize, k: usize) -> Local {
        let ss = self.support[cell.column][cell.tuple];
        let u = self.cover.piece(ts);
        let mut acc = form_local(&self.cover.restriction(ss, ts).mul_vec(&SparseVec::unit(cell.form)), 0);
        let mut rest = cell.mask;
        while rest != 0 {
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            acc = local_mul(u, &acc, &self.theta_image(t, ts, q, k, b + 1));
        }
        acc
    }

    fn d_cell(&self, cell: Cell, out: &mut Cochain) {
        let p = cell.column;
        let u = self.piece_of(&cell);
        let vertical = sign_of(p % 2 == 1);
        for (g, c) in u.d(&SparseVec::unit(cell.form)).iter() {
            bump(out, Cell { form: g, ..cell }, &vertical * c);
        }
        if p < self.p_max {
            let s = &self.tuples[p][cell.tuple];
            for k in 0..=p + 1 {
                for c in 0..self.cover.charts {
                    let mut t = s.clone();
                    t.insert(k, c);
                    let Some(&ti) = self.tuple_index[p + 1].get(&t) else { continue };
                    let ts = self.support[p + 1][ti];
                    let sg = sign_of(k % 2 == 1);
                    for ((m, f), v) in self.pullback(cell, &t, ts, p + 1, k) {
                        bump(out, Cell { column: p + 1, tuple: ti, mask: m, form: f }, &sg * v);
                    }
                }
            }
        }
    }

    /// `D` applied cell by cell, without truncating degrees.
    pub fn apply_d(&self, x: &Cochain) -> Cochain {
        let mut out = Cochain::new();
        for (cell, v) in x {
            let mut dc = Cochain::new();
            self.d_cell(*cell, &mut dc);
            for (c, w) in dc {
                bump(&mut out, c, v * w);
            }
        }
        out
    }

    /// Front-face/back-face product: on `(i_0…i_(p+q))` it is
    /// `(−1)^(q·|x|_int) u^*x · v^*y` with `|x|_int` the form-plus-θ degree of `x`.
    pub fn product(&self, x: &Cochain, y: &Cochain) -> Result<Cochain, GerbeError> {
        let mut out = Cochain::new();
        for (cx, vx) in x {
            for (cy, vy) in y {
                let (p, q) = (cx.column, cy.column);
                let s = &self.tuples[p][cx.tuple];
                let s2 = &self.tuples[q][cy.tuple];
                if s.last() != s2.first() {
                    continue;
                }
                if p + q > self.p_max {
                    return Err(GerbeError::DegreeOverflow { degree: self.cell_degree(cx) + self.cell_degree(cy) });
                }
                let mut t = s.clone();
                t.extend_from_slice(&s2[1..]);
                let Some(&ti) = self.tuple_index[p + q].get(&t) else { continue };
                let ts = self.support[p + q][ti];
                let u = self.cover.piece(ts);
                let fx = self.cover.restriction(self.support[p][cx.tuple], ts).mul_vec(&SparseVec::unit(cx.form));
                let fy = self.cover.restriction(self.support[q][cy.tuple], ts).mul_vec(&SparseVec::unit(cy.form));
                let internal = cx.mask.count_ones() as usize + self.piece_of(cx).degree_of_basis(cx.form);
                let sg = sign_of(q * internal % 2 == 1) * vx * vy;
                let prod = local_mul(u, &form_local(&fx, cx.mask), &form_local(&fy, cy.mask << p));
                for ((m, f), v) in prod {
                    bump(&mut out, Cell { column: p + q, tuple: ti, mask: m, form: f }, &sg * v);
                }
            }
        }
        if let Some(c) = out.keys().find(|c| self.cell_degree(c) > self.deg_max + 1) {
            return Err(GerbeError::DegreeOverflow { degree: self.cell_degree(c) });
        }
        Ok(out)
    }

    pub fn unit(&self) -> Cochain {
        (0..self.cover.charts).map(|i| (Cell { column: 0, tuple: i, mask: 0, form: 0 }, Rational::one())).collect()
    }

    /// `ι(ω)`: a global form restricted to every chart, in column 0.
    pub fn include_global(&self, v: &SparseVec) -> Cochain {
        let mut out = Cochain::new();
        for i in 0..self.cover.charts {
            let s = self.support[0][i];
            for (f, c) in self.cover.restrict_global(s, v).iter() {
                bump(&mut out, Cell { column: 0, tuple: i, mask: 0, form: f }, c.clone());
            }
        }
        out
    }

    /// `l = (α, β)`: `θ_1 + a_(i_0 i_1)` in column 1 and `β_i` in column 0.
    pub fn connection_element(&self) -> Cochain {
        let mut out = Cochain::new();
        for i in 0..self.cover.charts {
            for (f, c) in self.connection.beta[i].iter() {
                bump(&mut out, Cell { column: 0, tuple: i, mask: 0, form: f }, c.clone());
            }
        }
        if self.p_max >= 1 {
            for (ti, t) in self.tuples[1].iter().enumerate() {
                let ts = self.support[1][ti];
                bump(&mut out, Cell { column: 1, tuple: ti, mask: 1, form: 0 }, Rational::one());
                for (f, c) in alternating_value(&self.cover, &self.connection.a, t, ts).iter() {
                    bump(&mut out, Cell { column: 1, tuple: ti, mask: 0, form: f }, c.clone());
                }
            }
        }
        out
    }
}

/// `x + f·y`.
pub fn add_cochains(x: &Cochain, y: &Cochain, f: &Rational) -> Cochain {
    let mut out = x.clone();
    for (c, v) in y {
        bump(&mut out, *c, f * v);
    }
    out
}
