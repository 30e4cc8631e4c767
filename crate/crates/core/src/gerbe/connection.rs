use super::cover::{CoverDatum, CoverViolation};
use super::GerbeError;
use crate::cdga::Degree;
use crate::linalg::{is_injective, rat, solve_linear, Rational, SparseVec};
use std::collections::BTreeMap;
use std::fmt;

/// Connection data on a cover: `big_a` on triples, `a` on pairs, `beta` on charts.
///
/// Only strictly increasing index tuples are stored; absent entries are zero.
/// Other orderings follow by antisymmetry and vanish on repeated indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GerbeConnection {
    pub big_a: BTreeMap<Vec<usize>, SparseVec>,
    pub a: BTreeMap<Vec<usize>, SparseVec>,
    pub beta: Vec<SparseVec>,
}

impl GerbeConnection {
    pub fn trivial(cover: &CoverDatum) -> Self {
        GerbeConnection { big_a: BTreeMap::new(), a: BTreeMap::new(), beta: vec![SparseVec::new(); cover.charts] }
    }
}

/// The sign sorting `tuple`, its sorted form, or `None` on a repeated index.
pub fn sort_with_sign(tuple: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut s = tuple.to_vec();
    let mut odd = false;
    for i in 0..s.len() {
        for j in 0..s.len() - 1 - i {
            if s[j] > s[j + 1] {
                s.swap(j, j + 1);
                odd = !odd;
            }
        }
    }
    if s.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((odd, s))
}

/// Value of an alternating cochain on an ordered tuple, restricted to the
/// simplex `into` (which must contain the tuple's support).
pub fn alternating_value(
    cover: &CoverDatum,
    table: &BTreeMap<Vec<usize>, SparseVec>,
    tuple: &[usize],
    into: usize,
) -> SparseVec {
    let Some((odd, sorted)) = sort_with_sign(tuple) else {
        return SparseVec::new();
    };
    let Some(v) = table.get(&sorted) else {
        return SparseVec::new();
    };
    let from = cover.simplex_index(&sorted).expect("stored tuples lie in the nerve");
    let r = cover.restriction(from, into).mul_vec(v);
    if odd {
        r.neg()
    } else {
        r
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConnectionViolation {
    Cover(CoverViolation),
    NotInNerve { tuple: Vec<usize> },
    WrongDegree { field: &'static str, tuple: Vec<usize>, expected: usize },
    ANotClosed { triple: Vec<usize> },
    ANotCocycle { quadruple: Vec<usize> },
    CoboundaryOfA { triple: Vec<usize> },
    CurvingMismatch { pair: Vec<usize> },
}

impl fmt::Display for ConnectionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConnectionViolation::Cover(v) => write!(f, "{v}"),
            ConnectionViolation::NotInNerve { tuple } => write!(f, "{tuple:?} is not in the nerve"),
            ConnectionViolation::WrongDegree { field, tuple, expected } => {
                write!(f, "{field} on {tuple:?} is not of degree {expected}")
            }
            ConnectionViolation::ANotClosed { triple } => write!(f, "dA != 0 on {triple:?}"),
            ConnectionViolation::ANotCocycle { quadruple } => write!(f, "δA != 0 on {quadruple:?}"),
            ConnectionViolation::CoboundaryOfA { triple } => write!(f, "δa != A on {triple:?}"),
            ConnectionViolation::CurvingMismatch { pair } => write!(f, "δβ != da on {pair:?}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConnectionReport {
    pub violations: Vec<ConnectionViolation>,
}

impl ConnectionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn degree_ok(cover: &CoverDatum, s: usize, v: &SparseVec, k: usize) -> bool {
    matches!(cover.piece(s).degree(v), Degree::Zero) || cover.piece(s).degree(v) == Degree::Of(k)
}

/// Alternating Čech coboundary of a table on the simplex `s` (length `n + 1`).
fn coboundary(cover: &CoverDatum, table: &BTreeMap<Vec<usize>, SparseVec>, s: usize) -> SparseVec {
    let simplex = &cover.nerve[s];
    let mut acc = SparseVec::new();
    for k in 0..simplex.len() {
        let mut t = simplex.clone();
        t.remove(k);
        let v = alternating_value(cover, table, &t, s);
        acc = acc.add_scaled(&v, &rat(if k % 2 == 0 { 1 } else { -1 }));
    }
    acc
}

pub fn validate_connection(cover: &CoverDatum, g: &GerbeConnection) -> ConnectionReport {
    let mut violations: Vec<ConnectionViolation> = cover.violations().into_iter().map(ConnectionViolation::Cover).collect();
    let mut shapes_ok = g.beta.len() == cover.charts;
    if !shapes_ok {
        violations.push(ConnectionViolation::WrongDegree { field: "beta", tuple: vec![], expected: 2 });
    }
    for (field, table, len, deg) in [("A", &g.big_a, 3, 1), ("a", &g.a, 2, 1)] {
        for (t, v) in table {
            match cover.simplex_index(t) {
                Some(s) if t.len() == len && v.max_index().map_or(true, |m| m < cover.piece(s).dim()) => {
                    if !degree_ok(cover, s, v, deg) {
                        violations.push(ConnectionViolation::WrongDegree { field, tuple: t.clone(), expected: deg });
                    }
                }
                _ => {
                    shapes_ok = false;
                    violations.push(ConnectionViolation::NotInNerve { tuple: t.clone() });
                }
            }
        }
    }
    if shapes_ok {
        for (i, b) in g.beta.iter().enumerate() {
            let s = cover.simplex_index(&[i]).expect("chart");
            if !degree_ok(cover, s, b, 2) {
                violations.push(ConnectionViolation::WrongDegree { field: "beta", tuple: vec![i], expected: 2 });
            }
        }
    }
    if !shapes_ok {
        return ConnectionReport { violations };
    }
    for (t, v) in &g.big_a {
        let s = cover.simplex_index(t).expect("checked");
        if !cover.piece(s).d(v).is_zero() {
            violations.push(ConnectionViolation::ANotClosed { triple: t.clone() });
        }
    }
    for (s, t) in cover.simplices_of_len(4) {
        if !coboundary(cover, &g.big_a, s).is_zero() {
            violations.push(ConnectionViolation::ANotCocycle { quadruple: t.clone() });
        }
    }
    for (s, t) in cover.simplices_of_len(3) {
        let a = alternating_value(cover, &g.big_a, t, s);
        if coboundary(cover, &g.a, s) != a {
            violations.push(ConnectionViolation::CoboundaryOfA { triple: t.clone() });
        }
    }
    let beta: BTreeMap<Vec<usize>, SparseVec> = g.beta.iter().enumerate().map(|(i, b)| (vec![i], b.clone())).collect();
    for (s, t) in cover.simplices_of_len(2) {
        let da = cover.piece(s).d(&alternating_value(cover, &g.a, t, s));
        if coboundary(cover, &beta, s) != da {
            violations.push(ConnectionViolation::CurvingMismatch { pair: t.clone() });
        }
    }
    ConnectionReport { violations }
}

/// The global 3-form restricting to `dβ_i` on every chart.
pub fn curvature(cover: &CoverDatum, g: &GerbeConnection) -> Result<SparseVec, GerbeError> {
    let x = &cover.global;
    let m = cover.joint_restriction(3);
    let mut rhs: Vec<(usize, Rational)> = Vec::new();
    let mut offset = 0;
    for i in 0..cover.charts {
        let u = cover.piece(cover.simplex_index(&[i]).expect("chart"));
        let db = u.d(&g.beta[i]);
        let n3 = if u.top_degree() >= 3 { u.dim_of_degree(3) } else { 0 };
        if n3 == 0 {
            if !db.is_zero() {
                return Err(GerbeError::NoGlobalForm);
            }
        } else {
            if u.degree(&db) != Degree::Zero && u.degree(&db) != Degree::Of(3) {
                return Err(GerbeError::NoGlobalForm);
            }
            rhs.extend(u.to_degree_local(3, &db).iter().map(|(k, v)| (k + offset, v.clone())));
        }
        offset += n3;
    }
    let rhs = SparseVec::from_pairs(rhs);
    if m.ncols() == 0 {
        return if rhs.is_zero() { Ok(SparseVec::new()) } else { Err(GerbeError::NoGlobalForm) };
    }
    let sol = solve_linear(&m, &rhs).ok_or(GerbeError::NoGlobalForm)?;
    if !is_injective(&m) {
        return Err(GerbeError::NotUnique);
    }
    let lambda = x.from_degree_local(3, &sol);
    if !x.d(&lambda).is_zero() {
        return Err(GerbeError::NotClosed);
    }
    Ok(lambda)
}
