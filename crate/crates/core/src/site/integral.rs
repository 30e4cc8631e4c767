use crate::linalg::{integral_cohomology, IntMatrix, IntegralGroup};
use num::BigInt;
use std::collections::BTreeSet;

/// Simplices of the nerve of a cover by sets: increasing index tuples whose
/// members have a common point, grouped by dimension.
pub fn nerve(sets: &[BTreeSet<usize>]) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut frontier: Vec<(Vec<usize>, BTreeSet<usize>)> =
        sets.iter().enumerate().filter(|(_, s)| !s.is_empty()).map(|(i, s)| (vec![i], s.clone())).collect();
    while !frontier.is_empty() {
        out.push(frontier.iter().map(|(t, _)| t.clone()).collect());
        let mut next = Vec::new();
        for (t, meet) in &frontier {
            for j in t.last().unwrap() + 1..sets.len() {
                let m: BTreeSet<usize> = meet.intersection(&sets[j]).copied().collect();
                if !m.is_empty() {
                    let mut t2 = t.clone();
                    t2.push(j);
                    next.push((t2, m));
                }
            }
        }
        frontier = next;
    }
    out
}

/// Alternating Čech cochains of the constant sheaf `Z` for a cover by sets.
pub fn nerve_cochains(sets: &[BTreeSet<usize>]) -> (Vec<usize>, Vec<IntMatrix>) {
    let simplices = nerve(sets);
    let dims: Vec<usize> = simplices.iter().map(|s| s.len()).collect();
    let mut maps = Vec::new();
    for p in 0..simplices.len().saturating_sub(1) {
        let mut m = IntMatrix::zeros(dims[p + 1], dims[p]);
        for (r, big) in simplices[p + 1].iter().enumerate() {
            for k in 0..big.len() {
                let mut face = big.clone();
                face.remove(k);
                let c = simplices[p].binary_search(&face).expect("faces of nerve simplices are simplices");
                m.set(r, c, BigInt::from(if k % 2 == 0 { 1 } else { -1 }));
            }
        }
        maps.push(m);
    }
    (dims, maps)
}

/// `Ȟ^*(cover; Z)` by Smith normal form.
pub fn set_cover_nerve_cohomology(sets: &[BTreeSet<usize>]) -> Vec<IntegralGroup> {
    let (dims, maps) = nerve_cochains(sets);
    integral_cohomology(&dims, &maps)
}

/// The cover of `{0, …, n-1}` by the `n` sets omitting one point; its nerve is
/// the boundary of the `(n-1)`-simplex.
pub fn punctured_cover(n: usize) -> Vec<BTreeSet<usize>> {
    (0..n).map(|i| (0..n).filter(|&j| j != i).collect()).collect()
}
