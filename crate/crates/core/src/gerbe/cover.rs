use super::GerbeError;
use crate::cdga::{Cdga, CdgaMorphism};
use crate::linalg::{is_injective, SparseMatrix, SparseVec};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// A finite cover of `X` presented by algebras on the nonempty intersections.
///
/// `nerve` lists the strictly increasing index tuples with nonempty
/// intersection, closed under taking faces. `faces[(s, k)]` is the restriction
/// from the simplex with its `k`-th index deleted to simplex `s`.
#[derive(Debug, Clone)]
pub struct CoverDatum {
    pub name: String,
    pub charts: usize,
    pub nerve: Vec<Vec<usize>>,
    pub pieces: Vec<Arc<Cdga>>,
    pub faces: HashMap<(usize, usize), SparseMatrix>,
    pub global: Arc<Cdga>,
    pub global_restrictions: Vec<SparseMatrix>,
    index: HashMap<Vec<usize>, usize>,
    restrictions: HashMap<(usize, usize), SparseMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverViolation {
    NotMorphism { simplex: Vec<usize>, face: usize, reason: String },
    GlobalNotMorphism { chart: usize, reason: String },
    SimplicialIdentity { simplex: Vec<usize>, faces: (usize, usize) },
    GlobalMismatch { pair: Vec<usize> },
    NotJointlyInjective { degree: usize },
}

impl fmt::Display for CoverViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverViolation::NotMorphism { simplex, face, reason } => {
                write!(f, "face {face} into {simplex:?} is not a morphism: {reason}")
            }
            CoverViolation::GlobalNotMorphism { chart, reason } => {
                write!(f, "restriction to chart {chart} is not a morphism: {reason}")
            }
            CoverViolation::SimplicialIdentity { simplex, faces } => {
                write!(f, "faces {faces:?} of {simplex:?} do not commute")
            }
            CoverViolation::GlobalMismatch { pair } => write!(f, "global restrictions disagree on {pair:?}"),
            CoverViolation::NotJointlyInjective { degree } => {
                write!(f, "restrictions to the charts are not jointly injective in degree {degree}")
            }
        }
    }
}

impl CoverDatum {
    pub fn new(
        name: impl Into<String>,
        charts: usize,
        simplices: Vec<(Vec<usize>, Arc<Cdga>)>,
        faces: HashMap<(Vec<usize>, usize), SparseMatrix>,
        global: Arc<Cdga>,
        global_restrictions: Vec<SparseMatrix>,
    ) -> Result<Self, GerbeError> {
        let mut simplices = simplices;
        simplices.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        let index: HashMap<Vec<usize>, usize> =
            simplices.iter().enumerate().map(|(i, (s, _))| (s.clone(), i)).collect();
        if index.len() != simplices.len() {
            return Err(GerbeError::Malformed("repeated simplex".into()));
        }
        for (s, _) in &simplices {
            if s.is_empty() || s.windows(2).any(|w| w[0] >= w[1]) || s.iter().any(|&i| i >= charts) {
                return Err(GerbeError::Malformed(format!("bad simplex {s:?}")));
            }
        }
        for i in 0..charts {
            if !index.contains_key(&vec![i]) {
                return Err(GerbeError::Malformed(format!("chart {i} missing from the nerve")));
            }
        }
        if global_restrictions.len() != charts {
            return Err(GerbeError::Malformed("one global restriction per chart expected".into()));
        }
        for (i, r) in global_restrictions.iter().enumerate() {
            let u = &simplices[index[&vec![i]]].1;
            if r.shape() != (u.dim(), global.dim()) {
                return Err(GerbeError::Malformed(format!("global restriction to chart {i} has the wrong shape")));
            }
        }
        let mut by_index = HashMap::new();
        for (si, (s, alg)) in simplices.iter().enumerate() {
            if s.len() < 2 {
                continue;
            }
            for k in 0..s.len() {
                let mut t = s.clone();
                t.remove(k);
                let ti = *index
                    .get(&t)
                    .ok_or_else(|| GerbeError::Malformed(format!("face {t:?} of {s:?} missing from the nerve")))?;
                let m = faces
                    .get(&(s.clone(), k))
                    .ok_or_else(|| GerbeError::Malformed(format!("face map {k} of {s:?} missing")))?;
                if m.shape() != (alg.dim(), simplices[ti].1.dim()) {
                    return Err(GerbeError::Malformed(format!("face map {k} of {s:?} has the wrong shape")));
                }
                by_index.insert((si, k), m.clone());
            }
        }
        let (nerve, pieces): (Vec<_>, Vec<_>) = simplices.into_iter().unzip();
        let mut cover = CoverDatum {
            name: name.into(),
            charts,
            nerve,
            pieces,
            faces: by_index,
            global,
            global_restrictions,
            index,
            restrictions: HashMap::new(),
        };
        cover.fill_restrictions();
        Ok(cover)
    }

    /// Every intersection is a copy of `algebra`, every restriction the identity.
    pub fn constant(name: impl Into<String>, charts: usize, nerve: &[Vec<usize>], algebra: Arc<Cdga>) -> Result<Self, GerbeError> {
        let mut simplices: Vec<Vec<usize>> = Vec::new();
        for s in nerve {
            for mask in 1u32..(1 << s.len()) {
                let sub: Vec<usize> = (0..s.len()).filter(|b| mask >> b & 1 == 1).map(|b| s[b]).collect();
                if !simplices.contains(&sub) {
                    simplices.push(sub);
                }
            }
        }
        let id = SparseMatrix::identity(algebra.dim());
        let mut faces = HashMap::new();
        for s in &simplices {
            if s.len() > 1 {
                for k in 0..s.len() {
                    faces.insert((s.clone(), k), id.clone());
                }
            }
        }
        let pieces = simplices.into_iter().map(|s| (s, Arc::clone(&algebra))).collect();
        CoverDatum::new(name, charts, pieces, faces, Arc::clone(&algebra), vec![id; charts])
    }

    fn fill_restrictions(&mut self) {
        for si in 0..self.nerve.len() {
            let s = self.nerve[si].clone();
            for mask in 1u32..(1 << s.len()) {
                let sub: Vec<usize> = (0..s.len()).filter(|b| mask >> b & 1 == 1).map(|b| s[b]).collect();
                let ti = self.index[&sub];
                let m = self.compose_path(ti, si);
                self.restrictions.insert((ti, si), m);
            }
        }
    }

    fn compose_path(&self, from: usize, to: usize) -> SparseMatrix {
        if from == to {
            return SparseMatrix::identity(self.pieces[to].dim());
        }
        let (t, s) = (&self.nerve[from], &self.nerve[to]);
        let k = s.iter().position(|x| !t.contains(x)).expect("proper subset");
        let mut rest = s.clone();
        rest.remove(k);
        let mid = self.index[&rest];
        let inner = self.compose_path(from, mid);
        self.faces[&(to, k)].mul(&inner).expect("shapes")
    }

    pub fn simplex_index(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// The simplex spanned by the indices of a tuple, if it is in the nerve.
    pub fn support(&self, tuple: &[usize]) -> Option<usize> {
        let mut s = tuple.to_vec();
        s.sort_unstable();
        s.dedup();
        self.simplex_index(&s)
    }

    pub fn piece(&self, s: usize) -> &Arc<Cdga> {
        &self.pieces[s]
    }

    /// Restriction from simplex `from` to simplex `to`; `from` must be a face of `to`.
    pub fn restriction(&self, from: usize, to: usize) -> &SparseMatrix {
        &self.restrictions[&(from, to)]
    }

    /// `Ω(X) → Ω(U_s)`, through the first chart of `s`.
    pub fn restrict_global(&self, to: usize, v: &SparseVec) -> SparseVec {
        let i = self.nerve[to][0];
        let ci = self.index[&vec![i]];
        self.restriction(ci, to).mul_vec(&self.global_restrictions[i].mul_vec(v))
    }

    /// Simplices of a given length.
    pub fn simplices_of_len(&self, len: usize) -> impl Iterator<Item = (usize, &Vec<usize>)> {
        self.nerve.iter().enumerate().filter(move |(_, s)| s.len() == len)
    }

    /// The stacked map `Ω^k(X) → ⊕ Ω^k(U_i)`.
    pub fn joint_restriction(&self, k: usize) -> SparseMatrix {
        let cols = if k <= self.global.top_degree() { self.global.basis_of_degree(k).to_vec() } else { Vec::new() };
        let mut out: Option<SparseMatrix> = None;
        for i in 0..self.charts {
            let u = &self.pieces[self.index[&vec![i]]];
            let rows = if k <= u.top_degree() { u.basis_of_degree(k).to_vec() } else { Vec::new() };
            let block = self.global_restrictions[i].select(&rows, &cols);
            out = Some(match out {
                None => block,
                Some(m) => m.vstack(&block),
            });
        }
        out.unwrap_or_else(|| SparseMatrix::zeros(0, cols.len()))
    }

    pub fn violations(&self) -> Vec<CoverViolation> {
        let mut out = Vec::new();
        for (&(si, k), m) in sorted(&self.faces) {
            let s = &self.nerve[si];
            let mut t = s.clone();
            t.remove(k);
            let f = CdgaMorphism::new_unchecked(Arc::clone(&self.pieces[self.index[&t]]), Arc::clone(&self.pieces[si]), m.clone());
            if let Some(reason) = f.violations().into_iter().next() {
                out.push(CoverViolation::NotMorphism { simplex: s.clone(), face: k, reason });
            }
        }
        for (i, r) in self.global_restrictions.iter().enumerate() {
            let u = Arc::clone(&self.pieces[self.index[&vec![i]]]);
            let f = CdgaMorphism::new_unchecked(Arc::clone(&self.global), u, r.clone());
            if let Some(reason) = f.violations().into_iter().next() {
                out.push(CoverViolation::GlobalNotMorphism { chart: i, reason });
            }
        }
        for (si, s) in self.nerve.iter().enumerate() {
            for l in 0..s.len() {
                for k in 0..l {
                    if s.len() < 3 {
                        continue;
                    }
                    let mut sl = s.clone();
                    sl.remove(l);
                    let mut sk = s.clone();
                    sk.remove(k);
                    let a = self.faces[&(si, l)].mul(&self.faces[&(self.index[&sl], k)]).expect("shapes");
                    let b = self.faces[&(si, k)].mul(&self.faces[&(self.index[&sk], l - 1)]).expect("shapes");
                    if a != b {
                        out.push(CoverViolation::SimplicialIdentity { simplex: s.clone(), faces: (k, l) });
                    }
                }
            }
        }
        for (si, s) in self.simplices_of_len(2) {
            let (i, j) = (s[0], s[1]);
            let via = |c: usize| {
                self.restriction(self.index[&vec![c]], si).mul(&self.global_restrictions[c]).expect("shapes")
            };
            if via(i) != via(j) {
                out.push(CoverViolation::GlobalMismatch { pair: s.clone() });
            }
        }
        for k in 0..=self.global.top_degree() {
            if !is_injective(&self.joint_restriction(k)) {
                out.push(CoverViolation::NotJointlyInjective { degree: k });
            }
        }
        out
    }
}

fn sorted<K: Ord + Copy, V>(m: &HashMap<K, V>) -> Vec<(&K, &V)> {
    let mut v: Vec<_> = m.iter().collect();
    v.sort_by_key(|(k, _)| **k);
    v
}
