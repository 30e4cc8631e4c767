use super::connection::GerbeConnection;
use super::cover::CoverDatum;
use super::fixtures::GerbeFixture;
use super::GerbeError;
use crate::cdga::{Cdga, CdgaJson};
use crate::linalg::{format_rational, parse_rational, SparseMatrix, SparseVec};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

type Triplets = Vec<(usize, usize, String)>;
type Coeffs = Vec<(usize, String)>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexJson {
    pub indices: Vec<usize>,
    pub algebra: CdgaJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceJson {
    pub simplex: Vec<usize>,
    /// Position of the deleted index.
    pub face: usize,
    pub matrix: Triplets,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverJson {
    pub name: String,
    pub charts: usize,
    pub nerve: Vec<SimplexJson>,
    pub faces: Vec<FaceJson>,
    pub global: CdgaJson,
    pub global_restrictions: Vec<Triplets>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectionJson {
    #[serde(rename = "A")]
    pub big_a: Vec<(Vec<usize>, Coeffs)>,
    pub a: Vec<(Vec<usize>, Coeffs)>,
    pub beta: Vec<Coeffs>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GerbeJson {
    pub cover: CoverJson,
    pub connection: ConnectionJson,
}

fn triplets(m: &SparseMatrix) -> Triplets {
    m.triplets().map(|(r, c, v)| (r, c, format_rational(v))).collect()
}

fn coeffs(v: &SparseVec) -> Coeffs {
    v.iter().map(|(i, c)| (i, format_rational(c))).collect()
}

fn parse_vec(c: &Coeffs) -> Result<SparseVec, GerbeError> {
    let pairs = c
        .iter()
        .map(|(i, s)| Ok((*i, parse_rational(s).map_err(|e| GerbeError::Malformed(e.to_string()))?)))
        .collect::<Result<Vec<_>, GerbeError>>()?;
    Ok(SparseVec::from_pairs(pairs))
}

fn parse_matrix(rows: usize, cols: usize, t: &Triplets) -> Result<SparseMatrix, GerbeError> {
    let entries = t
        .iter()
        .map(|(r, c, s)| Ok((*r, *c, parse_rational(s).map_err(|e| GerbeError::Malformed(e.to_string()))?)))
        .collect::<Result<Vec<_>, GerbeError>>()?;
    SparseMatrix::from_triplets(rows, cols, entries).map_err(|e| GerbeError::Malformed(e.to_string()))
}

impl From<&CoverDatum> for CoverJson {
    fn from(c: &CoverDatum) -> Self {
        let mut faces: Vec<FaceJson> = c
            .faces
            .iter()
            .map(|(&(s, k), m)| FaceJson { simplex: c.nerve[s].clone(), face: k, matrix: triplets(m) })
            .collect();
        faces.sort_by(|a, b| (a.simplex.len(), &a.simplex, a.face).cmp(&(b.simplex.len(), &b.simplex, b.face)));
        CoverJson {
            name: c.name.clone(),
            charts: c.charts,
            nerve: c
                .nerve
                .iter()
                .zip(&c.pieces)
                .map(|(s, p)| SimplexJson { indices: s.clone(), algebra: CdgaJson::from(p.as_ref()) })
                .collect(),
            faces,
            global: CdgaJson::from(c.global.as_ref()),
            global_restrictions: c.global_restrictions.iter().map(triplets).collect(),
        }
    }
}

impl TryFrom<&CoverJson> for CoverDatum {
    type Error = GerbeError;

    fn try_from(j: &CoverJson) -> Result<Self, GerbeError> {
        let global = Arc::new(Cdga::try_from(&j.global)?);
        let mut simplices = Vec::new();
        let mut dims: HashMap<Vec<usize>, usize> = HashMap::new();
        for s in &j.nerve {
            let alg = Arc::new(Cdga::try_from(&s.algebra)?);
            dims.insert(s.indices.clone(), alg.dim());
            simplices.push((s.indices.clone(), alg));
        }
        let dim_of = |s: &Vec<usize>| {
            dims.get(s).copied().ok_or_else(|| GerbeError::Malformed(format!("{s:?} is not in the nerve")))
        };
        let mut faces = HashMap::new();
        for f in &j.faces {
            if f.face >= f.simplex.len() {
                return Err(GerbeError::Malformed(format!("face {} of {:?}", f.face, f.simplex)));
            }
            let mut t = f.simplex.clone();
            t.remove(f.face);
            let m = parse_matrix(dim_of(&f.simplex)?, dim_of(&t)?, &f.matrix)?;
            faces.insert((f.simplex.clone(), f.face), m);
        }
        if j.global_restrictions.len() != j.charts {
            return Err(GerbeError::Malformed("one global restriction per chart expected".into()));
        }
        let restrictions = j
            .global_restrictions
            .iter()
            .enumerate()
            .map(|(i, t)| parse_matrix(dim_of(&vec![i])?, global.dim(), t))
            .collect::<Result<Vec<_>, _>>()?;
        CoverDatum::new(j.name.clone(), j.charts, simplices, faces, global, restrictions)
    }
}

impl From<&GerbeConnection> for ConnectionJson {
    fn from(g: &GerbeConnection) -> Self {
        ConnectionJson {
            big_a: g.big_a.iter().map(|(t, v)| (t.clone(), coeffs(v))).collect(),
            a: g.a.iter().map(|(t, v)| (t.clone(), coeffs(v))).collect(),
            beta: g.beta.iter().map(coeffs).collect(),
        }
    }
}

impl TryFrom<&ConnectionJson> for GerbeConnection {
    type Error = GerbeError;

    fn try_from(j: &ConnectionJson) -> Result<Self, GerbeError> {
        let table = |rows: &Vec<(Vec<usize>, Coeffs)>| -> Result<BTreeMap<Vec<usize>, SparseVec>, GerbeError> {
            rows.iter().map(|(t, c)| Ok((t.clone(), parse_vec(c)?))).collect()
        };
        Ok(GerbeConnection {
            big_a: table(&j.big_a)?,
            a: table(&j.a)?,
            beta: j.beta.iter().map(parse_vec).collect::<Result<_, _>>()?,
        })
    }
}

impl From<&GerbeFixture> for GerbeJson {
    fn from(f: &GerbeFixture) -> Self {
        GerbeJson { cover: CoverJson::from(&f.cover), connection: ConnectionJson::from(&f.connection) }
    }
}

impl TryFrom<&GerbeJson> for GerbeFixture {
    type Error = GerbeError;

    fn try_from(j: &GerbeJson) -> Result<Self, GerbeError> {
        Ok(GerbeFixture { cover: CoverDatum::try_from(&j.cover)?, connection: GerbeConnection::try_from(&j.connection)? })
    }
}
