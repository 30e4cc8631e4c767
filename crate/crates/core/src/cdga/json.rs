use super::algebra::{Cdga, CdgaError};
use crate::linalg::{format_rational, parse_rational, SparseMatrix, SparseVec};
use serde::{Deserialize, Serialize};

/// Serialized form of a [`Cdga`]. Rationals are `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdgaJson {
    pub name: String,
    pub degrees: Vec<usize>,
    pub top_degree: usize,
    pub differential: Vec<(usize, usize, String)>,
    pub product: Vec<(usize, usize, usize, String)>,
}

impl From<&Cdga> for CdgaJson {
    fn from(c: &Cdga) -> Self {
        let differential = c
            .differential()
            .triplets()
            .map(|(r, col, v)| (r, col, format_rational(v)))
            .collect();
        let n = c.dim();
        let mut product = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for (k, v) in c.basis_product(i, j).iter() {
                    product.push((i, j, k, format_rational(v)));
                }
            }
        }
        CdgaJson {
            name: c.name().to_string(),
            degrees: c.degrees().to_vec(),
            top_degree: c.top_degree(),
            differential,
            product,
        }
    }
}

impl TryFrom<&CdgaJson> for Cdga {
    type Error = CdgaError;

    fn try_from(j: &CdgaJson) -> Result<Self, CdgaError> {
        let n = j.degrees.len();
        let parse = |s: &str| parse_rational(s).map_err(|e| CdgaError::Malformed(e.to_string()));
        let triplets = j
            .differential
            .iter()
            .map(|(r, c, v)| Ok((*r, *c, parse(v)?)))
            .collect::<Result<Vec<_>, CdgaError>>()?;
        let differential = SparseMatrix::from_triplets(n, n, triplets)?;
        let mut table: Vec<Vec<(usize, crate::linalg::Rational)>> = vec![Vec::new(); n * n];
        for (i, jj, k, v) in &j.product {
            if *i >= n || *jj >= n || *k >= n {
                return Err(CdgaError::Malformed(format!("product entry ({i},{jj},{k}) out of range")));
            }
            table[i * n + jj].push((*k, parse(v)?));
        }
        let product = table.into_iter().map(SparseVec::from_pairs).collect();
        Cdga::from_tables(j.name.clone(), j.degrees.clone(), j.top_degree, differential, product)
    }
}

pub fn to_json(c: &Cdga) -> String {
    serde_json::to_string_pretty(&CdgaJson::from(c)).expect("serializable")
}

pub fn from_json(s: &str) -> Result<Cdga, CdgaError> {
    let j: CdgaJson = serde_json::from_str(s).map_err(|e| CdgaError::Malformed(e.to_string()))?;
    Cdga::try_from(&j)
}
