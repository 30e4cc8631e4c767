use super::category::{FiniteCategory, Morphism};
use super::presheaf::Presheaf;
use super::site::{FiniteSite, Pullback};
use super::SiteError;
use crate::linalg::{format_rational, parse_rational, SparseMatrix};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A pullback witness `(f, g) ↦ (W, p1, p2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullbackJson {
    pub f: usize,
    pub g: usize,
    pub object: usize,
    pub p1: usize,
    pub p2: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteJson {
    pub name: String,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismJson>,
    pub identities: Vec<usize>,
    /// `(g, f, g∘f)`.
    pub composition: Vec<(usize, usize, usize)>,
    pub coverings: Vec<Vec<Vec<usize>>>,
    pub pullbacks: Vec<PullbackJson>,
}

impl From<&FiniteSite> for SiteJson {
    fn from(s: &FiniteSite) -> Self {
        let cat = &s.category;
        let mut pullbacks: Vec<PullbackJson> = s
            .pullbacks
            .iter()
            .map(|(&(f, g), pb)| PullbackJson { f, g, object: pb.object, p1: pb.p1, p2: pb.p2 })
            .collect();
        pullbacks.sort_by_key(|p| (p.f, p.g));
        SiteJson {
            name: s.name.clone(),
            objects: cat.objects.clone(),
            morphisms: cat
                .morphisms
                .iter()
                .map(|m| MorphismJson { name: m.name.clone(), source: m.source, target: m.target })
                .collect(),
            identities: cat.identities().to_vec(),
            composition: cat.composition_table(),
            coverings: s.coverings.clone(),
            pullbacks,
        }
    }
}

impl TryFrom<&SiteJson> for FiniteSite {
    type Error = SiteError;

    fn try_from(j: &SiteJson) -> Result<Self, SiteError> {
        let morphisms = j
            .morphisms
            .iter()
            .map(|m| Morphism { name: m.name.clone(), source: m.source, target: m.target })
            .collect();
        let n = j.morphisms.len();
        if j.composition.iter().any(|&(g, f, gf)| g >= n || f >= n || gf >= n)
            || j.identities.iter().any(|&i| i >= n)
            || j.coverings.iter().flatten().flatten().any(|&m| m >= n)
        {
            return Err(SiteError::Malformed("morphism index out of range".into()));
        }
        let compose = j.composition.iter().map(|&(g, f, gf)| ((g, f), gf)).collect();
        let category = FiniteCategory::new(j.objects.clone(), morphisms, j.identities.clone(), compose)?;
        let mut pullbacks = HashMap::new();
        for p in &j.pullbacks {
            if [p.f, p.g, p.p1, p.p2].iter().any(|&m| m >= n) || p.object >= j.objects.len() {
                return Err(SiteError::Malformed("pullback witness out of range".into()));
            }
            pullbacks.insert((p.f, p.g), Pullback { object: p.object, p1: p.p1, p2: p.p2 });
        }
        FiniteSite::new(&j.name, category, j.coverings.clone(), pullbacks)
    }
}

/// Dimensions and one `(row, col, "p/q")` list per morphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresheafJson {
    pub dims: Vec<usize>,
    pub maps: Vec<Vec<(usize, usize, String)>>,
}

impl From<&Presheaf> for PresheafJson {
    fn from(p: &Presheaf) -> Self {
        PresheafJson {
            dims: p.dims.clone(),
            maps: p
                .maps
                .iter()
                .map(|m| m.triplets().map(|(r, c, v)| (r, c, format_rational(v))).collect())
                .collect(),
        }
    }
}

impl PresheafJson {
    /// Reads the matrices with shapes taken from `site` and checks functoriality.
    pub fn to_presheaf(&self, site: &FiniteSite) -> Result<Presheaf, SiteError> {
        let cat = &site.category;
        if self.dims.len() != cat.len() || self.maps.len() != cat.morphisms.len() {
            return Err(SiteError::Malformed("presheaf does not match the site".into()));
        }
        let maps = self
            .maps
            .iter()
            .zip(&cat.morphisms)
            .map(|(entries, m)| {
                let trip = entries
                    .iter()
                    .map(|(r, c, v)| {
                        parse_rational(v).map(|q| (*r, *c, q)).map_err(|e| SiteError::Malformed(e.to_string()))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                SparseMatrix::from_triplets(self.dims[m.source], self.dims[m.target], trip)
                    .map_err(|e| SiteError::Malformed(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let p = Presheaf { dims: self.dims.clone(), maps };
        p.validate(cat)?;
        Ok(p)
    }
}
