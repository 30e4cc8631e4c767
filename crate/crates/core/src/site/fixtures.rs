//! Small sites of subsets, presheaves on them and morphisms between them.

use super::morphism::SiteMorphismData;
use super::presheaf::Presheaf;
use super::site::{poset_site, FiniteSite};
use crate::linalg::SparseMatrix;
use std::collections::BTreeSet;

fn set(xs: &[usize]) -> BTreeSet<usize> {
    xs.iter().copied().collect()
}

/// `a ⊂ b ⊂ c` with only identity coverings.
pub fn chain() -> FiniteSite {
    poset_site("chain", &[("a", set(&[0])), ("b", set(&[0, 1])), ("c", set(&[0, 1, 2]))], &[]).expect("chain")
}

/// `X = U ∪ V` with `U ∩ V = W` a single point.
pub fn overlap() -> FiniteSite {
    poset_site(
        "overlap",
        &[("X", set(&[0, 1, 2])), ("U", set(&[0, 1])), ("V", set(&[1, 2])), ("W", set(&[1]))],
        &[("X", vec!["U", "V"])],
    )
    .expect("overlap")
}

/// Three sets covering three points, pairwise meeting in a point with empty
/// triple intersection: the nerve is the boundary of a triangle.
pub fn circle() -> FiniteSite {
    poset_site(
        "circle",
        &[
            ("X", set(&[0, 1, 2])),
            ("U0", set(&[0, 1])),
            ("U1", set(&[1, 2])),
            ("U2", set(&[0, 2])),
            ("p0", set(&[0])),
            ("p1", set(&[1])),
            ("p2", set(&[2])),
            ("E", set(&[])),
        ],
        &[("X", vec!["U0", "U1", "U2"]), ("E", vec![])],
    )
    .expect("circle")
}

/// `X = U ⊔ V` with the empty set covered by the empty family.
pub fn disjoint() -> FiniteSite {
    poset_site(
        "disjoint",
        &[("X", set(&[0, 1])), ("U", set(&[0])), ("V", set(&[1])), ("E", set(&[]))],
        &[("X", vec!["U", "V"]), ("E", vec![])],
    )
    .expect("disjoint")
}

/// The four-point space whose nerve of `{a,b,c}`, `{a,b,d}` and of `{a}`, `{b}`
/// traces a circle.
pub fn pseudo_circle() -> FiniteSite {
    poset_site(
        "pseudo_circle",
        &[
            ("X", set(&[0, 1, 2, 3])),
            ("abc", set(&[0, 1, 2])),
            ("abd", set(&[0, 1, 3])),
            ("ab", set(&[0, 1])),
            ("a", set(&[0])),
            ("b", set(&[1])),
            ("E", set(&[])),
        ],
        &[("X", vec!["abc", "abd"]), ("ab", vec!["a", "b"]), ("E", vec![])],
    )
    .expect("pseudo_circle")
}

/// `W ⊂ U`, `W ⊂ V` without their union.
pub fn span() -> FiniteSite {
    poset_site("span", &[("U", set(&[0, 1])), ("V", set(&[1, 2])), ("W", set(&[1]))], &[]).expect("span")
}

/// `U` and `V` with no morphisms between them.
pub fn pair() -> FiniteSite {
    poset_site("pair", &[("U", set(&[0, 1])), ("V", set(&[1, 2]))], &[]).expect("pair")
}

pub fn all_sites() -> Vec<FiniteSite> {
    vec![chain(), overlap(), circle(), disjoint(), pseudo_circle()]
}

pub fn site_by_name(name: &str) -> Option<FiniteSite> {
    all_sites().into_iter().chain([span(), pair()]).find(|s| s.name == name)
}

/// `dim` copies of `Q` on every object not covered by the empty family, zero on
/// the others.
pub fn locally_constant(site: &FiniteSite, dim: usize) -> Presheaf {
    let cat = &site.category;
    let dims: Vec<usize> = (0..cat.len())
        .map(|o| if site.coverings[o].iter().any(|c| c.is_empty()) { 0 } else { dim })
        .collect();
    let maps = cat
        .morphisms
        .iter()
        .map(|m| {
            if dims[m.source] == dims[m.target] {
                SparseMatrix::identity(dims[m.source])
            } else {
                SparseMatrix::zeros(dims[m.source], dims[m.target])
            }
        })
        .collect();
    Presheaf { dims, maps }
}

/// `Q` at every subset containing `point`, zero elsewhere.
pub fn skyscraper(site: &FiniteSite, point: usize) -> Presheaf {
    let opens = site.opens.as_ref().expect("site of subsets");
    let dims: Vec<usize> = opens.iter().map(|s| usize::from(s.contains(&point))).collect();
    let maps = site
        .category
        .morphisms
        .iter()
        .map(|m| {
            if dims[m.source] == 1 && dims[m.target] == 1 {
                SparseMatrix::identity(1)
            } else {
                SparseMatrix::zeros(dims[m.source], dims[m.target])
            }
        })
        .collect();
    Presheaf { dims, maps }
}

fn inclusion_tables(from: &FiniteSite, to: &FiniteSite) -> (Vec<usize>, Vec<usize>) {
    let (a, b) = (&from.category, &to.category);
    let objects: Vec<usize> = a.objects.iter().map(|o| b.object_index(o).expect("shared object")).collect();
    let morphisms = a
        .morphisms
        .iter()
        .map(|m| b.hom(objects[m.source], objects[m.target])[0])
        .collect();
    (objects, morphisms)
}

/// The inclusion of `span` into `overlap`; over `X` the comma category is
/// the span itself, which has no terminal object.
pub fn span_into_overlap() -> SiteMorphismData {
    let (g, h) = (span(), overlap());
    let (o, m) = inclusion_tables(&g, &h);
    SiteMorphismData::from_functor("span_into_overlap", &g, &h, &o, &m).expect("functor")
}

/// The inclusion of `pair` into `span`.
pub fn pair_into_span() -> SiteMorphismData {
    let (g, h) = (pair(), span());
    let (o, m) = inclusion_tables(&g, &h);
    SiteMorphismData::from_functor("pair_into_span", &g, &h, &o, &m).expect("functor")
}

/// Restriction from `overlap` to `pair`, through the preimage functor
/// `pair → overlap`. Under `W` there are two diagrams and no initial one.
pub fn overlap_to_pair() -> SiteMorphismData {
    let (g, h) = (overlap(), pair());
    let (o, m) = inclusion_tables(&h, &g);
    SiteMorphismData::from_preimage("overlap_to_pair", &g, &h, &o, &m).expect("preimage")
}

/// Restriction from `span` to `pair` through the preimage functor.
pub fn span_to_pair() -> SiteMorphismData {
    let (g, h) = (span(), pair());
    let (o, m) = inclusion_tables(&h, &g);
    SiteMorphismData::from_preimage("span_to_pair", &g, &h, &o, &m).expect("preimage")
}

pub fn all_morphisms() -> Vec<SiteMorphismData> {
    let mut out: Vec<SiteMorphismData> = all_sites().iter().map(SiteMorphismData::identity).collect();
    out.extend([span_into_overlap(), pair_into_span(), overlap_to_pair(), span_to_pair()]);
    out
}
