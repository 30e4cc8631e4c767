use super::cech::cech_complex;
use super::presheaf::{NatTrans, Presheaf};
use super::site::FiniteSite;
use super::SiteError;
use crate::linalg::{kernel_basis, QuotientBasis, SparseMatrix, SparseVec, Subspace};
use itertools::Itertools;

/// `P(F)` together with the unit `F → P(F)`.
#[derive(Debug, Clone)]
pub struct Plus {
    pub presheaf: Presheaf,
    pub unit: NatTrans,
}

/// Per object: the direct sum of `Č^0(τ)` over all coverings, the subspace of
/// compatible families and the refinement relations.
struct Stage {
    offsets: Vec<usize>,
    quotient: QuotientBasis,
}

/// For each member `g_j` of `finer`, a pair `(i, h)` with `g_j = f_i ∘ h`.
fn refinement_choices(site: &FiniteSite, finer: &[usize], coarser: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let cat = &site.category;
    finer
        .iter()
        .map(|&g| {
            let mut out = Vec::new();
            for (i, &f) in coarser.iter().enumerate() {
                for &h in cat.hom(cat.source(g), cat.source(f)) {
                    if cat.compose(f, h) == g {
                        out.push((i, h));
                    }
                }
            }
            out
        })
        .collect()
}

fn h0(site: &FiniteSite, family: &[usize], f: &Presheaf) -> Result<(usize, Subspace), SiteError> {
    let c = cech_complex(site, family, f, 1)?;
    Ok((c.dims[0], kernel_basis(&c.delta[0])))
}

/// The map `Č^0(coarser) → Č^0(finer)` of one refinement choice.
fn refinement_map(f: &Presheaf, site: &FiniteSite, finer: &[usize], coarser: &[usize], choice: &[(usize, usize)]) -> SparseMatrix {
    let off_c = block_offsets(f, site, coarser);
    let off_f = block_offsets(f, site, finer);
    let mut trip = Vec::new();
    for (j, &(i, h)) in choice.iter().enumerate() {
        for (r, c, v) in f.maps[h].triplets() {
            trip.push((off_f[j] + r, off_c[i] + c, v.clone()));
        }
    }
    SparseMatrix::from_triplets(off_f[finer.len()], off_c[coarser.len()], trip).expect("in range")
}

fn block_offsets(f: &Presheaf, site: &FiniteSite, family: &[usize]) -> Vec<usize> {
    let mut off = vec![0];
    for &m in family {
        off.push(off.last().unwrap() + f.dims[site.category.source(m)]);
    }
    off
}

fn stage(site: &FiniteSite, f: &Presheaf, v: usize) -> Result<Stage, SiteError> {
    let covs = &site.coverings[v];
    let mut offsets = vec![0];
    let mut h0s = Vec::new();
    for fam in covs {
        let (dim, h) = h0(site, fam, f)?;
        offsets.push(offsets.last().unwrap() + dim);
        h0s.push(h);
    }
    let ambient = *offsets.last().unwrap();
    let numerator = Subspace::span(
        ambient,
        h0s.iter().enumerate().flat_map(|(t, h)| h.basis().iter().map(|b| b.shift(offsets[t])).collect::<Vec<_>>()),
    );
    let mut relations = Subspace::zero(ambient);
    for (t, coarse) in covs.iter().enumerate() {
        for (t2, fine) in covs.iter().enumerate() {
            if t == t2 {
                continue;
            }
            let choices = refinement_choices(site, fine, coarse);
            if choices.iter().any(|c| c.is_empty()) {
                continue;
            }
            let choice: Vec<(usize, usize)> = choices.iter().map(|c| c[0]).collect();
            let r = refinement_map(f, site, fine, coarse, &choice);
            for s in h0s[t].basis() {
                relations.extend_with(s.shift(offsets[t]).sub(&r.mul_vec(s).shift(offsets[t2])));
            }
        }
    }
    Ok(Stage { offsets, quotient: QuotientBasis::new(&numerator, &relations)? })
}

/// `P(F)(V) = colim_τ H^0(τ, F)` over all coverings and all refinements, with
/// structure maps induced by pulling coverings back.
pub fn plus_construction(site: &FiniteSite, f: &Presheaf) -> Result<Plus, SiteError> {
    let cat = &site.category;
    let stages: Vec<Stage> = (0..site.len()).map(|v| stage(site, f, v)).collect::<Result<_, _>>()?;
    let mut maps = Vec::with_capacity(cat.morphisms.len());
    for (g, m) in cat.morphisms.iter().enumerate() {
        let (src, tgt) = (m.source, m.target);
        // Č^0 of every covering of the target into Č^0 of its pullback.
        let mut trip = Vec::new();
        for (t, fam) in site.coverings[tgt].iter().enumerate() {
            let (members, origin) = site.pulled_back_family(fam, g)?;
            let t2 = site
                .covering_index(src, &members)
                .ok_or_else(|| SiteError::MissingCovering(cat.objects[src].clone()))?;
            let off_in = block_offsets(f, site, fam);
            let off_out = block_offsets(f, site, &members);
            for (j, &(i, p1)) in origin.iter().enumerate() {
                for (r, c, v) in f.maps[p1].triplets() {
                    trip.push((
                        stages[src].offsets[t2] + off_out[j] + r,
                        stages[tgt].offsets[t] + off_in[i] + c,
                        v.clone(),
                    ));
                }
            }
        }
        let big = SparseMatrix::from_triplets(
            *stages[src].offsets.last().unwrap(),
            *stages[tgt].offsets.last().unwrap(),
            trip,
        )
        .expect("in range");
        let cols = stages[tgt]
            .quotient
            .reps()
            .iter()
            .map(|rep| stages[src].quotient.coords(&big.mul_vec(rep)))
            .collect::<Result<Vec<_>, _>>()?;
        maps.push(SparseMatrix::from_columns(stages[src].quotient.dim(), cols));
    }
    let dims: Vec<usize> = stages.iter().map(|s| s.quotient.dim()).collect();
    let mut components = Vec::new();
    for (v, st) in stages.iter().enumerate() {
        let id_cover = site
            .covering_index(v, &[cat.identity(v)])
            .ok_or_else(|| SiteError::MissingCovering(cat.objects[v].clone()))?;
        let cols = (0..f.dims[v])
            .map(|k| st.quotient.coords(&SparseVec::unit(k).shift(st.offsets[id_cover])))
            .collect::<Result<Vec<_>, _>>()?;
        components.push(SparseMatrix::from_columns(st.quotient.dim(), cols));
    }
    Ok(Plus { presheaf: Presheaf { dims, maps }, unit: NatTrans { components } })
}

/// `P(P(F))` and the composite unit `F → P(P(F))`.
pub fn sheafify(site: &FiniteSite, f: &Presheaf) -> Result<Plus, SiteError> {
    let p1 = plus_construction(site, f)?;
    let p2 = plus_construction(site, &p1.presheaf)?;
    Ok(Plus { unit: p1.unit.compose(&p2.unit), presheaf: p2.presheaf })
}

/// Whether every refinement choice between coverings induces the same map on
/// compatible families. Returns the first disagreeing `(object, finer, coarser)`.
pub fn refinement_choices_agree(site: &FiniteSite, f: &Presheaf) -> Result<Option<(usize, usize, usize)>, SiteError> {
    for v in 0..site.len() {
        let covs = &site.coverings[v];
        for (t, coarse) in covs.iter().enumerate() {
            let (_, h) = h0(site, coarse, f)?;
            for (t2, fine) in covs.iter().enumerate() {
                let choices = refinement_choices(site, fine, coarse);
                if choices.iter().any(|c| c.is_empty()) {
                    continue;
                }
                let mut reference: Option<Vec<SparseVec>> = None;
                for choice in choices.iter().map(|c| c.iter().copied()).multi_cartesian_product() {
                    let r = refinement_map(f, site, fine, coarse, &choice);
                    let images: Vec<SparseVec> = h.basis().iter().map(|s| r.mul_vec(s)).collect();
                    match &reference {
                        None => reference = Some(images),
                        Some(x) if *x != images => return Ok(Some((v, t2, t))),
                        Some(_) => {}
                    }
                }
            }
        }
    }
    Ok(None)
}
