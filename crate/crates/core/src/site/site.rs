use super::category::FiniteCategory;
use super::SiteError;
use std::collections::{BTreeSet, HashMap};

/// A chosen fibre product of `f: A → C` and `g: B → C`, with `p1: W → A`, `p2: W → B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pullback {
    pub object: usize,
    pub p1: usize,
    pub p2: usize,
}

/// An iterated fibre product `U_{i0} ×_U … ×_U U_{ip}` with its projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibreProduct {
    pub object: usize,
    pub to_base: usize,
    pub projections: Vec<usize>,
}

/// A finite category with covering families and pullback witnesses.
#[derive(Debug, Clone)]
pub struct FiniteSite {
    pub name: String,
    pub category: FiniteCategory,
    /// Per object, the covering families (sorted lists of morphisms into it).
    pub coverings: Vec<Vec<Vec<usize>>>,
    /// `pullbacks[(f, g)]` for morphisms with a common target.
    pub pullbacks: HashMap<(usize, usize), Pullback>,
    /// For sites of subsets, the subset behind each object.
    pub opens: Option<Vec<BTreeSet<usize>>>,
}

const MAX_COVERINGS: usize = 4000;

impl FiniteSite {
    /// Assembles a site and checks every axiom, returning the first violation.
    pub fn new(
        name: &str,
        category: FiniteCategory,
        coverings: Vec<Vec<Vec<usize>>>,
        pullbacks: HashMap<(usize, usize), Pullback>,
    ) -> Result<Self, SiteError> {
        if coverings.len() != category.len() {
            return Err(SiteError::Malformed("one list of coverings per object required".into()));
        }
        let mut coverings = coverings;
        for c in coverings.iter_mut() {
            for fam in c.iter_mut() {
                fam.sort();
                fam.dedup();
            }
        }
        let site = FiniteSite { name: name.to_string(), category, coverings, pullbacks, opens: None };
        match site.violations().into_iter().next() {
            None => Ok(site),
            Some(v) => Err(SiteError::Malformed(v)),
        }
    }

    pub fn len(&self) -> usize {
        self.category.len()
    }

    pub fn is_empty(&self) -> bool {
        self.category.is_empty()
    }

    pub fn pullback(&self, f: usize, g: usize) -> Result<Pullback, SiteError> {
        self.pullbacks.get(&(f, g)).copied().ok_or_else(|| SiteError::MissingPullback {
            f: self.category.morphisms[f].name.clone(),
            g: self.category.morphisms[g].name.clone(),
        })
    }

    /// Iterated fibre product of the members `tuple` of `family`.
    pub fn fibre_product(&self, family: &[usize], tuple: &[usize]) -> Result<FibreProduct, SiteError> {
        let cat = &self.category;
        let first = family[tuple[0]];
        let mut fp = FibreProduct {
            object: cat.source(first),
            to_base: first,
            projections: vec![cat.identity(cat.source(first))],
        };
        for &i in &tuple[1..] {
            let pb = self.pullback(family[i], fp.to_base)?;
            let mut projections: Vec<usize> = fp.projections.iter().map(|&p| cat.compose(p, pb.p2)).collect();
            projections.push(pb.p1);
            fp = FibreProduct { object: pb.object, to_base: cat.compose(fp.to_base, pb.p2), projections };
        }
        Ok(fp)
    }

    /// The morphism `W(tuple) → W(tuple without position k)` compatible with projections.
    pub fn face(&self, from: &FibreProduct, to: &FibreProduct, k: usize) -> Result<usize, SiteError> {
        let cat = &self.category;
        cat.hom(from.object, to.object)
            .iter()
            .copied()
            .find(|&h| {
                to.projections.iter().enumerate().all(|(j, &q)| {
                    let jj = if j < k { j } else { j + 1 };
                    cat.compose(q, h) == from.projections[jj]
                })
            })
            .ok_or_else(|| SiteError::Malformed(format!("no face map out of {}", cat.objects[from.object])))
    }

    /// Family `{W_i → V}` obtained by pulling `family` back along `g: V → U`,
    /// deduplicated, with for each member the index of one original member and
    /// the projection to it.
    pub fn pulled_back_family(&self, family: &[usize], g: usize) -> Result<(Vec<usize>, Vec<(usize, usize)>), SiteError> {
        let mut members: Vec<(usize, (usize, usize))> = Vec::new();
        for (i, &f) in family.iter().enumerate() {
            let pb = self.pullback(f, g)?;
            if !members.iter().any(|(m, _)| *m == pb.p2) {
                members.push((pb.p2, (i, pb.p1)));
            }
        }
        members.sort();
        Ok(members.into_iter().unzip())
    }

    pub fn covering_index(&self, object: usize, family: &[usize]) -> Option<usize> {
        self.coverings[object].iter().position(|c| c == family)
    }

    /// Every violated site axiom, as readable witnesses.
    pub fn violations(&self) -> Vec<String> {
        let cat = &self.category;
        let mut out = Vec::new();
        for o in 0..cat.len() {
            if self.covering_index(o, &[cat.identity(o)]).is_none() {
                out.push(format!("identity does not cover {}", cat.objects[o]));
            }
            for fam in &self.coverings[o] {
                if fam.iter().any(|&m| cat.target(m) != o) {
                    out.push(format!("covering of {} has a member with another target", cat.objects[o]));
                }
                for g in cat.hom_into(o) {
                    match self.pulled_back_family(fam, g) {
                        Ok((pulled, _)) => {
                            if self.covering_index(cat.source(g), &pulled).is_none() {
                                out.push(format!(
                                    "pullback of a covering of {} along {} is not a covering",
                                    cat.objects[o], cat.morphisms[g].name
                                ));
                            }
                        }
                        Err(e) => out.push(e.to_string()),
                    }
                }
            }
        }
        for (&(f, g), pb) in &self.pullbacks {
            if let Some(w) = self.pullback_violation(f, g, pb) {
                out.push(w);
            }
        }
        out.sort();
        out
    }

    fn pullback_violation(&self, f: usize, g: usize, pb: &Pullback) -> Option<String> {
        let cat = &self.category;
        let (a, b, c) = (cat.source(f), cat.source(g), cat.target(f));
        let name = || format!("{} x {}", cat.morphisms[f].name, cat.morphisms[g].name);
        if cat.target(g) != c || cat.source(pb.p1) != pb.object || cat.source(pb.p2) != pb.object {
            return Some(format!("pullback witness {} has wrong shape", name()));
        }
        if cat.target(pb.p1) != a || cat.target(pb.p2) != b || cat.compose(f, pb.p1) != cat.compose(g, pb.p2) {
            return Some(format!("pullback square {} does not commute", name()));
        }
        for t in 0..cat.len() {
            for &x in cat.hom(t, a) {
                for &y in cat.hom(t, b) {
                    if cat.compose(f, x) != cat.compose(g, y) {
                        continue;
                    }
                    let count = cat
                        .hom(t, pb.object)
                        .iter()
                        .filter(|&&h| cat.compose(pb.p1, h) == x && cat.compose(pb.p2, h) == y)
                        .count();
                    if count != 1 {
                        return Some(format!("universal property of {} fails at {}", name(), cat.objects[t]));
                    }
                }
            }
        }
        None
    }
}

/// The site of the given subsets of a finite set (closed under the intersections
/// that coverings need), with coverings generated by `generators` and closed
/// under pullback and composition.
pub fn poset_site(
    name: &str,
    opens: &[(&str, BTreeSet<usize>)],
    generators: &[(&str, Vec<&str>)],
) -> Result<FiniteSite, SiteError> {
    let names: Vec<String> = opens.iter().map(|(n, _)| n.to_string()).collect();
    let sets: Vec<BTreeSet<usize>> = opens.iter().map(|(_, s)| s.clone()).collect();
    let category = FiniteCategory::from_inclusions(names, &sets);
    let incl = |c: &FiniteCategory, a: usize, b: usize| c.hom(a, b).first().copied();
    let mut pullbacks = HashMap::new();
    for f in 0..category.morphisms.len() {
        for g in 0..category.morphisms.len() {
            if category.target(f) != category.target(g) {
                continue;
            }
            let meet: BTreeSet<usize> = sets[category.source(f)].intersection(&sets[category.source(g)]).copied().collect();
            if let Some(w) = sets.iter().position(|s| *s == meet) {
                let p1 = incl(&category, w, category.source(f)).expect("meet below");
                let p2 = incl(&category, w, category.source(g)).expect("meet below");
                pullbacks.insert((f, g), Pullback { object: w, p1, p2 });
            }
        }
    }
    let mut site = FiniteSite {
        name: name.to_string(),
        coverings: (0..category.len()).map(|o| vec![vec![category.identity(o)]]).collect(),
        category,
        pullbacks,
        opens: Some(sets.clone()),
    };
    for (target, members) in generators {
        let t = site.category.object_index(target).ok_or_else(|| SiteError::Malformed(format!("unknown object {target}")))?;
        let mut fam = Vec::new();
        for m in members {
            let s = site.category.object_index(m).ok_or_else(|| SiteError::Malformed(format!("unknown object {m}")))?;
            fam.push(incl(&site.category, s, t).ok_or_else(|| SiteError::Malformed(format!("{m} is not inside {target}")))?);
        }
        let union: BTreeSet<usize> = fam.iter().flat_map(|&m| sets[site.category.source(m)].iter().copied()).collect();
        if union != sets[t] {
            return Err(SiteError::Malformed(format!("generating family of {target} does not cover it")));
        }
        fam.sort();
        fam.dedup();
        if !site.coverings[t].contains(&fam) {
            site.coverings[t].push(fam);
        }
    }
    close_coverings(&mut site)?;
    Ok(site)
}

fn close_coverings(site: &mut FiniteSite) -> Result<(), SiteError> {
    loop {
        let mut added = Vec::new();
        let cat = &site.category;
        for o in 0..cat.len() {
            for fam in &site.coverings[o] {
                for g in cat.hom_into(o) {
                    let (pulled, _) = site.pulled_back_family(fam, g)?;
                    added.push((cat.source(g), pulled));
                }
                for (i, &m) in fam.iter().enumerate() {
                    for sub in &site.coverings[cat.source(m)] {
                        let mut f2: Vec<usize> = fam.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
                        f2.extend(sub.iter().map(|&s| cat.compose(m, s)));
                        f2.sort();
                        f2.dedup();
                        added.push((o, f2));
                    }
                }
            }
        }
        let mut grew = false;
        for (o, fam) in added {
            if !site.coverings[o].contains(&fam) {
                site.coverings[o].push(fam);
                grew = true;
            }
        }
        let total: usize = site.coverings.iter().map(|c| c.len()).sum();
        if total > MAX_COVERINGS {
            return Err(SiteError::Malformed("covering closure is too large".into()));
        }
        if !grew {
            for c in site.coverings.iter_mut() {
                c.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
            }
            return Ok(());
        }
    }
}
