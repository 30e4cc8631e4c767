use super::SiteError;
use std::collections::{BTreeSet, HashMap};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite category given by its morphism table.
#[derive(Debug, Clone)]
pub struct FiniteCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    /// `compose[(g, f)] = g ∘ f` for `f: a → b`, `g: b → c`.
    compose: HashMap<(usize, usize), usize>,
    hom: HashMap<(usize, usize), Vec<usize>>,
}

impl FiniteCategory {
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        compose: HashMap<(usize, usize), usize>,
    ) -> Result<Self, SiteError> {
        let mut hom: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (i, m) in morphisms.iter().enumerate() {
            if m.source >= objects.len() || m.target >= objects.len() {
                return Err(SiteError::Malformed(format!("morphism {} has an unknown endpoint", m.name)));
            }
            hom.entry((m.source, m.target)).or_default().push(i);
        }
        if identities.len() != objects.len() {
            return Err(SiteError::Malformed("one identity per object required".into()));
        }
        let c = FiniteCategory { objects, morphisms, identities, compose, hom };
        c.check_axioms()?;
        Ok(c)
    }

    /// The poset of the given sets under inclusion, one morphism per inclusion.
    pub fn from_inclusions(names: Vec<String>, sets: &[BTreeSet<usize>]) -> Self {
        let n = sets.len();
        let mut morphisms = Vec::new();
        let mut index = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                if sets[a].is_subset(&sets[b]) {
                    index.insert((a, b), morphisms.len());
                    morphisms.push(Morphism { name: format!("{}<{}", names[a], names[b]), source: a, target: b });
                }
            }
        }
        let identities = (0..n).map(|a| index[&(a, a)]).collect();
        let mut compose = HashMap::new();
        for (&(a, b), &f) in &index {
            for c in 0..n {
                if let Some(&g) = index.get(&(b, c)) {
                    compose.insert((g, f), index[&(a, c)]);
                }
            }
        }
        FiniteCategory::new(names, morphisms, identities, compose).expect("posets are categories")
    }

    fn check_axioms(&self) -> Result<(), SiteError> {
        for (o, &id) in self.identities.iter().enumerate() {
            let m = &self.morphisms[id];
            if m.source != o || m.target != o {
                return Err(SiteError::Malformed(format!("identity of object {o} is not an endomorphism")));
            }
        }
        for (f, mf) in self.morphisms.iter().enumerate() {
            for g in self.hom_from(mf.target) {
                let gf = self.try_compose(g, f).ok_or_else(|| {
                    SiteError::Malformed(format!("missing composite of {} and {}", self.morphisms[g].name, mf.name))
                })?;
                let m = &self.morphisms[gf];
                if m.source != mf.source || m.target != self.morphisms[g].target {
                    return Err(SiteError::Malformed(format!("composite {} has wrong endpoints", m.name)));
                }
            }
            if self.try_compose(self.identities[mf.target], f) != Some(f)
                || self.try_compose(f, self.identities[mf.source]) != Some(f)
            {
                return Err(SiteError::Malformed(format!("identity law fails for {}", mf.name)));
            }
        }
        for f in 0..self.morphisms.len() {
            for g in self.hom_from(self.morphisms[f].target) {
                for h in self.hom_from(self.morphisms[g].target) {
                    let left = self.compose(h, self.compose(g, f));
                    let right = self.compose(self.compose(h, g), f);
                    if left != right {
                        return Err(SiteError::Malformed(format!("associativity fails at ({f},{g},{h})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identities[o]
    }

    pub fn source(&self, m: usize) -> usize {
        self.morphisms[m].source
    }

    pub fn target(&self, m: usize) -> usize {
        self.morphisms[m].target
    }

    pub fn try_compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose.get(&(g, f)).copied()
    }

    /// `g ∘ f`; panics if not composable.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        self.try_compose(g, f)
            .unwrap_or_else(|| panic!("{} and {} are not composable", self.morphisms[g].name, self.morphisms[f].name))
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        self.hom.get(&(a, b)).map_or(&[], |v| v.as_slice())
    }

    pub fn hom_from(&self, a: usize) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&m| self.morphisms[m].source == a).collect()
    }

    pub fn hom_into(&self, b: usize) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&m| self.morphisms[m].target == b).collect()
    }

    pub fn composition_table(&self) -> Vec<(usize, usize, usize)> {
        let mut t: Vec<_> = self.compose.iter().map(|(&(g, f), &h)| (g, f, h)).collect();
        t.sort();
        t
    }

    pub fn identities(&self) -> &[usize] {
        &self.identities
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }
}
