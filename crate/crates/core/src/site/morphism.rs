use super::presheaf::{nat_space, NatTrans, Presheaf};
use super::site::FiniteSite;
use super::SiteError;
use crate::linalg::{is_invertible, kernel_basis, QuotientBasis, SparseMatrix, SparseVec, Subspace};
use std::collections::HashMap;

/// A morphism of sites presented by the sets of diagrams `V → U` over it: for
/// `V` in the source and `U` in the target, the elements `x` with
/// `elements[x] = (V, U)`, acted on by source morphisms on the right and target
/// morphisms on the left. A functor `φ` gives `Hom(φV, U)`; `from_preimage`
/// gives `Hom(V, ψU)`.
#[derive(Debug, Clone)]
pub struct SiteMorphismData {
    pub name: String,
    pub source: FiniteSite,
    pub target: FiniteSite,
    pub elements: Vec<(usize, usize)>,
    /// `(x, a) ↦ x·a` for `a: V' → V`.
    pub pre: HashMap<(usize, usize), usize>,
    /// `(b, x) ↦ b·x` for `b: U → U'`.
    pub post: HashMap<(usize, usize), usize>,
}

impl SiteMorphismData {
    /// `f` given by a functor `source → target` on objects and morphisms.
    pub fn from_functor(
        name: &str,
        source: &FiniteSite,
        target: &FiniteSite,
        objects: &[usize],
        morphisms: &[usize],
    ) -> Result<Self, SiteError> {
        check_functor(&source.category, &target.category, objects, morphisms)?;
        let (g, h) = (&source.category, &target.category);
        let mut elements = Vec::new();
        let mut index = HashMap::new();
        let mut members = Vec::new();
        for v in 0..g.len() {
            for u in h.hom_from(objects[v]) {
                index.insert((v, u), elements.len());
                elements.push((v, h.target(u)));
                members.push(u);
            }
        }
        let mut pre = HashMap::new();
        let mut post = HashMap::new();
        for (x, &(v, u)) in elements.iter().enumerate() {
            let m = members[x];
            for a in g.hom_into(v) {
                pre.insert((x, a), index[&(g.source(a), h.compose(m, morphisms[a]))]);
            }
            for b in h.hom_from(u) {
                post.insert((b, x), index[&(v, h.compose(b, m))]);
            }
        }
        let out = SiteMorphismData { name: name.into(), source: source.clone(), target: target.clone(), elements, pre, post };
        out.validate()?;
        Ok(out)
    }

    /// `f` whose diagrams over `U` are the maps `V → ψU` for a functor
    /// `ψ: target → source` (as for the inverse image of open sets).
    pub fn from_preimage(
        name: &str,
        source: &FiniteSite,
        target: &FiniteSite,
        objects: &[usize],
        morphisms: &[usize],
    ) -> Result<Self, SiteError> {
        check_functor(&target.category, &source.category, objects, morphisms)?;
        let (g, h) = (&source.category, &target.category);
        let mut elements = Vec::new();
        let mut index = HashMap::new();
        let mut members = Vec::new();
        for u in 0..h.len() {
            for v in g.hom_into(objects[u]) {
                index.insert((v, u), elements.len());
                elements.push((g.source(v), u));
                members.push(v);
            }
        }
        let mut pre = HashMap::new();
        let mut post = HashMap::new();
        for (x, &(v, u)) in elements.iter().enumerate() {
            let m = members[x];
            for a in g.hom_into(v) {
                pre.insert((x, a), index[&(g.compose(m, a), u)]);
            }
            for b in h.hom_from(u) {
                post.insert((b, x), index[&(g.compose(morphisms[b], m), h.target(b))]);
            }
        }
        let out = SiteMorphismData { name: name.into(), source: source.clone(), target: target.clone(), elements, pre, post };
        out.validate()?;
        Ok(out)
    }

    pub fn identity(site: &FiniteSite) -> Self {
        let cat = &site.category;
        let objects: Vec<usize> = (0..cat.len()).collect();
        let morphisms: Vec<usize> = (0..cat.morphisms.len()).collect();
        Self::from_functor(&format!("id_{}", site.name), site, site, &objects, &morphisms).expect("identity functor")
    }

    /// Elements over `U`: the objects of the comma category `G/U`.
    pub fn over(&self, u: usize) -> Vec<usize> {
        (0..self.elements.len()).filter(|&x| self.elements[x].1 == u).collect()
    }

    /// Elements under `V`: the objects of the comma category `V/H`.
    pub fn under(&self, v: usize) -> Vec<usize> {
        (0..self.elements.len()).filter(|&x| self.elements[x].0 == v).collect()
    }

    pub fn act_pre(&self, x: usize, a: usize) -> usize {
        self.pre[&(x, a)]
    }

    pub fn act_post(&self, b: usize, x: usize) -> usize {
        self.post[&(b, x)]
    }

    /// Failures of the action laws.
    pub fn violations(&self) -> Vec<String> {
        let (g, h) = (&self.source.category, &self.target.category);
        let mut out = Vec::new();
        for (x, &(v, u)) in self.elements.iter().enumerate() {
            if self.pre.get(&(x, g.identity(v))) != Some(&x) || self.post.get(&(h.identity(u), x)) != Some(&x) {
                out.push(format!("identity does not act trivially on element {x}"));
            }
            for a in g.hom_into(v) {
                let Some(&xa) = self.pre.get(&(x, a)) else {
                    out.push(format!("missing x.a for element {x}"));
                    continue;
                };
                if self.elements[xa] != (g.source(a), u) {
                    out.push(format!("x.a has wrong endpoints for element {x}"));
                    continue;
                }
                for a2 in g.hom_into(g.source(a)) {
                    if self.pre.get(&(xa, a2)) != self.pre.get(&(x, g.compose(a, a2))) {
                        out.push(format!("right action is not associative at element {x}"));
                    }
                }
                for b in h.hom_from(u) {
                    let left = self.post.get(&(b, xa));
                    let right = self.post.get(&(b, x)).and_then(|&bx| self.pre.get(&(bx, a)));
                    if left != right {
                        out.push(format!("actions do not commute at element {x}"));
                    }
                }
            }
            for b in h.hom_from(u) {
                let Some(&bx) = self.post.get(&(b, x)) else {
                    out.push(format!("missing b.x for element {x}"));
                    continue;
                };
                if self.elements[bx] != (v, h.target(b)) {
                    out.push(format!("b.x has wrong endpoints for element {x}"));
                    continue;
                }
                for b2 in h.hom_from(h.target(b)) {
                    if self.post.get(&(b2, bx)) != self.post.get(&(h.compose(b2, b), x)) {
                        out.push(format!("left action is not associative at element {x}"));
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn validate(&self) -> Result<(), SiteError> {
        match self.violations().into_iter().next() {
            None => Ok(()),
            Some(v) => Err(SiteError::Malformed(v)),
        }
    }

    /// The composite `target(other) ← source(self)`: classes of pairs `(x, y)`
    /// with `x` over the object under `y`, modulo `(b·x, y) ~ (x, y·b)`.
    pub fn then(&self, other: &SiteMorphismData) -> SiteMorphismData {
        self.coend(other).0
    }

    /// The composite and the class of every composable pair `(x, y)`.
    fn coend(&self, other: &SiteMorphismData) -> (SiteMorphismData, HashMap<(usize, usize), usize>) {
        let h = &self.target.category;
        let mut pairs = Vec::new();
        let mut pair_index = HashMap::new();
        for (x, &(_, u)) in self.elements.iter().enumerate() {
            for y in other.under(u) {
                pair_index.insert((x, y), pairs.len());
                pairs.push((x, y));
            }
        }
        let mut uf: Vec<usize> = (0..pairs.len()).collect();
        fn find(uf: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while uf[r] != r {
                r = uf[r];
            }
            let mut i = i;
            while uf[i] != r {
                let next = uf[i];
                uf[i] = r;
                i = next;
            }
            r
        }
        for (x, &(_, u)) in self.elements.iter().enumerate() {
            for b in h.hom_from(u) {
                let bx = self.act_post(b, x);
                for y in other.under(h.target(b)) {
                    let yb = other.act_pre(y, b);
                    let (i, j) = (pair_index[&(bx, y)], pair_index[&(x, yb)]);
                    let (ri, rj) = (find(&mut uf, i), find(&mut uf, j));
                    uf[ri.max(rj)] = ri.min(rj);
                }
            }
        }
        let mut class_of = vec![usize::MAX; pairs.len()];
        let mut elements = Vec::new();
        let mut reps = Vec::new();
        for i in 0..pairs.len() {
            let r = find(&mut uf, i);
            if class_of[r] == usize::MAX {
                class_of[r] = elements.len();
                let (x, y) = pairs[r];
                elements.push((self.elements[x].0, other.elements[y].1));
                reps.push(r);
            }
            class_of[i] = class_of[r];
        }
        let (g, l) = (&self.source.category, &other.target.category);
        let mut pre = HashMap::new();
        let mut post = HashMap::new();
        for (z, &r) in reps.iter().enumerate() {
            let (x, y) = pairs[r];
            let (v, w) = elements[z];
            for a in g.hom_into(v) {
                pre.insert((z, a), class_of[pair_index[&(self.act_pre(x, a), y)]]);
            }
            for c in l.hom_from(w) {
                post.insert((c, z), class_of[pair_index[&(x, other.act_post(c, y))]]);
            }
        }
        let classes = pair_index.iter().map(|(&p, &i)| (p, class_of[i])).collect();
        let composite = SiteMorphismData {
            name: format!("{} then {}", self.name, other.name),
            source: self.source.clone(),
            target: other.target.clone(),
            elements,
            pre,
            post,
        };
        (composite, classes)
    }
}

fn check_functor(
    from: &super::category::FiniteCategory,
    to: &super::category::FiniteCategory,
    objects: &[usize],
    morphisms: &[usize],
) -> Result<(), SiteError> {
    if objects.len() != from.len() || morphisms.len() != from.morphisms.len() {
        return Err(SiteError::Malformed("functor tables have the wrong length".into()));
    }
    for (i, m) in from.morphisms.iter().enumerate() {
        let fm = morphisms[i];
        if fm >= to.morphisms.len() || to.source(fm) != objects[m.source] || to.target(fm) != objects[m.target] {
            return Err(SiteError::Malformed(format!("functor sends {} to a morphism with wrong endpoints", m.name)));
        }
    }
    for o in 0..from.len() {
        if morphisms[from.identity(o)] != to.identity(objects[o]) {
            return Err(SiteError::Malformed(format!("functor does not preserve the identity of {}", from.objects[o])));
        }
    }
    for (g, f, gf) in from.composition_table() {
        if to.compose(morphisms[g], morphisms[f]) != morphisms[gf] {
            return Err(SiteError::Malformed("functor does not preserve composition".into()));
        }
    }
    Ok(())
}

fn offsets_of(dims: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut off = vec![0];
    for d in dims {
        off.push(off.last().unwrap() + d);
    }
    off
}

/// `f_*F` with, per target object, the compatible families it is built from.
#[derive(Debug, Clone)]
pub struct Pushed {
    pub presheaf: Presheaf,
    pub over: Vec<Vec<usize>>,
    pub offsets: Vec<Vec<usize>>,
    pub families: Vec<Subspace>,
}

impl Pushed {
    /// The component at `x` of the family with coordinates `c` over `U`.
    pub fn project(&self, u: usize, x_pos: usize, c: &SparseVec) -> SparseVec {
        let fam = self.families[u].basis_matrix().mul_vec(c);
        fam.slice(self.offsets[u][x_pos]..self.offsets[u][x_pos + 1])
    }
}

/// `f_*F(U) = lim_{G/U} F(V)`, the families `(s_x)` with `s_{x·a} = F(a) s_x`.
pub fn pushforward(f: &SiteMorphismData, pf: &Presheaf) -> Result<Pushed, SiteError> {
    let (g, h) = (&f.source.category, &f.target.category);
    let mut over = Vec::new();
    let mut offsets = Vec::new();
    let mut families = Vec::new();
    for u in 0..h.len() {
        let xs = f.over(u);
        let off = offsets_of(xs.iter().map(|&x| pf.dims[f.elements[x].0]));
        let pos: HashMap<usize, usize> = xs.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut eqs = Vec::new();
        for (i, &x) in xs.iter().enumerate() {
            let v = f.elements[x].0;
            for a in g.hom_into(v) {
                let xa = f.act_pre(x, a);
                if xa == x {
                    continue;
                }
                let j = pos[&xa];
                let m = &pf.maps[a];
                for r in 0..m.nrows() {
                    let mut row: Vec<_> = (0..m.ncols())
                        .map(|c| (off[i] + c, m.get(r, c)))
                        .filter(|(_, q)| *q != crate::linalg::rat(0))
                        .collect();
                    row.push((off[j] + r, crate::linalg::rat(-1)));
                    eqs.push(SparseVec::from_pairs(row));
                }
            }
        }
        let total = off[xs.len()];
        let system = SparseMatrix::from_columns(total, eqs).transpose();
        families.push(kernel_basis(&system));
        offsets.push(off);
        over.push(xs);
    }
    let mut maps = Vec::new();
    for b in 0..h.morphisms.len() {
        let (u, u2) = (h.source(b), h.target(b));
        // t_x = s_{b·x}
        let pos2: HashMap<usize, usize> = over[u2].iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let cols = families[u2]
            .basis()
            .iter()
            .map(|s| {
                let mut t = SparseVec::new();
                for (i, &x) in over[u].iter().enumerate() {
                    let j = pos2[&f.act_post(b, x)];
                    t = t.add(&s.slice(offsets[u2][j]..offsets[u2][j + 1]).shift(offsets[u][i]));
                }
                families[u].coords(&t).ok_or(SiteError::Linalg(crate::linalg::LinalgError::NotInSubspace))
            })
            .collect::<Result<Vec<_>, _>>()?;
        maps.push(SparseMatrix::from_columns(families[u].dim(), cols));
    }
    let dims = families.iter().map(|s| s.dim()).collect();
    Ok(Pushed { presheaf: Presheaf { dims, maps }, over, offsets, families })
}

/// `f_*θ` for `θ: F → F'`.
pub fn pushforward_nat(f: &SiteMorphismData, a: &Pushed, b: &Pushed, theta: &NatTrans) -> Result<NatTrans, SiteError> {
    let mut components = Vec::new();
    for u in 0..a.families.len() {
        let cols = a.families[u]
            .basis()
            .iter()
            .map(|s| {
                let mut t = SparseVec::new();
                for (i, &x) in a.over[u].iter().enumerate() {
                    let v = f.elements[x].0;
                    let piece = s.slice(a.offsets[u][i]..a.offsets[u][i + 1]);
                    t = t.add(&theta.components[v].mul_vec(&piece).shift(b.offsets[u][i]));
                }
                b.families[u].coords(&t).ok_or(SiteError::Linalg(crate::linalg::LinalgError::NotInSubspace))
            })
            .collect::<Result<Vec<_>, _>>()?;
        components.push(SparseMatrix::from_columns(b.families[u].dim(), cols));
    }
    Ok(NatTrans { components })
}

/// `f^*F` with, per source object, the quotient it is built from.
#[derive(Debug, Clone)]
pub struct Pulled {
    pub presheaf: Presheaf,
    pub under: Vec<Vec<usize>>,
    pub offsets: Vec<Vec<usize>>,
    pub quotients: Vec<QuotientBasis>,
}

impl Pulled {
    /// Coordinates of the class of `ι_x(s)` for the `x_pos`-th element under `V`.
    pub fn class_of(&self, v: usize, x_pos: usize, s: &SparseVec) -> Result<SparseVec, SiteError> {
        Ok(self.quotients[v].coords(&s.shift(self.offsets[v][x_pos]))?)
    }
}

/// `f^*F(V) = colim_{V/H} F(U)`, the sum of `F(U_x)` modulo
/// `ι_{b·x}(s) = ι_x(F(b) s)`.
pub fn pullback(f: &SiteMorphismData, pf: &Presheaf) -> Result<Pulled, SiteError> {
    let (g, h) = (&f.source.category, &f.target.category);
    let mut under = Vec::new();
    let mut offsets = Vec::new();
    let mut quotients = Vec::new();
    for v in 0..g.len() {
        let xs = f.under(v);
        let off = offsets_of(xs.iter().map(|&x| pf.dims[f.elements[x].1]));
        let pos: HashMap<usize, usize> = xs.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let total = off[xs.len()];
        let mut rel = Subspace::zero(total);
        for (i, &x) in xs.iter().enumerate() {
            let u = f.elements[x].1;
            for b in h.hom_from(u) {
                let bx = f.act_post(b, x);
                if bx == x {
                    continue;
                }
                let j = pos[&bx];
                for k in 0..pf.dims[h.target(b)] {
                    let e = SparseVec::unit(k);
                    rel.extend_with(e.shift(off[j]).sub(&pf.maps[b].mul_vec(&e).shift(off[i])));
                }
            }
        }
        quotients.push(QuotientBasis::new(&Subspace::full(total), &rel)?);
        offsets.push(off);
        under.push(xs);
    }
    let mut maps = Vec::new();
    for a in 0..g.morphisms.len() {
        let (v2, v) = (g.source(a), g.target(a));
        let pos2: HashMap<usize, usize> = under[v2].iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let cols = quotients[v]
            .reps()
            .iter()
            .map(|r| {
                let mut t = SparseVec::new();
                for (i, &x) in under[v].iter().enumerate() {
                    let j = pos2[&f.act_pre(x, a)];
                    t = t.add(&r.slice(offsets[v][i]..offsets[v][i + 1]).shift(offsets[v2][j]));
                }
                quotients[v2].coords(&t)
            })
            .collect::<Result<Vec<_>, _>>()?;
        maps.push(SparseMatrix::from_columns(quotients[v2].dim(), cols));
    }
    let dims = quotients.iter().map(|q| q.dim()).collect();
    Ok(Pulled { presheaf: Presheaf { dims, maps }, under, offsets, quotients })
}

/// `f^*σ` for `σ: F → F'`.
pub fn pullback_nat(f: &SiteMorphismData, a: &Pulled, b: &Pulled, sigma: &NatTrans) -> Result<NatTrans, SiteError> {
    let mut components = Vec::new();
    for v in 0..a.quotients.len() {
        let cols = a.quotients[v]
            .reps()
            .iter()
            .map(|r| {
                let mut t = SparseVec::new();
                for (i, &x) in a.under[v].iter().enumerate() {
                    let u = f.elements[x].1;
                    let piece = r.slice(a.offsets[v][i]..a.offsets[v][i + 1]);
                    t = t.add(&sigma.components[u].mul_vec(&piece).shift(b.offsets[v][i]));
                }
                b.quotients[v].coords(&t)
            })
            .collect::<Result<Vec<_>, _>>()?;
        components.push(SparseMatrix::from_columns(b.quotients[v].dim(), cols));
    }
    Ok(NatTrans { components })
}

/// `η: F → f_*f^*F`, sending `s ∈ F(U)` to the family of classes `[ι_x(s)]`.
pub fn unit(f: &SiteMorphismData, pf: &Presheaf, pulled: &Pulled, pushed: &Pushed) -> Result<NatTrans, SiteError> {
    let mut components = Vec::new();
    for u in 0..pf.dims.len() {
        let cols = (0..pf.dims[u])
            .map(|k| {
                let s = SparseVec::unit(k);
                let mut t = SparseVec::new();
                for (i, &x) in pushed.over[u].iter().enumerate() {
                    let v = f.elements[x].0;
                    let pos = pulled.under[v].iter().position(|&y| y == x).expect("x lies under its source");
                    t = t.add(&pulled.class_of(v, pos, &s)?.shift(pushed.offsets[u][i]));
                }
                pushed.families[u].coords(&t).ok_or(SiteError::Linalg(crate::linalg::LinalgError::NotInSubspace))
            })
            .collect::<Result<Vec<_>, _>>()?;
        components.push(SparseMatrix::from_columns(pushed.families[u].dim(), cols));
    }
    Ok(NatTrans { components })
}

/// `ε: f^*f_*G → G`, evaluating the family of `ι_y(c)` at `y`.
pub fn counit(f: &SiteMorphismData, pg: &Presheaf, pushed: &Pushed, pulled: &Pulled) -> Result<NatTrans, SiteError> {
    let mut components = Vec::new();
    for w in 0..pg.dims.len() {
        let cols = pulled.quotients[w]
            .reps()
            .iter()
            .map(|r| {
                let mut t = SparseVec::new();
                for (i, &y) in pulled.under[w].iter().enumerate() {
                    let u = f.elements[y].1;
                    let c = r.slice(pulled.offsets[w][i]..pulled.offsets[w][i + 1]);
                    let pos = pushed.over[u].iter().position(|&x| x == y).expect("y lies over its target");
                    t = t.add(&pushed.project(u, pos, &c));
                }
                t
            })
            .collect();
        components.push(SparseMatrix::from_columns(pg.dims[w], cols));
    }
    Ok(NatTrans { components })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjunctionReport {
    pub unit_natural: bool,
    pub counit_natural: bool,
    /// `ε_{f^*F} ∘ f^*η_F = id`.
    pub left_triangle: bool,
    /// `f_*ε_G ∘ η_{f_*G} = id`.
    pub right_triangle: bool,
    /// `dim Nat(f^*F, G)` and `dim Nat(F, f_*G)`.
    pub hom_dims: (usize, usize),
    /// `θ ↦ f_*θ ∘ η` is a linear isomorphism with inverse `σ ↦ ε ∘ f^*σ`.
    pub bijection: bool,
}

impl AdjunctionReport {
    pub fn holds(&self) -> bool {
        self.unit_natural
            && self.counit_natural
            && self.left_triangle
            && self.right_triangle
            && self.hom_dims.0 == self.hom_dims.1
            && self.bijection
    }
}

/// Builds unit and counit for `F` on the target and `G` on the source and checks
/// the adjunction `f^* ⊣ f_*` on this pair.
pub fn adjunction_check(f: &SiteMorphismData, pf: &Presheaf, pg: &Presheaf) -> Result<AdjunctionReport, SiteError> {
    let (gcat, hcat) = (&f.source.category, &f.target.category);
    pf.validate(hcat)?;
    pg.validate(gcat)?;

    let f_star_f = pullback(f, pf)?;
    let push_pull_f = pushforward(f, &f_star_f.presheaf)?;
    let eta_f = unit(f, pf, &f_star_f, &push_pull_f)?;
    let unit_natural = eta_f.is_natural(hcat, pf, &push_pull_f.presheaf);

    let push_g = pushforward(f, pg)?;
    let pull_push_g = pullback(f, &push_g.presheaf)?;
    let eps_g = counit(f, pg, &push_g, &pull_push_g)?;
    let counit_natural = eps_g.is_natural(gcat, &pull_push_g.presheaf, pg);

    // ε_{f^*F} ∘ f^*(η_F)
    let pull_push_pull_f = pullback(f, &push_pull_f.presheaf)?;
    let f_star_eta = pullback_nat(f, &f_star_f, &pull_push_pull_f, &eta_f)?;
    let eps_pull = counit(f, &f_star_f.presheaf, &push_pull_f, &pull_push_pull_f)?;
    let left_triangle = f_star_eta.compose(&eps_pull) == NatTrans::identity(&f_star_f.presheaf);

    // f_*(ε_G) ∘ η_{f_*G}
    let push_pull_push_g = pushforward(f, &pull_push_g.presheaf)?;
    let eta_push = unit(f, &push_g.presheaf, &pull_push_g, &push_pull_push_g)?;
    let f_lower_eps = pushforward_nat(f, &push_pull_push_g, &push_g, &eps_g)?;
    let right_triangle = eta_push.compose(&f_lower_eps) == NatTrans::identity(&push_g.presheaf);

    let left_basis = nat_space(gcat, &f_star_f.presheaf, pg);
    let right_basis = nat_space(hcat, pf, &push_g.presheaf);
    let hom_dims = (left_basis.len(), right_basis.len());

    let right_space = Subspace::span(
        flat_len(pf, &push_g.presheaf),
        right_basis.iter().map(|s| s.flatten(pf, &push_g.presheaf)),
    );
    let mut images = Vec::new();
    let mut round_trip = true;
    for theta in &left_basis {
        let sigma = eta_f.compose(&pushforward_nat(f, &push_pull_f, &push_g, theta)?);
        let back = pullback_nat(f, &f_star_f, &pull_push_g, &sigma)?.compose(&eps_g);
        round_trip &= back == *theta;
        let coords = right_space
            .coords(&sigma.flatten(pf, &push_g.presheaf))
            .ok_or(SiteError::Linalg(crate::linalg::LinalgError::NotInSubspace))?;
        images.push(coords);
    }
    let matrix = SparseMatrix::from_columns(hom_dims.1, images);
    let bijection = round_trip && hom_dims.0 == hom_dims.1 && is_invertible(&matrix);

    Ok(AdjunctionReport { unit_natural, counit_natural, left_triangle, right_triangle, hom_dims, bijection })
}

fn flat_len(a: &Presheaf, b: &Presheaf) -> usize {
    a.dims.iter().zip(&b.dims).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    /// `(g∘f)_*F → g_*f_*F`.
    pub map: NatTrans,
    pub natural: bool,
    pub iso: bool,
}

/// The comparison `(g∘f)_*F → g_*(f_*F)`: a family over the composite is sent
/// to the family of families `(s_{[x, y]})_x` indexed by `y`.
pub fn compose_pushforward_compare(
    f: &SiteMorphismData,
    g: &SiteMorphismData,
    pf: &Presheaf,
) -> Result<ComparisonReport, SiteError> {
    let (gf, class) = f.coend(g);
    let direct = pushforward(&gf, pf)?;
    let inner = pushforward(f, pf)?;
    let outer = pushforward(g, &inner.presheaf)?;
    let mut components = Vec::new();
    for w in 0..direct.families.len() {
        let pos_direct: HashMap<usize, usize> = direct.over[w].iter().enumerate().map(|(i, &z)| (z, i)).collect();
        let cols = direct.families[w]
            .basis()
            .iter()
            .map(|s| {
                let mut big = SparseVec::new();
                for (j, &y) in outer.over[w].iter().enumerate() {
                    let u = g.elements[y].0;
                    let mut fam = SparseVec::new();
                    for (i, &x) in inner.over[u].iter().enumerate() {
                        let z = class[&(x, y)];
                        let k = pos_direct[&z];
                        let piece = s.slice(direct.offsets[w][k]..direct.offsets[w][k + 1]);
                        fam = fam.add(&piece.shift(inner.offsets[u][i]));
                    }
                    let c = inner.families[u]
                        .coords(&fam)
                        .ok_or(SiteError::Linalg(crate::linalg::LinalgError::NotInSubspace))?;
                    big = big.add(&c.shift(outer.offsets[w][j]));
                }
                outer.families[w].coords(&big).ok_or(SiteError::Linalg(crate::linalg::LinalgError::NotInSubspace))
            })
            .collect::<Result<Vec<_>, _>>()?;
        components.push(SparseMatrix::from_columns(outer.families[w].dim(), cols));
    }
    let map = NatTrans { components };
    let natural = map.is_natural(&g.target.category, &direct.presheaf, &outer.presheaf);
    let iso = map.is_iso();
    Ok(ComparisonReport { map, natural, iso })
}
