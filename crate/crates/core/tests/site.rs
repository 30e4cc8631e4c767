use std::collections::BTreeSet;
use twistcoh::linalg::IntegralGroup;
use twistcoh::oracle::random::{random_presheaf, to_dense};
use twistcoh::oracle::{cochain_cohomology, exhaustive_colimit_dim, exhaustive_limit, simplicial_cochains, Diagram};
use twistcoh::site::fixtures::*;
use twistcoh::site::json::{PresheafJson, SiteJson};
use twistcoh::site::morphism::{pullback, pushforward, unit};
use twistcoh::site::*;

fn limit_diagram(f: &SiteMorphismData, p: &Presheaf, u: usize) -> Diagram {
    let g = &f.source.category;
    let xs = f.over(u);
    let dims = xs.iter().map(|&x| p.dims[f.elements[x].0]).collect();
    let mut arrows = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        for a in g.hom_into(f.elements[x].0) {
            let j = xs.iter().position(|&y| y == f.act_pre(x, a)).unwrap();
            arrows.push((i, j, to_dense(&p.maps[a])));
        }
    }
    Diagram { dims, arrows }
}

fn colimit_diagram(f: &SiteMorphismData, p: &Presheaf, v: usize) -> Diagram {
    let h = &f.target.category;
    let xs = f.under(v);
    let dims = xs.iter().map(|&x| p.dims[f.elements[x].1]).collect();
    let mut arrows = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        for b in h.hom_from(f.elements[x].1) {
            let j = xs.iter().position(|&y| y == f.act_post(b, x)).unwrap();
            arrows.push((j, i, to_dense(&p.maps[b])));
        }
    }
    Diagram { dims, arrows }
}

fn cover_of(site: &FiniteSite, object: &str, members: &[&str]) -> Vec<usize> {
    let cat = &site.category;
    let o = cat.object_index(object).unwrap();
    let mut fam: Vec<usize> = members.iter().map(|m| cat.hom(cat.object_index(m).unwrap(), o)[0]).collect();
    fam.sort();
    fam
}

#[test]
fn fixture_sites_satisfy_the_axioms() {
    for s in all_sites().into_iter().chain([span(), pair()]) {
        assert!(s.violations().is_empty(), "{}: {:?}", s.name, s.violations());
        let total: usize = s.coverings.iter().map(|c| c.len()).sum();
        assert!(total < 200, "{} has {} coverings", s.name, total);
    }
    for f in all_morphisms() {
        assert!(f.violations().is_empty(), "{}", f.name);
    }
}

#[test]
fn cech_examples() {
    let o = overlap();
    let x = o.category.object_index("X").unwrap();
    let f = Presheaf::constant(&o.category, 2);
    let id = cech_complex(&o, &[o.category.identity(x)], &f, 3).unwrap();
    assert_eq!(id.cohomology_dims(), vec![2, 0, 0]);

    let one = Presheaf::constant(&o.category, 1);
    let c = cech_complex(&o, &cover_of(&o, "X", &["U", "V"]), &one, 3).unwrap();
    assert!(c.delta_squared_vanishes());
    assert_eq!(c.cohomology_dims(), vec![1, 0, 0]);

    let ci = circle();
    let q = locally_constant(&ci, 1);
    let c = cech_complex(&ci, &cover_of(&ci, "X", &["U0", "U1", "U2"]), &q, 3).unwrap();
    assert!(c.delta_squared_vanishes());
    assert_eq!(c.cohomology_dims(), vec![1, 1, 0]);
}

#[test]
fn cech_differential_squares_to_zero_everywhere() {
    for (k, s) in all_sites().iter().enumerate() {
        let f = random_presheaf(k as u64, s);
        for o in 0..s.len() {
            for fam in &s.coverings[o] {
                assert!(cech_complex(s, fam, &f, 3).unwrap().delta_squared_vanishes());
            }
        }
    }
}

#[test]
fn missing_pullback_is_reported() {
    let mut s = overlap();
    let fam = cover_of(&s, "X", &["U", "V"]);
    s.pullbacks.remove(&(fam[1], fam[0]));
    let f = Presheaf::constant(&s.category, 1);
    assert!(matches!(cech_complex(&s, &fam, &f, 2), Err(SiteError::MissingPullback { .. })));
}

#[test]
fn flabby_examples() {
    let ch = chain();
    assert_eq!(is_flabby(&ch, &random_presheaf(3, &ch), 2).unwrap(), None);

    let ci = circle();
    let w = is_flabby(&ci, &locally_constant(&ci, 1), 2).unwrap().expect("not flabby");
    assert_eq!(w.degree, 1);
    assert_eq!(ci.category.objects[w.object], "X");

    let o = overlap();
    let sky = (0..3).map(|p| skyscraper(&o, p)).reduce(|a, b| a.direct_sum(&b)).unwrap();
    sky.validate(&o.category).unwrap();
    assert!(is_sheaf(&o, &sky).unwrap());
    assert_eq!(is_flabby(&o, &sky, 2).unwrap(), None);
}

#[test]
fn plus_construction_of_a_sheaf_is_isomorphic() {
    for s in all_sites() {
        let points: BTreeSet<usize> = s.opens.as_ref().unwrap().iter().flatten().copied().collect();
        let f = points.iter().map(|&p| skyscraper(&s, p)).reduce(|a, b| a.direct_sum(&b)).unwrap();
        assert!(is_sheaf(&s, &f).unwrap(), "{}", s.name);
        let p = plus_construction(&s, &f).unwrap();
        p.presheaf.validate(&s.category).unwrap();
        assert!(p.unit.is_natural(&s.category, &f, &p.presheaf));
        assert!(p.unit.is_iso(), "{}", s.name);
    }
}

#[test]
fn sheafification_on_the_disjoint_cover_doubles() {
    let s = disjoint();
    let x = s.category.object_index("X").unwrap();
    let f = Presheaf::constant(&s.category, 1);
    assert!(!is_sheaf(&s, &f).unwrap());
    let once = plus_construction(&s, &f).unwrap();
    assert_eq!(once.presheaf.dims[x], 1);
    let twice = sheafify(&s, &f).unwrap();
    assert_eq!(twice.presheaf.dims[x], 2);
    assert!(is_sheaf(&s, &twice.presheaf).unwrap());
}

#[test]
fn sheafification_of_random_presheaves() {
    for s in all_sites() {
        for seed in 0..8 {
            let f = random_presheaf(seed, &s);
            f.validate(&s.category).unwrap();
            assert_eq!(refinement_choices_agree(&s, &f).unwrap(), None);
            let sh = sheafify(&s, &f).unwrap();
            sh.presheaf.validate(&s.category).unwrap();
            assert!(sh.unit.is_natural(&s.category, &f, &sh.presheaf));
            assert!(is_sheaf(&s, &sh.presheaf).unwrap(), "{} seed {}", s.name, seed);
            let again = sheafify(&s, &sh.presheaf).unwrap();
            assert!(again.unit.is_iso(), "{} seed {}", s.name, seed);
        }
    }
}

#[test]
fn identity_morphism_pushes_and_pulls_isomorphically() {
    for s in all_sites() {
        let id = SiteMorphismData::identity(&s);
        let f = random_presheaf(11, &s);
        let pulled = pullback(&id, &f).unwrap();
        let pushed = pushforward(&id, &pulled.presheaf).unwrap();
        assert_eq!(pulled.presheaf.dims, f.dims);
        let eta = unit(&id, &f, &pulled, &pushed).unwrap();
        assert!(eta.is_iso());
        let r = adjunction_check(&id, &f, &f).unwrap();
        assert!(r.holds(), "{:?}", r);
        let dim_end = nat_space(&s.category, &f, &f).len();
        assert_eq!(r.hom_dims, (dim_end, dim_end));
    }
}

#[test]
fn empty_comma_category_gives_zero() {
    let f = pair_into_span();
    let p = Presheaf::constant(&f.source.category, 2);
    let pushed = pushforward(&f, &p).unwrap();
    let w = f.target.category.object_index("W").unwrap();
    assert!(f.over(w).is_empty());
    assert_eq!(pushed.presheaf.dims[w], 0);
}

#[test]
fn pushforward_over_a_span_is_an_equalizer() {
    let f = span_into_overlap();
    let x = f.target.category.object_index("X").unwrap();
    assert_eq!(f.over(x).len(), 3);
    let p = Presheaf::constant(&f.source.category, 1);
    assert_eq!(pushforward(&f, &p).unwrap().presheaf.dims[x], 1);
    let q = random_presheaf(5, &f.source);
    let lim = exhaustive_limit(&limit_diagram(&f, &q, x));
    assert_eq!(pushforward(&f, &q).unwrap().presheaf.dims[x], lim.dim());
}

#[test]
fn pullback_with_initial_object_is_evaluation() {
    let f = span_into_overlap();
    let q = random_presheaf(2, &f.target);
    let pulled = pullback(&f, &q).unwrap();
    for v in 0..f.source.len() {
        let name = &f.source.category.objects[v];
        let u = f.target.category.object_index(name).unwrap();
        assert_eq!(pulled.presheaf.dims[v], q.dims[u]);
    }
}

#[test]
fn pullback_without_initial_object_is_a_coproduct() {
    let f = overlap_to_pair();
    let w = f.source.category.object_index("W").unwrap();
    assert_eq!(f.under(w).len(), 2);
    let q = Presheaf::constant(&f.target.category, 1);
    assert_eq!(pullback(&f, &q).unwrap().presheaf.dims[w], 2);
    let x = f.source.category.object_index("X").unwrap();
    assert_eq!(pullback(&f, &q).unwrap().presheaf.dims[x], 0);
}

#[test]
fn limits_and_colimits_agree_with_the_oracle() {
    for (k, f) in all_morphisms().iter().enumerate() {
        for seed in 0..4 {
            let on_source = random_presheaf(100 * k as u64 + seed, &f.source);
            let on_target = random_presheaf(100 * k as u64 + seed + 50, &f.target);
            let pushed = pushforward(f, &on_source).unwrap();
            pushed.presheaf.validate(&f.target.category).unwrap();
            for u in 0..f.target.len() {
                assert_eq!(pushed.presheaf.dims[u], exhaustive_limit(&limit_diagram(f, &on_source, u)).dim());
            }
            let pulled = pullback(f, &on_target).unwrap();
            pulled.presheaf.validate(&f.source.category).unwrap();
            for v in 0..f.source.len() {
                let d = colimit_diagram(f, &on_target, v);
                assert_eq!(pulled.presheaf.dims[v], exhaustive_colimit_dim(&d), "{} {} {:?}", f.name, v, d);
            }
        }
    }
}

#[test]
fn adjunction_on_all_fixture_morphisms() {
    for (k, f) in all_morphisms().iter().enumerate() {
        for seed in 0..3 {
            let a = random_presheaf(7 * k as u64 + seed, &f.target);
            let b = random_presheaf(7 * k as u64 + seed + 1000, &f.source);
            let r = adjunction_check(f, &a, &b).unwrap();
            assert!(r.holds(), "{}: {:?}", f.name, r);
        }
    }
}

#[test]
fn pushforward_comparison() {
    let (f, g) = (pair_into_span(), span_into_overlap());
    let p = random_presheaf(4, &f.source);
    let r = compose_pushforward_compare(&f, &g, &p).unwrap();
    assert!(r.natural);
    let id_first = compose_pushforward_compare(&SiteMorphismData::identity(&f.source), &f, &p).unwrap();
    assert!(id_first.natural && id_first.iso);
    let id_last = compose_pushforward_compare(&f, &SiteMorphismData::identity(&f.target), &p).unwrap();
    assert!(id_last.natural && id_last.iso);
    let mixed = compose_pushforward_compare(&overlap_to_pair(), &SiteMorphismData::identity(&pair()), &random_presheaf(9, &overlap()))
        .unwrap();
    assert!(mixed.natural && mixed.iso);
}

#[test]
fn integral_nerve_cohomology() {
    let z = IntegralGroup::free(1);
    let zero = IntegralGroup::free(0);
    assert_eq!(set_cover_nerve_cohomology(&punctured_cover(3)), vec![z.clone(), z.clone()]);
    assert_eq!(set_cover_nerve_cohomology(&punctured_cover(5)), vec![z.clone(), zero.clone(), zero, z]);
    for n in [3usize, 4, 5] {
        let facets: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| j != i).collect()).collect();
        let (dims, maps) = simplicial_cochains(&facets);
        let oracle = cochain_cohomology(&dims, &maps);
        let main = set_cover_nerve_cohomology(&punctured_cover(n));
        assert_eq!(main.len(), oracle.len());
        for (a, b) in main.iter().zip(&oracle) {
            assert_eq!(a.rank, b.rank);
            assert_eq!(a.torsion, b.torsion);
        }
    }
}

#[test]
fn nerve_of_a_cover_with_a_common_point_is_a_simplex() {
    let sets: Vec<BTreeSet<usize>> = vec![[0, 1].into(), [0, 2].into(), [0].into()];
    assert_eq!(nerve(&sets).iter().map(|s| s.len()).collect::<Vec<_>>(), vec![3, 3, 1]);
}

#[test]
fn json_round_trip() {
    for s in all_sites() {
        let j = SiteJson::from(&s);
        let text = serde_json::to_string(&j).unwrap();
        let back: SiteJson = serde_json::from_str(&text).unwrap();
        let s2 = FiniteSite::try_from(&back).unwrap();
        assert_eq!(SiteJson::from(&s2), j);
        let f = random_presheaf(1, &s);
        let pj = PresheafJson::from(&f);
        assert_eq!(pj.to_presheaf(&s2).unwrap(), f);
    }
    let mut bad = PresheafJson::from(&Presheaf::constant(&overlap().category, 1));
    bad.maps[0] = vec![(0, 0, "2".into())];
    let id0 = overlap().category.identity(overlap().category.source(0));
    assert_eq!(id0, 0, "first morphism of a poset site is an identity");
    assert!(matches!(bad.to_presheaf(&overlap()), Err(SiteError::NotFunctorial(_))));
}
