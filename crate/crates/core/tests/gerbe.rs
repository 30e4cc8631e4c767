use rand::Rng;
use std::collections::HashMap;
use std::sync::Arc;
use twistcoh::cdga::{betti, fixtures::t3, point};
use twistcoh::gerbe::fixtures::*;
use twistcoh::gerbe::*;
use twistcoh::linalg::{rat, Rational, SparseMatrix, SparseVec};
use twistcoh::oracle::mayer_vietoris_betti;
use twistcoh::oracle::random::{rng, to_dense};
use twistcoh::twisted::{gauge_transform, z_graded_complex, TwistClass};

fn sign(odd: bool) -> Rational {
    rat(if odd { -1 } else { 1 })
}

fn random_cochain(t: &TotalComplex, n: usize, seed: u64) -> Cochain {
    let mut r = rng(seed);
    let mut out = Cochain::new();
    for &c in t.cells(n) {
        if r.gen_bool(0.3) {
            let v: i64 = r.gen_range(-2..=2);
            if v != 0 {
                out.insert(c, rat(v));
            }
        }
    }
    out
}

/// `X = Λ(a, b, c)` over one chart `U = Q`, restricting by the augmentation.
fn augmented_cover() -> CoverDatum {
    let x = Arc::new(t3());
    let r = SparseMatrix::from_triplets(1, x.dim(), [(0, 0, rat(1))]).unwrap();
    CoverDatum::new("augmented", 1, vec![(vec![0], Arc::new(point()))], HashMap::new(), x, vec![r]).unwrap()
}

/// `H(X) ⊗ Q[z]` with `z` in degree 2.
fn polynomial_pattern(b: &[usize], upto: usize) -> Vec<usize> {
    (0..=upto).map(|n| (0..=n).filter(|k| (n - k) % 2 == 0).map(|k| b.get(k).copied().unwrap_or(0)).sum()).collect()
}

#[test]
fn fixtures_validate() {
    for f in all() {
        assert!(f.cover.violations().is_empty(), "{}: {:?}", f.cover.name, f.cover.violations());
        let rep = validate_connection(&f.cover, &f.connection);
        assert!(rep.is_valid(), "{}: {:?}", f.cover.name, rep.violations);
    }
    for seed in 0..5 {
        assert!(validate_connection(&t3_stretch(seed).cover, &t3_stretch(seed).connection).is_valid());
    }
}

#[test]
fn trivial_connection_and_single_chart_are_valid() {
    for f in all() {
        assert!(validate_connection(&f.cover, &GerbeConnection::trivial(&f.cover)).is_valid());
    }
    let mut f = t3_exact();
    let u = &f.cover.global;
    f.connection.beta[0] = SparseVec::from_pairs(u.basis_of_degree(2).iter().map(|&i| (i, rat(i as i64))));
    assert!(validate_connection(&f.cover, &f.connection).is_valid());
}

#[test]
fn injected_faults_are_reported_with_witnesses() {
    let expect = |fault: Fault, v: ConnectionViolation| {
        let f = with_fault(fault, 1);
        let rep = validate_connection(&f.cover, &f.connection);
        assert!(rep.violations.contains(&v), "{fault:?}: {:?}", rep.violations);
    };
    expect(Fault::ANotClosed, ConnectionViolation::ANotClosed { triple: vec![0, 1, 2] });
    expect(Fault::ANotCocycle, ConnectionViolation::ANotCocycle { quadruple: vec![0, 1, 2, 3] });
    expect(Fault::CoboundaryOfA, ConnectionViolation::CoboundaryOfA { triple: vec![0, 1, 2] });
    expect(Fault::CurvingMismatch, ConnectionViolation::CurvingMismatch { pair: vec![0, 1] });
    expect(Fault::CurvingMismatch, ConnectionViolation::CurvingMismatch { pair: vec![1, 2] });
    let f = with_fault(Fault::CurvingMismatch, 1);
    let rep = validate_connection(&f.cover, &f.connection);
    assert!(!rep.violations.contains(&ConnectionViolation::CurvingMismatch { pair: vec![0, 2] }));
}

#[test]
fn alternating_extension() {
    assert_eq!(sort_with_sign(&[2, 0, 1]), Some((false, vec![0, 1, 2])));
    assert_eq!(sort_with_sign(&[1, 0, 2]), Some((true, vec![0, 1, 2])));
    assert_eq!(sort_with_sign(&[1, 0, 1]), None);
    let f = t3_stretch(3);
    let s = f.cover.simplex_index(&[0, 1, 2]).unwrap();
    let a012 = alternating_value(&f.cover, &f.connection.big_a, &[0, 1, 2], s);
    assert!(!a012.is_zero());
    assert_eq!(alternating_value(&f.cover, &f.connection.big_a, &[1, 0, 2], s), a012.neg());
    assert_eq!(alternating_value(&f.cover, &f.connection.big_a, &[2, 0, 1], s), a012);
    assert!(alternating_value(&f.cover, &f.connection.big_a, &[0, 0, 2], s).is_zero());
}

#[test]
fn curvature_examples() {
    let f = disk_cover();
    assert!(curvature(&f.cover, &f.connection).unwrap().is_zero());
    for f in [t3_exact(), t3_disk()] {
        let x = &f.cover.global;
        assert_eq!(curvature(&f.cover, &f.connection).unwrap(), x.d(&f.connection.beta[0]));
    }
    let f = s3_two_chart();
    let lambda = curvature(&f.cover, &f.connection).unwrap();
    // γ = (y, y) is basis element 1 of the glued algebra.
    assert_eq!(lambda, f.cover.global.d(&SparseVec::unit(1)));
    assert!(!lambda.is_zero());
    for f in all() {
        let lambda = curvature(&f.cover, &f.connection).unwrap();
        assert!(f.cover.global.d(&lambda).is_zero());
    }
}

#[test]
fn curvature_errors() {
    let mut f = twisted_cover(2, 0);
    f.connection.beta[1] = SparseVec::new();
    assert!(matches!(curvature(&f.cover, &f.connection), Err(GerbeError::NoGlobalForm)));
    let cover = augmented_cover();
    let g = GerbeConnection::trivial(&cover);
    assert!(matches!(curvature(&cover, &g), Err(GerbeError::NotUnique)));
    assert!(cover.violations().contains(&CoverViolation::NotJointlyInjective { degree: 3 }));
}

#[test]
fn curvature_shifts_by_an_exact_form() {
    let f = s3_two_chart();
    let x = &f.cover.global;
    let lambda = curvature(&f.cover, &f.connection).unwrap();
    for gamma in [SparseVec::unit(1), SparseVec::from_pairs([(1, rat(-3))])] {
        let mut g = f.connection.clone();
        for i in 0..2 {
            g.beta[i] = g.beta[i].add(&f.cover.global_restrictions[i].mul_vec(&gamma));
        }
        assert!(validate_connection(&f.cover, &g).is_valid());
        let shifted = curvature(&f.cover, &g).unwrap();
        assert_eq!(shifted, lambda.add(&x.d(&gamma)));
        let cohom = twistcoh::cdga::cohomology_ring(x).unwrap();
        let diff = x.to_degree_local(3, &shifted.sub(&lambda));
        assert!(cohom.group(3).quotient.is_trivial(&diff).unwrap());
    }
}

#[test]
fn d_squared_vanishes_on_valid_data() {
    for f in all() {
        for kind in [Cochains::Normalized, Cochains::Full] {
            let deg = if f.cover.charts > 1 { 3 } else { f.cover.global.top_degree() + 2 };
            let t = build_total_complex(&f.cover, &f.connection, kind, None, deg).unwrap();
            assert_eq!(t.d_squared_nnz(), 0, "{} {kind:?}", f.cover.name);
        }
    }
}

#[test]
fn faults_in_a_are_exactly_those_breaking_d_squared() {
    for fault in ALL_FAULTS {
        let f = with_fault(fault, 2);
        assert!(matches!(
            build_total_complex(&f.cover, &f.connection, Cochains::Full, None, 3),
            Err(GerbeError::ValidationFailed(_))
        ));
        let t = TotalComplex::build_unchecked(&f.cover, &f.connection, Cochains::Full, None, 3).unwrap();
        let breaks_a = matches!(fault, Fault::ANotClosed | Fault::ANotCocycle);
        assert_eq!(t.d_squared_nnz() != 0, breaks_a, "{fault:?}");
        if !breaks_a {
            // D only sees A; broken a or β instead break D l = ι(λ).
            let lambda = curvature(&f.cover, &f.connection).unwrap();
            assert_ne!(t.apply_d(&t.connection_element()), t.include_global(&lambda), "{fault:?}");
        }
    }
}

#[test]
fn single_chart_without_twist_is_forms_times_bar_complex() {
    for f in [t3_exact(), t3_disk(), point_trivial()] {
        let x = &f.cover.global;
        let deg = x.top_degree() + 3;
        let t = build_total_complex(&f.cover, &f.connection, Cochains::Full, None, deg).unwrap();
        assert_eq!(t.betti().unwrap(), polynomial_pattern(&betti(x).unwrap(), deg), "{}", f.cover.name);
    }
    assert_eq!(bs1_bar_complex(7).unwrap(), polynomial_pattern(&[1], 7));
}

#[test]
fn theta_free_part_is_mayer_vietoris() {
    let f = s3_two_chart();
    let c = &f.cover;
    let s01 = c.simplex_index(&[0, 1]).unwrap();
    let (u0, u1, u01) = (c.piece(0), c.piece(1), c.piece(s01));
    let f0 = to_dense(&c.faces[&(s01, 1)]);
    let f1 = to_dense(&c.faces[&(s01, 0)]);
    let mv = mayer_vietoris_betti(u0, u1, u01, &f0, &f1, 5);
    assert_eq!(mv, vec![1, 0, 0, 1, 0, 0]);
    let mut bx = betti(&c.global).unwrap();
    bx.resize(6, 0);
    assert_eq!(mv, bx);
    for kind in [Cochains::Full, Cochains::Normalized] {
        let t = build_total_complex(c, &f.connection, kind, None, 5).unwrap();
        assert_eq!(t.theta_free_betti().unwrap(), mv, "{kind:?}");
    }
}

#[test]
fn product_is_unital_and_associative() {
    for f in [s3_two_chart(), t3_stretch(1), t3_exact()] {
        let t = build_total_complex(&f.cover, &f.connection, Cochains::Full, None, 4).unwrap();
        let one = t.unit();
        for seed in 0..6 {
            let (dx, dy, dz) = ((seed % 3) as usize, (seed % 2) as usize + 1, 1);
            let x = random_cochain(&t, dx, seed);
            let y = random_cochain(&t, dy, seed + 100);
            let z = random_cochain(&t, dz, seed + 200);
            assert_eq!(t.product(&one, &x).unwrap(), x);
            assert_eq!(t.product(&x, &one).unwrap(), x);
            let left = t.product(&t.product(&x, &y).unwrap(), &z).unwrap();
            let right = t.product(&x, &t.product(&y, &z).unwrap()).unwrap();
            assert_eq!(left, right, "{} seed {seed}", f.cover.name);
        }
    }
}

#[test]
fn product_satisfies_leibniz() {
    for f in [s3_two_chart(), t3_stretch(2)] {
        for kind in [Cochains::Full, Cochains::Normalized] {
            let t = build_total_complex(&f.cover, &f.connection, kind, None, 4).unwrap();
            let mut checked = 0;
            for seed in 0..12u64 {
                let dx = (seed % 3) as usize;
                let dy = ((seed / 3) % 2) as usize + 1;
                let x = random_cochain(&t, dx, seed);
                let y = random_cochain(&t, dy, seed + 50);
                if x.is_empty() || y.is_empty() {
                    continue;
                }
                let lhs = t.apply_d(&t.product(&x, &y).unwrap());
                let a = t.product(&t.apply_d(&x), &y).unwrap();
                let b = t.product(&x, &t.apply_d(&y)).unwrap();
                let rhs = add_cochains(&a, &b, &sign(dx % 2 == 1));
                assert_eq!(lhs, rhs, "{} {kind:?} seed {seed}", f.cover.name);
                checked += 1;
            }
            assert!(checked > 5);
        }
    }
}

#[test]
fn product_overflow_is_an_error() {
    let t = bs1_complex(3).unwrap();
    let x = t.from_vector(4, &SparseVec::unit(0));
    assert!(matches!(t.product(&x, &x), Err(GerbeError::DegreeOverflow { .. })));
}

#[test]
fn connection_element_squares_to_the_phi_power() {
    for f in [t3_exact(), s3_two_chart(), t3_stretch(0)] {
        let deg = 4;
        let t = build_total_complex(&f.cover, &f.connection, Cochains::Normalized, None, deg).unwrap();
        let lambda = curvature(&f.cover, &f.connection).unwrap();
        let z = z_graded_complex(&TwistClass::new(Arc::clone(&f.cover.global), lambda.clone()).unwrap(), deg).unwrap();
        let phi = phi_map(&t, &z).unwrap();
        let l = t.connection_element();
        let l2 = t.product(&l, &l).unwrap();
        assert_eq!(phi.powers[1], l);
        assert_eq!(phi.powers[2], l2);
        let col = z.index_of(4, 2, 0).unwrap();
        assert_eq!(phi.matrices[4].column(col), &t.to_vector(4, &l2).unwrap());
        assert_eq!(t.apply_d(&l), t.include_global(&lambda));
        assert!(phi.is_chain_map(&t, &z));
        assert!(phi.is_unital(&t, &z));
        assert!(phi.is_multiplicative(&t).unwrap());
    }
}

#[test]
fn h0_column_matches_global_forms() {
    for f in all() {
        let t = build_total_complex(&f.cover, &f.connection, Cochains::Normalized, None, 3).unwrap();
        let rep = h0_column_check(&t).unwrap();
        assert!(rep.holds(), "{}: {:?}", f.cover.name, rep);
    }
    let f = s3_two_chart();
    let t = build_total_complex(&f.cover, &f.connection, Cochains::Full, None, 3).unwrap();
    let dims: Vec<usize> = h0_column_check(&t).unwrap().degrees.iter().map(|d| d.equalizer_dim).collect();
    assert_eq!(dims, vec![1, 0, 1, 2]);
}

#[test]
fn h0_column_detects_missing_injectivity() {
    let cover = augmented_cover();
    let g = GerbeConnection::trivial(&cover);
    let t = TotalComplex::build_unchecked(&cover, &g, Cochains::Full, None, 3).unwrap();
    let rep = h0_column_check(&t).unwrap();
    assert!(!rep.holds());
    let dims: Vec<(usize, usize)> = rep.degrees.iter().map(|d| (d.equalizer_dim, d.global_dim)).collect();
    assert_eq!(dims, vec![(1, 1), (0, 3), (0, 3), (0, 1)]);
}

#[test]
fn bs1_bar_complex_is_polynomial() {
    let t = bs1_complex(10).unwrap();
    assert_eq!(t.betti().unwrap(), vec![1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]);
    let zeta_tuple = t.tuple_id(&[0, 0]).unwrap();
    let zeta: Cochain = [(Cell { column: 1, tuple: zeta_tuple, mask: 1, form: 0 }, rat(1))].into();
    assert!(t.apply_d(&zeta).is_empty());
    let mut power = t.unit();
    for k in 1..=5 {
        power = t.product(&power, &zeta).unwrap();
        let n = 2 * k;
        let h = t.cohomology(n).unwrap();
        let v = t.to_vector(n, &power).unwrap();
        assert!(t.d(n).mul_vec(&v).is_zero());
        assert!(!h.quotient.is_trivial(&v).unwrap(), "ζ^{k} is a coboundary");
    }
}

#[test]
fn theorem_on_single_chart_and_point() {
    for f in [point_trivial(), t3_exact(), t3_disk()] {
        let x = &f.cover.global;
        let deg = x.top_degree() + 4;
        let r = theorem_main_check(&f.cover, &f.connection, Cochains::Normalized, deg).unwrap();
        assert!(r.verdict(), "{r:?}");
        assert_eq!(r.total_betti, r.twisted_betti);
        assert_eq!(r.total_betti, polynomial_pattern(&betti(x).unwrap(), deg));
    }
    let r = theorem_main_check(&point_trivial().cover, &point_trivial().connection, Cochains::Full, 8).unwrap();
    assert!(r.verdict());
    assert_eq!(r.total_betti, bs1_bar_complex(8).unwrap());
}

#[test]
fn gauge_composite_is_a_quasi_isomorphism() {
    // λ = dβ: compose φ with e^(−βT) from the untwisted complex.
    let f = t3_exact();
    let x = Arc::clone(&f.cover.global);
    let deg = x.top_degree() + 4;
    let beta = f.connection.beta[0].clone();
    let z0 = z_graded_complex(&TwistClass::zero(Arc::clone(&x)), deg).unwrap();
    let zl = z_graded_complex(&TwistClass::new(Arc::clone(&x), x.d(&beta)).unwrap(), deg).unwrap();
    let gauge = gauge_transform(&z0, &x, &beta).unwrap();
    assert!(gauge.verify(&z0, &zl));
    let t = build_total_complex(&f.cover, &f.connection, Cochains::Normalized, None, deg).unwrap();
    let phi = phi_map(&t, &zl).unwrap();
    for n in 0..=deg {
        let lhs = t.d(n).mul(&phi.matrices[n]).unwrap().mul(&gauge.forward[n]).unwrap();
        let rhs = phi.matrices[n + 1].mul(&gauge.forward[n + 1]).unwrap().mul(z0.d(n)).unwrap();
        assert_eq!(lhs, rhs);
        let h0 = z0.cohomology(n).unwrap();
        let ht = t.cohomology(n).unwrap();
        assert_eq!(h0.dim(), ht.dim());
        let comp = phi.matrices[n].mul(&gauge.forward[n]).unwrap();
        let cols = h0.quotient.reps().iter().map(|r| ht.quotient.coords(&comp.mul_vec(r)).unwrap()).collect();
        assert!(twistcoh::linalg::is_invertible(&SparseMatrix::from_columns(ht.dim(), cols)));
    }
}

#[test]
fn theorem_on_the_two_chart_sphere() {
    let f = s3_two_chart();
    let r = theorem_main_check(&f.cover, &f.connection, Cochains::Full, 5).unwrap();
    assert!(r.verdict(), "{r:?}");
    assert_eq!(r.total_betti, polynomial_pattern(&[1, 0, 0, 1], 5));
}

#[test]
fn normalized_and_full_cochains_agree() {
    for (f, deg) in [(s3_two_chart(), 4), (t3_stretch(4), 3), (t3_exact(), 6), (disk_cover(), 3)] {
        let full = build_total_complex(&f.cover, &f.connection, Cochains::Full, None, deg).unwrap();
        let norm = build_total_complex(&f.cover, &f.connection, Cochains::Normalized, None, deg).unwrap();
        assert!(norm.dim(deg) < full.dim(deg) || f.cover.charts == 1);
        assert_eq!(full.betti().unwrap(), norm.betti().unwrap(), "{}", f.cover.name);
    }
}

#[test]
fn stretch_verdict_is_stable_across_seeds() {
    let mut verdicts = Vec::new();
    for seed in 0..4 {
        let f = t3_stretch(seed);
        assert!(f.connection.big_a.values().all(|v| !v.is_zero()));
        let r = theorem_main_check(&f.cover, &f.connection, Cochains::Normalized, 4).unwrap();
        assert!(r.d_squared_zero && r.phi_chain_map);
        verdicts.push((r.verdict(), r.total_betti));
    }
    assert!(verdicts.windows(2).all(|w| w[0] == w[1]), "{verdicts:?}");
    assert_eq!(verdicts[0], (true, vec![1, 3, 4, 6, 4]));
}

#[test]
fn json_round_trip() {
    for f in all() {
        let j = GerbeJson::from(&f);
        let s = serde_json::to_string(&j).unwrap();
        let back: GerbeJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back, j);
        let g = fixtures::GerbeFixture::try_from(&back).unwrap();
        assert_eq!(GerbeJson::from(&g), j);
        assert_eq!(g.connection, f.connection);
        assert!(validate_connection(&g.cover, &g.connection).is_valid());
    }
}
