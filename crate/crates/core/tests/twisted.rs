use std::sync::Arc;
use twistcoh::cdga::{betti, fixtures, Cdga};
use twistcoh::linalg::{rat, SparseVec};
use twistcoh::oracle::dense_twisted_betti;
use twistcoh::twisted::{
    folded_betti, gauge_transform, psi_map, psi_reports, psi_residual, twisted_betti, two_periodic_complex,
    z_graded_complex, PsiRange, TwistClass, TwistError,
};

fn twist(c: &Arc<Cdga>, basis: usize, k: i64) -> TwistClass {
    TwistClass::new(Arc::clone(c), SparseVec::from_pairs([(basis, rat(k))])).unwrap()
}

#[test]
fn oracle_certified_betti() {
    let s3 = Arc::new(fixtures::s3());
    let t3 = Arc::new(fixtures::t3());
    for k in [0, 1, 2, 5] {
        let lam = vec![rat(0), rat(k)];
        let expected = if k == 0 { (1, 1) } else { (0, 0) };
        assert_eq!(dense_twisted_betti(&s3, &lam), expected);
        assert_eq!(twisted_betti(&twist(&s3, 1, k)).unwrap(), expected);
        let mut lam = vec![rat(0); 8];
        lam[7] = rat(k);
        let expected = if k == 0 { (4, 4) } else { (3, 3) };
        assert_eq!(dense_twisted_betti(&t3, &lam), expected);
        assert_eq!(twisted_betti(&twist(&t3, 7, k)).unwrap(), expected);
    }
}

#[test]
fn untwisted_folds_betti() {
    for c in fixtures::all() {
        let c = Arc::new(c);
        let b = betti(&c).unwrap();
        assert_eq!(twisted_betti(&TwistClass::zero(Arc::clone(&c))).unwrap(), folded_betti(&b));
    }
}

#[test]
fn twist_must_be_closed_degree_three() {
    let t3b = Arc::new(fixtures::t3_beta());
    let beta = t3b.basis_of_degree(2).iter().copied().find(|&i| !t3b.d(&SparseVec::unit(i)).is_zero()).unwrap();
    assert!(matches!(
        TwistClass::new(Arc::clone(&t3b), SparseVec::unit(beta)),
        Err(TwistError::WrongDegree(_))
    ));
    let t3 = Arc::new(fixtures::t3());
    assert!(TwistClass::new(Arc::clone(&t3), SparseVec::unit(1)).is_err());
}

#[test]
fn z_graded_examples() {
    let s3 = Arc::new(fixtures::s3());
    let t = twist(&s3, 1, 2);
    let z = z_graded_complex(&t, 8).unwrap();
    let mut expect = vec![0; 9];
    expect[0] = 1;
    assert_eq!(z.betti().unwrap(), expect);
    // d(z) = λ
    let zi = z.index_of(2, 1, 0).unwrap();
    let dz = z.d(2).column(zi).clone();
    assert_eq!(dz, SparseVec::from_pairs([(z.index_of(3, 0, 1).unwrap(), rat(2))]));

    for c in fixtures::all() {
        let b = betti(&c).unwrap();
        let z = z_graded_complex(&TwistClass::zero(Arc::new(c)), 9).unwrap();
        let expected: Vec<usize> = (0..=9usize)
            .map(|p| (0..=p).filter(|k| (p - k) % 2 == 0).map(|k| b.get(k).copied().unwrap_or(0)).sum())
            .collect();
        assert_eq!(z.betti().unwrap(), expected);
    }
}

fn fixture_twists() -> Vec<TwistClass> {
    let mut out = Vec::new();
    for c in fixtures::all() {
        let c = Arc::new(c);
        out.push(TwistClass::zero(Arc::clone(&c)));
        for &b in c.basis_of_degree(3) {
            if let Ok(t) = TwistClass::new(Arc::clone(&c), SparseVec::unit(b)) {
                out.push(t);
            }
        }
    }
    out
}

#[test]
fn psi_is_a_chain_map_everywhere() {
    for t in fixture_twists() {
        let top = t.algebra().top_degree();
        for r in psi_reports(&t, top + 4, PsiRange::Full).unwrap() {
            assert!(r.chain_map, "{} p={}", t.algebra().name(), r.p);
            if r.p > top {
                assert!(r.invertible, "{} p={}", t.algebra().name(), r.p);
            }
        }
    }
}

#[test]
fn psi_unit_and_s3_example() {
    let s3 = Arc::new(fixtures::s3());
    let t = TwistClass::zero(Arc::clone(&s3));
    let per = two_periodic_complex(&t).unwrap();
    let z = z_graded_complex(&t, 6).unwrap();
    let psi2 = psi_map(&per, &z, &s3, 2, PsiRange::Full);
    assert_eq!(psi2.matrix.column(0), &SparseVec::unit(z.index_of(2, 1, 0).unwrap()));
    let psi4 = psi_map(&per, &z, &s3, 4, PsiRange::Full);
    assert_eq!(psi4.matrix.shape(), (1, 1));
    assert_eq!(psi4.matrix.get(0, 0), twistcoh::linalg::ratio(1, 2));
}

#[test]
fn truncated_range_breaks_commutativity_on_t3() {
    let t3 = Arc::new(fixtures::t3());
    let t = twist(&t3, 7, 1);
    let per = two_periodic_complex(&t).unwrap();
    let z = z_graded_complex(&t, 8).unwrap();
    for p in [4, 5] {
        assert!(psi_residual(&per, &z, &t3, p, PsiRange::Full).is_zero());
    }
    let broken = (1..=7).filter(|&p| !psi_residual(&per, &z, &t3, p, PsiRange::Truncated).is_zero()).count();
    assert!(broken > 0);
}

#[test]
fn large_degree_cohomology_matches_periodic() {
    for t in fixture_twists() {
        let top = t.algebra().top_degree();
        let (ev, odd) = twisted_betti(&t).unwrap();
        let z = z_graded_complex(&t, top + 4).unwrap().betti().unwrap();
        for p in top + 1..=top + 4 {
            let expected = if p % 2 == 0 { ev } else { odd };
            assert_eq!(z[p], expected, "{} p={p}", t.algebra().name());
        }
    }
}

#[test]
fn gauge_examples() {
    let t3b = Arc::new(fixtures::t3_beta());
    let t = TwistClass::zero(Arc::clone(&t3b));
    let z0 = z_graded_complex(&t, 6).unwrap();
    let id = gauge_transform(&z0, &t3b, &SparseVec::new()).unwrap();
    for (p, m) in id.forward.iter().enumerate() {
        assert_eq!(m, &twistcoh::linalg::SparseMatrix::identity(z0.dim(p)));
    }
    let beta = t3b.basis_of_degree(2).iter().copied().find(|&i| !t3b.d(&SparseVec::unit(i)).is_zero()).unwrap();
    let gamma = SparseVec::unit(beta);
    let g = gauge_transform(&z0, &t3b, &gamma).unwrap();
    // z ↦ z − γ
    let col = g.forward[2].column(z0.index_of(2, 1, 0).unwrap());
    let expected = SparseVec::from_pairs([
        (z0.index_of(2, 1, 0).unwrap(), rat(1)),
        (z0.index_of(2, 0, beta).unwrap(), rat(-1)),
    ]);
    assert_eq!(col, &expected);
    let shifted = t.shifted_by(&gamma).unwrap();
    let z1 = z_graded_complex(&shifted, 6).unwrap();
    assert!(g.verify(&z0, &z1));
    assert_eq!(z0.betti().unwrap(), z1.betti().unwrap());
    assert_eq!(twisted_betti(&t).unwrap(), twisted_betti(&shifted).unwrap());
}
