use std::sync::Arc;
use twistcoh::cdga::fixtures;
use twistcoh::linalg::{rat, SparseVec};
use twistcoh::spectral::{d3_equals_lambda_cup, e_infinity_dims, page, pages, stabilization_page, FilteredComplex};
use twistcoh::twisted::{twisted_betti, TwistClass};

fn twists() -> Vec<TwistClass> {
    let mut out = Vec::new();
    for c in fixtures::all() {
        let c = Arc::new(c);
        out.push(TwistClass::zero(Arc::clone(&c)));
        let deg3 = c.basis_of_degree(3).to_vec();
        for &b in &deg3 {
            for k in [1, 2] {
                if let Ok(t) = TwistClass::new(Arc::clone(&c), SparseVec::from_pairs([(b, rat(k))])) {
                    out.push(t);
                }
            }
        }
    }
    out
}

#[test]
fn t3_pages() {
    let t3 = Arc::new(fixtures::t3());
    let t = TwistClass::new(Arc::clone(&t3), SparseVec::unit(7)).unwrap();
    let f = FilteredComplex::new(&t);
    assert!(f.is_filtered());
    let ps = pages(&f, 5).unwrap();
    assert_eq!(ps[1].parity_dims(), (4, 4));
    assert_eq!(ps[3].parity_dims(), (4, 4));
    assert_eq!(ps[4].parity_dims(), (3, 3));
    assert_eq!(ps[4].dims(), e_infinity_dims(&f).unwrap());
    let d3 = ps[3].d[0].as_ref().unwrap();
    assert_eq!(twistcoh::linalg::rank(d3), 1);
    assert_eq!(stabilization_page(&f, 6).unwrap(), Some(4));
}

#[test]
fn s3_collapses_to_zero() {
    let s3 = Arc::new(fixtures::s3());
    let t = TwistClass::new(Arc::clone(&s3), SparseVec::unit(1)).unwrap();
    let f = FilteredComplex::new(&t);
    assert_eq!(e_infinity_dims(&f).unwrap(), vec![0, 0, 0, 0]);
}

#[test]
fn e_infinity_equals_twisted_betti() {
    for t in twists() {
        let f = FilteredComplex::new(&t);
        let inf = e_infinity_dims(&f).unwrap();
        let ev: usize = inf.iter().step_by(2).sum();
        let odd: usize = inf.iter().skip(1).step_by(2).sum();
        assert_eq!((ev, odd), twisted_betti(&t).unwrap(), "{}", t.algebra().name());
        let stab = stabilization_page(&f, f.top() + 1).unwrap();
        assert!(stab.is_some(), "{}", t.algebra().name());
    }
}

#[test]
fn pages_are_homology_of_previous() {
    for t in twists() {
        let f = FilteredComplex::new(&t);
        let ps = pages(&f, f.top() + 2).unwrap();
        for w in ps.windows(2) {
            assert!(w[0].d_squared_vanishes());
            assert_eq!(w[0].homology_dims(), w[1].dims(), "{} r={}", t.algebra().name(), w[0].r);
        }
        for p in &ps {
            if p.r % 2 == 0 {
                assert!(p.differential_is_zero());
            }
        }
    }
}

#[test]
fn untwisted_formal_models_degenerate() {
    for c in [fixtures::s3(), fixtures::t3(), fixtures::s2xs3(), fixtures::cp2()] {
        let t = TwistClass::zero(Arc::new(c));
        let f = FilteredComplex::new(&t);
        for r in 1..=f.top() + 1 {
            assert!(page(&f, r).unwrap().differential_is_zero());
        }
    }
}

#[test]
fn d3_is_cup_with_lambda() {
    for c in [fixtures::s3(), fixtures::t3(), fixtures::s2xs3()] {
        let c = Arc::new(c);
        let mut ts = vec![TwistClass::zero(Arc::clone(&c))];
        for &b in c.basis_of_degree(3) {
            for k in [1, 2, 5] {
                ts.push(TwistClass::new(Arc::clone(&c), SparseVec::from_pairs([(b, rat(k))])).unwrap());
            }
        }
        for t in ts {
            let f = FilteredComplex::new(&t);
            let r = d3_equals_lambda_cup(&f, &t).unwrap();
            assert!(r.matches, "{} witness {:?}", c.name(), r.witness);
        }
    }
}
