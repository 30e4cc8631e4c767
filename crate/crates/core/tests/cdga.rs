use std::sync::Arc;
use twistcoh::cdga::{
    betti, cohomology_ring, contractible, exterior_algebra, fixtures, from_json, product_cdga, tensor_cdga,
    to_json, validate_cdga, Cdga, CdgaError, CdgaMorphism, Degree, Element, Violation,
};
use twistcoh::linalg::{rat, SparseMatrix, SparseVec};

#[test]
fn fixtures_are_valid() {
    for c in fixtures::all() {
        let r = validate_cdga(&c);
        assert!(r.is_valid(), "{}: {}", c.name(), r);
    }
}

#[test]
fn exterior_dims() {
    let x3 = exterior_algebra("x", &[(3, None)]).unwrap();
    assert_eq!(x3.degrees(), &[0, 3]);
    let t3 = fixtures::t3();
    assert_eq!(t3.dim(), 8);
    assert_eq!(betti(&t3).unwrap(), vec![1, 3, 3, 1]);
    let s = exterior_algebra("s", &[(2, Some(3))]).unwrap();
    assert_eq!(s.degrees(), &[0, 2, 4, 6]);
    assert_eq!(
        exterior_algebra("bad", &[(1, None), (2, None)]).unwrap_err(),
        CdgaError::CapRequired { index: 1, degree: 2 }
    );
}

#[test]
fn sign_fault_is_reported() {
    let t3 = fixtures::t3();
    let n = t3.dim();
    // a = e1, b = e2; ab = e4. Flip the sign of a*b only.
    let mut product = t3.product_table().to_vec();
    product[n + 2] = product[n + 2].neg();
    let bad = Cdga::from_tables("bad", t3.degrees().to_vec(), 3, t3.differential().clone(), product).unwrap();
    let r = validate_cdga(&bad);
    assert!(r.violations.contains(&Violation::Commutativity { left: 1, right: 2 }));
}

#[test]
fn contractible_is_acyclic() {
    for c in 1..4 {
        let d = contractible(c);
        assert!(validate_cdga(&d).is_valid());
        let b = betti(&d).unwrap();
        assert_eq!(b[0], 1);
        assert!(b[1..].iter().all(|&x| x == 0), "{b:?}");
    }
}

#[test]
fn cohomology_examples() {
    assert_eq!(betti(&fixtures::s3()).unwrap(), vec![1, 0, 0, 1]);
    assert_eq!(betti(&fixtures::s2xs3()).unwrap(), vec![1, 0, 1, 1, 0, 1]);
    assert_eq!(betti(&fixtures::cp2()).unwrap(), vec![1, 0, 1, 0, 1]);
    assert_eq!(betti(&fixtures::t3_beta()).unwrap(), vec![1, 3, 3, 3]);
}

fn convolve(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[test]
fn tensor_and_kunneth() {
    let x = fixtures::s3();
    let y = exterior_algebra("y", &[(1, None)]).unwrap();
    let xy = tensor_cdga(&x, &y);
    assert!(validate_cdga(&xy).is_valid());
    assert_eq!(xy.dim(), 4);
    assert_eq!(betti(&xy).unwrap(), vec![1, 1, 0, 1, 1]);
    let unit = tensor_cdga(&fixtures::t3(), &fixtures::point_model());
    assert_eq!(unit.degrees(), fixtures::t3().degrees());
    assert_eq!(unit.product_table(), fixtures::t3().product_table());
    let all = fixtures::all();
    for a in &all[..4] {
        for b in &all[..4] {
            let ab = tensor_cdga(a, b);
            assert!(validate_cdga(&ab).is_valid());
            assert_eq!(betti(&ab).unwrap(), convolve(&betti(a).unwrap(), &betti(b).unwrap()));
        }
    }
}

#[test]
fn direct_product() {
    let p = product_cdga(&fixtures::disk(), &fixtures::s3());
    assert!(validate_cdga(&p).is_valid());
    assert_eq!(betti(&p).unwrap(), vec![2, 0, 0, 1, 0]);
}

#[test]
fn elements_and_morphisms() {
    let t3 = Arc::new(fixtures::t3());
    let a = t3.basis_element(1);
    let b = t3.basis_element(2);
    let ab = a.mul(&b).unwrap();
    let ba = b.mul(&a).unwrap();
    assert_eq!(ab, ba.scale(&rat(-1)));
    assert_eq!(ab.degree(), Degree::Of(2));
    assert_eq!(a.add(&ab).unwrap().degree(), Degree::Mixed);
    let id = CdgaMorphism::identity(&t3);
    assert_eq!(id.apply(&ab).unwrap(), ab);
    assert_eq!(id.apply(&Element::one(&t3)).unwrap(), Element::one(&t3));
    assert!(id.apply(&a.add(&ab).unwrap()).is_err());
    // Swapping a and b is an automorphism once the sign on ab is accounted for.
    let mut cols = vec![SparseVec::unit(0), SparseVec::unit(2), SparseVec::unit(1), SparseVec::unit(3)];
    cols.push(SparseVec::unit(4).neg());
    cols.push(SparseVec::unit(6));
    cols.push(SparseVec::unit(5));
    cols.push(SparseVec::unit(7).neg());
    let swap = CdgaMorphism::new(Arc::clone(&t3), Arc::clone(&t3), SparseMatrix::from_columns(8, cols));
    assert!(swap.is_ok(), "{:?}", swap.err());
    let bad = CdgaMorphism::new(Arc::clone(&t3), Arc::clone(&t3), SparseMatrix::zeros(8, 8));
    assert!(bad.is_err());
}

#[test]
fn cup_products() {
    let t3 = fixtures::t3();
    let ring = cohomology_ring(&t3).unwrap();
    let abc = SparseVec::unit(7);
    let m = ring.cup_matrix(&t3, &abc, 3, 0).unwrap();
    assert_eq!(m.shape(), (1, 1));
    assert!(!m.is_zero());
}

#[test]
fn json_round_trip() {
    for c in fixtures::all() {
        let s = to_json(&c);
        let back = from_json(&s).unwrap();
        assert_eq!(back, c);
        assert_eq!(to_json(&back), s);
    }
    let bad = r#"{"name":"x","degrees":[0],"top_degree":0,"differential":[],"product":[[0,0,0,"1/0"]]}"#;
    assert!(from_json(bad).is_err());
    let integer = r#"{"name":"x","degrees":[0],"top_degree":0,"differential":[],"product":[[0,0,0,"1"]]}"#;
    assert!(validate_cdga(&from_json(integer).unwrap()).is_valid());
}
