use twistcoh::cdga::{fixtures, validate_cdga};
use twistcoh::linalg::{kernel_basis, rank, ratio, Rational};
use twistcoh::oracle::random::{random_cdga, random_matrix, to_dense};
use twistcoh::oracle::{
    cochain_cohomology, dense_rank, exhaustive_colimit_dim, exhaustive_limit, invariant_factors,
    simplicial_cochains, DenseMatrix, Diagram,
};
use num::BigInt;

#[test]
fn dense_rank_basics() {
    assert_eq!(dense_rank(&DenseMatrix::zeros(3, 4)), 0);
    assert_eq!(dense_rank(&DenseMatrix::identity(5)), 5);
}

fn hilbert(n: usize) -> DenseMatrix {
    DenseMatrix::from_rows(
        (0..n).map(|i| (0..n).map(|j| ratio(1, (i + j + 1) as i64)).collect()).collect(),
    )
}

#[test]
fn hilbert_matrix() {
    let h = hilbert(5);
    let det = h.det_cofactor();
    assert_eq!(det, h.det());
    assert_ne!(det, Rational::from_integer(0.into()));
    assert_eq!(dense_rank(&h), 5);
}

#[test]
fn kernel_is_annihilated() {
    let m = to_dense(&random_matrix(3, 6, 9, 0.5));
    let k = m.kernel();
    assert_eq!(k.len(), 9 - m.rank());
    for v in k {
        assert!(m.mul_vec(&v).iter().all(|x| *x == Rational::from_integer(0.into())));
    }
}

#[test]
fn sparse_and_dense_rank_agree() {
    for seed in 0..60 {
        let rows = 1 + (seed as usize * 7) % 25;
        let cols = 1 + (seed as usize * 11) % 25;
        let m = random_matrix(seed, rows, cols, 0.3);
        let d = to_dense(&m);
        assert_eq!(rank(&m), dense_rank(&d), "seed {seed}");
        assert_eq!(kernel_basis(&m).dim(), d.kernel().len());
    }
}

#[test]
fn invariant_factor_examples() {
    let m = DenseMatrix::from_i64(&[vec![2, 0], vec![0, 3]]);
    assert_eq!(invariant_factors(&m), vec![BigInt::from(1), BigInt::from(6)]);
    let m = DenseMatrix::from_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    assert_eq!(invariant_factors(&m), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
}

#[test]
fn simplicial_oracle_on_spheres() {
    let (dims, maps) = simplicial_cochains(&[vec![0, 1], vec![1, 2], vec![0, 2]]);
    let h = cochain_cohomology(&dims, &maps);
    assert_eq!(h.iter().map(|g| g.rank).collect::<Vec<_>>(), vec![1, 1]);
    assert!(h.iter().all(|g| g.torsion.is_empty()));
    let facets: Vec<Vec<usize>> = (0..5).map(|o| (0..5).filter(|&i| i != o).collect()).collect();
    let (dims, maps) = simplicial_cochains(&facets);
    assert_eq!(dims, vec![5, 10, 10, 5]);
    let h = cochain_cohomology(&dims, &maps);
    assert_eq!(h.iter().map(|g| g.rank).collect::<Vec<_>>(), vec![1, 0, 0, 1]);
}

#[test]
fn diagram_limits() {
    let one = Diagram { dims: vec![3], arrows: vec![] };
    assert_eq!(exhaustive_limit(&one).dim(), 3);
    let two = Diagram { dims: vec![2, 3], arrows: vec![] };
    assert_eq!(exhaustive_limit(&two).dim(), 5);
    assert_eq!(exhaustive_colimit_dim(&two), 5);
    // Equalizer of two maps Q^2 -> Q^1 through a cone: x -> (x, f x) and (x, g x) agree.
    let f = DenseMatrix::from_i64(&[vec![1, 0]]);
    let g = DenseMatrix::from_i64(&[vec![0, 1]]);
    let eq = Diagram { dims: vec![2, 1], arrows: vec![(0, 1, f), (0, 1, g)] };
    assert_eq!(exhaustive_limit(&eq).dim(), 1);
    // The coequalizer is Q / im(f - g) = 0.
    assert_eq!(exhaustive_colimit_dim(&eq), 0);
    // A single injective arrow Q^2 -> Q^3 identifies its source with a plane.
    let inj = DenseMatrix::from_i64(&[vec![1, 0], vec![0, 1], vec![1, 1]]);
    let one_arrow = Diagram { dims: vec![2, 3], arrows: vec![(0, 1, inj)] };
    assert_eq!(exhaustive_limit(&one_arrow).dim(), 2);
    assert_eq!(exhaustive_colimit_dim(&one_arrow), 3);
}

#[test]
fn random_fixtures_are_deterministic_and_valid() {
    assert_eq!(random_matrix(0, 5, 5, 0.4), random_matrix(0, 5, 5, 0.4));
    let a = twistcoh::cdga::to_json(&random_cdga(0));
    let b = twistcoh::cdga::to_json(&random_cdga(0));
    assert_eq!(a, b);
    let mut nontrivial_d = 0;
    for seed in 0..20 {
        let c = random_cdga(seed);
        assert!(validate_cdga(&c).is_valid(), "seed {seed}");
        if !c.differential().is_zero() {
            nontrivial_d += 1;
        }
    }
    assert!(nontrivial_d > 3, "{nontrivial_d}");
}

#[test]
fn dense_betti_matches_fixtures() {
    for c in fixtures::all() {
        assert_eq!(twistcoh::oracle::dense_betti(&c), twistcoh::cdga::betti(&c).unwrap(), "{}", c.name());
    }
}
