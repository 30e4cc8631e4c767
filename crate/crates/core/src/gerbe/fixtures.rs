//! Named covers with connection data, and fault injections on them.

use super::connection::GerbeConnection;
use super::cover::CoverDatum;
use crate::cdga::fixtures::t3;
use crate::cdga::{contractible, exterior_algebra, free_cdga, free_cdga_with_monomials, point, tensor_cdga, Cdga, Generator};
use crate::linalg::{rat, Rational, SparseMatrix, SparseVec};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// A cover together with a connection on it.
#[derive(Debug, Clone)]
pub struct GerbeFixture {
    pub cover: CoverDatum,
    pub connection: GerbeConnection,
}

fn single_chart(name: &str, algebra: Cdga, beta: SparseVec) -> GerbeFixture {
    let cover = CoverDatum::constant(name, 1, &[vec![0]], Arc::new(algebra)).expect("single chart");
    GerbeFixture { connection: GerbeConnection { beta: vec![beta], ..Default::default() }, cover }
}

/// The trivial gerbe over a point.
pub fn point_trivial() -> GerbeFixture {
    single_chart("point", point(), SparseVec::new())
}

fn t3_beta_monomials() -> (Cdga, Vec<Vec<usize>>) {
    let gens = [
        Generator::new("a", 1),
        Generator::new("b", 1),
        Generator::new("c", 1),
        Generator::new("beta", 2).with_d(vec![(rat(1), vec![0, 1, 2])]),
    ];
    free_cdga_with_monomials("t3_beta", &gens, 3).expect("t3_beta")
}

fn find(monos: &[Vec<usize>], exps: &[usize]) -> usize {
    monos.iter().position(|m| m == exps).expect("monomial in basis")
}

/// One chart `Λ(a, b, c, β; dβ = abc)` with curving `β`, so `λ = abc` is exact.
pub fn t3_exact() -> GerbeFixture {
    let (c, monos) = t3_beta_monomials();
    let beta = SparseVec::unit(find(&monos, &[0, 0, 0, 1]));
    single_chart("t3_exact", c, beta)
}

/// One chart `Λ(a, b, c) ⊗ Λ(s, u; du = s)` with curving `a·u`, so `λ = −a·s`.
pub fn t3_disk() -> GerbeFixture {
    let (torus, disk) = (t3(), contractible(2));
    let (_, disk_monos) = free_cdga_with_monomials(
        "disk",
        &[Generator::new("s", 2), Generator::new("u", 1).with_d(vec![(rat(1), vec![0])])],
        4,
    )
    .expect("disk");
    let mut pairs: Vec<(usize, usize)> =
        (0..torus.dim()).flat_map(|i| (0..disk.dim()).map(move |j| (i, j))).collect();
    pairs.sort_by_key(|&(i, j)| (torus.degree_of_basis(i) + disk.degree_of_basis(j), i, j));
    let a = torus.basis_of_degree(1)[0];
    let u = find(&disk_monos, &[0, 1]);
    let au = pairs.iter().position(|&p| p == (a, u)).expect("a⊗u");
    single_chart("t3_disk", tensor_cdga(&torus, &disk).with_name("t3_disk"), SparseVec::unit(au))
}

/// `Λ(y₂, v₃; dy = v)` truncated above degree 3: an acyclic cap.
fn cap() -> Cdga {
    let gens = [Generator::new("v", 3), Generator::new("y", 2).capped(1).with_d(vec![(rat(1), vec![0])])];
    free_cdga("cap", &gens, 3).expect("cap")
}

/// `S³` as two acyclic caps glued along a model `Λ(y₂)` of `S²`; `Ω(X)` is the
/// fibre product, so the Čech complex of the cover is exact. The curving is
/// `β_i = r_i(γ)` for the global `γ = (y, y)`, so `λ = dγ`.
pub fn s3_two_chart() -> GerbeFixture {
    let c = Arc::new(cap());
    let s2 = Arc::new(exterior_algebra("s2", &[(2, Some(1))]).expect("s2"));
    let (cy, cv) = (c.basis_of_degree(2)[0], c.basis_of_degree(3)[0]);
    let sy = s2.basis_of_degree(2)[0];
    let pi = SparseMatrix::from_triplets(2, 3, [(0, 0, rat(1)), (sy, cy, rat(1))]).expect("pi");
    // Global basis: (1,1), (y,y), (v,0), (0,v).
    let n = 4;
    let d = SparseMatrix::from_triplets(n, n, [(2, 1, rat(1)), (3, 1, rat(1))]).expect("d");
    let product = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            match (i, j) {
                (0, j) => SparseVec::unit(j),
                (i, 0) => SparseVec::unit(i),
                _ => SparseVec::new(),
            }
        })
        .collect();
    let x = Arc::new(Cdga::from_tables("s3_glued", vec![0, 2, 3, 3], 3, d, product).expect("glued"));
    let r0 = SparseMatrix::from_triplets(3, n, [(0, 0, rat(1)), (cy, 1, rat(1)), (cv, 2, rat(1))]).expect("r0");
    let r1 = SparseMatrix::from_triplets(3, n, [(0, 0, rat(1)), (cy, 1, rat(1)), (cv, 3, rat(1))]).expect("r1");
    let mut faces = HashMap::new();
    faces.insert((vec![0, 1], 0), pi.clone());
    faces.insert((vec![0, 1], 1), pi);
    let cover = CoverDatum::new(
        "s3_two_chart",
        2,
        vec![(vec![0], Arc::clone(&c)), (vec![1], Arc::clone(&c)), (vec![0, 1], s2)],
        faces,
        x,
        vec![r0, r1],
    )
    .expect("s3 cover");
    let y = SparseVec::unit(cy);
    GerbeFixture { cover, connection: GerbeConnection { beta: vec![y.clone(), y], ..Default::default() } }
}

fn small(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-3..=3))
}

/// `charts` copies of `Λ(a, b, c, β; dβ = abc)` over the full simplex, with
/// seeded closed 1-forms `e_ij`, `A = δe`, `a = e`, and `β_i = β + g` for a
/// seeded closed 2-form `g`. `A` is nonzero on every triple.
pub fn twisted_cover(charts: usize, seed: u64) -> GerbeFixture {
    let (c, monos) = t3_beta_monomials();
    let c = Arc::new(c);
    let full: Vec<usize> = (0..charts).collect();
    let cover = CoverDatum::constant(format!("t3_twisted_{charts}"), charts, &[full], Arc::clone(&c)).expect("cover");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ones = [find(&monos, &[1, 0, 0, 0]), find(&monos, &[0, 1, 0, 0]), find(&monos, &[0, 0, 1, 0])];
    let twos = [find(&monos, &[1, 1, 0, 0]), find(&monos, &[1, 0, 1, 0]), find(&monos, &[0, 1, 1, 0])];
    let beta = SparseVec::unit(find(&monos, &[0, 0, 0, 1]));
    loop {
        let mut e = BTreeMap::new();
        for i in 0..charts {
            for j in i + 1..charts {
                let v = SparseVec::from_pairs(ones.iter().map(|&k| (k, small(&mut rng))));
                e.insert(vec![i, j], v);
            }
        }
        let mut big_a = BTreeMap::new();
        for i in 0..charts {
            for j in i + 1..charts {
                for k in j + 1..charts {
                    let v = e[&vec![j, k]].sub(&e[&vec![i, k]]).add(&e[&vec![i, j]]);
                    big_a.insert(vec![i, j, k], v);
                }
            }
        }
        if charts >= 3 && big_a.values().any(|v: &SparseVec| v.is_zero()) {
            continue;
        }
        let g = SparseVec::from_pairs(twos.iter().map(|&k| (k, small(&mut rng))));
        let b = beta.add(&g);
        return GerbeFixture { cover, connection: GerbeConnection { big_a, a: e, beta: vec![b; charts] } };
    }
}

/// The three-chart twisted cover used as the stretch case.
pub fn t3_stretch(seed: u64) -> GerbeFixture {
    let mut f = twisted_cover(3, seed);
    f.cover.name = "t3_stretch".into();
    f
}

/// Three copies of the acyclic `Λ(s, u; du = s)` with the trivial connection.
pub fn disk_cover() -> GerbeFixture {
    let full = vec![0, 1, 2];
    let cover = CoverDatum::constant("disk_cover", 3, &[full], Arc::new(contractible(2))).expect("disk cover");
    let connection = GerbeConnection::trivial(&cover);
    GerbeFixture { cover, connection }
}

/// The named fixtures validated and checked by the test suites.
pub fn all() -> Vec<GerbeFixture> {
    vec![point_trivial(), t3_exact(), t3_disk(), s3_two_chart(), t3_stretch(0), disk_cover()]
}

pub fn by_name(name: &str) -> Option<GerbeFixture> {
    all().into_iter().find(|f| f.cover.name == name)
}

/// Ways to break a valid connection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// `A_012 ← A_012 + u` on [`disk_cover`], with `du ≠ 0`.
    ANotClosed,
    /// `A_012 ← A_012 + a` on a four-chart twisted cover.
    ANotCocycle,
    /// `a_01 ← a_01 + b` on the stretch cover.
    CoboundaryOfA,
    /// `β_1 ← β_1 + ab` on the stretch cover.
    CurvingMismatch,
}

pub const ALL_FAULTS: [Fault; 4] = [Fault::ANotClosed, Fault::ANotCocycle, Fault::CoboundaryOfA, Fault::CurvingMismatch];

pub fn with_fault(fault: Fault, seed: u64) -> GerbeFixture {
    let (_, monos) = t3_beta_monomials();
    match fault {
        Fault::ANotClosed => {
            let mut f = disk_cover();
            let u = f.cover.global.basis_of_degree(1)[0];
            f.connection.big_a.insert(vec![0, 1, 2], SparseVec::unit(u));
            f
        }
        Fault::ANotCocycle => {
            let mut f = twisted_cover(4, seed);
            let a = SparseVec::unit(find(&monos, &[1, 0, 0, 0]));
            let v = f.connection.big_a[&vec![0, 1, 2]].add(&a);
            f.connection.big_a.insert(vec![0, 1, 2], v);
            f
        }
        Fault::CoboundaryOfA => {
            let mut f = t3_stretch(seed);
            let b = SparseVec::unit(find(&monos, &[0, 1, 0, 0]));
            let v = f.connection.a[&vec![0, 1]].add(&b);
            f.connection.a.insert(vec![0, 1], v);
            f
        }
        Fault::CurvingMismatch => {
            let mut f = t3_stretch(seed);
            let ab = SparseVec::unit(find(&monos, &[1, 1, 0, 0]));
            f.connection.beta[1] = f.connection.beta[1].add(&ab);
            f
        }
    }
}
