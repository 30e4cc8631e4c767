//! Seeded pseudo-random instances for property tests.

use super::dense::DenseMatrix;
use crate::cdga::{cohomology_ring, free_cdga_with_monomials, Cdga, Generator};
use crate::linalg::{rat, Rational, SparseMatrix, SparseVec};
use crate::site::{FiniteSite, Presheaf};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_rational(r: &mut impl Rng) -> Rational {
    let num = r.gen_range(-4i64..=4);
    let den = r.gen_range(1i64..=3);
    Rational::new(num.into(), den.into())
}

/// A sparse matrix with roughly `density` of its entries nonzero. Rows of a
/// random subset are linear combinations of others so ranks vary.
pub fn random_matrix(seed: u64, rows: usize, cols: usize, density: f64) -> SparseMatrix {
    let mut r = rng(seed);
    let mut dense: Vec<Vec<Rational>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| if r.gen_bool(density) { small_rational(&mut r) } else { rat(0) })
                .collect()
        })
        .collect();
    for i in 1..rows {
        if r.gen_bool(0.3) {
            let j = r.gen_range(0..i);
            let f = small_rational(&mut r);
            let k = r.gen_range(0..i);
            let g = small_rational(&mut r);
            dense[i] = (0..cols).map(|c| &f * &dense[j][c] + &g * &dense[k][c]).collect();
        }
    }
    SparseMatrix::from_dense(&dense)
}

pub fn to_dense(m: &SparseMatrix) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(m.nrows(), m.ncols());
    for (r, c, v) in m.triplets() {
        out.set(r, c, v.clone());
    }
    out
}

/// A Sullivan-style extension built one generator at a time: each new
/// generator's differential is a random cocycle of the algebra generated so far.
pub fn random_cdga(seed: u64) -> Cdga {
    let mut r = rng(seed);
    let top = r.gen_range(3..=5);
    let count = r.gen_range(2..=4);
    let mut gens: Vec<Generator> = Vec::new();
    for i in 0..count {
        let degree = r.gen_range(1..=3.min(top));
        let mut g = Generator::new(format!("g{i}"), degree);
        if !gens.is_empty() && r.gen_bool(0.6) {
            let (c, monos) = free_cdga_with_monomials("partial", &gens, top).expect("partial model");
            if let Ok(ring) = cohomology_ring(&c) {
                let k = degree + 1;
                if k <= top {
                    let cocycles = &ring.group(k).cocycles;
                    let mut z = SparseVec::new();
                    for v in cocycles.basis() {
                        z = z.add_scaled(&c.from_degree_local(k, v), &rat(r.gen_range(-2..=2)));
                    }
                    g.d = z
                        .iter()
                        .map(|(b, coef)| {
                            let word = monos[b]
                                .iter()
                                .enumerate()
                                .flat_map(|(j, &e)| std::iter::repeat(j).take(e))
                                .collect();
                            (coef.clone(), word)
                        })
                        .collect();
                }
            }
        }
        gens.push(g);
    }
    let (c, _) = free_cdga_with_monomials(&format!("random-{seed}"), &gens, top).expect("random model");
    c
}

/// A random invertible matrix and its inverse, as products of elementary
/// row operations and a diagonal scaling.
fn random_invertible(r: &mut impl Rng, n: usize) -> (SparseMatrix, SparseMatrix) {
    let mut g = SparseMatrix::identity(n);
    let mut g_inv = SparseMatrix::identity(n);
    for i in 0..n {
        let s = rat([1, -1, 2, -2, 3][r.gen_range(0..5)]);
        let e = SparseMatrix::from_triplets(n, n, (0..n).map(|k| (k, k, if k == i { s.clone() } else { rat(1) })))
            .expect("square");
        let e_inv = SparseMatrix::from_triplets(
            n,
            n,
            (0..n).map(|k| (k, k, if k == i { rat(1) / s.clone() } else { rat(1) })),
        )
        .expect("square");
        g = e.mul(&g).expect("square");
        g_inv = g_inv.mul(&e_inv).expect("square");
    }
    for _ in 0..2 * n {
        let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
        if i == j {
            continue;
        }
        let c = small_rational(r);
        let e = SparseMatrix::identity(n).add(&SparseMatrix::from_triplets(n, n, [(i, j, c.clone())]).expect("in range"));
        let e_inv = SparseMatrix::identity(n).add(&SparseMatrix::from_triplets(n, n, [(i, j, -c)]).expect("in range"));
        g = e.expect("square").mul(&g).expect("square");
        g_inv = g_inv.mul(&e_inv.expect("square")).expect("square");
    }
    (g, g_inv)
}

/// A presheaf on a site whose category is a poset: a direct sum of indicator
/// presheaves of convex sets of objects, in a random basis at every object.
pub fn random_presheaf(seed: u64, site: &FiniteSite) -> Presheaf {
    let cat = &site.category;
    let n = cat.len();
    let le = |a: usize, b: usize| !cat.hom(a, b).is_empty();
    let mut r = rng(seed);
    let mut total = Presheaf::zero(cat);
    for _ in 0..r.gen_range(1..=3) {
        let lows: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.4)).collect();
        let highs: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.4)).collect();
        let inside: Vec<bool> = (0..n)
            .map(|x| lows.iter().any(|&l| le(l, x)) && highs.iter().any(|&h| le(x, h)))
            .collect();
        let dims: Vec<usize> = inside.iter().map(|&b| usize::from(b)).collect();
        let maps = cat
            .morphisms
            .iter()
            .map(|m| {
                if inside[m.source] && inside[m.target] {
                    SparseMatrix::identity(1)
                } else {
                    SparseMatrix::zeros(dims[m.source], dims[m.target])
                }
            })
            .collect();
        total = total.direct_sum(&Presheaf { dims, maps });
    }
    let changes: Vec<(SparseMatrix, SparseMatrix)> = total.dims.iter().map(|&d| random_invertible(&mut r, d)).collect();
    let maps = cat
        .morphisms
        .iter()
        .enumerate()
        .map(|(i, m)| {
            changes[m.source]
                .0
                .mul(&total.maps[i])
                .and_then(|x| x.mul(&changes[m.target].1))
                .expect("shapes agree")
        })
        .collect();
    Presheaf { dims: total.dims, maps }
}
