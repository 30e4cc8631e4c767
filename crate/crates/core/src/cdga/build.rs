use super::algebra::{unit_product_table, Cdga, CdgaError};
use crate::linalg::{rational::sign, Rational, SparseMatrix, SparseVec};
use std::cmp::Reverse;
use std::collections::HashMap;

/// A generator of a free graded-commutative algebra.
///
/// `d` is a polynomial in earlier generators: each term is a coefficient and a
/// list of generator indices multiplied left to right.
#[derive(Debug, Clone)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
    pub cap: Option<usize>,
    pub d: Vec<(Rational, Vec<usize>)>,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: usize) -> Self {
        Generator { name: name.into(), degree, cap: None, d: Vec::new() }
    }

    pub fn capped(mut self, cap: usize) -> Self {
        self.cap = Some(cap);
        self
    }

    pub fn with_d(mut self, d: Vec<(Rational, Vec<usize>)>) -> Self {
        self.d = d;
        self
    }
}

/// Free graded-commutative algebra on `gens`, truncated above `top_degree`
/// and at the caps of even generators, with `d` extended by Leibniz.
///
/// Basis: monomials in increasing generator order, sorted by degree.
pub fn free_cdga(name: &str, gens: &[Generator], top_degree: usize) -> Result<Cdga, CdgaError> {
    free_cdga_with_monomials(name, gens, top_degree).map(|(c, _)| c)
}

/// As [`free_cdga`], also returning the exponent vector of each basis element.
pub fn free_cdga_with_monomials(
    name: &str,
    gens: &[Generator],
    top_degree: usize,
) -> Result<(Cdga, Vec<Vec<usize>>), CdgaError> {
    for (i, g) in gens.iter().enumerate() {
        if g.degree == 0 {
            return Err(CdgaError::Malformed(format!("generator {i} has degree 0")));
        }
        if g.degree > top_degree {
            return Err(CdgaError::Malformed(format!("generator {i} lies above the top degree")));
        }
        for (_, mono) in &g.d {
            if mono.iter().any(|&j| j >= i) {
                return Err(CdgaError::Malformed(format!(
                    "d of generator {i} must only involve earlier generators"
                )));
            }
            let dsum: usize = mono.iter().map(|&j| gens[j].degree).sum();
            if dsum != g.degree + 1 {
                return Err(CdgaError::Malformed(format!("d of generator {i} has the wrong degree")));
            }
        }
    }
    let max_exp: Vec<usize> = gens
        .iter()
        .map(|g| {
            if g.degree % 2 == 1 {
                1
            } else {
                g.cap.unwrap_or(usize::MAX).min(top_degree / g.degree)
            }
        })
        .collect();

    let mut monos: Vec<Vec<usize>> = Vec::new();
    enumerate(gens, &max_exp, top_degree, 0, &mut vec![0; gens.len()], 0, &mut monos);
    let mono_deg = |m: &[usize]| -> usize { m.iter().zip(gens).map(|(e, g)| e * g.degree).sum() };
    monos.sort_by_key(|m| (mono_deg(m), Reverse(m.clone())));
    let index: HashMap<Vec<usize>, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let n = monos.len();
    let degrees: Vec<usize> = monos.iter().map(|m| mono_deg(m)).collect();

    let mono_mul = |a: &[usize], b: &[usize]| -> SparseVec {
        let mut e = vec![0; gens.len()];
        let mut odd_swaps = 0usize;
        for i in 0..gens.len() {
            e[i] = a[i] + b[i];
            if e[i] > max_exp[i] {
                return SparseVec::new();
            }
            for j in 0..i {
                odd_swaps += a[i] * b[j] * gens[i].degree * gens[j].degree;
            }
        }
        match index.get(&e) {
            Some(&k) => SparseVec::from_pairs([(k, sign(odd_swaps % 2 == 1))]),
            None => SparseVec::new(),
        }
    };
    let product = unit_product_table(n, |i, j| mono_mul(&monos[i], &monos[j]));
    let mul = |x: &SparseVec, y: &SparseVec| -> SparseVec {
        let mut acc = Vec::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                for (k, c) in product[i * n + j].iter() {
                    acc.push((k, a * b * c));
                }
            }
        }
        SparseVec::from_pairs(acc)
    };

    let gen_vec = |i: usize| -> SparseVec {
        let mut e = vec![0; gens.len()];
        e[i] = 1;
        SparseVec::unit(index[&e])
    };
    let d_gen: Vec<SparseVec> = gens
        .iter()
        .map(|g| {
            let mut total = SparseVec::new();
            for (coef, mono) in &g.d {
                let mut v = SparseVec::unit(0);
                for &j in mono {
                    v = mul(&v, &gen_vec(j));
                }
                total = total.add_scaled(&v, coef);
            }
            total
        })
        .collect();

    let mut d_cols: Vec<SparseVec> = vec![SparseVec::new(); n];
    for k in 1..n {
        let m = &monos[k];
        let i = m.iter().position(|&e| e > 0).expect("non-unit monomial");
        let mut rest = m.clone();
        rest[i] -= 1;
        let r = index[&rest];
        let g = gen_vec(i);
        let first = mul(&d_gen[i], &SparseVec::unit(r));
        let second = mul(&g, &d_cols[r]).scale(&sign(gens[i].degree % 2 == 1));
        d_cols[k] = first.add(&second);
    }
    let differential = SparseMatrix::from_columns(n, d_cols);
    let c = Cdga::from_tables(name, degrees, top_degree, differential, product)?;
    Ok((c, monos))
}

fn enumerate(
    gens: &[Generator],
    max_exp: &[usize],
    top: usize,
    i: usize,
    cur: &mut Vec<usize>,
    deg: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if i == gens.len() {
        out.push(cur.clone());
        return;
    }
    let mut e = 0;
    while e <= max_exp[i] && deg + e * gens[i].degree <= top {
        cur[i] = e;
        enumerate(gens, max_exp, top, i + 1, cur, deg + e * gens[i].degree, out);
        e += 1;
    }
    cur[i] = 0;
}

/// Exterior/polynomial algebra with zero differential on generators of the given
/// degrees. Even generators need a cap `Some(c)` (polynomial truncated above `s^c`).
pub fn exterior_algebra(name: &str, generators: &[(usize, Option<usize>)]) -> Result<Cdga, CdgaError> {
    let mut gens = Vec::new();
    let mut top = 0;
    for (i, &(degree, cap)) in generators.iter().enumerate() {
        if degree == 0 {
            return Err(CdgaError::Malformed(format!("generator {i} has degree 0")));
        }
        let mut g = Generator::new(format!("x{i}"), degree);
        if degree % 2 == 0 {
            let c = cap.ok_or(CdgaError::CapRequired { index: i, degree })?;
            g = g.capped(c);
            top += c * degree;
        } else {
            top += degree;
        }
        gens.push(g);
    }
    free_cdga(name, &gens, top)
}

/// Tensor product with the Koszul sign rule.
/// Basis: pairs `(i, j)` sorted by total degree, then by `(i, j)`.
pub fn tensor_cdga(a: &Cdga, b: &Cdga) -> Cdga {
    let mut pairs: Vec<(usize, usize)> =
        (0..a.dim()).flat_map(|i| (0..b.dim()).map(move |j| (i, j))).collect();
    pairs.sort_by_key(|&(i, j)| (a.degree_of_basis(i) + b.degree_of_basis(j), i, j));
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let n = pairs.len();
    let degrees = pairs.iter().map(|&(i, j)| a.degree_of_basis(i) + b.degree_of_basis(j)).collect();
    let embed = |x: &SparseVec, y: &SparseVec, f: &Rational| -> SparseVec {
        let mut acc = Vec::new();
        for (i, p) in x.iter() {
            for (j, q) in y.iter() {
                acc.push((index[&(i, j)], p * q * f));
            }
        }
        SparseVec::from_pairs(acc)
    };
    let product = unit_product_table(n, |k, l| {
        let (i, j) = pairs[k];
        let (i2, j2) = pairs[l];
        let s = sign(b.degree_of_basis(j) * a.degree_of_basis(i2) % 2 == 1);
        embed(a.basis_product(i, i2), b.basis_product(j, j2), &s)
    });
    let cols = pairs
        .iter()
        .map(|&(i, j)| {
            let one = Rational::from_integer(1.into());
            let first = embed(&a.d(&SparseVec::unit(i)), &SparseVec::unit(j), &one);
            let s = sign(a.degree_of_basis(i) % 2 == 1);
            first.add(&embed(&SparseVec::unit(i), &b.d(&SparseVec::unit(j)), &s))
        })
        .collect();
    let name = format!("{}*{}", a.name(), b.name());
    Cdga::from_tables(name, degrees, a.top_degree() + b.top_degree(), SparseMatrix::from_columns(n, cols), product)
        .expect("tensor tables are well formed")
}

/// Direct product `A x B` (functions on a disjoint union).
///
/// Basis: `(1,1)`, `(1,0)`, then `(a,0)` for the non-unit basis of `A`, then
/// `(0,b)` for the non-unit basis of `B`.
pub fn product_cdga(a: &Cdga, b: &Cdga) -> Cdga {
    let na = a.dim();
    let nb = b.dim();
    let n = na + nb;
    let split = |v: &SparseVec| -> (SparseVec, SparseVec) {
        let c0 = v.get(0);
        let c1 = v.get(1);
        let mut va = vec![(0, &c0 + &c1)];
        let mut vb = vec![(0, c0)];
        for (k, c) in v.iter() {
            if k >= 2 && k < na + 1 {
                va.push((k - 1, c.clone()));
            } else if k >= na + 1 {
                vb.push((k - na, c.clone()));
            }
        }
        (SparseVec::from_pairs(va), SparseVec::from_pairs(vb))
    };
    let join = |va: &SparseVec, vb: &SparseVec| -> SparseVec {
        let c0 = vb.get(0);
        let mut out = vec![(1, va.get(0) - &c0), (0, c0)];
        out.extend(va.iter().filter(|(k, _)| *k > 0).map(|(k, c)| (k + 1, c.clone())));
        out.extend(vb.iter().filter(|(k, _)| *k > 0).map(|(k, c)| (k + na, c.clone())));
        SparseVec::from_pairs(out)
    };
    let mut degrees = vec![0, 0];
    degrees.extend((1..na).map(|i| a.degree_of_basis(i)));
    degrees.extend((1..nb).map(|j| b.degree_of_basis(j)));
    let product = unit_product_table(n, |i, j| {
        let (xa, xb) = split(&SparseVec::unit(i));
        let (ya, yb) = split(&SparseVec::unit(j));
        join(&a.mul(&xa, &ya), &b.mul(&xb, &yb))
    });
    let cols = (0..n)
        .map(|i| {
            let (xa, xb) = split(&SparseVec::unit(i));
            join(&a.d(&xa), &b.d(&xb))
        })
        .collect();
    let name = format!("{}+{}", a.name(), b.name());
    Cdga::from_tables(name, degrees, a.top_degree().max(b.top_degree()), SparseMatrix::from_columns(n, cols), product)
        .expect("product tables are well formed")
}

/// The acyclic model `Λ(s, u; du = s)` truncated above degree `2c`, with `H = Q`.
pub fn contractible(c: usize) -> Cdga {
    let one = Rational::from_integer(1.into());
    let gens = [Generator::new("s", 2), Generator::new("u", 1).with_d(vec![(one, vec![0])])];
    free_cdga("disk", &gens, 2 * c.max(1)).expect("contractible model")
}
