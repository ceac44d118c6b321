//! Univariate polynomials over a [`Field`], binary forms, squarefree
//! decomposition and Smith normal form over `k[z]`.
//!
//! A polynomial is a coefficient vector `c[0] + c[1] z + …` with no trailing
//! zeros. A binary form of degree `n` is stored as the coefficient vector of
//! `X^j Y^(n-j)` for `j = 0..=n`, so dehomogenizing at `Y = 1` reuses the
//! same vector and dehomogenizing at `X = 1` reverses it.

use crate::field::Field;
use crate::linalg::Mat;

/// Polynomial coefficients, lowest degree first, trimmed.
pub type Poly<E> = Vec<E>;

/// Remove trailing zero coefficients.
pub fn trim<F: Field>(f: &F, mut p: Poly<F::E>) -> Poly<F::E> {
    while p.last().is_some_and(|c| f.is_zero(c)) {
        p.pop();
    }
    p
}

/// Degree, `None` for the zero polynomial.
pub fn degree<F: Field>(f: &F, p: &[F::E]) -> Option<usize> {
    p.iter().rposition(|c| !f.is_zero(c))
}

pub fn add<F: Field>(f: &F, a: &[F::E], b: &[F::E]) -> Poly<F::E> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => f.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => f.zero(),
        })
        .collect();
    trim(f, out)
}

pub fn neg<F: Field>(f: &F, a: &[F::E]) -> Poly<F::E> {
    a.iter().map(|x| f.neg(x)).collect()
}

pub fn sub<F: Field>(f: &F, a: &[F::E], b: &[F::E]) -> Poly<F::E> {
    add(f, a, &neg(f, b))
}

pub fn scale<F: Field>(f: &F, a: &[F::E], c: &F::E) -> Poly<F::E> {
    trim(f, a.iter().map(|x| f.mul(x, c)).collect())
}

pub fn mul<F: Field>(f: &F, a: &[F::E], b: &[F::E]) -> Poly<F::E> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

/// Euclidean division `a = q·b + r`; panics if `b` is zero.
pub fn divrem<F: Field>(f: &F, a: &[F::E], b: &[F::E]) -> (Poly<F::E>, Poly<F::E>) {
    let b = trim(f, b.to_vec());
    let db = degree(f, &b).expect("division by zero polynomial");
    let inv_lead = f.inv(&b[db]);
    let mut r = trim(f, a.to_vec());
    let mut q = vec![f.zero(); r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(f, &r) {
        if dr < db {
            break;
        }
        let c = f.mul(&r[dr], &inv_lead);
        let shift = dr - db;
        q[shift] = f.add(&q[shift], &c);
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = f.sub(&r[shift + i], &f.mul(&c, bi));
        }
        r = trim(f, r);
    }
    (trim(f, q), r)
}

/// Scale to leading coefficient 1 (zero stays zero).
pub fn monic<F: Field>(f: &F, a: &[F::E]) -> Poly<F::E> {
    match degree(f, a) {
        None => vec![],
        Some(d) => scale(f, a, &f.inv(&a[d])),
    }
}

/// Monic greatest common divisor.
pub fn gcd<F: Field>(f: &F, a: &[F::E], b: &[F::E]) -> Poly<F::E> {
    let (mut x, mut y) = (trim(f, a.to_vec()), trim(f, b.to_vec()));
    while !y.is_empty() {
        let (_, r) = divrem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// Formal derivative.
pub fn derivative<F: Field>(f: &F, a: &[F::E]) -> Poly<F::E> {
    trim(
        f,
        a.iter().enumerate().skip(1).map(|(i, c)| f.mul(&f.from_i64(i as i64), c)).collect(),
    )
}

/// Evaluate at a point (Horner).
pub fn eval<F: Field>(f: &F, a: &[F::E], x: &F::E) -> F::E {
    a.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
}

/// Evaluate at a square matrix: `a(M)`.
pub fn eval_matrix<F: Field>(f: &F, a: &[F::E], m: &Mat<F::E>) -> Mat<F::E> {
    let n = m.len();
    let mut acc = crate::linalg::zeros(f, n, n);
    for c in a.iter().rev() {
        acc = crate::linalg::matmul(f, &acc, m);
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] = f.add(&row[i], c);
        }
    }
    acc
}

/// The polynomial `(z - a)^m`.
pub fn linear_power<F: Field>(f: &F, a: &F::E, m: usize) -> Poly<F::E> {
    let lin = vec![f.neg(a), f.one()];
    (0..m).fold(vec![f.one()], |acc, _| mul(f, &acc, &lin))
}

/// Squarefree decomposition (Yun): returns `[s_1, s_2, …]` with
/// `monic(a) = Π s_j^j`, each `s_j` squarefree and pairwise coprime.
///
/// Valid in characteristic 0 and in characteristic `p > deg a`, which covers
/// every use here (quotient identification runs over a large prime field).
pub fn squarefree_decomposition<F: Field>(f: &F, a: &[F::E]) -> Vec<Poly<F::E>> {
    let a = monic(f, a);
    let Some(d) = degree(f, &a) else { return vec![] };
    let p = f.characteristic();
    assert!(p == 0 || p as usize > d, "squarefree decomposition needs char 0 or char > degree");
    if d == 0 {
        return vec![];
    }
    let da = derivative(f, &a);
    let mut out = Vec::new();
    let g = gcd(f, &a, &da);
    let mut b = divrem(f, &a, &g).0;
    let mut c = divrem(f, &da, &g).0;
    let mut dd = sub(f, &c, &derivative(f, &b));
    loop {
        let s = gcd(f, &b, &dd);
        out.push(s.clone());
        b = divrem(f, &b, &s).0;
        if degree(f, &b) == Some(0) || b.is_empty() {
            break;
        }
        c = divrem(f, &dd, &s).0;
        dd = sub(f, &c, &derivative(f, &b));
    }
    while out.last().is_some_and(|s| degree(f, s) == Some(0)) {
        out.pop();
    }
    out
}

/// Block lengths encoded by an invariant factor: a factor
/// `Π s_j^j` contributes `deg(s_j)` blocks of length `j` (one per geometric
/// point). Returned as a weakly decreasing list.
pub fn block_lengths<F: Field>(f: &F, d: &[F::E]) -> Vec<usize> {
    let mut out = Vec::new();
    for (j, s) in squarefree_decomposition(f, d).iter().enumerate() {
        for _ in 0..degree(f, s).unwrap_or(0) {
            out.push(j + 1);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Invariant factors `d_1 | d_2 | …` (monic, nonzero, non-unit ones only)
/// of the cokernel of a polynomial matrix, plus the free rank of the cokernel
/// (rows minus rank).
pub fn smith_invariant_factors<F: Field>(
    f: &F,
    m: &[Vec<Poly<F::E>>],
) -> (Vec<Poly<F::E>>, usize) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<Poly<F::E>>> =
        m.iter().map(|r| r.iter().map(|p| trim(f, p.clone())).collect()).collect();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: nonzero entry of least degree in the trailing block
        let mut best: Option<(usize, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if let Some(dg) = degree(f, &a[i][j]) {
                    if best.is_none_or(|b| dg < b.2) {
                        best = Some((i, j, dg));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            // clear column t
            for i in t + 1..rows {
                if a[i][t].is_empty() {
                    continue;
                }
                let (q, r) = divrem(f, &a[i][t], &a[t][t]);
                for j in t..cols {
                    let prod = mul(f, &q, &a[t][j]);
                    a[i][j] = sub(f, &a[i][j], &prod);
                }
                debug_assert_eq!(a[i][t], r);
                if !r.is_empty() {
                    a.swap(t, i);
                    changed = true;
                }
            }
            // clear row t
            for j in t + 1..cols {
                if a[t][j].is_empty() {
                    continue;
                }
                let (q, r) = divrem(f, &a[t][j], &a[t][t]);
                for i in t..rows {
                    let prod = mul(f, &q, &a[i][t]);
                    a[i][j] = sub(f, &a[i][j], &prod);
                }
                if !r.is_empty() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let mut bad = None;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !a[i][j].is_empty() && !divrem(f, &a[i][j], &a[t][t]).1.is_empty() {
                        bad = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] = add(f, &a[t][j], &v);
                    }
                }
                None => break,
            }
        }
        diag.push(monic(f, &a[t][t]));
        t += 1;
    }
    let rank = diag.len();
    let factors = diag.into_iter().filter(|d| degree(f, d) != Some(0)).collect();
    (factors, rows - rank)
}

/// Multiplicity of the root `0` (the `z`-adic valuation), `None` for zero.
pub fn valuation_at_zero<F: Field>(f: &F, a: &[F::E]) -> Option<usize> {
    a.iter().position(|c| !f.is_zero(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn q(v: &[i64]) -> Poly<num_rational::BigRational> {
        let f = Rationals::default();
        trim(&f, v.iter().map(|&x| f.from_i64(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let f = Rationals::default();
        // (z-1)(z-2) and (z-1)(z+3)
        let a = mul(&f, &q(&[-1, 1]), &q(&[-2, 1]));
        let b = mul(&f, &q(&[-1, 1]), &q(&[3, 1]));
        assert_eq!(gcd(&f, &a, &b), q(&[-1, 1]));
        let (qq, r) = divrem(&f, &a, &q(&[-1, 1]));
        assert_eq!(qq, q(&[-2, 1]));
        assert!(r.is_empty());
    }

    #[test]
    fn squarefree_reads_block_lengths() {
        let f = PrimeField::generic();
        // (z-1)^2 (z-5) (z^2+1): blocks 2,1,1,1
        let p = |v: &[i64]| trim(&f, v.iter().map(|&x| f.from_i64(x)).collect::<Vec<_>>());
        let a = mul(&f, &mul(&f, &linear_power(&f, &1, 2), &p(&[-5, 1])), &p(&[1, 0, 1]));
        assert_eq!(block_lengths(&f, &a), vec![2, 1, 1, 1]);
    }

    #[test]
    fn smith_form_examples() {
        let f = Rationals::default();
        // diag(1, z^2) -> [z^2]
        let m = vec![vec![q(&[1]), q(&[])], vec![q(&[]), q(&[0, 0, 1])]];
        assert_eq!(smith_invariant_factors(&f, &m).0, vec![q(&[0, 0, 1])]);
        // diag(z, z) -> [z, z]
        let m = vec![vec![q(&[0, 1]), q(&[])], vec![q(&[]), q(&[0, 1])]];
        assert_eq!(smith_invariant_factors(&f, &m).0, vec![q(&[0, 1]), q(&[0, 1])]);
        // diag(z-1, z-2): coprime blocks merge into (z-1)(z-2)
        let m = vec![vec![q(&[-1, 1]), q(&[])], vec![q(&[]), q(&[-2, 1])]];
        let (fs, free) = smith_invariant_factors(&f, &m);
        assert_eq!(fs, vec![mul(&f, &q(&[-1, 1]), &q(&[-2, 1]))]);
        assert_eq!(free, 0);
    }

    #[test]
    fn matrix_evaluation() {
        let f = Rationals::default();
        let n = vec![vec![f.from_i64(0), f.from_i64(1)], vec![f.from_i64(0), f.from_i64(0)]];
        // z^2 at a nilpotent 2x2 Jordan block vanishes
        let z2 = eval_matrix(&f, &q(&[0, 0, 1]), &n);
        assert!(z2.iter().flatten().all(|x| f.is_zero(x)));
    }
}
