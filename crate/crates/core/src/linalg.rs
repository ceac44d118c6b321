//! Dense exact linear algebra over any [`Field`].
//!
//! Matrices are row-major `Vec<Vec<E>>`; all routines are exact (no pivoting
//! heuristics are needed because there is no rounding).

use crate::field::Field;

/// Row-major dense matrix.
pub type Mat<E> = Vec<Vec<E>>;

/// A zero matrix of the given shape.
pub fn zeros<F: Field>(f: &F, rows: usize, cols: usize) -> Mat<F::E> {
    vec![vec![f.zero(); cols]; rows]
}

/// Identity matrix.
pub fn identity<F: Field>(f: &F, n: usize) -> Mat<F::E> {
    let mut m = zeros(f, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = f.one();
    }
    m
}

/// In-place reduced row echelon form; returns the pivot columns.
/// Zero rows are moved to the bottom.
pub fn rref<F: Field>(f: &F, m: &mut Mat<F::E>) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = f.inv(&m[r][c]);
        for x in m[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !f.is_zero(&row[c]) {
                let factor = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a matrix.
pub fn rank<F: Field>(f: &F, m: &Mat<F::E>) -> usize {
    let mut c = m.clone();
    rref(f, &mut c).len()
}

/// Basis of the right null space `{x : m·x = 0}`; `cols` is needed when `m`
/// has no rows.
pub fn kernel<F: Field>(f: &F, m: &Mat<F::E>, cols: usize) -> Vec<Vec<F::E>> {
    let mut a = m.clone();
    let pivots = rref(f, &mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); cols];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&a[r][fc]);
            }
            v
        })
        .collect()
}

/// Solve `m·x = b`, returning one solution when consistent.
pub fn solve<F: Field>(f: &F, m: &Mat<F::E>, b: &[F::E]) -> Option<Vec<F::E>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut aug: Mat<F::E> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![f.zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][cols].clone();
    }
    Some(x)
}

/// Determinant by elimination.
pub fn det<F: Field>(f: &F, m: &Mat<F::E>) -> F::E {
    let n = m.len();
    let mut a = m.clone();
    let mut d = f.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !f.is_zero(&a[i][c])) else {
            return f.zero();
        };
        if p != c {
            a.swap(p, c);
            d = f.neg(&d);
        }
        d = f.mul(&d, &a[c][c]);
        let inv = f.inv(&a[c][c]);
        for i in c + 1..n {
            if !f.is_zero(&a[i][c]) {
                let factor = f.mul(&a[i][c], &inv);
                let pivot_row = a[c].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x = f.sub(x, &f.mul(&factor, y));
                }
            }
        }
    }
    d
}

/// Matrix product.
pub fn matmul<F: Field>(f: &F, a: &Mat<F::E>, b: &Mat<F::E>) -> Mat<F::E> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(f.zero(), |acc, (x, brow)| f.add(&acc, &f.mul(x, &brow[j])))
                })
                .collect()
        })
        .collect()
}

/// Matrix–vector product.
pub fn matvec<F: Field>(f: &F, a: &Mat<F::E>, v: &[F::E]) -> Vec<F::E> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y))))
        .collect()
}

/// Transpose.
pub fn transpose<E: Clone>(a: &Mat<E>, cols: usize) -> Mat<E> {
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Canonical basis (RREF rows) of the span of `vectors`; equal subspaces get
/// equal canonical bases, so this doubles as a hashable subspace key.
pub fn span_basis<F: Field>(f: &F, vectors: &[Vec<F::E>]) -> Vec<Vec<F::E>> {
    let mut m = vectors.to_vec();
    let k = rref(f, &mut m).len();
    m.truncate(k);
    m
}

/// Whether `v` lies in the span of the canonical basis `basis`.
pub fn in_span<F: Field>(f: &F, basis: &[Vec<F::E>], v: &[F::E]) -> bool {
    let mut m = basis.to_vec();
    m.push(v.to_vec());
    rank(f, &m) == basis.len()
}

/// Image of a subspace (given by basis vectors) under a linear map.
pub fn image<F: Field>(f: &F, map: &Mat<F::E>, basis: &[Vec<F::E>]) -> Vec<Vec<F::E>> {
    let imgs: Vec<Vec<F::E>> = basis.iter().map(|v| matvec(f, map, v)).collect();
    span_basis(f, &imgs)
}

/// Whether the span of `sub` is contained in the span of `sup` (canonical).
pub fn contained<F: Field>(f: &F, sub: &[Vec<F::E>], sup: &[Vec<F::E>]) -> bool {
    let mut m = sup.to_vec();
    m.extend(sub.iter().cloned());
    rank(f, &m) == sup.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{GaloisField, Rationals};
    use num_rational::BigRational;

    fn q(v: i64) -> BigRational {
        Rationals::default().from_i64(v)
    }

    #[test]
    fn kernel_of_rank_one_matrix() {
        let f = Rationals::default();
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        let k = kernel(&f, &m, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(matvec(&f, &m, v).iter().all(|x| f.is_zero(x)));
        }
    }

    #[test]
    fn determinant_and_solve() {
        let f = Rationals::default();
        let m = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        assert_eq!(det(&f, &m), q(5));
        let x = solve(&f, &m, &[q(3), q(4)]).unwrap();
        assert_eq!(matvec(&f, &m, &x), vec![q(3), q(4)]);
        let singular = vec![vec![q(1), q(1)], vec![q(1), q(1)]];
        assert!(solve(&f, &singular, &[q(0), q(1)]).is_none());
    }

    #[test]
    fn span_basis_is_canonical_over_finite_field() {
        let f = GaloisField::new(5).unwrap();
        let a = span_basis(&f, &[vec![1, 2, 0], vec![0, 1, 1]]);
        let b = span_basis(&f, &[vec![1, 3, 1], vec![2, 0, 1]]);
        // (1,3,1) = (1,2,0)+(0,1,1); (2,0,1) = 2(1,2,0)+(0,1,1) mod 5
        assert_eq!(a, b);
        assert!(contained(&f, &[vec![1, 3, 1]], &a));
    }
}
