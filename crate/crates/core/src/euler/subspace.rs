//! Exhaustive enumeration over a finite field: subspaces of a given
//! dimension, operator-stable subspaces, and projective points.

use crate::error::{HiggsError, Result};
use crate::field::Field;
use crate::linalg::{self, Mat};

/// Upper bound on the size of any single enumeration, as a power of `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountBudget {
    pub max_log_q: u32,
}

impl Default for CountBudget {
    fn default() -> Self {
        Self { max_log_q: 14 }
    }
}

impl CountBudget {
    /// Fail when an enumeration of about `q^exponent` items is requested.
    pub fn check(&self, exponent: usize, what: &str) -> Result<()> {
        if exponent > self.max_log_q as usize {
            return Err(HiggsError::BudgetExceeded(format!(
                "{what}: about q^{exponent} candidates exceeds q^{}",
                self.max_log_q
            )));
        }
        Ok(())
    }
}

fn field_order<F: Field>(f: &F) -> Result<u64> {
    f.order()
        .filter(|&q| q <= 1 << 16)
        .ok_or_else(|| HiggsError::InvalidInput("point counting needs a small finite field".into()))
}

/// `Σ cᵢ bᵢ`.
pub(crate) fn combine<F: Field>(f: &F, coeffs: &[F::E], basis: &[Vec<F::E>], len: usize) -> Vec<F::E> {
    let mut out = vec![f.zero(); len];
    for (c, b) in coeffs.iter().zip(basis) {
        if f.is_zero(c) {
            continue;
        }
        for (o, x) in out.iter_mut().zip(b) {
            *o = f.add(o, &f.mul(c, x));
        }
    }
    out
}

/// Visit every `k`-dimensional subspace of `span(basis)` (basis assumed
/// independent) once, as a list of `k` spanning vectors of length `len`.
pub fn for_each_subspace<F: Field>(
    f: &F,
    basis: &[Vec<F::E>],
    len: usize,
    k: usize,
    budget: &CountBudget,
    visit: &mut dyn FnMut(&[Vec<F::E>]) -> Result<()>,
) -> Result<()> {
    let n = basis.len();
    if k > n {
        return Ok(());
    }
    if k == 0 {
        return visit(&[]);
    }
    let q = field_order(f)?;
    budget.check(k * (n - k), "subspace enumeration")?;
    let elems: Vec<F::E> = (0..q).map(|i| f.element(i)).collect();
    // reduced row echelon coefficient matrices: choose pivots, then fill the
    // free slots (right of the row's pivot, outside pivot columns)
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| {
                let pv = pivots.clone();
                (pivots[i] + 1..n).filter(move |c| !pv.contains(c)).map(move |c| (i, c))
            })
            .collect();
        let mut digits = vec![0usize; free.len()];
        loop {
            let mut rows: Mat<F::E> = vec![vec![f.zero(); n]; k];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i][p] = f.one();
            }
            for (&(i, c), &d) in free.iter().zip(&digits) {
                rows[i][c] = elems[d].clone();
            }
            let vecs: Vec<Vec<F::E>> = rows.iter().map(|r| combine(f, r, basis, len)).collect();
            visit(&vecs)?;
            // odometer increment
            let mut pos = 0;
            while pos < digits.len() {
                digits[pos] += 1;
                if digits[pos] < q as usize {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
            if pos == digits.len() {
                break;
            }
        }
        // next pivot combination
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if pivots[i] < n - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Whether `span(sub)` is stable under every operator.
pub fn is_stable<F: Field>(f: &F, sub: &[Vec<F::E>], ops: &[&Mat<F::E>]) -> bool {
    ops.iter().all(|op| linalg::contained(f, &linalg::image(f, op, sub), sub))
}

/// Visit every nonzero vector of `span(basis)` up to scalars (first nonzero
/// coefficient equal to one).
pub fn for_each_projective_point<F: Field>(
    f: &F,
    basis: &[Vec<F::E>],
    len: usize,
    budget: &CountBudget,
    visit: &mut dyn FnMut(&[F::E]) -> Result<()>,
) -> Result<()> {
    let n = basis.len();
    if n == 0 {
        return Ok(());
    }
    let q = field_order(f)?;
    budget.check(n - 1, "projective enumeration")?;
    let elems: Vec<F::E> = (0..q).map(|i| f.element(i)).collect();
    for lead in 0..n {
        let mut digits = vec![0usize; n - lead - 1];
        loop {
            let mut coeffs = vec![f.zero(); n];
            coeffs[lead] = f.one();
            for (j, &d) in digits.iter().enumerate() {
                coeffs[lead + 1 + j] = elems[d].clone();
            }
            visit(&combine(f, &coeffs, basis, len))?;
            let mut pos = 0;
            while pos < digits.len() {
                digits[pos] += 1;
                if digits[pos] < q as usize {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
            if pos == digits.len() {
                break;
            }
        }
    }
    Ok(())
}

/// Vectors of `basis` completing an independent set `sub` to a basis of
/// `span(sub ∪ basis)`, chosen greedily.
pub fn complement<F: Field>(f: &F, sub: &[Vec<F::E>], basis: &[Vec<F::E>]) -> Vec<Vec<F::E>> {
    let mut acc = sub.to_vec();
    let mut out = Vec::new();
    for b in basis {
        if !linalg::in_span(f, &acc, b) {
            acc.push(b.clone());
            out.push(b.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GaloisField;

    fn unit_basis<F: Field>(f: &F, n: usize) -> Vec<Vec<F::E>> {
        linalg::identity(f, n)
    }

    #[test]
    fn gaussian_binomials() {
        let f = GaloisField::new(3).unwrap();
        let b = unit_basis(&f, 4);
        let mut count = 0;
        for_each_subspace(&f, &b, 4, 2, &CountBudget::default(), &mut |_| {
            count += 1;
            Ok(())
        })
        .unwrap();
        // [4 choose 2]_3 = (3⁴−1)(3³−1)/((3²−1)(3−1)) = 130
        assert_eq!(count, 130);
        let mut pts = 0;
        for_each_projective_point(&f, &b[..3], 4, &CountBudget::default(), &mut |_| {
            pts += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(pts, 13);
    }

    #[test]
    fn stable_lines_of_a_jordan_block() {
        let f = GaloisField::new(5).unwrap();
        // nilpotent Jordan block of size 3: exactly one stable line
        let mut n = linalg::zeros(&f, 3, 3);
        n[1][0] = f.one();
        n[2][1] = f.one();
        let mut count = 0;
        for_each_subspace(&f, &unit_basis(&f, 3), 3, 1, &CountBudget::default(), &mut |s| {
            if is_stable(&f, s, &[&n]) {
                count += 1;
            }
            Ok(())
        })
        .unwrap();
        assert_eq!(count, 1);
    }

    #[test]
    fn budget_is_enforced() {
        let f = GaloisField::new(2).unwrap();
        let b = unit_basis(&f, 10);
        let err = for_each_subspace(&f, &b, 10, 5, &CountBudget { max_log_q: 10 }, &mut |_| Ok(()));
        assert!(matches!(err, Err(HiggsError::BudgetExceeded(_))));
    }
}
