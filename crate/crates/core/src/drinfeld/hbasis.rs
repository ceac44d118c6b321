//! Change of variables between the h-generators and the series
//! `Σ_l P_l t^l = exp(Σ_j h_j t^j / j)` on the commutative h-subalgebra.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::partition::{partitions, Partition};

/// A polynomial in commuting indexed variables, keyed by the multiset of
/// variable indices.
pub(crate) type CommPoly = BTreeMap<Partition, BigRational>;

pub(crate) fn poly_mul(a: &CommPoly, b: &CommPoly) -> CommPoly {
    let mut out = CommPoly::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let mut parts = ka.parts().to_vec();
            parts.extend_from_slice(kb.parts());
            let e = out.entry(Partition::new(parts)).or_insert_with(BigRational::zero);
            *e += ca * cb;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn poly_one() -> CommPoly {
    let mut p = CommPoly::new();
    p.insert(Partition::empty(), BigRational::one());
    p
}

/// `z_λ = Π_i i^{m_i} m_i!` for the multiplicities `m_i` of `λ`.
pub(crate) fn z_lambda(lambda: &Partition) -> BigInt {
    let mut z = BigInt::one();
    let parts = lambda.parts();
    let mut i = 0;
    while i < parts.len() {
        let j = parts[i];
        let m = parts[i..].iter().take_while(|&&p| p == j).count();
        for k in 1..=m {
            z *= BigInt::from(j) * BigInt::from(k);
        }
        i += m;
    }
    z
}

/// `P_l` as a polynomial in the h's: `Σ_{λ ⊢ l} h_λ / z_λ`.
pub(crate) fn p_in_h(l: usize) -> CommPoly {
    partitions(l)
        .into_iter()
        .map(|lambda| {
            let c = BigRational::new(BigInt::one(), z_lambda(&lambda));
            (lambda, c)
        })
        .collect()
}

/// Expand a product `P_μ` into the h-variables.
pub(crate) fn p_mu_in_h(mu: &Partition) -> CommPoly {
    mu.parts().iter().fold(poly_one(), |acc, &l| poly_mul(&acc, &p_in_h(l)))
}

/// `h_n` as a polynomial in the P's, from `n·P_n = Σ_{j=1}^{n} h_j P_{n−j}`.
fn h_in_p_table(n: usize) -> Vec<CommPoly> {
    let mut table: Vec<CommPoly> = vec![CommPoly::new()];
    for k in 1..=n {
        let mut hk = CommPoly::new();
        hk.insert(Partition::new(vec![k]), BigRational::from_integer(BigInt::from(k)));
        for (j, hj) in table.iter().enumerate().take(k).skip(1) {
            let mut pk = CommPoly::new();
            pk.insert(Partition::new(vec![k - j]), BigRational::one());
            for (key, c) in poly_mul(hj, &pk) {
                let e = hk.entry(key).or_insert_with(BigRational::zero);
                *e -= c;
            }
        }
        hk.retain(|_, v| !v.is_zero());
        table.push(hk);
    }
    table
}

/// Expand a product `h_λ` into the P-variables.
pub(crate) fn h_lambda_in_p(lambda: &Partition) -> CommPoly {
    let table = h_in_p_table(lambda.parts().first().copied().unwrap_or(0));
    lambda.parts().iter().fold(poly_one(), |acc, &j| poly_mul(&acc, &table[j]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_are_inverse() {
        for n in 1..=5 {
            for lambda in partitions(n) {
                let mut back = CommPoly::new();
                for (mu, c) in h_lambda_in_p(&lambda) {
                    for (nu, d) in p_mu_in_h(&mu) {
                        *back.entry(nu).or_insert_with(BigRational::zero) += &c * d;
                    }
                }
                back.retain(|_, v| !v.is_zero());
                let mut expected = CommPoly::new();
                expected.insert(lambda.clone(), BigRational::one());
                assert_eq!(back, expected, "{lambda:?}");
            }
        }
    }

    #[test]
    fn low_degree_values() {
        // h₂ = 2P₂ − P₁²
        let h2 = h_lambda_in_p(&Partition::new(vec![2]));
        assert_eq!(h2[&Partition::new(vec![2])], BigRational::from_integer(2.into()));
        assert_eq!(h2[&Partition::new(vec![1, 1])], BigRational::from_integer((-1).into()));
    }
}
