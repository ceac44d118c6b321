//! Exact polynomial fits of point counts in `q`, evaluated at `q = 1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{HiggsError, Result};

/// Point counts at several field sizes, with the minimal-degree polynomial
/// through all of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QCountSeries {
    points: Vec<(u64, u128)>,
    coeffs: Vec<BigRational>,
}

#[derive(Serialize)]
struct CsvRow {
    q: u64,
    count: String,
}

impl QCountSeries {
    /// Fit counts with a polynomial of degree at most `bound`. At least one
    /// count beyond the interpolation nodes must confirm the fit.
    pub fn fit(points: Vec<(u64, u128)>, bound: usize) -> Result<Self> {
        let mut sorted = points;
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(HiggsError::InterpolationInconsistent {
                bound,
                detail: "two different counts at the same q".into(),
            });
        }
        let cap = bound.min(sorted.len().saturating_sub(2));
        let xs: Vec<BigRational> = sorted.iter().map(|&(q, _)| BigRational::from_integer(BigInt::from(q))).collect();
        let ys: Vec<BigRational> = sorted.iter().map(|&(_, c)| BigRational::from_integer(BigInt::from(c))).collect();
        for deg in 0..=cap {
            let coeffs = interpolate(&xs[..=deg], &ys[..=deg]);
            if xs.iter().zip(&ys).all(|(x, y)| eval(&coeffs, x) == *y) {
                return Ok(Self { points: sorted, coeffs });
            }
        }
        Err(HiggsError::InterpolationInconsistent {
            bound: cap,
            detail: format!("counts {sorted:?}"),
        })
    }

    pub fn points(&self) -> &[(u64, u128)] {
        &self.points
    }

    /// Coefficients of the fitted polynomial, constant term first.
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// The fitted polynomial at `q = 1`, the Euler characteristic.
    pub fn value_at_one(&self) -> BigRational {
        self.coeffs.iter().fold(BigRational::zero(), |a, c| a + c)
    }

    /// The raw `(q, count)` pairs as CSV.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for &(q, c) in &self.points {
            w.serialize(CsvRow { q, count: c.to_string() })
                .map_err(|e| HiggsError::InvalidInput(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| HiggsError::InvalidInput(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| HiggsError::InvalidInput(e.to_string()))
    }
}

fn eval(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    coeffs.iter().rev().fold(BigRational::zero(), |a, c| a * x + c)
}

/// Coefficients (constant first) of the interpolating polynomial, via
/// Newton divided differences.
fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> Vec<BigRational> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    // expand Σ dd[i] Π_{k<i} (x − x_k) by Horner from the top
    let mut coeffs = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        // coeffs ← coeffs·(x − x_i) + dd[i]
        let mut next = vec![BigRational::zero(); n];
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] += c;
            }
            next[k] -= c * &xs[i];
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    if coeffs.iter().all(Zero::is_zero) {
        coeffs.truncate(1);
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn projective_line_counts() {
        let s = QCountSeries::fit(vec![(2, 3), (3, 4), (4, 5), (5, 6)], 4).unwrap();
        assert_eq!(s.coefficients(), &[r(1), r(1)]);
        assert_eq!(s.value_at_one(), r(2));
        assert_eq!(s.degree(), 1);
    }

    #[test]
    fn grassmannian_counts() {
        // Gr(2,4): q⁴ + q³ + 2q² + q + 1, χ = 6
        let g = |q: u128| q.pow(4) + q.pow(3) + 2 * q * q + q + 1;
        let pts = [2u64, 3, 4, 5, 7, 8, 9].iter().map(|&q| (q, g(q as u128))).collect();
        let s = QCountSeries::fit(pts, 6).unwrap();
        assert_eq!(s.value_at_one(), r(6));
        assert_eq!(s.degree(), 4);
    }

    #[test]
    fn inconsistent_counts_are_reported() {
        let err = QCountSeries::fit(vec![(2, 1), (3, 5), (4, 2), (5, 9)], 1);
        assert!(matches!(err, Err(HiggsError::InterpolationInconsistent { .. })));
        // exactly determined fits are never accepted without a check point
        assert!(QCountSeries::fit(vec![(2, 1), (3, 5)], 4).is_err());
    }

    #[test]
    fn csv_dump() {
        let s = QCountSeries::fit(vec![(2, 1), (3, 1), (5, 1)], 2).unwrap();
        assert_eq!(s.to_csv().unwrap(), "q,count\n2,1\n3,1\n5,1\n");
    }
}
