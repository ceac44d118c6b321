//! Integer partitions, ℤ-valued partitions (splitting types), transpose and
//! the dominance order.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HiggsError, Result};

/// A partition: weakly decreasing positive parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Build from parts in any order; zero parts are dropped.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// The empty partition.
    pub fn empty() -> Self {
        Partition(vec![])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// `|λ|`, the sum of parts.
    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// `ℓ(λ)`, the number of parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The conjugate partition `λ'`.
    pub fn transpose(&self) -> Partition {
        let m = self.0.first().copied().unwrap_or(0);
        Partition((1..=m).map(|i| self.0.iter().filter(|&&p| p >= i).count()).collect())
    }

    /// Every part reduced by one (`λ̄` in the ladder lemma).
    pub fn reduced(&self) -> Partition {
        Partition::new(self.0.iter().map(|&p| p - 1).collect())
    }

    /// Every part increased by one.
    pub fn raised(&self) -> Partition {
        Partition(self.0.iter().map(|&p| p + 1).collect())
    }

    /// Dominance order (partial): `Some(Less)` when `self ⊴ other`, strictly.
    pub fn dominance_cmp(&self, other: &Partition) -> Option<Ordering> {
        if self.size() != other.size() {
            return None;
        }
        if self == other {
            return Some(Ordering::Equal);
        }
        let n = self.len().max(other.len());
        let (mut a, mut b) = (0usize, 0usize);
        let (mut le, mut ge) = (true, true);
        for i in 0..n {
            a += self.0.get(i).copied().unwrap_or(0);
            b += other.0.get(i).copied().unwrap_or(0);
            le &= a <= b;
            ge &= a >= b;
        }
        match (le, ge) {
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            _ => None,
        }
    }

    /// `self ⊴ other` in dominance order (reflexive).
    pub fn dominated_by(&self, other: &Partition) -> bool {
        matches!(self.dominance_cmp(other), Some(Ordering::Less | Ordering::Equal))
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = HiggsError;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        if v.contains(&0) || v.windows(2).any(|w| w[0] < w[1]) {
            return Err(HiggsError::InvalidInput(format!(
                "partition parts must be positive and weakly decreasing: {v:?}"
            )));
        }
        Ok(Partition(v))
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// All partitions of `n`, in reverse lexicographic order (`(n)` first).
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Partitions of `n` with parts in `1..=max_part` and at most `max_len` parts.
pub fn partitions_bounded(n: usize, max_len: usize, max_part: usize) -> Vec<Partition> {
    partitions(n)
        .into_iter()
        .filter(|p| p.len() <= max_len && p.parts().first().is_none_or(|&m| m <= max_part))
        .collect()
}

/// Weakly decreasing integer sequences of length `r`, entries `≥ floor`,
/// with sum `total` (ℤ-partitions / splitting types).
pub fn z_partitions(r: usize, total: i64, floor: i64) -> Vec<Vec<i64>> {
    fn rec(r: usize, total: i64, floor: i64, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if r == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        // the remaining r-1 entries are ≥ floor, so this entry ≤ total-(r-1)·floor
        let hi = max.min(total - (r as i64 - 1) * floor);
        // and entries are ≤ this one, so this entry ≥ ceil(total / r)
        let lo = floor.max(total.div_euclid(r as i64) + i64::from(total.rem_euclid(r as i64) != 0));
        let mut v = hi;
        while v >= lo {
            cur.push(v);
            rec(r - 1, total - v, floor, v, cur, out);
            cur.pop();
            v -= 1;
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        if total == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(r, total, floor, i64::MAX, &mut Vec::new(), &mut out);
    out
}

/// Number of partitions `p(n)`.
pub fn partition_count(n: usize) -> usize {
    let mut p = vec![0usize; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for m in part..=n {
            p[m] += p[m - part];
        }
    }
    p[n]
}

/// Check a twist list is weakly decreasing.
pub fn check_decreasing(v: &[i64]) -> Result<()> {
    if v.windows(2).any(|w| w[0] < w[1]) {
        return Err(HiggsError::InvalidInput(format!("twists must be weakly decreasing: {v:?}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts_match_generating_function() {
        for n in 0..12 {
            assert_eq!(partitions(n).len(), partition_count(n));
        }
        assert_eq!(partition_count(3), 3);
        assert_eq!(partition_count(10), 42);
    }

    #[test]
    fn transpose_is_involutive() {
        for p in partitions(7) {
            assert_eq!(p.transpose().transpose(), p);
            assert_eq!(p.transpose().size(), 7);
        }
        assert_eq!(Partition::new(vec![2, 1]).transpose(), Partition::new(vec![2, 1]));
        assert_eq!(Partition::new(vec![3]).transpose(), Partition::new(vec![1, 1, 1]));
    }

    #[test]
    fn dominance_reverses_under_transpose() {
        for a in partitions(6) {
            for b in partitions(6) {
                assert_eq!(a.dominated_by(&b), b.transpose().dominated_by(&a.transpose()));
            }
        }
        let a = Partition::new(vec![3, 3]);
        let b = Partition::new(vec![4, 1, 1]);
        assert_eq!(a.dominance_cmp(&b), None);
    }

    #[test]
    fn z_partitions_enumerate_splitting_types() {
        assert_eq!(z_partitions(1, 0, -2), vec![vec![0]]);
        assert_eq!(z_partitions(2, 0, -1), vec![vec![1, -1], vec![0, 0]]);
        assert_eq!(z_partitions(0, 0, 0), vec![Vec::<i64>::new()]);
        assert!(z_partitions(2, -5, -2).is_empty());
        for v in z_partitions(3, 2, -3) {
            assert!(v.windows(2).all(|w| w[0] >= w[1]));
            assert_eq!(v.iter().sum::<i64>(), 2);
            assert!(v.iter().all(|&x| x >= -3));
        }
    }

    #[test]
    fn serde_rejects_unsorted_parts() {
        assert!(serde_json::from_str::<Partition>("[1,2]").is_err());
        let p: Partition = serde_json::from_str("[2,1]").unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), "[2,1]");
    }
}
