//! Rewriting a word into ordered words using only the defining relations.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{HiggsError, Result};
use crate::euler::{Generator, GeneratorWord};

/// Maximum number of single rewriting steps before giving up.
const STEP_BUDGET: usize = 200_000;

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// One rewriting step at the leftmost disorder, or `None` if ordered.
fn step(word: &[Generator]) -> Option<Vec<(BigRational, Vec<Generator>)>> {
    for i in 0..word.len().saturating_sub(1) {
        let splice = |mid: Vec<Generator>| {
            let mut v = word[..i].to_vec();
            v.extend(mid);
            v.extend_from_slice(&word[i + 2..]);
            v
        };
        match (word[i], word[i + 1]) {
            (Generator::Tor(d), Generator::Line(n)) => {
                let out = (0..=d)
                    .map(|k| {
                        let mut mid = vec![Generator::Line(n + k as i64)];
                        if d > k {
                            mid.push(Generator::Tor(d - k));
                        }
                        (q(k as i64 + 1), splice(mid))
                    })
                    .collect();
                return Some(out);
            }
            (Generator::Tor(a), Generator::Tor(b)) if a < b => {
                return Some(vec![(q(1), splice(vec![Generator::Tor(b), Generator::Tor(a)]))]);
            }
            (Generator::Line(a), Generator::Line(b)) if a > b => {
                let line2 = |x: i64, y: i64| splice(vec![Generator::Line(x), Generator::Line(y)]);
                let mut out = vec![(q(1), line2(b - 2, a + 2))];
                let s = a + b;
                let k = s.div_euclid(2);
                if s.rem_euclid(2) == 1 {
                    let c = q(a - b + 2);
                    out.push((c.clone(), line2(k, k + 1)));
                    out.push((-c, line2(k - 1, k + 2)));
                } else {
                    let c = q(a - b + 2) / q(2);
                    out.push((c.clone(), line2(k, k)));
                    out.push((-c, line2(k - 2, k + 2)));
                }
                return Some(out);
            }
            _ => {}
        }
    }
    None
}

/// Express `word` as a combination of ordered words using the relations;
/// ordered words whose first line index is below `floor` vanish in the
/// truncation and are dropped.
pub fn rewrite_ordered(word: &GeneratorWord, floor: i64) -> Result<BTreeMap<GeneratorWord, BigRational>> {
    let mut pending: BTreeMap<Vec<Generator>, BigRational> = BTreeMap::new();
    pending.insert(word.gens().to_vec(), q(1));
    let mut done: BTreeMap<GeneratorWord, BigRational> = BTreeMap::new();
    let mut steps = 0usize;
    while let Some((w, c)) = pending.pop_first() {
        if c.is_zero() {
            continue;
        }
        steps += 1;
        if steps > STEP_BUDGET {
            return Err(HiggsError::BudgetExceeded(format!("rewriting {word}")));
        }
        match step(&w) {
            Some(out) => {
                for (k, v) in out {
                    *pending.entry(v).or_insert_with(BigRational::zero) += &c * k;
                }
            }
            None => {
                if matches!(w.first(), Some(Generator::Line(l)) if *l < floor) {
                    continue;
                }
                let e = done.entry(GeneratorWord::new(w)?).or_insert_with(BigRational::zero);
                *e += c;
            }
        }
    }
    done.retain(|_, v| !v.is_zero());
    Ok(done)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drinfeld::{ordered_basis, word_coords};

    #[test]
    fn odd_line_exchange() {
        let out = rewrite_ordered(&"L1 L0".parse().unwrap(), -10).unwrap();
        assert_eq!(out.len(), 3);
        assert_eq!(out[&"L-2 L3".parse().unwrap()], q(1));
        assert_eq!(out[&"L0 L1".parse().unwrap()], q(3));
        assert_eq!(out[&"L-1 L2".parse().unwrap()], q(-3));
    }

    #[test]
    fn torsion_moves_right() {
        let out = rewrite_ordered(&"T1 L0".parse().unwrap(), -5).unwrap();
        assert_eq!(out[&"L0 T1".parse().unwrap()], q(1));
        assert_eq!(out[&"L1".parse().unwrap()], q(2));
    }

    #[test]
    fn agrees_with_linear_algebra() {
        let floor = -3;
        for s in ["L2 L-1", "L1 L1 L-2", "T2 L0 L-1", "T1 T2 L1"] {
            let w: GeneratorWord = s.parse().unwrap();
            let basis = ordered_basis(w.class(), floor);
            let coords = word_coords(&w, floor, 0).unwrap();
            let rw = rewrite_ordered(&w, floor).unwrap();
            for (b, c) in basis.iter().zip(&coords) {
                assert_eq!(rw.get(b).cloned().unwrap_or_else(BigRational::zero), *c, "{s} at {b}");
            }
            assert!(rw.keys().all(|k| basis.contains(k)));
        }
    }
}
