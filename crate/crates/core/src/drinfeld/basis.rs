//! Bases of a truncated weight space, coordinates, and the defining
//! relations of the Higgs algebra checked through ψ.

use num_rational::BigRational;

use super::{psi_word_with_constant, AlgebraElement, Monomial, STRUCTURE_CONSTANT};
use crate::components::enumerate_components;
use crate::error::{HiggsError, Result};
use crate::euler::GeneratorWord;
use crate::field::Rationals;
use crate::linalg;
use crate::p1sheaf::KClass;
use crate::partition::{partitions, z_partitions};

/// Normal-ordered monomials of the given weight with every e-index `≥ floor`.
pub fn monomial_basis(class: KClass, floor: i64) -> Vec<Monomial> {
    let (r, d) = (class.rank, class.degree);
    if r < 0 || (r == 0 && d < 0) {
        return vec![];
    }
    let mut out = Vec::new();
    let max_h = d - r * floor;
    for t in 0..=max_h.max(-1) {
        for e in z_partitions(r as usize, d - t, floor) {
            for h in partitions(t as usize) {
                out.push(Monomial::new(e.clone(), h));
            }
        }
    }
    out
}

/// The ordered words `L(l₁)⋯L(l_r)T(λ₁)T(λ₂)⋯` with `floor ≤ l₁ ≤ ⋯ ≤ l_r`,
/// one per irreducible component of the class with twists `≥ floor`.
pub fn ordered_basis(class: KClass, floor: i64) -> Vec<GeneratorWord> {
    if class == KClass::ZERO {
        return vec![GeneratorWord::unit()];
    }
    enumerate_components(class, floor)
        .into_iter()
        .map(|z| {
            let mut ls = z.twists().to_vec();
            ls.reverse();
            GeneratorWord::lines(&ls).concat(&GeneratorWord::torsion(z.lambda()))
        })
        .collect()
}

/// Coordinates of `x` in the `e_C·P_μ` basis indexed by `basis`.
fn monomial_coords(x: &AlgebraElement, basis: &[Monomial]) -> Vec<BigRational> {
    basis.iter().map(|m| x.p_coefficient(m)).collect()
}

/// Matrix whose column `j` is `ψ(ordered_basis[j])` in the monomial basis.
pub fn change_of_basis_matrix(class: KClass, floor: i64, margin: i64) -> Vec<Vec<BigRational>> {
    let rows = monomial_basis(class, floor);
    let cols: Vec<Vec<BigRational>> = ordered_basis(class, floor)
        .iter()
        .map(|w| monomial_coords(&super::psi_word(w, floor, margin), &rows))
        .collect();
    linalg::transpose(&cols, rows.len())
}

/// Coordinates of `x` in the ordered basis (exact linear solve).
pub fn to_ordered_coords(x: &AlgebraElement, margin: i64) -> Result<Vec<BigRational>> {
    let class = x.weight();
    let rows = monomial_basis(class, x.floor());
    if let Some(m) = x.p_terms().keys().find(|m| !rows.contains(m)) {
        return Err(HiggsError::InvalidInput(format!("monomial {m} outside the weight space")));
    }
    let a = change_of_basis_matrix(class, x.floor(), margin);
    let b = monomial_coords(x, &rows);
    if rows.is_empty() {
        return Ok(vec![]);
    }
    linalg::solve(&Rationals::default(), &a, &b).ok_or(HiggsError::NotInSpan)
}

/// Ordered-basis coordinates of `ψ(word)`.
pub fn word_coords(word: &GeneratorWord, floor: i64, margin: i64) -> Result<Vec<BigRational>> {
    to_ordered_coords(&super::psi_word(word, floor, margin), margin)
}

/// `ψ(Σ cᵢ wᵢ)`; all words must share one class.
pub fn psi_combination(
    terms: &[(BigRational, GeneratorWord)],
    floor: i64,
    margin: i64,
) -> Result<AlgebraElement> {
    psi_combination_with_constant(terms, floor, margin, STRUCTURE_CONSTANT)
}

fn psi_combination_with_constant(
    terms: &[(BigRational, GeneratorWord)],
    floor: i64,
    margin: i64,
    c: i64,
) -> Result<AlgebraElement> {
    let class = terms.first().map(|(_, w)| w.class()).unwrap_or(KClass::ZERO);
    let mut acc = AlgebraElement::zero(class, floor);
    for (coeff, w) in terms {
        if w.class() != class {
            return Err(HiggsError::InvalidInput(format!("word {w} has class {}, expected {class}", w.class())));
        }
        acc = acc.add(&psi_word_with_constant(w, floor, margin, c).scale(coeff))?;
    }
    Ok(acc)
}

/// The defining relations of the Higgs algebra among the generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `T(d)T(d′) = T(d′)T(d)`.
    TorsionCommute { d: usize, d2: usize },
    /// `T(d)L(n) = Σ_{k=0}^{d} (k+1) L(n+k) T(d−k)`.
    TorsionPastLine { d: usize, n: i64 },
    /// `(n−l+2)(L(n−1)L(l+1) − L(l−1)L(n+1)) = (n−l)(L(n)L(l) − L(l−2)L(n+2))`.
    LineExchange { n: i64, l: i64 },
}

impl Relation {
    /// `lhs − rhs` as a combination of words.
    pub fn difference(&self) -> Vec<(BigRational, GeneratorWord)> {
        let q = |v: i64| BigRational::from_integer(v.into());
        let tor = |d: usize| if d == 0 { GeneratorWord::unit() } else { GeneratorWord::torsion(&crate::Partition::new(vec![d])) };
        match *self {
            Relation::TorsionCommute { d, d2 } => {
                vec![(q(1), tor(d).concat(&tor(d2))), (q(-1), tor(d2).concat(&tor(d)))]
            }
            Relation::TorsionPastLine { d, n } => {
                let mut out = vec![(q(1), tor(d).concat(&GeneratorWord::lines(&[n])))];
                for k in 0..=d {
                    out.push((q(-(k as i64 + 1)), GeneratorWord::lines(&[n + k as i64]).concat(&tor(d - k))));
                }
                out
            }
            Relation::LineExchange { n, l } => {
                let a = q(n - l + 2);
                let b = q(n - l);
                vec![
                    (a.clone(), GeneratorWord::lines(&[n - 1, l + 1])),
                    (-a, GeneratorWord::lines(&[l - 1, n + 1])),
                    (-b.clone(), GeneratorWord::lines(&[n, l])),
                    (b, GeneratorWord::lines(&[l - 2, n + 2])),
                ]
            }
        }
    }
}

/// Whether ψ maps the relation to zero in the truncation at `floor`.
pub fn verify_relation(rel: Relation, floor: i64, margin: i64) -> Result<bool> {
    verify_relation_with_constant(rel, floor, margin, STRUCTURE_CONSTANT)
}

/// As [`verify_relation`] with a different constant in `[h_j, e_i] = c·e_{i+j}`
/// (used to confirm that the relations pin the constant down).
pub fn verify_relation_with_constant(rel: Relation, floor: i64, margin: i64, c: i64) -> Result<bool> {
    Ok(psi_combination_with_constant(&rel.difference(), floor, margin, c)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drinfeld::psi_word;
    use crate::field::Field;
    use num_traits::{One, Zero};

    #[test]
    fn basis_sizes_agree() {
        for (r, d, floor) in [(1, 0, -2), (2, 0, -2), (2, 1, -3), (0, 3, 0), (2, -4, -2)] {
            let class = KClass::new(r, d);
            assert_eq!(monomial_basis(class, floor).len(), ordered_basis(class, floor).len(), "{class} {floor}");
        }
        assert_eq!(ordered_basis(KClass::new(2, 0), 0), vec![GeneratorWord::lines(&[0, 0])]);
    }

    #[test]
    fn change_of_basis_is_invertible() {
        let m = change_of_basis_matrix(KClass::new(2, 1), -2, 0);
        let f = Rationals::default();
        assert!(!f.is_zero(&linalg::det(&f, &m)));
    }

    #[test]
    fn relations_hold_and_pin_the_constant() {
        assert!(verify_relation(Relation::TorsionCommute { d: 1, d2: 2 }, -3, 0).unwrap());
        assert!(verify_relation(Relation::TorsionPastLine { d: 2, n: -1 }, -4, 0).unwrap());
        assert!(verify_relation(Relation::LineExchange { n: 1, l: -2 }, -4, 0).unwrap());
        let rel = Relation::TorsionPastLine { d: 1, n: 0 };
        assert!(!verify_relation_with_constant(rel, -3, 0, 1).unwrap());
        assert!(!verify_relation_with_constant(rel, -3, 0, 4).unwrap());
    }

    #[test]
    fn margin_does_not_change_products() {
        let w: GeneratorWord = "T2 L1 L-1 T1".parse().unwrap();
        assert_eq!(psi_word(&w, -3, 0), psi_word(&w, -3, 5));
    }

    #[test]
    fn coordinates_of_a_basis_word() {
        let class = KClass::new(2, 0);
        let basis = ordered_basis(class, -2);
        let idx = basis.iter().position(|w| w.to_string() == "L-1 L1").unwrap();
        let c = word_coords(&basis[idx], -2, 0).unwrap();
        for (i, v) in c.iter().enumerate() {
            assert_eq!(v.is_one(), i == idx);
            assert!(i == idx || v.is_zero());
        }
    }
}
