//! The positive part of U(ŝl₂) in Drinfeld generators `e_i` (i ∈ ℤ) and
//! `h_j` (j ≥ 1), truncated by a floor on e-indices within a fixed weight.
//!
//! Elements are exact rational combinations of normal-ordered monomials
//! `e_{i₁}⋯e_{i_r} h_{j₁}⋯h_{j_s}`; the only commutation needed is
//! `h_j e_i = e_i h_j + 2 e_{i+j}` (e's commute, h's commute).

mod basis;
mod hbasis;
mod rewrite;

pub use basis::{
    change_of_basis_matrix, monomial_basis, ordered_basis, psi_combination, to_ordered_coords,
    verify_relation, verify_relation_with_constant, word_coords, Relation,
};
pub use rewrite::rewrite_ordered;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{HiggsError, Result};
use crate::euler::{Generator, GeneratorWord};
use crate::field::{parse_rational, render_rational};
use crate::p1sheaf::KClass;
use crate::partition::{partitions, Partition};
use hbasis::{h_lambda_in_p, p_mu_in_h};

/// The sl₂ structure constant in `[h_j, e_i] = c·e_{i+j}`.
pub const STRUCTURE_CONSTANT: i64 = 2;

/// A normal-ordered monomial: e-factors (weakly decreasing indices) on the
/// left, h-factors (a partition of positive indices) on the right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    e: Vec<i64>,
    h: Partition,
}

impl Monomial {
    pub fn new(mut e: Vec<i64>, h: Partition) -> Self {
        e.sort_unstable_by(|a, b| b.cmp(a));
        Self { e, h }
    }

    pub fn unit() -> Self {
        Self::default()
    }

    pub fn e_indices(&self) -> &[i64] {
        &self.e
    }

    pub fn h_parts(&self) -> &Partition {
        &self.h
    }

    pub fn h_degree(&self) -> usize {
        self.h.size()
    }

    /// Smallest e-index, if any.
    pub fn min_e(&self) -> Option<i64> {
        self.e.last().copied()
    }

    /// `(#e)·α₁ + (Σe + Σh)·δ` as a class.
    pub fn weight(&self) -> KClass {
        KClass::new(self.e.len() as i64, self.e.iter().sum::<i64>() + self.h.size() as i64)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e.is_empty() && self.h.is_empty() {
            return write!(f, "1");
        }
        let mut parts: Vec<String> = self.e.iter().map(|i| format!("e{i}")).collect();
        parts.extend(self.h.parts().iter().map(|j| format!("h{j}")));
        write!(f, "{}", parts.join("·"))
    }
}

/// An exact combination of monomials of one weight, all e-indices `≥ floor`.
///
/// Terms are stored in the basis `e_C·P_μ` (`P_μ = Π P_{μᵢ}`), in which
/// `ψ` of a line is a short sum; [`AlgebraElement::h_terms`] gives the
/// coefficients in the normal-ordered h-monomials. Both bases span the same
/// truncated weight space because the change of variables does not touch
/// e-indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    weight: KClass,
    floor: i64,
    terms: BTreeMap<Monomial, BigRational>,
}

impl AlgebraElement {
    pub fn zero(weight: KClass, floor: i64) -> Self {
        Self { weight, floor, terms: BTreeMap::new() }
    }

    pub fn unit(floor: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::unit(), BigRational::one());
        Self { weight: KClass::ZERO, floor, terms }
    }

    /// Build from coefficients of normal-ordered h-monomials; monomials of
    /// the wrong weight are rejected and monomials below the floor dropped.
    pub fn from_terms(
        weight: KClass,
        floor: i64,
        terms: impl IntoIterator<Item = (Monomial, BigRational)>,
    ) -> Result<Self> {
        let mut x = Self::zero(weight, floor);
        for (m, c) in terms {
            if m.weight() != weight {
                return Err(HiggsError::InvalidInput(format!("monomial {m} has weight {}", m.weight())));
            }
            for (mu, d) in h_lambda_in_p(&m.h) {
                x.add_term(Monomial { e: m.e.clone(), h: mu }, &c * d);
            }
        }
        Ok(x)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if m.min_e().is_some_and(|e| e < self.floor) || c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn weight(&self) -> KClass {
        self.weight
    }

    pub fn floor(&self) -> i64 {
        self.floor
    }

    /// Coefficients in the `e_C·P_μ` basis (the `h` slot of each key holds μ).
    pub fn p_terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.terms
    }

    /// Coefficients in the normal-ordered h-monomials.
    pub fn h_terms(&self) -> BTreeMap<Monomial, BigRational> {
        let mut out: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in &self.terms {
            for (lambda, d) in p_mu_in_h(&m.h) {
                *out.entry(Monomial { e: m.e.clone(), h: lambda }).or_insert_with(BigRational::zero) += c * d;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of a normal-ordered h-monomial.
    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.h_terms().remove(m).unwrap_or_else(BigRational::zero)
    }

    /// Coefficient of `e_C·P_μ`.
    pub fn p_coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Largest h-degree among the terms.
    pub fn max_h_degree(&self) -> usize {
        self.terms.keys().map(Monomial::h_degree).max().unwrap_or(0)
    }

    /// The same element viewed at another floor: re-truncated when raising;
    /// when lowering, only valid for elements with no terms near the floor.
    pub fn with_floor(&self, floor: i64) -> Self {
        let mut x = Self::zero(self.weight, floor);
        for (m, c) in &self.terms {
            x.add_term(m.clone(), c.clone());
        }
        x
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut x = self.clone();
        if x.is_zero() {
            x.weight = other.weight;
        }
        for (m, c) in &other.terms {
            x.add_term(m.clone(), c.clone());
        }
        Ok(x)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut x = Self::zero(self.weight, self.floor);
        for (m, v) in &self.terms {
            x.add_term(m.clone(), v * c);
        }
        x
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-BigRational::one()))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.floor != other.floor {
            return Err(HiggsError::InvalidInput("elements have different floors".into()));
        }
        if self.weight != other.weight && !self.is_zero() && !other.is_zero() {
            return Err(HiggsError::InvalidInput("elements have different weights".into()));
        }
        Ok(())
    }

    /// Truncated product `self · other` at `self`'s floor. Exact whenever
    /// `other` retains every term whose e-indices could climb back above the
    /// floor, i.e. `other` is complete down to `floor − self.max_h_degree()`;
    /// [`psi_word`] arranges this automatically.
    pub fn multiply(&self, other: &Self) -> Self {
        multiply_with_constant(self, other, self.floor, STRUCTURE_CONSTANT)
    }

    /// `self · ψ(word)`, exact: each generator is expanded deep enough that
    /// no dropped term can re-enter the window, plus `margin` extra levels.
    pub fn multiply_word(&self, word: &GeneratorWord, margin: i64) -> Self {
        multiply_word_with_constant(self, word, margin, STRUCTURE_CONSTANT)
    }
}

fn multiply_word_with_constant(x: &AlgebraElement, word: &GeneratorWord, margin: i64, c: i64) -> AlgebraElement {
    let mut acc = x.clone();
    for g in word.gens() {
        let deep = x.floor - acc.max_h_degree() as i64 - margin.max(0);
        let y = psi_generator(*g, deep);
        acc = multiply_with_constant(&acc, &y, x.floor, c);
    }
    acc
}

/// `C(c+k−1, k)`: the coefficient of `t^k` in `(1 − t)^{−c}`, i.e. of the
/// index shift by `k` when `P(t)` is moved past an e-factor.
fn shift_weight(c: i64, k: usize) -> BigInt {
    let mut w = BigInt::one();
    for i in 0..k as i64 {
        w = w * BigInt::from(c + i) / BigInt::from(i + 1);
    }
    w
}

/// Normal ordering of `P_μ · e_C`: each `P_m` splits as `Σ` over shifts
/// `k_i` of every e-factor plus a remainder `P_j` (`Σk_i + j = m`), with
/// weight `Π C(c+k_i−1, k_i)`, since conjugation by `P(t)` is multiplicative.
fn p_past_e(mu: &[usize], e: &[i64], c: i64) -> Vec<(Vec<i64>, Vec<usize>, BigInt)> {
    let mut state: HashMap<(Vec<i64>, Vec<usize>), BigInt> = HashMap::new();
    state.insert((e.to_vec(), vec![]), BigInt::one());
    let max = mu.iter().copied().max().unwrap_or(0);
    let weights: Vec<BigInt> = (0..=max).map(|k| shift_weight(c, k)).collect();
    for &m in mu {
        let mut next: HashMap<(Vec<i64>, Vec<usize>), BigInt> = HashMap::new();
        for ((es, rest), coeff) in state {
            distribute(&es, m, &weights, &mut |es2, j, w| {
                let mut r = rest.clone();
                if j > 0 {
                    r.push(j);
                    r.sort_unstable_by(|a, b| b.cmp(a));
                }
                let mut es2 = es2.to_vec();
                es2.sort_unstable_by(|a, b| b.cmp(a));
                *next.entry((es2, r)).or_insert_with(BigInt::zero) += &coeff * w;
            });
        }
        state = next;
    }
    state.into_iter().map(|((e, p), v)| (e, p, v)).collect()
}

/// Enumerate shifts `k_i ≥ 0` of each entry with `Σk_i ≤ m`, reporting the
/// shifted entries, the remainder `m − Σk_i` and the weight `Π w[k_i]`.
fn distribute(es: &[i64], m: usize, w: &[BigInt], emit: &mut dyn FnMut(&[i64], usize, BigInt)) {
    fn rec(
        es: &[i64],
        pos: usize,
        left: usize,
        cur: &mut Vec<i64>,
        acc: BigInt,
        w: &[BigInt],
        emit: &mut dyn FnMut(&[i64], usize, BigInt),
    ) {
        if pos == es.len() {
            emit(cur, left, acc);
            return;
        }
        for k in 0..=left {
            cur.push(es[pos] + k as i64);
            rec(es, pos + 1, left - k, cur, &acc * &w[k], w, emit);
            cur.pop();
        }
    }
    rec(es, 0, m, &mut Vec::with_capacity(es.len()), BigInt::one(), w, emit);
}

fn multiply_with_constant(x: &AlgebraElement, y: &AlgebraElement, floor: i64, c: i64) -> AlgebraElement {
    let weight = x.weight + y.weight;
    let mut out = AlgebraElement::zero(weight, floor);
    let mut memo: HashMap<(Partition, Vec<i64>), Vec<(Vec<i64>, Vec<usize>, BigInt)>> = HashMap::new();
    for (mx, cx) in &x.terms {
        if mx.min_e().is_some_and(|e| e < floor) {
            continue;
        }
        let budget = mx.h_degree() as i64;
        for (my, cy) in &y.terms {
            // each e of my must climb to the floor using at most |μ| in total
            let need: i64 = my.e.iter().map(|&e| (floor - e).max(0)).sum();
            if need > budget {
                continue;
            }
            let expansions = memo
                .entry((mx.h.clone(), my.e.clone()))
                .or_insert_with(|| p_past_e(mx.h.parts(), &my.e, c));
            for (es, rest, k) in expansions.iter() {
                if es.last().is_some_and(|&e| e < floor) {
                    continue;
                }
                let mut e = mx.e.clone();
                e.extend_from_slice(es);
                let mut h = rest.clone();
                h.extend_from_slice(my.h.parts());
                let coeff = cx * cy * BigRational::from_integer(k.clone());
                out.add_term(Monomial::new(e, Partition::new(h)), coeff);
            }
        }
    }
    out
}

/// `P_l = Σ_{λ ⊢ l} h_λ / z_λ` (with `P_0 = 1`): the coefficients of
/// `exp(Σ_j h_j t^j / j)`, the group-like normalization under which
/// moving `P(t)` past `e_i` shifts by `(1 − t·shift)^{−2}`, which is what
/// the torsion-past-line relation requires.
pub fn p_l(l: usize) -> AlgebraElement {
    if l == 0 {
        return AlgebraElement::unit(0);
    }
    psi_generator(Generator::Tor(l), 0)
}

/// The unnormalized sum `Σ_{λ ⊢ l} h_λ`; kept to demonstrate that it does
/// not satisfy the torsion-past-line relation beyond `d = 1`.
pub fn p_l_unnormalized(l: usize, floor: i64) -> AlgebraElement {
    let terms = partitions(l).into_iter().map(|lambda| (Monomial::new(vec![], lambda), BigRational::one()));
    AlgebraElement::from_terms(KClass::new(0, l as i64), floor, terms).expect("weights match by construction")
}

/// `ψ(T(d)) = P_d`; `ψ(L(n)) = Σ_{m=0}^{n−floor} e_{n−m} P_m`.
pub fn psi_generator(g: Generator, floor: i64) -> AlgebraElement {
    match g {
        Generator::Tor(d) => {
            let mut x = AlgebraElement::zero(KClass::new(0, d as i64), floor);
            x.add_term(Monomial::new(vec![], Partition::new(vec![d])), BigRational::one());
            x
        }
        Generator::Line(n) => {
            let mut x = AlgebraElement::zero(KClass::new(1, n), floor);
            for m in 0..=(n - floor).max(-1) {
                let p = if m == 0 { vec![] } else { vec![m as usize] };
                x.add_term(Monomial::new(vec![n - m], Partition::new(p)), BigRational::one());
            }
            x
        }
    }
}

/// Exact truncated image `ψ(word)` at the given floor.
pub fn psi_word(word: &GeneratorWord, floor: i64, margin: i64) -> AlgebraElement {
    AlgebraElement::unit(floor).multiply_word(word, margin)
}

pub(crate) fn psi_word_with_constant(word: &GeneratorWord, floor: i64, margin: i64, c: i64) -> AlgebraElement {
    multiply_word_with_constant(&AlgebraElement::unit(floor), word, margin, c)
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.h_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in terms.iter().rev() {
            if c.is_negative() {
                write!(f, "{}", if first { "-" } else { " - " })?;
            } else if !first {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}·{m}", render_rational(&a))?;
            }
            first = false;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    e: Vec<i64>,
    h: Vec<usize>,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    weight: KClass,
    floor: i64,
    terms: Vec<TermJson>,
}

impl Serialize for AlgebraElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementJson {
            weight: self.weight,
            floor: self.floor,
            terms: self
                .h_terms()
                .iter()
                .map(|(m, c)| TermJson { e: m.e.clone(), h: m.h.parts().to_vec(), c: render_rational(c) })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ElementJson::deserialize(d)?;
        let terms = raw
            .terms
            .into_iter()
            .map(|t| Ok((Monomial::new(t.e, Partition::new(t.h)), parse_rational(&t.c)?)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        AlgebraElement::from_terms(raw.weight, raw.floor, terms).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn mono(e: &[i64], h: &[usize]) -> Monomial {
        Monomial::new(e.to_vec(), Partition::new(h.to_vec()))
    }

    #[test]
    fn commutation_examples() {
        let floor = -5;
        let h1 = psi_generator(Generator::Tor(1), floor);
        let e0 = AlgebraElement::from_terms(KClass::new(1, 0), floor, [(mono(&[0], &[]), q(1))]).unwrap();
        let p = h1.multiply(&e0);
        assert_eq!(p.h_terms().len(), 2);
        assert_eq!(p.coefficient(&mono(&[0], &[1])), q(1));
        assert_eq!(p.coefficient(&mono(&[1], &[])), q(2));
        let e1 = AlgebraElement::from_terms(KClass::new(1, 1), floor, [(mono(&[1], &[]), q(1))]).unwrap();
        assert_eq!(e0.multiply(&e1), e1.multiply(&e0));
        let h2 = AlgebraElement::from_terms(KClass::new(0, 2), floor, [(mono(&[], &[2]), q(1))]).unwrap();
        assert_eq!(h1.multiply(&h2), h2.multiply(&h1));
    }

    #[test]
    fn symmetric_polynomials() {
        let half = q(1) / q(2);
        assert_eq!(p_l(1).coefficient(&mono(&[], &[1])), q(1));
        let p2 = p_l(2);
        assert_eq!(p2.coefficient(&mono(&[], &[2])), half);
        assert_eq!(p2.coefficient(&mono(&[], &[1, 1])), half);
        let p3 = p_l(3);
        assert_eq!(p3.coefficient(&mono(&[], &[3])), q(1) / q(3));
        assert_eq!(p3.coefficient(&mono(&[], &[2, 1])), half);
        assert_eq!(p3.coefficient(&mono(&[], &[1, 1, 1])), q(1) / q(6));
        assert_eq!(p_l_unnormalized(2, 0).coefficient(&mono(&[], &[1, 1])), q(1));
    }

    #[test]
    fn only_the_normalized_sum_shifts_like_relation_two() {
        // [P₂, e₀] must equal 2·e₁P₁ + 3·e₂ for T(2)L(n) to expand with (k+1)
        let floor = -6;
        let e0 = AlgebraElement::from_terms(KClass::new(1, 0), floor, [(mono(&[0], &[]), q(1))]).unwrap();
        let comm = |p: &AlgebraElement| p.multiply(&e0).sub(&e0.multiply(p)).unwrap().h_terms();
        let good = comm(&p_l(2).with_floor(floor));
        assert_eq!(good.len(), 2);
        assert_eq!(good[&mono(&[1], &[1])], q(2));
        assert_eq!(good[&mono(&[2], &[])], q(3));
        let bad = comm(&p_l_unnormalized(2, floor));
        assert_eq!(bad[&mono(&[1], &[1])], q(4));
        assert_eq!(bad[&mono(&[2], &[])], q(6));
    }

    #[test]
    fn psi_of_lines() {
        let x = psi_generator(Generator::Line(0), -2);
        assert_eq!(x.h_terms().len(), 4);
        assert_eq!(x.coefficient(&mono(&[0], &[])), q(1));
        assert_eq!(x.coefficient(&mono(&[-1], &[1])), q(1));
        assert_eq!(x.coefficient(&mono(&[-2], &[2])), q(1) / q(2));
        assert_eq!(x.coefficient(&mono(&[-2], &[1, 1])), q(1) / q(2));
        let y = psi_generator(Generator::Line(3), 3);
        assert_eq!(y.h_terms().len(), 1);
        assert!(psi_generator(Generator::Line(-4), -3).is_zero());
    }

    #[test]
    fn json_round_trip() {
        let x = psi_word(&"T1 L0".parse().unwrap(), -2, 0).scale(&(q(3) / q(2)));
        let js = serde_json::to_string(&x).unwrap();
        assert!(js.contains(r#""c":"3/2""#));
        let back: AlgebraElement = serde_json::from_str(&js).unwrap();
        assert_eq!(back, x);
    }
}
