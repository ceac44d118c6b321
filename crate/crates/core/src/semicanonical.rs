//! The generic-value functional `ρ_Z` and the semicanonical basis `{f_Z}`,
//! characterised by `ρ_{Z′}(f_Z) = [Z′ = Z]`.
//!
//! Torsion classes run the dominance-order induction starting from the
//! products `1_{λ′} = Π T(λ′ᵢ)`. Mixed classes (rank ≤ 2) are solved in a
//! window of components with twists `≥ floor`, against the ordered-product
//! words of that window.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::components::{enumerate_components, IrrComponent};
use crate::drinfeld::ordered_basis;
use crate::error::{HiggsError, Result};
use crate::euler::{chi_word, ChiConfig, Generator, GeneratorWord};
use crate::field::{Field, Rationals};
use crate::linalg::{self, Mat};
use crate::p1sheaf::KClass;
use crate::partition::{partitions, Partition};

/// Largest torsion degree handled by [`semican_torsion`] by default.
pub const TORSION_DEGREE_LIMIT: usize = 4;

/// Default bound on `|degree|` for [`semican_element`].
pub const DEFAULT_DEGREE_CAP: i64 = 2;

/// Largest torsion bound `d − r·floor` of a mixed window.
pub const WINDOW_TORSION_LIMIT: i64 = 4;

/// An exact rational combination of words of one class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CombinationRaw", into = "CombinationRaw")]
pub struct WordCombination {
    class: KClass,
    terms: BTreeMap<GeneratorWord, BigRational>,
}

#[derive(Serialize, Deserialize)]
struct TermRaw {
    word: Vec<Generator>,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct CombinationRaw {
    class: (i64, i64),
    terms: Vec<TermRaw>,
}

impl TryFrom<CombinationRaw> for WordCombination {
    type Error = HiggsError;
    fn try_from(r: CombinationRaw) -> Result<Self> {
        let mut x = WordCombination::zero(KClass::new(r.class.0, r.class.1));
        for t in r.terms {
            let c: BigRational =
                t.c.parse().map_err(|_| HiggsError::InvalidInput(format!("bad coefficient {:?}", t.c)))?;
            x.add_term(GeneratorWord::new(t.word)?, c)?;
        }
        Ok(x)
    }
}

impl From<WordCombination> for CombinationRaw {
    fn from(x: WordCombination) -> Self {
        CombinationRaw {
            class: (x.class.rank, x.class.degree),
            terms: x.terms.into_iter().map(|(w, c)| TermRaw { word: w.gens().to_vec(), c: c.to_string() }).collect(),
        }
    }
}

impl WordCombination {
    pub fn zero(class: KClass) -> Self {
        Self { class, terms: BTreeMap::new() }
    }

    pub fn word(word: GeneratorWord) -> Self {
        Self { class: word.class(), terms: BTreeMap::from([(word, BigRational::one())]) }
    }

    pub fn class(&self) -> KClass {
        self.class
    }

    pub fn terms(&self) -> &BTreeMap<GeneratorWord, BigRational> {
        &self.terms
    }

    pub fn coefficient(&self, w: &GeneratorWord) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Add `c · word`, dropping terms that cancel.
    pub fn add_term(&mut self, word: GeneratorWord, c: BigRational) -> Result<()> {
        if word.class() != self.class {
            return Err(HiggsError::InvalidInput(format!("word {word} is not of class {}", self.class)));
        }
        let entry = self.terms.entry(word.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&word);
        }
        Ok(())
    }

    /// `self + c · other`.
    pub fn add_scaled(&mut self, other: &WordCombination, c: &BigRational) -> Result<()> {
        for (w, d) in &other.terms {
            self.add_term(w.clone(), d * c)?;
        }
        Ok(())
    }
}

impl fmt::Display for WordCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let sep = if i == 0 { "" } else { " + " };
            let w = if w.is_empty() { "1".to_string() } else { w.to_string() };
            write!(f, "{sep}({c})·{w}")?;
        }
        Ok(())
    }
}

/// `ρ_Z(x)`, by linearity over the generic values of the words.
pub fn rho(z: &IrrComponent, x: &WordCombination, cfg: &ChiConfig) -> Result<BigRational> {
    if x.class() != z.class() {
        return Err(HiggsError::InvalidInput(format!("class {} differs from component class {}", x.class(), z.class())));
    }
    let values: Vec<BigRational> =
        x.terms().par_iter().map(|(w, c)| Ok(chi_word(w, z, cfg)? * c)).collect::<Result<_>>()?;
    Ok(values.into_iter().fold(BigRational::zero(), |a, v| a + v))
}

/// `M[i][j] = ρ_{comps[i]}(words[j])`, evaluated in parallel.
pub fn rho_matrix(comps: &[IrrComponent], words: &[GeneratorWord], cfg: &ChiConfig) -> Result<Mat<BigRational>> {
    let cells: Vec<(usize, usize)> = (0..comps.len()).flat_map(|i| (0..words.len()).map(move |j| (i, j))).collect();
    let values: Vec<BigRational> =
        cells.par_iter().map(|&(i, j)| chi_word(&words[j], &comps[i], cfg)).collect::<Result<_>>()?;
    Ok(values.chunks(words.len().max(1)).map(<[BigRational]>::to_vec).collect())
}

fn torsion_component(mu: &Partition) -> IrrComponent {
    IrrComponent::new(vec![], mu.clone()).expect("torsion components are always valid")
}

/// The semicanonical basis of degree-`d` torsion classes, indexed by the
/// local type `λ` of the component it is dual to.
pub fn semican_torsion(d: usize, cfg: &ChiConfig) -> Result<BTreeMap<Partition, WordCombination>> {
    if d == 0 || d > TORSION_DEGREE_LIMIT {
        return Err(HiggsError::BudgetExceeded(format!("torsion degree {d} outside 1..={TORSION_DEGREE_LIMIT}")));
    }
    // lexicographic ascending order extends dominance
    let mut parts = partitions(d);
    parts.reverse();
    let comps: Vec<IrrComponent> = parts.iter().map(torsion_component).collect();
    let words: Vec<GeneratorWord> = parts.iter().map(|l| GeneratorWord::torsion(&l.transpose())).collect();
    let m = rho_matrix(&comps, &words, cfg)?;

    // rows of `m` restricted to each f_λ, kept alongside the combination
    let mut basis: Vec<(WordCombination, Vec<BigRational>)> = Vec::new();
    for (j, lambda) in parts.iter().enumerate() {
        let mut f = WordCombination::word(words[j].clone());
        let mut values: Vec<BigRational> = m.iter().map(|row| row[j].clone()).collect();
        if values[j + 1..].iter().any(|v| !v.is_zero()) {
            return Err(HiggsError::InvalidInput(format!(
                "1_{{{}′}} is not triangular: generic values {values:?}",
                lambda
            )));
        }
        for (i, (fi, vi)) in basis.iter().enumerate() {
            let c = -values[i].clone();
            if c.is_zero() {
                continue;
            }
            f.add_scaled(fi, &c)?;
            for (v, w) in values.iter_mut().zip(vi) {
                *v += &c * w;
            }
        }
        let lead = values[j].clone();
        if lead.is_zero() {
            return Err(HiggsError::InvalidInput(format!("ρ vanishes on the leading term for {lambda}")));
        }
        if !lead.is_one() {
            let inv = lead.recip();
            f = {
                let mut g = WordCombination::zero(f.class());
                g.add_scaled(&f, &inv)?;
                g
            };
            values.iter_mut().for_each(|v| *v *= &inv);
        }
        basis.push((f, values));
    }
    Ok(parts.into_iter().zip(basis.into_iter().map(|(f, _)| f)).collect())
}

/// Components alive in the window of `z`'s class with twists `≥ floor`.
pub fn window(class: KClass, floor: i64) -> Vec<IrrComponent> {
    enumerate_components(class, floor)
}

/// The element `f_Z` of the window of twists `≥ floor`: the combination of
/// the window's ordered-product words with `ρ_{Z′}(f_Z) = [Z′ = Z]` for
/// every component `Z′` of the window.
pub fn semican_element(z: &IrrComponent, floor: i64, degree_cap: i64, cfg: &ChiConfig) -> Result<WordCombination> {
    let class = z.class();
    if z.rank() > 2 {
        return Err(HiggsError::InvalidInput(format!("rank {} exceeds 2", z.rank())));
    }
    if z.min_twist().is_some_and(|m| m < floor) {
        return Err(HiggsError::InvalidInput(format!("{z} has a twist below the floor {floor}")));
    }
    if class.degree.abs() > degree_cap {
        return Err(HiggsError::InvalidInput(format!("degree {} exceeds the cap {degree_cap}", class.degree)));
    }
    if z.rank() == 0 {
        let basis = semican_torsion(z.lambda().size(), cfg)?;
        return Ok(basis[z.lambda()].clone());
    }
    let tau = class.degree - class.rank * floor;
    if tau > WINDOW_TORSION_LIMIT {
        return Err(HiggsError::BudgetExceeded(format!(
            "window torsion bound {tau} exceeds {WINDOW_TORSION_LIMIT}; raise the floor"
        )));
    }
    let comps = window(class, floor);
    let words = ordered_basis(class, floor);
    let idx = comps.iter().position(|c| c == z).expect("z lies in its own window");
    let m = rho_matrix(&comps, &words, cfg)?;
    let q = Rationals::default();
    let rhs: Vec<BigRational> = (0..comps.len()).map(|i| if i == idx { q.one() } else { q.zero() }).collect();
    let c = linalg::solve(&q, &m, &rhs)
        .ok_or_else(|| HiggsError::InvalidInput(format!("generic values of the window words are singular at {z}")))?;
    if linalg::det(&q, &m).is_zero() {
        return Err(HiggsError::InvalidInput(format!("generic values of the window words are singular at {z}")));
    }
    let mut f = WordCombination::zero(class);
    for (w, c) in words.into_iter().zip(c) {
        f.add_term(w, c)?;
    }
    Ok(f)
}

/// `|det|` of the coefficient matrix of `{f_λ}` against `{1_{μ′}}`.
pub fn torsion_change_of_basis_det(basis: &BTreeMap<Partition, WordCombination>) -> BigRational {
    let q = Rationals::default();
    let lambdas: Vec<&Partition> = basis.keys().collect();
    let words: Vec<GeneratorWord> = lambdas.iter().map(|l| GeneratorWord::torsion(&l.transpose())).collect();
    let m: Mat<BigRational> = basis.values().map(|f| words.iter().map(|w| f.coefficient(w)).collect()).collect();
    let d = linalg::det(&q, &m);
    if d < BigRational::zero() {
        -d
    } else {
        d
    }
}

/// Integer shorthand used by callers building expected combinations.
pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Sampling;

    fn cfg(seed: u64) -> ChiConfig {
        ChiConfig { sampling: Sampling::new(seed, 3), ..ChiConfig::default() }
    }

    fn w(s: &str) -> GeneratorWord {
        s.parse().unwrap()
    }

    #[test]
    fn degree_two_basis() {
        let b = semican_torsion(2, &cfg(1)).unwrap();
        let f11 = &b[&Partition::new(vec![1, 1])];
        let f2 = &b[&Partition::new(vec![2])];
        assert_eq!(f11, &WordCombination::word(w("T2")));
        let mut expect = WordCombination::word(w("T1 T1"));
        expect.add_term(w("T2"), rational(-2)).unwrap();
        assert_eq!(f2, &expect);
        assert_eq!(torsion_change_of_basis_det(&b), rational(1));
    }

    #[test]
    fn json_round_trip() {
        let mut x = WordCombination::word(w("T1 T1"));
        x.add_term(w("T2"), rational(-2)).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"class":[0,2],"terms":[{"word":[{"tor":1},{"tor":1}],"c":"1"},{"word":[{"tor":2}],"c":"-2"}]}"#);
        assert_eq!(serde_json::from_str::<WordCombination>(&s).unwrap(), x);
    }

    #[test]
    fn line_elements() {
        let z: IrrComponent = IrrComponent::new(vec![0], Partition::empty()).unwrap();
        assert_eq!(semican_element(&z, -1, 2, &cfg(2)).unwrap(), WordCombination::word(w("L0")));
        let z1: IrrComponent = IrrComponent::new(vec![-1], Partition::new(vec![1])).unwrap();
        let f = semican_element(&z1, -1, 2, &cfg(2)).unwrap();
        for other in window(z1.class(), -1) {
            let expect = if other == z1 { rational(1) } else { rational(0) };
            assert_eq!(rho(&other, &f, &cfg(77)).unwrap(), expect, "{other}");
        }
    }
}
