//! Euler characteristics: the closed form for torsion Grassmannians and the
//! point-count engine `ρ_Z(word)` for components and explicit pairs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::interp::QCountSeries;
use super::qcount::qcount_word;
use super::subspace::CountBudget;
use super::GeneratorWord;
use crate::components::IrrComponent;
use crate::error::{HiggsError, Result};
use crate::field::{Field, GaloisField, PrimeField, Rationals};
use crate::linalg::{self, Mat};
use crate::p1sheaf::HiggsPair;
use crate::partition::Partition;
use crate::rng::{majority, stream, tag_str, Sampling};

/// Field sizes tried by default.
pub const DEFAULT_FIELD_SIZES: [u64; 9] = [2, 3, 4, 5, 7, 8, 9, 11, 13];

/// Resampling attempts per field size before that size is skipped.
const SAMPLE_ATTEMPTS: usize = 200;

/// Extra fitted degree allowed beyond the size of the word's class.
const DEGREE_SLACK: usize = 4;

/// Knobs of the point-count engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiConfig {
    /// Field sizes `q` (prime powers ≤ 2¹⁶); explicit pairs over ℚ use the
    /// primes among them.
    pub field_sizes: Vec<u64>,
    pub sampling: Sampling,
    pub budget: CountBudget,
}

impl Default for ChiConfig {
    fn default() -> Self {
        Self { field_sizes: DEFAULT_FIELD_SIZES.to_vec(), sampling: Sampling::default(), budget: CountBudget::default() }
    }
}

/// χ of the Grassmannian of degree-`m` subsheaves of a torsion sheaf with
/// the given local types (one partition per support point): the number of
/// torus-fixed points, convolved over the points.
pub fn chi_torsion_grassmannian(mu: &[Partition], m: usize) -> u128 {
    let mut acc = vec![1u128];
    for p in mu {
        // local counts: #{0 ≤ bᵢ ≤ pᵢ, Σ bᵢ = j}
        let mut local = vec![1u128];
        for &part in p.parts() {
            let mut next = vec![0u128; local.len() + part];
            for (j, &c) in local.iter().enumerate() {
                for b in 0..=part {
                    next[j + b] += c;
                }
            }
            local = next;
        }
        let mut next = vec![0u128; acc.len() + local.len() - 1];
        for (i, &a) in acc.iter().enumerate() {
            for (j, &b) in local.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    acc.get(m).copied().unwrap_or(0)
}

/// Data that must agree between a small-field sample and a large-field
/// reference for the sample to count as generic. Everything here is
/// characteristic-free linear algebra, so it is defined over every `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Fingerprint {
    hom: Vec<usize>,
    kernel_rank: usize,
    torsion_ranks: Vec<(usize, usize)>,
}

fn fingerprint<F: Field>(pair: &HiggsPair<F>) -> Result<Fingerprint> {
    let f = pair.field();
    let lo = pair.twists().iter().copied().min().unwrap_or(0) - 3;
    let hi = pair.twists().iter().copied().max().unwrap_or(0) + 3;
    let hom = (lo..=hi).map(|k| pair.hom_profile(k)).collect::<Result<Vec<_>>>()?;
    let (m0, m1) = pair.torsion_dims();
    let block = |r: std::ops::Range<usize>| -> Mat<F::E> {
        r.clone().map(|i| pair.tt()[i][r.clone()].to_vec()).collect()
    };
    let powers = |b: Mat<F::E>, n: usize| -> Vec<usize> {
        let mut p = linalg::identity(f, n);
        (0..n)
            .map(|_| {
                p = linalg::matmul(f, &p, &b);
                linalg::rank(f, &p)
            })
            .collect()
    };
    let a = powers(block(0..m0), m0);
    let b = powers(block(m0..m0 + m1), m1);
    let len = a.len().max(b.len());
    let torsion_ranks =
        (0..len).map(|j| (a.get(j).copied().unwrap_or(0), b.get(j).copied().unwrap_or(0))).collect();
    Ok(Fingerprint { hom, kernel_rank: pair.kernel_rank(), torsion_ranks })
}

fn degree_bound(word: &GeneratorWord) -> usize {
    let c = word.class();
    (c.degree.unsigned_abs() + c.rank.unsigned_abs()) as usize + DEGREE_SLACK
}

/// `ρ_Z(word)`: the χ of the word's chain variety at a generic pair of `z`,
/// from point counts of generic pairs over small fields.
pub fn chi_word(word: &GeneratorWord, z: &IrrComponent, cfg: &ChiConfig) -> Result<BigRational> {
    Ok(chi_word_series(word, z, cfg)?.value_at_one())
}

/// The point-count series behind [`chi_word`] (majority over trials).
pub fn chi_word_series(word: &GeneratorWord, z: &IrrComponent, cfg: &ChiConfig) -> Result<QCountSeries> {
    if word.class() != z.class() {
        return Err(HiggsError::InvalidInput(format!("word class {} differs from component class {}", word.class(), z.class())));
    }
    let label = z.canonical();
    let mut reference_rng = stream(cfg.sampling.seed, &[tag_str(&label), tag_str("reference")]);
    let reference = fingerprint(&z.sample(&PrimeField::generic(), &mut reference_rng)?)?;
    let mut results: Vec<(BigRational, QCountSeries)> = Vec::new();
    let mut last_err = None;
    let mut trial = 0u64;
    while results.len() < cfg.sampling.trials && trial < 4 * cfg.sampling.trials as u64 + 4 {
        match component_trial(word, z, &label, &reference, trial, cfg) {
            Ok(s) => results.push((s.value_at_one(), s)),
            Err(e @ HiggsError::InterpolationInconsistent { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
        trial += 1;
    }
    let values: Vec<BigRational> = results.iter().map(|(v, _)| v.clone()).collect();
    let winner = majority(&values).ok_or_else(|| {
        last_err.unwrap_or_else(|| HiggsError::SamplingExhausted { attempts: trial as usize, last: "no trials".into() })
    })?;
    Ok(results.into_iter().find(|(v, _)| *v == winner).map(|(_, s)| s).expect("winner comes from results"))
}

fn component_trial(
    word: &GeneratorWord,
    z: &IrrComponent,
    label: &str,
    reference: &Fingerprint,
    trial: u64,
    cfg: &ChiConfig,
) -> Result<QCountSeries> {
    let mut points = Vec::new();
    for &q in &cfg.field_sizes {
        if q + 1 < z.lambda().len() as u64 {
            continue;
        }
        let field = GaloisField::new(q)?;
        // the stream depends on the component only, so every word sees the
        // same samples and linear combinations stay consistent
        let mut rng = stream(cfg.sampling.seed, &[tag_str(label), trial, q]);
        let mut found = None;
        for _ in 0..SAMPLE_ATTEMPTS {
            let pair = match z.sample(&field, &mut rng) {
                Ok(p) => p,
                Err(HiggsError::FieldTooSmall { .. }) => break,
                Err(e) => return Err(e),
            };
            if fingerprint(&pair)? == *reference {
                found = Some(pair);
                break;
            }
        }
        if let Some(pair) = found {
            points.push((q, qcount_word(word, &pair, &cfg.budget)?));
        }
    }
    QCountSeries::fit(points, degree_bound(word))
}

/// Reduce a rational modulo `p`; `None` when `p` divides the denominator.
fn reduce(x: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let num = x.numer().mod_floor(&pb).to_u64()?;
    let den = x.denom().mod_floor(&pb).to_u64()?;
    if den == 0 {
        return None;
    }
    let f = PrimeField::new(p).ok()?;
    Some(f.div(&num, &den))
}

/// χ of the word's chain variety at an explicit pair over ℚ, from its
/// reductions modulo the primes among the configured field sizes (bad
/// reductions are skipped).
pub fn chi_word_pair(word: &GeneratorWord, pair: &HiggsPair<Rationals>, cfg: &ChiConfig) -> Result<QCountSeries> {
    let reference = fingerprint(pair)?;
    let mut points = Vec::new();
    for &q in &cfg.field_sizes {
        let Ok(field) = PrimeField::new(q) else { continue };
        let Some(reduced) = pair.map_field(&field, |x| reduce(x, q)) else { continue };
        if !reduced.is_nilpotent() || fingerprint(&reduced)? != reference {
            continue;
        }
        points.push((q, qcount_word(word, &reduced, &cfg.budget)?));
    }
    QCountSeries::fit(points, degree_bound(word))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec())
    }

    fn word(s: &str) -> GeneratorWord {
        s.parse().unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn grassmannian_closed_form() {
        assert_eq!(chi_torsion_grassmannian(&[part(&[3])], 2), 1);
        assert_eq!(chi_torsion_grassmannian(&[part(&[1, 1])], 1), 2);
        assert_eq!(chi_torsion_grassmannian(&[part(&[2, 1])], 1), 2);
        assert_eq!(chi_torsion_grassmannian(&[part(&[1]), part(&[1])], 1), 2);
        assert_eq!(chi_torsion_grassmannian(&[part(&[2, 2])], 5), 0);
    }

    #[test]
    fn torsion_component_values() {
        let cfg = ChiConfig { sampling: Sampling::new(11, 3), ..ChiConfig::default() };
        let z11: IrrComponent = IrrComponent::new(vec![], part(&[1, 1])).unwrap();
        let z2: IrrComponent = IrrComponent::new(vec![], part(&[2])).unwrap();
        assert_eq!(chi_word(&word("T1 T1"), &z11, &cfg).unwrap(), q(2));
        assert_eq!(chi_word(&word("T1 T1"), &z2, &cfg).unwrap(), q(1));
        assert_eq!(chi_word(&word("T2"), &z2, &cfg).unwrap(), q(0));
    }

    #[test]
    fn explicit_rational_pair() {
        // O ⊕ O_0 ⊕ O_1 with zero field: T1·T1·L0 … only the torsion matters
        let f = Rationals::default();
        let p = HiggsPair::from_blocks(f.clone(), vec![], &[(Some(q(0)), 1), (Some(q(1)), 1)]).unwrap();
        let s = chi_word_pair(&word("T1 T1"), &p, &ChiConfig::default()).unwrap();
        assert_eq!(s.value_at_one(), q(2));
        assert!(s.points().iter().all(|&(_, c)| c == 2));
    }
}
