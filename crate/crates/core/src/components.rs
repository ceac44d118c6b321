//! Irreducible components of the nilpotent cone: labels `(n̄, λ)`, their
//! enumeration in a truncated window, generic strata invariants, stability
//! and the dimension identities between strata.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{HiggsError, Result};
use crate::field::PrimeField;
use crate::p1sheaf::{sample_generic_pair, HiggsPair, KClass, SheafShape};
use crate::partition::{check_decreasing, partitions, z_partitions, Partition};
use crate::rng::{majority, stream, tag_i64, tag_str, Sampling};

/// The label `(n̄, λ)` of the component `Z_{(n̄,λ)}`: closure of the pairs
/// `(V_n̄ ⊕ τ_λ, f)` with `τ_λ` one block per part at distinct points.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "ComponentRaw")]
pub struct IrrComponent {
    twists: Vec<i64>,
    lambda: Partition,
}

#[derive(Deserialize)]
struct ComponentRaw {
    twists: Vec<i64>,
    lambda: Partition,
}

impl TryFrom<ComponentRaw> for IrrComponent {
    type Error = HiggsError;
    fn try_from(r: ComponentRaw) -> Result<Self> {
        IrrComponent::new(r.twists, r.lambda)
    }
}

impl IrrComponent {
    pub fn new(twists: Vec<i64>, lambda: Partition) -> Result<Self> {
        check_decreasing(&twists)?;
        Ok(Self { twists, lambda })
    }

    /// The empty component `∅` of class `(0,0)`.
    pub fn empty() -> Self {
        Self::default()
    }

    /// The component whose generic sheaf has the given shape.
    pub fn from_shape(shape: &SheafShape) -> Self {
        Self { twists: shape.twists.clone(), lambda: shape.torsion.blocks.clone() }
    }

    /// `𝕍_k ⊕ τ_λ` with `𝕍_k = O(2k) ⊕ O(2k−2) ⊕ ⋯ ⊕ O`.
    pub fn ladder(k: usize, lambda: Partition) -> Self {
        Self { twists: (0..=k as i64).rev().map(|i| 2 * i).collect(), lambda }
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.twists.is_empty() && self.lambda.is_empty()
    }

    pub fn class(&self) -> KClass {
        KClass::new(
            self.twists.len() as i64,
            self.twists.iter().sum::<i64>() + self.lambda.size() as i64,
        )
    }

    /// Smallest twist (`None` for rank 0).
    pub fn min_twist(&self) -> Option<i64> {
        self.twists.last().copied()
    }

    pub fn max_twist(&self) -> Option<i64> {
        self.twists.first().copied()
    }

    /// Canonical string form `V=[2,0];L=[1]`.
    pub fn canonical(&self) -> String {
        self.to_string()
    }

    /// A generic pair of this component over the given field.
    pub fn sample<F: crate::field::Field>(
        &self,
        field: &F,
        rng: &mut dyn rand::RngCore,
    ) -> Result<HiggsPair<F>> {
        sample_generic_pair(field, &self.twists, &self.lambda, rng)
    }
}

impl fmt::Display for IrrComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tw: Vec<String> = self.twists.iter().map(|n| n.to_string()).collect();
        write!(f, "V=[{}];L={}", tw.join(","), self.lambda)
    }
}

impl FromStr for IrrComponent {
    type Err = HiggsError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || HiggsError::InvalidInput(format!("bad component label {s:?}; expected V=[..];L=[..]"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (v, l) = compact.split_once(';').ok_or_else(bad)?;
        let list = |part: &str, key: &str| -> Result<Vec<i64>> {
            let inner = part
                .strip_prefix(key)
                .and_then(|x| x.strip_prefix('['))
                .and_then(|x| x.strip_suffix(']'))
                .ok_or_else(bad)?;
            if inner.is_empty() {
                return Ok(vec![]);
            }
            inner.split(',').map(|x| x.parse::<i64>().map_err(|_| bad())).collect()
        };
        let twists = list(v, "V=")?;
        let parts = list(l, "L=")?;
        if parts.iter().any(|&p| p <= 0) {
            return Err(bad());
        }
        let lambda = Partition::try_from(parts.into_iter().map(|p| p as usize).collect::<Vec<_>>())?;
        IrrComponent::new(twists, lambda)
    }
}

/// Generic values of `(dim Hom(O(k), Ker f), rk_k Ker f)` on a component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StrataInvariants {
    pub k: i64,
    pub n: usize,
    pub s: usize,
}

/// All components of the given class with every twist `≥ floor`.
pub fn enumerate_components(class: KClass, floor: i64) -> Vec<IrrComponent> {
    let (r, d) = (class.rank, class.degree);
    if !class.is_positive() {
        return vec![];
    }
    if r == 0 {
        return partitions(d as usize)
            .into_iter()
            .map(|lambda| IrrComponent { twists: vec![], lambda })
            .collect();
    }
    let mut out = Vec::new();
    let max_torsion = d - r * floor;
    for t in 0..=max_torsion.max(-1) {
        for twists in z_partitions(r as usize, d - t, floor) {
            for lambda in partitions(t as usize) {
                out.push(IrrComponent { twists: twists.clone(), lambda });
            }
        }
    }
    out
}

type StrataKey = (IrrComponent, i64, Sampling);

fn strata_cache() -> &'static Mutex<HashMap<StrataKey, StrataInvariants>> {
    static CACHE: OnceLock<Mutex<HashMap<StrataKey, StrataInvariants>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Majority `(n, s)` over `trials` generic samples of `Z`.
pub fn strata_invariants(z: &IrrComponent, k: i64, sampling: &Sampling) -> Result<StrataInvariants> {
    let key = (z.clone(), k, *sampling);
    if let Some(v) = strata_cache().lock().unwrap().get(&key) {
        return Ok(*v);
    }
    let field = PrimeField::generic();
    let label = tag_str(&z.canonical());
    let mut values = Vec::with_capacity(sampling.trials);
    for trial in 0..sampling.trials {
        let mut rng = stream(sampling.seed, &[label, tag_i64(k), trial as u64, 0x57]);
        let pair = z.sample(&field, &mut rng)?;
        values.push((pair.hom_profile(k)?, pair.rank_k(k)?));
    }
    let (n, s) = majority(&values).expect("at least one trial");
    let inv = StrataInvariants { k, n, s };
    strata_cache().lock().unwrap().insert(key, inv);
    Ok(inv)
}

/// Stability of the generic pair, `Hom(F, F⊗Ω)^nilp = 0`, in its closed
/// combinatorial form: no torsion and twist gap at most one.
pub fn is_stable(z: &IrrComponent) -> bool {
    z.lambda.is_empty()
        && match (z.max_twist(), z.min_twist()) {
            (Some(a), Some(b)) => a - b <= 1,
            _ => true,
        }
}

/// Dimension of the space of nilpotent Higgs fields on the generic sheaf of
/// `Z`, read off a sampled model: all bundle blocks, all bundle-to-torsion
/// blocks, and the strictly nilpotent part `t·k[t]` of each torsion block.
pub fn nilpotent_higgs_dim(z: &IrrComponent, sampling: &Sampling) -> Result<usize> {
    let field = PrimeField::generic();
    let mut rng = stream(sampling.seed, &[tag_str(&z.canonical()), 0x5A]);
    let pair = z.sample(&field, &mut rng)?;
    let r = pair.rank();
    let forms: usize = (0..r).flat_map(|j| (0..r).map(move |i| (j, i))).map(|(j, i)| pair.vv(j, i).len()).sum();
    let tors = pair.torsion_degree();
    let local: usize = z.lambda.parts().iter().map(|&m| m - 1).sum();
    Ok(forms + r * tors + local)
}

/// The strata dimension identities for `0 < s ≤ r`: with `Z₂` of rank
/// `r − s` (dimension `−(r−s)²`), `dim Z₁ = dim Z₂ − 2s(r−s) − s² = −r²` and
/// `dim Z₃ = dim Z₂ − 2s(r−s) + s(n−s) − s² = dim Z₁ + s(n−s)`.
pub fn dimension_check(r: i64, s: i64, n: i64) -> Result<bool> {
    if !(0 < s && s <= r) {
        return Err(HiggsError::InvalidInput(format!("need 0 < s ≤ r, got r={r}, s={s}")));
    }
    let dim_z2 = -(r - s) * (r - s);
    let dim_z1 = dim_z2 - 2 * s * (r - s) - s * s;
    let dim_z3 = dim_z2 - 2 * s * (r - s) + s * (n - s) - s * s;
    Ok(dim_z1 == -r * r && dim_z3 == dim_z1 + s * (n - s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partition_count;

    fn c(s: &str) -> IrrComponent {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_strings_round_trip() {
        for s in ["V=[2,0];L=[1]", "V=[];L=[]", "V=[-1];L=[2,1,1]"] {
            assert_eq!(c(s).to_string(), s);
        }
        assert_eq!(c(" V = [0, -1] ; L = [] "), IrrComponent::new(vec![0, -1], Partition::empty()).unwrap());
        assert!("V=[0,1];L=[]".parse::<IrrComponent>().is_err());
        assert!("V=[0];L=[1,2]".parse::<IrrComponent>().is_err());
        assert!("nonsense".parse::<IrrComponent>().is_err());
        let js = serde_json::to_string(&c("V=[2,0];L=[1]")).unwrap();
        assert_eq!(js, r#"{"twists":[2,0],"lambda":[1]}"#);
        assert_eq!(serde_json::from_str::<IrrComponent>(&js).unwrap(), c("V=[2,0];L=[1]"));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_components(KClass::new(0, 3), -5).len(), 3);
        let got = enumerate_components(KClass::new(1, 0), -2);
        let want: Vec<IrrComponent> =
            ["V=[0];L=[]", "V=[-1];L=[1]", "V=[-2];L=[2]", "V=[-2];L=[1,1]"].iter().map(|s| c(s)).collect();
        assert_eq!(got, want);
        assert_eq!(enumerate_components(KClass::ZERO, 0), vec![IrrComponent::empty()]);
        for d in 0..8 {
            assert_eq!(enumerate_components(KClass::new(0, d), 0).len(), partition_count(d as usize));
        }
        assert!(enumerate_components(KClass::new(0, -1), 0).is_empty());
    }

    #[test]
    fn strata_examples() {
        let s = Sampling::default();
        let inv = strata_invariants(&c("V=[0,0];L=[]"), 0, &s).unwrap();
        assert_eq!((inv.n, inv.s), (2, 2));
        let inv = strata_invariants(&c("V=[];L=[1]"), 0, &s).unwrap();
        assert_eq!((inv.n, inv.s), (1, 0));
        let inv = strata_invariants(&c("V=[2,0];L=[1]"), 1, &s).unwrap();
        assert_eq!((inv.n, inv.s), (2, 1));
    }

    #[test]
    fn stability_examples() {
        assert!(is_stable(&c("V=[0,-1];L=[]")));
        assert!(!is_stable(&c("V=[1,-1];L=[]")));
        assert!(!is_stable(&c("V=[0];L=[1]")));
        let s = Sampling::default();
        for z in ["V=[0,-1];L=[]", "V=[1,-1];L=[]", "V=[0];L=[1]", "V=[3,3,2];L=[]"] {
            let z = c(z);
            assert_eq!(is_stable(&z), nilpotent_higgs_dim(&z, &s).unwrap() == 0, "{z}");
        }
    }

    #[test]
    fn dimension_identities() {
        assert!(dimension_check(2, 1, 3).unwrap());
        assert!(dimension_check(3, 2, 2).unwrap());
        assert!(dimension_check(1, 1, 1).unwrap());
        assert!(dimension_check(1, 2, 0).is_err());
    }
}
