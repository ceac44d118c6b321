//! Coherent sheaves on P¹: Grothendieck classes, split sheaf models, Hom
//! dimensions, and (in [`pair`]) explicit nilpotent Higgs fields over a field
//! together with kernels, quotients and generic sampling.

mod formkernel;
mod pair;
mod quotient;
mod sample;

pub use pair::{nilpotent_jordan_type, torsion_shape, HiggsPair, QuotientShape, SheafShape, TorsionShape};
pub use formkernel::{random_formkernel_instance, FormKernelInstance};
pub use sample::{sample_generic_pair, sample_pair_at_points};
pub(crate) use pair::restrict_operator;

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{HiggsError, Result};
use crate::field::{parse_rational, render_rational};
use crate::partition::{check_decreasing, Partition};

/// A Grothendieck-group class `(rank, degree)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KClass {
    pub rank: i64,
    pub degree: i64,
}

impl KClass {
    pub const ZERO: KClass = KClass { rank: 0, degree: 0 };

    pub fn new(rank: i64, degree: i64) -> Self {
        Self { rank, degree }
    }

    /// Membership in the positive cone: rank ≥ 1, or rank 0 with degree ≥ 1,
    /// or the zero class.
    pub fn is_positive(&self) -> bool {
        self.rank >= 1 || (self.rank == 0 && self.degree >= 0)
    }

    /// The weight `ρ(r,d) = r·α₁ + d·δ`.
    pub fn weight(&self) -> WeightVector {
        WeightVector { a1: self.rank, delta: self.degree }
    }
}

impl Add for KClass {
    type Output = KClass;
    fn add(self, o: KClass) -> KClass {
        KClass::new(self.rank + o.rank, self.degree + o.degree)
    }
}

impl Sub for KClass {
    type Output = KClass;
    fn sub(self, o: KClass) -> KClass {
        KClass::new(self.rank - o.rank, self.degree - o.degree)
    }
}

impl Neg for KClass {
    type Output = KClass;
    fn neg(self) -> KClass {
        KClass::new(-self.rank, -self.degree)
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.rank, self.degree)
    }
}

impl Serialize for KClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.rank, self.degree].serialize(s)
    }
}

impl<'de> Deserialize<'de> for KClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [rank, degree] = <[i64; 2]>::deserialize(d)?;
        Ok(KClass { rank, degree })
    }
}

/// The Euler form `⟨(r,d),(r',d')⟩ = rr' + rd' − dr'`.
pub fn euler_form(a: KClass, b: KClass) -> i64 {
    a.rank * b.rank + a.rank * b.degree - a.degree * b.rank
}

/// An element `a1·α₁ + delta·δ` of the root lattice of ŝl₂.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightVector {
    pub a1: i64,
    pub delta: i64,
}

impl WeightVector {
    /// The positive root `α₁ + kδ`.
    pub fn root(k: i64) -> Self {
        Self { a1: 1, delta: k }
    }

    /// Inverse of `ρ`.
    pub fn class(&self) -> KClass {
        KClass::new(self.a1, self.delta)
    }
}

impl Add for WeightVector {
    type Output = WeightVector;
    fn add(self, o: Self) -> Self {
        Self { a1: self.a1 + o.a1, delta: self.delta + o.delta }
    }
}

impl Sub for WeightVector {
    type Output = WeightVector;
    fn sub(self, o: Self) -> Self {
        Self { a1: self.a1 - o.a1, delta: self.delta - o.delta }
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}α₁ + {}δ", self.a1, self.delta)
    }
}

/// A rational point `(a : b)` of P¹, normalized to `b = 1` or `(1 : 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    a: BigRational,
    b: BigRational,
}

impl ProjPoint {
    /// Normalize `(a : b)`; fails when both coordinates vanish.
    pub fn new(a: BigRational, b: BigRational) -> Result<Self> {
        if b.is_zero() {
            if a.is_zero() {
                return Err(HiggsError::InvalidInput("(0:0) is not a point".into()));
            }
            return Ok(Self { a: BigRational::one(), b: BigRational::zero() });
        }
        Ok(Self { a: a / &b, b: BigRational::one() })
    }

    /// The affine point `z = a`, i.e. `(a : 1)`.
    pub fn affine(a: BigRational) -> Self {
        Self { a, b: BigRational::one() }
    }

    /// The point at infinity `(1 : 0)`.
    pub fn infinity() -> Self {
        Self { a: BigRational::one(), b: BigRational::zero() }
    }

    pub fn is_infinity(&self) -> bool {
        self.b.is_zero()
    }

    /// Affine coordinate when finite.
    pub fn coordinate(&self) -> Option<&BigRational> {
        (!self.is_infinity()).then_some(&self.a)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", render_rational(&self.a), render_rational(&self.b))
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [render_rational(&self.a), render_rational(&self.b)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = <[serde_json::Value; 2]>::deserialize(d)?;
        let parse = |v: &serde_json::Value| -> Result<BigRational> {
            match v {
                serde_json::Value::String(s) => parse_rational(s),
                serde_json::Value::Number(n) => parse_rational(&n.to_string()),
                _ => Err(HiggsError::InvalidInput(format!("bad coordinate {v}"))),
            }
        };
        let a = parse(&raw[0]).map_err(serde::de::Error::custom)?;
        let b = parse(&raw[1]).map_err(serde::de::Error::custom)?;
        ProjPoint::new(a, b).map_err(serde::de::Error::custom)
    }
}

/// One torsion summand group: the local module at `point` is the sum of
/// cyclic modules of lengths given by `type`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorsionPart {
    pub point: ProjPoint,
    #[serde(rename = "type")]
    pub kind: Partition,
}

/// Torsion data: pairwise distinct points, each with a nonempty partition.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<TorsionPart>", into = "Vec<TorsionPart>")]
pub struct TorsionModel(Vec<TorsionPart>);

impl TorsionModel {
    pub fn new(parts: Vec<TorsionPart>) -> Result<Self> {
        for (i, p) in parts.iter().enumerate() {
            if p.kind.is_empty() {
                return Err(HiggsError::InvalidInput("empty torsion type".into()));
            }
            if parts[..i].iter().any(|q| q.point == p.point) {
                return Err(HiggsError::InvalidInput(format!("repeated point {}", p.point)));
            }
        }
        let mut parts = parts;
        parts.sort_by(|x, y| x.point.cmp(&y.point));
        Ok(Self(parts))
    }

    pub fn empty() -> Self {
        Self(vec![])
    }

    /// Torsion of type `λ` with one block per point at `z = 0, 1, 2, …`.
    pub fn generic_of_type(lambda: &Partition) -> Self {
        let parts = lambda
            .parts()
            .iter()
            .enumerate()
            .map(|(i, &m)| TorsionPart {
                point: ProjPoint::affine(BigRational::from_integer((i as i64).into())),
                kind: Partition::new(vec![m]),
            })
            .collect();
        Self(parts)
    }

    pub fn parts(&self) -> &[TorsionPart] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|p| p.kind.size()).sum()
    }

    /// All block lengths, over every point, as one partition.
    pub fn block_type(&self) -> Partition {
        Partition::new(self.0.iter().flat_map(|p| p.kind.parts().to_vec()).collect())
    }
}

impl TryFrom<Vec<TorsionPart>> for TorsionModel {
    type Error = HiggsError;
    fn try_from(v: Vec<TorsionPart>) -> Result<Self> {
        TorsionModel::new(v)
    }
}

impl From<TorsionModel> for Vec<TorsionPart> {
    fn from(t: TorsionModel) -> Self {
        t.0
    }
}

/// A coherent sheaf on P¹: split locally free part `⊕ O(nᵢ)` plus torsion.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SheafModelRaw")]
pub struct SheafModel {
    twists: Vec<i64>,
    torsion: TorsionModel,
}

#[derive(Deserialize)]
struct SheafModelRaw {
    twists: Vec<i64>,
    #[serde(default)]
    torsion: TorsionModel,
}

impl TryFrom<SheafModelRaw> for SheafModel {
    type Error = HiggsError;
    fn try_from(r: SheafModelRaw) -> Result<Self> {
        SheafModel::new(r.twists, r.torsion)
    }
}

impl SheafModel {
    pub fn new(twists: Vec<i64>, torsion: TorsionModel) -> Result<Self> {
        check_decreasing(&twists)?;
        Ok(Self { twists, torsion })
    }

    /// A vector bundle `⊕ O(nᵢ)`; the twists are sorted.
    pub fn bundle(mut twists: Vec<i64>) -> Self {
        twists.sort_unstable_by(|a, b| b.cmp(a));
        Self { twists, torsion: TorsionModel::empty() }
    }

    /// The line bundle `O(n)`.
    pub fn line(n: i64) -> Self {
        Self::bundle(vec![n])
    }

    /// A torsion sheaf.
    pub fn torsion_sheaf(torsion: TorsionModel) -> Self {
        Self { twists: vec![], torsion }
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn torsion(&self) -> &TorsionModel {
        &self.torsion
    }

    pub fn class(&self) -> KClass {
        KClass::new(
            self.twists.len() as i64,
            self.twists.iter().sum::<i64>() + self.torsion.degree() as i64,
        )
    }

    /// Direct sum.
    pub fn direct_sum(&self, other: &SheafModel) -> Result<SheafModel> {
        let mut tw = self.twists.clone();
        tw.extend_from_slice(&other.twists);
        tw.sort_unstable_by(|a, b| b.cmp(a));
        let mut parts: Vec<TorsionPart> = self.torsion.parts().to_vec();
        for p in other.torsion.parts() {
            match parts.iter_mut().find(|q| q.point == p.point) {
                Some(q) => {
                    let mut v = q.kind.parts().to_vec();
                    v.extend_from_slice(p.kind.parts());
                    q.kind = Partition::new(v);
                }
                None => parts.push(p.clone()),
            }
        }
        Ok(SheafModel { twists: tw, torsion: TorsionModel::new(parts)? })
    }
}

impl fmt::Display for SheafModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = self.twists.iter().map(|n| format!("O({n})")).collect();
        for p in self.torsion.parts() {
            for m in p.kind.parts() {
                terms.push(format!("O_{}^({m})", p.point));
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" ⊕ "))
        }
    }
}

/// `dim Hom(F, G)` computed additively from the split models:
/// `O(a) → O(b)`: `max(0, b−a+1)`; line → torsion: its degree;
/// torsion → line: 0; torsion → torsion: `Σ min(μᵢ, νⱼ)` over shared points.
pub fn hom_dim(f: &SheafModel, g: &SheafModel) -> usize {
    let mut total = 0usize;
    for &a in &f.twists {
        for &b in &g.twists {
            total += (b - a + 1).max(0) as usize;
        }
        total += g.torsion.degree();
    }
    for p in f.torsion.parts() {
        if let Some(q) = g.torsion.parts().iter().find(|q| q.point == p.point) {
            for &m in p.kind.parts() {
                for &n in q.kind.parts() {
                    total += m.min(n);
                }
            }
        }
    }
    total
}

/// `dim Ext¹(F, G) = dim Hom(F, G) − ⟨F, G⟩` (Serre duality is not needed:
/// the Euler form is the alternating sum on a hereditary category).
pub fn ext_dim(f: &SheafModel, g: &SheafModel) -> i64 {
    hom_dim(f, g) as i64 - euler_form(f.class(), g.class())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(a: i64) -> ProjPoint {
        ProjPoint::affine(BigRational::from_integer(a.into()))
    }

    fn tors(a: i64, parts: Vec<usize>) -> SheafModel {
        SheafModel::torsion_sheaf(
            TorsionModel::new(vec![TorsionPart { point: pt(a), kind: Partition::new(parts) }])
                .unwrap(),
        )
    }

    #[test]
    fn euler_form_examples() {
        assert_eq!(euler_form(KClass::new(1, 0), KClass::new(1, 0)), 1);
        assert_eq!(euler_form(KClass::new(0, 2), KClass::new(0, 5)), 0);
        assert_eq!(euler_form(KClass::new(1, 2), KClass::new(1, -1)), -2);
    }

    #[test]
    fn hom_dim_examples() {
        assert_eq!(hom_dim(&SheafModel::line(2), &SheafModel::line(5)), 4);
        assert_eq!(hom_dim(&tors(0, vec![3]), &SheafModel::line(7)), 0);
        assert_eq!(hom_dim(&tors(1, vec![2]), &tors(1, vec![3])), 2);
        assert_eq!(hom_dim(&tors(1, vec![2]), &tors(2, vec![3])), 0);
    }

    #[test]
    fn ext_is_nonnegative_and_matches_serre_duality() {
        // Ext¹(O(a), O(b)) = H¹(O(b−a)) has dimension max(0, a−b−1)
        for a in -4..=4 {
            for b in -4..=4 {
                let e = ext_dim(&SheafModel::line(a), &SheafModel::line(b));
                assert_eq!(e, (a - b - 1).max(0));
            }
        }
        // Ext¹(O_x, O) = 1 and Ext¹(O, O_x) = 0
        assert_eq!(ext_dim(&tors(0, vec![1]), &SheafModel::line(0)), 1);
        assert_eq!(ext_dim(&SheafModel::line(0), &tors(0, vec![1])), 0);
    }

    #[test]
    fn projective_points_normalize() {
        let two = BigRational::from_integer(2.into());
        let p = ProjPoint::new(two.clone(), two.clone()).unwrap();
        assert_eq!(p, pt(1));
        let inf = ProjPoint::new(two, BigRational::zero()).unwrap();
        assert!(inf.is_infinity());
        assert!(ProjPoint::new(BigRational::zero(), BigRational::zero()).is_err());
    }

    #[test]
    fn sheaf_model_json_round_trip() {
        let js = r#"{"twists":[2,0],"torsion":[{"point":["3/2","1"],"type":[2,1]}]}"#;
        let m: SheafModel = serde_json::from_str(js).unwrap();
        assert_eq!(m.class(), KClass::new(2, 5));
        let back: SheafModel = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
        // numeric coordinates are accepted too
        let m2: SheafModel =
            serde_json::from_str(r#"{"twists":[0],"torsion":[{"point":[3,1],"type":[1]}]}"#).unwrap();
        assert_eq!(m2.class(), KClass::new(1, 1));
        assert!(serde_json::from_str::<SheafModel>(r#"{"twists":[0,2]}"#).is_err());
    }

    #[test]
    fn positive_cone() {
        assert!(KClass::new(0, 0).is_positive());
        assert!(KClass::new(1, -5).is_positive());
        assert!(!KClass::new(0, -1).is_positive());
        assert_eq!(KClass::new(2, 3).weight(), WeightVector { a1: 2, delta: 3 });
    }
}
