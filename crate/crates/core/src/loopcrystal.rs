//! The loop crystal on irreducible components: operators `f_k`, `e_k`, the
//! crystal data `wt`, `ε_k`, `φ_k`, the derived ŝl₂-crystal, crystal graphs
//! and paths to the empty component.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::components::{enumerate_components, is_stable, strata_invariants, IrrComponent};
use crate::error::{HiggsError, Result};
use crate::field::PrimeField;
use crate::p1sheaf::{KClass, WeightVector};
use crate::partition::Partition;
use crate::rng::{majority, stream, tag_i64, tag_str, Sampling};

/// Default slack of the preimage search behind `e_k`.
pub const DEFAULT_SEARCH_RADIUS: i64 = 3;

/// Resamples per trial before a trial is abandoned as non-generic.
const RESAMPLES: usize = 20;

/// Direction of a crystal operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    E,
    F,
}

/// A crystal operator `e_k` or `f_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CrystalOp {
    pub dir: Direction,
    pub k: i64,
}

impl CrystalOp {
    pub fn f(k: i64) -> Self {
        Self { dir: Direction::F, k }
    }

    pub fn e(k: i64) -> Self {
        Self { dir: Direction::E, k }
    }

    /// Apply with the default search radius for `e`.
    pub fn apply(&self, z: &IrrComponent, sampling: &Sampling) -> Result<Option<IrrComponent>> {
        match self.dir {
            Direction::F => f_k(z, self.k, sampling),
            Direction::E => e_k(z, self.k, DEFAULT_SEARCH_RADIUS, sampling).map(Some),
        }
    }
}

impl fmt::Display for CrystalOp {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = match self.dir {
            Direction::E => "e",
            Direction::F => "f",
        };
        write!(out, "{d}:{}", self.k)
    }
}

impl std::str::FromStr for CrystalOp {
    type Err = HiggsError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || HiggsError::InvalidInput(format!("bad operator {s:?}; expected f:K or e:K"));
        let (d, k) = s.trim().split_once(':').ok_or_else(bad)?;
        let k: i64 = k.trim().parse().map_err(|_| bad())?;
        match d.trim() {
            "f" => Ok(Self::f(k)),
            "e" => Ok(Self::e(k)),
            _ => Err(bad()),
        }
    }
}

type FKey = (IrrComponent, i64, Sampling);

fn f_cache() -> &'static Mutex<HashMap<FKey, Option<IrrComponent>>> {
    static CACHE: OnceLock<Mutex<HashMap<FKey, Option<IrrComponent>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `f_k(Z)`: the label of the generic quotient of a generic pair of `Z` by
/// one generic section `O(k) ↪ Ker f`; `None` when `rk_k(Ker f) = 0`.
pub fn f_k(z: &IrrComponent, k: i64, sampling: &Sampling) -> Result<Option<IrrComponent>> {
    let key = (z.clone(), k, *sampling);
    if let Some(v) = f_cache().lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let value = compute_f_k(z, k, sampling)?;
    f_cache().lock().unwrap().insert(key, value.clone());
    Ok(value)
}

fn compute_f_k(z: &IrrComponent, k: i64, sampling: &Sampling) -> Result<Option<IrrComponent>> {
    if strata_invariants(z, k, sampling)?.s == 0 {
        return Ok(None);
    }
    let field = PrimeField::generic();
    let label = tag_str(&z.canonical());
    let mut values = Vec::with_capacity(sampling.trials);
    let mut last = String::from("no generic sample");
    for trial in 0..sampling.trials {
        let mut rng = stream(sampling.seed, &[label, tag_i64(k), trial as u64, 0xF1]);
        for _ in 0..RESAMPLES {
            let pair = z.sample(&field, &mut rng)?;
            match pair.quotient_by_sections(k, 1, &mut rng) {
                Ok(shape) => {
                    values.push(IrrComponent::from_shape(&shape));
                    break;
                }
                Err(e @ (HiggsError::NotGeneric(_) | HiggsError::RankTooSmall { .. })) => last = e.to_string(),
                Err(e) => return Err(e),
            }
        }
    }
    majority(&values)
        .map(Some)
        .ok_or(HiggsError::SamplingExhausted { attempts: sampling.trials * RESAMPLES, last })
}

/// `e_k(Z)`: the unique component `Z″` of class `class(Z) + (1,k)` with
/// `f_k(Z″) = Z`, found by a bounded search verified through `f_k`.
/// Candidates failing necessary sheaf-level conditions are skipped.
pub fn e_k(z: &IrrComponent, k: i64, radius: i64, sampling: &Sampling) -> Result<IrrComponent> {
    let class = z.class() + KClass::new(1, k);
    let floor = z.min_twist().map_or(k, |m| m.min(k)) - radius;
    let max_torsion = z.lambda().size() as i64 + k.abs() + radius;
    let candidates: Vec<IrrComponent> = enumerate_components(class, floor)
        .into_iter()
        .filter(|c| c.lambda().size() as i64 <= max_torsion && may_extend(c, z, k))
        .collect();
    let hits: Vec<IrrComponent> = candidates
        .par_iter()
        .map(|c| Ok(strata_invariants(c, k, sampling)?.s > 0 && f_k(c, k, sampling)?.as_ref() == Some(z)))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .zip(candidates)
        .filter_map(|(hit, c)| hit.then_some(c))
        .collect();
    match hits.len() {
        0 => Err(HiggsError::SearchExhausted(format!("e_{k}({z})"))),
        1 => Ok(hits.into_iter().next().expect("one hit")),
        _ => Err(HiggsError::NotUnique(format!(
            "e_{k}({z}): {}",
            hits.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
        ))),
    }
}

fn hom_from_line(twists: &[i64], torsion: usize, m: i64) -> i64 {
    twists.iter().map(|&n| (n - m + 1).max(0)).sum::<i64>() + torsion as i64
}

fn hom_to_line(twists: &[i64], m: i64) -> i64 {
    twists.iter().map(|&n| (m - n + 1).max(0)).sum()
}

/// Necessary conditions, on underlying sheaves only, for the generic sheaf
/// of `cand` to be an extension `0 → O(k) → F″ → F → 0` of the generic
/// sheaf of `z`: the torsion of `F″` embeds into that of `F` (blocks at
/// distinct points, so `λ″ ⊆ λ` part by part), and both `Hom(O(m), ·)` and
/// `Hom(·, O(m))` are subadditive along the sequence.
fn may_extend(cand: &IrrComponent, z: &IrrComponent, k: i64) -> bool {
    let (l2, l) = (cand.lambda().parts(), z.lambda().parts());
    if l2.len() > l.len() || l2.iter().zip(l).any(|(a, b)| a > b) {
        return false;
    }
    if cand.max_twist().is_none_or(|t| t < k) {
        return false;
    }
    let all = cand.twists().iter().chain(z.twists()).copied().chain([k]);
    let lo = all.clone().min().expect("k is present") - 1;
    let hi = all.max().expect("k is present") + 1;
    (lo..=hi).all(|m| {
        hom_from_line(cand.twists(), cand.lambda().size(), m)
            <= hom_from_line(&[k], 0, m) + hom_from_line(z.twists(), z.lambda().size(), m)
            && hom_to_line(cand.twists(), m) <= hom_to_line(z.twists(), m) + hom_to_line(&[k], m)
    })
}

/// `wt(Z) = rank·α₁ + degree·δ`.
pub fn wt(z: &IrrComponent) -> WeightVector {
    z.class().weight()
}

/// `ε_k(Z)`: the generic value of `−rk_k(Ker f)`.
pub fn epsilon_k(z: &IrrComponent, k: i64, sampling: &Sampling) -> Result<i64> {
    Ok(-(strata_invariants(z, k, sampling)?.s as i64))
}

/// `φ_k(Z) = ε_k(Z) + ⟨h₁ + kδ, wt(Z)⟩` with `⟨h₁ + kδ, rα₁ + dδ⟩ = 2r`.
pub fn phi_k(z: &IrrComponent, k: i64, sampling: &Sampling) -> Result<i64> {
    Ok(epsilon_k(z, k, sampling)? + 2 * z.rank() as i64)
}

/// Index of the derived ŝl₂-crystal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sl2Index {
    Zero,
    One,
}

/// The loop operator behind `ẽ_i` (`direction = E`) or `f̃_i` (`F`):
/// `ẽ₁ = e₀`, `f̃₁ = f₀`, `ẽ₀ = f₋₁`, `f̃₀ = e₋₁`.
pub fn sl2hat_op(i: Sl2Index, dir: Direction) -> CrystalOp {
    match (i, dir) {
        (Sl2Index::One, Direction::E) => CrystalOp::e(0),
        (Sl2Index::One, Direction::F) => CrystalOp::f(0),
        (Sl2Index::Zero, Direction::E) => CrystalOp::f(-1),
        (Sl2Index::Zero, Direction::F) => CrystalOp::e(-1),
    }
}

/// `ẽ_i` / `f̃_i` applied to `Z`.
pub fn sl2hat_ops(z: &IrrComponent, i: Sl2Index, dir: Direction, sampling: &Sampling) -> Result<Option<IrrComponent>> {
    sl2hat_op(i, dir).apply(z, sampling)
}

/// `ε̃_i`: `ε̃₁ = ε₀`, `ε̃₀ = ε₋₁`.
pub fn sl2hat_epsilon(z: &IrrComponent, i: Sl2Index, sampling: &Sampling) -> Result<i64> {
    match i {
        Sl2Index::One => epsilon_k(z, 0, sampling),
        Sl2Index::Zero => epsilon_k(z, -1, sampling),
    }
}

/// `φ̃_i`: `φ̃₁ = φ₀`, `φ̃₀ = φ₋₁`.
pub fn sl2hat_phi(z: &IrrComponent, i: Sl2Index, sampling: &Sampling) -> Result<i64> {
    match i {
        Sl2Index::One => phi_k(z, 0, sampling),
        Sl2Index::Zero => phi_k(z, -1, sampling),
    }
}

/// A colored edge `source → target`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CrystalEdge {
    pub source: IrrComponent,
    pub target: IrrComponent,
    pub op: CrystalOp,
}

/// Components as nodes, `f_k` edges and their `e_k` reverses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrystalGraph {
    pub nodes: BTreeSet<IrrComponent>,
    pub edges: BTreeSet<CrystalEdge>,
}

impl CrystalGraph {
    /// The `f`-edges only.
    pub fn f_edges(&self) -> impl Iterator<Item = &CrystalEdge> {
        self.edges.iter().filter(|e| e.op.dir == Direction::F)
    }

    /// Target of the `op`-edge leaving `z`, if any.
    pub fn target(&self, z: &IrrComponent, op: CrystalOp) -> Option<&IrrComponent> {
        self.edges.iter().find(|e| e.source == *z && e.op == op).map(|e| &e.target)
    }

    /// Graphviz rendering; edges are labelled `f:k` / `e:k`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph crystal {\n");
        for n in &self.nodes {
            let _ = writeln!(out, "  \"{n}\";");
        }
        for e in &self.edges {
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{}\"];", e.source, e.target, e.op);
        }
        out.push_str("}\n");
        out
    }
}

/// The crystal graph on all components of the given classes with twists
/// `≥ floor` (only stable ones when requested), with an `f_k` edge for each
/// `k` whose image is again a node, plus the reversed `e_k` edge.
pub fn crystal_graph(
    classes: &[KClass],
    floor: i64,
    ks: &[i64],
    stable_only: bool,
    sampling: &Sampling,
) -> Result<CrystalGraph> {
    let nodes: BTreeSet<IrrComponent> = classes
        .iter()
        .flat_map(|&c| enumerate_components(c, floor))
        .filter(|z| !stable_only || is_stable(z))
        .collect();
    let list: Vec<&IrrComponent> = nodes.iter().collect();
    let found: Vec<Vec<CrystalEdge>> = list
        .par_iter()
        .map(|z| {
            let mut out = Vec::new();
            for &k in ks {
                if let Some(t) = f_k(z, k, sampling)? {
                    if nodes.contains(&t) {
                        out.push(CrystalEdge { source: (*z).clone(), target: t.clone(), op: CrystalOp::f(k) });
                        out.push(CrystalEdge { source: t, target: (*z).clone(), op: CrystalOp::e(k) });
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(CrystalGraph { nodes, edges: found.into_iter().flatten().collect() })
}

/// Violations of the crystal properties at `(Z, k)`: weight shifts,
/// `ε_k`/`φ_k` shifts by one along `f_k` and `e_k`, and `e_k`/`f_k` being
/// mutually inverse. An empty list means all properties hold.
pub fn crystal_violations(z: &IrrComponent, k: i64, radius: i64, sampling: &Sampling) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    let root = WeightVector::root(k);
    let (eps, phi) = (epsilon_k(z, k, sampling)?, phi_k(z, k, sampling)?);
    if let Some(fz) = f_k(z, k, sampling)? {
        if wt(&fz) + root != wt(z) {
            bad.push(format!("wt(f_{k} {z})"));
        }
        if epsilon_k(&fz, k, sampling)? != eps + 1 || phi_k(&fz, k, sampling)? != phi - 1 {
            bad.push(format!("ε/φ at f_{k} {z}"));
        }
        if e_k(&fz, k, radius, sampling)? != *z {
            bad.push(format!("e_{k} f_{k} {z} ≠ {z}"));
        }
    }
    let ez = e_k(z, k, radius, sampling)?;
    if wt(&ez) != wt(z) + root {
        bad.push(format!("wt(e_{k} {z})"));
    }
    if epsilon_k(&ez, k, sampling)? != eps - 1 || phi_k(&ez, k, sampling)? != phi + 1 {
        bad.push(format!("ε/φ at e_{k} {z}"));
    }
    if f_k(&ez, k, sampling)?.as_ref() != Some(z) {
        bad.push(format!("f_{k} e_{k} {z} ≠ {z}"));
    }
    Ok(bad)
}

/// `𝕍_k ⊕ τ_λ`, with `𝕍_{−1} = 0`.
fn ladder(k: i64, lambda: Partition) -> IrrComponent {
    if k < 0 {
        IrrComponent::new(vec![], lambda).expect("torsion component")
    } else {
        IrrComponent::ladder(k as usize, lambda)
    }
}

/// A path of crystal moves from `Z` to `∅`: strip rank with `f_k`, then
/// climb the ladder `(𝕍_k, λ) = f_d(𝕍_{k+1}, λ̄)` with `e_d`,
/// `d = 2k + 2 − ℓ(λ)`, and finally strip `𝕍_K` with `f_{2K}, …, f_0`.
/// Every step is checked against `f_k`.
pub fn path_to_empty(z: &IrrComponent, floor: i64, sampling: &Sampling) -> Result<Vec<(CrystalOp, IrrComponent)>> {
    let mut path = Vec::new();
    let mut cur = z.clone();
    // strip the rank with the largest admissible k
    while cur.rank() > 0 {
        let top = cur.max_twist().expect("positive rank");
        let mut next = None;
        let mut k = top;
        while k >= floor {
            if let Some(t) = f_k(&cur, k, sampling)? {
                next = Some((k, t));
                break;
            }
            k -= 1;
        }
        let (k, t) = next.ok_or(HiggsError::NoPathWithinFloor(floor))?;
        path.push((CrystalOp::f(k), t.clone()));
        cur = t;
    }
    // climb the ladder from (𝕍_{−1}, λ)
    let mut level = -1i64;
    let mut lambda = cur.lambda().clone();
    while !lambda.is_empty() {
        let d = 2 * level + 2 - lambda.len() as i64;
        if d < floor {
            return Err(HiggsError::NoPathWithinFloor(floor));
        }
        let up = ladder(level + 1, lambda.reduced());
        if f_k(&up, d, sampling)?.as_ref() != Some(&cur) {
            return Err(HiggsError::NotGeneric(format!("ladder step f_{d}({up}) ≠ {cur}")));
        }
        path.push((CrystalOp::e(d), up.clone()));
        cur = up;
        level += 1;
        lambda = cur.lambda().clone();
    }
    // strip 𝕍_K with f_{2K}, …, f_0
    while cur.rank() > 0 {
        let k = cur.max_twist().expect("positive rank");
        let t = f_k(&cur, k, sampling)?.ok_or_else(|| HiggsError::NotGeneric(format!("f_{k}({cur}) vanished")))?;
        path.push((CrystalOp::f(k), t.clone()));
        cur = t;
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(s: &str) -> IrrComponent {
        s.parse().unwrap()
    }

    fn sampling() -> Sampling {
        Sampling::new(7, 3)
    }

    #[test]
    fn operator_examples() {
        let s = sampling();
        assert_eq!(f_k(&z("V=[0];L=[]"), 0, &s).unwrap(), Some(IrrComponent::empty()));
        assert_eq!(f_k(&z("V=[2,0];L=[]"), 1, &s).unwrap(), Some(z("V=[0];L=[1]")));
        assert_eq!(f_k(&z("V=[];L=[1]"), 0, &s).unwrap(), None);
        assert_eq!(e_k(&IrrComponent::empty(), 0, 3, &s).unwrap(), z("V=[0];L=[]"));
        assert_eq!(e_k(&z("V=[];L=[1]"), 1, 3, &s).unwrap(), z("V=[2];L=[]"));
    }

    #[test]
    fn crystal_data_examples() {
        let s = sampling();
        assert_eq!(wt(&z("V=[2,0];L=[1]")), WeightVector { a1: 2, delta: 3 });
        assert_eq!(epsilon_k(&z("V=[0,0];L=[]"), 0, &s).unwrap(), -2);
        assert_eq!(phi_k(&z("V=[0,0];L=[]"), 0, &s).unwrap(), 2);
    }

    #[test]
    fn tilde_aliases() {
        let s = sampling();
        let one = |d| sl2hat_ops(&z("V=[0];L=[]"), Sl2Index::One, d, &s).unwrap();
        assert_eq!(one(Direction::F), Some(IrrComponent::empty()));
        assert_eq!(
            sl2hat_ops(&IrrComponent::empty(), Sl2Index::Zero, Direction::F, &s).unwrap(),
            Some(z("V=[-1];L=[]"))
        );
        assert_eq!(
            sl2hat_ops(&z("V=[-1];L=[]"), Sl2Index::Zero, Direction::E, &s).unwrap(),
            Some(IrrComponent::empty())
        );
    }

    #[test]
    fn paths_to_empty() {
        let s = sampling();
        assert!(path_to_empty(&IrrComponent::empty(), -4, &s).unwrap().is_empty());
        let p = path_to_empty(&z("V=[0];L=[]"), -4, &s).unwrap();
        assert_eq!(p, vec![(CrystalOp::f(0), IrrComponent::empty())]);
        let p = path_to_empty(&z("V=[];L=[1]"), -4, &s).unwrap();
        assert!(p.len() <= 4, "{p:?}");
        assert_eq!(p.last().unwrap().1, IrrComponent::empty());
    }

    #[test]
    fn trivial_graph_and_dot() {
        let g = crystal_graph(&[KClass::new(0, 0)], -2, &[0, -1], false, &sampling()).unwrap();
        assert_eq!(g.nodes.len(), 1);
        assert!(g.edges.is_empty());
        assert!(g.to_dot().starts_with("digraph"));
        assert_eq!("f:-1".parse::<CrystalOp>().unwrap(), CrystalOp::f(-1));
    }
}
