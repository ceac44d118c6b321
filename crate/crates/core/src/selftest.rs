//! The acceptance criteria as runnable checks, shared by the test suite and
//! the command-line `selftest`. Each criterion reports a one-line detail.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::components::{dimension_check, enumerate_components, is_stable, IrrComponent};
use crate::drinfeld::{change_of_basis_matrix, ordered_basis, psi_word, verify_relation, Relation};
use crate::euler::{
    chi_torsion_grassmannian, product_sides, random_problem, ChiConfig, Generator, GeneratorWord,
    PRODUCT_FIELD_SIZES,
};
use crate::field::Rationals;
use crate::linalg;
use crate::loopcrystal::{
    crystal_graph, crystal_violations, f_k, path_to_empty, sl2hat_ops, Direction, Sl2Index,
    DEFAULT_SEARCH_RADIUS,
};
use crate::p1sheaf::{random_formkernel_instance, KClass};
use crate::partition::{partitions, Partition};
use crate::rng::{stream, Sampling};
use crate::semicanonical::{rational, rho, semican_torsion, torsion_change_of_basis_det};

/// Seed used when the caller does not choose one.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Wall-clock budget of the symbolic suites.
const TIME_LIMIT: Duration = Duration::from_secs(60);

/// Lowest operator index a path may use: rank stripping needs
/// `k ≤ max twist − |λ|`; on the window `|λ|` reaches `3 + 2·4 = 11`.
const PATH_FLOOR: i64 = -20;

type Outcome = std::result::Result<String, String>;

/// Outcome of one criterion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub index: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl std::fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} [{tag}] {}: {} ({:.1}s)", self.index, self.name, self.detail, self.seconds)
    }
}

/// Names of the criteria, in order.
pub const CRITERIA: [&str; 10] = [
    "relations",
    "basis",
    "crystal axioms",
    "ladder lemma",
    "connectedness",
    "figures",
    "semicanonical torsion",
    "chi engine",
    "kernel lemma",
    "truncation stability",
];

/// Run criterion `index` (1-based) with all randomness derived from `seed`.
pub fn run_criterion(index: usize, seed: u64) -> Option<CriterionReport> {
    let run: fn(u64) -> Outcome = match index {
        1 => |_| relations(),
        2 => |_| basis(),
        3 => crystal_axioms,
        4 => ladder_lemma,
        5 => connectedness,
        6 => figures,
        7 => semicanonical_torsion,
        8 => chi_engine,
        9 => kernel_lemma,
        10 => truncation,
        _ => return None,
    };
    let start = Instant::now();
    let (passed, detail) = match run(seed) {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Some(CriterionReport { index, name: CRITERIA[index - 1], passed, detail, seconds: start.elapsed().as_secs_f64() })
}

/// Run every criterion in order, handing each report to `visit` as it
/// completes.
pub fn run_all(seed: u64, mut visit: impl FnMut(&CriterionReport)) -> Vec<CriterionReport> {
    (1..=CRITERIA.len())
        .map(|i| {
            let r = run_criterion(i, seed).expect("index in range");
            visit(&r);
            r
        })
        .collect()
}


fn z(s: &str) -> IrrComponent {
    s.parse().expect("valid component")
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn timed(start: Instant, detail: String) -> Outcome {
    let t = start.elapsed();
    check(t < TIME_LIMIT, format!("{detail} in {:.1}s", t.as_secs_f64()))
}

/// Components with rank ≤ 2, degree in [−3, 3] and twists ≥ −4.
fn crystal_window() -> Vec<IrrComponent> {
    (0..=2).flat_map(|r| (-3..=3).flat_map(move |d| enumerate_components(KClass::new(r, d), -4))).collect()
}

fn relations() -> Outcome {
    let start = Instant::now();
    let floor = -8;
    let mut rels = Vec::new();
    for d in 1..=4 {
        for d2 in 1..=4 {
            rels.push(Relation::TorsionCommute { d, d2 });
        }
    }
    for d in 1..=3 {
        for n in -4..=4 {
            rels.push(Relation::TorsionPastLine { d, n });
        }
    }
    for n in -4..=4 {
        for l in -4..=4 {
            rels.push(Relation::LineExchange { n, l });
        }
    }
    let failed: Vec<String> = rels
        .par_iter()
        .filter_map(|&r| match verify_relation(r, floor, 0) {
            Ok(true) => None,
            Ok(false) => Some(format!("{r:?}")),
            Err(e) => Some(format!("{r:?}: {e}")),
        })
        .collect();
    if !failed.is_empty() {
        return Err(format!("failed: {failed:?}"));
    }
    timed(start, format!("{} relations exact", rels.len()))
}

fn basis() -> Outcome {
    let start = Instant::now();
    let q = Rationals::default();
    let cases: Vec<(KClass, i64)> = (0..=2)
        .flat_map(|r| (-4..=4).flat_map(move |d| [-2, -3, -4].map(|f| (KClass::new(r, d), f))))
        .collect();
    let bad: Vec<String> = cases
        .par_iter()
        .filter_map(|&(class, floor)| {
            let n = enumerate_components(class, floor).len().max(usize::from(class == KClass::ZERO));
            let words = ordered_basis(class, floor);
            let m = change_of_basis_matrix(class, floor, 3);
            if words.len() != n || m.len() != n {
                return Some(format!("{class} floor {floor}: {} words, {n} components", words.len()));
            }
            (n > 0 && linalg::det(&q, &m).is_zero()).then(|| format!("{class} floor {floor}: singular"))
        })
        .collect();
    if !bad.is_empty() {
        return Err(format!("{bad:?}"));
    }
    timed(start, format!("{} (class, floor) windows", cases.len()))
}

fn crystal_axioms(seed: u64) -> Outcome {
    let sampling = Sampling::new(seed, 5);
    let comps = crystal_window();
    let pairs: Vec<(IrrComponent, i64)> =
        comps.iter().flat_map(|z| (-4..=2).map(move |k| (z.clone(), k))).collect();
    let bad: Vec<String> = pairs
        .par_iter()
        .flat_map_iter(|(z, k)| match crystal_violations(z, *k, DEFAULT_SEARCH_RADIUS, &sampling) {
            Ok(v) => v,
            Err(e) => vec![format!("{z} k={k}: {e}")],
        })
        .collect();
    check(
        bad.is_empty(),
        format!("{} components, {} (Z,k) pairs, {} violations {:?}", comps.len(), pairs.len(), bad.len(), bad.iter().take(5).collect::<Vec<_>>()),
    )
}

fn ladder_lemma(seed: u64) -> Outcome {
    let sampling = Sampling::new(seed, 5);
    let mut n = 0;
    for k in 0..=1usize {
        for size in 0..=3 {
            for lambda in partitions(size).into_iter().filter(|l| l.len() <= 2) {
                let d = 2 * k as i64 + 2 - lambda.len() as i64;
                let top = IrrComponent::ladder(k + 1, lambda.reduced());
                let want = IrrComponent::ladder(k, lambda.clone());
                let got = f_k(&top, d, &sampling).map_err(|e| e.to_string())?;
                if got.as_ref() != Some(&want) {
                    return Err(format!("f_{d}({top}) = {got:?}, expected {want}"));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} ladder steps exact"))
}

fn connectedness(seed: u64) -> Outcome {
    let sampling = Sampling::new(seed, 5);
    let comps = crystal_window();
    let bad: Vec<String> = comps
        .par_iter()
        .filter_map(|z| match path_to_empty(z, PATH_FLOOR, &sampling) {
            Ok(p) if z.is_empty() || p.last().is_some_and(|(_, t)| t.is_empty()) => None,
            Ok(p) => Some(format!("{z}: path ends at {:?}", p.last())),
            Err(e) => Some(format!("{z}: {e}")),
        })
        .collect();
    check(bad.is_empty(), format!("{} components reach ∅, failures {bad:?}", comps.len()))
}

fn figures(seed: u64) -> Outcome {
    let sampling = Sampling::new(seed, 5);
    // first figure: f₀ and f₋₁ among bundles of rank ≤ 2 built from O, O(−1)
    let shown: BTreeSet<IrrComponent> =
        ["V=[];L=[]", "V=[0];L=[]", "V=[-1];L=[]", "V=[0,0];L=[]", "V=[0,-1];L=[]", "V=[-1,-1];L=[]"]
            .into_iter()
            .map(z)
            .collect();
    let classes: Vec<KClass> = (0..=2).flat_map(|r| (-2..=0).map(move |d| KClass::new(r, d))).collect();
    let g = crystal_graph(&classes, -1, &[0, -1], false, &sampling).map_err(|e| e.to_string())?;
    let got: BTreeSet<(String, String, String)> = g
        .f_edges()
        .filter(|e| shown.contains(&e.source) && shown.contains(&e.target))
        .map(|e| (e.op.to_string(), e.source.to_string(), e.target.to_string()))
        .collect();
    let want: BTreeSet<(String, String, String)> = [
        ("f:0", "V=[0,0];L=[]", "V=[0];L=[]"),
        ("f:0", "V=[0];L=[]", "V=[];L=[]"),
        ("f:0", "V=[0,-1];L=[]", "V=[-1];L=[]"),
        ("f:-1", "V=[-1];L=[]", "V=[];L=[]"),
        ("f:-1", "V=[0,-1];L=[]", "V=[0];L=[]"),
        ("f:-1", "V=[-1,-1];L=[]", "V=[-1];L=[]"),
    ]
    .into_iter()
    .map(|(a, b, c)| (a.to_string(), z(b).to_string(), z(c).to_string()))
    .collect();
    if got != want {
        return Err(format!("first figure edges {got:?}"));
    }
    // second figure: stable nodes n_d of rank n and degree d; f̃₁ moves
    // (n, d) → (n−1, d) and f̃₀ moves (n, d) → (n+1, d−1), staying stable
    let stable = |r: i64, d: i64| enumerate_components(KClass::new(r, d), -4).into_iter().find(is_stable);
    let mut edges = 0;
    for r in 0..=2 {
        for d in -2..=0 {
            let Some(node) = stable(r, d) else { continue };
            let one = sl2hat_ops(&node, Sl2Index::One, Direction::F, &sampling).map_err(|e| e.to_string())?;
            if let Some(t) = one {
                if Some(&t) != stable(r - 1, d).as_ref() {
                    return Err(format!("f̃₁({node}) = {t}"));
                }
                edges += 1;
            }
            let zero = sl2hat_ops(&node, Sl2Index::Zero, Direction::F, &sampling).map_err(|e| e.to_string())?;
            if zero.as_ref() != stable(r + 1, d - 1).as_ref() {
                return Err(format!("f̃₀({node}) = {zero:?}"));
            }
            edges += 1;
        }
    }
    Ok(format!("first figure: 6 edges exact; stable chain: {edges} edges exact"))
}

fn semicanonical_torsion(seed: u64) -> Outcome {
    let build = ChiConfig { sampling: Sampling::new(seed, 5), ..ChiConfig::default() };
    let fresh = ChiConfig { sampling: Sampling::new(seed ^ 0x5eed, 5), ..ChiConfig::default() };
    let mut checks = 0;
    for d in 1..=4 {
        let basis = semican_torsion(d, &build).map_err(|e| e.to_string())?;
        if torsion_change_of_basis_det(&basis) != rational(1) {
            return Err(format!("degree {d}: change of basis is not unimodular"));
        }
        for (lambda, f) in &basis {
            for mu in basis.keys() {
                let v = rho(&IrrComponent::new(vec![], mu.clone()).unwrap(), f, &fresh).map_err(|e| e.to_string())?;
                if v != rational(i64::from(mu == lambda)) {
                    return Err(format!("ρ_{mu}(f_{lambda}) = {v}"));
                }
                checks += 1;
            }
        }
        if d == 2 {
            let t = |w: &str| w.parse::<GeneratorWord>().unwrap();
            let f11 = &basis[&Partition::new(vec![1, 1])];
            let f2 = &basis[&Partition::new(vec![2])];
            let ok = f11.terms().len() == 1
                && f11.coefficient(&t("T2")) == rational(1)
                && f2.terms().len() == 2
                && f2.coefficient(&t("T1 T1")) == rational(1)
                && f2.coefficient(&t("T2")) == rational(-2);
            if !ok {
                return Err(format!("degree 2: f(1,1) = {f11}, f(2) = {f2}"));
            }
        }
    }
    Ok(format!("{checks} Kronecker values under a fresh seed; degree-2 elements exact"))
}

fn chi_engine(seed: u64) -> Outcome {
    let mut dual = 0;
    for n in 0..=6usize {
        for a in 0..=n {
            for p in partitions(a) {
                for q in partitions(n - a) {
                    let mu = [p.clone(), q];
                    for m in 0..=n {
                        if chi_torsion_grassmannian(&mu, m) != chi_torsion_grassmannian(&mu, n - m) {
                            return Err(format!("duality fails for {mu:?}, m = {m}"));
                        }
                        dual += 1;
                    }
                }
            }
        }
    }
    let cfg = ChiConfig { field_sizes: PRODUCT_FIELD_SIZES.to_vec(), ..ChiConfig::default() };
    let mut rng = stream(seed, &[8]);
    let problems: Vec<_> = (0..20).map(|_| random_problem(&mut rng)).collect();
    let bad: Vec<String> = problems
        .par_iter()
        .filter_map(|p| match product_sides(p, &cfg) {
            Ok(s) if s.holds() => None,
            Ok(s) => Some(format!("{p:?}: {s:?}")),
            Err(e) => Some(format!("{p:?}: {e}")),
        })
        .collect();
    // every fit is exact: `product_sides` rejects counts off the fitted polynomial
    check(bad.is_empty(), format!("{dual} duality identities; 20 product instances, 40 exact fits; failures {bad:?}"))
}

fn kernel_lemma(seed: u64) -> Outcome {
    let mut rng = stream(seed, &[9]);
    for i in 0..50 {
        let inst = random_formkernel_instance(&mut rng).map_err(|e| e.to_string())?;
        if !inst.holds() {
            return Err(format!("instance {i}: {inst:?}"));
        }
    }
    Ok("50 kernels of type O(m−1)^(d−rk)".into())
}

fn random_word(rng: &mut impl Rng) -> GeneratorWord {
    let len = rng.gen_range(1..=2);
    let gens = (0..len)
        .map(|_| if rng.gen_bool(0.5) { Generator::Tor(rng.gen_range(1..=2)) } else { Generator::Line(rng.gen_range(-2..=2)) })
        .collect();
    GeneratorWord::new(gens).expect("generators are valid")
}

fn truncation(seed: u64) -> Outcome {
    let mut rng = stream(seed, &[10]);
    let floor = -4;
    for i in 0..20 {
        let (a, b) = (random_word(&mut rng), random_word(&mut rng));
        let x = psi_word(&a, floor, 0);
        if x.multiply_word(&b, 0) != x.multiply_word(&b, 5) {
            return Err(format!("product {i}: ψ({a})·{b} depends on the margin"));
        }
    }
    let mut dims = 0;
    for r in 1..=6 {
        for s in 1..=r {
            for n in 0..=6 {
                if !dimension_check(r, s, n).map_err(|e| e.to_string())? {
                    return Err(format!("dimension identity fails at {r}, {s}, {n}"));
                }
                dims += 1;
            }
        }
    }
    Ok(format!("20 products margin-stable; {dims} dimension identities"))
}
