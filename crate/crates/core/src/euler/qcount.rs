//! Point counts over `F_q` of the chain varieties behind a generator word.
//!
//! For a word `g₁⋯g_t` and a pair `(F, f)` the count is the number of
//! filtrations `0 = F₀ ⊆ F₁ ⊆ ⋯ ⊆ F_t = F` with `F_i / F_{i−1}` of the class
//! of `g_{t−i+1}` and `f(F_i) ⊆ F_{i−1} ⊗ Ω` (every subquotient carries the
//! zero Higgs field). Steps are peeled off from the bottom: a torsion step
//! enumerates submodules killed by `f`, a line step enumerates rank-one
//! subsheaves `τ′ ⊕ φ(O(c))` killed by `f`, with `φ` taken up to scalars
//! and up to `Hom(O(c), τ′)`.
//!
//! Supported shapes: pure torsion words, rank-one words `T⋯T L T⋯T`, and
//! rank-two words `L L T⋯T`. Anything else is `UnsupportedWord`.

use super::subspace::{complement, for_each_projective_point, for_each_subspace, is_stable, CountBudget};
use super::{Generator, GeneratorWord};
use crate::error::{HiggsError, Result};
use crate::field::Field;
use crate::linalg::{self, Mat};
use crate::p1sheaf::HiggsPair;
use crate::poly;

/// Number of chains of `word` on `pair` over its (small, finite) field.
pub fn qcount_word<F: Field>(word: &GeneratorWord, pair: &HiggsPair<F>, budget: &CountBudget) -> Result<u128> {
    if word.class() != pair.class() {
        return Err(HiggsError::InvalidInput(format!(
            "word class {} differs from pair class {}",
            word.class(),
            pair.class()
        )));
    }
    if !pair.is_nilpotent() {
        return Err(HiggsError::NotNilpotent);
    }
    check_shape(word)?;
    count(word.gens(), pair, budget)
}

fn check_shape(word: &GeneratorWord) -> Result<()> {
    let gens = word.gens();
    let lines: Vec<usize> =
        gens.iter().enumerate().filter(|(_, g)| matches!(g, Generator::Line(_))).map(|(i, _)| i).collect();
    let ok = match lines.len() {
        0 | 1 => true,
        2 => lines == [0, 1],
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(HiggsError::UnsupportedWord(format!("{word}: only T…T L T…T and L L T…T shapes are counted")))
    }
}

fn higgs_is_zero<F: Field>(pair: &HiggsPair<F>) -> bool {
    let f = pair.field();
    let r = pair.rank();
    (0..r).all(|i| pair.vt(i).iter().all(|x| f.is_zero(x)))
        && (0..r).all(|j| (0..r).all(|i| pair.vv(j, i).iter().all(|x| f.is_zero(x))))
        && pair.tt().iter().flatten().all(|x| f.is_zero(x))
}

fn block<E: Clone>(m: &Mat<E>, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat<E> {
    m[rows].iter().map(|r| r[cols.clone()].to_vec()).collect()
}

/// Submodules of the torsion part of dimension `dim` killed by `f`, as
/// (finite-chart basis, ∞ basis).
#[allow(clippy::type_complexity)]
pub(crate) fn killed_submodules<F: Field>(
    pair: &HiggsPair<F>,
    dim: usize,
    budget: &CountBudget,
) -> Result<Vec<(Vec<Vec<F::E>>, Vec<Vec<F::E>>)>> {
    let f = pair.field();
    let (m0, m1) = pair.torsion_dims();
    let tt = pair.tt();
    let kf = linalg::kernel(f, &block(tt, 0..m0, 0..m0), m0);
    let ki = linalg::kernel(f, &block(tt, m0..m0 + m1, m0..m0 + m1), m1);
    let stable_in = |basis: &[Vec<F::E>], len: usize, k: usize, op: &Mat<F::E>| -> Result<Vec<Vec<Vec<F::E>>>> {
        let mut out = Vec::new();
        for_each_subspace(f, basis, len, k, budget, &mut |s| {
            if is_stable(f, s, &[op]) {
                out.push(s.to_vec());
            }
            Ok(())
        })?;
        Ok(out)
    };
    let mut out = Vec::new();
    for d0 in 0..=dim.min(kf.len()) {
        let d1 = dim - d0;
        if d1 > ki.len() {
            continue;
        }
        let fins = stable_in(&kf, m0, d0, pair.zfin())?;
        if fins.is_empty() {
            continue;
        }
        let infs = stable_in(&ki, m1, d1, pair.winf())?;
        for a in &fins {
            for b in &infs {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    Ok(out)
}

/// A rank-one subsheaf `τ′ ⊕ φ(O(c))` of a pair.
pub(crate) struct LineSub<E> {
    pub tau_fin: Vec<Vec<E>>,
    pub tau_inf: Vec<Vec<E>>,
    pub c: i64,
    pub phi: Vec<E>,
}

/// Visit every rank-one subsheaf of degree `n` killed by `f`; with
/// `fixed_c`, only those whose line part is `O(fixed_c)`.
pub(crate) fn for_each_line_subsheaf<F: Field>(
    pair: &HiggsPair<F>,
    n: i64,
    fixed_c: Option<i64>,
    budget: &CountBudget,
    visit: &mut dyn FnMut(&LineSub<F::E>) -> Result<()>,
) -> Result<()> {
    let f = pair.field();
    let (m0, m1) = pair.torsion_dims();
    let max_twist = pair.twists().iter().copied().max().unwrap_or(i64::MIN);
    for e in 0..=pair.torsion_degree() {
        let c = n - e as i64;
        if c > max_twist || fixed_c.is_some_and(|fc| fc != c) {
            continue;
        }
        let kernel = pair.kernel_sections(c)?;
        let len = pair.hom_from_line_dim(c);
        let flen = len - pair.torsion_degree();
        for (tf, ti) in killed_submodules(pair, e, budget)? {
            let mut u: Vec<Vec<F::E>> = Vec::new();
            for v in &tf {
                let mut w = vec![f.zero(); len];
                w[flen..flen + m0].clone_from_slice(v);
                u.push(w);
            }
            for v in &ti {
                let mut w = vec![f.zero(); len];
                w[flen + m0..flen + m0 + m1].clone_from_slice(v);
                u.push(w);
            }
            let comp = complement(f, &u, &kernel);
            let sub = LineSub { tau_fin: tf, tau_inf: ti, c, phi: vec![] };
            let mut sub = sub;
            for_each_projective_point(f, &comp, len, budget, &mut |phi| {
                if phi[..flen].iter().all(|x| f.is_zero(x)) {
                    return Ok(());
                }
                sub.phi = phi.to_vec();
                visit(&sub)
            })?;
        }
    }
    Ok(())
}

/// The torsion pair `F / (τ′ ⊕ φ(O(c)))` for a rank-one `F = O(a) ⊕ T`.
pub(crate) fn rank_one_quotient<F: Field>(pair: &HiggsPair<F>, sub: &LineSub<F::E>) -> Result<HiggsPair<F>> {
    let f = pair.field();
    let low = pair.quotient_by_torsion(&sub.tau_fin, &sub.tau_inf)?;
    let (forms, u) = pair.split_section(sub.c, &sub.phi);
    let p = &forms[0];
    let ubar = pair.project_torsion_vector(&sub.tau_fin, &sub.tau_inf, &u);
    let (m0, m1) = low.torsion_dims();
    let tt = low.tt();
    let v = low.vt(0);
    // finite chart: k[z]_{<D} ⊕ T_fin, relation p(z)·1 + ū_fin = 0
    let pz = poly::trim(f, p.clone());
    let dz = poly::degree(f, &pz).unwrap_or(0);
    let lc_inv = f.inv(&pz[dz]);
    let n0 = dz + m0;
    let mut z = linalg::zeros(f, n0, n0);
    let mut hz = linalg::zeros(f, n0, n0);
    let zf = low.zfin();
    let mut zpow_v: Vec<F::E> = v[..m0].to_vec();
    for j in 0..dz {
        if j + 1 < dz {
            z[j + 1][j] = f.one();
        } else {
            for i in 0..dz {
                z[i][j] = f.neg(&f.mul(&pz[i], &lc_inv));
            }
            for t in 0..m0 {
                z[dz + t][j] = f.neg(&f.mul(&ubar[t], &lc_inv));
            }
        }
        for t in 0..m0 {
            hz[dz + t][j] = zpow_v[t].clone();
        }
        zpow_v = linalg::matvec(f, zf, &zpow_v);
    }
    for a in 0..m0 {
        for b in 0..m0 {
            z[dz + a][dz + b] = zf[a][b].clone();
            hz[dz + a][dz + b] = tt[a][b].clone();
        }
    }
    // chart at ∞: k[w]_{<e} ⊕ T_∞, relation w^e·1 + unit(W)^{-1}ū_∞ = 0
    let da = p.len() - 1;
    let pw: Vec<F::E> = (0..=da).map(|j| p[da - j].clone()).collect();
    let e = poly::valuation_at_zero(f, &pw).unwrap_or(0);
    let unit: Vec<F::E> = pw[e..].to_vec();
    let wf = low.winf();
    let umat = poly::eval_matrix(f, &unit, wf);
    let uprime = if m1 == 0 {
        vec![]
    } else {
        linalg::solve(f, &umat, &ubar[m0..])
            .ok_or_else(|| HiggsError::InvalidInput("unit at ∞ is not invertible".into()))?
    };
    let n1 = e + m1;
    let mut w = linalg::zeros(f, n1, n1);
    let mut hw = linalg::zeros(f, n1, n1);
    let mut wpow_v: Vec<F::E> = v[m0..].to_vec();
    for j in 0..e {
        if j + 1 < e {
            w[j + 1][j] = f.one();
        } else {
            for t in 0..m1 {
                w[e + t][j] = f.neg(&uprime[t]);
            }
        }
        for t in 0..m1 {
            hw[e + t][j] = wpow_v[t].clone();
        }
        wpow_v = linalg::matvec(f, wf, &wpow_v);
    }
    for a in 0..m1 {
        for b in 0..m1 {
            w[e + a][e + b] = wf[a][b].clone();
            hw[e + a][e + b] = tt[m0 + a][m0 + b].clone();
        }
    }
    let mut q = HiggsPair::with_torsion_operators(f.clone(), vec![], z, w)?;
    let mut h = linalg::zeros(f, n0 + n1, n0 + n1);
    for a in 0..n0 {
        for b in 0..n0 {
            h[a][b] = hz[a][b].clone();
        }
    }
    for a in 0..n1 {
        for b in 0..n1 {
            h[n0 + a][n0 + b] = hw[a][b].clone();
        }
    }
    q.set_tt(h)?;
    Ok(q)
}

/// `f(F) ⊆ G ⊗ Ω` for `G = τ′ ⊕ φ(O(c))`: torsion maps into `τ′` and each
/// summand's image factors through `G`.
fn image_inside<F: Field>(pair: &HiggsPair<F>, sub: &LineSub<F::E>) -> bool {
    let f = pair.field();
    let (m0, m1) = pair.torsion_dims();
    let m = m0 + m1;
    let tau: Vec<Vec<F::E>> = sub
        .tau_fin
        .iter()
        .map(|v| {
            let mut w = v.clone();
            w.extend(std::iter::repeat_n(f.zero(), m1));
            w
        })
        .chain(sub.tau_inf.iter().map(|v| {
            let mut w = vec![f.zero(); m0];
            w.extend(v.iter().cloned());
            w
        }))
        .collect();
    let cols = linalg::transpose(pair.tt(), m);
    if !linalg::contained(f, &cols, &tau) {
        return false;
    }
    (0..pair.rank()).all(|i| {
        let k = pair.twists()[i] + 2;
        let target = pair.higgs_on_summand(i);
        let len = target.len();
        let mut span: Vec<Vec<F::E>> = if sub.c >= k {
            pair.precompose_monomials(sub.c, &sub.phi, (sub.c - k) as usize)
        } else {
            vec![]
        };
        for t in &tau {
            let mut w = vec![f.zero(); len - m];
            w.extend(t.iter().cloned());
            span.push(w);
        }
        linalg::in_span(f, &span, &target)
    })
}

fn count<F: Field>(gens: &[Generator], pair: &HiggsPair<F>, budget: &CountBudget) -> Result<u128> {
    let Some((last, rest)) = gens.split_last() else {
        return Ok(u128::from(pair.rank() == 0 && pair.torsion_degree() == 0));
    };
    match *last {
        Generator::Tor(d) => {
            if rest.is_empty() {
                return Ok(u128::from(pair.rank() == 0 && pair.torsion_degree() == d && higgs_is_zero(pair)));
            }
            let mut total = 0u128;
            for (a, b) in killed_submodules(pair, d, budget)? {
                total += count(rest, &pair.quotient_by_torsion(&a, &b)?, budget)?;
            }
            Ok(total)
        }
        Generator::Line(n) => match pair.rank() {
            1 if rest.is_empty() => Ok(u128::from(higgs_is_zero(pair))),
            1 => {
                let mut total = 0u128;
                for_each_line_subsheaf(pair, n, None, budget, &mut |sub| {
                    total += count(rest, &rank_one_quotient(pair, sub)?, budget)?;
                    Ok(())
                })?;
                Ok(total)
            }
            2 if matches!(rest, [Generator::Line(_)]) => {
                let mut total = 0u128;
                for_each_line_subsheaf(pair, n, None, budget, &mut |sub| {
                    total += u128::from(image_inside(pair, sub));
                    Ok(())
                })?;
                Ok(total)
            }
            _ => Err(HiggsError::UnsupportedWord(format!("line step on a rank-{} sheaf", pair.rank()))),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GaloisField;

    fn word(s: &str) -> GeneratorWord {
        s.parse().unwrap()
    }

    #[test]
    fn two_points_with_zero_field() {
        for q in [2, 3, 4, 5] {
            let f = GaloisField::new(q).unwrap();
            let p = HiggsPair::from_blocks(f.clone(), vec![], &[(Some(f.zero()), 1), (Some(f.one()), 1)]).unwrap();
            let b = CountBudget::default();
            assert_eq!(qcount_word(&word("T2"), &p, &b).unwrap(), 1);
            assert_eq!(qcount_word(&word("T1 T1"), &p, &b).unwrap(), 2);
        }
    }

    #[test]
    fn length_two_block_with_uniformizer_field() {
        for q in [2, 3, 5] {
            let f = GaloisField::new(q).unwrap();
            let mut p = HiggsPair::from_blocks(f.clone(), vec![], &[(Some(f.zero()), 2)]).unwrap();
            p.set_tt(vec![vec![f.zero(), f.zero()], vec![f.one(), f.zero()]]).unwrap();
            let b = CountBudget::default();
            assert_eq!(qcount_word(&word("T1 T1"), &p, &b).unwrap(), 1);
            assert_eq!(qcount_word(&word("T2"), &p, &b).unwrap(), 0);
        }
    }

    #[test]
    fn double_point_with_zero_field_counts_a_projective_line() {
        // O_x ⊕ O_x: every line is a submodule, q + 1 of them
        let f = GaloisField::new(3).unwrap();
        let x = Some(f.zero());
        let p = HiggsPair::from_blocks(f.clone(), vec![], &[(x, 1), (x, 1)]).unwrap();
        assert_eq!(qcount_word(&word("T1 T1"), &p, &CountBudget::default()).unwrap(), 4);
    }

    #[test]
    fn line_subsheaves_of_a_line_bundle() {
        // T(1)·L(0) on O(1): subsheaves O ⊆ O(1) are sections up to scalar, q + 1
        let f = GaloisField::new(5).unwrap();
        let p = HiggsPair::from_blocks(f.clone(), vec![1], &[]).unwrap();
        let b = CountBudget::default();
        assert_eq!(qcount_word(&word("T1 L0"), &p, &b).unwrap(), 6);
        assert_eq!(qcount_word(&word("L1"), &p, &b).unwrap(), 1);
        // O(1) ⊕ O_x: L(0)·T(1) takes the torsion first (1 way)
        let p = HiggsPair::from_blocks(f.clone(), vec![0], &[(Some(f.zero()), 1)]).unwrap();
        assert_eq!(qcount_word(&word("L0 T1"), &p, &b).unwrap(), 1);
        // T(1)·L(0) on O ⊕ O_x: O ↪ with any torsion component up to
        // scalars (q), or O(−1) ⊕ O_x for any of the q + 1 points of O(−1) ↪ O
        assert_eq!(qcount_word(&word("T1 L0"), &p, &b).unwrap(), 11);
    }

    #[test]
    fn two_lines_in_a_trivial_bundle() {
        let f = GaloisField::new(3).unwrap();
        let p = HiggsPair::from_blocks(f.clone(), vec![0, 0], &[]).unwrap();
        assert_eq!(qcount_word(&word("L0 L0"), &p, &CountBudget::default()).unwrap(), 4);
        let p = HiggsPair::from_blocks(f.clone(), vec![1, -1], &[]).unwrap();
        // any O(−1) ↪ O(1) ⊕ O(−1) up to scalars, saturated or not: P³(F₃)
        assert_eq!(qcount_word(&word("L1 L-1"), &p, &CountBudget::default()).unwrap(), 40);
        assert!(matches!(
            qcount_word(&word("L0 T1 L-1"), &HiggsPair::from_blocks(f.clone(), vec![0, 0], &[]).unwrap(), &CountBudget::default()),
            Err(HiggsError::UnsupportedWord(_))
        ));
    }

    #[test]
    fn nonzero_field_into_torsion() {
        // O ⊕ O_x with f(1) the generator of O_x
        let f = GaloisField::new(3).unwrap();
        let mut p = HiggsPair::from_blocks(f.clone(), vec![0], &[(Some(f.zero()), 1)]).unwrap();
        p.set_vt(0, vec![f.one()]).unwrap();
        let b = CountBudget::default();
        // only O(−1) ⊕ O_x with the section vanishing at x is killed
        assert_eq!(qcount_word(&word("T1 L0"), &p, &b).unwrap(), 1);
        assert_eq!(qcount_word(&word("L0 T1"), &p, &b).unwrap(), 1);
        assert_eq!(qcount_word(&word("L1"), &p, &b).unwrap(), 0);
    }

    #[test]
    fn nonzero_field_between_summands() {
        // O(2) ⊕ O with f: O → O(2) ⊗ Ω the identity
        let f = GaloisField::new(3).unwrap();
        let mut p = HiggsPair::from_blocks(f.clone(), vec![2, 0], &[]).unwrap();
        p.set_vv(0, 1, vec![f.one()]).unwrap();
        let b = CountBudget::default();
        assert_eq!(qcount_word(&word("L0 L2"), &p, &b).unwrap(), 1);
        assert_eq!(qcount_word(&word("L2 L0"), &p, &b).unwrap(), 0);
        assert_eq!(qcount_word(&word("L1 L1"), &p, &b).unwrap(), 0);
    }

    #[test]
    fn quotients_of_a_line_bundle_by_sections() {
        // flags O ⊂ O(1)′ ⊂ O(2): (q + 1)², and all q² + q + 1 sections for T2
        for q in [2u128, 3, 4] {
            let f = GaloisField::new(q as u64).unwrap();
            let p = HiggsPair::from_blocks(f.clone(), vec![2], &[]).unwrap();
            let b = CountBudget::default();
            assert_eq!(qcount_word(&word("T1 T1 L0"), &p, &b).unwrap(), (q + 1) * (q + 1));
            assert_eq!(qcount_word(&word("T2 L0"), &p, &b).unwrap(), q * q + q + 1);
            assert_eq!(qcount_word(&word("T1 L0 T1"), &p, &b).unwrap(), 0);
        }
    }
}
