//! Quotients of a pair: by generic sections `O(k)^s ↪ Ker f`, by torsion
//! submodules, and kernels of maps `O(m)^N → F`.

use rand::RngCore;

use super::pair::{add_form_product, form_len, HiggsPair, SheafShape, TorsionShape};
use crate::error::{HiggsError, Result};
use crate::field::Field;
use crate::linalg::{self, Mat};
use crate::partition::Partition;
use crate::poly::{self, Poly};

/// Coordinates on `k^m / S` for a subspace `S`: the non-pivot coordinates
/// after reducing against the RREF basis of `S`.
struct Projector<E> {
    basis: Mat<E>,
    pivots: Vec<usize>,
    keep: Vec<usize>,
}

impl<E: Clone> Projector<E> {
    fn new<F: Field<E = E>>(f: &F, sub: &[Vec<E>], dim: usize) -> Self {
        let mut basis = sub.to_vec();
        let pivots = linalg::rref(f, &mut basis);
        basis.truncate(pivots.len());
        let keep = (0..dim).filter(|c| !pivots.contains(c)).collect();
        Self { basis, pivots, keep }
    }

    fn project<F: Field<E = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        let mut w = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = w[p].clone();
            if !f.is_zero(&c) {
                for (x, y) in w.iter_mut().zip(row) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
        }
        self.keep.iter().map(|&i| w[i].clone()).collect()
    }

    /// Matrix of the operator induced by `op` on the quotient.
    fn induced<F: Field<E = E>>(&self, f: &F, op: &Mat<E>) -> Mat<E> {
        let n = op.len();
        let cols: Vec<Vec<E>> = self
            .keep
            .iter()
            .map(|&c| {
                let e: Vec<E> = (0..n).map(|i| op[i][c].clone()).collect();
                self.project(f, &e)
            })
            .collect();
        linalg::transpose(&cols, self.keep.len())
    }

    fn kills<F: Field<E = E>>(&self, f: &F, op: &Mat<E>) -> bool {
        self.basis
            .iter()
            .all(|b| self.project(f, &linalg::matvec(f, op, b)).iter().all(|x| f.is_zero(x)))
    }
}

fn block_lengths_checked<F: Field>(f: &F, d: &[F::E]) -> Result<Vec<usize>> {
    let deg = poly::degree(f, d).unwrap_or(0);
    let p = f.characteristic();
    if p != 0 && p as usize <= deg {
        return Err(HiggsError::InvalidInput(format!(
            "characteristic {p} too small to identify torsion of degree {deg}"
        )));
    }
    Ok(poly::block_lengths(f, d))
}

impl<F: Field> HiggsPair<F> {
    /// Isomorphism type of `F / i(O(k)^s)` for the given sections of
    /// `Hom(O(k), F)` (they need not lie in `Ker f` here).
    ///
    /// Free part: the profile `j ↦ dim{ψ ∈ Hom(F, O(j)) : ψ∘i = 0}`.
    /// Torsion: invariant factors of presentations on both affine charts.
    pub fn quotient_shape(&self, k: i64, sections: &[Vec<F::E>]) -> Result<SheafShape> {
        let f = self.field();
        let r = self.rank();
        let s = sections.len();
        let twists = self.twists().to_vec();
        let (m0, m1) = self.torsion_dims();
        let split: Vec<(Vec<Vec<F::E>>, Vec<F::E>)> =
            sections.iter().map(|v| self.split_section(k, v)).collect();

        // injectivity: the r×s polynomial matrix into the free part has rank s
        if s > 0 {
            let pm: Vec<Vec<Poly<F::E>>> = (0..r)
                .map(|i| split.iter().map(|(forms, _)| poly::trim(f, forms[i].clone())).collect())
                .collect();
            let rank = if r == 0 { 0 } else { r - poly::smith_invariant_factors(f, &pm).1 };
            if rank < s {
                return Err(HiggsError::NotGeneric("sections are not injective".into()));
            }
        }

        // free part from the profile g(j)
        let target = r - s;
        let mut q_twists = Vec::new();
        if target > 0 {
            let min_n = *twists.last().unwrap();
            let deg_v: i64 = twists.iter().sum();
            let cap = deg_v + (m0 + m1) as i64 - s as i64 * k - (target as i64 - 1) * min_n;
            let g = |j: i64| -> usize {
                let mut offs = Vec::new();
                let mut unknowns = 0;
                for &n in &twists {
                    offs.push(unknowns);
                    unknowns += form_len(j - n);
                }
                let rows_per = form_len(j - k);
                let mut m = linalg::zeros(f, rows_per * s, unknowns);
                for (l, (forms, _)) in split.iter().enumerate() {
                    for (i, &n) in twists.iter().enumerate() {
                        if j >= n && !forms[i].is_empty() {
                            add_form_product(f, &mut m, l * rows_per, offs[i], &forms[i], (j - n) as usize);
                        }
                    }
                }
                unknowns - linalg::rank(f, &m)
            };
            let (mut g_prev, mut prev_count, mut j) = (0usize, 0usize, min_n);
            while prev_count < target {
                if j > cap {
                    return Err(HiggsError::NotGeneric("quotient free part not found".into()));
                }
                let gj = g(j);
                let count = gj - g_prev;
                for _ in prev_count..count {
                    q_twists.push(j);
                }
                prev_count = count;
                g_prev = gj;
                j += 1;
            }
            q_twists.reverse();
        }
        let expected = self.class().degree - s as i64 * k - q_twists.iter().sum::<i64>();

        // finite chart: generators e_1..e_r, T_fin; relations zI − Z and sections
        let mut blocks = Vec::new();
        let mut pres: Vec<Vec<Poly<F::E>>> = vec![Vec::new(); r + m0];
        for t in 0..m0 {
            for (i, row) in pres.iter_mut().enumerate() {
                let v = if i < r {
                    vec![]
                } else {
                    let c = f.neg(&self.zfin()[i - r][t]);
                    if i - r == t { vec![c, f.one()] } else { vec![c] }
                };
                row.push(poly::trim(f, v));
            }
        }
        for (forms, u) in &split {
            for (i, row) in pres.iter_mut().enumerate() {
                let v = if i < r { forms[i].clone() } else { vec![u[i - r].clone()] };
                row.push(poly::trim(f, v));
            }
        }
        let (fin, _) = poly::smith_invariant_factors(f, &pres);
        for d in &fin {
            blocks.extend(block_lengths_checked(f, d)?);
        }

        // chart at ∞: forms dehomogenize to p(1,w), the reversed vector
        let mut pres: Vec<Vec<Poly<F::E>>> = vec![Vec::new(); r + m1];
        for t in 0..m1 {
            for (i, row) in pres.iter_mut().enumerate() {
                let v = if i < r {
                    vec![]
                } else {
                    let c = f.neg(&self.winf()[i - r][t]);
                    if i - r == t { vec![c, f.one()] } else { vec![c] }
                };
                row.push(poly::trim(f, v));
            }
        }
        for (forms, u) in &split {
            for (i, row) in pres.iter_mut().enumerate() {
                let v = if i < r {
                    forms[i].iter().rev().cloned().collect()
                } else {
                    vec![u[m0 + i - r].clone()]
                };
                row.push(poly::trim(f, v));
            }
        }
        let (inf, _) = poly::smith_invariant_factors(f, &pres);
        let mut inf_factors = 0;
        for d in &inf {
            if let Some(v) = poly::valuation_at_zero(f, d).filter(|&v| v > 0) {
                blocks.push(v);
                inf_factors += 1;
            }
        }
        let torsion =
            TorsionShape { blocks: Partition::new(blocks), fin_factors: fin.len(), inf_factors };
        if torsion.degree() as i64 != expected {
            return Err(HiggsError::NotGeneric(format!(
                "torsion degree {} disagrees with class bookkeeping {expected}",
                torsion.degree()
            )));
        }
        Ok(SheafShape { twists: q_twists, torsion })
    }

    /// Quotient by `s` random sections `O(k) ↪ Ker f`.
    pub fn quotient_by_sections(&self, k: i64, s: usize, rng: &mut dyn RngCore) -> Result<SheafShape> {
        let available = self.rank_k(k)?;
        if s > available {
            return Err(HiggsError::RankTooSmall { requested: s, available });
        }
        let basis = self.kernel_sections(k)?;
        let secs: Vec<Vec<F::E>> = (0..s).map(|_| self.random_combination(&basis, rng)).collect();
        let shape = self.quotient_shape(k, &secs)?;
        if !shape.torsion.is_generic() {
            return Err(HiggsError::NotGeneric(format!(
                "quotient torsion {} has a point with several blocks",
                shape.torsion.blocks
            )));
        }
        Ok(shape)
    }

    /// Splitting type of the kernel of the map `O(m)^N → F` given by `N`
    /// sections of `Hom(O(m), F)` (the kernel is torsion-free).
    pub fn map_kernel_twists(&self, m: i64, sections: &[Vec<F::E>]) -> Result<Vec<i64>> {
        let f = self.field();
        let r = self.rank();
        let big_n = sections.len();
        let split: Vec<(Vec<Vec<F::E>>, Vec<F::E>)> =
            sections.iter().map(|v| self.split_section(m, v)).collect();
        let rank_img = if r == 0 || big_n == 0 {
            0
        } else {
            let pm: Vec<Vec<Poly<F::E>>> = (0..r)
                .map(|i| split.iter().map(|(forms, _)| poly::trim(f, forms[i].clone())).collect())
                .collect();
            r - poly::smith_invariant_factors(f, &pm).1
        };
        let rk = big_n - rank_img;
        let tors = self.torsion_degree();
        let h = |j: i64| -> usize {
            let da = form_len(m - j);
            if da == 0 {
                return 0;
            }
            let mut offs = Vec::new();
            let mut rows = 0;
            for &n in self.twists() {
                offs.push(rows);
                rows += form_len(n - j);
            }
            let mut mat = linalg::zeros(f, rows + tors, big_n * da);
            for (l, (forms, u)) in split.iter().enumerate() {
                for (i, p) in forms.iter().enumerate() {
                    if !p.is_empty() {
                        add_form_product(f, &mut mat, offs[i], l * da, p, da - 1);
                    }
                }
                for (c, col) in self.torsion_action_columns(u, da - 1).into_iter().enumerate() {
                    for (t, x) in col.into_iter().enumerate() {
                        mat[rows + t][l * da + c] = x;
                    }
                }
            }
            big_n * da - linalg::rank(f, &mat)
        };
        let mut twists = Vec::new();
        let (mut h_next, mut prev, mut j) = (0usize, 0usize, m);
        while prev < rk {
            if m - j > 4096 {
                return Err(HiggsError::BudgetExceeded("kernel twist search".into()));
            }
            let hj = h(j);
            let count = hj - h_next;
            for _ in prev..count {
                twists.push(j);
            }
            prev = count;
            h_next = hj;
            j -= 1;
        }
        Ok(twists)
    }

    /// `F / S` with the induced Higgs field, for a torsion submodule
    /// `S = S_fin ⊕ S_∞` stable under the module actions and under `tt`.
    pub fn quotient_by_torsion(&self, sub_fin: &[Vec<F::E>], sub_inf: &[Vec<F::E>]) -> Result<Self> {
        let f = self.field();
        let (m0, m1) = self.torsion_dims();
        let pf = Projector::new(f, sub_fin, m0);
        let pi = Projector::new(f, sub_inf, m1);
        let mut whole: Vec<Vec<F::E>> = Vec::new();
        for v in &pf.basis {
            let mut w = v.clone();
            w.extend(std::iter::repeat_n(f.zero(), m1));
            whole.push(w);
        }
        for v in &pi.basis {
            let mut w = vec![f.zero(); m0];
            w.extend(v.iter().cloned());
            whole.push(w);
        }
        let pt = Projector::new(f, &whole, m0 + m1);
        if !pf.kills(f, self.zfin()) || !pi.kills(f, self.winf()) || !pt.kills(f, self.tt()) {
            return Err(HiggsError::InvalidInput("subspace is not an f-stable submodule".into()));
        }
        let z = pf.induced(f, self.zfin());
        let w = pi.induced(f, self.winf());
        let mut q = HiggsPair::with_torsion_operators(f.clone(), self.twists().to_vec(), z, w)?;
        for j in 0..self.rank() {
            for i in 0..self.rank() {
                q.set_vv(j, i, self.vv(j, i).to_vec())?;
            }
            q.set_vt(j, pt.project(f, self.vt(j)))?;
        }
        q.set_tt(pt.induced(f, self.tt()))?;
        Ok(q)
    }

    /// Image of a torsion vector in the coordinates of
    /// [`HiggsPair::quotient_by_torsion`] for the same submodule.
    pub fn project_torsion_vector(&self, sub_fin: &[Vec<F::E>], sub_inf: &[Vec<F::E>], v: &[F::E]) -> Vec<F::E> {
        let f = self.field();
        let (m0, m1) = self.torsion_dims();
        let mut out = Projector::new(f, sub_fin, m0).project(f, &v[..m0]);
        out.extend(Projector::new(f, sub_inf, m1).project(f, &v[m0..]));
        out
    }
}

#[cfg(test)]
mod tests {
    use crate::field::{PrimeField, Rationals};
    use crate::p1sheaf::HiggsPair;
    use crate::partition::Partition;
    use crate::rng::stream;
    use crate::field::Field;

    fn qq() -> Rationals {
        Rationals::default()
    }

    #[test]
    fn hom_profile_examples() {
        let f = qq();
        let p = HiggsPair::from_blocks(f.clone(), vec![2, 0], &[]).unwrap();
        assert_eq!(p.hom_profile(0).unwrap(), 4);
        assert_eq!(p.hom_profile(3).unwrap(), 0);
        let x = f.from_i64(0);
        let mut q = HiggsPair::from_blocks(f.clone(), vec![0], &[(Some(x), 1)]).unwrap();
        q.set_vt(0, vec![f.one()]).unwrap();
        assert_eq!(q.hom_profile(0).unwrap(), 1);
        assert_eq!(q.rank_k(-1).unwrap(), 1);
        let ker = q.kernel_shape().unwrap();
        assert_eq!(ker.twists, vec![-1]);
        assert_eq!(ker.torsion.blocks, Partition::new(vec![1]));
    }

    #[test]
    fn rank_k_of_split_bundles_with_zero_field() {
        let f = qq();
        for tw in [vec![0, 0], vec![0, -1], vec![3, 1, 1, -2]] {
            let p = HiggsPair::from_blocks(f.clone(), tw.clone(), &[]).unwrap();
            for k in -3..4 {
                let expect = tw.iter().filter(|&&n| n >= k).count();
                assert_eq!(p.rank_k(k).unwrap(), expect, "{tw:?} k={k}");
            }
        }
    }

    #[test]
    fn nilpotency_of_torsion_blocks() {
        let f = qq();
        let mut p = HiggsPair::from_blocks(f.clone(), vec![], &[(Some(f.from_i64(1)), 2)]).unwrap();
        // multiplication by the unit 2 + t
        p.set_tt(vec![vec![f.from_i64(2), f.zero()], vec![f.one(), f.from_i64(2)]]).unwrap();
        assert!(!p.is_nilpotent());
        assert!(p.hom_profile(0).is_err());
        // multiplication by t·3
        p.set_tt(vec![vec![f.zero(), f.zero()], vec![f.from_i64(3), f.zero()]]).unwrap();
        assert!(p.is_nilpotent());
        // not a module map
        assert!(p.set_tt(vec![vec![f.zero(), f.one()], vec![f.zero(), f.zero()]]).is_err());
    }

    #[test]
    fn quotients_of_trivial_bundle() {
        let f = PrimeField::generic();
        let p = HiggsPair::from_blocks(f, vec![0, 0], &[]).unwrap();
        let mut rng = stream(1, &[]);
        let q2 = p.quotient_by_sections(0, 2, &mut rng).unwrap();
        assert!(q2.twists.is_empty() && q2.torsion.degree() == 0);
        let q1 = p.quotient_by_sections(0, 1, &mut rng).unwrap();
        assert_eq!(q1.twists, vec![0]);
        assert!(p.quotient_by_sections(0, 3, &mut rng).is_err());
    }

    #[test]
    fn quotient_of_line_by_lower_line_is_torsion() {
        // O(2)/O(0) via a generic quadric: two distinct points, one factor
        let f = PrimeField::generic();
        let p = HiggsPair::from_blocks(f, vec![2], &[]).unwrap();
        let shape = p.quotient_by_sections(0, 1, &mut stream(3, &[])).unwrap();
        assert!(shape.twists.is_empty());
        assert_eq!(shape.torsion.blocks, Partition::new(vec![1, 1]));
        // X² vanishes doubly at z = 0; Y² doubly at ∞
        let shape = p.quotient_shape(0, &[vec![0, 0, 1]]).unwrap();
        assert_eq!(shape.torsion.blocks, Partition::new(vec![2]));
        let shape = p.quotient_shape(0, &[vec![1, 0, 0]]).unwrap();
        assert_eq!(shape.torsion.blocks, Partition::new(vec![2]));
        assert_eq!(shape.torsion.inf_factors, 1);
    }

    #[test]
    fn evaluation_kernel_of_globally_generated_sheaf() {
        let f = PrimeField::generic();
        let p = HiggsPair::from_blocks(f, vec![2, 1], &[(Some(5), 2), (None, 1)]).unwrap();
        let basis: Vec<Vec<u64>> = (0..p.hom_from_line_dim(0))
            .map(|i| (0..p.hom_from_line_dim(0)).map(|j| u64::from(i == j)).collect())
            .collect();
        let tw = p.map_kernel_twists(0, &basis).unwrap();
        // N = 3 + 2 + 3 = 8 sections, rank 2: kernel O(−1)^6
        assert_eq!(tw, vec![-1; 6]);
    }

    #[test]
    fn torsion_quotient_induces_operators() {
        let f = qq();
        let mut p = HiggsPair::from_blocks(f.clone(), vec![0], &[(Some(f.zero()), 2)]).unwrap();
        p.set_tt(vec![vec![f.zero(), f.zero()], vec![f.one(), f.zero()]]).unwrap();
        p.set_vt(0, vec![f.one(), f.zero()]).unwrap();
        // the socle t·e is stable
        let q = p.quotient_by_torsion(&[vec![f.zero(), f.one()]], &[]).unwrap();
        assert_eq!(q.torsion_dims(), (1, 0));
        assert_eq!(q.tt(), &vec![vec![f.zero()]]);
        assert_eq!(q.vt(0), &[f.one()]);
        // the generator is not a submodule
        assert!(p.quotient_by_torsion(&[vec![f.one(), f.zero()]], &[]).is_err());
    }
}
