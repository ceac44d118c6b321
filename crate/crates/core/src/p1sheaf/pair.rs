//! Explicit sheaf-with-Higgs-field pairs over a field.
//!
//! A pair is `F = V ⊕ T` with `V = ⊕ O(nᵢ)` split and `T` a finite-length
//! module, stored as two vector spaces: `T_fin` with the action `Z` of the
//! affine coordinate `z = X/Y` (any `k[z]`-module, so support points may be
//! irrational), and `T_∞` with the nilpotent action `W` of `w = Y/X`.
//! `O(m)` is trivialized by `Y^m` on the finite chart and by `X^m` near ∞, so
//! a form `p` of degree `a` acts on `T_fin` as `p(Z,1)` and on `T_∞` as
//! `p(1,W)`, and `T(−2) ≅ T` tautologically.
//!
//! The Higgs field `f : F → F(−2)` has blocks `vv[j][i]` (a form of degree
//! `nⱼ − nᵢ − 2` from `O(nᵢ)` to `O(nⱼ)(−2)`), `vt[i] ∈ T` (image of the
//! local generator of `O(nᵢ)`), and `tt` (a module endomorphism of `T`).

use rand::RngCore;

use crate::error::{HiggsError, Result};
use crate::field::Field;
use crate::linalg::{self, Mat};
use crate::p1sheaf::KClass;
use crate::partition::Partition;
use crate::poly::{self, Poly};

/// Torsion isomorphism data read off invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorsionShape {
    /// Every local block length, over all (geometric) points.
    pub blocks: Partition,
    /// Number of non-unit invariant factors on the finite chart.
    pub fin_factors: usize,
    /// Number of blocks supported at ∞.
    pub inf_factors: usize,
}

impl TorsionShape {
    /// Every point carries at most one block.
    pub fn is_generic(&self) -> bool {
        self.fin_factors <= 1 && self.inf_factors <= 1
    }

    pub fn degree(&self) -> usize {
        self.blocks.size()
    }
}

/// Isomorphism type of a sheaf up to the position of torsion points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SheafShape {
    /// Weakly decreasing splitting type of the free part.
    pub twists: Vec<i64>,
    pub torsion: TorsionShape,
}

impl SheafShape {
    pub fn class(&self) -> KClass {
        KClass::new(
            self.twists.len() as i64,
            self.twists.iter().sum::<i64>() + self.torsion.degree() as i64,
        )
    }
}

/// Shape of a quotient `F / i(O(k)^s)`.
pub type QuotientShape = SheafShape;

/// A coherent sheaf on P¹ with a Higgs field, over the field `F`.
#[derive(Clone, Debug)]
pub struct HiggsPair<F: Field> {
    field: F,
    twists: Vec<i64>,
    zfin: Mat<F::E>,
    winf: Mat<F::E>,
    vv: Vec<Vec<Vec<F::E>>>,
    vt: Vec<Vec<F::E>>,
    tt: Mat<F::E>,
}

/// Number of coefficients of a binary form of degree `deg` (0 if negative).
pub(super) fn form_len(deg: i64) -> usize {
    (deg + 1).max(0) as usize
}

/// Offsets of per-summand form blocks of degree `nᵢ − shift` in a
/// concatenated coordinate vector, and the total length.
pub(super) fn form_offsets(twists: &[i64], shift: i64) -> (Vec<usize>, usize) {
    let mut offs = Vec::with_capacity(twists.len());
    let mut acc = 0;
    for &n in twists {
        offs.push(acc);
        acc += form_len(n - shift);
    }
    (offs, acc)
}

/// `big[row0 + c + t][col0 + c] += p[t]` for `c ≤ da`: the matrix of
/// multiplication by the form `p` on forms of degree `da`.
pub(super) fn add_form_product<F: Field>(
    f: &F,
    big: &mut Mat<F::E>,
    row0: usize,
    col0: usize,
    p: &[F::E],
    da: usize,
) {
    for c in 0..=da {
        for (t, pt) in p.iter().enumerate() {
            let cell = &mut big[row0 + c + t][col0 + c];
            *cell = f.add(cell, pt);
        }
    }
}

impl<F: Field> HiggsPair<F> {
    /// Pair with zero Higgs field, torsion given by explicit operators.
    pub fn with_torsion_operators(
        field: F,
        twists: Vec<i64>,
        zfin: Mat<F::E>,
        winf: Mat<F::E>,
    ) -> Result<Self> {
        crate::partition::check_decreasing(&twists)?;
        let (m0, m1) = (zfin.len(), winf.len());
        if zfin.iter().any(|r| r.len() != m0) || winf.iter().any(|r| r.len() != m1) {
            return Err(HiggsError::InvalidInput("torsion operators must be square".into()));
        }
        if !is_nilpotent_matrix(&field, &winf) {
            return Err(HiggsError::InvalidInput("w must act nilpotently at ∞".into()));
        }
        let r = twists.len();
        let vv = (0..r)
            .map(|j| (0..r).map(|i| vec![field.zero(); form_len(twists[j] - twists[i] - 2)]).collect())
            .collect();
        let m = m0 + m1;
        let vt = vec![vec![field.zero(); m]; r];
        let tt = linalg::zeros(&field, m, m);
        Ok(Self { field, twists, zfin, winf, vv, vt, tt })
    }

    /// Pair with zero Higgs field whose torsion is a sum of cyclic blocks
    /// `(point, length)`; `None` is the point at infinity. Finite blocks come
    /// first in `T`, in the given order, then the blocks at ∞.
    pub fn from_blocks(field: F, twists: Vec<i64>, blocks: &[(Option<F::E>, usize)]) -> Result<Self> {
        let m0: usize = blocks.iter().filter(|b| b.0.is_some()).map(|b| b.1).sum();
        let m1: usize = blocks.iter().filter(|b| b.0.is_none()).map(|b| b.1).sum();
        let mut z = linalg::zeros(&field, m0, m0);
        let mut w = linalg::zeros(&field, m1, m1);
        for ((pt, len), off) in blocks.iter().zip(block_offsets(blocks)) {
            match pt {
                Some(a) => {
                    for j in 0..*len {
                        z[off + j][off + j] = a.clone();
                        if j + 1 < *len {
                            z[off + j + 1][off + j] = field.one();
                        }
                    }
                }
                None => {
                    let off = off - m0;
                    for j in 0..len.saturating_sub(1) {
                        w[off + j + 1][off + j] = field.one();
                    }
                }
            }
        }
        Self::with_torsion_operators(field, twists, z, w)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    /// `(dim T_fin, dim T_∞)`.
    pub fn torsion_dims(&self) -> (usize, usize) {
        (self.zfin.len(), self.winf.len())
    }

    pub fn torsion_degree(&self) -> usize {
        self.zfin.len() + self.winf.len()
    }

    pub fn zfin(&self) -> &Mat<F::E> {
        &self.zfin
    }

    pub fn winf(&self) -> &Mat<F::E> {
        &self.winf
    }

    pub fn vv(&self, j: usize, i: usize) -> &[F::E] {
        &self.vv[j][i]
    }

    pub fn vt(&self, i: usize) -> &[F::E] {
        &self.vt[i]
    }

    pub fn tt(&self) -> &Mat<F::E> {
        &self.tt
    }

    pub fn class(&self) -> KClass {
        KClass::new(
            self.rank() as i64,
            self.twists.iter().sum::<i64>() + self.torsion_degree() as i64,
        )
    }

    /// Set the form `O(nᵢ) → O(nⱼ)(−2)`.
    pub fn set_vv(&mut self, j: usize, i: usize, form: Vec<F::E>) -> Result<()> {
        if form.len() != self.vv[j][i].len() {
            return Err(HiggsError::InvalidInput(format!(
                "form ({j},{i}) must have {} coefficients",
                self.vv[j][i].len()
            )));
        }
        self.vv[j][i] = form;
        Ok(())
    }

    /// Set the image of the local generator of `O(nᵢ)` in `T`.
    pub fn set_vt(&mut self, i: usize, v: Vec<F::E>) -> Result<()> {
        if v.len() != self.torsion_degree() {
            return Err(HiggsError::InvalidInput("vt vector has wrong length".into()));
        }
        self.vt[i] = v;
        Ok(())
    }

    /// Set the torsion endomorphism; it must be a module map, i.e. commute
    /// with `Z` and `W` and respect the finite/∞ splitting.
    pub fn set_tt(&mut self, tt: Mat<F::E>) -> Result<()> {
        let f = &self.field;
        let (m0, m1) = self.torsion_dims();
        let m = m0 + m1;
        if tt.len() != m || tt.iter().any(|r| r.len() != m) {
            return Err(HiggsError::InvalidInput("tt has wrong shape".into()));
        }
        let cross = (0..m0).any(|i| (m0..m).any(|j| !f.is_zero(&tt[i][j]) || !f.is_zero(&tt[j][i])));
        let block = |lo: usize, hi: usize| -> Mat<F::E> {
            (lo..hi).map(|i| tt[i][lo..hi].to_vec()).collect()
        };
        let (a, b) = (block(0, m0), block(m0, m));
        let commutes = |x: &Mat<F::E>, y: &Mat<F::E>| linalg::matmul(f, x, y) == linalg::matmul(f, y, x);
        if cross || !commutes(&a, &self.zfin) || !commutes(&b, &self.winf) {
            return Err(HiggsError::InvalidInput("tt is not a module endomorphism".into()));
        }
        self.tt = tt;
        Ok(())
    }

    /// Nilpotency: the bundle part is automatically nilpotent, so this is
    /// nilpotency of the torsion endomorphism.
    pub fn is_nilpotent(&self) -> bool {
        is_nilpotent_matrix(&self.field, &self.tt)
    }

    fn require_nilpotent(&self) -> Result<()> {
        if self.is_nilpotent() {
            Ok(())
        } else {
            Err(HiggsError::NotNilpotent)
        }
    }

    /// Dimension of `Hom(O(k), F)`.
    pub fn hom_from_line_dim(&self, k: i64) -> usize {
        form_offsets(&self.twists, k).1 + self.torsion_degree()
    }

    /// Columns `(p(Z,1)·u_fin ; p(1,W)·u_∞)` for the monomial basis of forms
    /// `p` of degree `da`: the action of forms on a torsion vector `u`.
    pub fn torsion_action_columns(&self, u: &[F::E], da: usize) -> Vec<Vec<F::E>> {
        let f = &self.field;
        let (m0, _) = self.torsion_dims();
        let mut fin = vec![u[..m0].to_vec()];
        let mut inf = vec![u[m0..].to_vec()];
        for c in 1..=da {
            fin.push(linalg::matvec(f, &self.zfin, &fin[c - 1]));
            inf.push(linalg::matvec(f, &self.winf, &inf[c - 1]));
        }
        (0..=da)
            .map(|c| {
                let mut col = fin[c].clone();
                col.extend_from_slice(&inf[da - c]);
                col
            })
            .collect()
    }

    /// Matrix of `φ ↦ f∘φ` from `Hom(O(k), F)` to `Hom(O(k), F(−2))`.
    pub fn compose_matrix(&self, k: i64) -> Mat<F::E> {
        let f = &self.field;
        let m = self.torsion_degree();
        let (src, src_len) = form_offsets(&self.twists, k);
        let (tgt, tgt_len) = form_offsets(&self.twists, k + 2);
        let mut big = linalg::zeros(f, tgt_len + m, src_len + m);
        for (i, &ni) in self.twists.iter().enumerate() {
            if ni < k {
                continue;
            }
            let da = (ni - k) as usize;
            for (j, &nj) in self.twists.iter().enumerate() {
                let g = &self.vv[j][i];
                if !g.is_empty() && nj - 2 - k >= 0 {
                    add_form_product(f, &mut big, tgt[j], src[i], g, da);
                }
            }
            for (c, col) in self.torsion_action_columns(&self.vt[i], da).into_iter().enumerate() {
                for (t, x) in col.into_iter().enumerate() {
                    big[tgt_len + t][src[i] + c] = x;
                }
            }
        }
        for t in 0..m {
            for u in 0..m {
                big[tgt_len + t][src_len + u] = self.tt[t][u].clone();
            }
        }
        big
    }

    /// Basis of `{φ ∈ Hom(O(k), F) : f∘φ = 0} = Hom(O(k), Ker f)`.
    pub fn kernel_sections(&self, k: i64) -> Result<Vec<Vec<F::E>>> {
        self.require_nilpotent()?;
        Ok(linalg::kernel(&self.field, &self.compose_matrix(k), self.hom_from_line_dim(k)))
    }

    /// `h(k) = dim Hom(O(k), Ker f)`.
    pub fn hom_profile(&self, k: i64) -> Result<usize> {
        self.require_nilpotent()?;
        let m = self.compose_matrix(k);
        Ok(self.hom_from_line_dim(k) - linalg::rank(&self.field, &m))
    }

    /// `rk_k(Ker f) = h(k) − h(k+1)`.
    pub fn rank_k(&self, k: i64) -> Result<usize> {
        Ok(self.hom_profile(k)? - self.hom_profile(k + 1)?)
    }

    /// The form block as a polynomial matrix on the finite chart.
    fn vv_poly_matrix(&self) -> Vec<Vec<Poly<F::E>>> {
        self.vv
            .iter()
            .map(|row| row.iter().map(|g| poly::trim(&self.field, g.clone())).collect())
            .collect()
    }

    /// Rank of `Ker f`: `r` minus the generic rank of the form block.
    pub fn kernel_rank(&self) -> usize {
        let r = self.rank();
        if r == 0 {
            return 0;
        }
        let (_, free) = poly::smith_invariant_factors(&self.field, &self.vv_poly_matrix());
        free
    }

    /// Isomorphism type of `Ker f`. The free part comes from the differences
    /// of `h`, the torsion part is `ker(tt)` with the restricted actions.
    pub fn kernel_shape(&self) -> Result<SheafShape> {
        self.require_nilpotent()?;
        let f = &self.field;
        let rk = self.kernel_rank();
        let top = self.twists.first().copied().unwrap_or(0);
        let mut twists = Vec::new();
        let mut prev_count = 0usize;
        let mut h_next = self.hom_profile(top + 1)?;
        let mut k = top;
        while prev_count < rk {
            let h = self.hom_profile(k)?;
            let count = h - h_next;
            for _ in prev_count..count {
                twists.push(k);
            }
            prev_count = count;
            h_next = h;
            k -= 1;
            if top - k > 4096 {
                return Err(HiggsError::BudgetExceeded("kernel twist search".into()));
            }
        }
        let (m0, m1) = self.torsion_dims();
        let sub = |lo: usize, hi: usize, op: &Mat<F::E>| -> Mat<F::E> {
            let block: Mat<F::E> = (lo..hi).map(|i| self.tt[i][lo..hi].to_vec()).collect();
            let basis = linalg::kernel(f, &block, hi - lo);
            restrict_operator(f, &basis, op)
        };
        let torsion = torsion_shape(f, &sub(0, m0, &self.zfin), &sub(m0, m0 + m1, &self.winf))?;
        Ok(SheafShape { twists, torsion })
    }

    /// `deg Im f = deg F − deg Ker f`.
    pub fn image_degree(&self) -> Result<i64> {
        Ok(self.class().degree - self.kernel_shape()?.class().degree)
    }

    /// Torsion type of `F` itself.
    pub fn torsion_shape(&self) -> Result<TorsionShape> {
        torsion_shape(&self.field, &self.zfin, &self.winf)
    }

    /// `f` restricted to the summand `O(nᵢ)`, as a vector of
    /// `Hom(O(nᵢ + 2), F)` (i.e. of `Hom(O(nᵢ), F(−2))`).
    pub fn higgs_on_summand(&self, i: usize) -> Vec<F::E> {
        let (offs, len) = form_offsets(&self.twists, self.twists[i] + 2);
        let mut v = vec![self.field.zero(); len];
        for j in 0..self.rank() {
            for (t, x) in self.vv[j][i].iter().enumerate() {
                v[offs[j] + t] = x.clone();
            }
        }
        v.extend_from_slice(&self.vt[i]);
        v
    }

    /// For `φ ∈ Hom(O(c), F)`, the compositions `φ∘a` with the monomial
    /// forms `a = X^s Y^{da−s}` as vectors of `Hom(O(c − da), F)`.
    pub fn precompose_monomials(&self, c: i64, phi: &[F::E], da: usize) -> Vec<Vec<F::E>> {
        let (forms, u) = self.split_section(c, phi);
        let (offs, len) = form_offsets(&self.twists, c - da as i64);
        let tors = self.torsion_action_columns(&u, da);
        (0..=da)
            .map(|s| {
                let mut v = vec![self.field.zero(); len];
                for (j, p) in forms.iter().enumerate() {
                    for (t, x) in p.iter().enumerate() {
                        v[offs[j] + t + s] = x.clone();
                    }
                }
                v.extend_from_slice(&tors[s]);
                v
            })
            .collect()
    }

    /// Split a vector of `Hom(O(k), F)` into its forms (one per summand,
    /// empty when `nᵢ < k`) and its torsion part.
    pub fn split_section(&self, k: i64, v: &[F::E]) -> (Vec<Vec<F::E>>, Vec<F::E>) {
        let (offs, len) = form_offsets(&self.twists, k);
        let forms = self
            .twists
            .iter()
            .zip(&offs)
            .map(|(&n, &o)| v[o..o + form_len(n - k)].to_vec())
            .collect();
        (forms, v[len..].to_vec())
    }

    /// Change of base field, element by element.
    pub fn map_field<G: Field>(
        &self,
        g: &G,
        conv: impl Fn(&F::E) -> Option<G::E>,
    ) -> Option<HiggsPair<G>> {
        let vec = |v: &[F::E]| v.iter().map(&conv).collect::<Option<Vec<G::E>>>();
        let mat = |m: &Mat<F::E>| m.iter().map(|r| vec(r)).collect::<Option<Mat<G::E>>>();
        Some(HiggsPair {
            field: g.clone(),
            twists: self.twists.clone(),
            zfin: mat(&self.zfin)?,
            winf: mat(&self.winf)?,
            vv: self
                .vv
                .iter()
                .map(|row| row.iter().map(|x| vec(x)).collect::<Option<Vec<_>>>())
                .collect::<Option<Vec<_>>>()?,
            vt: mat(&self.vt)?,
            tt: mat(&self.tt)?,
        })
    }

    /// A uniformly random combination of the given vectors.
    pub fn random_combination(&self, basis: &[Vec<F::E>], rng: &mut dyn RngCore) -> Vec<F::E> {
        let f = &self.field;
        let len = basis.first().map_or(0, |b| b.len());
        let mut out = vec![f.zero(); len];
        for b in basis {
            let c = f.random(rng);
            for (o, x) in out.iter_mut().zip(b) {
                *o = f.add(o, &f.mul(&c, x));
            }
        }
        out
    }
}

/// Offsets of cyclic blocks inside `T` (finite blocks first).
pub(crate) fn block_offsets<E>(blocks: &[(Option<E>, usize)]) -> Vec<usize> {
    let m0: usize = blocks.iter().filter(|b| b.0.is_some()).map(|b| b.1).sum();
    let (mut fin, mut inf) = (0, m0);
    blocks
        .iter()
        .map(|(pt, len)| {
            let slot = if pt.is_some() { &mut fin } else { &mut inf };
            let off = *slot;
            *slot += len;
            off
        })
        .collect()
}

fn is_nilpotent_matrix<F: Field>(f: &F, m: &Mat<F::E>) -> bool {
    let n = m.len();
    if n == 0 {
        return true;
    }
    let mut p = m.clone();
    for _ in 1..n {
        p = linalg::matmul(f, &p, m);
    }
    p.iter().flatten().all(|x| f.is_zero(x))
}

/// Matrix of `op` restricted to the invariant subspace spanned by `basis`,
/// in that basis.
pub(crate) fn restrict_operator<F: Field>(f: &F, basis: &[Vec<F::E>], op: &Mat<F::E>) -> Mat<F::E> {
    let d = basis.len();
    if d == 0 {
        return vec![];
    }
    let cols = linalg::transpose(&basis.to_vec(), basis[0].len());
    let images: Vec<Vec<F::E>> = basis
        .iter()
        .map(|b| linalg::solve(f, &cols, &linalg::matvec(f, op, b)).expect("subspace is not invariant"))
        .collect();
    // images[l] holds the coordinates of op·b_l; the matrix has them as columns
    linalg::transpose(&images, d)
}

/// Torsion type from the finite-chart action `Z` (via invariant factors of
/// `zI − Z`) and the nilpotent action `W` at ∞ (via ranks of powers).
pub fn torsion_shape<F: Field>(f: &F, z: &Mat<F::E>, w: &Mat<F::E>) -> Result<TorsionShape> {
    let m0 = z.len();
    let mut blocks = Vec::new();
    let mut fin_factors = 0;
    if m0 > 0 {
        let p = f.characteristic();
        if p != 0 && p as usize <= m0 {
            return Err(HiggsError::InvalidInput(format!(
                "characteristic {p} too small to identify torsion of degree {m0}"
            )));
        }
        let pm: Vec<Vec<Poly<F::E>>> = (0..m0)
            .map(|i| {
                (0..m0)
                    .map(|j| {
                        let c = f.neg(&z[i][j]);
                        let v = if i == j { vec![c, f.one()] } else { vec![c] };
                        poly::trim(f, v)
                    })
                    .collect()
            })
            .collect();
        let (factors, _) = poly::smith_invariant_factors(f, &pm);
        fin_factors = factors.len();
        for d in &factors {
            blocks.extend(poly::block_lengths(f, d));
        }
    }
    blocks.extend(nilpotent_jordan_type(f, w));
    let inf_factors = w.len() - linalg::rank(f, w);
    Ok(TorsionShape { blocks: Partition::new(blocks), fin_factors, inf_factors })
}

/// Jordan block sizes of a nilpotent matrix.
pub fn nilpotent_jordan_type<F: Field>(f: &F, w: &Mat<F::E>) -> Vec<usize> {
    let n = w.len();
    let mut ranks = vec![n];
    let mut p = linalg::identity(f, n);
    while *ranks.last().unwrap() > 0 {
        p = linalg::matmul(f, &p, w);
        ranks.push(linalg::rank(f, &p));
        if ranks.len() > n + 1 {
            break;
        }
    }
    // #blocks of size ≥ j is ranks[j-1] − ranks[j]
    let at_least: Vec<usize> = ranks.windows(2).map(|x| x[0] - x[1]).collect();
    let mut out = Vec::new();
    for (j, &c) in at_least.iter().enumerate() {
        let next = at_least.get(j + 1).copied().unwrap_or(0);
        for _ in 0..c - next {
            out.push(j + 1);
        }
    }
    out
}
