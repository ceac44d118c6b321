//! Generic sampling of pairs on the component `X_{V,λ}`: split bundle of the
//! given twists plus one cyclic block per part of `λ` at distinct points,
//! uniformly random bundle and bundle-to-torsion blocks, and `t·unit` on each
//! torsion block.

use rand::seq::index::sample as sample_indices;
use rand::RngCore;

use super::pair::{block_offsets, HiggsPair};
use crate::error::{HiggsError, Result};
use crate::field::Field;
use crate::partition::Partition;

/// Finite fields up to this size draw support points among all `q + 1`
/// rational points (including ∞); larger fields use random affine points.
const SMALL_FIELD: u64 = 1 << 16;

/// Sample a generic pair of the component with splitting type `twists` and
/// torsion type `lambda`.
pub fn sample_generic_pair<F: Field>(
    field: &F,
    twists: &[i64],
    lambda: &Partition,
    rng: &mut dyn RngCore,
) -> Result<HiggsPair<F>> {
    let points = distinct_points(field, lambda.len(), rng)?;
    let blocks: Vec<(Option<F::E>, usize)> = points.into_iter().zip(lambda.parts().iter().copied()).collect();
    sample_pair_at_points(field, twists, &blocks, rng)
}

/// Sample random Higgs data on the sheaf with the given torsion blocks
/// (`None` marks the point at infinity).
pub fn sample_pair_at_points<F: Field>(
    field: &F,
    twists: &[i64],
    blocks: &[(Option<F::E>, usize)],
    rng: &mut dyn RngCore,
) -> Result<HiggsPair<F>> {
    let mut sorted = twists.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut pair = HiggsPair::from_blocks(field.clone(), sorted, blocks)?;
    let r = pair.rank();
    for j in 0..r {
        for i in 0..r {
            let len = pair.vv(j, i).len();
            if len > 0 {
                pair.set_vv(j, i, (0..len).map(|_| field.random(rng)).collect())?;
            }
        }
    }
    let m = pair.torsion_degree();
    for i in 0..r {
        pair.set_vt(i, (0..m).map(|_| field.random(rng)).collect())?;
    }
    let mut tt = crate::linalg::zeros(field, m, m);
    for ((_, len), off) in blocks.iter().zip(block_offsets(blocks)) {
        // t·(c₀ + c₁t + …) with c₀ ≠ 0, acting on the basis e_j = t^j
        let unit: Vec<F::E> = (0..*len)
            .map(|l| if l == 0 { field.random_nonzero(rng) } else { field.random(rng) })
            .collect();
        for j in 0..*len {
            for (l, c) in unit.iter().enumerate() {
                if j + 1 + l < *len {
                    tt[off + j + 1 + l][off + j] = c.clone();
                }
            }
        }
    }
    pair.set_tt(tt)?;
    Ok(pair)
}

/// `n` distinct points of P¹ over the field (`None` = ∞).
fn distinct_points<F: Field>(field: &F, n: usize, rng: &mut dyn RngCore) -> Result<Vec<Option<F::E>>> {
    match field.order() {
        Some(q) if q <= SMALL_FIELD => {
            if n as u64 > q + 1 {
                return Err(HiggsError::FieldTooSmall { q, needed: n });
            }
            let mut rng = rng;
            Ok(sample_indices(&mut rng, (q + 1) as usize, n)
                .into_iter()
                .map(|i| (i as u64 != q).then(|| field.element(i as u64)))
                .collect())
        }
        _ => {
            let mut out: Vec<F::E> = Vec::with_capacity(n);
            while out.len() < n {
                let x = field.random(rng);
                if !out.contains(&x) {
                    out.push(x);
                }
            }
            Ok(out.into_iter().map(Some).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{GaloisField, PrimeField};
    use crate::rng::stream;

    #[test]
    fn generic_image_degrees() {
        let f = PrimeField::generic();
        let mut rng = stream(11, &[]);
        let p = sample_generic_pair(&f, &[], &Partition::new(vec![2]), &mut rng).unwrap();
        assert_eq!(p.image_degree().unwrap(), 1);
        let p = sample_generic_pair(&f, &[], &Partition::new(vec![1, 1]), &mut rng).unwrap();
        assert_eq!(p.image_degree().unwrap(), 0);
        let p = sample_generic_pair(&f, &[0, 0], &Partition::empty(), &mut rng).unwrap();
        assert_eq!(p.image_degree().unwrap(), 0);
        assert_eq!(p.rank_k(0).unwrap(), 2);
    }

    #[test]
    fn vector_bundle_plus_point_kernel() {
        // V₁ ⊕ O_x with generic f: Ker f = O(1) ⊕ O_x
        let f = PrimeField::generic();
        for seed in 0..5 {
            let p = sample_generic_pair(&f, &[2, 0], &Partition::new(vec![1]), &mut stream(seed, &[]))
                .unwrap();
            let ker = p.kernel_shape().unwrap();
            assert_eq!(ker.twists, vec![1]);
            assert_eq!(ker.torsion.blocks, Partition::new(vec![1]));
        }
    }

    #[test]
    fn small_fields_run_out_of_points() {
        let f = GaloisField::new(2).unwrap();
        let mut rng = stream(0, &[]);
        assert!(sample_generic_pair(&f, &[], &Partition::new(vec![1, 1, 1]), &mut rng).is_ok());
        let err = sample_generic_pair(&f, &[], &Partition::new(vec![1, 1, 1, 1]), &mut rng);
        assert_eq!(err.unwrap_err(), HiggsError::FieldTooSmall { q: 2, needed: 4 });
    }
}
