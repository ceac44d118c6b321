//! Kernels of surjections `O(m)^d → F` with `d = dim Hom(O(m), F)`: for any
//! `F` generated by `O(m)` the kernel is `O(m−1)^{d − rk F}`.

use rand::Rng;
use rand::RngCore;

use super::pair::HiggsPair;
use crate::error::{HiggsError, Result};
use crate::field::{Field, PrimeField};
use crate::linalg;
use crate::partition::Partition;

/// One random instance of the kernel fact, with the computed kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormKernelInstance {
    pub m: i64,
    pub twists: Vec<i64>,
    pub lambda: Partition,
    /// `d = dim Hom(O(m), F)`, the number of copies of `O(m)`.
    pub sections: usize,
    pub kernel_twists: Vec<i64>,
}

impl FormKernelInstance {
    /// The splitting type the kernel fact predicts.
    pub fn expected(&self) -> Vec<i64> {
        vec![self.m - 1; self.sections - self.twists.len()]
    }

    pub fn holds(&self) -> bool {
        self.kernel_twists == self.expected()
    }
}

/// Draw `F = ⊕O(nᵢ) ⊕ τ` with `nᵢ ≥ m` (so `O(m)` generates it) and a
/// random surjection `O(m)^d → F`: a random invertible recombination of a
/// basis of `Hom(O(m), F)`. Returns the computed kernel type.
pub fn random_formkernel_instance(rng: &mut dyn RngCore) -> Result<FormKernelInstance> {
    let field = PrimeField::generic();
    let m: i64 = rng.gen_range(-2..=2);
    let r = rng.gen_range(0..=2usize);
    let mut twists: Vec<i64> = (0..r).map(|_| m + rng.gen_range(0..=2)).collect();
    twists.sort_unstable_by(|a, b| b.cmp(a));
    let shapes: [&[usize]; 5] = [&[], &[1], &[2], &[1, 1], &[2, 1]];
    let lambda = Partition::new(shapes[rng.gen_range(0..shapes.len())].to_vec());
    if r == 0 && lambda.is_empty() {
        twists.push(m);
    }
    let blocks: Vec<(Option<u64>, usize)> =
        lambda.parts().iter().enumerate().map(|(i, &l)| (Some(i as u64), l)).collect();
    let pair = HiggsPair::from_blocks(field.clone(), twists.clone(), &blocks)?;
    let d = pair.hom_from_line_dim(m);
    let mix = loop {
        let g: Vec<Vec<u64>> = (0..d).map(|_| (0..d).map(|_| field.random(rng)).collect()).collect();
        if linalg::rank(&field, &g) == d {
            break g;
        }
    };
    let kernel_twists = pair.map_kernel_twists(m, &mix)?;
    if kernel_twists.len() + twists.len() != d {
        return Err(HiggsError::InvalidInput(format!("map O({m})^{d} → F is not surjective")));
    }
    Ok(FormKernelInstance { m, twists, lambda, sections: d, kernel_twists })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn random_instances_hold() {
        let mut rng = stream(3, &[]);
        for _ in 0..10 {
            let inst = random_formkernel_instance(&mut rng).unwrap();
            assert!(inst.holds(), "{inst:?}");
        }
    }
}
