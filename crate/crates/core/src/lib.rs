//! Exact computational engine for the Higgs algebra of the projective line.
//!
//! The crate models coherent sheaves on P¹ with nilpotent Higgs fields, the
//! irreducible components of the global nilpotent cone, the truncated
//! Drinfeld positive part of U(ŝl₂) that the Higgs algebra embeds into, the
//! semicanonical basis built from generic values of constructible functions,
//! and the loop-crystal operators on components.
//!
//! Module map:
//! - [`field`], [`linalg`], [`poly`], [`partition`]: exact arithmetic plumbing;
//! - [`p1sheaf`]: sheaf models, Hom spaces, kernels, quotients, sampling;
//! - [`euler`]: Euler characteristics via closed forms and finite-field counts;
//! - [`components`]: the index set of irreducible components and strata;
//! - [`loopcrystal`]: the operators `e_k`, `f_k` and the crystal graph;
//! - [`drinfeld`]: normal-ordered arithmetic in the loop algebra;
//! - [`semicanonical`]: generic values `ρ_Z` and the semicanonical basis;
//! - [`selftest`]: the acceptance checks behind `higgs selftest`.

// Dense linear algebra reads best with explicit index loops.
#![allow(clippy::needless_range_loop, clippy::type_complexity, clippy::wrong_self_convention)]

pub mod components;
pub mod drinfeld;
pub mod error;
pub mod euler;
pub mod field;
pub mod linalg;
pub mod loopcrystal;
pub mod p1sheaf;
pub mod partition;
pub mod poly;
pub mod rng;
pub mod selftest;
pub mod semicanonical;

pub use components::{IrrComponent, StrataInvariants};
pub use drinfeld::{AlgebraElement, Monomial};
pub use error::{HiggsError, Result};
pub use euler::{Generator, GeneratorWord, QCountSeries};
pub use p1sheaf::{KClass, ProjPoint, SheafModel, TorsionModel, WeightVector};
pub use partition::Partition;
pub use semicanonical::WordCombination;
