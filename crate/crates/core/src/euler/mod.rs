//! Euler characteristics of the spaces behind products of generators.
mod chi;
mod interp;
mod prodeuler;
mod qcount;
mod subspace;
mod word;
pub use chi::{chi_torsion_grassmannian, chi_word, chi_word_pair, chi_word_series, ChiConfig, DEFAULT_FIELD_SIZES};
pub use interp::QCountSeries;
pub use prodeuler::{product_sides, random_problem, ProductSides, SplitSubsheafProblem, PRODUCT_FIELD_SIZES};
pub use qcount::qcount_word;
pub use subspace::CountBudget;
pub use word::{Generator, GeneratorWord};
