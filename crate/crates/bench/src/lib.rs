//! Shared fixtures for the benchmarks in `benches/`.

use higgs_core::euler::ChiConfig;
use higgs_core::rng::Sampling;
use higgs_core::{GeneratorWord, IrrComponent};

/// Point-count configuration with a fixed seed and a single trial, so a
/// benchmark iteration measures one evaluation.
pub fn bench_config() -> ChiConfig {
    ChiConfig { sampling: Sampling::new(1, 1), ..ChiConfig::default() }
}

pub fn word(s: &str) -> GeneratorWord {
    s.parse().expect("valid word")
}

pub fn component(s: &str) -> IrrComponent {
    s.parse().expect("valid component")
}
