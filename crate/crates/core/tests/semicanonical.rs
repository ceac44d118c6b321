//! Kronecker and basis properties of the semicanonical elements.

use higgs_core::components::IrrComponent;
use higgs_core::euler::ChiConfig;
use higgs_core::p1sheaf::KClass;
use higgs_core::partition::Partition;
use higgs_core::rng::Sampling;
use higgs_core::semicanonical::{rational, rho, semican_element, semican_torsion, torsion_change_of_basis_det, window};

fn cfg(seed: u64) -> ChiConfig {
    ChiConfig { sampling: Sampling::new(seed, 3), ..ChiConfig::default() }
}

fn kronecker(f: &higgs_core::WordCombination, z: &IrrComponent, comps: &[IrrComponent], seed: u64) {
    for other in comps {
        let expect = if other == z { rational(1) } else { rational(0) };
        assert_eq!(rho(other, f, &cfg(seed)).unwrap(), expect, "ρ at {other} of f for {z}: {f}");
    }
}

#[test]
fn torsion_basis_is_dual_under_fresh_seeds() {
    for d in 1..=4 {
        let basis = semican_torsion(d, &cfg(d as u64)).unwrap();
        assert_eq!(torsion_change_of_basis_det(&basis), rational(1));
        let comps: Vec<IrrComponent> =
            basis.keys().map(|l| IrrComponent::new(vec![], l.clone()).unwrap()).collect();
        for (lambda, f) in &basis {
            let z = IrrComponent::new(vec![], lambda.clone()).unwrap();
            kronecker(f, &z, &comps, 1000 + d as u64);
        }
    }
}

#[test]
fn torsion_element_agrees_with_torsion_basis() {
    let basis = semican_torsion(3, &cfg(3)).unwrap();
    let lambda = Partition::new(vec![2, 1]);
    let z = IrrComponent::new(vec![], lambda.clone()).unwrap();
    assert_eq!(semican_element(&z, 0, 4, &cfg(3)).unwrap(), basis[&lambda]);
}

#[test]
fn rank_two_window_is_dual() {
    let class = KClass::new(2, 0);
    let comps = window(class, -1);
    for z in &comps {
        let f = semican_element(z, -1, 2, &cfg(5)).unwrap();
        kronecker(&f, z, &comps, 4242);
    }
}

#[test]
fn floor_windows_are_compatible() {
    // f_Z computed at floor −1 and floor 0 agree on components alive at 0
    let z = IrrComponent::new(vec![0], Partition::empty()).unwrap();
    let lo = semican_element(&z, -1, 2, &cfg(6)).unwrap();
    let hi = semican_element(&z, 0, 2, &cfg(6)).unwrap();
    for other in window(z.class(), 0) {
        assert_eq!(rho(&other, &lo, &cfg(9)).unwrap(), rho(&other, &hi, &cfg(9)).unwrap(), "{other}");
    }
}

#[test]
fn oversized_windows_are_rejected() {
    let z = IrrComponent::new(vec![0, 0], Partition::empty()).unwrap();
    assert!(semican_element(&z, -3, 2, &cfg(1)).is_err());
    let big = IrrComponent::new(vec![3], Partition::empty()).unwrap();
    assert!(semican_element(&big, 0, 2, &cfg(1)).is_err());
}
