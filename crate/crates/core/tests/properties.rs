//! Randomised properties checked against independent closed forms.

use higgs_core::components::{dimension_check, enumerate_components};
use higgs_core::drinfeld::{verify_relation, Relation};
use higgs_core::euler::chi_torsion_grassmannian;
use higgs_core::p1sheaf::{euler_form, KClass};
use higgs_core::partition::{partition_count, Partition};
use proptest::prelude::*;

fn class() -> impl Strategy<Value = KClass> {
    (-3i64..=3, -6i64..=6).prop_map(|(r, d)| KClass::new(r, d))
}

fn partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1usize..=4, 0..=4).prop_map(Partition::new)
}

proptest! {
    #[test]
    fn euler_form_is_biadditive(a in class(), b in class(), c in class()) {
        prop_assert_eq!(euler_form(a + b, c), euler_form(a, c) + euler_form(b, c));
        prop_assert_eq!(euler_form(a, b + c), euler_form(a, b) + euler_form(a, c));
    }

    #[test]
    fn transpose_is_an_involution_reversing_dominance(l in partition(), m in partition()) {
        prop_assert_eq!(l.transpose().transpose(), l.clone());
        prop_assert_eq!(l.transpose().size(), l.size());
        if l.size() == m.size() && m.dominated_by(&l) {
            prop_assert!(l.transpose().dominated_by(&m.transpose()));
        }
    }

    #[test]
    fn grassmannian_fixed_points_total(mu in prop::collection::vec(partition(), 1..=2)) {
        // summed over all degrees, the torus-fixed points number Π (part + 1)
        let n: usize = mu.iter().map(Partition::size).sum();
        let total: u128 = (0..=n).map(|m| chi_torsion_grassmannian(&mu, m)).sum();
        let expect: u128 = mu.iter().flat_map(|p| p.parts().iter().map(|&x| x as u128 + 1)).product();
        prop_assert_eq!(total, expect);
    }

    #[test]
    fn torsion_past_line_relation(d in 1usize..=3, n in -3i64..=3) {
        let rel = Relation::TorsionPastLine { d, n };
        prop_assert!(verify_relation(rel, -6, 0).unwrap(), "{:?}", rel);
    }

    #[test]
    fn dimension_identities(r in 1i64..=12, s in 1i64..=12, n in -5i64..=12) {
        prop_assume!(s <= r);
        prop_assert!(dimension_check(r, s, n).unwrap());
    }
}

#[test]
fn torsion_components_are_counted_by_partitions() {
    for d in 0..=8 {
        assert_eq!(enumerate_components(KClass::new(0, d as i64), 0).len(), partition_count(d), "d = {d}");
    }
}
