mod support;

use proptest::prelude::*;
use support::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn condition_count_law_holds(pc in point_chain(), extra in 0usize..=2) {
        condition_count_law(&pc, extra)?;
    }

    #[test]
    fn conditions_agree_with_blow_ups(
        pc in point_chain(),
        d in 2usize..=5,
        weights in prop::collection::vec(-3i64..=3, 1..6),
        random in prop::collection::vec(-3i64..=3, 1..8),
    ) {
        blowup_oracle(&pc, d, &weights, &random)?;
    }

    #[test]
    fn dimensions_are_projectively_invariant(
        items in prop::collection::vec(point_chain(), 1..=3),
        d in 2usize..=5,
        a in prop::collection::vec(-2i64..=2, 9),
        c in prop::collection::vec(-3i64..=3, 1..8),
    ) {
        projective_invariance(&items, d, &a, &c)?;
    }

    #[test]
    fn factor_count_matches_construction(fs in product()) {
        factor_counts(&fs)?;
    }

    #[test]
    fn rank_plus_nullity(r in 1usize..=5, c in 1usize..=6, e in prop::collection::vec(-3i64..=3, 30)) {
        kernel_rank(r, c, &e)?;
    }

    #[test]
    fn number_field_inverse_round_trips(
        m in prop::collection::vec(-5i64..=5, 2..=4),
        a in prop::collection::vec(-4i64..=4, 4),
    ) {
        nf_invert(&m, &a)?;
    }

    #[test]
    fn intersection_is_symmetric_bilinear(
        a in prop::collection::vec(-4i64..=4, 5),
        b in prop::collection::vec(-4i64..=4, 5),
        c in prop::collection::vec(-4i64..=4, 5),
        k in -3i64..=3,
    ) {
        intersection_form(&a, &b, &c, k)?;
    }

    #[test]
    fn tors2_is_a_power_of_two(classes in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..=5)) {
        tors2_power_of_two(&classes)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn resolution_ignores_component_order(order in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        permutation_invariance(&order)?;
    }
}
