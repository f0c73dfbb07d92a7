mod common;

use std::sync::OnceLock;

use common::*;
use operad_forge_core::budget::Budget;
use operad_forge_core::lattice::block::block_homology;
use operad_forge_core::signatures::TruncatedSignature;
use operad_forge_core::topology::{order_complex, poset_homology};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config(seed: u64, cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

fn pool() -> &'static [Vec<TruncatedSignature>] {
    static POOL: OnceLock<Vec<Vec<TruncatedSignature>>> = OnceLock::new();
    POOL.get_or_init(|| signature_pool(4))
}

fn signatures(n: usize) -> impl Strategy<Value = Vec<TruncatedSignature>> {
    (
        0..4usize,
        prop::collection::vec(any::<prop::sample::Index>(), n),
    )
        .prop_map(|(d, picks)| {
            let level = &pool()[d];
            picks.iter().map(|i| i.get(level).clone()).collect()
        })
}

proptest! {
    #![proptest_config(config(0x5eed_0001, 256))]

    #[test]
    fn order_is_a_partial_order(s in signatures(3)) {
        prop_assert_eq!(order_axioms(&s[0], &s[1], &s[2]), Ok(()));
    }

    #[test]
    fn swap_is_an_order_automorphism(s in signatures(2)) {
        prop_assert_eq!(swap_automorphism(&s[0], &s[1]), Ok(()));
    }

    #[test]
    fn swap_is_an_involution(s in signatures(1)) {
        prop_assert_eq!(swap_involution(&s[0]), Ok(()));
    }
}

proptest! {
    #![proptest_config(config(0x5eed_0002, 128))]

    #[test]
    fn argument_actions_lower_block_parameters(
        degrees in prop::collection::vec(0..3usize, 1..4),
        out in 0..3usize,
        path_index in any::<usize>(),
        axis_index in any::<usize>(),
        source in 0..4usize,
        map_index in any::<usize>(),
        out_target in 0..3usize,
        out_index in any::<usize>(),
    ) {
        let p = pick_path(&degrees, out, path_index);
        let axis = axis_index % degrees.len();
        let map = pick_map(source, degrees[axis], map_index);
        let out_map = pick_map(out, out_target, out_index);
        prop_assert_eq!(unary_monotone(&p, axis, &map, &out_map), Ok(()));
    }
}

proptest! {
    #![proptest_config(config(0x5eed_0003, 48))]

    #[test]
    fn order_complexes_are_chain_complexes(
        d in 0..3usize,
        picks in prop::collection::vec(any::<bool>(), 64),
    ) {
        let p = subposet(&pool()[d], &picks);
        prop_assert!(p.validate().is_ok());
        prop_assert_eq!(boundary_squares_to_zero(&order_complex(&p).chains), Ok(()));
        prop_assert_eq!(euler_consistent(&poset_homology(&p)), Ok(()));
    }

    #[test]
    fn block_complexes_are_points(
        k in 1..4usize,
        mu in prop::collection::vec(0..3usize, 3),
        rotation in 0..3usize,
        out in 0..2usize,
    ) {
        let mu: Vec<usize> = if k == 3 { mu.iter().map(|m| m % 2).collect() } else { mu };
        let bound = pick_block(k, &mu, rotation);
        let r = block_homology(&bound, out, 10, &Budget::unlimited()).unwrap();
        prop_assert_eq!(euler_consistent(&r.homology), Ok(()));
        prop_assert!(r.is_point(), "{} at {}: {:?}", bound, out, r.homology.betti());
    }
}
