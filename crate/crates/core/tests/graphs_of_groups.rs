mod common;

use std::sync::Arc;

use common::*;
use patchwork::gog::{
    build_presentation, count_pi1_homs, enumerate_pi1_homs, naive_limit_homs, verify_tree_independence,
    verify_tree_vankampen, GraphOfGroups,
};
use patchwork::graph::{all_spanning_trees, maximal_tree, samples};
use patchwork::group::FiniteGroup;
use patchwork::torsor::verify_groupoid_pushout;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn z(n: usize) -> Arc<FiniteGroup> {
    arc(FiniteGroup::cyclic(n).unwrap())
}

#[test]
fn amalgam_z4_z2_z6_into_s3() {
    let gog = GraphOfGroups::new(
        samples::diamond(),
        vec![z(4), z(6)],
        vec![z(2)],
        vec![patchwork::group::GroupHom::new(z(2), z(4), vec![0, 2]).unwrap()],
        vec![patchwork::group::GroupHom::new(z(2), z(6), vec![0, 3]).unwrap()],
        Default::default(),
    )
    .unwrap();
    let s3 = arc(FiniteGroup::symmetric(3).unwrap());
    let tree = maximal_tree(gog.graph()).unwrap();
    let n = enumerate_pi1_homs(&gog, &tree, &s3).unwrap().len();
    assert_eq!(n, oracle_tree_hom_count(&gog, &s3, &tree));
    assert_eq!(n, oracle_naive_limit_count(&gog, &s3));
}

#[test]
fn circle_with_trivial_groups_has_two_homs_to_z2() {
    let gog = GraphOfGroups::trivial(samples::circle()).unwrap();
    let report = verify_tree_vankampen(&gog, &z(2)).unwrap();
    assert!(!report.is_tree);
    assert_eq!((report.pi1_count, report.naive_count), (2, 1));
    assert!(report.discrepancy.is_some());
}

#[test]
fn presentation_generator_count() {
    // one symbol per non-identity vertex element plus one per branch
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let gog = random_gog(&mut rng, 4, 1);
        let tree = maximal_tree(gog.graph()).unwrap();
        let vk = build_presentation(&gog, &tree).unwrap();
        let expected: usize =
            gog.vertex_groups().iter().map(|g| g.order() - 1).sum::<usize>() + gog.graph().edge_count();
        assert_eq!(vk.presentation().generators().len(), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tree_counts_agree_with_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gog = random_gog(&mut rng, 4, 0);
        for g in test_groups() {
            let report = verify_tree_vankampen(&gog, &g).unwrap();
            let oracle = oracle_naive_limit_count(&gog, &g);
            prop_assert!(report.is_tree);
            prop_assert!(report.bijection);
            prop_assert_eq!(report.pi1_count, oracle);
            prop_assert_eq!(naive_limit_homs(&gog, &g).len(), oracle);
        }
    }

    #[test]
    fn non_tree_trivial_groups_give_powers_of_two(seed in any::<u64>(), extra in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let graph = random_graph(&mut rng, 4, extra);
        let rank = graph.cycle_rank().unwrap();
        let gog = GraphOfGroups::trivial(graph).unwrap();
        let report = verify_tree_vankampen(&gog, &z(2)).unwrap();
        prop_assert!(!report.is_tree);
        prop_assert_eq!(report.pi1_count, 1usize << rank);
        prop_assert_eq!(report.naive_count, 1);
    }

    #[test]
    fn counts_independent_of_tree_and_match_pushout(seed in any::<u64>(), extra in 0usize..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gog = random_gog(&mut rng, 3, extra);
        let g = test_groups()[rng.gen_range(0..3)].clone();
        let trees = all_spanning_trees(gog.graph()).unwrap();
        let expected = oracle_tree_hom_count(&gog, &g, &trees[0]);
        for t in &trees {
            prop_assert_eq!(count_pi1_homs(&gog, t, &g).unwrap(), expected);
            prop_assert_eq!(oracle_tree_hom_count(&gog, &g, t), expected);
        }
        prop_assert!(verify_tree_independence(&gog, &g).unwrap().holds);
        let pushout = verify_groupoid_pushout(&gog, &g).unwrap();
        prop_assert!(pushout.holds());
        prop_assert_eq!(pushout.pi1_homs, expected);
    }
}
