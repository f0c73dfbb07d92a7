use operad_forge_core::conjectures::{
    check_conjecture1, check_conjecture2, poset_for_tree, Conj1Witness, LabelSystem,
};
use operad_forge_core::signatures::TruncatedSignature;
use operad_forge_core::topology::poset_homology;
use operad_forge_core::trees::{pruned_trees, LevelTree};
use operad_forge_core::vdgen::{generate_v, move_graph};

#[test]
fn system_json_round_trip_and_replay() {
    let weak = LabelSystem::builtin(2)
        .unwrap()
        .with_level(
            0,
            vec![TruncatedSignature::parse("(121)|(121)", 2).unwrap()],
        )
        .unwrap();
    let text = serde_json::to_string(&weak).unwrap();
    let back: LabelSystem = serde_json::from_str(&text).unwrap();
    let report = check_conjecture1(&back);
    let w: Conj1Witness =
        serde_json::from_str(&serde_json::to_string(report.outcome.witness().unwrap()).unwrap())
            .unwrap();
    assert!(w.replay(&weak).unwrap());
}

#[test]
fn conjecture_two_witness_replays() {
    let r = check_conjecture2(4).unwrap();
    let w = r.outcome.witness().expect("d = 4 has a split membership");
    assert!(w.replay().unwrap());
}

#[test]
fn tree_posets_are_contractible_for_two_leaves() {
    let sys = LabelSystem::builtin(2).unwrap();
    for tree in pruned_trees(3, 2) {
        let tp = poset_for_tree(&sys, &tree).unwrap();
        let p = tp.product.materialize(10_000).unwrap();
        assert!(poset_homology(&p).is_acyclic(), "{tree}");
    }
}

#[test]
fn move_graph_dot_lists_every_label() {
    let dot = move_graph(3).unwrap().to_dot();
    for label in generate_v(3).unwrap().elements {
        assert!(dot.contains(&label.to_string()), "{label}");
    }
    assert!(dot.starts_with("digraph"));
    assert!(LevelTree::parse(2, "[[1],[2]]").is_ok());
}
