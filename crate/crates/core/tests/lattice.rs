use operad_forge_core::budget::Budget;
use operad_forge_core::conjectures::LabelSystem;
use operad_forge_core::lattice::block::block_homology;
use operad_forge_core::lattice::closure::{
    closure_check, seq_bounds, ClosureOperad, ClosureWitness,
};
use operad_forge_core::lattice::matching::matching_check;
use operad_forge_core::lattice::{
    count_generalized, count_paths, enumerate_generalized, enumerate_paths, GeneralizedLatticePath,
    LatticePath,
};
use operad_forge_core::signatures::{BergerElement, Factor, TruncatedSignature};
use operad_forge_core::trees::LevelTree;
use operad_forge_core::Error;
use serde_json::json;

#[test]
fn path_json_uses_one_based_axes() {
    let p = LatticePath::new(vec![1, 0], 1, vec![0, 1, 0], vec![2]).unwrap();
    let value = serde_json::to_value(&p).unwrap();
    assert_eq!(
        value,
        json!({"word": [1, 2, 1], "cuts": [2], "degrees": {"in": [1, 0], "out": 1}})
    );
    assert_eq!(serde_json::from_value::<LatticePath>(value).unwrap(), p);
    assert_eq!(p.to_string(), "12|1");
}

#[test]
fn malformed_paths_are_rejected() {
    let bad = json!({"word": [1, 1], "cuts": [], "degrees": {"in": [0, 0], "out": 0}});
    assert!(serde_json::from_value::<LatticePath>(bad).is_err());
    assert!(matches!(
        LatticePath::new(vec![0], 1, vec![0], vec![3]),
        Err(Error::InvalidPath(_))
    ));
}

#[test]
fn counts_match_enumeration() {
    for degrees in [vec![0], vec![2], vec![1, 1], vec![2, 0, 1]] {
        for out in 0..3 {
            assert_eq!(
                count_paths(&degrees, out),
                enumerate_paths(&degrees, out).len() as u128
            );
        }
    }
    let source = LevelTree::parse(2, "[[1],[1]]").unwrap();
    let colors = vec![LevelTree::parse(2, "[[1]]").unwrap(); 2];
    let all = enumerate_generalized(&source, &colors).unwrap();
    assert_eq!(
        count_generalized(&source, &colors).unwrap(),
        all.len() as u128
    );
    for g in &all {
        let back: GeneralizedLatticePath =
            serde_json::from_str(&serde_json::to_string(g).unwrap()).unwrap();
        assert_eq!(&back, g);
    }
}

#[test]
fn weakened_seq_witness_survives_json() {
    let weak = LabelSystem::builtin(2)
        .unwrap()
        .with_level(
            0,
            vec![TruncatedSignature::parse("(121)|(121)", 2).unwrap()],
        )
        .unwrap();
    let report = closure_check(
        &ClosureOperad::Seq { system: weak },
        &seq_bounds(1),
        &Budget::unlimited(),
    )
    .unwrap();
    let text = serde_json::to_string(report.outcome.witness().unwrap()).unwrap();
    let witness: ClosureWitness = serde_json::from_str(&text).unwrap();
    assert!(witness.replay().unwrap());
    let value = serde_json::to_value(&report).unwrap();
    assert_eq!(value["result"], "fail");
    assert_eq!(value["check"], "closure");
}

#[test]
fn budget_exhaustion_is_an_error() {
    let bound = BergerElement::from_factor(Factor::parse("1212").unwrap());
    let spent = Budget::seconds(0);
    assert!(matches!(
        block_homology(&bound, 1, 8, &spent),
        Err(Error::Budget(_))
    ));
    assert!(matches!(
        matching_check(&bound, 1, 2, &spent),
        Err(Error::Budget(_))
    ));
}

#[test]
fn reports_serialize() {
    let bound = BergerElement::from_factor(Factor::parse("121").unwrap());
    let m =
        serde_json::to_value(matching_check(&bound, 2, 1, &Budget::unlimited()).unwrap()).unwrap();
    assert_eq!(m["result"], "pass");
    assert_eq!(m["expected"], "bijection");
    let b =
        serde_json::to_value(block_homology(&bound, 0, 8, &Budget::unlimited()).unwrap()).unwrap();
    assert_eq!(b["status"], "closed");
    assert_eq!(b["diagonals"], json!([2, 1]));
}
