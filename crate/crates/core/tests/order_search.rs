//! Search behavior across whole order families.

use doldkan_core::explorer::{
    replay_witness, search_orders, summarize, SearchConfig, SearchMode, VerdictStatus,
};
use doldkan_core::orders::Variant;
use doldkan_core::sgroup::{ChainComplexData, ExpInstance, FiniteGroup, GammaInstance};

#[test]
fn every_order_passes_on_an_abelian_instance_at_level_three() {
    // All 8! = 40320 total orders; the direct sum factors uniquely in each.
    let chain = ChainComplexData::new(vec![vec![2], vec![2]], vec![vec![vec![1]]]).unwrap();
    let inst = GammaInstance::new(chain).unwrap();
    let cfg = SearchConfig {
        n: 3,
        variant: Variant::Simplicial,
        mode: SearchMode::Exhaustive,
        trials: 1,
        seed: 77,
    };
    let verdicts = search_orders(&inst, &cfg).unwrap();
    let summary = summarize(&verdicts);
    assert_eq!(summary.total, 40320);
    assert_eq!(summary.failed, 0);
    assert_eq!(summary.proved_pass, 2, "exactly the two length-product extensions");
}

#[test]
fn extending_orders_never_fail_on_the_nonabelian_instance() {
    let inst = ExpInstance::new(3, FiniteGroup::symmetric_s3()).unwrap();
    for variant in [Variant::Simplicial, Variant::Symmetric] {
        let cfg = SearchConfig {
            n: 2,
            variant,
            mode: SearchMode::Exhaustive,
            trials: 8,
            seed: 3,
        };
        let verdicts = search_orders(&inst, &cfg).unwrap();
        for v in &verdicts {
            assert_ne!(
                (v.status, true),
                (VerdictStatus::Failed, v.witness.is_none()),
                "failed verdicts carry witnesses"
            );
        }
        // The binary order is among the proved passes.
        assert!(verdicts.iter().any(|v| v.status == VerdictStatus::ProvedPass));
    }
}

#[test]
fn sampled_witnesses_replay_on_the_nonabelian_instance() {
    // Level 2 of exp:0:S3 is exactly enumerable, so failures come from the
    // exact checks; each must replay bit-exactly.
    let inst = ExpInstance::new(0, FiniteGroup::symmetric_s3()).unwrap();
    let cfg = SearchConfig {
        n: 2,
        variant: Variant::Simplicial,
        mode: SearchMode::Exhaustive,
        trials: 4,
        seed: 11,
    };
    let verdicts = search_orders(&inst, &cfg).unwrap();
    let summary = summarize(&verdicts);
    assert_eq!(summary.total, 24);
    assert!(summary.failed > 0, "some non-extending order fails on a nonabelian instance");
    for v in verdicts.iter().filter(|v| v.status == VerdictStatus::Failed) {
        let replay = replay_witness(&inst, v.witness.as_ref().unwrap()).unwrap();
        assert!(replay.reproduced, "witness of order {} replays", v.order_index);
    }
}
