//! Property tests for the word calculus.

use proptest::prelude::*;

use doldkan_core::finmap::{compose_maps, FinMap};
use doldkan_core::opcalc::{
    is_canonical_delta_word, map_to_word_delta, map_to_word_fin, word_to_map,
};
use doldkan_core::seeding::rng_from_seed;

fn arb_finmap(max_level: usize) -> impl Strategy<Value = FinMap> {
    (0..=max_level, 0..=max_level).prop_flat_map(|(dom, cod)| {
        proptest::collection::vec(0..=cod, dom + 1..=dom + 1)
            .prop_map(move |table| FinMap::new(dom, cod, table).unwrap())
    })
}

fn arb_monotone(max_level: usize) -> impl Strategy<Value = FinMap> {
    arb_finmap(max_level).prop_map(|f| {
        let mut table = f.table().to_vec();
        table.sort_unstable();
        FinMap::new(f.dom(), f.cod(), table).unwrap()
    })
}

proptest! {
    #[test]
    fn fin_word_round_trips(f in arb_finmap(6)) {
        let w = map_to_word_fin(&f).unwrap();
        prop_assert_eq!(word_to_map(&w), f);
    }

    #[test]
    fn delta_word_round_trips_and_is_canonical(f in arb_monotone(6)) {
        let w = map_to_word_delta(&f).unwrap();
        prop_assert_eq!(word_to_map(&w), f.clone());
        prop_assert!(is_canonical_delta_word(&w));
        // Canonicalizing again is a fixed point.
        prop_assert_eq!(map_to_word_delta(&word_to_map(&w)).unwrap(), w);
    }

    #[test]
    fn composition_is_associative(
        f in arb_finmap(4),
        table_g in proptest::collection::vec(0usize..=4, 1..=5),
        table_h in proptest::collection::vec(0usize..=4, 1..=5),
    ) {
        // Chain h -> g -> f by construction.
        let g_dom = table_g.len() - 1;
        let g = FinMap::new(g_dom, f.dom(), table_g.into_iter().map(|v| v % (f.dom() + 1)).collect()).unwrap();
        let h_dom = table_h.len() - 1;
        let h = FinMap::new(h_dom, g.dom(), table_h.into_iter().map(|v| v % (g.dom() + 1)).collect()).unwrap();
        let left = compose_maps(&compose_maps(&f, &g).unwrap(), &h).unwrap();
        let right = compose_maps(&f, &compose_maps(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

/// Dense seeded sweep backing the round-trip law at the documented scale.
#[test]
fn fin_word_round_trip_dense_sample() {
    use rand::Rng;
    let mut rng = rng_from_seed(0xfeed);
    for _ in 0..10_000 {
        let dom = rng.gen_range(0..=6);
        let cod = rng.gen_range(0..=6);
        let table: Vec<usize> = (0..=dom).map(|_| rng.gen_range(0..=cod)).collect();
        let f = FinMap::new(dom, cod, table).unwrap();
        let w = map_to_word_fin(&f).unwrap();
        assert_eq!(word_to_map(&w), f, "round trip for {f:?}");
    }
}
