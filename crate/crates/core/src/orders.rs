//! Multi-index combinatorics: the index sets underlying the decomposition
//! subgroups, the length-product and inclusion partial orders on them, the
//! binary total order, and enumeration of order-reflecting total orders.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which flavor of multi-index: entries `0..=n-1` select ordinary
/// degeneracies, entries `1..=n` select quasidegeneracies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Simplicial,
    Symmetric,
}

impl Variant {
    #[allow(clippy::reversed_empty_ranges)]
    fn index_range(&self, n: usize) -> std::ops::RangeInclusive<usize> {
        match self {
            // Deliberately empty: no legal simplicial index at level 0.
            Variant::Simplicial if n == 0 => 1..=0,
            Variant::Simplicial => 0..=n - 1,
            Variant::Symmetric => 1..=n,
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Variant::Simplicial => write!(f, "simplicial"),
            Variant::Symmetric => write!(f, "symmetric"),
        }
    }
}

/// A strictly increasing sequence of indices with an ambient level.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMultiIndex", into = "RawMultiIndex")]
pub struct MultiIndex {
    indices: Vec<usize>,
    ambient: usize,
    variant: Variant,
}

#[derive(Serialize, Deserialize)]
struct RawMultiIndex {
    n: usize,
    variant: Variant,
    indices: Vec<usize>,
}

impl TryFrom<RawMultiIndex> for MultiIndex {
    type Error = Error;
    fn try_from(raw: RawMultiIndex) -> Result<MultiIndex> {
        MultiIndex::new(raw.indices, raw.n, raw.variant)
    }
}

impl From<MultiIndex> for RawMultiIndex {
    fn from(a: MultiIndex) -> RawMultiIndex {
        RawMultiIndex { n: a.ambient, variant: a.variant, indices: a.indices }
    }
}

impl std::fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}@{}", self.indices, self.ambient)
    }
}

impl MultiIndex {
    pub fn new(indices: Vec<usize>, ambient: usize, variant: Variant) -> Result<Self> {
        if !indices.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::MultiIndex(format!("{indices:?} is not strictly increasing")));
        }
        let range = variant.index_range(ambient);
        for &i in &indices {
            if !range.contains(&i) {
                return Err(Error::MultiIndex(format!(
                    "index {i} outside {variant} range {range:?} at ambient level {ambient}"
                )));
            }
        }
        Ok(MultiIndex { indices, ambient, variant })
    }

    pub fn empty(ambient: usize, variant: Variant) -> Self {
        MultiIndex { indices: Vec::new(), ambient, variant }
    }

    /// The full multi-index: every legal entry.
    pub fn full(ambient: usize, variant: Variant) -> Self {
        MultiIndex { indices: variant.index_range(ambient).collect(), ambient, variant }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Complement within the legal index range at the same ambient level.
    pub fn complement(&self) -> Self {
        let indices =
            self.variant.index_range(self.ambient).filter(|i| !self.contains(*i)).collect();
        MultiIndex { indices, ambient: self.ambient, variant: self.variant }
    }

    /// Bit-mask encoding: bit `b` set means the `b`-th legal index is present.
    pub fn bitmask(&self) -> u64 {
        let shift = match self.variant {
            Variant::Simplicial => 0,
            Variant::Symmetric => 1,
        };
        self.indices.iter().map(|&i| 1u64 << (i - shift)).sum()
    }

    /// Inverse of [`bitmask`](Self::bitmask).
    pub fn from_bitmask(mask: u64, ambient: usize, variant: Variant) -> Self {
        let shift = match variant {
            Variant::Simplicial => 0,
            Variant::Symmetric => 1,
        };
        let indices = (0..64).filter(|b| mask & (1 << b) != 0).map(|b| b + shift).collect();
        MultiIndex { indices, ambient, variant }
    }

    fn check_comparable(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient || self.variant != other.variant {
            return Err(Error::MultiIndex(format!(
                "cannot compare {:?} ({}) with {:?} ({})",
                self, self.variant, other, other.variant
            )));
        }
        Ok(())
    }
}

/// The set of all multi-indices of dimension `<= n`, in bitmask order.
/// There are exactly `2^n` of them.
pub fn enumerate_indices(n: usize, variant: Variant) -> Vec<MultiIndex> {
    (0u64..(1 << n)).map(|mask| MultiIndex::from_bitmask(mask, n, variant)).collect()
}

/// The length-product partial order: `alpha <= beta` iff `|alpha| <= |beta|`
/// and the tail-aligned entries satisfy `i_{k-p} <= j_{l-p}` for all
/// `0 <= p <= k-1`.
pub fn lp_leq(alpha: &MultiIndex, beta: &MultiIndex) -> Result<bool> {
    alpha.check_comparable(beta)?;
    let (a, b) = (alpha.indices(), beta.indices());
    let (k, l) = (a.len(), b.len());
    if k > l {
        return Ok(false);
    }
    Ok((0..k).all(|p| a[k - 1 - p] <= b[l - 1 - p]))
}

/// The inclusion partial order on index sets.
pub fn incl_leq(alpha: &MultiIndex, beta: &MultiIndex) -> Result<bool> {
    alpha.check_comparable(beta)?;
    Ok(alpha.bitmask() & !beta.bitmask() == 0)
}

/// Partial orders a total order can be required to extend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartialOrderKind {
    /// Length-product order.
    Lp,
    /// Inclusion of index sets.
    Incl,
}

impl PartialOrderKind {
    pub fn leq(&self, alpha: &MultiIndex, beta: &MultiIndex) -> Result<bool> {
        match self {
            PartialOrderKind::Lp => lp_leq(alpha, beta),
            PartialOrderKind::Incl => incl_leq(alpha, beta),
        }
    }
}

/// A total order on the `2^n` multi-indices of dimension `<= n`, stored as
/// the sequence of multi-indices by position.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTotalOrder", into = "RawTotalOrder")]
pub struct TotalOrder {
    n: usize,
    variant: Variant,
    positions: Vec<MultiIndex>,
}

#[derive(Serialize, Deserialize)]
struct RawTotalOrder {
    n: usize,
    variant: Variant,
    positions: Vec<Vec<usize>>,
}

impl TryFrom<RawTotalOrder> for TotalOrder {
    type Error = Error;
    fn try_from(raw: RawTotalOrder) -> Result<TotalOrder> {
        let positions = raw
            .positions
            .into_iter()
            .map(|indices| MultiIndex::new(indices, raw.n, raw.variant))
            .collect::<Result<Vec<_>>>()?;
        TotalOrder::new(raw.n, raw.variant, positions)
    }
}

impl From<TotalOrder> for RawTotalOrder {
    fn from(o: TotalOrder) -> RawTotalOrder {
        RawTotalOrder {
            n: o.n,
            variant: o.variant,
            positions: o.positions.into_iter().map(|a| a.indices).collect(),
        }
    }
}

impl std::fmt::Debug for TotalOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let items: Vec<String> =
            self.positions.iter().map(|a| format!("{:?}", a.indices())).collect();
        write!(f, "TotalOrder@{}[{}]", self.n, items.join(" < "))
    }
}

impl TotalOrder {
    /// Builds a total order, checking it is a bijection onto the index set.
    pub fn new(n: usize, variant: Variant, positions: Vec<MultiIndex>) -> Result<Self> {
        if positions.len() != 1 << n {
            return Err(Error::Order {
                n,
                reason: format!("expected {} positions, got {}", 1 << n, positions.len()),
            });
        }
        let mut seen = vec![false; 1 << n];
        for a in &positions {
            if a.ambient() != n || a.variant() != variant {
                return Err(Error::Order {
                    n,
                    reason: format!("entry {a:?} has wrong ambient level or variant"),
                });
            }
            let mask = a.bitmask() as usize;
            if seen[mask] {
                return Err(Error::Order { n, reason: format!("duplicate entry {a:?}") });
            }
            seen[mask] = true;
        }
        Ok(TotalOrder { n, variant, positions })
    }

    /// The binary total order: position `k` carries the set bits of `k`
    /// (shifted up by one in the symmetric variant).
    pub fn binary(n: usize, variant: Variant) -> Self {
        TotalOrder {
            n,
            variant,
            positions: (0u64..(1 << n))
                .map(|mask| MultiIndex::from_bitmask(mask, n, variant))
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn position(&self, k: usize) -> &MultiIndex {
        &self.positions[k]
    }

    pub fn positions(&self) -> &[MultiIndex] {
        &self.positions
    }

    /// Position of a given multi-index.
    pub fn rank_of(&self, alpha: &MultiIndex) -> Option<usize> {
        self.positions.iter().position(|a| a == alpha)
    }
}

/// The binary total order on the index set; see [`TotalOrder::binary`].
pub fn binary_order(n: usize, variant: Variant) -> TotalOrder {
    TotalOrder::binary(n, variant)
}

/// Whether the total order reflects the given partial order:
/// `alpha(k) <= alpha(l)` implies `k <= l`, checked over all pairs.
pub fn is_order_reflecting(order: &TotalOrder, partial: PartialOrderKind) -> Result<bool> {
    let m = order.len();
    for k in 0..m {
        for l in 0..m {
            if partial.leq(order.position(k), order.position(l))? && k > l {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Largest `n` for which exhaustive linear-extension enumeration is allowed.
pub const EXHAUSTIVE_EXTENSION_BOUND: usize = 3;

/// Enumerates or samples total orders extending the given partial order.
///
/// With `limit = None` the enumeration is exhaustive (each extension yielded
/// exactly once, only allowed for `n <= EXHAUSTIVE_EXTENSION_BOUND`); with
/// `limit = Some(c)`, `c` extensions are drawn by seeded topological
/// shuffles, deterministically in the seed.
pub fn linear_extensions(
    n: usize,
    variant: Variant,
    partial: PartialOrderKind,
    limit: Option<usize>,
    seed: Option<u64>,
) -> Result<Vec<TotalOrder>> {
    let items = enumerate_indices(n, variant);
    let m = items.len();
    // leq[a][b]: strict relation item a < item b.
    let mut strictly_below = vec![vec![false; m]; m];
    for a in 0..m {
        for b in 0..m {
            if a != b && partial.leq(&items[a], &items[b])? {
                strictly_below[a][b] = true;
            }
        }
    }
    match limit {
        None => {
            if n > EXHAUSTIVE_EXTENSION_BOUND {
                return Err(Error::EnumerationBound { n, max: EXHAUSTIVE_EXTENSION_BOUND });
            }
            let mut out = Vec::new();
            let mut prefix = Vec::with_capacity(m);
            let mut used = vec![false; m];
            enumerate_rec(&items, &strictly_below, &mut prefix, &mut used, &mut out, n, variant);
            Ok(out)
        }
        Some(count) => {
            let mut rng = crate::seeding::rng_from_seed(seed.unwrap_or(0));
            let mut out = Vec::with_capacity(count);
            for _ in 0..count {
                out.push(random_extension(&items, &strictly_below, &mut rng, n, variant));
            }
            Ok(out)
        }
    }
}

fn enumerate_rec(
    items: &[MultiIndex],
    below: &[Vec<bool>],
    prefix: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<TotalOrder>,
    n: usize,
    variant: Variant,
) {
    let m = items.len();
    if prefix.len() == m {
        let positions = prefix.iter().map(|&a| items[a].clone()).collect();
        out.push(TotalOrder { n, variant, positions });
        return;
    }
    for a in 0..m {
        if used[a] {
            continue;
        }
        // a is minimal among the remaining elements.
        if (0..m).any(|b| !used[b] && below[b][a]) {
            continue;
        }
        used[a] = true;
        prefix.push(a);
        enumerate_rec(items, below, prefix, used, out, n, variant);
        prefix.pop();
        used[a] = false;
    }
}

/// One uniform-ish topological shuffle: repeatedly pick a random minimal
/// element among the remaining ones.
fn random_extension(
    items: &[MultiIndex],
    below: &[Vec<bool>],
    rng: &mut ChaCha8Rng,
    n: usize,
    variant: Variant,
) -> TotalOrder {
    let m = items.len();
    let mut used = vec![false; m];
    let mut positions = Vec::with_capacity(m);
    for _ in 0..m {
        let minimal: Vec<usize> = (0..m)
            .filter(|&a| !used[a] && (0..m).all(|b| used[b] || !below[b][a]))
            .collect();
        let pick = minimal[rng.gen_range(0..minimal.len())];
        used[pick] = true;
        positions.push(items[pick].clone());
    }
    TotalOrder { n, variant, positions }
}

/// A uniformly random total order (not necessarily an extension of
/// anything), for counterexample search.
pub fn random_total_order(
    n: usize,
    variant: Variant,
    rng: &mut ChaCha8Rng,
) -> TotalOrder {
    let mut positions = enumerate_indices(n, variant);
    // Fisher-Yates.
    for k in (1..positions.len()).rev() {
        let j = rng.gen_range(0..=k);
        positions.swap(k, j);
    }
    TotalOrder { n, variant, positions }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(indices: &[usize], n: usize, variant: Variant) -> MultiIndex {
        MultiIndex::new(indices.to_vec(), n, variant).unwrap()
    }

    #[test]
    fn enumerate_counts() {
        assert_eq!(enumerate_indices(0, Variant::Simplicial), vec![mi(&[], 0, Variant::Simplicial)]);
        assert_eq!(enumerate_indices(3, Variant::Simplicial).len(), 8);
        let sym = enumerate_indices(3, Variant::Symmetric);
        assert_eq!(sym.len(), 8);
        assert!(sym.iter().all(|a| a.indices().iter().all(|&i| (1..=3).contains(&i))));
    }

    #[test]
    fn multi_index_validation() {
        assert!(MultiIndex::new(vec![0, 0], 2, Variant::Simplicial).is_err());
        assert!(MultiIndex::new(vec![2], 2, Variant::Simplicial).is_err());
        assert!(MultiIndex::new(vec![0], 2, Variant::Symmetric).is_err());
        assert!(MultiIndex::new(vec![1, 2], 2, Variant::Symmetric).is_ok());
    }

    #[test]
    fn lp_examples() {
        let n = 3;
        let v = Variant::Simplicial;
        let empty = MultiIndex::empty(n, v);
        for beta in enumerate_indices(n, v) {
            assert!(lp_leq(&empty, &beta).unwrap());
        }
        // Length condition fails.
        assert!(!lp_leq(&mi(&[0, 1], n, v), &mi(&[2], n, v)).unwrap());
        // Tail-aligned check: 1 <= 2.
        assert!(lp_leq(&mi(&[1], n, v), &mi(&[0, 2], n, v)).unwrap());
    }

    #[test]
    fn lp_incl_are_partial_orders() {
        for n in 0..=4 {
            for variant in [Variant::Simplicial, Variant::Symmetric] {
                let items = enumerate_indices(n, variant);
                for kind in [PartialOrderKind::Lp, PartialOrderKind::Incl] {
                    for a in &items {
                        assert!(kind.leq(a, a).unwrap(), "reflexivity");
                        for b in &items {
                            if kind.leq(a, b).unwrap() && kind.leq(b, a).unwrap() {
                                assert_eq!(a, b, "antisymmetry");
                            }
                            for c in &items {
                                if kind.leq(a, b).unwrap() && kind.leq(b, c).unwrap() {
                                    assert!(kind.leq(a, c).unwrap(), "transitivity");
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn inclusion_implies_length_product() {
        for n in 0..=5 {
            for variant in [Variant::Simplicial, Variant::Symmetric] {
                let items = enumerate_indices(n, variant);
                for a in &items {
                    for b in &items {
                        if incl_leq(a, b).unwrap() {
                            assert!(lp_leq(a, b).unwrap(), "{a:?} subset {b:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn incl_examples() {
        let v = Variant::Symmetric;
        assert!(incl_leq(&mi(&[1], 3, v), &mi(&[1, 3], 3, v)).unwrap());
        assert!(!incl_leq(&mi(&[1], 3, v), &mi(&[2, 3], 3, v)).unwrap());
    }

    #[test]
    fn binary_order_table() {
        let order = TotalOrder::binary(4, Variant::Simplicial);
        assert_eq!(order.position(5), &mi(&[0, 2], 4, Variant::Simplicial));
        let order3 = TotalOrder::binary(3, Variant::Simplicial);
        let expected: Vec<Vec<usize>> = vec![
            vec![],
            vec![0],
            vec![1],
            vec![0, 1],
            vec![2],
            vec![0, 2],
            vec![1, 2],
            vec![0, 1, 2],
        ];
        for (k, idx) in expected.iter().enumerate() {
            assert_eq!(order3.position(k).indices(), idx.as_slice());
        }
        assert!(order3.position(0).is_empty());
    }

    #[test]
    fn binary_order_reflects_partial_orders() {
        for n in 0..=5 {
            for variant in [Variant::Simplicial, Variant::Symmetric] {
                let order = TotalOrder::binary(n, variant);
                assert!(is_order_reflecting(&order, PartialOrderKind::Lp).unwrap());
                assert!(is_order_reflecting(&order, PartialOrderKind::Incl).unwrap());
            }
        }
    }

    #[test]
    fn empty_is_minimum_full_is_maximum() {
        for n in 0..=5 {
            let items = enumerate_indices(n, Variant::Simplicial);
            let empty = MultiIndex::empty(n, Variant::Simplicial);
            let full = MultiIndex::full(n, Variant::Simplicial);
            for a in &items {
                assert!(lp_leq(&empty, a).unwrap());
                assert!(lp_leq(a, &full).unwrap());
                if a != &empty {
                    assert!(!lp_leq(a, &empty).unwrap());
                }
                if a != &full {
                    assert!(!lp_leq(&full, a).unwrap());
                }
            }
        }
    }

    #[test]
    fn misplaced_empty_is_not_reflecting() {
        let mut positions = enumerate_indices(2, Variant::Simplicial);
        positions.swap(0, 3);
        let order = TotalOrder::new(2, Variant::Simplicial, positions).unwrap();
        assert!(!is_order_reflecting(&order, PartialOrderKind::Lp).unwrap());
        assert!(!is_order_reflecting(&order, PartialOrderKind::Incl).unwrap());
    }

    #[test]
    fn transposed_comparable_pair_is_not_reflecting() {
        // Swap two lp-comparable positions of the binary order.
        let binary = TotalOrder::binary(3, Variant::Simplicial);
        let mut positions = binary.positions().to_vec();
        positions.swap(1, 2); // {0} and {1} are lp-comparable
        let order = TotalOrder::new(3, Variant::Simplicial, positions).unwrap();
        assert!(!is_order_reflecting(&order, PartialOrderKind::Lp).unwrap());
    }

    /// Brute-force reference: filter all permutations of the index set.
    fn brute_force_extensions(
        n: usize,
        variant: Variant,
        kind: PartialOrderKind,
    ) -> Vec<TotalOrder> {
        let items = enumerate_indices(n, variant);
        let mut perm: Vec<usize> = (0..items.len()).collect();
        let mut found = Vec::new();
        permute(&mut perm, 0, &mut |p| {
            let positions: Vec<MultiIndex> = p.iter().map(|&a| items[a].clone()).collect();
            let order = TotalOrder::new(n, variant, positions).unwrap();
            if is_order_reflecting(&order, kind).unwrap() {
                found.push(order);
            }
        });
        found
    }

    fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for j in k..p.len() {
            p.swap(k, j);
            permute(p, k + 1, f);
            p.swap(k, j);
        }
    }

    #[test]
    fn extension_enumeration_matches_brute_force() {
        // Exhaustive enumeration agrees with the filtered-permutation
        // oracle as a set, for both partial orders and variants.
        for n in 0..=3usize {
            for variant in [Variant::Simplicial, Variant::Symmetric] {
                for kind in [PartialOrderKind::Lp, PartialOrderKind::Incl] {
                    let mut enumerated =
                        linear_extensions(n, variant, kind, None, None).unwrap();
                    let mut brute = brute_force_extensions(n, variant, kind);
                    let key = |o: &TotalOrder| {
                        o.positions().iter().map(|a| a.bitmask()).collect::<Vec<_>>()
                    };
                    enumerated.sort_by_key(key);
                    brute.sort_by_key(key);
                    assert_eq!(enumerated, brute, "n={n} {variant} {kind:?}");
                }
            }
        }

        // Frozen counts.  The length-product order is a chain through
        // n = 2; at n = 3 only {2} and {0,1} are incomparable, giving 2.
        let count = |n, kind| {
            linear_extensions(n, Variant::Simplicial, kind, None, None).unwrap().len()
        };
        assert_eq!(count(1, PartialOrderKind::Lp), 1);
        assert_eq!(count(2, PartialOrderKind::Lp), 1);
        assert_eq!(count(3, PartialOrderKind::Lp), 2);
        // Inclusion on a 3-cube admits many more extensions.
        assert_eq!(count(3, PartialOrderKind::Incl), 48);
        let sym3 = linear_extensions(3, Variant::Symmetric, PartialOrderKind::Incl, None, None)
            .unwrap();
        assert_eq!(sym3.len(), 48);
    }

    #[test]
    fn exhaustive_bound_enforced() {
        let err = linear_extensions(4, Variant::Simplicial, PartialOrderKind::Lp, None, None);
        assert!(matches!(err, Err(Error::EnumerationBound { .. })));
    }

    #[test]
    fn sampled_extensions_deterministic_and_reflecting() {
        let a = linear_extensions(4, Variant::Simplicial, PartialOrderKind::Lp, Some(20), Some(7))
            .unwrap();
        let b = linear_extensions(4, Variant::Simplicial, PartialOrderKind::Lp, Some(20), Some(7))
            .unwrap();
        assert_eq!(a, b);
        for order in &a {
            assert!(is_order_reflecting(order, PartialOrderKind::Lp).unwrap());
        }
        let c = linear_extensions(4, Variant::Simplicial, PartialOrderKind::Lp, Some(20), Some(8))
            .unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn total_order_json_round_trip() {
        let order = TotalOrder::binary(2, Variant::Symmetric);
        let s = serde_json::to_string(&order).unwrap();
        let back: TotalOrder = serde_json::from_str(&s).unwrap();
        assert_eq!(order, back);
        // A non-bijection is rejected.
        let bad = r#"{"n":1,"variant":"simplicial","positions":[[],[]]}"#;
        assert!(serde_json::from_str::<TotalOrder>(bad).is_err());
    }
}
