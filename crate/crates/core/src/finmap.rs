//! Maps of finite ordinals as explicit value tables.
//!
//! The objects are the finite ordered sets `[n] = {0, 1, ..., n}`.  A
//! [`FinMap`] is a total function `[n] -> [m]` stored as its table of
//! values.  Every operator identity in this crate is ultimately decided
//! here: two operator words are equal exactly when their `FinMap`s are.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A total function `[dom] -> [cod]`, where `[n]` has `n + 1` elements.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFinMap", into = "RawFinMap")]
pub struct FinMap {
    dom: usize,
    cod: usize,
    table: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawFinMap {
    dom: usize,
    cod: usize,
    table: Vec<usize>,
}

impl TryFrom<RawFinMap> for FinMap {
    type Error = Error;
    fn try_from(raw: RawFinMap) -> Result<FinMap> {
        FinMap::new(raw.dom, raw.cod, raw.table)
    }
}

impl From<FinMap> for RawFinMap {
    fn from(m: FinMap) -> RawFinMap {
        RawFinMap { dom: m.dom, cod: m.cod, table: m.table }
    }
}

impl std::fmt::Debug for FinMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}]->[{}] {:?}", self.dom, self.cod, self.table)
    }
}

impl FinMap {
    /// Builds a map `[dom] -> [cod]` from its value table.
    pub fn new(dom: usize, cod: usize, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom + 1 {
            return Err(Error::Validation {
                what: "FinMap",
                reason: format!("table length {} does not match domain [{}]", table.len(), dom),
            });
        }
        if let Some(&v) = table.iter().find(|&&v| v > cod) {
            return Err(Error::Validation {
                what: "FinMap",
                reason: format!("value {v} exceeds codomain [{cod}]"),
            });
        }
        Ok(FinMap { dom, cod, table })
    }

    /// The identity on `[n]`.
    pub fn identity(n: usize) -> Self {
        FinMap { dom: n, cod: n, table: (0..=n).collect() }
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Evaluates the map at a point of `[dom]`.
    pub fn apply(&self, k: usize) -> usize {
        self.table[k]
    }

    /// Membership in the simplicial subcategory: weakly increasing tables.
    pub fn is_monotone(&self) -> bool {
        self.table.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.table.iter().enumerate().all(|(k, &v)| k == v)
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod + 1];
        for &v in &self.table {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }
}

/// Composition `outer . inner` (apply `inner` first).
pub fn compose_maps(outer: &FinMap, inner: &FinMap) -> Result<FinMap> {
    if outer.dom != inner.cod {
        return Err(Error::Composition { outer_dom: outer.dom, inner_cod: inner.cod });
    }
    let table = inner.table.iter().map(|&k| outer.table[k]).collect();
    Ok(FinMap { dom: inner.dom, cod: outer.cod, table })
}

/// All maps `[dom] -> [cod]`, enumerated in lexicographic table order.
pub fn all_maps(dom: usize, cod: usize) -> Vec<FinMap> {
    let mut out = Vec::new();
    let mut table = vec![0usize; dom + 1];
    loop {
        out.push(FinMap { dom, cod, table: table.clone() });
        let mut k = 0;
        loop {
            if k > dom {
                return out;
            }
            if table[k] < cod {
                table[k] += 1;
                table[..k].iter_mut().for_each(|v| *v = 0);
                break;
            }
            k += 1;
        }
    }
}

/// All monotone surjections `[n] ->> [k]` for `0 <= k <= n`, identity first
/// within each target level, in a fixed deterministic order.
pub fn monotone_surjections_from(n: usize) -> Vec<FinMap> {
    let mut out = Vec::new();
    for k in (0..=n).rev() {
        out.extend(monotone_surjections(n, k));
    }
    out
}

/// All monotone surjections `[n] ->> [k]`.
///
/// Such a map is determined by the set of positions `j < n` with
/// `f(j) = f(j+1)`, which must have exactly `n - k` elements.
pub fn monotone_surjections(n: usize, k: usize) -> Vec<FinMap> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let drops = n - k;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != drops {
            continue;
        }
        let mut table = Vec::with_capacity(n + 1);
        let mut v = 0usize;
        table.push(0);
        for j in 0..n {
            if mask & (1 << j) == 0 {
                v += 1;
            }
            table.push(v);
        }
        debug_assert_eq!(v, k);
        out.push(FinMap { dom: n, cod: k, table });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_identities() {
        let f = FinMap::new(2, 1, vec![0, 0, 1]).unwrap();
        assert_eq!(compose_maps(&FinMap::identity(1), &f).unwrap(), f);
        assert_eq!(compose_maps(&f, &FinMap::identity(2)).unwrap(), f);
    }

    #[test]
    fn section_composite_is_the_identity() {
        // s_0 after d_0 collapses to the identity on [0].
        let s0 = FinMap::new(1, 0, vec![0, 0]).unwrap();
        let d0 = FinMap::new(0, 1, vec![1]).unwrap();
        assert_eq!(compose_maps(&s0, &d0).unwrap(), FinMap::identity(0));
    }

    #[test]
    fn compose_rejects_level_mismatch() {
        let f = FinMap::identity(1);
        let g = FinMap::identity(2);
        assert!(matches!(compose_maps(&f, &g), Err(Error::Composition { .. })));
    }

    #[test]
    fn table_validation() {
        assert!(FinMap::new(1, 0, vec![0]).is_err());
        assert!(FinMap::new(1, 0, vec![0, 1]).is_err());
        assert!(FinMap::new(1, 0, vec![0, 0]).is_ok());
    }

    #[test]
    fn surjection_enumeration_counts() {
        // Monotone surjections [n] ->> [k] are counted by binomial(n, n-k).
        assert_eq!(monotone_surjections(3, 1).len(), 3);
        assert_eq!(monotone_surjections(3, 3).len(), 1);
        assert_eq!(monotone_surjections_from(3).len(), 8);
        assert!(monotone_surjections_from(4).iter().all(|f| f.is_monotone() && f.is_surjective()));
    }

    #[test]
    fn all_maps_counts() {
        assert_eq!(all_maps(1, 2).len(), 9);
        assert_eq!(all_maps(0, 0).len(), 1);
    }

    #[test]
    fn json_round_trip() {
        let f = FinMap::new(2, 1, vec![0, 1, 1]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"dom":2,"cod":1,"table":[0,1,1]}"#);
        let g: FinMap = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
        assert!(serde_json::from_str::<FinMap>(r#"{"dom":2,"cod":1,"table":[0,9,1]}"#).is_err());
    }
}
