//! Finite groups given by multiplication tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite group on elements `0..order` with a full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGroup", into = "RawGroup")]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    identity: usize,
    abelian: bool,
}

#[derive(Serialize, Deserialize)]
struct RawGroup {
    #[serde(default)]
    name: Option<String>,
    order: usize,
    table: Vec<Vec<usize>>,
}

impl TryFrom<RawGroup> for FiniteGroup {
    type Error = Error;
    fn try_from(raw: RawGroup) -> Result<FiniteGroup> {
        if raw.order != raw.table.len() {
            return Err(Error::Validation {
                what: "group table",
                reason: format!(
                    "declared order {} does not match table size {}",
                    raw.order,
                    raw.table.len()
                ),
            });
        }
        FiniteGroup::from_table(raw.name.unwrap_or_else(|| "custom".into()), raw.table)
    }
}

impl From<FiniteGroup> for RawGroup {
    fn from(g: FiniteGroup) -> RawGroup {
        RawGroup { name: Some(g.name), order: g.order, table: g.table }
    }
}

impl FiniteGroup {
    /// Validates a multiplication table: closure, associativity, a two-sided
    /// identity and inverses.
    pub fn from_table(name: String, table: Vec<Vec<usize>>) -> Result<Self> {
        let order = table.len();
        let fail = |reason: String| Error::Validation { what: "group table", reason };
        if order == 0 {
            return Err(fail("empty table".into()));
        }
        for row in &table {
            if row.len() != order {
                return Err(fail("table is not square".into()));
            }
            if let Some(&v) = row.iter().find(|&&v| v >= order) {
                return Err(fail(format!("entry {v} outside 0..{order}")));
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| fail("no two-sided identity".into()))?;
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(fail(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        let mut inverse = vec![usize::MAX; order];
        for a in 0..order {
            inverse[a] = (0..order)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| fail(format!("element {a} has no inverse")))?;
        }
        let abelian = (0..order).all(|a| (0..order).all(|b| table[a][b] == table[b][a]));
        Ok(FiniteGroup { name, order, table, inverse, identity, abelian })
    }

    /// Builtin groups by token: `S3`, `Z1`..`Z12`.
    pub fn builtin(token: &str) -> Result<Self> {
        let t = token.to_ascii_uppercase();
        if t == "S3" {
            return Ok(Self::symmetric_s3());
        }
        if let Some(k) = t.strip_prefix('Z').and_then(|s| s.parse::<usize>().ok()) {
            if (1..=12).contains(&k) {
                return Ok(Self::cyclic(k));
            }
        }
        Err(Error::Validation {
            what: "group token",
            reason: format!("unknown group {token:?} (expected S3 or Z1..Z12)"),
        })
    }

    pub fn cyclic(k: usize) -> Self {
        let table = (0..k).map(|a| (0..k).map(|b| (a + b) % k).collect()).collect();
        FiniteGroup::from_table(format!("Z{k}"), table).expect("cyclic table is a group")
    }

    /// The symmetric group on three letters, elements being the permutations
    /// of `{0,1,2}` in lexicographic one-line order.
    pub fn symmetric_s3() -> Self {
        let perms: [[usize; 3]; 6] =
            [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let find = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
        let table = (0..6)
            .map(|a| {
                (0..6)
                    .map(|b| {
                        // (a * b)(x) = a(b(x))
                        let p = [
                            perms[a][perms[b][0]],
                            perms[a][perms[b][1]],
                            perms[a][perms[b][2]],
                        ];
                        find(p)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table("S3".into(), table).expect("S3 table is a group")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_is_a_nonabelian_group_of_order_six() {
        let g = FiniteGroup::symmetric_s3();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert_eq!(g.identity(), 0);
        for a in 0..6 {
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
    }

    #[test]
    fn cyclic_groups_are_abelian() {
        for k in 1..=6 {
            let g = FiniteGroup::cyclic(k);
            assert!(g.is_abelian());
            assert_eq!(g.order(), k);
        }
    }

    #[test]
    fn json_table_input() {
        let g: FiniteGroup =
            serde_json::from_str(r#"{"order":2,"table":[[0,1],[1,0]]}"#).unwrap();
        assert_eq!(g.order(), 2);
        assert!(serde_json::from_str::<FiniteGroup>(r#"{"order":3,"table":[[0,1],[1,0]]}"#)
            .is_err());
        let s = serde_json::to_string(&FiniteGroup::cyclic(2)).unwrap();
        let back: FiniteGroup = serde_json::from_str(&s).unwrap();
        assert_eq!(back, FiniteGroup::cyclic(2));
    }

    #[test]
    fn invalid_tables_are_rejected() {
        // Not associative / no identity: a left-zero semigroup of order 2.
        let bad = vec![vec![0, 0], vec![1, 1]];
        assert!(FiniteGroup::from_table("bad".into(), bad).is_err());
        // Latin square that is not associative (order 5 loop).
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(FiniteGroup::from_table("loop".into(), loop5).is_err());
        assert!(FiniteGroup::builtin("K4x").is_err());
        assert!(FiniteGroup::builtin("S3").is_ok());
        assert!(FiniteGroup::builtin("z4").is_ok());
    }
}
