//! The two presentation tables and their exhaustive verification against
//! the function oracle.
//!
//! Each relation row is stored with its side words in application order
//! (first-applied generator first) as index expressions in `(i, j)`.  An
//! instantiation is legal when the left-hand word composes at the chosen
//! application level; verification then requires every matching right-hand
//! branch to compose as well and to evaluate to the same function table.

use serde::Serialize;

use crate::finmap::FinMap;
use crate::opcalc::{Kind, OperatorWord};

type SideFn = fn(i64, i64) -> Vec<(Kind, i64)>;
type CondFn = fn(i64, i64) -> bool;

struct Branch {
    cond: &'static str,
    applies: CondFn,
    rhs: SideFn,
}

struct Row {
    name: &'static str,
    uses_i: bool,
    uses_j: bool,
    lhs: SideFn,
    branches: &'static [Branch],
}

/// Which presentation a row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationRow {
    Simplicial,
    SymmetricSimplicial,
}

use Kind::{Cycle as Z, Degeneracy as S, Face as D, QuasiDegeneracy as U, Transposition as T};

static SIMPLICIAL_ROWS: &[Row] = &[
    Row {
        name: "d_i d_j",
        uses_i: true,
        uses_j: true,
        lhs: |i, j| vec![(D, j), (D, i)],
        branches: &[
            Branch { cond: "i < j", applies: |i, j| i < j, rhs: |i, j| vec![(D, i), (D, j - 1)] },
            Branch { cond: "i >= j", applies: |i, j| i >= j, rhs: |i, j| vec![(D, i + 1), (D, j)] },
        ],
    },
    Row {
        name: "s_i s_j",
        uses_i: true,
        uses_j: true,
        lhs: |i, j| vec![(S, j), (S, i)],
        branches: &[
            Branch { cond: "i <= j", applies: |i, j| i <= j, rhs: |i, j| vec![(S, i), (S, j + 1)] },
            Branch { cond: "i > j", applies: |i, j| i > j, rhs: |i, j| vec![(S, i - 1), (S, j)] },
        ],
    },
    Row {
        name: "d_i s_j",
        uses_i: true,
        uses_j: true,
        lhs: |i, j| vec![(S, j), (D, i)],
        branches: &[
            Branch { cond: "i < j", applies: |i, j| i < j, rhs: |i, j| vec![(D, i), (S, j - 1)] },
            Branch {
                cond: "i = j or j+1",
                applies: |i, j| i == j || i == j + 1,
                rhs: |_, _| vec![],
            },
            Branch {
                cond: "i >= j+2",
                applies: |i, j| i >= j + 2,
                rhs: |i, j| vec![(D, i - 1), (S, j)],
            },
        ],
    },
    Row {
        name: "s_i d_j",
        uses_i: true,
        uses_j: true,
        lhs: |i, j| vec![(D, j), (S, i)],
        branches: &[
            Branch { cond: "i < j", applies: |i, j| i < j, rhs: |i, j| vec![(S, i), (D, j + 1)] },
            Branch { cond: "i >= j", applies: |i, j| i >= j, rhs: |i, j| vec![(S, i + 1), (D, j)] },
        ],
    },
];

static SYMMETRIC_ROWS: &[Row] = &[
    Row {
        name: "d_i d_j",
        uses_i: true,
        uses_j: true,
        lhs: |i, j| vec![(D, j), (D, i)],
        branches: &[
            Branch { cond: "i < j", applies: |i, j| i < j, rhs: |i, j| vec![(D, i), (D, j - 1)] },
            Branch { cond: "i >= j", applies: |i, j| i >= j, rhs: |i, j| vec![(D, i + 1), (D, j)] },
        ],
    },
    Row {
        name: "d_i u_j",
        uses_i: true,
        uses_j: true,
        lhs: |i, j| vec![(U, j), (D, i)],
        branches: &[
            Branch { cond: "i = 0", applies: |i, _| i == 0, rhs: |_, j| vec![(Z, j - 1)] },
            Branch {
                cond: "0 != i < j",
                applies: |i, j| i != 0 && i < j,
                rhs: |i, j| vec![(D, i), (U, j - 1)],
            },
            Branch { cond: "i = j", applies: |i, j| i == j, rhs: |_, _| vec![] },
            Branch { cond: "i > j", applies: |i, j| i > j, rhs: |i, j| vec![(D, i - 1), (U, j)] },
        ],
    },
    Row {
        name: "u_i d_j",
        uses_i: true,
        uses_j: true,
        lhs: |i, j| vec![(D, j), (U, i)],
        branches: &[
            Branch { cond: "i <= j", applies: |i, j| i <= j, rhs: |i, j| vec![(U, i), (D, j + 1)] },
            Branch {
                cond: "i >= j != 0",
                applies: |i, j| i >= j && j != 0,
                rhs: |i, j| vec![(U, i + 1), (D, j)],
            },
            Branch {
                cond: "j = 0",
                applies: |_, j| j == 0,
                rhs: |i, _| vec![(T, 0), (U, i + 1), (D, 1)],
            },
        ],
    },
    Row {
        name: "u_i u_j",
        uses_i: true,
        uses_j: true,
        lhs: |i, j| vec![(U, j), (U, i)],
        branches: &[
            Branch { cond: "i <= j", applies: |i, j| i <= j, rhs: |i, j| vec![(U, i), (U, j + 1)] },
            Branch { cond: "i > j", applies: |i, j| i > j, rhs: |i, j| vec![(U, i - 1), (U, j)] },
        ],
    },
    Row {
        name: "t_i t_j",
        uses_i: true,
        uses_j: true,
        lhs: |i, j| vec![(T, j), (T, i)],
        branches: &[
            Branch { cond: "i = j", applies: |i, j| i == j, rhs: |_, _| vec![] },
            Branch {
                cond: "|i-j| >= 2",
                applies: |i, j| (i - j).abs() >= 2,
                rhs: |i, j| vec![(T, i), (T, j)],
            },
            Branch {
                cond: "|i-j| = 1",
                applies: |i, j| (i - j).abs() == 1,
                rhs: |i, j| vec![(T, i), (T, j), (T, i), (T, j)],
            },
        ],
    },
    Row {
        name: "d_i t_j",
        uses_i: true,
        uses_j: true,
        lhs: |i, j| vec![(T, j), (D, i)],
        branches: &[
            Branch { cond: "i < j", applies: |i, j| i < j, rhs: |i, j| vec![(D, i), (T, j - 1)] },
            Branch { cond: "i = j", applies: |i, j| i == j, rhs: |i, _| vec![(D, i + 1)] },
            Branch { cond: "i = j+1", applies: |i, j| i == j + 1, rhs: |i, _| vec![(D, i - 1)] },
            Branch {
                cond: "i >= j+2",
                applies: |i, j| i >= j + 2,
                rhs: |i, j| vec![(D, i), (T, j)],
            },
        ],
    },
    Row {
        name: "t_i d_j",
        uses_i: true,
        uses_j: true,
        lhs: |i, j| vec![(D, j), (T, i)],
        branches: &[
            Branch {
                cond: "i <= j-2",
                applies: |i, j| i <= j - 2,
                rhs: |i, j| vec![(T, i), (D, j)],
            },
            Branch {
                cond: "i = j-1",
                applies: |i, j| i == j - 1,
                rhs: |i, j| vec![(T, i + 1), (T, i), (T, i + 1), (D, j)],
            },
            Branch { cond: "i >= j", applies: |i, j| i >= j, rhs: |i, j| vec![(T, i + 1), (D, j)] },
        ],
    },
    Row {
        name: "t_i u_j",
        uses_i: true,
        uses_j: true,
        lhs: |i, j| vec![(U, j), (T, i)],
        branches: &[
            Branch {
                cond: "0 != i <= j-2",
                applies: |i, j| i != 0 && i <= j - 2,
                rhs: |i, j| vec![(T, i), (U, j)],
            },
            Branch {
                cond: "0 != i = j-1",
                applies: |i, j| i != 0 && i == j - 1,
                rhs: |_, j| vec![(U, j - 1)],
            },
            Branch { cond: "i = j", applies: |i, j| i == j, rhs: |_, j| vec![(U, j + 1)] },
            Branch { cond: "i > j", applies: |i, j| i > j, rhs: |i, j| vec![(T, i - 1), (U, j)] },
        ],
    },
    Row {
        name: "u_i t_j",
        uses_i: true,
        uses_j: true,
        lhs: |i, j| vec![(T, j), (U, i)],
        branches: &[
            Branch { cond: "i <= j", applies: |i, j| i <= j, rhs: |i, j| vec![(U, i), (T, j + 1)] },
            Branch {
                cond: "i = j+1, j != 0",
                applies: |i, j| i == j + 1 && j != 0,
                rhs: |i, j| vec![(U, i - 1), (T, j + 1), (T, j)],
            },
            Branch {
                cond: "i >= j+2, j != 0",
                applies: |i, j| i >= j + 2 && j != 0,
                rhs: |i, j| vec![(U, i), (T, j)],
            },
        ],
    },
    Row {
        name: "t_0 u_1",
        uses_i: false,
        uses_j: false,
        lhs: |_, _| vec![(U, 1), (T, 0)],
        branches: &[Branch { cond: "always", applies: |_, _| true, rhs: |_, _| vec![(U, 1)] }],
    },
    Row {
        name: "t_0 u_i t_0 u_j",
        uses_i: true,
        uses_j: true,
        lhs: |i, j| vec![(U, j), (T, 0), (U, i), (T, 0)],
        branches: &[
            Branch {
                cond: "2 <= i <= j",
                applies: |i, j| 2 <= i && i <= j,
                rhs: |i, j| vec![(T, 0), (U, i), (T, 0), (U, j + 1)],
            },
            Branch {
                cond: "2 <= j < i",
                applies: |i, j| 2 <= j && j < i,
                rhs: |i, j| vec![(T, 0), (U, i - 1), (T, 0), (U, j)],
            },
        ],
    },
];

fn build_word(level: usize, side: &[(Kind, i64)]) -> Option<OperatorWord> {
    let steps: Option<Vec<(Kind, usize)>> =
        side.iter().map(|&(k, i)| usize::try_from(i).ok().map(|i| (k, i))).collect();
    OperatorWord::from_applied(level, &steps?).ok()
}

/// A single failed instantiation, with enough data to reproduce it.
#[derive(Debug, Clone, Serialize)]
pub struct RelationFailure {
    pub table: RelationRow,
    pub row: String,
    pub branch: String,
    pub i: i64,
    pub j: i64,
    pub level: usize,
    pub lhs: FinMap,
    pub rhs: Option<FinMap>,
    pub reason: String,
}

/// Per-row tally.
#[derive(Debug, Clone, Serialize)]
pub struct RowReport {
    pub table: RelationRow,
    pub row: String,
    pub instantiations: u64,
    pub passes: u64,
    pub failures: u64,
}

/// The verification result over both tables.
#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub n_max: usize,
    pub rows: Vec<RowReport>,
    pub total_instantiations: u64,
    pub total_failures: u64,
    pub first_failure: Option<RelationFailure>,
}

impl RelationReport {
    pub fn all_pass(&self) -> bool {
        self.total_failures == 0
    }
}

/// Evaluates every relation row of both presentation tables for every legal
/// index pair at every application level `<= n_max`, comparing the two
/// sides as function tables.
pub fn verify_presentations(n_max: usize) -> RelationReport {
    let mut rows_out = Vec::new();
    let mut total = 0u64;
    let mut total_failures = 0u64;
    let mut first_failure: Option<RelationFailure> = None;

    let tables: [(RelationRow, &[Row]); 2] = [
        (RelationRow::Simplicial, SIMPLICIAL_ROWS),
        (RelationRow::SymmetricSimplicial, SYMMETRIC_ROWS),
    ];
    for (table, rows) in tables {
        for row in rows {
            let mut tally = RowReport {
                table,
                row: row.name.to_string(),
                instantiations: 0,
                passes: 0,
                failures: 0,
            };
            for level in 0..=n_max {
                let bound = (level + 3) as i64;
                let i_range: Vec<i64> = if row.uses_i { (0..=bound).collect() } else { vec![0] };
                let j_range: Vec<i64> = if row.uses_j { (0..=bound).collect() } else { vec![0] };
                for &i in &i_range {
                    for &j in &j_range {
                        let Some(lhs_word) = build_word(level, &(row.lhs)(i, j)) else {
                            continue;
                        };
                        let lhs_map = lhs_word.to_finmap();
                        for branch in row.branches {
                            if !(branch.applies)(i, j) {
                                continue;
                            }
                            tally.instantiations += 1;
                            total += 1;
                            let rhs_word = build_word(level, &(branch.rhs)(i, j));
                            let (ok, rhs_map, reason) = match rhs_word {
                                Some(w) => {
                                    let m = w.to_finmap();
                                    let ok = m == lhs_map;
                                    let reason = if ok {
                                        String::new()
                                    } else {
                                        "sides evaluate to different tables".to_string()
                                    };
                                    (ok, Some(m), reason)
                                }
                                None => {
                                    (false, None, "right-hand side does not compose".to_string())
                                }
                            };
                            if ok {
                                tally.passes += 1;
                            } else {
                                tally.failures += 1;
                                total_failures += 1;
                                if first_failure.is_none() {
                                    first_failure = Some(RelationFailure {
                                        table,
                                        row: row.name.to_string(),
                                        branch: branch.cond.to_string(),
                                        i,
                                        j,
                                        level,
                                        lhs: lhs_map.clone(),
                                        rhs: rhs_map,
                                        reason,
                                    });
                                }
                            }
                        }
                    }
                }
            }
            rows_out.push(tally);
        }
    }

    RelationReport {
        n_max,
        rows: rows_out,
        total_instantiations: total,
        total_failures,
        first_failure,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcalc::word_to_map;

    #[test]
    fn all_rows_pass_up_to_level_four() {
        let report = verify_presentations(4);
        assert!(report.all_pass(), "first failure: {:?}", report.first_failure);
        assert_eq!(report.rows.len(), 4 + 11);
        for row in &report.rows {
            assert!(row.instantiations > 0, "row {} never instantiated", row.row);
        }
    }

    #[test]
    fn all_rows_pass_up_to_level_six() {
        let report = verify_presentations(6);
        assert!(report.all_pass(), "first failure: {:?}", report.first_failure);
    }

    #[test]
    fn face_degeneracy_cancellation_is_identity() {
        // d_i s_j with i = j: both sides are the identity map.
        for n in 0..=4usize {
            for j in 0..=n {
                let word =
                    OperatorWord::from_applied(n, &[(Kind::Degeneracy, j), (Kind::Face, j)])
                        .unwrap();
                assert!(word_to_map(&word).is_identity());
            }
        }
    }

    #[test]
    fn quasi_interchange_example() {
        // t_0 u_i t_0 u_j at i=3, j=2, level 4 agrees with its rewrite
        // u_j t_0 u_{i-1} t_0 (generators listed in application order).
        let lhs = OperatorWord::from_applied(
            4,
            &[
                (Kind::QuasiDegeneracy, 2),
                (Kind::Transposition, 0),
                (Kind::QuasiDegeneracy, 3),
                (Kind::Transposition, 0),
            ],
        )
        .unwrap();
        let rhs = OperatorWord::from_applied(
            4,
            &[
                (Kind::Transposition, 0),
                (Kind::QuasiDegeneracy, 2),
                (Kind::Transposition, 0),
                (Kind::QuasiDegeneracy, 2),
            ],
        )
        .unwrap();
        assert_eq!(word_to_map(&lhs), word_to_map(&rhs));
    }

    #[test]
    fn report_serializes() {
        let report = verify_presentations(1);
        let v = serde_json::to_value(&report).unwrap();
        assert!(v.get("rows").is_some());
        assert_eq!(v["total_failures"], 0);
    }
}
