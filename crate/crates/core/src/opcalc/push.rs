//! Push-through normalization: moving faces across composite
//! (quasi)degeneracies.
//!
//! A single elementary face meeting a composite degeneracy either cancels
//! one of its factors ("absorbed") or emerges on the far side with a shifted
//! index ("slipped past").  In the simplicial case face indices are written
//! in the `+` convention, `d_i^+ = d_{i+1}`, so the emitted face is never
//! `d_0`; in the symmetric case plain indices are used and the emitted face
//! index stays `>= 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orders::{MultiIndex, Variant};

use super::Kind;

/// Outcome of pushing a single elementary face through a composite
/// (quasi)degeneracy.
///
/// In `Slipped`, `face_index` is the residual face in the convention of the
/// flavor that produced it: the `+` convention for the simplicial push (the
/// elementary face is `d_{face_index + 1}`), plain indexing for the
/// symmetric push (`d_{face_index}`, always `>= 1`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PushResult {
    Absorbed { beta_prime: MultiIndex },
    Slipped { beta_prime: MultiIndex, face_index: usize },
}

/// Pushes `d_i^+` through `s_beta`.
///
/// `i` is a `+`-convention face index with `0 <= i <= n-1` where `n` is the
/// ambient level of `beta`.  Exactly one of the two cases applies: if `i` or
/// `i+1` occurs in `beta` the face cancels that factor and the higher
/// indices shift down; otherwise the face slips past, the indices above the
/// crossing point shift down, and `d_{i-q}^+` is emitted, `q` being the
/// number of factors slipped over.
pub fn push_face_through_degens(i: usize, beta: &MultiIndex) -> Result<PushResult> {
    if beta.variant() != Variant::Simplicial {
        return Err(Error::Domain("push through degeneracies needs a simplicial multi-index".into()));
    }
    let n = beta.ambient();
    if n == 0 || i > n - 1 {
        return Err(Error::IndexRange { kind: Kind::Face, index: i, level: n });
    }
    let ids = beta.indices();
    // Absorption cancels the larger of i, i+1 present in beta.
    let absorb_at = ids.iter().position(|&j| j == i + 1).or_else(|| ids.iter().position(|&j| j == i));
    match absorb_at {
        Some(q) => {
            let mut out = Vec::with_capacity(ids.len() - 1);
            out.extend_from_slice(&ids[..q]);
            out.extend(ids[q + 1..].iter().map(|&j| j - 1));
            Ok(PushResult::Absorbed {
                beta_prime: MultiIndex::new(out, n - 1, Variant::Simplicial)?,
            })
        }
        None => {
            let q = ids.iter().take_while(|&&j| j < i).count();
            let mut out = Vec::with_capacity(ids.len());
            out.extend_from_slice(&ids[..q]);
            out.extend(ids[q..].iter().map(|&j| j - 1));
            Ok(PushResult::Slipped {
                beta_prime: MultiIndex::new(out, n - 1, Variant::Simplicial)?,
                face_index: i - q,
            })
        }
    }
}

/// Pushes the plain face `d_i` through `u_beta`; the symmetric analog of
/// [`push_face_through_degens`] with conditions `j_{q+1} > i > j_q`
/// (slip) and `i = j_q` (absorb).  Requires `1 <= i <= n`.
pub fn push_face_through_quasidegens(i: usize, beta: &MultiIndex) -> Result<PushResult> {
    if beta.variant() != Variant::Symmetric {
        return Err(Error::Domain(
            "push through quasidegeneracies needs a symmetric multi-index".into(),
        ));
    }
    let n = beta.ambient();
    if i == 0 || i > n {
        return Err(Error::IndexRange { kind: Kind::Face, index: i, level: n });
    }
    let ids = beta.indices();
    match ids.iter().position(|&j| j == i) {
        Some(q) => {
            let mut out = Vec::with_capacity(ids.len() - 1);
            out.extend_from_slice(&ids[..q]);
            out.extend(ids[q + 1..].iter().map(|&j| j - 1));
            Ok(PushResult::Absorbed {
                beta_prime: MultiIndex::new(out, n - 1, Variant::Symmetric)?,
            })
        }
        None => {
            let q = ids.iter().take_while(|&&j| j < i).count();
            let mut out = Vec::with_capacity(ids.len());
            out.extend_from_slice(&ids[..q]);
            out.extend(ids[q..].iter().map(|&j| j - 1));
            Ok(PushResult::Slipped {
                beta_prime: MultiIndex::new(out, n - 1, Variant::Symmetric)?,
                face_index: i - q,
            })
        }
    }
}

/// Indexing convention for [`face_absorb_face`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceConvention {
    /// `beta` holds `+`-convention indices (`d_j^+ = d_{j+1}`).
    Plus,
    /// `beta` holds plain indices, all `>= 1` (symmetric flavor).
    Plain,
}

/// Absorbs the elementary face `d_i` (`i != 0`, plain index) into a
/// composite face: `d_i d_beta^+ = d_{beta'}^+` resp. `d_i d_beta =
/// d_{beta'}` with `|beta'| = |beta| + 1`.
///
/// The face is pushed right past the factors it dominates, gaining one on
/// the index each time, and is inserted where the indices become increasing.
pub fn face_absorb_face(
    i: usize,
    beta: &MultiIndex,
    convention: FaceConvention,
) -> Result<MultiIndex> {
    let n = beta.ambient();
    let expected_variant = match convention {
        FaceConvention::Plus => Variant::Simplicial,
        FaceConvention::Plain => Variant::Symmetric,
    };
    if beta.variant() != expected_variant {
        return Err(Error::Domain(format!(
            "face convention {convention:?} does not fit a {} multi-index",
            beta.variant()
        )));
    }
    // d_i is applied at level n - |beta|.
    if i == 0 || i > n - beta.len() {
        return Err(Error::IndexRange { kind: Kind::Face, index: i, level: n - beta.len() });
    }
    let shift = match convention {
        FaceConvention::Plus => 1,
        FaceConvention::Plain => 0,
    };
    let true_faces: Vec<usize> = beta.indices().iter().map(|&j| j + shift).collect();
    let mut cur = i;
    let mut q = 0;
    for &j in &true_faces {
        if cur >= j {
            cur += 1;
            q += 1;
        } else {
            break;
        }
    }
    let mut out = Vec::with_capacity(true_faces.len() + 1);
    out.extend_from_slice(&true_faces[..q]);
    out.push(cur);
    out.extend_from_slice(&true_faces[q..]);
    let indices = out.into_iter().map(|j| j - shift).collect();
    MultiIndex::new(indices, n, expected_variant)
}

/// Result of pushing a whole composite face through a composite
/// (quasi)degeneracy, folding the single-face push largest index first.
///
/// `Partial` stops at the first face that slips past, matching the shape
/// `d_{alpha'} s_{beta'} d_res`: `alpha_left` holds the not-yet-pushed face
/// indices and `residual` the emitted face, both in the convention of the
/// flavor (see [`PushResult`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalizedPush {
    Pure { beta: MultiIndex },
    Partial { alpha_left: Vec<usize>, beta: MultiIndex, residual: usize },
}

impl NormalizedPush {
    pub fn is_pure(&self) -> bool {
        matches!(self, NormalizedPush::Pure { .. })
    }
}

/// Pushes `d_alpha^+` through `s_beta` (simplicial variant) or `d_alpha`
/// through `u_beta` (symmetric variant).  Both multi-indices must share
/// ambient level and variant.
pub fn push_word_through(alpha: &MultiIndex, beta: &MultiIndex) -> Result<NormalizedPush> {
    if alpha.variant() != beta.variant() || alpha.ambient() != beta.ambient() {
        return Err(Error::Domain("push-through needs matching ambient and variant".into()));
    }
    let variant = alpha.variant();
    let mut beta_cur = beta.clone();
    let ids = alpha.indices();
    for (pos, &i) in ids.iter().enumerate().rev() {
        let pushed = match variant {
            Variant::Simplicial => push_face_through_degens(i, &beta_cur)?,
            Variant::Symmetric => push_face_through_quasidegens(i, &beta_cur)?,
        };
        match pushed {
            PushResult::Absorbed { beta_prime } => beta_cur = beta_prime,
            PushResult::Slipped { beta_prime, face_index } => {
                return Ok(NormalizedPush::Partial {
                    alpha_left: ids[..pos].to_vec(),
                    beta: beta_prime,
                    residual: face_index,
                });
            }
        }
    }
    Ok(NormalizedPush::Pure { beta: beta_cur })
}

/// Exhaustive oracle sweep: for every level `<= n_max`, every multi-index
/// and every legal face index in both flavors, the push-through output
/// evaluates to the same function table as the input composite.
pub fn verify_push_through_exhaustive(n_max: usize) -> crate::report::VerifyReport {
    use crate::opcalc::{multi_operator, word_to_map, Generator, MultiOperatorFlavor, OperatorWord};
    use crate::orders::enumerate_indices;
    use crate::report::{CheckReport, Witness};

    let mut simplicial = CheckReport::new("push_through_degeneracies_oracle");
    let mut symmetric = CheckReport::new("push_through_quasidegeneracies_oracle");
    for n in 1..=n_max {
        for variant in [Variant::Simplicial, Variant::Symmetric] {
            let (raise, faces): (MultiOperatorFlavor, Vec<usize>) = match variant {
                Variant::Simplicial => (MultiOperatorFlavor::SAlpha, (0..n).collect()),
                Variant::Symmetric => (MultiOperatorFlavor::UAlpha, (1..=n).collect()),
            };
            for beta in enumerate_indices(n, variant) {
                for &i in &faces {
                    let result = match variant {
                        Variant::Simplicial => push_face_through_degens(i, &beta),
                        Variant::Symmetric => push_face_through_quasidegens(i, &beta),
                    }
                    .expect("index drawn from the legal range");
                    let true_face = match variant {
                        Variant::Simplicial => i + 1,
                        Variant::Symmetric => i,
                    };
                    let degens = multi_operator(&beta, raise).expect("variant matches");
                    let face = Generator::new(Kind::Face, true_face, n).expect("legal face");
                    let lhs =
                        OperatorWord::then(&degens, &OperatorWord::single(face)).expect("chains");
                    let rhs = match &result {
                        PushResult::Absorbed { beta_prime } => {
                            multi_operator(beta_prime, raise).expect("variant matches")
                        }
                        PushResult::Slipped { beta_prime, face_index } => {
                            let residual = match variant {
                                Variant::Simplicial => face_index + 1,
                                Variant::Symmetric => *face_index,
                            };
                            let f = Generator::new(Kind::Face, residual, lhs.from_level())
                                .expect("residual face is legal");
                            OperatorWord::then(
                                &OperatorWord::single(f),
                                &multi_operator(beta_prime, raise).expect("variant matches"),
                            )
                            .expect("chains")
                        }
                    };
                    let ok = word_to_map(&lhs) == word_to_map(&rhs);
                    let check = match variant {
                        Variant::Simplicial => &mut simplicial,
                        Variant::Symmetric => &mut symmetric,
                    };
                    check.record(ok, || Witness {
                        instance: "operator-calculus".into(),
                        n,
                        check: "push_through_oracle".into(),
                        seed: 0,
                        trial: 0,
                        order: None,
                        inputs: serde_json::json!({
                            "i": i,
                            "beta": beta.indices(),
                            "variant": variant,
                        }),
                        expected: serde_json::to_value(word_to_map(&lhs)).expect("serializes"),
                        got: serde_json::to_value(word_to_map(&rhs)).expect("serializes"),
                    });
                }
            }
        }
    }
    crate::report::VerifyReport::new(vec![simplicial, symmetric])
}

/// Exhaustive sweep of the normalization dichotomy: pushing `d_alpha^+`
/// through `s_beta` absorbs every face only when `alpha` is below `beta` in
/// the length-product order, and in the symmetric flavor full absorption
/// happens exactly when `alpha` is a subset of `beta`.  Orders with a
/// residual face never emit the 0th face.
pub fn verify_normalization_dichotomy(n_max: usize) -> crate::report::VerifyReport {
    use crate::orders::{enumerate_indices, incl_leq, lp_leq};
    use crate::report::{CheckReport, Witness};

    let mut forward = CheckReport::new("pure_normalization_implies_partial_order");
    let mut converse = CheckReport::new("symmetric_subset_iff_pure");
    let mut residual = CheckReport::new("residual_face_is_never_the_boundary");
    for n in 0..=n_max {
        for variant in [Variant::Simplicial, Variant::Symmetric] {
            let indices = enumerate_indices(n, variant);
            for alpha in &indices {
                for beta in &indices {
                    let result = push_word_through(alpha, beta).expect("matching variants");
                    let witness = |desc: &str| Witness {
                        instance: "operator-calculus".into(),
                        n,
                        check: desc.to_string(),
                        seed: 0,
                        trial: 0,
                        order: None,
                        inputs: serde_json::json!({
                            "alpha": alpha.indices(),
                            "beta": beta.indices(),
                            "variant": variant,
                        }),
                        expected: serde_json::json!(desc),
                        got: serde_json::json!(format!("{result:?}")),
                    };
                    match (&result, variant) {
                        (NormalizedPush::Pure { .. }, Variant::Simplicial) => {
                            forward.record(lp_leq(alpha, beta).expect("comparable"), || {
                                witness("pure normalization implies length-product order")
                            });
                        }
                        (NormalizedPush::Pure { .. }, Variant::Symmetric) => {
                            forward.record(lp_leq(alpha, beta).expect("comparable"), || {
                                witness("pure normalization implies length-product order")
                            });
                            converse.record(incl_leq(alpha, beta).expect("comparable"), || {
                                witness("pure symmetric normalization implies inclusion")
                            });
                        }
                        (NormalizedPush::Partial { residual: r, .. }, _) => {
                            let true_face = match variant {
                                Variant::Simplicial => r + 1,
                                Variant::Symmetric => *r,
                            };
                            residual.record(true_face >= 1, || {
                                witness("residual elementary face is not the boundary face")
                            });
                            if variant == Variant::Symmetric {
                                converse.record(
                                    !incl_leq(alpha, beta).expect("comparable"),
                                    || witness("subset multi-indices must absorb fully"),
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    crate::report::VerifyReport::new(vec![forward, converse, residual])
}
