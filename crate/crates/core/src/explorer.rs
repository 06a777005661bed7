//! Search over total orders: which orderings of the component subgroups
//! give semidirect-product decompositions on the concrete instances?
//!
//! Orders extending the matching partial order are decomposition orders by
//! theorem and are classified `ProvedPass` (their checks still run, and a
//! failure there escalates to an implementation-contradiction error).  All
//! other orders get evidence only.  Where the instance is small enough the
//! semidirect-product conditions are verified exactly by enumeration; on
//! large instances sampled probes hunt for a confirmed witness, which is
//! always a pair of distinct valid component tuples with equal ordered
//! products.  Absence of a witness is inconclusive by design and is
//! reported as `EmpiricalPass`, never as a proof.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dkengine::{
    decompose, exact_normality, exact_unique_factorization, exactly_verifiable,
    is_valid_component_tuple, reconstruct, required_partial_order, sample_component_tuple,
};
use crate::error::{Error, Result};
use crate::orders::{
    enumerate_indices, is_order_reflecting, random_total_order, MultiIndex, TotalOrder, Variant,
};
use crate::report::Witness;
use crate::seeding;
use crate::sgroup::SGroup;

/// Largest level for exhaustive order enumeration ((2^3)! = 40320 orders).
pub const EXHAUSTIVE_SEARCH_BOUND: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictStatus {
    /// The order extends the partial order, so the decomposition theorem
    /// applies to every instance.
    ProvedPass,
    /// No witness found; says nothing beyond the trials run.
    EmpiricalPass,
    /// A replayable witness violates a semidirect-product condition.
    Failed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMethod {
    /// Full enumeration of component tuples and partial products.
    Exact,
    /// Seeded sampled probes through the decomposition recursion.
    Sampled,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderVerdict {
    pub order_index: u64,
    pub order: TotalOrder,
    pub status: VerdictStatus,
    pub method: CheckMethod,
    pub trials: u64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Sample { count: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: usize,
    pub variant: Variant,
    pub mode: SearchMode,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SearchSummary {
    pub total: u64,
    pub proved_pass: u64,
    pub empirical_pass: u64,
    pub failed: u64,
}

pub fn summarize(verdicts: &[OrderVerdict]) -> SearchSummary {
    let mut s = SearchSummary { total: verdicts.len() as u64, ..Default::default() };
    for v in verdicts {
        match v.status {
            VerdictStatus::ProvedPass => s.proved_pass += 1,
            VerdictStatus::EmpiricalPass => s.empirical_pass += 1,
            VerdictStatus::Failed => s.failed += 1,
        }
    }
    s
}

/// Classifies total orders on the level-`n` index set.  Deterministic in
/// the seed: order `i` is checked under `derive_seed(seed, i)` regardless
/// of scheduling.
pub fn search_orders<G: SGroup>(inst: &G, cfg: &SearchConfig) -> Result<Vec<OrderVerdict>> {
    if cfg.variant == Variant::Symmetric && !inst.is_symmetric() {
        return Err(Error::Domain("symmetric search needs a symmetric instance".into()));
    }
    let orders: Vec<TotalOrder> = match cfg.mode {
        SearchMode::Exhaustive => {
            if cfg.n > EXHAUSTIVE_SEARCH_BOUND {
                return Err(Error::EnumerationBound { n: cfg.n, max: EXHAUSTIVE_SEARCH_BOUND });
            }
            all_total_orders(cfg.n, cfg.variant)
        }
        SearchMode::Sample { count } => {
            let mut rng = seeding::rng_from_seed(cfg.seed);
            (0..count).map(|_| random_total_order(cfg.n, cfg.variant, &mut rng)).collect()
        }
    };

    let verdicts: Result<Vec<OrderVerdict>> = orders
        .into_par_iter()
        .enumerate()
        .map(|(i, order)| classify_order(inst, cfg, i as u64, order))
        .collect();
    verdicts
}

fn classify_order<G: SGroup>(
    inst: &G,
    cfg: &SearchConfig,
    order_index: u64,
    order: TotalOrder,
) -> Result<OrderVerdict> {
    let order_seed = seeding::derive_seed(cfg.seed, order_index);
    let reflecting = is_order_reflecting(&order, required_partial_order(cfg.variant))?;
    let (method, witness) = check_order(inst, cfg.n, &order, cfg.variant, cfg.trials, order_seed)?;
    if reflecting {
        if let Some(w) = witness {
            return Err(Error::Contradiction(format!(
                "order extending the partial order failed check {}: {}",
                w.check,
                serde_json::to_string(&w).unwrap_or_default()
            )));
        }
        return Ok(OrderVerdict {
            order_index,
            order,
            status: VerdictStatus::ProvedPass,
            method,
            trials: cfg.trials,
            seed: order_seed,
            witness: None,
        });
    }
    Ok(match witness {
        Some(w) => OrderVerdict {
            order_index,
            order,
            status: VerdictStatus::Failed,
            method,
            trials: cfg.trials,
            seed: order_seed,
            witness: Some(w),
        },
        None => OrderVerdict {
            order_index,
            order,
            status: VerdictStatus::EmpiricalPass,
            method,
            trials: cfg.trials,
            seed: order_seed,
            witness: None,
        },
    })
}

/// Runs the decisive checks for one order, cheapest first, stopping at the
/// first confirmed witness.
fn check_order<G: SGroup>(
    inst: &G,
    n: usize,
    order: &TotalOrder,
    flavor: Variant,
    trials: u64,
    seed: u64,
) -> Result<(CheckMethod, Option<Witness>)> {
    if exactly_verifiable(inst, n) {
        if let Some(w) = exact_unique_factorization(inst, n, order, flavor)? {
            return Ok((CheckMethod::Exact, Some(w)));
        }
        if let Some(w) = exact_normality(inst, n, order, flavor)? {
            return Ok((CheckMethod::Exact, Some(w)));
        }
        return Ok((CheckMethod::Exact, None));
    }
    for trial in 0..trials {
        let mut rng = seeding::rng_from_seed(seeding::derive_seed(seed, trial));
        // Full tuple probe, then a sparse one cut off at a random position.
        let mut tuple = sample_component_tuple(inst, n, order, &mut rng)?;
        if let Some(w) = double_factorization_probe(inst, n, order, flavor, &tuple, seed, trial)? {
            return Ok((CheckMethod::Sampled, Some(w)));
        }
        use rand::Rng;
        let k = rng.gen_range(0..order.len());
        for piece in tuple.iter_mut().skip(k + 1) {
            *piece = inst.identity(n);
        }
        if let Some(w) = double_factorization_probe(inst, n, order, flavor, &tuple, seed, trial)? {
            return Ok((CheckMethod::Sampled, Some(w)));
        }
    }
    Ok((CheckMethod::Sampled, None))
}

/// Decomposes the ordered product of a drawn tuple; if the recursion
/// returns a different tuple that is itself a valid factorization of the
/// same element, that pair is a confirmed uniqueness violation.
fn double_factorization_probe<G: SGroup>(
    inst: &G,
    n: usize,
    order: &TotalOrder,
    flavor: Variant,
    tuple: &[G::Elem],
    seed: u64,
    trial: u64,
) -> Result<Option<Witness>> {
    let mut g = inst.identity(n);
    for piece in tuple {
        g = inst.mul(n, &g, piece);
    }
    let dec = decompose(inst, n, &g, order, flavor, true)?;
    let got = dec.component_elements();
    if got == tuple {
        return Ok(None);
    }
    if !is_valid_component_tuple(inst, n, order, &got)? {
        // The recursion failed to produce a factorization at all; no
        // conclusion about the order.
        return Ok(None);
    }
    if reconstruct(inst, &dec) != g {
        return Ok(None);
    }
    Ok(Some(Witness {
        instance: inst.instance_id(),
        n,
        check: "double_factorization".into(),
        seed,
        trial,
        order: Some(order.clone()),
        inputs: serde_json::json!({
            "tuple_a": components_json(inst, n, order, tuple),
            "tuple_b": components_json(inst, n, order, &got),
        }),
        expected: serde_json::json!("distinct products for distinct component tuples"),
        got: inst.elem_to_json(n, &g),
    }))
}

fn components_json<G: SGroup>(
    inst: &G,
    n: usize,
    order: &TotalOrder,
    tuple: &[G::Elem],
) -> serde_json::Value {
    let items: Vec<serde_json::Value> = tuple
        .iter()
        .enumerate()
        .map(|(k, piece)| {
            serde_json::json!({
                "alpha": order.position(k).indices(),
                "element": inst.elem_to_json(n, piece),
            })
        })
        .collect();
    serde_json::Value::Array(items)
}

fn components_from_json<G: SGroup>(
    inst: &G,
    n: usize,
    order: &TotalOrder,
    v: &serde_json::Value,
) -> Result<Vec<G::Elem>> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::Schema("component tuple must be a JSON array".into()))?;
    if items.len() != order.len() {
        return Err(Error::Schema("component tuple has the wrong length".into()));
    }
    items
        .iter()
        .enumerate()
        .map(|(k, item)| {
            let alpha_ids: Vec<usize> = serde_json::from_value(
                item.get("alpha")
                    .cloned()
                    .ok_or_else(|| Error::Schema("tuple entry missing alpha".into()))?,
            )
            .map_err(|e| Error::Schema(e.to_string()))?;
            let alpha = MultiIndex::new(alpha_ids, n, order.variant())?;
            if &alpha != order.position(k) {
                return Err(Error::Schema("tuple entry out of order".into()));
            }
            inst.elem_from_json(
                n,
                item.get("element")
                    .ok_or_else(|| Error::Schema("tuple entry missing element".into()))?,
            )
        })
        .collect()
}

/// Result of re-running a recorded witness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReplayReport {
    pub check: String,
    /// Whether the recomputed check still fails.
    pub reproduced: bool,
    pub detail: String,
}

/// Re-runs the single check a witness records, from its stored inputs.
/// Deterministic: no randomness is re-derived.
pub fn replay_witness<G: SGroup>(inst: &G, w: &Witness) -> Result<ReplayReport> {
    let n = w.n;
    let report = |reproduced: bool, detail: String| {
        Ok(ReplayReport { check: w.check.clone(), reproduced, detail })
    };
    match w.check.as_str() {
        "double_factorization" => {
            let order = w
                .order
                .as_ref()
                .ok_or_else(|| Error::Schema("witness missing its order".into()))?;
            let a = components_from_json(
                inst,
                n,
                order,
                w.inputs
                    .get("tuple_a")
                    .ok_or_else(|| Error::Schema("witness missing tuple_a".into()))?,
            )?;
            let b = components_from_json(
                inst,
                n,
                order,
                w.inputs
                    .get("tuple_b")
                    .ok_or_else(|| Error::Schema("witness missing tuple_b".into()))?,
            )?;
            if !is_valid_component_tuple(inst, n, order, &a)?
                || !is_valid_component_tuple(inst, n, order, &b)?
            {
                return report(false, "a recorded tuple is not a valid factorization".into());
            }
            if a == b {
                return report(false, "recorded tuples are equal".into());
            }
            let prod = |t: &[G::Elem]| {
                t.iter().fold(inst.identity(n), |acc, piece| inst.mul(n, &acc, piece))
            };
            let same = prod(&a) == prod(&b);
            report(same, if same {
                "distinct component tuples with equal products".into()
            } else {
                "products differ; factorization is consistent".into()
            })
        }
        "partial_product_not_normal" => {
            let order = w
                .order
                .as_ref()
                .ok_or_else(|| Error::Schema("witness missing its order".into()))?;
            let k = w
                .inputs
                .get("k")
                .and_then(|x| x.as_u64())
                .ok_or_else(|| Error::Schema("witness missing k".into()))? as usize;
            let member = inst.elem_from_json(
                n,
                w.inputs
                    .get("member")
                    .ok_or_else(|| Error::Schema("witness missing member".into()))?,
            )?;
            let conjugator = inst.elem_from_json(
                n,
                w.inputs
                    .get("conjugator")
                    .ok_or_else(|| Error::Schema("witness missing conjugator".into()))?,
            )?;
            // Re-enumerate the partial product set through position k.
            let mut set: std::collections::BTreeSet<G::Elem> = [inst.identity(n)].into();
            for alpha in &order.positions()[..=k] {
                let moores = inst
                    .moore_elements(n - alpha.len(), crate::dkengine::ENUMERATION_LIMIT)
                    .ok_or_else(|| {
                        Error::Domain("instance too large to replay a normality witness".into())
                    })?;
                let mut next = std::collections::BTreeSet::new();
                for p in &set {
                    for m in &moores {
                        let h = crate::dkengine::embed_component(inst, alpha, m)?;
                        next.insert(inst.mul(n, p, &h));
                    }
                }
                set = next;
            }
            if !set.contains(&member) {
                return report(false, "recorded member is not in the partial product".into());
            }
            let conj =
                inst.mul(n, &inst.mul(n, &conjugator, &member), &inst.inv(n, &conjugator));
            let escaped = !set.contains(&conj);
            report(escaped, if escaped {
                format!("conjugate escapes the partial product through position {k}")
            } else {
                "conjugate stays inside; normality is consistent".into()
            })
        }
        "unique_factorization_roundtrip" | "kernel_subset" | "kernel_normality" => {
            let order = w
                .order
                .as_ref()
                .ok_or_else(|| Error::Schema("witness missing its order".into()))?;
            let tuple = components_from_json(
                inst,
                n,
                order,
                w.inputs
                    .get("components")
                    .ok_or_else(|| Error::Schema("witness missing components".into()))?,
            )?;
            let mut g =
                tuple.iter().fold(inst.identity(n), |acc, piece| inst.mul(n, &acc, piece));
            if w.check == "kernel_normality" {
                let h = inst.elem_from_json(
                    n,
                    w.inputs
                        .get("conjugator")
                        .ok_or_else(|| Error::Schema("witness missing conjugator".into()))?,
                )?;
                g = inst.mul(n, &inst.mul(n, &h, &g), &inst.inv(n, &h));
            }
            let flavor = order.variant();
            let dec = decompose(inst, n, &g, order, flavor, true)?;
            let reproduced = match w.check.as_str() {
                "unique_factorization_roundtrip" => dec.component_elements() != tuple,
                _ => {
                    let k = w
                        .inputs
                        .get("k")
                        .and_then(|x| x.as_u64())
                        .ok_or_else(|| Error::Schema("witness missing k".into()))?
                        as usize;
                    dec.components()[k + 1..]
                        .iter()
                        .any(|(_, c)| !inst.eq_elem(n, c, &inst.identity(n)))
                }
            };
            report(reproduced, String::new())
        }
        other => Err(Error::Schema(format!("unsupported witness check {other:?}"))),
    }
}

/// Every total order on the index set, in a fixed deterministic order.
pub fn all_total_orders(n: usize, variant: Variant) -> Vec<TotalOrder> {
    let items = enumerate_indices(n, variant);
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..items.len()).collect();
    permutations(&mut perm, 0, &mut |p| {
        let positions: Vec<MultiIndex> = p.iter().map(|&a| items[a].clone()).collect();
        out.push(TotalOrder::new(n, variant, positions).expect("permutation is a bijection"));
    });
    out
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for j in k..p.len() {
        p.swap(k, j);
        permutations(p, k + 1, f);
        p.swap(k, j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sgroup::{ChainComplexData, ExpInstance, FiniteGroup, GammaInstance};

    fn exp0() -> ExpInstance {
        ExpInstance::new(0, FiniteGroup::symmetric_s3()).unwrap()
    }

    #[test]
    fn exhaustive_level_one_finds_the_nonnormal_order() {
        let inst = exp0();
        let cfg = SearchConfig {
            n: 1,
            variant: Variant::Simplicial,
            mode: SearchMode::Exhaustive,
            trials: 10,
            seed: 99,
        };
        let verdicts = search_orders(&inst, &cfg).unwrap();
        assert_eq!(verdicts.len(), 2);
        let statuses: Vec<VerdictStatus> = verdicts.iter().map(|v| v.status).collect();
        assert!(statuses.contains(&VerdictStatus::ProvedPass));
        assert!(statuses.contains(&VerdictStatus::Failed));
        let failed = verdicts.iter().find(|v| v.status == VerdictStatus::Failed).unwrap();
        let w = failed.witness.as_ref().unwrap();
        assert_eq!(w.check, "partial_product_not_normal");
        let replay = replay_witness(&inst, w).unwrap();
        assert!(replay.reproduced, "{replay:?}");
    }

    #[test]
    fn abelian_instances_pass_every_order() {
        let chain = ChainComplexData::new(vec![vec![2], vec![2]], vec![vec![vec![0]]]).unwrap();
        let inst = GammaInstance::new(chain).unwrap();
        let cfg = SearchConfig {
            n: 2,
            variant: Variant::Simplicial,
            mode: SearchMode::Exhaustive,
            trials: 4,
            seed: 5,
        };
        let verdicts = search_orders(&inst, &cfg).unwrap();
        assert_eq!(verdicts.len(), 24);
        assert!(verdicts.iter().all(|v| v.status != VerdictStatus::Failed));
        assert!(verdicts.iter().all(|v| v.method == CheckMethod::Exact));
    }

    #[test]
    fn search_is_deterministic() {
        let inst = exp0();
        let cfg = SearchConfig {
            n: 2,
            variant: Variant::Simplicial,
            mode: SearchMode::Sample { count: 30 },
            trials: 6,
            seed: 1234,
        };
        let a = search_orders(&inst, &cfg).unwrap();
        let b = search_orders(&inst, &cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let other = SearchConfig { seed: 4321, ..cfg };
        let c = search_orders(&inst, &other).unwrap();
        assert_ne!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&c).unwrap());
    }

    #[test]
    fn tampered_witnesses_stop_reproducing() {
        let inst = exp0();
        let cfg = SearchConfig {
            n: 1,
            variant: Variant::Simplicial,
            mode: SearchMode::Exhaustive,
            trials: 10,
            seed: 7,
        };
        let verdicts = search_orders(&inst, &cfg).unwrap();
        let failed = verdicts.iter().find(|v| v.status == VerdictStatus::Failed).unwrap();
        let mut w = failed.witness.clone().unwrap();
        // Point the conjugator at the identity: conjugation becomes trivial.
        w.inputs["conjugator"] = inst.elem_to_json(1, &inst.identity(1));
        let replay = replay_witness(&inst, &w).unwrap();
        assert!(!replay.reproduced);
    }

    #[test]
    fn exhaustive_bound_is_enforced() {
        let inst = exp0();
        let cfg = SearchConfig {
            n: 4,
            variant: Variant::Simplicial,
            mode: SearchMode::Exhaustive,
            trials: 1,
            seed: 0,
        };
        assert!(matches!(search_orders(&inst, &cfg), Err(Error::EnumerationBound { .. })));
    }
}
