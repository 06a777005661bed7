//! The component decomposition of a (symmetric-)simplicial group level
//! along a total order on multi-indices.
//!
//! Fix a level `G_n` and a total order on the `2^n` multi-indices.  Each
//! multi-index `alpha` carries a projection `pi_alpha`, the composite of
//! the face word dual to `alpha` followed by the matching (quasi)degeneracy
//! word.  Starting from the top position the recursion
//! `g_{k-1} = g_k - pi_k(g_k)` strips one component per position; the
//! stripped pieces, in position order, form the decomposition and their
//! ordered product reconstructs the element.  For orders extending the
//! length-product order (inclusion order in the symmetric flavor) this is
//! the semidirect-product decomposition; for other orders the same
//! recursion is the probe the search tooling uses to hunt for genuine
//! uniqueness failures.
//!
//! Two layers of verification are provided:
//!
//! - the sampled checks [`verify_unique_factorization`] and
//!   [`verify_kernel_characterization`], which exercise the recursion
//!   itself; and
//! - the exact checks [`exact_unique_factorization`] and
//!   [`exact_normality`], which enumerate every component tuple on small
//!   instances and verify the semidirect-product conditions directly,
//!   independent of the recursion.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::opcalc::{multi_operator, Generator, Kind, MultiOperatorFlavor, OperatorWord};
use crate::orders::{
    is_order_reflecting, MultiIndex, PartialOrderKind, TotalOrder, Variant,
};
use crate::report::{CheckReport, VerifyReport, Witness};
use crate::seeding;
use crate::sgroup::{act_word, is_identity, moore_membership, sub, SGroup};

/// Partial order a total order must extend for the decomposition theorem to
/// apply in the given flavor.
pub fn required_partial_order(flavor: Variant) -> PartialOrderKind {
    match flavor {
        Variant::Simplicial => PartialOrderKind::Lp,
        Variant::Symmetric => PartialOrderKind::Incl,
    }
}

fn raise_flavor(flavor: Variant) -> MultiOperatorFlavor {
    match flavor {
        Variant::Simplicial => MultiOperatorFlavor::SAlpha,
        Variant::Symmetric => MultiOperatorFlavor::UAlpha,
    }
}

fn lower_flavor(flavor: Variant) -> MultiOperatorFlavor {
    match flavor {
        Variant::Simplicial => MultiOperatorFlavor::DAlphaPlus,
        Variant::Symmetric => MultiOperatorFlavor::DAlpha,
    }
}

/// The face word dual to `alpha`, applied to `g`.
pub fn component_pullback<G: SGroup>(
    inst: &G,
    alpha: &MultiIndex,
    g: &G::Elem,
) -> Result<G::Elem> {
    act_word(inst, &multi_operator(alpha, lower_flavor(alpha.variant()))?, g)
}

/// The (quasi)degeneracy embedding of a Moore chain along `alpha`.
pub fn embed_component<G: SGroup>(inst: &G, alpha: &MultiIndex, m: &G::Elem) -> Result<G::Elem> {
    act_word(inst, &multi_operator(alpha, raise_flavor(alpha.variant()))?, m)
}

/// The projection `pi_alpha`: pull back along the faces, re-embed along the
/// (quasi)degeneracies.
pub fn projection<G: SGroup>(inst: &G, alpha: &MultiIndex, g: &G::Elem) -> Result<G::Elem> {
    let down = component_pullback(inst, alpha, g)?;
    embed_component(inst, alpha, &down)
}

/// An ordered list of `(multi-index, component)` pairs produced by the
/// decomposition recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition<E> {
    n: usize,
    flavor: Variant,
    order: TotalOrder,
    components: Vec<(MultiIndex, E)>,
}

impl<E: Clone + PartialEq> Decomposition<E> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flavor(&self) -> Variant {
        self.flavor
    }

    pub fn order(&self) -> &TotalOrder {
        &self.order
    }

    pub fn components(&self) -> &[(MultiIndex, E)] {
        &self.components
    }

    pub fn component_elements(&self) -> Vec<E> {
        self.components.iter().map(|(_, e)| e.clone()).collect()
    }
}

fn validate_setup<G: SGroup>(
    inst: &G,
    n: usize,
    order: &TotalOrder,
    flavor: Variant,
    force: bool,
) -> Result<()> {
    if order.variant() != flavor {
        return Err(Error::Domain(format!(
            "order variant {} does not match flavor {}",
            order.variant(),
            flavor
        )));
    }
    if order.n() != n {
        return Err(Error::Domain(format!("order lives at level {}, not {n}", order.n())));
    }
    if flavor == Variant::Symmetric && !inst.is_symmetric() {
        return Err(Error::Domain(
            "symmetric flavor needs a symmetric-simplicial instance".into(),
        ));
    }
    if !force && !is_order_reflecting(order, required_partial_order(flavor))? {
        return Err(Error::Order {
            n,
            reason: format!(
                "order does not extend the {} partial order; pass force to decompose anyway",
                match flavor {
                    Variant::Simplicial => "length-product",
                    Variant::Symmetric => "inclusion",
                }
            ),
        });
    }
    Ok(())
}

/// Runs the stripping recursion; `components[k]` is the piece projected out
/// at position `k`.
pub fn decompose<G: SGroup>(
    inst: &G,
    n: usize,
    g: &G::Elem,
    order: &TotalOrder,
    flavor: Variant,
    force: bool,
) -> Result<Decomposition<G::Elem>> {
    Ok(decompose_states(inst, n, g, order, flavor, force)?.0)
}

/// As [`decompose`], also returning the intermediate recursion states
/// `g_k` (indexed by position, `states[k]` being the state whose projection
/// is `components[k]`).
pub fn decompose_states<G: SGroup>(
    inst: &G,
    n: usize,
    g: &G::Elem,
    order: &TotalOrder,
    flavor: Variant,
    force: bool,
) -> Result<(Decomposition<G::Elem>, Vec<G::Elem>)> {
    validate_setup(inst, n, order, flavor, force)?;
    let positions = order.len();
    let mut components: Vec<Option<(MultiIndex, G::Elem)>> = vec![None; positions];
    let mut states: Vec<Option<G::Elem>> = vec![None; positions];
    let mut cur = g.clone();
    for k in (0..positions).rev() {
        let alpha = order.position(k).clone();
        let piece = projection(inst, &alpha, &cur)?;
        states[k] = Some(cur.clone());
        cur = sub(inst, n, &cur, &piece);
        components[k] = Some((alpha, piece));
    }
    let dec = Decomposition {
        n,
        flavor,
        order: order.clone(),
        components: components.into_iter().map(|c| c.expect("every position visited")).collect(),
    };
    Ok((dec, states.into_iter().map(|s| s.expect("every position visited")).collect()))
}

/// Ordered product of the components, left to right.
pub fn reconstruct<G: SGroup>(inst: &G, dec: &Decomposition<G::Elem>) -> G::Elem {
    let mut acc = inst.identity(dec.n);
    for (_, piece) in &dec.components {
        acc = inst.mul(dec.n, &acc, piece);
    }
    acc
}

/// Whether a list of elements is a valid component tuple for the order:
/// each entry is the embedding of a Moore chain along its position's
/// multi-index.
pub fn is_valid_component_tuple<G: SGroup>(
    inst: &G,
    n: usize,
    order: &TotalOrder,
    tuple: &[G::Elem],
) -> Result<bool> {
    if tuple.len() != order.len() {
        return Ok(false);
    }
    for (k, piece) in tuple.iter().enumerate() {
        let alpha = order.position(k);
        let pulled = component_pullback(inst, alpha, piece)?;
        if !moore_membership(inst, n - alpha.len(), &pulled)? {
            return Ok(false);
        }
        if embed_component(inst, alpha, &pulled)? != *piece {
            return Ok(false);
        }
    }
    Ok(true)
}

fn ordered_product<G: SGroup>(inst: &G, n: usize, tuple: &[G::Elem]) -> G::Elem {
    let mut acc = inst.identity(n);
    for piece in tuple {
        acc = inst.mul(n, &acc, piece);
    }
    acc
}

/// Draws one component per position: a random Moore chain at the right
/// level, embedded along the position's multi-index.
pub fn sample_component_tuple<G: SGroup>(
    inst: &G,
    n: usize,
    order: &TotalOrder,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<Vec<G::Elem>> {
    order
        .positions()
        .iter()
        .map(|alpha| {
            let m = inst.sample_moore(n - alpha.len(), rng)?;
            embed_component(inst, alpha, &m)
        })
        .collect()
}

fn tuple_json<G: SGroup>(inst: &G, n: usize, order: &TotalOrder, tuple: &[G::Elem]) -> serde_json::Value {
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

/// Sampled verification of the stripping recursion as a factorization
/// procedure: (a) the recursion recovers randomly drawn component tuples,
/// and (b) decompose-reconstruct-decompose is stable on arbitrary elements.
/// Orders are accepted whether or not they extend the partial order.
pub fn verify_unique_factorization<G: SGroup>(
    inst: &G,
    n: usize,
    order: &TotalOrder,
    flavor: Variant,
    trials: u64,
    seed: u64,
) -> Result<VerifyReport> {
    let mut roundtrip = CheckReport::new("unique_factorization_roundtrip");
    let mut stability = CheckReport::new("decompose_reconstruct_stability");
    for trial in 0..trials {
        let mut rng = seeding::rng_from_seed(seeding::derive_seed(seed, trial));
        let tuple = sample_component_tuple(inst, n, order, &mut rng)?;
        let g = ordered_product(inst, n, &tuple);
        let dec = decompose(inst, n, &g, order, flavor, true)?;
        let got = dec.component_elements();
        roundtrip.record(got == tuple, || Witness {
            instance: inst.instance_id(),
            n,
            check: "unique_factorization_roundtrip".into(),
            seed,
            trial,
            order: Some(order.clone()),
            inputs: serde_json::json!({ "components": tuple_json(inst, n, order, &tuple) }),
            expected: tuple_json(inst, n, order, &tuple),
            got: tuple_json(inst, n, order, &got),
        });

        let g2 = inst.sample(n, &mut rng);
        let dec1 = decompose(inst, n, &g2, order, flavor, true)?;
        let r = reconstruct(inst, &dec1);
        let dec2 = decompose(inst, n, &r, order, flavor, true)?;
        stability.record(dec1.components() == dec2.components(), || Witness {
            instance: inst.instance_id(),
            n,
            check: "decompose_reconstruct_stability".into(),
            seed,
            trial,
            order: Some(order.clone()),
            inputs: serde_json::json!({ "element": inst.elem_to_json(n, &g2) }),
            expected: tuple_json(inst, n, order, &dec1.component_elements()),
            got: tuple_json(inst, n, order, &dec2.component_elements()),
        });
    }
    Ok(VerifyReport::new(vec![roundtrip, stability]))
}

/// Sampled verification of the kernel characterization of partial
/// products: an ordered product of components at positions `<= k`
/// decomposes with trivial components above `k`, and so does its conjugate
/// by an arbitrary element (the normality surrogate).  Position
/// `k = 2^n - 1` is vacuous.
pub fn verify_kernel_characterization<G: SGroup>(
    inst: &G,
    n: usize,
    order: &TotalOrder,
    flavor: Variant,
    k: usize,
    trials: u64,
    seed: u64,
) -> Result<VerifyReport> {
    if k >= order.len() {
        return Err(Error::Domain(format!("position {k} out of range for level {n}")));
    }
    let mut subset = CheckReport::new("kernel_subset");
    let mut normality = CheckReport::new("kernel_normality");
    for trial in 0..trials {
        let mut rng = seeding::rng_from_seed(seeding::derive_seed(seed, trial));
        let mut tuple = sample_component_tuple(inst, n, order, &mut rng)?;
        for piece in tuple.iter_mut().skip(k + 1) {
            *piece = inst.identity(n);
        }
        let p = ordered_product(inst, n, &tuple);
        let high_trivial = |dec: &Decomposition<G::Elem>| {
            dec.components()[k + 1..].iter().all(|(_, c)| is_identity(inst, n, c))
        };

        let dec = decompose(inst, n, &p, order, flavor, true)?;
        subset.record(high_trivial(&dec), || Witness {
            instance: inst.instance_id(),
            n,
            check: "kernel_subset".into(),
            seed,
            trial,
            order: Some(order.clone()),
            inputs: serde_json::json!({
                "k": k,
                "components": tuple_json(inst, n, order, &tuple),
            }),
            expected: serde_json::json!("identity components above k"),
            got: tuple_json(inst, n, order, &dec.component_elements()),
        });

        let h = inst.sample(n, &mut rng);
        let conj = inst.mul(n, &inst.mul(n, &h, &p), &inst.inv(n, &h));
        let dec_conj = decompose(inst, n, &conj, order, flavor, true)?;
        normality.record(high_trivial(&dec_conj), || Witness {
            instance: inst.instance_id(),
            n,
            check: "kernel_normality".into(),
            seed,
            trial,
            order: Some(order.clone()),
            inputs: serde_json::json!({
                "k": k,
                "components": tuple_json(inst, n, order, &tuple),
                "conjugator": inst.elem_to_json(n, &h),
            }),
            expected: serde_json::json!("identity components above k"),
            got: tuple_json(inst, n, order, &dec_conj.component_elements()),
        });
    }
    Ok(VerifyReport::new(vec![subset, normality]))
}

/// The closed-form component for the binary order in the simplicial
/// flavor: first the crossed projections `1 - q_j` over the complement of
/// `alpha(k)` (largest index applied first), then the projections `q_i`
/// over `alpha(k)` (smallest applied first), where `q_i = s_i d_{i+1}`.
pub fn closed_form_binary<G: SGroup>(
    inst: &G,
    n: usize,
    g: &G::Elem,
    k: usize,
) -> Result<G::Elem> {
    if k >= (1usize << n) {
        return Err(Error::Domain(format!("component index {k} out of range at level {n}")));
    }
    let alpha = MultiIndex::from_bitmask(k as u64, n, Variant::Simplicial);
    let q = |i: usize, x: &G::Elem| -> Result<G::Elem> {
        let down = inst.act(&Generator::new(Kind::Face, i + 1, n)?, x)?;
        inst.act(&Generator::new(Kind::Degeneracy, i, n - 1)?, &down)
    };
    let mut x = g.clone();
    for &j in alpha.complement().indices().iter().rev() {
        let qx = q(j, &x)?;
        x = sub(inst, n, &x, &qx);
    }
    for &i in alpha.indices() {
        x = q(i, &x)?;
    }
    Ok(x)
}

/// The symmetric closed form via replacement operators: `1 - r_j` over the
/// complement (largest applied first), then `r_i` over `alpha(k)`.
pub fn closed_form_symmetric<G: SGroup>(
    inst: &G,
    n: usize,
    g: &G::Elem,
    k: usize,
) -> Result<G::Elem> {
    if k >= (1usize << n) {
        return Err(Error::Domain(format!("component index {k} out of range at level {n}")));
    }
    let alpha = MultiIndex::from_bitmask(k as u64, n, Variant::Symmetric);
    let mut x = g.clone();
    for &j in alpha.complement().indices().iter().rev() {
        let rx = inst.act(&Generator::new(Kind::Replacement, j, n)?, &x)?;
        x = sub(inst, n, &x, &rx);
    }
    for &i in alpha.indices() {
        x = inst.act(&Generator::new(Kind::Replacement, i, n)?, &x)?;
    }
    Ok(x)
}

/// The sorted form of the symmetric closed formula: one factor per index
/// `1..=n` in increasing reading order (so applied decreasing), each either
/// `r_i` or `1 - r_i`.
pub fn closed_form_symmetric_sorted<G: SGroup>(
    inst: &G,
    n: usize,
    g: &G::Elem,
    k: usize,
) -> Result<G::Elem> {
    if k >= (1usize << n) {
        return Err(Error::Domain(format!("component index {k} out of range at level {n}")));
    }
    let alpha = MultiIndex::from_bitmask(k as u64, n, Variant::Symmetric);
    let mut x = g.clone();
    for i in (1..=n).rev() {
        let rx = inst.act(&Generator::new(Kind::Replacement, i, n)?, &x)?;
        x = if alpha.contains(i) { rx } else { sub(inst, n, &x, &rx) };
    }
    Ok(x)
}

/// Element-wise checks of the replacement operators on a symmetric
/// instance: the three defining words agree, and the operators are
/// commuting idempotents.
pub fn verify_replacement_projections<G: SGroup>(
    inst: &G,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<VerifyReport> {
    if !inst.is_symmetric() {
        return Err(Error::Domain("replacement projections need a symmetric instance".into()));
    }
    let mut defining = CheckReport::new("replacement_defining_words_agree");
    let mut idem = CheckReport::new("replacement_idempotent");
    let mut comm = CheckReport::new("replacement_operators_commute");
    for trial in 0..trials {
        let mut rng = seeding::rng_from_seed(seeding::derive_seed(seed, trial));
        let g = inst.sample(n, &mut rng);
        let witness = |check: &str, expected: &G::Elem, got: &G::Elem| Witness {
            instance: inst.instance_id(),
            n,
            check: check.to_string(),
            seed,
            trial,
            order: None,
            inputs: serde_json::json!({ "element": inst.elem_to_json(n, &g) }),
            expected: inst.elem_to_json(n, expected),
            got: inst.elem_to_json(n, got),
        };
        for i in 1..=n {
            let r = inst.act(&Generator::new(Kind::Replacement, i, n)?, &g)?;
            let via_ud = act_word(
                inst,
                &OperatorWord::from_applied(n, &[(Kind::Face, i), (Kind::QuasiDegeneracy, i)])?,
                &g,
            )?;
            let via_du = act_word(
                inst,
                &OperatorWord::from_applied(n, &[(Kind::QuasiDegeneracy, i), (Kind::Face, i + 1)])?,
                &g,
            )?;
            let via_du2 = act_word(
                inst,
                &OperatorWord::from_applied(n, &[(Kind::QuasiDegeneracy, i + 1), (Kind::Face, i)])?,
                &g,
            )?;
            defining.record(r == via_ud && r == via_du && r == via_du2, || {
                witness("replacement_defining_words_agree", &r, &via_ud)
            });
            let rr = inst.act(&Generator::new(Kind::Replacement, i, n)?, &r)?;
            idem.record(rr == r, || witness("replacement_idempotent", &r, &rr));
            for j in 1..=n {
                let rj = Generator::new(Kind::Replacement, j, n)?;
                let ri = Generator::new(Kind::Replacement, i, n)?;
                let ij = inst.act(&ri, &inst.act(&rj, &g)?)?;
                let ji = inst.act(&rj, &inst.act(&ri, &g)?)?;
                comm.record(ij == ji, || witness("replacement_operators_commute", &ij, &ji));
            }
        }
    }
    Ok(VerifyReport::new(vec![defining, idem, comm]))
}

/// Cap on the number of component tuples the exact checks will enumerate.
pub const ENUMERATION_LIMIT: u128 = 1 << 16;

/// Whether the exact semidirect-product checks can run for this instance
/// and level.
pub fn exactly_verifiable<G: SGroup>(inst: &G, n: usize) -> bool {
    inst.level_order(n).is_some_and(|order| order <= ENUMERATION_LIMIT)
        && (0..=n).all(|m| inst.moore_elements(m, ENUMERATION_LIMIT).is_some())
}

/// Exact verification of the unique-factorization condition: enumerates
/// every component tuple for the order, multiplies them out, and demands
/// all products be distinct and exactly fill the level group.  Returns the
/// first violation as a replayable witness.  Independent of the stripping
/// recursion.
pub fn exact_unique_factorization<G: SGroup>(
    inst: &G,
    n: usize,
    order: &TotalOrder,
    flavor: Variant,
) -> Result<Option<Witness>> {
    validate_setup(inst, n, order, flavor, true)?;
    let group_order = inst
        .level_order(n)
        .filter(|&o| o <= ENUMERATION_LIMIT)
        .ok_or_else(|| Error::Domain("level group too large for exact verification".into()))?;

    // Components per position: every Moore chain embedded along the
    // position's multi-index.
    let mut per_position: Vec<Vec<G::Elem>> = Vec::with_capacity(order.len());
    let mut tuple_count: u128 = 1;
    for alpha in order.positions() {
        let moores = inst
            .moore_elements(n - alpha.len(), ENUMERATION_LIMIT)
            .ok_or_else(|| Error::Domain("Moore subgroup too large for exact verification".into()))?;
        let embedded: Vec<G::Elem> = moores
            .iter()
            .map(|m| embed_component(inst, alpha, m))
            .collect::<Result<_>>()?;
        tuple_count = tuple_count.saturating_mul(embedded.len() as u128);
        per_position.push(embedded);
    }
    if tuple_count != group_order {
        return Err(Error::Contradiction(format!(
            "component tuple count {tuple_count} does not match the level order {group_order}"
        )));
    }

    let mut seen: BTreeMap<G::Elem, Vec<usize>> = BTreeMap::new();
    let mut digits = vec![0usize; per_position.len()];
    loop {
        let tuple: Vec<G::Elem> = digits
            .iter()
            .enumerate()
            .map(|(k, &d)| per_position[k][d].clone())
            .collect();
        let product = ordered_product(inst, n, &tuple);
        if let Some(other) = seen.insert(product.clone(), digits.clone()) {
            let other_tuple: Vec<G::Elem> = other
                .iter()
                .enumerate()
                .map(|(k, &d)| per_position[k][d].clone())
                .collect();
            return Ok(Some(Witness {
                instance: inst.instance_id(),
                n,
                check: "double_factorization".into(),
                seed: 0,
                trial: 0,
                order: Some(order.clone()),
                inputs: serde_json::json!({
                    "tuple_a": tuple_json(inst, n, order, &other_tuple),
                    "tuple_b": tuple_json(inst, n, order, &tuple),
                }),
                expected: serde_json::json!("distinct products for distinct component tuples"),
                got: inst.elem_to_json(n, &product),
            }));
        }
        // Mixed-radix increment.
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                debug_assert_eq!(seen.len() as u128, group_order);
                return Ok(None);
            }
            digits[pos] += 1;
            if digits[pos] < per_position[pos].len() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

/// Exact verification of the normality condition: every partial product
/// set `H_0 H_1 ... H_k` is closed under conjugation by the whole level
/// group.  Trivial on abelian instances.  Returns the first violation as a
/// replayable witness.
pub fn exact_normality<G: SGroup>(
    inst: &G,
    n: usize,
    order: &TotalOrder,
    flavor: Variant,
) -> Result<Option<Witness>> {
    validate_setup(inst, n, order, flavor, true)?;
    if inst.is_abelian() {
        return Ok(None);
    }
    let mut per_position: Vec<Vec<G::Elem>> = Vec::with_capacity(order.len());
    for alpha in order.positions() {
        let moores = inst
            .moore_elements(n - alpha.len(), ENUMERATION_LIMIT)
            .ok_or_else(|| Error::Domain("Moore subgroup too large for exact verification".into()))?;
        let embedded: Vec<G::Elem> = moores
            .iter()
            .map(|m| embed_component(inst, alpha, m))
            .collect::<Result<_>>()?;
        per_position.push(embedded);
    }

    // Partial product sets, grown one position at a time.
    let mut partial: Vec<std::collections::BTreeSet<G::Elem>> = Vec::new();
    let mut cur: std::collections::BTreeSet<G::Elem> = [inst.identity(n)].into();
    for embedded in &per_position {
        let mut next = std::collections::BTreeSet::new();
        for p in &cur {
            for h in embedded {
                next.insert(inst.mul(n, p, h));
            }
        }
        if next.len() as u128 > ENUMERATION_LIMIT {
            return Err(Error::Domain("partial products too large for exact verification".into()));
        }
        partial.push(next.clone());
        cur = next;
    }
    let whole = partial.last().expect("at least one position").clone();

    for (k, set) in partial.iter().enumerate().take(partial.len() - 1) {
        for p in set {
            for h in &whole {
                let conj = inst.mul(n, &inst.mul(n, h, p), &inst.inv(n, h));
                if !set.contains(&conj) {
                    return Ok(Some(Witness {
                        instance: inst.instance_id(),
                        n,
                        check: "partial_product_not_normal".into(),
                        seed: 0,
                        trial: 0,
                        order: Some(order.clone()),
                        inputs: serde_json::json!({
                            "k": k,
                            "member": inst.elem_to_json(n, p),
                            "conjugator": inst.elem_to_json(n, h),
                        }),
                        expected: serde_json::json!(format!(
                            "conjugate stays in the partial product through position {k}"
                        )),
                        got: inst.elem_to_json(n, &conj),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Decomposition serialization: order, multi-indices and element payloads.
pub fn decomposition_to_json<G: SGroup>(
    inst: &G,
    dec: &Decomposition<G::Elem>,
) -> serde_json::Value {
    serde_json::json!({
        "n": dec.n,
        "flavor": dec.flavor,
        "order": dec.order,
        "components": dec
            .components
            .iter()
            .map(|(alpha, piece)| {
                serde_json::json!({
                    "alpha": alpha.indices(),
                    "element": inst.elem_to_json(dec.n, piece),
                })
            })
            .collect::<Vec<_>>(),
    })
}

pub fn decomposition_from_json<G: SGroup>(
    inst: &G,
    v: &serde_json::Value,
) -> Result<Decomposition<G::Elem>> {
    let bad = |msg: &str| Error::Schema(msg.to_string());
    let n = v.get("n").and_then(|x| x.as_u64()).ok_or_else(|| bad("missing n"))? as usize;
    let flavor: Variant = serde_json::from_value(
        v.get("flavor").cloned().ok_or_else(|| bad("missing flavor"))?,
    )
    .map_err(|e| Error::Schema(e.to_string()))?;
    let order: TotalOrder = serde_json::from_value(
        v.get("order").cloned().ok_or_else(|| bad("missing order"))?,
    )
    .map_err(|e| Error::Schema(e.to_string()))?;
    let raw = v
        .get("components")
        .and_then(|x| x.as_array())
        .ok_or_else(|| bad("missing components"))?;
    if raw.len() != order.len() {
        return Err(bad("component count does not match the order"));
    }
    let mut components = Vec::with_capacity(raw.len());
    for (k, item) in raw.iter().enumerate() {
        let alpha_ids: Vec<usize> = serde_json::from_value(
            item.get("alpha").cloned().ok_or_else(|| bad("component missing alpha"))?,
        )
        .map_err(|e| Error::Schema(e.to_string()))?;
        let alpha = MultiIndex::new(alpha_ids, n, order.variant())?;
        if &alpha != order.position(k) {
            return Err(bad("component multi-index does not match the order"));
        }
        let elem = inst.elem_from_json(
            n,
            item.get("element").ok_or_else(|| bad("component missing element"))?,
        )?;
        components.push((alpha, elem));
    }
    Ok(Decomposition { n, flavor, order, components })
}
