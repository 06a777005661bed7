//! Abstract (symmetric-)simplicial groups and their Moore complexes.
//!
//! An instance is a functor from the opposite of the category of finite
//! ordinals (or its monotone subcategory) to groups, presented operationally:
//! level-wise group operations plus an action of the operator generators.
//! Two concrete instances are provided, an abelian one built from chain
//! complex data ([`gamma::GammaInstance`]) and a symmetric one built from a
//! finite group ([`exponential::ExpInstance`]); they are the substrate for
//! all sampled verification.

pub mod exponential;
pub mod finite_group;
pub mod gamma;
mod lattice;

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::opcalc::{Generator, Kind, OperatorWord};
use crate::report::{CheckReport, VerifyReport, Witness};
use crate::seeding;

pub use exponential::ExpInstance;
pub use finite_group::FiniteGroup;
pub use gamma::{ChainComplexData, GammaInstance, MooreData};

/// A (symmetric-)simplicial group, presented by its level-wise group
/// operations and the generator action.
///
/// Additive notation `x - y` is realized as `x * y^{-1}` throughout (see
/// [`sub`]).  Non-symmetric instances only act by faces and degeneracies.
pub trait SGroup: Sync {
    type Elem: Clone + PartialEq + Ord + Send + Sync + std::fmt::Debug;

    /// Stable identifier used in witnesses; parseable by
    /// [`parse_instance_spec`].
    fn instance_id(&self) -> String;

    fn is_symmetric(&self) -> bool;
    fn is_abelian(&self) -> bool;

    /// Order of the level group, when it fits in a `u128`.
    fn level_order(&self, n: usize) -> Option<u128>;

    /// Every Moore chain at level `n`, when there are at most `limit` of
    /// them; `None` otherwise.  Powers the exact semidirect-product
    /// verification on small instances.
    fn moore_elements(&self, n: usize, limit: u128) -> Option<Vec<Self::Elem>>;

    fn identity(&self, n: usize) -> Self::Elem;
    fn mul(&self, n: usize, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, n: usize, a: &Self::Elem) -> Self::Elem;

    fn eq_elem(&self, _n: usize, a: &Self::Elem, b: &Self::Elem) -> bool {
        a == b
    }

    /// Applies a generator to an element of level `g.level()`.
    fn act(&self, g: &Generator, a: &Self::Elem) -> Result<Self::Elem>;

    /// Uniform independent choice per payload coordinate.
    fn sample(&self, n: usize, rng: &mut ChaCha8Rng) -> Self::Elem;

    fn elem_to_json(&self, n: usize, a: &Self::Elem) -> serde_json::Value;
    fn elem_from_json(&self, n: usize, v: &serde_json::Value) -> Result<Self::Elem>;

    /// A random Moore chain at level `n`: a plain sample pushed into the
    /// Moore subgroup by [`moore_project`].
    fn sample_moore(&self, n: usize, rng: &mut ChaCha8Rng) -> Result<Self::Elem>
    where
        Self: Sized,
    {
        let g = self.sample(n, rng);
        moore_project(self, n, &g)
    }

    /// A random Moore cycle at level `n`; by default the boundary of a Moore
    /// chain one level up, which always lands in the cycles.
    fn sample_cycle(&self, n: usize, rng: &mut ChaCha8Rng) -> Result<Self::Elem>
    where
        Self: Sized,
    {
        if n == 0 {
            return Ok(self.sample(0, rng));
        }
        let h = self.sample_moore(n + 1, rng)?;
        self.act(&Generator::new(Kind::Face, 0, n + 1)?, &h)
    }
}

/// Additive notation `x - y`, read as multiplication by the inverse on the
/// right.
pub fn sub<G: SGroup>(inst: &G, n: usize, x: &G::Elem, y: &G::Elem) -> G::Elem {
    let y_inv = inst.inv(n, y);
    inst.mul(n, x, &y_inv)
}

pub fn is_identity<G: SGroup>(inst: &G, n: usize, a: &G::Elem) -> bool {
    inst.eq_elem(n, a, &inst.identity(n))
}

/// Applies a whole word, innermost generator first.
pub fn act_word<G: SGroup>(inst: &G, word: &OperatorWord, a: &G::Elem) -> Result<G::Elem> {
    let mut cur = a.clone();
    for g in word.applied_order() {
        cur = inst.act(g, &cur)?;
    }
    Ok(cur)
}

/// Moore chain test: all faces except the 0th are trivial.
pub fn moore_membership<G: SGroup>(inst: &G, n: usize, g: &G::Elem) -> Result<bool> {
    for i in 1..=n {
        let face = inst.act(&Generator::new(Kind::Face, i, n)?, g)?;
        if !is_identity(inst, n - 1, &face) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Moore cycle test: every face is trivial (at level 0 the cycles are all of
/// the group, matching the Moore chains there).
pub fn cycle_membership<G: SGroup>(inst: &G, n: usize, g: &G::Elem) -> Result<bool> {
    for i in 0..=n {
        if n == 0 {
            break;
        }
        let face = inst.act(&Generator::new(Kind::Face, i, n)?, g)?;
        if !is_identity(inst, n - 1, &face) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Projects an element into the Moore subgroup by stripping faces from the
/// top down: `g := g - s_{i-1} d_i(g)` kills `d_i` and keeps the faces above
/// `i` trivial.
pub fn moore_project<G: SGroup>(inst: &G, n: usize, g: &G::Elem) -> Result<G::Elem> {
    let mut cur = g.clone();
    for i in (1..=n).rev() {
        let face = inst.act(&Generator::new(Kind::Face, i, n)?, &cur)?;
        let degen = inst.act(&Generator::new(Kind::Degeneracy, i - 1, n - 1)?, &face)?;
        cur = sub(inst, n, &cur, &degen);
    }
    debug_assert!(moore_membership(inst, n, &cur)?);
    Ok(cur)
}

/// Invariance of the Moore subgroups under the permutation action: Moore
/// chains stay Moore chains under `t_j` for `j >= 1`, cycles stay cycles
/// under every `t_j`.  The behavior of `t_0` on general Moore chains is
/// outside the claim and only tallied.
pub fn verify_symmetric_invariance<G: SGroup>(
    inst: &G,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<VerifyReport> {
    if !inst.is_symmetric() {
        return Err(Error::Domain("symmetric invariance needs a symmetric instance".into()));
    }
    let mut moore_check = CheckReport::new("moore_invariant_under_positive_transpositions");
    let mut cycle_check = CheckReport::new("cycles_invariant_under_all_transpositions");
    for trial in 0..trials {
        let mut rng = seeding::rng_from_seed(seeding::derive_seed(seed, trial));
        let m = inst.sample_moore(n, &mut rng)?;
        for j in 1..n {
            let image = inst.act(&Generator::new(Kind::Transposition, j, n)?, &m)?;
            let ok = moore_membership(inst, n, &image)?;
            moore_check.record(ok, || Witness {
                instance: inst.instance_id(),
                n,
                check: format!("moore_invariant_under_t_{j}"),
                seed,
                trial,
                order: None,
                inputs: serde_json::json!({ "element": inst.elem_to_json(n, &m) }),
                expected: serde_json::json!("moore chain"),
                got: inst.elem_to_json(n, &image),
            });
        }
        if n >= 1 {
            // t_0 on a Moore chain: no claim is made; tally departures.
            let image = inst.act(&Generator::new(Kind::Transposition, 0, n)?, &m)?;
            if !moore_membership(inst, n, &image)? {
                moore_check.out_of_claim += 1;
            }
        }
        let z = inst.sample_cycle(n, &mut rng)?;
        debug_assert!(cycle_membership(inst, n, &z)?);
        for j in 0..n {
            let image = inst.act(&Generator::new(Kind::Transposition, j, n)?, &z)?;
            let ok = cycle_membership(inst, n, &image)?;
            cycle_check.record(ok, || Witness {
                instance: inst.instance_id(),
                n,
                check: format!("cycle_invariant_under_t_{j}"),
                seed,
                trial,
                order: None,
                inputs: serde_json::json!({ "element": inst.elem_to_json(n, &z) }),
                expected: serde_json::json!("moore cycle"),
                got: inst.elem_to_json(n, &image),
            });
        }
    }
    Ok(VerifyReport::new(vec![moore_check, cycle_check]))
}

/// The symmetric chain complex condition `d(t_i m) = t_{i-1}(d m)` for Moore
/// chains and `1 <= i <= n-1`, plus the boundary condition on cycles:
/// `d_0(t_0 m) = d_1(m) = 0` for `m` a cycle.
pub fn verify_symmetric_chain_condition<G: SGroup>(
    inst: &G,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<VerifyReport> {
    if !inst.is_symmetric() {
        return Err(Error::Domain("symmetric chain condition needs a symmetric instance".into()));
    }
    let mut shift = CheckReport::new("boundary_shifts_transpositions_on_moore_chains");
    let mut cycle0 = CheckReport::new("t_0_boundary_vanishes_on_cycles");
    for trial in 0..trials {
        let mut rng = seeding::rng_from_seed(seeding::derive_seed(seed, trial));
        let m = inst.sample_moore(n, &mut rng)?;
        for i in 1..n {
            let d0 = Generator::new(Kind::Face, 0, n)?;
            let lhs =
                inst.act(&d0, &inst.act(&Generator::new(Kind::Transposition, i, n)?, &m)?)?;
            let dm = inst.act(&d0, &m)?;
            let rhs = inst.act(&Generator::new(Kind::Transposition, i - 1, n - 1)?, &dm)?;
            shift.record(inst.eq_elem(n - 1, &lhs, &rhs), || Witness {
                instance: inst.instance_id(),
                n,
                check: format!("d0_t{i}_equals_t{}_d0", i - 1),
                seed,
                trial,
                order: None,
                inputs: serde_json::json!({ "element": inst.elem_to_json(n, &m) }),
                expected: inst.elem_to_json(n - 1, &rhs),
                got: inst.elem_to_json(n - 1, &lhs),
            });
        }
        if n >= 1 {
            let z = inst.sample_cycle(n, &mut rng)?;
            let t0z = inst.act(&Generator::new(Kind::Transposition, 0, n)?, &z)?;
            let lhs = inst.act(&Generator::new(Kind::Face, 0, n)?, &t0z)?;
            let d1z = inst.act(&Generator::new(Kind::Face, 1, n)?, &z)?;
            let ok = is_identity(inst, n - 1, &lhs) && inst.eq_elem(n - 1, &lhs, &d1z);
            cycle0.record(ok, || Witness {
                instance: inst.instance_id(),
                n,
                check: "d0_t0_vanishes_on_cycle".into(),
                seed,
                trial,
                order: None,
                inputs: serde_json::json!({ "element": inst.elem_to_json(n, &z) }),
                expected: inst.elem_to_json(n - 1, &inst.identity(n - 1)),
                got: inst.elem_to_json(n - 1, &lhs),
            });
        }
    }
    Ok(VerifyReport::new(vec![shift, cycle0]))
}

/// Sampled checks that an instance really is a functor into groups: the
/// action is a homomorphism for every generator, words with equal function
/// tables act identically, and the Moore boundary squares to zero.
pub fn verify_instance<G: SGroup>(
    inst: &G,
    max_level: usize,
    trials: u64,
    seed: u64,
) -> Result<VerifyReport> {
    let kinds: &[Kind] = if inst.is_symmetric() {
        &[
            Kind::Face,
            Kind::Degeneracy,
            Kind::Transposition,
            Kind::QuasiDegeneracy,
            Kind::Cycle,
            Kind::Replacement,
        ]
    } else {
        &[Kind::Face, Kind::Degeneracy]
    };

    let mut hom = CheckReport::new("generator_action_is_homomorphism");
    let mut functor = CheckReport::new("equal_tables_act_equally");
    let mut boundary_sq = CheckReport::new("moore_boundary_squares_to_zero");

    for trial in 0..trials {
        let mut rng = seeding::rng_from_seed(seeding::derive_seed(seed, trial));
        for n in 0..=max_level {
            let a = inst.sample(n, &mut rng);
            let b = inst.sample(n, &mut rng);
            let ab = inst.mul(n, &a, &b);
            for &kind in kinds {
                let Some(range) = kind.index_range(n) else { continue };
                for i in range {
                    let g = Generator::new(kind, i, n)?;
                    let lhs = inst.act(&g, &ab)?;
                    let rhs = inst.mul(g.target_level(), &inst.act(&g, &a)?, &inst.act(&g, &b)?);
                    hom.record(inst.eq_elem(g.target_level(), &lhs, &rhs), || Witness {
                        instance: inst.instance_id(),
                        n,
                        check: format!("homomorphism_{kind}_{i}"),
                        seed,
                        trial,
                        order: None,
                        inputs: serde_json::json!({
                            "a": inst.elem_to_json(n, &a),
                            "b": inst.elem_to_json(n, &b),
                        }),
                        expected: inst.elem_to_json(g.target_level(), &rhs),
                        got: inst.elem_to_json(g.target_level(), &lhs),
                    });
                }
            }
        }

        // Functoriality: bucket random words by their function table.
        for n in 0..=max_level {
            let words: Vec<OperatorWord> =
                (0..24).map(|_| random_word(inst, kinds, n, 4, &mut rng)).collect();
            let a = inst.sample(n, &mut rng);
            for w1 in &words {
                for w2 in &words {
                    if w1.to_finmap() != w2.to_finmap() {
                        continue;
                    }
                    let x = act_word(inst, w1, &a)?;
                    let y = act_word(inst, w2, &a)?;
                    functor.record(inst.eq_elem(w1.to_level(), &x, &y), || Witness {
                        instance: inst.instance_id(),
                        n,
                        check: format!("functoriality {w1:?} vs {w2:?}"),
                        seed,
                        trial,
                        order: None,
                        inputs: serde_json::json!({ "element": inst.elem_to_json(n, &a) }),
                        expected: inst.elem_to_json(w1.to_level(), &x),
                        got: inst.elem_to_json(w2.to_level(), &y),
                    });
                }
            }
        }

        for n in 2..=max_level.max(2) {
            let m = inst.sample_moore(n, &mut rng)?;
            let d0_top = Generator::new(Kind::Face, 0, n)?;
            let d0_next = Generator::new(Kind::Face, 0, n - 1)?;
            let twice = inst.act(&d0_next, &inst.act(&d0_top, &m)?)?;
            boundary_sq.record(is_identity(inst, n - 2, &twice), || Witness {
                instance: inst.instance_id(),
                n,
                check: "d0_squared_trivial_on_moore".into(),
                seed,
                trial,
                order: None,
                inputs: serde_json::json!({ "element": inst.elem_to_json(n, &m) }),
                expected: inst.elem_to_json(n - 2, &inst.identity(n - 2)),
                got: inst.elem_to_json(n - 2, &twice),
            });
        }
    }
    Ok(VerifyReport::new(vec![hom, functor, boundary_sq]))
}

/// A random composable word starting at `from_level`, length up to
/// `max_len`, over the given kinds.
fn random_word<G: SGroup>(
    _inst: &G,
    kinds: &[Kind],
    from_level: usize,
    max_len: usize,
    rng: &mut ChaCha8Rng,
) -> OperatorWord {
    use rand::Rng;
    let len = rng.gen_range(0..=max_len);
    let mut steps = Vec::with_capacity(len);
    let mut level = from_level;
    for _ in 0..len {
        // Draw until a kind with a nonempty range at this level comes up;
        // degeneracies always qualify, so this terminates.
        let (kind, index) = loop {
            let kind = kinds[rng.gen_range(0..kinds.len())];
            if let Some(range) = kind.index_range(level) {
                let (lo, hi) = (*range.start(), *range.end());
                break (kind, rng.gen_range(lo..=hi));
            }
        };
        let g = Generator::new(kind, index, level).expect("index drawn from legal range");
        level = g.target_level();
        steps.push((kind, index));
    }
    OperatorWord::from_applied(from_level, &steps).expect("levels tracked during construction")
}

/// Constructor matching the operation surface: the exponential instance on
/// base level `m` over the finite group `K`.
pub fn exponential_instance(m: usize, group: FiniteGroup) -> Result<ExpInstance> {
    ExpInstance::new(m, group)
}

/// An instance of either concrete family, as named by an instance spec
/// string: `exp:<m>:<group>` or `gamma:<chain-complex-json>`.
pub enum AnyInstance {
    Exp(ExpInstance),
    Gamma(GammaInstance),
}

/// Parses an instance spec string; the inverse of
/// [`SGroup::instance_id`].
pub fn parse_instance_spec(spec: &str) -> Result<AnyInstance> {
    if let Some(rest) = spec.strip_prefix("exp:") {
        let (m_str, group_str) = rest
            .split_once(':')
            .ok_or_else(|| Error::Schema(format!("expected exp:<m>:<group>, got {spec:?}")))?;
        let m: usize = m_str
            .parse()
            .map_err(|_| Error::Schema(format!("bad base level in instance spec {spec:?}")))?;
        let group = if group_str.trim_start().starts_with('{') {
            serde_json::from_str::<FiniteGroup>(group_str)
                .map_err(|e| Error::Schema(format!("bad group table: {e}")))?
        } else {
            FiniteGroup::builtin(group_str)?
        };
        Ok(AnyInstance::Exp(ExpInstance::new(m, group)?))
    } else if let Some(rest) = spec.strip_prefix("gamma:") {
        let chain: ChainComplexData = serde_json::from_str(rest)
            .map_err(|e| Error::Schema(format!("bad chain complex: {e}")))?;
        Ok(AnyInstance::Gamma(GammaInstance::new(chain)?))
    } else {
        Err(Error::Schema(format!(
            "unknown instance spec {spec:?} (expected exp:<m>:<group> or gamma:<json>)"
        )))
    }
}

/// Runs a generic closure against whichever instance an [`AnyInstance`]
/// holds.
#[macro_export]
macro_rules! with_instance {
    ($any:expr, |$inst:ident| -> $ret:ty $body:block) => {
        match $any {
            $crate::sgroup::AnyInstance::Exp($inst) => (|| -> $ret { $body })(),
            $crate::sgroup::AnyInstance::Gamma($inst) => (|| -> $ret { $body })(),
        }
    };
    ($any:expr, |$inst:ident| $body:expr) => {
        match $any {
            $crate::sgroup::AnyInstance::Exp($inst) => $body,
            $crate::sgroup::AnyInstance::Gamma($inst) => $body,
        }
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_spec_round_trip() {
        let exp = match parse_instance_spec("exp:2:S3").unwrap() {
            AnyInstance::Exp(e) => e,
            _ => panic!("wrong kind"),
        };
        assert_eq!(exp.instance_id(), "exp:2:S3");
        assert!(parse_instance_spec("exp:2").is_err());
        assert!(parse_instance_spec("nope:1").is_err());

        let gamma_spec = r#"gamma:{"groups":[[2],[2]],"boundaries":[[[0]]]}"#;
        let gamma = match parse_instance_spec(gamma_spec).unwrap() {
            AnyInstance::Gamma(g) => g,
            _ => panic!("wrong kind"),
        };
        let again = parse_instance_spec(&gamma.instance_id()).unwrap();
        with_instance!(&again, |inst| assert_eq!(inst.instance_id(), gamma.instance_id()));
    }
}
