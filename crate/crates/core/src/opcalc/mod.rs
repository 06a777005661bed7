//! The operator calculus of the simplicial and symmetric-simplicial
//! categories.
//!
//! Operators are applied on the left of (symmetric-)simplicial objects.  A
//! [`Generator`] carries the level of the element it is applied to, so the
//! same symbol at different levels is a different value.  A generator acting
//! `G_n -> G_m` is, read in the category of finite ordinals, a map
//! `[m] -> [n]`; a composite word therefore evaluates to a single [`FinMap`],
//! and that evaluation is the sole arbiter of operator equality.

mod factorize;
mod presentations;
mod push;

pub use factorize::{is_canonical_delta_word, map_to_word_delta, map_to_word_fin};
pub use presentations::{verify_presentations, RelationFailure, RelationReport, RelationRow};
pub use push::{
    face_absorb_face, push_face_through_degens, push_face_through_quasidegens, push_word_through,
    verify_normalization_dichotomy, verify_push_through_exhaustive, FaceConvention,
    NormalizedPush, PushResult,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finmap::{compose_maps, FinMap};
use crate::orders::{MultiIndex, Variant};

/// The six generator families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    /// Face `d_i`, lowering the level by one.
    #[serde(rename = "d")]
    Face,
    /// Degeneracy `s_i`, raising the level by one.
    #[serde(rename = "s")]
    Degeneracy,
    /// Adjacent transposition `t_i`.
    #[serde(rename = "t")]
    Transposition,
    /// Elementary quasidegeneracy `u_i`, raising the level by one.
    /// `u_1` coincides with `s_0`; `u_0` is not defined.
    #[serde(rename = "u")]
    QuasiDegeneracy,
    /// Standard cyclic permutation `z_i` (an `(i+1)`-cycle; `z_0` is the
    /// identity).
    #[serde(rename = "z")]
    Cycle,
    /// Replacement operator `r_i = u_i d_i`.
    #[serde(rename = "r")]
    Replacement,
}

impl Kind {
    /// Legal index range at the given applied-to level, or `None` if the
    /// kind has no legal index there at all.
    pub fn index_range(&self, level: usize) -> Option<std::ops::RangeInclusive<usize>> {
        match self {
            Kind::Face => (level >= 1).then_some(0..=level),
            Kind::Degeneracy => Some(0..=level),
            Kind::Transposition => (level >= 1).then(|| 0..=level - 1),
            Kind::QuasiDegeneracy => Some(1..=level + 1),
            Kind::Cycle => Some(0..=level),
            Kind::Replacement => (level >= 1).then_some(1..=level),
        }
    }

    /// Level shift of the operator: `d` lowers, `s`/`u` raise, the
    /// permutation-like kinds preserve.
    pub fn level_delta(&self) -> isize {
        match self {
            Kind::Face => -1,
            Kind::Degeneracy | Kind::QuasiDegeneracy => 1,
            Kind::Transposition | Kind::Cycle | Kind::Replacement => 0,
        }
    }

    /// Whether the kind exists in the plain simplicial calculus.
    pub fn is_simplicial(&self) -> bool {
        matches!(self, Kind::Face | Kind::Degeneracy)
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c = match self {
            Kind::Face => "d",
            Kind::Degeneracy => "s",
            Kind::Transposition => "t",
            Kind::QuasiDegeneracy => "u",
            Kind::Cycle => "z",
            Kind::Replacement => "r",
        };
        write!(f, "{c}")
    }
}

/// A named elementary operator together with the level of the element it is
/// applied to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGenerator", into = "RawGenerator")]
pub struct Generator {
    kind: Kind,
    index: usize,
    level: usize,
}

#[derive(Serialize, Deserialize)]
struct RawGenerator {
    kind: Kind,
    i: usize,
    level: usize,
}

impl TryFrom<RawGenerator> for Generator {
    type Error = Error;
    fn try_from(raw: RawGenerator) -> Result<Generator> {
        Generator::new(raw.kind, raw.i, raw.level)
    }
}

impl From<Generator> for RawGenerator {
    fn from(g: Generator) -> RawGenerator {
        RawGenerator { kind: g.kind, i: g.index, level: g.level }
    }
}

impl std::fmt::Debug for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}_{}@{}", self.kind, self.index, self.level)
    }
}

impl Generator {
    pub fn new(kind: Kind, index: usize, level: usize) -> Result<Self> {
        match kind.index_range(level) {
            Some(range) if range.contains(&index) => Ok(Generator { kind, index, level }),
            _ => Err(Error::IndexRange { kind, index, level }),
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Level of the element the operator is applied to.
    pub fn level(&self) -> usize {
        self.level
    }

    /// Level of the result of applying the operator.
    pub fn target_level(&self) -> usize {
        (self.level as isize + self.kind.level_delta()) as usize
    }

    /// The operator read as a map of finite ordinals.  An operator
    /// `G_n -> G_m` corresponds to a map `[m] -> [n]`.
    pub fn to_finmap(&self) -> FinMap {
        let (i, n) = (self.index, self.level);
        let (dom, cod, table): (usize, usize, Vec<usize>) = match self.kind {
            // The monotone injection [n-1] -> [n] whose image misses i.
            Kind::Face => (n - 1, n, (0..n).map(|k| if k < i { k } else { k + 1 }).collect()),
            // The monotone surjection [n+1] -> [n] doubling the fiber of i.
            Kind::Degeneracy => {
                (n + 1, n, (0..=n + 1).map(|k| if k <= i { k } else { k - 1 }).collect())
            }
            Kind::Transposition => (
                n,
                n,
                (0..=n)
                    .map(|k| {
                        if k == i {
                            i + 1
                        } else if k == i + 1 {
                            i
                        } else {
                            k
                        }
                    })
                    .collect(),
            ),
            Kind::QuasiDegeneracy => (
                n + 1,
                n,
                (0..=n + 1)
                    .map(|k| {
                        if k == 0 || k == i {
                            0
                        } else if k < i {
                            k
                        } else {
                            k - 1
                        }
                    })
                    .collect(),
            ),
            Kind::Cycle => (
                n,
                n,
                (0..=n)
                    .map(|k| {
                        if k < i {
                            k + 1
                        } else if k == i {
                            0
                        } else {
                            k
                        }
                    })
                    .collect(),
            ),
            Kind::Replacement => {
                (n, n, (0..=n).map(|k| if k == 0 || k == i { 0 } else { k }).collect())
            }
        };
        FinMap::new(dom, cod, table).expect("generator tables are well formed")
    }
}

/// The named operator as a function table.
pub fn named_operator(kind: Kind, index: usize, level: usize) -> Result<FinMap> {
    Ok(Generator::new(kind, index, level)?.to_finmap())
}

/// Composition `outer . inner` of maps of finite ordinals (apply `inner`
/// first).
pub fn compose_fin_maps(outer: &FinMap, inner: &FinMap) -> Result<FinMap> {
    compose_maps(outer, inner)
}

/// A composable sequence of generators.
///
/// Generators are stored in reading order: `generators[0]` is the leftmost,
/// i.e. the operator applied *last*.  The word maps elements of level
/// `from_level` to elements of level `to_level`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Generator>", into = "Vec<Generator>")]
pub struct OperatorWord {
    generators: Vec<Generator>,
    from_level: usize,
    to_level: usize,
}

impl TryFrom<Vec<Generator>> for OperatorWord {
    type Error = Error;
    fn try_from(generators: Vec<Generator>) -> Result<OperatorWord> {
        let last = generators
            .last()
            .ok_or_else(|| Error::IllFormedWord("empty word needs an explicit level".into()))?;
        OperatorWord::new(generators.clone(), last.level())
    }
}

impl From<OperatorWord> for Vec<Generator> {
    fn from(w: OperatorWord) -> Vec<Generator> {
        w.generators
    }
}

impl std::fmt::Debug for OperatorWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.generators.is_empty() {
            return write!(f, "id@{}", self.from_level);
        }
        let parts: Vec<String> = self.generators.iter().map(|g| format!("{g:?}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl OperatorWord {
    /// Builds a word from generators in reading order, verifying the chain
    /// composes.  `from_level` is the level the whole word is applied to.
    pub fn new(generators: Vec<Generator>, from_level: usize) -> Result<Self> {
        let mut level = from_level;
        for g in generators.iter().rev() {
            if g.level() != level {
                return Err(Error::IllFormedWord(format!(
                    "generator {g:?} applied at level {level}"
                )));
            }
            level = g.target_level();
        }
        Ok(OperatorWord { generators, from_level, to_level: level })
    }

    /// The identity word at a level.
    pub fn identity(level: usize) -> Self {
        OperatorWord { generators: Vec::new(), from_level: level, to_level: level }
    }

    /// Builds a word from `(kind, index)` pairs listed in application order
    /// (first applied first), assigning levels automatically.
    pub fn from_applied(from_level: usize, steps: &[(Kind, usize)]) -> Result<Self> {
        let mut level = from_level;
        let mut generators = Vec::with_capacity(steps.len());
        for &(kind, index) in steps {
            let g = Generator::new(kind, index, level)?;
            level = g.target_level();
            generators.push(g);
        }
        generators.reverse();
        Ok(OperatorWord { generators, from_level, to_level: level })
    }

    pub fn single(g: Generator) -> Self {
        let (from, to) = (g.level(), g.target_level());
        OperatorWord { generators: vec![g], from_level: from, to_level: to }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Generators in the order they are applied to an element.
    pub fn applied_order(&self) -> impl Iterator<Item = &Generator> {
        self.generators.iter().rev()
    }

    pub fn from_level(&self) -> usize {
        self.from_level
    }

    pub fn to_level(&self) -> usize {
        self.to_level
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Concatenation `outer . inner` (apply `inner` first).
    pub fn then(inner: &OperatorWord, outer: &OperatorWord) -> Result<OperatorWord> {
        if inner.to_level != outer.from_level {
            return Err(Error::IllFormedWord(format!(
                "inner word ends at level {}, outer word starts at level {}",
                inner.to_level, outer.from_level
            )));
        }
        let mut generators = outer.generators.clone();
        generators.extend(inner.generators.iter().copied());
        Ok(OperatorWord { generators, from_level: inner.from_level, to_level: outer.to_level })
    }

    /// Evaluates the word to its map of finite ordinals.
    ///
    /// For a word `g_1 g_2 ... g_p` acting on elements as
    /// `g_1(g_2(...g_p(x)))`, the value is the composite of the generators'
    /// maps in the opposite direction: a map `[to_level] -> [from_level]`.
    pub fn to_finmap(&self) -> FinMap {
        let mut acc = FinMap::identity(self.to_level);
        for g in &self.generators {
            acc = compose_maps(&g.to_finmap(), &acc).expect("validated word composes");
        }
        acc
    }
}

/// Evaluates a word to its function table; the single source of truth for
/// operator equality.
pub fn word_to_map(word: &OperatorWord) -> FinMap {
    word.to_finmap()
}

/// The composite operator flavors built from a multi-index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiOperatorFlavor {
    /// `s_alpha = s_{i_k} s_{i_{k-1}} ... s_{i_1}` (simplicial).
    SAlpha,
    /// `d_alpha^+ = d_{i_1}^+ d_{i_2}^+ ... d_{i_k}^+` with `d_i^+ = d_{i+1}`
    /// (simplicial).
    DAlphaPlus,
    /// `u_alpha = u_{i_k} u_{i_{k-1}} ... u_{i_1}` (symmetric).
    UAlpha,
    /// `d_alpha = d_{i_1} d_{i_2} ... d_{i_k}` (symmetric).
    DAlpha,
}

impl MultiOperatorFlavor {
    fn required_variant(&self) -> Variant {
        match self {
            MultiOperatorFlavor::SAlpha | MultiOperatorFlavor::DAlphaPlus => Variant::Simplicial,
            MultiOperatorFlavor::UAlpha | MultiOperatorFlavor::DAlpha => Variant::Symmetric,
        }
    }
}

/// The composite word for a multi-index, with the exact generator ordering
/// of the defining displays.  `s_alpha` and `u_alpha` map
/// `G_{n-|alpha|} -> G_n`; the face flavors map `G_n -> G_{n-|alpha|}`,
/// where `n` is the ambient level of `alpha`.  The empty multi-index gives
/// the identity word.
pub fn multi_operator(alpha: &MultiIndex, flavor: MultiOperatorFlavor) -> Result<OperatorWord> {
    if alpha.variant() != flavor.required_variant() {
        return Err(Error::Domain(format!(
            "multi-index variant {} does not fit flavor {flavor:?}",
            alpha.variant()
        )));
    }
    let n = alpha.ambient();
    let k = alpha.len();
    let ids = alpha.indices();
    match flavor {
        // Raising flavors apply the smallest index first, starting at level n-k.
        MultiOperatorFlavor::SAlpha | MultiOperatorFlavor::UAlpha => {
            let kind = if flavor == MultiOperatorFlavor::SAlpha {
                Kind::Degeneracy
            } else {
                Kind::QuasiDegeneracy
            };
            let steps: Vec<(Kind, usize)> = ids.iter().map(|&i| (kind, i)).collect();
            OperatorWord::from_applied(n - k, &steps)
        }
        // Lowering flavors apply the largest index first, starting at level n.
        MultiOperatorFlavor::DAlphaPlus => {
            let steps: Vec<(Kind, usize)> =
                ids.iter().rev().map(|&i| (Kind::Face, i + 1)).collect();
            OperatorWord::from_applied(n, &steps)
        }
        MultiOperatorFlavor::DAlpha => {
            let steps: Vec<(Kind, usize)> = ids.iter().rev().map(|&i| (Kind::Face, i)).collect();
            OperatorWord::from_applied(n, &steps)
        }
    }
}

/// The cyclic permutation `z_i` written as the word `t_{i-1} ... t_1 t_0`.
pub(crate) fn cycle_word(i: usize, level: usize) -> Result<OperatorWord> {
    let steps: Vec<(Kind, usize)> = (0..i).map(|c| (Kind::Transposition, c)).collect();
    OperatorWord::from_applied(level, &steps)
}

/// The inverse cyclic permutation `z_i^{-1} = t_0 t_1 ... t_{i-1}`.
pub(crate) fn cycle_inverse_word(i: usize, level: usize) -> Result<OperatorWord> {
    let steps: Vec<(Kind, usize)> = (0..i).rev().map(|c| (Kind::Transposition, c)).collect();
    OperatorWord::from_applied(level, &steps)
}
