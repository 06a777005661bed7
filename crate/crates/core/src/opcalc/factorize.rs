//! Deterministic factorization of function tables into operator words.
//!
//! `map_to_word_delta` realizes the unique epi-mono factorization of a
//! monotone map: reading the output word left to right it is a block of
//! degeneracies with strictly decreasing indices followed by a block of
//! faces with strictly increasing indices (so the faces act first, largest
//! index first).
//!
//! `map_to_word_fin` handles an arbitrary map `f` of finite ordinals with a
//! fixed three-stage scheme:
//!
//! 1. stable-sort the table: `f = h . p` with `h` monotone and `p` the
//!    inverse of the stable sorting permutation;
//! 2. factor `h` with `map_to_word_delta`, then replace every degeneracy
//!    `s_i` by the conjugate `z_i u_{i+1} z_i^{-1}` so only `d`, `u`, `t`
//!    generators remain;
//! 3. decompose `p` into adjacent transpositions by bubble sort.
//!
//! Only the round trip through `word_to_map` is contractual; equality of
//! operators is always decided on function tables, never on words.

use crate::error::{Error, Result};
use crate::finmap::FinMap;

use super::{cycle_inverse_word, cycle_word, Generator, Kind, OperatorWord};

/// Canonical `d`/`s` word for a monotone map.
pub fn map_to_word_delta(f: &FinMap) -> Result<OperatorWord> {
    if !f.is_monotone() {
        return Err(Error::NotMonotone(f.table().to_vec()));
    }
    let (a, b) = (f.dom(), f.cod());
    // Values missed by f, in increasing order; applied largest first.
    let mut missing: Vec<usize> = (0..=b).filter(|v| !f.table().contains(v)).collect();
    // Positions with a doubled fiber, in increasing order; applied smallest
    // first once the faces are done.
    let doubles: Vec<usize> = (0..a).filter(|&j| f.apply(j) == f.apply(j + 1)).collect();

    let mut steps: Vec<(Kind, usize)> = Vec::with_capacity(missing.len() + doubles.len());
    missing.reverse();
    steps.extend(missing.into_iter().map(|m| (Kind::Face, m)));
    steps.extend(doubles.into_iter().map(|j| (Kind::Degeneracy, j)));
    let word = OperatorWord::from_applied(b, &steps)?;
    debug_assert_eq!(word.to_level(), a);
    Ok(word)
}

/// Whether a word is in the canonical shape produced by
/// [`map_to_word_delta`]: degeneracies before faces in reading order, with
/// strictly decreasing degeneracy indices and strictly increasing face
/// indices.
pub fn is_canonical_delta_word(w: &OperatorWord) -> bool {
    let gens = w.generators();
    let split = gens.iter().position(|g| g.kind() == Kind::Face).unwrap_or(gens.len());
    let (degens, faces) = gens.split_at(split);
    degens.iter().all(|g| g.kind() == Kind::Degeneracy)
        && faces.iter().all(|g| g.kind() == Kind::Face)
        && degens.windows(2).all(|p| p[0].index() > p[1].index())
        && faces.windows(2).all(|p| p[0].index() < p[1].index())
}

/// Deterministic `d`/`u`/`t` word for an arbitrary map of finite ordinals.
pub fn map_to_word_fin(f: &FinMap) -> Result<OperatorWord> {
    let a = f.dom();

    // Stable sorting permutation tau: positions of [a] reordered so that
    // f . tau is monotone.
    let mut order: Vec<usize> = (0..=a).collect();
    order.sort_by_key(|&k| f.apply(k));
    let monotone = FinMap::new(a, f.cod(), order.iter().map(|&k| f.apply(k)).collect())?;

    // p = tau^{-1}, so that f = monotone . p in the category of ordinals.
    let mut p = vec![0usize; a + 1];
    for (pos, &orig) in order.iter().enumerate() {
        p[orig] = pos;
    }

    // Monotone part: epi-mono word, with each degeneracy expanded into
    // quasidegeneracies and transpositions.
    let delta_word = map_to_word_delta(&monotone)?;
    let mut word = OperatorWord::identity(f.cod());
    // Walk the monotone word in application order, expanding as we go.
    for g in delta_word.generators().iter().rev() {
        let expanded = match g.kind() {
            Kind::Face => OperatorWord::single(*g),
            Kind::Degeneracy => {
                let (i, m) = (g.index(), g.level());
                let inner = cycle_inverse_word(i, m)?;
                let u = OperatorWord::single(Generator::new(Kind::QuasiDegeneracy, i + 1, m)?);
                let outer = cycle_word(i, m + 1)?;
                OperatorWord::then(&OperatorWord::then(&inner, &u)?, &outer)?
            }
            other => unreachable!("delta word contains {other}"),
        };
        word = OperatorWord::then(&word, &expanded)?;
    }

    // Permutation part: bubble-sort p into the identity, recording the
    // adjacent swaps.  p equals the recorded transpositions composed last
    // swap first, so as element operators they apply in reverse recording
    // order, after the monotone part.
    let mut table = p;
    let mut swaps: Vec<usize> = Vec::new();
    while let Some(c) = (0..a).find(|&c| table[c] > table[c + 1]) {
        table.swap(c, c + 1);
        swaps.push(c);
    }
    for &c in swaps.iter().rev() {
        let t = OperatorWord::single(Generator::new(Kind::Transposition, c, a)?);
        word = OperatorWord::then(&word, &t)?;
    }

    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finmap::all_maps;
    use crate::opcalc::word_to_map;

    fn fm(dom: usize, cod: usize, table: &[usize]) -> FinMap {
        FinMap::new(dom, cod, table.to_vec()).unwrap()
    }

    #[test]
    fn delta_word_examples() {
        assert!(map_to_word_delta(&FinMap::identity(3)).unwrap().is_empty());

        let s0 = map_to_word_delta(&fm(1, 0, &[0, 0])).unwrap();
        assert_eq!(format!("{s0:?}"), "s_0@0");

        // The doubled-and-missing table needs a face besides the two
        // degeneracies; the oracle round trip is the contract.
        let f = fm(3, 2, &[0, 0, 2, 2]);
        let w = map_to_word_delta(&f).unwrap();
        assert_eq!(word_to_map(&w), f);
        assert_eq!(
            w.generators().iter().filter(|g| g.kind() == Kind::Degeneracy).count(),
            2
        );

        assert!(map_to_word_delta(&fm(1, 1, &[1, 0])).is_err());
    }

    #[test]
    fn delta_word_is_canonical_and_idempotent() {
        for dom in 0..=4usize {
            for cod in 0..=4usize {
                for f in all_maps(dom, cod).into_iter().filter(FinMap::is_monotone) {
                    let w = map_to_word_delta(&f).unwrap();
                    assert_eq!(word_to_map(&w), f, "round trip for {f:?}");
                    assert!(is_canonical_delta_word(&w), "canonical shape for {f:?}");
                    // Canonicalizing the canonical word's map returns it unchanged.
                    let again = map_to_word_delta(&word_to_map(&w)).unwrap();
                    assert_eq!(again, w);
                }
            }
        }
    }

    #[test]
    fn fin_word_examples() {
        assert!(map_to_word_fin(&FinMap::identity(2)).unwrap().is_empty());

        let t0 = map_to_word_fin(&fm(1, 1, &[1, 0])).unwrap();
        assert_eq!(format!("{t0:?}"), "t_0@1");
    }

    #[test]
    fn fin_word_round_trip_exhaustive_small() {
        for dom in 0..=3usize {
            for cod in 0..=3usize {
                for f in all_maps(dom, cod) {
                    let w = map_to_word_fin(&f).unwrap();
                    assert_eq!(word_to_map(&w), f, "round trip for {f:?}");
                    assert!(w
                        .generators()
                        .iter()
                        .all(|g| matches!(
                            g.kind(),
                            Kind::Face | Kind::QuasiDegeneracy | Kind::Transposition
                        )));
                }
            }
        }
    }
}
