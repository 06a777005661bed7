//! The exponential instance: level `n` carries all functions from
//! `Fin([m], [n])` to a fixed finite group `K`, with pointwise
//! multiplication.  A generator with function table `phi` acts by
//! precomposing the index with postcomposition by `phi`; functoriality holds
//! by construction.  The instance is symmetric, and nonabelian exactly when
//! `K` is.
//!
//! Moore chains have a concrete support description here: a coordinate
//! `x: [m] -> [n]` can carry a nontrivial value in a Moore chain only if the
//! image of `x` contains `{1, ..., n}`, and in a cycle only if `x` is onto
//! `[n]`.  That makes uniform sampling of both subgroups direct.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::finmap::FinMap;
use crate::opcalc::Generator;

use super::{finite_group::FiniteGroup, SGroup};

#[derive(Debug, Clone)]
pub struct ExpInstance {
    m: usize,
    group: FiniteGroup,
}

/// Element payload: one group element index per index map, ordered by the
/// base-`(n+1)` encoding of the map's table.
pub type ExpElem = Vec<u16>;

impl ExpInstance {
    pub fn new(m: usize, group: FiniteGroup) -> Result<Self> {
        if group.order() > u16::MAX as usize {
            return Err(Error::Validation {
                what: "group table",
                reason: "group order too large for the exponential instance".into(),
            });
        }
        Ok(ExpInstance { m, group })
    }

    pub fn base_level(&self) -> usize {
        self.m
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Number of index maps `[m] -> [n]`.
    pub fn coords(&self, n: usize) -> usize {
        (n + 1).pow(self.m as u32 + 1)
    }

    fn decode(&self, mut code: usize, n: usize) -> Vec<usize> {
        let mut digits = Vec::with_capacity(self.m + 1);
        for _ in 0..=self.m {
            digits.push(code % (n + 1));
            code /= n + 1;
        }
        digits
    }

    fn encode(&self, digits: &[usize], n: usize) -> usize {
        digits.iter().rev().fold(0, |acc, &d| acc * (n + 1) + d)
    }

    fn key(&self, code: usize, n: usize) -> String {
        self.decode(code, n).iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
    }

    /// Builds an element supported on the coordinates passing `keep`,
    /// uniformly random there and trivial elsewhere.
    fn sample_supported(
        &self,
        n: usize,
        rng: &mut ChaCha8Rng,
        keep: impl Fn(&[usize]) -> bool,
    ) -> ExpElem {
        let e = self.group.identity() as u16;
        (0..self.coords(n))
            .map(|code| {
                if keep(&self.decode(code, n)) {
                    rng.gen_range(0..self.group.order()) as u16
                } else {
                    e
                }
            })
            .collect()
    }

    /// Support predicate for Moore chains: the image contains `{1..n}`.
    pub fn moore_support(digits: &[usize], n: usize) -> bool {
        (1..=n).all(|v| digits.contains(&v))
    }

    /// Support predicate for cycles: the map is onto `[n]`.
    pub fn cycle_support(digits: &[usize], n: usize) -> bool {
        (0..=n).all(|v| digits.contains(&v))
    }
}

impl SGroup for ExpInstance {
    type Elem = ExpElem;

    fn instance_id(&self) -> String {
        format!("exp:{}:{}", self.m, self.group.name())
    }

    fn is_symmetric(&self) -> bool {
        true
    }

    fn is_abelian(&self) -> bool {
        self.group.is_abelian()
    }

    fn level_order(&self, n: usize) -> Option<u128> {
        let mut acc: u128 = 1;
        for _ in 0..self.coords(n) {
            acc = acc.checked_mul(self.group.order() as u128)?;
        }
        Some(acc)
    }

    fn moore_elements(&self, n: usize, limit: u128) -> Option<Vec<ExpElem>> {
        let support: Vec<usize> = (0..self.coords(n))
            .filter(|&c| Self::moore_support(&self.decode(c, n), n))
            .collect();
        let order = self.group.order() as u128;
        let mut count: u128 = 1;
        for _ in 0..support.len() {
            count = count.checked_mul(order)?;
            if count > limit {
                return None;
            }
        }
        let e = self.group.identity() as u16;
        let mut out = Vec::with_capacity(count as usize);
        let mut digits = vec![0usize; support.len()];
        loop {
            let mut elem = vec![e; self.coords(n)];
            for (slot, &coord) in digits.iter().zip(support.iter()) {
                elem[coord] = *slot as u16;
            }
            out.push(elem);
            // Mixed-radix increment over the support coordinates.
            let mut pos = 0;
            loop {
                if pos == digits.len() {
                    return Some(out);
                }
                digits[pos] += 1;
                if digits[pos] < self.group.order() {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
        }
    }

    fn identity(&self, n: usize) -> ExpElem {
        vec![self.group.identity() as u16; self.coords(n)]
    }

    fn mul(&self, n: usize, a: &ExpElem, b: &ExpElem) -> ExpElem {
        debug_assert_eq!(a.len(), self.coords(n));
        a.iter()
            .zip(b.iter())
            .map(|(&x, &y)| self.group.mul(x as usize, y as usize) as u16)
            .collect()
    }

    fn inv(&self, n: usize, a: &ExpElem) -> ExpElem {
        debug_assert_eq!(a.len(), self.coords(n));
        a.iter().map(|&x| self.group.inv(x as usize) as u16).collect()
    }

    fn act(&self, g: &Generator, a: &ExpElem) -> Result<ExpElem> {
        let n = g.level();
        if a.len() != self.coords(n) {
            return Err(Error::Domain(format!(
                "element has {} coordinates, level {n} needs {}",
                a.len(),
                self.coords(n)
            )));
        }
        let phi: FinMap = g.to_finmap();
        let target = g.target_level();
        let out = (0..self.coords(target))
            .map(|code| {
                let composed: Vec<usize> =
                    self.decode(code, target).into_iter().map(|d| phi.apply(d)).collect();
                a[self.encode(&composed, n)]
            })
            .collect();
        Ok(out)
    }

    fn sample(&self, n: usize, rng: &mut ChaCha8Rng) -> ExpElem {
        (0..self.coords(n)).map(|_| rng.gen_range(0..self.group.order()) as u16).collect()
    }

    fn sample_moore(&self, n: usize, rng: &mut ChaCha8Rng) -> Result<ExpElem> {
        Ok(self.sample_supported(n, rng, |digits| Self::moore_support(digits, n)))
    }

    fn sample_cycle(&self, n: usize, rng: &mut ChaCha8Rng) -> Result<ExpElem> {
        Ok(self.sample_supported(n, rng, |digits| Self::cycle_support(digits, n)))
    }

    fn elem_to_json(&self, n: usize, a: &ExpElem) -> serde_json::Value {
        let coords: BTreeMap<String, u16> =
            a.iter().enumerate().map(|(code, &v)| (self.key(code, n), v)).collect();
        serde_json::json!({ "level": n, "coords": coords })
    }

    fn elem_from_json(&self, n: usize, v: &serde_json::Value) -> Result<ExpElem> {
        let bad = |msg: String| Error::Schema(msg);
        let coords = v
            .get("coords")
            .and_then(|c| c.as_object())
            .ok_or_else(|| bad("element JSON needs a coords object".into()))?;
        if coords.len() != self.coords(n) {
            return Err(bad(format!(
                "expected {} coordinates at level {n}, got {}",
                self.coords(n),
                coords.len()
            )));
        }
        let mut out = vec![0u16; self.coords(n)];
        for (key, value) in coords {
            let digits: Vec<usize> = key
                .split(',')
                .map(|p| p.parse().map_err(|_| bad(format!("bad coordinate key {key:?}"))))
                .collect::<Result<_>>()?;
            if digits.len() != self.m + 1 || digits.iter().any(|&d| d > n) {
                return Err(bad(format!("coordinate key {key:?} is not a map into [{n}]")));
            }
            let idx = value
                .as_u64()
                .filter(|&x| (x as usize) < self.group.order())
                .ok_or_else(|| bad(format!("bad group element at {key:?}")))?;
            out[self.encode(&digits, n)] = idx as u16;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcalc::Kind;
    use crate::seeding::rng_from_seed;
    use crate::sgroup::{cycle_membership, moore_membership, moore_project};

    fn s3_at(m: usize) -> ExpInstance {
        ExpInstance::new(m, FiniteGroup::symmetric_s3()).unwrap()
    }

    #[test]
    fn base_zero_levels_are_powers_of_k() {
        let inst = s3_at(0);
        assert!(!inst.is_abelian());
        // Level groups inherit noncommutativity from K even at level 0.
        let a: ExpElem = vec![1];
        let b: ExpElem = vec![2];
        assert_ne!(inst.mul(0, &a, &b), inst.mul(0, &b, &a));
        assert_eq!(inst.coords(0), 1);
        assert_eq!(inst.coords(2), 3);
        // Faces act by deleting and reindexing coordinates.
        let a: ExpElem = vec![1, 2];
        let d0 = Generator::new(Kind::Face, 0, 1).unwrap();
        let d1 = Generator::new(Kind::Face, 1, 1).unwrap();
        assert_eq!(inst.act(&d0, &a).unwrap(), vec![2]);
        assert_eq!(inst.act(&d1, &a).unwrap(), vec![1]);
    }

    /// Brute-force kernel intersection at small sizes.
    fn brute_force_moore(inst: &ExpInstance, n: usize) -> Vec<ExpElem> {
        let size = inst.coords(n);
        let order = inst.group().order();
        let total = order.pow(size as u32);
        let mut found = Vec::new();
        for mut code in 0..total {
            let mut elem = Vec::with_capacity(size);
            for _ in 0..size {
                elem.push((code % order) as u16);
                code /= order;
            }
            if moore_membership(inst, n, &elem).unwrap() {
                found.push(elem);
            }
        }
        found
    }

    #[test]
    fn base_zero_moore_groups() {
        let inst = s3_at(0);
        // M_1 is a copy of K: supported on the single index hitting 1.
        let m1 = brute_force_moore(&inst, 1);
        assert_eq!(m1.len(), 6);
        for elem in &m1 {
            assert_eq!(elem[0], 0, "coordinate at the constant-0 index must be trivial");
        }
        // M_2 is trivial: no index map [0] -> [2] covers {1, 2}.
        let m2 = brute_force_moore(&inst, 2);
        assert_eq!(m2.len(), 1);
    }

    #[test]
    fn moore_support_matches_brute_force() {
        let inst = ExpInstance::new(1, FiniteGroup::cyclic(2)).unwrap();
        for n in 0..=2usize {
            let brute = brute_force_moore(&inst, n);
            let support: usize =
                (0..inst.coords(n)).filter(|&c| ExpInstance::moore_support(&inst.decode(c, n), n)).count();
            assert_eq!(brute.len(), 2usize.pow(support as u32));
        }
    }

    #[test]
    fn sampled_moore_chains_and_cycles_are_members() {
        let inst = s3_at(2);
        let mut rng = rng_from_seed(11);
        for n in 0..=3usize {
            for _ in 0..20 {
                let m = inst.sample_moore(n, &mut rng).unwrap();
                assert!(moore_membership(&inst, n, &m).unwrap());
                let z = inst.sample_cycle(n, &mut rng).unwrap();
                assert!(cycle_membership(&inst, n, &z).unwrap());
                // Projection of an arbitrary sample also lands in the Moore
                // subgroup.
                let g = inst.sample(n, &mut rng);
                let p = moore_project(&inst, n, &g).unwrap();
                assert!(moore_membership(&inst, n, &p).unwrap());
            }
        }
    }

    #[test]
    fn level_three_moore_chains_live_on_surjective_triples() {
        let inst = s3_at(2);
        let n = 3;
        let support: Vec<usize> = (0..inst.coords(n))
            .filter(|&c| ExpInstance::moore_support(&inst.decode(c, n), n))
            .collect();
        // Exactly the six maps [2] -> [3] whose image is {1,2,3}.
        assert_eq!(support.len(), 6);
        let mut rng = rng_from_seed(5);
        let m = inst.sample_moore(n, &mut rng).unwrap();
        for (code, &v) in m.iter().enumerate() {
            if !support.contains(&code) {
                assert_eq!(v, 0);
            }
        }
        // And some sample is nontrivial there.
        let nontrivial = (0..40).any(|k| {
            let mut rng = rng_from_seed(k);
            inst.sample_moore(n, &mut rng).unwrap().iter().any(|&v| v != 0)
        });
        assert!(nontrivial);
    }

    #[test]
    fn degenerate_simplices_are_not_moore() {
        // s_0(x) at level 1 has d_1 s_0 = id, so it is Moore only for x = e.
        let inst = s3_at(0);
        let x: ExpElem = vec![3];
        let s0 = Generator::new(Kind::Degeneracy, 0, 0).unwrap();
        let image = inst.act(&s0, &x).unwrap();
        assert!(!moore_membership(&inst, 1, &image).unwrap());
        assert!(moore_membership(&inst, 1, &inst.identity(1)).unwrap());
    }

    #[test]
    fn element_json_round_trip() {
        let inst = s3_at(1);
        let mut rng = rng_from_seed(3);
        let a = inst.sample(2, &mut rng);
        let v = inst.elem_to_json(2, &a);
        let back = inst.elem_from_json(2, &v).unwrap();
        assert_eq!(a, back);
        assert!(inst.elem_from_json(1, &v).is_err());
    }
}
