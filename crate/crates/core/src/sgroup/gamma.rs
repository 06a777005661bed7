//! The chain-complex instance: a simplicial abelian group whose level `n`
//! is the direct sum of one copy of `M_k` for every monotone surjection
//! `[n] ->> [k]`, with `M_n` itself sitting at the identity surjection.
//!
//! A monotone operator acts summand-wise: compose the indexing surjection
//! with the operator's table, split the result into its surjective and
//! injective parts, and map the vector along the injective part, which is
//! the identity on the identity injection, the boundary on the injection
//! that misses 0, and zero otherwise.  With this convention the faces
//! `d_i`, `i >= 1`, vanish on the identity summand and `d_0` restricts to
//! the boundary there, so the Moore complex of the instance recovers the
//! input chain complex; `moore_data` checks that round trip exactly,
//! counting the Moore kernel by integer lattice arithmetic.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::finmap::{monotone_surjections_from, FinMap};
use crate::opcalc::{Generator, Kind};

use super::lattice::lattice_index;
use super::SGroup;

/// A nonnegative chain complex of finite abelian groups, each presented as
/// a product of cyclic groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawChain", into = "RawChain")]
pub struct ChainComplexData {
    /// Moduli of the cyclic factors of each `M_k`, `0 <= k <= N`.
    groups: Vec<Vec<u64>>,
    /// `boundaries[k-1]` is the matrix of `M_k -> M_{k-1}`.
    boundaries: Vec<Vec<Vec<i64>>>,
}

#[derive(Serialize, Deserialize)]
struct RawChain {
    groups: Vec<Vec<u64>>,
    boundaries: Vec<Vec<Vec<i64>>>,
}

impl TryFrom<RawChain> for ChainComplexData {
    type Error = Error;
    fn try_from(raw: RawChain) -> Result<ChainComplexData> {
        ChainComplexData::new(raw.groups, raw.boundaries)
    }
}

impl From<ChainComplexData> for RawChain {
    fn from(c: ChainComplexData) -> RawChain {
        RawChain { groups: c.groups, boundaries: c.boundaries }
    }
}

impl ChainComplexData {
    pub fn new(groups: Vec<Vec<u64>>, mut boundaries: Vec<Vec<Vec<i64>>>) -> Result<Self> {
        let fail = |reason: String| Error::Validation { what: "chain complex", reason };
        if groups.is_empty() {
            return Err(fail("need at least M_0".into()));
        }
        if groups.iter().flatten().any(|&m| m == 0) {
            return Err(fail("moduli must be positive".into()));
        }
        if boundaries.len() + 1 != groups.len() {
            return Err(fail(format!(
                "{} groups need {} boundary matrices, got {}",
                groups.len(),
                groups.len() - 1,
                boundaries.len()
            )));
        }
        for k in 1..groups.len() {
            let (rows, cols) = (groups[k - 1].len(), groups[k].len());
            let mat = &mut boundaries[k - 1];
            if mat.len() != rows || mat.iter().any(|row| row.len() != cols) {
                return Err(fail(format!("boundary {k} is not {rows} x {cols}")));
            }
            for (r, row) in mat.iter_mut().enumerate() {
                for (c, entry) in row.iter_mut().enumerate() {
                    // Reduce mod the target modulus and check the entry
                    // defines a homomorphism from the source cyclic factor.
                    let target = groups[k - 1][r] as i64;
                    *entry = entry.rem_euclid(target);
                    let source = groups[k][c] as i64;
                    if (*entry * source) % target != 0 {
                        return Err(fail(format!(
                            "boundary {k} entry ({r},{c}) does not kill the source order"
                        )));
                    }
                }
            }
        }
        // boundary . boundary = 0 on generators, mod the target moduli.
        for k in 2..groups.len() {
            let outer = &boundaries[k - 2];
            let inner = &boundaries[k - 1];
            for c in 0..groups[k].len() {
                for r in 0..groups[k - 2].len() {
                    let mut acc: i128 = 0;
                    for mid in 0..groups[k - 1].len() {
                        acc += outer[r][mid] as i128 * inner[mid][c] as i128;
                    }
                    if acc % groups[k - 2][r] as i128 != 0 {
                        return Err(fail(format!(
                            "boundary squared is nonzero at level {k}, entry ({r},{c})"
                        )));
                    }
                }
            }
        }
        Ok(ChainComplexData { groups, boundaries })
    }

    /// Highest level carrying a group (the length `N`).
    pub fn length(&self) -> usize {
        self.groups.len() - 1
    }

    /// Moduli of `M_k`; empty beyond the length.
    pub fn moduli(&self, k: usize) -> &[u64] {
        if k < self.groups.len() {
            &self.groups[k]
        } else {
            &[]
        }
    }

    /// Boundary matrix `M_k -> M_{k-1}`; zero-size beyond the length.
    pub fn boundary(&self, k: usize) -> Option<&Vec<Vec<i64>>> {
        if k >= 1 && k < self.groups.len() {
            Some(&self.boundaries[k - 1])
        } else {
            None
        }
    }

    pub fn group_order(&self, k: usize) -> u128 {
        self.moduli(k).iter().map(|&m| m as u128).product()
    }
}

struct LevelData {
    /// Monotone surjections out of `[n]`, identity first.
    surjections: Vec<FinMap>,
    /// Flat coordinate offset of each summand.
    offsets: Vec<usize>,
    /// Modulus of every flat coordinate.
    moduli: Vec<u64>,
}

impl LevelData {
    fn summand_of(&self, table: &FinMap) -> usize {
        self.surjections.iter().position(|s| s == table).expect("surjective part is enumerated")
    }
}

/// The simplicial abelian group built from chain complex data.
pub struct GammaInstance {
    chain: ChainComplexData,
    levels: RwLock<Vec<std::sync::Arc<LevelData>>>,
}

/// Element payload: one vector per summand, in enumeration order.
pub type GammaElem = Vec<Vec<u64>>;

impl GammaInstance {
    pub fn new(chain: ChainComplexData) -> Result<Self> {
        Ok(GammaInstance { chain, levels: RwLock::new(Vec::new()) })
    }

    pub fn chain(&self) -> &ChainComplexData {
        &self.chain
    }

    fn level(&self, n: usize) -> std::sync::Arc<LevelData> {
        {
            let cache = self.levels.read().expect("level cache lock");
            if let Some(data) = cache.get(n) {
                return data.clone();
            }
        }
        let mut cache = self.levels.write().expect("level cache lock");
        while cache.len() <= n {
            let m = cache.len();
            let surjections = monotone_surjections_from(m);
            let mut offsets = Vec::with_capacity(surjections.len());
            let mut moduli = Vec::new();
            for s in &surjections {
                offsets.push(moduli.len());
                moduli.extend_from_slice(self.chain.moduli(s.cod()));
            }
            cache.push(std::sync::Arc::new(LevelData { surjections, offsets, moduli }));
        }
        cache[n].clone()
    }

    /// Total order of the level group.
    pub fn level_order(&self, n: usize) -> u128 {
        self.level(n).moduli.iter().map(|&m| m as u128).product()
    }

    /// The summands of a level: each indexing surjection with the moduli of
    /// its copy of the chain group.
    pub fn level_summands(&self, n: usize) -> Vec<(FinMap, Vec<u64>)> {
        self.level(n)
            .surjections
            .iter()
            .map(|s| (s.clone(), self.chain.moduli(s.cod()).to_vec()))
            .collect()
    }

    /// Every element of the level group, when there are at most `limit`.
    pub fn level_elements(&self, n: usize, limit: u128) -> Option<Vec<GammaElem>> {
        if self.level_order(n) > limit {
            return None;
        }
        let summands = self.level_summands(n);
        let mut out = vec![self.zero_elem(n)];
        for (s_idx, (_, moduli)) in summands.iter().enumerate() {
            for (c, &m) in moduli.iter().enumerate() {
                let mut next = Vec::with_capacity(out.len() * m as usize);
                for elem in &out {
                    for v in 0..m {
                        let mut e = elem.clone();
                        e[s_idx][c] = v;
                        next.push(e);
                    }
                }
                out = next;
            }
        }
        Some(out)
    }

    /// All chain complexes with one cyclic group of order `1..=max_order`
    /// per level and every valid boundary assignment, for all lengths up to
    /// `max_len`.
    pub fn enumerate_cyclic_complexes(max_order: u64, max_len: usize) -> Vec<ChainComplexData> {
        fn tuples(radix: &[u64]) -> Vec<Vec<u64>> {
            let mut out = vec![Vec::new()];
            for &r in radix {
                let mut next = Vec::with_capacity(out.len() * r as usize);
                for t in &out {
                    for v in 0..r {
                        let mut t2 = t.clone();
                        t2.push(v);
                        next.push(t2);
                    }
                }
                out = next;
            }
            out
        }
        let mut out = Vec::new();
        for len in 0..=max_len {
            for orders in tuples(&vec![max_order; len + 1]) {
                let orders: Vec<u64> = orders.iter().map(|&v| v + 1).collect();
                // Boundary entry c_k lives mod the target order o_{k-1}.
                for entries in tuples(&orders[..len]) {
                    let groups: Vec<Vec<u64>> = orders.iter().map(|&o| vec![o]).collect();
                    let boundaries: Vec<Vec<Vec<i64>>> =
                        entries.iter().map(|&c| vec![vec![c as i64]]).collect();
                    if let Ok(chain) = ChainComplexData::new(groups, boundaries) {
                        out.push(chain);
                    }
                }
            }
        }
        out
    }

    fn zero_elem(&self, n: usize) -> GammaElem {
        self.level(n).surjections.iter().map(|s| vec![0; self.chain.moduli(s.cod()).len()]).collect()
    }

    /// How the injective part of a factorization maps vectors: identity,
    /// boundary out of `M_k`, or zero.
    fn injection_action(&self, delta: &FinMap, v: &[u64], target_moduli: &[u64]) -> Option<Vec<u64>> {
        if delta.is_identity() {
            return Some(v.to_vec());
        }
        // The elementary injection missing 0 carries the boundary.
        let k = delta.cod();
        if delta.dom() + 1 == k && (0..k).all(|x| delta.apply(x) == x + 1) {
            let mat = self.chain.boundary(k)?;
            let out = mat
                .iter()
                .zip(target_moduli.iter())
                .map(|(row, &modulus)| {
                    let acc: i128 = row
                        .iter()
                        .zip(v.iter())
                        .map(|(&c, &x)| c as i128 * x as i128)
                        .sum();
                    acc.rem_euclid(modulus as i128) as u64
                })
                .collect();
            return Some(out);
        }
        None
    }

    /// The face `d_i: level n -> level n-1` as an integer matrix over the
    /// flat coordinates, entries not yet reduced.
    pub fn face_matrix(&self, i: usize, n: usize) -> Vec<Vec<i64>> {
        let source = self.level(n);
        let target = self.level(n - 1);
        let theta = Generator::new(Kind::Face, i, n).expect("face index in range").to_finmap();
        let mut mat = vec![vec![0i64; source.moduli.len()]; target.moduli.len()];
        for (s_idx, sigma) in source.surjections.iter().enumerate() {
            let k = sigma.cod();
            let dim = self.chain.moduli(k).len();
            let composed = crate::finmap::compose_maps(sigma, &theta).expect("levels match");
            let (tau, delta) = epi_mono(&composed);
            let t_idx = target.summand_of(&tau);
            if delta.is_identity() {
                for c in 0..dim {
                    mat[target.offsets[t_idx] + c][source.offsets[s_idx] + c] += 1;
                }
            } else if delta.dom() + 1 == delta.cod()
                && (0..delta.cod()).all(|x| delta.apply(x) == x + 1)
            {
                if let Some(b) = self.chain.boundary(k) {
                    for (r, row) in b.iter().enumerate() {
                        for (c, &entry) in row.iter().enumerate() {
                            mat[target.offsets[t_idx] + r][source.offsets[s_idx] + c] += entry;
                        }
                    }
                }
            }
        }
        mat
    }

    /// Exact comparison of the instance's Moore complex with the input
    /// chain data at one level; see [`MooreData`].
    pub fn moore_data(&self, n: usize) -> MooreData {
        let source = self.level(n);
        let expected_order = self.chain.group_order(n);
        let id_dim = self.chain.moduli(n).len();

        // Stack the faces d_1 .. d_n into one map out of level n.
        let mut stacked: Vec<Vec<i64>> = Vec::new();
        let mut target_moduli: Vec<u64> = Vec::new();
        for i in 1..=n {
            let mat = self.face_matrix(i, n);
            stacked.extend(mat);
            target_moduli.extend(self.level(n - 1).moduli.iter().copied());
        }
        let rows = stacked.len();

        // Kernel order: |G| * [Z^S : F Z^R + D' Z^S] / |H|.
        let mut cols: Vec<Vec<i128>> = (0..source.moduli.len())
            .map(|c| (0..rows).map(|r| stacked[r][c] as i128).collect())
            .collect();
        for (r, &m) in target_moduli.iter().enumerate() {
            let mut col = vec![0i128; rows];
            col[r] = m as i128;
            cols.push(col);
        }
        let torsion = lattice_index(rows, cols).expect("moduli block has full rank");
        let group_order: u128 = source.moduli.iter().map(|&m| m as u128).product();
        let target_order: u128 = target_moduli.iter().map(|&m| m as u128).product();
        let kernel_order = group_order * torsion / target_order;

        // The identity summand must lie inside the kernel.
        let id_summand_in_kernel = (0..id_dim).all(|c| {
            stacked.iter().zip(target_moduli.iter()).all(|(row, &m)| row[c] % m as i64 == 0)
        });

        // d_0 restricted to the identity summand is the input boundary into
        // the identity summand of the level below, and nothing else.
        let boundary_matches = if n == 0 {
            true
        } else {
            let mat = self.face_matrix(0, n);
            let below = self.level(n - 1);
            let below_id_dim = self.chain.moduli(n - 1).len();
            (0..id_dim).all(|c| {
                below.moduli.iter().enumerate().all(|(r, &m)| {
                    let expected: i64 = if r < below_id_dim {
                        self.chain.boundary(n).map(|b| b[r][c]).unwrap_or(0)
                    } else {
                        0
                    };
                    (mat[r][c] - expected) % m as i64 == 0
                })
            })
        };

        MooreData { level: n, kernel_order, expected_order, id_summand_in_kernel, boundary_matches }
    }
}

/// Outcome of the Moore round trip at one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MooreData {
    pub level: usize,
    /// Order of the intersection of the kernels of `d_1 .. d_n`.
    pub kernel_order: u128,
    /// Order of the input group at this level.
    pub expected_order: u128,
    pub id_summand_in_kernel: bool,
    pub boundary_matches: bool,
}

impl MooreData {
    pub fn round_trips(&self) -> bool {
        self.kernel_order == self.expected_order
            && self.id_summand_in_kernel
            && self.boundary_matches
    }
}

/// Splits a monotone map into its surjective and injective parts.
fn epi_mono(f: &FinMap) -> (FinMap, FinMap) {
    debug_assert!(f.is_monotone());
    let mut image: Vec<usize> = f.table().to_vec();
    image.dedup();
    let k = image.len() - 1;
    let tau = FinMap::new(
        f.dom(),
        k,
        f.table().iter().map(|v| image.binary_search(v).expect("value in image")).collect(),
    )
    .expect("surjective part is a map");
    let delta = FinMap::new(k, f.cod(), image).expect("injective part is a map");
    (tau, delta)
}

impl SGroup for GammaInstance {
    type Elem = GammaElem;

    fn instance_id(&self) -> String {
        format!("gamma:{}", serde_json::to_string(&self.chain).expect("chain serializes"))
    }

    fn is_symmetric(&self) -> bool {
        false
    }

    fn is_abelian(&self) -> bool {
        true
    }

    fn level_order(&self, n: usize) -> Option<u128> {
        Some(self.level_order(n))
    }

    fn moore_elements(&self, n: usize, limit: u128) -> Option<Vec<GammaElem>> {
        let moduli = self.chain.moduli(n).to_vec();
        let count: u128 = moduli.iter().map(|&m| m as u128).product();
        if count > limit {
            return None;
        }
        let mut out = Vec::with_capacity(count as usize);
        let mut digits = vec![0u64; moduli.len()];
        loop {
            let mut elem = self.zero_elem(n);
            elem[0] = digits.clone();
            out.push(elem);
            let mut pos = 0;
            loop {
                if pos == digits.len() {
                    return Some(out);
                }
                digits[pos] += 1;
                if digits[pos] < moduli[pos] {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
        }
    }

    fn identity(&self, n: usize) -> GammaElem {
        self.zero_elem(n)
    }

    fn mul(&self, n: usize, a: &GammaElem, b: &GammaElem) -> GammaElem {
        let level = self.level(n);
        a.iter()
            .zip(b.iter())
            .enumerate()
            .map(|(s_idx, (x, y))| {
                let moduli = self.chain.moduli(level.surjections[s_idx].cod());
                x.iter().zip(y.iter()).zip(moduli.iter()).map(|((&p, &q), &m)| (p + q) % m).collect()
            })
            .collect()
    }

    fn inv(&self, n: usize, a: &GammaElem) -> GammaElem {
        let level = self.level(n);
        a.iter()
            .enumerate()
            .map(|(s_idx, x)| {
                let moduli = self.chain.moduli(level.surjections[s_idx].cod());
                x.iter().zip(moduli.iter()).map(|(&p, &m)| (m - p) % m).collect()
            })
            .collect()
    }

    fn act(&self, g: &Generator, a: &GammaElem) -> Result<GammaElem> {
        if !g.kind().is_simplicial() {
            return Err(Error::Domain(format!(
                "the chain-complex instance is not symmetric; cannot act by {}",
                g.kind()
            )));
        }
        let n = g.level();
        let theta = g.to_finmap();
        let source = self.level(n);
        let target_level = g.target_level();
        let target = self.level(target_level);
        let mut out = self.zero_elem(target_level);
        for (s_idx, sigma) in source.surjections.iter().enumerate() {
            let v = &a[s_idx];
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            let composed = crate::finmap::compose_maps(sigma, &theta)?;
            let (tau, delta) = epi_mono(&composed);
            let t_idx = target.summand_of(&tau);
            let moduli = self.chain.moduli(tau.cod());
            if let Some(w) = self.injection_action(&delta, v, moduli) {
                for (slot, (x, &m)) in out[t_idx].iter_mut().zip(w.iter().zip(moduli.iter())) {
                    *slot = (*slot + x) % m;
                }
            }
        }
        Ok(out)
    }

    fn sample(&self, n: usize, rng: &mut ChaCha8Rng) -> GammaElem {
        let level = self.level(n);
        level
            .surjections
            .iter()
            .map(|s| self.chain.moduli(s.cod()).iter().map(|&m| rng.gen_range(0..m)).collect())
            .collect()
    }

    fn sample_moore(&self, n: usize, rng: &mut ChaCha8Rng) -> Result<GammaElem> {
        // Uniform on the identity summand; exactness of this description is
        // what `moore_data` verifies independently.
        let mut out = self.zero_elem(n);
        out[0] = self.chain.moduli(n).iter().map(|&m| rng.gen_range(0..m)).collect();
        Ok(out)
    }

    fn elem_to_json(&self, n: usize, a: &GammaElem) -> serde_json::Value {
        let level = self.level(n);
        let coords: BTreeMap<String, Vec<u64>> = a
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_empty())
            .map(|(s_idx, v)| {
                let key = level.surjections[s_idx]
                    .table()
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                (key, v.clone())
            })
            .collect();
        serde_json::json!({ "level": n, "coords": coords })
    }

    fn elem_from_json(&self, n: usize, v: &serde_json::Value) -> Result<GammaElem> {
        let bad = |msg: String| Error::Schema(msg);
        let coords = v
            .get("coords")
            .and_then(|c| c.as_object())
            .ok_or_else(|| bad("element JSON needs a coords object".into()))?;
        let level = self.level(n);
        let mut out = self.zero_elem(n);
        let mut seen = 0;
        for (s_idx, sigma) in level.surjections.iter().enumerate() {
            let moduli = self.chain.moduli(sigma.cod());
            if moduli.is_empty() {
                continue;
            }
            let key =
                sigma.table().iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
            let entry = coords
                .get(&key)
                .and_then(|x| x.as_array())
                .ok_or_else(|| bad(format!("missing summand {key:?}")))?;
            if entry.len() != moduli.len() {
                return Err(bad(format!("summand {key:?} has wrong rank")));
            }
            seen += 1;
            for (c, (x, &m)) in entry.iter().zip(moduli.iter()).enumerate() {
                let val =
                    x.as_u64().ok_or_else(|| bad(format!("bad entry {c} in summand {key:?}")))?;
                out[s_idx][c] = val % m;
            }
        }
        if seen != coords.len() {
            return Err(bad("element JSON has extraneous summands".into()));
        }
        Ok(out)
    }
}

/// Convenience constructor matching the operation surface.
pub fn gamma_instance(chain: ChainComplexData) -> Result<GammaInstance> {
    GammaInstance::new(chain)
}
