//! Finite partitions of `{1..n} ∪ {1'..n'}` and their monoid arithmetic.
//!
//! A point is encoded as a signed integer: `+x` is the upper vertex `x`,
//! `-x` is the lower (primed) vertex `x'`.  Values are canonicalized on
//! construction, so structural equality and hashing are block-set equality.
//!
//! Composition glues the lower interface of the left factor to the upper
//! interface of the right factor and reads off connected components of the
//! resulting three-row graph; closed middle components are discarded
//! silently.  The merge is done with a disjoint-set forest, so a product
//! costs `O(n α(n))` merges.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::cardinal::Cardinal;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("point 0 is not a valid vertex")]
    ZeroPoint,
    #[error("point {point} is out of range for degree {degree}")]
    OutOfRange { point: i64, degree: u32 },
    #[error("point {0} appears twice")]
    DuplicatePoint(i64),
    #[error("point {0} is missing from the block list")]
    MissingPoint(i64),
    #[error("empty block")]
    EmptyBlock,
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },
    #[error("subset entry {point} is out of range for degree {degree}")]
    BadSubset { point: u32, degree: u32 },
    #[error("invalid partition literal: {0}")]
    Literal(String),
}

/// Classification of a block by which rows it meets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockKind {
    /// Meets both the upper and the lower row.
    Transversal,
    /// Meets only the upper row.
    UpperNontransversal,
    /// Meets only the lower row.
    LowerNontransversal,
}

pub fn block_kind(block: &[i32]) -> BlockKind {
    let has_upper = block.iter().any(|&v| v > 0);
    let has_lower = block.iter().any(|&v| v < 0);
    match (has_upper, has_lower) {
        (true, true) => BlockKind::Transversal,
        (true, false) => BlockKind::UpperNontransversal,
        (false, true) => BlockKind::LowerNontransversal,
        (false, false) => unreachable!("blocks are nonempty"),
    }
}

/// Canonical sort key for a point: by absolute value, upper before lower.
fn point_key(v: i32) -> (u32, u8) {
    (v.unsigned_abs(), u8::from(v < 0))
}

/// Canonical sort key for a block: blocks with an upper point first, ordered
/// by least upper point; blocks without an upper point afterwards, ordered
/// by least lower point.
fn block_key(block: &[i32]) -> (u8, u32) {
    match block.iter().filter(|&&v| v > 0).map(|&v| v as u32).min() {
        Some(u) => (0, u),
        None => (1, block.iter().map(|&v| v.unsigned_abs()).min().unwrap_or(0)),
    }
}

/// A partition of `{±1..±n}` in canonical block-list form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    degree: u32,
    blocks: Vec<Vec<i32>>,
}

impl Partition {
    /// Builds a partition from raw blocks, validating that the blocks are
    /// nonempty, pairwise disjoint and cover `{±1..±n}` exactly.
    pub fn from_blocks(degree: u32, blocks: Vec<Vec<i32>>) -> Result<Self, PartitionError> {
        let n = degree as usize;
        // seen[0..n): upper 1..=n, seen[n..2n): lower 1..=n
        let mut seen = vec![false; 2 * n];
        for block in &blocks {
            if block.is_empty() {
                return Err(PartitionError::EmptyBlock);
            }
            for &v in block {
                if v == 0 {
                    return Err(PartitionError::ZeroPoint);
                }
                let a = v.unsigned_abs() as usize;
                if a > n {
                    return Err(PartitionError::OutOfRange { point: v as i64, degree });
                }
                let idx = if v > 0 { a - 1 } else { n + a - 1 };
                if seen[idx] {
                    return Err(PartitionError::DuplicatePoint(v.unsigned_abs() as i64 * v.signum() as i64));
                }
                seen[idx] = true;
            }
        }
        if let Some(idx) = seen.iter().position(|&s| !s) {
            let point = if idx < n { (idx + 1) as i64 } else { -((idx - n + 1) as i64) };
            return Err(PartitionError::MissingPoint(point));
        }
        Ok(Self::canonicalize(degree, blocks))
    }

    fn canonicalize(degree: u32, mut blocks: Vec<Vec<i32>>) -> Self {
        for block in &mut blocks {
            block.sort_by_key(|&v| point_key(v));
        }
        blocks.sort_by_key(|b| block_key(b));
        Partition { degree, blocks }
    }

    pub fn identity(degree: u32) -> Self {
        let blocks = (1..=degree as i32).map(|x| vec![x, -x]).collect();
        Self::canonicalize(degree, blocks)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn blocks(&self) -> &[Vec<i32>] {
        &self.blocks
    }

    /// Parses the JSON block-list literal, e.g. `[[1,3,-4],[2,4],[-2,-3]]`.
    /// The degree is the largest absolute value that occurs.
    pub fn parse_json(text: &str) -> Result<Self, PartitionError> {
        let raw: Vec<Vec<i64>> =
            serde_json::from_str(text).map_err(|e| PartitionError::Literal(e.to_string()))?;
        Self::from_raw(raw)
    }

    /// Parses the one-line text form `1 3 -4 | 2 4 | -2 -3` (input only).
    pub fn parse_line(text: &str) -> Result<Self, PartitionError> {
        let mut raw: Vec<Vec<i64>> = Vec::new();
        for chunk in text.split('|') {
            let block: Vec<i64> = chunk
                .split_whitespace()
                .map(|tok| tok.parse::<i64>().map_err(|_| PartitionError::Literal(format!("bad token `{tok}`"))))
                .collect::<Result<_, _>>()?;
            if !block.is_empty() {
                raw.push(block);
            }
        }
        Self::from_raw(raw)
    }

    fn from_raw(raw: Vec<Vec<i64>>) -> Result<Self, PartitionError> {
        let mut degree: u32 = 0;
        for block in &raw {
            for &v in block {
                if v == 0 {
                    return Err(PartitionError::ZeroPoint);
                }
                if v.unsigned_abs() > i32::MAX as u64 / 2 {
                    return Err(PartitionError::OutOfRange { point: v, degree: u32::MAX });
                }
                degree = degree.max(v.unsigned_abs() as u32);
            }
        }
        let blocks = raw
            .into_iter()
            .map(|b| b.into_iter().map(|v| v as i32).collect())
            .collect();
        Self::from_blocks(degree, blocks)
    }

    /// Canonical JSON output; bit-exact for equal partitions.
    pub fn to_json_string(&self) -> String {
        let mut out = String::from("[");
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push('[');
            for (j, v) in block.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                out.push_str(&v.to_string());
            }
            out.push(']');
        }
        out.push(']');
        out
    }

    /// The block containing the signed point, or `None` if out of range.
    pub fn block_of(&self, point: i32) -> Option<&[i32]> {
        if point == 0 || point.unsigned_abs() > self.degree {
            return None;
        }
        self.blocks.iter().find(|b| b.contains(&point)).map(|b| b.as_slice())
    }

    /// `|x|_α`: the size of the block containing the signed point.
    pub fn block_size_of(&self, point: i32) -> Option<usize> {
        self.block_of(point).map(|b| b.len())
    }

    /// Product in the partition monoid.
    pub fn compose(&self, other: &Partition) -> Result<Partition, PartitionError> {
        if self.degree != other.degree {
            return Err(PartitionError::DegreeMismatch { left: self.degree, right: other.degree });
        }
        let n = self.degree as usize;
        // vertices: 0..n upper, n..2n middle, 2n..3n lower
        let mut dsu = DisjointSet::new(3 * n);
        for block in &self.blocks {
            let mut it = block.iter().map(|&v| {
                if v > 0 { v as usize - 1 } else { n + (-v) as usize - 1 }
            });
            let first = it.next().expect("blocks are nonempty");
            for u in it {
                dsu.union(first, u);
            }
        }
        for block in &other.blocks {
            let mut it = block.iter().map(|&v| {
                if v > 0 { n + v as usize - 1 } else { 2 * n + (-v) as usize - 1 }
            });
            let first = it.next().expect("blocks are nonempty");
            for u in it {
                dsu.union(first, u);
            }
        }
        let mut traces: BTreeMap<usize, Vec<i32>> = BTreeMap::new();
        for x in 0..n {
            traces.entry(dsu.find(x)).or_default().push((x + 1) as i32);
        }
        for x in 0..n {
            traces.entry(dsu.find(2 * n + x)).or_default().push(-((x + 1) as i32));
        }
        let blocks = traces.into_values().collect();
        Ok(Self::canonicalize(self.degree, blocks))
    }

    /// The `*` involution: turn the partition upside-down.
    pub fn star(&self) -> Partition {
        let blocks = self.blocks.iter().map(|b| b.iter().map(|&v| -v).collect()).collect();
        Self::canonicalize(self.degree, blocks)
    }

    /// Upper points whose block meets the lower row.
    pub fn dom(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .blocks
            .iter()
            .filter(|b| block_kind(b) == BlockKind::Transversal)
            .flat_map(|b| b.iter().filter(|&&v| v > 0).map(|&v| v as u32))
            .collect();
        out.sort_unstable();
        out
    }

    /// Lower points whose block meets the upper row.
    pub fn codom(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .blocks
            .iter()
            .filter(|b| block_kind(b) == BlockKind::Transversal)
            .flat_map(|b| b.iter().filter(|&&v| v < 0).map(|&v| v.unsigned_abs()))
            .collect();
        out.sort_unstable();
        out
    }

    /// The equivalence on `{1..n}` induced by the upper traces of blocks.
    pub fn ker(&self) -> GroundEquivalence {
        let classes = self
            .blocks
            .iter()
            .map(|b| b.iter().filter(|&&v| v > 0).map(|&v| v as u32).collect::<Vec<_>>())
            .filter(|c| !c.is_empty())
            .collect();
        GroundEquivalence::canonicalize(self.degree, classes)
    }

    /// The equivalence on `{1..n}` induced by the lower traces of blocks.
    pub fn coker(&self) -> GroundEquivalence {
        let classes = self
            .blocks
            .iter()
            .map(|b| b.iter().filter(|&&v| v < 0).map(|&v| v.unsigned_abs()).collect::<Vec<_>>())
            .filter(|c| !c.is_empty())
            .collect();
        GroundEquivalence::canonicalize(self.degree, classes)
    }

    /// Full domain and trivial kernel.
    pub fn in_l(&self) -> bool {
        self.dom().len() == self.degree as usize && self.ker().is_trivial()
    }

    /// Full codomain and trivial cokernel.
    pub fn in_r(&self) -> bool {
        self.codom().len() == self.degree as usize && self.coker().is_trivial()
    }

    /// Every block is a transversal pair `{x, y'}`.
    pub fn is_unit(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2 && block_kind(b) == BlockKind::Transversal)
    }

    pub fn is_identity(&self) -> bool {
        *self == Partition::identity(self.degree)
    }

    pub fn is_idempotent(&self) -> bool {
        self.compose(self).expect("same degree") == *self
    }

    fn transversal_parts(&self) -> impl Iterator<Item = (Vec<u32>, Vec<u32>)> + '_ {
        self.blocks.iter().filter(|b| block_kind(b) == BlockKind::Transversal).map(|b| {
            let upper = b.iter().filter(|&&v| v > 0).map(|&v| v as u32).collect();
            let lower = b.iter().filter(|&&v| v < 0).map(|&v| v.unsigned_abs()).collect();
            (upper, lower)
        })
    }

    fn nontransversals(&self, kind: BlockKind) -> impl Iterator<Item = &Vec<i32>> {
        self.blocks.iter().filter(move |b| block_kind(b) == kind)
    }

    /// `k(α,μ)`: transversal blocks whose upper part has size at least `μ`.
    pub fn param_k(&self, mu: &Cardinal) -> u64 {
        self.transversal_parts().filter(|(a, _)| Cardinal::from(a.len() as u64) >= *mu).count() as u64
    }

    /// `k*(α,μ)`: transversal blocks whose lower part has size at least `μ`.
    pub fn param_kstar(&self, mu: &Cardinal) -> u64 {
        self.transversal_parts().filter(|(_, b)| Cardinal::from(b.len() as u64) >= *mu).count() as u64
    }

    /// `d(α,μ)`: upper nontransversal blocks of size at least `μ`.
    pub fn param_d(&self, mu: &Cardinal) -> u64 {
        self.nontransversals(BlockKind::UpperNontransversal)
            .filter(|b| Cardinal::from(b.len() as u64) >= *mu)
            .count() as u64
    }

    /// `d*(α,μ)`: lower nontransversal blocks of size at least `μ`.
    pub fn param_dstar(&self, mu: &Cardinal) -> u64 {
        self.nontransversals(BlockKind::LowerNontransversal)
            .filter(|b| Cardinal::from(b.len() as u64) >= *mu)
            .count() as u64
    }

    /// `d(α) = d(α,1)`: the number of upper nontransversal blocks.
    pub fn param_d_total(&self) -> u64 {
        self.param_d(&Cardinal::Finite(1))
    }

    /// Sizes `|A_i|` of the upper parts of transversal blocks.
    pub fn transversal_upper_sizes(&self) -> Vec<u64> {
        self.transversal_parts().map(|(a, _)| a.len() as u64).collect()
    }

    /// Sizes `|B_i|` of the lower parts of transversal blocks.
    pub fn transversal_lower_sizes(&self) -> Vec<u64> {
        self.transversal_parts().map(|(_, b)| b.len() as u64).collect()
    }

    /// Sizes `|C_j|` of the upper nontransversal blocks.
    pub fn upper_nontransversal_sizes(&self) -> Vec<u64> {
        self.nontransversals(BlockKind::UpperNontransversal).map(|b| b.len() as u64).collect()
    }

    /// Sizes `|D_k|` of the lower nontransversal blocks.
    pub fn lower_nontransversal_sizes(&self) -> Vec<u64> {
        self.nontransversals(BlockKind::LowerNontransversal).map(|b| b.len() as u64).collect()
    }

    /// `d*(α) = d*(α,1)`: the number of lower nontransversal blocks.
    pub fn param_dstar_total(&self) -> u64 {
        self.param_dstar(&Cardinal::Finite(1))
    }

    /// Singularity `s(α) = Σ(|A_i|−1) + Σ|C_j|`.
    pub fn singularity(&self) -> u64 {
        let t: u64 = self.transversal_parts().map(|(a, _)| a.len() as u64 - 1).sum();
        let c: u64 = self.nontransversals(BlockKind::UpperNontransversal).map(|b| b.len() as u64).sum();
        t + c
    }

    /// Cosingularity `s*(α) = Σ(|B_i|−1) + Σ|D_k|`.
    pub fn cosingularity(&self) -> u64 {
        let t: u64 = self.transversal_parts().map(|(_, b)| b.len() as u64 - 1).sum();
        let d: u64 = self.nontransversals(BlockKind::LowerNontransversal).map(|b| b.len() as u64).sum();
        t + d
    }

    /// Shift `sh(α)`: transversal blocks whose upper and lower parts are
    /// disjoint as subsets of the ground set.
    pub fn shift(&self) -> u64 {
        self.transversal_parts()
            .filter(|(a, b)| a.iter().all(|x| !b.contains(x)))
            .count() as u64
    }

    /// Points whose block is not the identity pair `{x, x'}`.
    pub fn warp(&self) -> Vec<u32> {
        // [x]_α = {x, x'} and [x']_α = {x, x'} are the same condition, so
        // scanning the upper vertices suffices
        (1..=self.degree as i32)
            .filter(|&x| {
                let b = self.block_of(x).expect("in range");
                !(b.len() == 2 && b.contains(&-x))
            })
            .map(|x| x as u32)
            .collect()
    }

    /// Finite partitions are always finitary; kept for interface uniformity
    /// with the countably infinite engine.
    pub fn is_finitary(&self) -> bool {
        true
    }

    /// `id_A`: identity pairs on `A`, singletons elsewhere.
    pub fn id_set(set: &[u32], degree: u32) -> Result<Partition, PartitionError> {
        let set: BTreeSet<u32> = set.iter().copied().collect();
        for &a in &set {
            if a == 0 || a > degree {
                return Err(PartitionError::BadSubset { point: a, degree });
            }
        }
        let mut blocks = Vec::new();
        for x in 1..=degree {
            let x = x as i32;
            if set.contains(&(x as u32)) {
                blocks.push(vec![x, -x]);
            } else {
                blocks.push(vec![x]);
                blocks.push(vec![-x]);
            }
        }
        Ok(Self::canonicalize(degree, blocks))
    }

    /// `id_Y`: one block `A_i ∪ A_i'` per class of the quotient.
    pub fn id_quotient(quotient: &GroundEquivalence) -> Partition {
        let blocks = quotient
            .classes()
            .iter()
            .map(|class| {
                class
                    .iter()
                    .flat_map(|&x| [x as i32, -(x as i32)])
                    .collect::<Vec<_>>()
            })
            .collect();
        Self::canonicalize(quotient.degree(), blocks)
    }

    /// Canonical total order on partitions of equal degree; used for
    /// deterministic closure bookkeeping.
    pub fn canonical_cmp(&self, other: &Partition) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            let a = self.blocks.iter().map(|b| b.iter().map(|&v| point_key(v)).collect::<Vec<_>>());
            let b = other.blocks.iter().map(|b| b.iter().map(|&v| point_key(v)).collect::<Vec<_>>());
            a.cmp(b)
        })
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json_string())
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.blocks.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw: Vec<Vec<i64>> = Vec::deserialize(deserializer)?;
        Partition::from_raw(raw).map_err(D::Error::custom)
    }
}

/// An equivalence on the ground set `{1..n}`, in canonical class-list form.
/// Houses kernels, cokernels and the quotients fed to [`Partition::id_quotient`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundEquivalence {
    degree: u32,
    classes: Vec<Vec<u32>>,
}

impl GroundEquivalence {
    pub fn from_classes(degree: u32, classes: Vec<Vec<u32>>) -> Result<Self, PartitionError> {
        let mut seen = vec![false; degree as usize];
        for class in &classes {
            if class.is_empty() {
                return Err(PartitionError::EmptyBlock);
            }
            for &x in class {
                if x == 0 || x > degree {
                    return Err(PartitionError::BadSubset { point: x, degree });
                }
                if seen[x as usize - 1] {
                    return Err(PartitionError::DuplicatePoint(x as i64));
                }
                seen[x as usize - 1] = true;
            }
        }
        if let Some(i) = seen.iter().position(|&s| !s) {
            return Err(PartitionError::MissingPoint((i + 1) as i64));
        }
        Ok(Self::canonicalize(degree, classes))
    }

    fn canonicalize(degree: u32, mut classes: Vec<Vec<u32>>) -> Self {
        for class in &mut classes {
            class.sort_unstable();
        }
        classes.sort_by_key(|c| c[0]);
        GroundEquivalence { degree, classes }
    }

    /// The trivial relation Δ.
    pub fn trivial(degree: u32) -> Self {
        GroundEquivalence {
            degree,
            classes: (1..=degree).map(|x| vec![x]).collect(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }

    pub fn is_trivial(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }

    pub fn class_of(&self, x: u32) -> Option<&[u32]> {
        self.classes.iter().find(|c| c.contains(&x)).map(|c| c.as_slice())
    }

    /// Relation containment: every pair related here is related in `other`,
    /// i.e. every class here is contained in a class of `other`.
    pub fn is_sub_equivalence_of(&self, other: &GroundEquivalence) -> bool {
        debug_assert_eq!(self.degree, other.degree);
        self.classes.iter().all(|class| {
            match other.class_of(class[0]) {
                Some(oc) => class.iter().all(|x| oc.contains(x)),
                None => false,
            }
        })
    }

    /// All quotients of `{1..n}` (set partitions of the ground set).
    pub fn enumerate_all(degree: u32) -> Vec<GroundEquivalence> {
        let mut out = Vec::new();
        let mut assignment = vec![0usize; degree as usize];
        fn rec(assignment: &mut Vec<usize>, i: usize, max_used: usize, degree: u32, out: &mut Vec<GroundEquivalence>) {
            if i == assignment.len() {
                let nclasses = max_used;
                let mut classes = vec![Vec::new(); nclasses];
                for (p, &c) in assignment.iter().enumerate() {
                    classes[c].push(p as u32 + 1);
                }
                out.push(GroundEquivalence::canonicalize(degree, classes));
                return;
            }
            for c in 0..=max_used {
                assignment[i] = c;
                rec(assignment, i + 1, max_used.max(c + 1), degree, out);
            }
        }
        if degree == 0 {
            return vec![GroundEquivalence { degree, classes: vec![] }];
        }
        rec(&mut assignment, 0, 0, degree, &mut out);
        out
    }
}

/// Disjoint-set forest with union by rank and path halving.
struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(size: usize) -> Self {
        DisjointSet { parent: (0..size).collect(), rank: vec![0; size] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            Ordering::Less => self.parent[ra] = rb,
            Ordering::Greater => self.parent[rb] = ra,
            Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn figure1() -> Partition {
        Partition::parse_json("[[1,3,-4],[2,4],[5,6,-1,-6],[-2,-3],[-5]]").unwrap()
    }

    #[test]
    fn parse_figure1() {
        let p = figure1();
        assert_eq!(p.degree(), 6);
        assert_eq!(p.blocks().len(), 5);
        // canonical form reorders inside blocks by (|v|, sign)
        assert_eq!(p.to_json_string(), "[[1,3,-4],[2,4],[-1,5,6,-6],[-2,-3],[-5]]");
    }

    #[test]
    fn parse_identity_and_errors() {
        let id2 = Partition::parse_json("[[1,-1],[2,-2]]").unwrap();
        assert_eq!(id2, Partition::identity(2));
        assert_eq!(
            Partition::parse_json("[[1],[1,-1]]"),
            Err(PartitionError::DuplicatePoint(1))
        );
        assert_eq!(
            Partition::parse_json("[[1,-1],[3,-3]]"),
            Err(PartitionError::MissingPoint(2))
        );
        assert_eq!(Partition::parse_json("[[0,1,-1]]"), Err(PartitionError::ZeroPoint));
        assert!(matches!(Partition::parse_json("[[1,"), Err(PartitionError::Literal(_))));
    }

    #[test]
    fn one_line_form() {
        let p = Partition::parse_line("1 3 -4 | 2 4 | 5 6 -1 -6 | -2 -3 | -5").unwrap();
        assert_eq!(p, figure1());
    }

    #[test]
    fn parse_round_trips_with_format() {
        let p = figure1();
        assert_eq!(Partition::parse_json(&p.to_json_string()).unwrap(), p);
    }

    #[test]
    fn compose_figure2() {
        let a = Partition::parse_json("[[1,2,-4],[3],[4],[5,-2],[-1],[-3,-5]]").unwrap();
        let b = Partition::parse_json("[[1,2,-2,-3],[3,5],[4],[-1,-5],[-4]]").unwrap();
        let expected = Partition::parse_json("[[1,2],[3],[4],[5,-2,-3],[-1,-5],[-4]]").unwrap();
        assert_eq!(a.compose(&b).unwrap(), expected);
    }

    #[test]
    fn compose_identity_left() {
        let p = figure1();
        assert_eq!(Partition::identity(6).compose(&p).unwrap(), p);
        assert_eq!(p.compose(&Partition::identity(6)).unwrap(), p);
    }

    #[test]
    fn compose_degree_mismatch() {
        let a = Partition::identity(2);
        let b = Partition::identity(3);
        assert_eq!(a.compose(&b), Err(PartitionError::DegreeMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn sandwich_matches_oracle() {
        // a · a* · a == a, checked against the explicit 3n-vertex graph oracle
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a = oracle::random_partition(&mut rng, 6);
            let s = a.star();
            let left = a.compose(&s).unwrap();
            assert_eq!(left, oracle::compose_by_graph(&a, &s));
            let back = left.compose(&a).unwrap();
            assert_eq!(back, oracle::compose_by_graph(&left, &a));
            assert_eq!(back, a);
        }
    }

    #[test]
    fn star_figure1() {
        let expected = Partition::parse_json("[[4,-1,-3],[-2,-4],[1,6,-5,-6],[2,3],[5]]").unwrap();
        assert_eq!(figure1().star(), expected);
        assert_eq!(Partition::identity(4).star(), Partition::identity(4));
    }

    #[test]
    fn dom_codom_ker_coker() {
        let p = figure1();
        assert_eq!(p.dom(), vec![1, 3, 5, 6]);
        assert_eq!(p.codom(), vec![1, 4, 6]);
        let coker = p.coker();
        assert_eq!(coker.classes(), &[vec![1, 6], vec![2, 3], vec![4], vec![5]]);

        let id = Partition::identity(5);
        assert_eq!(id.dom(), (1..=5).collect::<Vec<_>>());
        assert_eq!(id.codom(), (1..=5).collect::<Vec<_>>());
        assert!(id.ker().is_trivial());
        assert!(id.coker().is_trivial());
    }

    #[test]
    fn duality_of_dom_and_ker() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a = oracle::random_partition(&mut rng, 5);
            assert_eq!(a.star().dom(), a.codom());
            assert_eq!(a.star().ker(), a.coker());
        }
    }

    #[test]
    fn membership_flags() {
        let a = Partition::parse_json("[[1,-1,-2],[2,-3],[3]]").unwrap();
        assert!(!a.in_l()); // dom misses 3
        let u = Partition::parse_json("[[1,-1],[2,-3],[3,-2]]").unwrap();
        assert!(u.is_unit() && u.in_l() && u.in_r());
        let ida = Partition::id_set(&[1], 2).unwrap();
        assert!(!ida.in_l() && !ida.in_r());
    }

    #[test]
    fn figure1_parameters() {
        let p = figure1();
        let two = Cardinal::Finite(2);
        assert_eq!(p.param_k(&two), 2);
        assert_eq!(p.param_kstar(&two), 1);
        assert_eq!(p.param_d(&two), 1);
        assert_eq!(p.param_dstar(&two), 1);
        assert_eq!(p.param_d_total(), 1);
        assert_eq!(p.param_dstar_total(), 2);
        assert_eq!(p.singularity(), 4);
        assert_eq!(p.cosingularity(), 4);
        assert_eq!(p.shift(), 1);
        assert_eq!(p.warp(), vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn identity_parameters_vanish() {
        let id = Partition::identity(4);
        for mu in [Cardinal::Finite(2), Cardinal::Finite(3)] {
            assert_eq!(id.param_k(&mu), 0);
            assert_eq!(id.param_kstar(&mu), 0);
            assert_eq!(id.param_d(&mu), 0);
            assert_eq!(id.param_dstar(&mu), 0);
        }
        assert_eq!(id.singularity(), 0);
        assert_eq!(id.cosingularity(), 0);
        assert_eq!(id.shift(), 0);
        assert!(id.warp().is_empty());
    }

    #[test]
    fn parameter_duality() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let a = oracle::random_partition(&mut rng, 6);
            for mu in [Cardinal::Finite(1), Cardinal::Finite(2), Cardinal::Finite(3)] {
                assert_eq!(a.param_kstar(&mu), a.star().param_k(&mu));
                assert_eq!(a.param_dstar(&mu), a.star().param_d(&mu));
            }
            assert_eq!(a.cosingularity(), a.star().singularity());
        }
    }

    #[test]
    fn l_elements_have_zero_singularity() {
        // at finite degree full dom + trivial ker forces a permutation
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let a = oracle::random_unit(&mut rng, 5);
            assert!(a.in_l());
            assert_eq!(a.singularity(), 0);
        }
    }

    #[test]
    fn warp_examples() {
        let p = Partition::parse_json("[[1,-1],[2,3,-2,-3]]").unwrap();
        assert_eq!(p.warp(), vec![2, 3]);
    }

    #[test]
    fn id_set_and_quotient() {
        let p = Partition::id_set(&[1, 3], 3).unwrap();
        assert_eq!(p.to_json_string(), "[[1,-1],[2],[3,-3],[-2]]");
        let y = GroundEquivalence::from_classes(3, vec![vec![1, 2], vec![3]]).unwrap();
        let q = Partition::id_quotient(&y);
        assert_eq!(q.to_json_string(), "[[1,-1,2,-2],[3,-3]]");
        assert!(q.is_idempotent());
        assert!(Partition::id_set(&[5], 3).is_err());
    }

    #[test]
    fn id_set_idempotent_for_all_subsets() {
        let n = 4u32;
        for mask in 0u32..(1 << n) {
            let set: Vec<u32> = (1..=n).filter(|x| mask & (1 << (x - 1)) != 0).collect();
            let p = Partition::id_set(&set, n).unwrap();
            assert!(p.is_idempotent());
        }
    }

    #[test]
    fn degree_zero_is_admitted() {
        let e = Partition::parse_json("[]").unwrap();
        assert_eq!(e.degree(), 0);
        assert_eq!(e.compose(&e).unwrap(), e);
        assert_eq!(e.singularity(), 0);
        assert_eq!(e.param_d_total(), 0);
        assert!(e.is_idempotent() && e.is_unit());
    }

    #[test]
    fn associativity_bulk() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10_000 {
            let n = oracle::random_degree(&mut rng, 1, 6);
            let a = oracle::random_partition(&mut rng, n);
            let b = oracle::random_partition(&mut rng, n);
            let c = oracle::random_partition(&mut rng, n);
            let ab_c = a.compose(&b).unwrap().compose(&c).unwrap();
            let a_bc = a.compose(&b.compose(&c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc);
        }
    }

    fn arb_partition_of(n: u32) -> impl Strategy<Value = Partition> {
        proptest::collection::vec(0..(2 * n as usize), 2 * n as usize).prop_map(move |labels| {
            let mut groups: BTreeMap<usize, Vec<i32>> = BTreeMap::new();
            for (i, &lab) in labels.iter().enumerate() {
                let v = if i < n as usize { i as i32 + 1 } else { -((i - n as usize) as i32 + 1) };
                groups.entry(lab).or_default().push(v);
            }
            Partition::from_blocks(n, groups.into_values().collect()).unwrap()
        })
    }

    fn arb_partition(max_degree: u32) -> impl Strategy<Value = Partition> {
        (1..=max_degree).prop_flat_map(arb_partition_of)
    }

    fn arb_partition_pair(max_degree: u32) -> impl Strategy<Value = (Partition, Partition)> {
        (1..=max_degree).prop_flat_map(|n| (arb_partition_of(n), arb_partition_of(n)))
    }

    proptest! {
        #[test]
        fn star_is_involution(a in arb_partition(6)) {
            prop_assert_eq!(a.star().star(), a);
        }

        #[test]
        fn regular_star_identities((a, b) in arb_partition_pair(5)) {
            let s = a.star();
            prop_assert_eq!(a.compose(&s).unwrap().compose(&a).unwrap(), a.clone());
            prop_assert_eq!(s.compose(&a).unwrap().compose(&s).unwrap(), s.clone());
            prop_assert_eq!(a.compose(&b).unwrap().star(), b.star().compose(&a.star()).unwrap());
        }

        #[test]
        fn json_round_trip(a in arb_partition(6)) {
            prop_assert_eq!(Partition::parse_json(&a.to_json_string()).unwrap(), a);
        }
    }
}
