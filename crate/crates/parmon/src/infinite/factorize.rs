//! Factorization of a finitary partition through the canonical generating
//! pair: `γ = α π β` with `π` a permutation of ℕ.
//!
//! The pair is fixed once and for all from the countable dyadic moiety,
//! interleaved into two families: `E_x` is dyadic part `2x−1` and `F_x` is
//! part `2x`.  Then `α` has blocks `{x} ∪ E_x'` and `F_x'` (so `α ∈ L_ℕ`
//! with `d*(α, ℵ0) = ℵ0` and every `|x|_α` infinite) and `β = α*` (blocks
//! `E_y ∪ {y'}` and upper `F_y`, written `G_y`/`H_y` below).  These blocks
//! are infinite, so the pair is exposed through part descriptions rather
//! than the finite-block oracle.
//!
//! [`factorize`] builds `π` in stages, one piece per block of `γ`:
//!
//! * each transversal block `A ∪ B'` pins `|A|·|B|` anchor points
//!   (`t`-th member of `E_a ↦ s`-th member of `G_b`) and completes
//!   `⋃E_a → ⋃G_b` by order-isomorphism;
//! * the `j`-th upper nontransversal `C` maps `⋃_{c∈C} E_c` onto `H_j`;
//! * the `k`-th lower nontransversal `D` maps `F_k` onto `⋃_{d∈D} G_d`;
//! * everything else: identity on `E_x` off the warp, and one residual
//!   order-isomorphism between the unused `F`- and `H`-parts.
//!
//! The product `α π β` is evaluated by [`sandwich_product`] at the level of
//! interface classes: a middle-row class is a whole part, each piece's image
//! meets exactly the parts of its codomain, and the anchor grid makes the
//! class graph inside one piece complete, so breadth-first search over
//! classes is exact.  Residual (stage-4) classes carry no upper or lower
//! attachment and are unreachable from any query.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use super::finitary::sort_signed;
use super::{FinitaryPartition, InfiniteError, LazyPartition};

// --- dyadic part arithmetic over u128 ---------------------------------------

const MAX_PART: u64 = 120;

/// 1-based index of the dyadic part containing `v ≥ 1`.
pub fn dyadic_part_of(v: u128) -> u64 {
    debug_assert!(v >= 1);
    v.trailing_zeros() as u64 + 1
}

/// The `idx`-th smallest member of dyadic part `p`: `2^(p−1) · (2·idx − 1)`.
pub fn dyadic_member(part: u64, idx: u128) -> u128 {
    assert!(part >= 1 && part <= MAX_PART && idx >= 1);
    (1u128 << (part - 1)) * (2 * idx - 1)
}

/// 1-based rank of `v` within its own dyadic part.
pub fn dyadic_rank(v: u128) -> u128 {
    let p = dyadic_part_of(v);
    ((v >> (p - 1)) + 1) / 2
}

/// A decidable, enumerable union of dyadic parts.
#[derive(Debug, Clone, PartialEq, Eq)]
enum PartSet {
    /// Finitely many whole parts, by sorted distinct index.
    Parts(Vec<u64>),
    /// All parts `2z` with `z > bound` (the residual even-indexed parts).
    EvenPartsAbove(u64),
}

impl PartSet {
    fn contains_part(&self, part: u64) -> bool {
        match self {
            PartSet::Parts(list) => list.binary_search(&part).is_ok(),
            PartSet::EvenPartsAbove(bound) => part % 2 == 0 && part / 2 > *bound,
        }
    }

    fn contains(&self, v: u128) -> bool {
        self.contains_part(dyadic_part_of(v))
    }

    fn part_indices(&self) -> Option<&[u64]> {
        match self {
            PartSet::Parts(list) => Some(list),
            PartSet::EvenPartsAbove(_) => None,
        }
    }

    fn count_le_in_part(part: u64, v: u128) -> u128 {
        if part > MAX_PART as u64 || v < (1u128 << (part - 1)) {
            0
        } else {
            ((v >> (part - 1)) + 1) / 2
        }
    }

    /// Members of this set that are `≤ v`.
    fn count_le(&self, v: u128) -> u128 {
        match self {
            PartSet::Parts(list) => list.iter().map(|&p| Self::count_le_in_part(p, v)).sum(),
            PartSet::EvenPartsAbove(bound) => {
                let mut total = 0u128;
                let mut z = bound + 1;
                while 2 * z - 1 <= MAX_PART && (1u128 << (2 * z - 1)) <= v {
                    total += Self::count_le_in_part(2 * z, v);
                    z += 1;
                }
                total
            }
        }
    }

    /// The `r`-th smallest member (1-based).
    fn nth(&self, r: u128) -> Result<u128, InfiniteError> {
        debug_assert!(r >= 1);
        let mut hi: u128 = 2;
        while self.count_le(hi) < r {
            hi = hi.checked_mul(2).ok_or(InfiniteError::PointOverflow(i64::MAX))?;
        }
        let mut lo: u128 = 1;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.count_le(mid) >= r {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        debug_assert!(self.contains(lo));
        Ok(lo)
    }
}

/// `r`-th member of `set ∖ excluded` (`excluded` sorted, all inside `set`).
fn nth_excluding(set: &PartSet, excluded: &[u128], r: u128) -> Result<u128, InfiniteError> {
    let mut skip = 0u128;
    loop {
        let v = set.nth(r + skip)?;
        let c = excluded.iter().filter(|&&e| e <= v).count() as u128;
        if c == skip && !excluded.contains(&v) {
            return Ok(v);
        }
        skip = c.max(skip + u128::from(c == skip));
    }
}

fn rank_excluding(set: &PartSet, excluded: &[u128], v: u128) -> u128 {
    set.count_le(v) - excluded.iter().filter(|&&e| e <= v).count() as u128
}

fn order_iso(
    dom: &PartSet,
    dom_excl: &[u128],
    cod: &PartSet,
    cod_excl: &[u128],
    v: u128,
) -> Result<u128, InfiniteError> {
    nth_excluding(cod, cod_excl, rank_excluding(dom, dom_excl, v))
}

// --- the canonical pair ------------------------------------------------------

/// Handles for the canonical pair `α = (E_x | F_x) ∈ L_ℕ`, `β = α* ∈ R_ℕ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CanonicalGenPair;

/// A block of the canonical pair: one ground point plus one infinite part,
/// or an infinite part alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalBlock {
    /// `{x} ∪ P'` for the dyadic part `P` (a transversal block of `α`).
    UpperPointWithLowerPart { upper: u64, part: u64 },
    /// `P'` alone (a lower nontransversal block of `α`).
    LowerPartOnly { part: u64 },
    /// `P ∪ {y'}` (a transversal block of `β`).
    LowerPointWithUpperPart { lower: u64, part: u64 },
    /// `P` alone (an upper nontransversal block of `β`).
    UpperPartOnly { part: u64 },
}

pub fn canonical_gen_pair() -> CanonicalGenPair {
    CanonicalGenPair
}

impl CanonicalGenPair {
    /// Dyadic index of `E_x` (`G_x` on the β side).
    pub fn e_part(&self, x: u64) -> u64 {
        2 * x - 1
    }

    /// Dyadic index of `F_x` (`H_x` on the β side).
    pub fn f_part(&self, x: u64) -> u64 {
        2 * x
    }

    pub fn e_member(&self, x: u64, idx: u128) -> u128 {
        dyadic_member(self.e_part(x), idx)
    }

    pub fn f_member(&self, x: u64, idx: u128) -> u128 {
        dyadic_member(self.f_part(x), idx)
    }

    pub fn e_contains(&self, x: u64, v: u128) -> bool {
        dyadic_part_of(v) == self.e_part(x)
    }

    pub fn f_contains(&self, x: u64, v: u128) -> bool {
        dyadic_part_of(v) == self.f_part(x)
    }

    /// The block of `α` containing the upper point `x`.
    pub fn alpha_block_of_upper(&self, x: u64) -> CanonicalBlock {
        CanonicalBlock::UpperPointWithLowerPart { upper: x, part: self.e_part(x) }
    }

    /// The block of `α` containing the lower point `v'`.
    pub fn alpha_block_of_lower(&self, v: u128) -> CanonicalBlock {
        let p = dyadic_part_of(v);
        if p % 2 == 1 {
            CanonicalBlock::UpperPointWithLowerPart { upper: (p + 1) / 2, part: p }
        } else {
            CanonicalBlock::LowerPartOnly { part: p }
        }
    }

    /// The block of `β = α*` containing the lower point `y'`.
    pub fn beta_block_of_lower(&self, y: u64) -> CanonicalBlock {
        CanonicalBlock::LowerPointWithUpperPart { lower: y, part: self.e_part(y) }
    }

    /// The block of `β = α*` containing the upper point `v`.
    pub fn beta_block_of_upper(&self, v: u128) -> CanonicalBlock {
        let p = dyadic_part_of(v);
        if p % 2 == 1 {
            CanonicalBlock::LowerPointWithUpperPart { lower: (p + 1) / 2, part: p }
        } else {
            CanonicalBlock::UpperPartOnly { part: p }
        }
    }
}

// --- the staged permutation --------------------------------------------------

#[derive(Debug, Clone)]
struct Piece {
    dom: PartSet,
    cod: PartSet,
    /// Anchor sources inside `dom`, sorted.
    dom_anchor: Vec<u128>,
    /// Anchor targets inside `cod`, sorted.
    cod_anchor: Vec<u128>,
}

/// `π ∈ S_ℕ` with its stage structure, as produced by [`factorize`].
#[derive(Debug, Clone)]
pub struct PermutationFactorization {
    anchors: BTreeMap<u128, u128>,
    anchors_rev: BTreeMap<u128, u128>,
    pieces: Vec<Piece>,
    dom_part_to_piece: HashMap<u64, usize>,
    cod_part_to_piece: HashMap<u64, usize>,
    stage4_dom: PartSet,
    stage4_cod: PartSet,
}

impl PermutationFactorization {
    /// The image of `v` under `π`.
    pub fn apply(&self, v: u128) -> Result<u128, InfiniteError> {
        if v == 0 {
            return Err(InfiniteError::ZeroPoint);
        }
        if let Some(&t) = self.anchors.get(&v) {
            return Ok(t);
        }
        let p = dyadic_part_of(v);
        if let Some(&pi) = self.dom_part_to_piece.get(&p) {
            let piece = &self.pieces[pi];
            return order_iso(&piece.dom, &piece.dom_anchor, &piece.cod, &piece.cod_anchor, v);
        }
        if p % 2 == 1 {
            return Ok(v); // identity on E_x off the warp
        }
        order_iso(&self.stage4_dom, &[], &self.stage4_cod, &[], v)
    }

    /// The preimage of `v` under `π`.
    pub fn apply_inv(&self, v: u128) -> Result<u128, InfiniteError> {
        if v == 0 {
            return Err(InfiniteError::ZeroPoint);
        }
        if let Some(&s) = self.anchors_rev.get(&v) {
            return Ok(s);
        }
        let p = dyadic_part_of(v);
        if let Some(&pi) = self.cod_part_to_piece.get(&p) {
            let piece = &self.pieces[pi];
            return order_iso(&piece.cod, &piece.cod_anchor, &piece.dom, &piece.dom_anchor, v);
        }
        if p % 2 == 1 {
            return Ok(v);
        }
        order_iso(&self.stage4_cod, &[], &self.stage4_dom, &[], v)
    }

    /// Part indices of each explicit stage piece's domain, for the
    /// disjointness checks.
    pub fn stage_domain_parts(&self) -> Vec<Vec<u64>> {
        self.pieces
            .iter()
            .map(|p| p.dom.part_indices().expect("stage pieces have explicit parts").to_vec())
            .collect()
    }

    pub fn anchor_count(&self) -> usize {
        self.anchors.len()
    }
}

/// Builds `π` with `γ = α π β` for the canonical pair.
pub fn factorize(gamma: &FinitaryPartition) -> PermutationFactorization {
    let pair = canonical_gen_pair();
    let blocks = gamma.blocks_with_labels();

    let split = |block: &Vec<i64>| -> (Vec<u64>, Vec<u64>) {
        let mut uppers: Vec<u64> = block.iter().filter(|&&v| v > 0).map(|&v| v as u64).collect();
        let mut lowers: Vec<u64> = block.iter().filter(|&&v| v < 0).map(|&v| (-v) as u64).collect();
        uppers.sort_unstable();
        lowers.sort_unstable();
        (uppers, lowers)
    };

    let mut transversals = Vec::new();
    let mut upper_blocks = Vec::new();
    let mut lower_blocks = Vec::new();
    for block in &blocks {
        let (uppers, lowers) = split(block);
        match (uppers.is_empty(), lowers.is_empty()) {
            (false, false) => transversals.push((uppers, lowers)),
            (false, true) => upper_blocks.push(uppers),
            (true, false) => lower_blocks.push(lowers),
            (true, true) => unreachable!("blocks are nonempty"),
        }
    }
    upper_blocks.sort();
    lower_blocks.sort();

    let mut anchors = BTreeMap::new();
    let mut pieces = Vec::new();

    // stage 1: transversal blocks A ∪ B' with the anchor grid
    for (uppers, lowers) in &transversals {
        let mut dom_anchor = Vec::new();
        let mut cod_anchor = Vec::new();
        for (s, &a) in uppers.iter().enumerate() {
            for (t, &b) in lowers.iter().enumerate() {
                let e = dyadic_member(pair.e_part(a), t as u128 + 1);
                let g = dyadic_member(pair.e_part(b), s as u128 + 1);
                anchors.insert(e, g);
                dom_anchor.push(e);
                cod_anchor.push(g);
            }
        }
        dom_anchor.sort_unstable();
        cod_anchor.sort_unstable();
        pieces.push(Piece {
            dom: PartSet::Parts(uppers.iter().map(|&a| pair.e_part(a)).collect::<Vec<_>>()),
            cod: PartSet::Parts(lowers.iter().map(|&b| pair.e_part(b)).collect::<Vec<_>>()),
            dom_anchor,
            cod_anchor,
        });
    }

    // stage 2: the j-th upper block C maps ⋃ E_c onto H_j
    for (j, uppers) in upper_blocks.iter().enumerate() {
        pieces.push(Piece {
            dom: PartSet::Parts(uppers.iter().map(|&c| pair.e_part(c)).collect()),
            cod: PartSet::Parts(vec![pair.f_part(j as u64 + 1)]),
            dom_anchor: Vec::new(),
            cod_anchor: Vec::new(),
        });
    }

    // stage 3: the k-th lower block D receives F_k
    for (k, lowers) in lower_blocks.iter().enumerate() {
        pieces.push(Piece {
            dom: PartSet::Parts(vec![pair.f_part(k as u64 + 1)]),
            cod: PartSet::Parts(lowers.iter().map(|&d| pair.e_part(d)).collect()),
            dom_anchor: Vec::new(),
            cod_anchor: Vec::new(),
        });
    }

    let mut dom_part_to_piece = HashMap::new();
    let mut cod_part_to_piece = HashMap::new();
    for (i, piece) in pieces.iter().enumerate() {
        for &p in piece.dom.part_indices().expect("explicit") {
            let prev = dom_part_to_piece.insert(p, i);
            debug_assert!(prev.is_none(), "piece domains overlap");
        }
        for &p in piece.cod.part_indices().expect("explicit") {
            let prev = cod_part_to_piece.insert(p, i);
            debug_assert!(prev.is_none(), "piece codomains overlap");
        }
    }

    let anchors_rev = anchors.iter().map(|(&s, &t)| (t, s)).collect();
    PermutationFactorization {
        anchors,
        anchors_rev,
        pieces,
        dom_part_to_piece,
        cod_part_to_piece,
        stage4_dom: PartSet::EvenPartsAbove(lower_blocks.len() as u64),
        stage4_cod: PartSet::EvenPartsAbove(upper_blocks.len() as u64),
    }
}

// --- the sandwich product α π β ----------------------------------------------

/// Interface classes on the middle row: `E(x)`/`F(z)` are the lower classes
/// of `α` (after `π`), `G(y)`/`H(w)` the upper classes of `β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum MidClass {
    LeftE(u64),
    LeftF(u64),
    RightG(u64),
    RightH(u64),
}

fn neighbors(pi: &PermutationFactorization, class: MidClass) -> Result<Vec<MidClass>, InfiniteError> {
    let to_right = |part: u64| {
        if part % 2 == 1 {
            MidClass::RightG((part + 1) / 2)
        } else {
            MidClass::RightH(part / 2)
        }
    };
    let to_left = |part: u64| {
        if part % 2 == 1 {
            MidClass::LeftE((part + 1) / 2)
        } else {
            MidClass::LeftF(part / 2)
        }
    };
    match class {
        MidClass::LeftE(x) => {
            let part = 2 * x - 1;
            match pi.dom_part_to_piece.get(&part) {
                Some(&i) => Ok(pi.pieces[i]
                    .cod
                    .part_indices()
                    .expect("explicit")
                    .iter()
                    .map(|&p| to_right(p))
                    .collect()),
                None => Ok(vec![MidClass::RightG(x)]),
            }
        }
        MidClass::LeftF(z) => {
            let part = 2 * z;
            match pi.dom_part_to_piece.get(&part) {
                Some(&i) => Ok(pi.pieces[i]
                    .cod
                    .part_indices()
                    .expect("explicit")
                    .iter()
                    .map(|&p| to_right(p))
                    .collect()),
                None => Err(InfiniteError::ResidualClass),
            }
        }
        MidClass::RightG(y) => {
            let part = 2 * y - 1;
            match pi.cod_part_to_piece.get(&part) {
                Some(&i) => Ok(pi.pieces[i]
                    .dom
                    .part_indices()
                    .expect("explicit")
                    .iter()
                    .map(|&p| to_left(p))
                    .collect()),
                None => Ok(vec![MidClass::LeftE(y)]),
            }
        }
        MidClass::RightH(w) => {
            let part = 2 * w;
            match pi.cod_part_to_piece.get(&part) {
                Some(&i) => Ok(pi.pieces[i]
                    .dom
                    .part_indices()
                    .expect("explicit")
                    .iter()
                    .map(|&p| to_left(p))
                    .collect()),
                None => Err(InfiniteError::ResidualClass),
            }
        }
    }
}

/// The product `α π β` as a lazy partition.  Blocks are recovered by
/// breadth-first search over interface classes; `fuel` bounds the number of
/// classes explored per query.
pub fn sandwich_product(pi: &PermutationFactorization, fuel: usize) -> LazyPartition {
    let pi = Arc::new(pi.clone());
    LazyPartition::new("alpha·pi·beta", move |p| {
        if p == 0 {
            return Err(InfiniteError::ZeroPoint);
        }
        let start = if p > 0 {
            MidClass::LeftE(p as u64)
        } else {
            MidClass::RightG((-p) as u64)
        };
        let mut visited = std::collections::BTreeSet::new();
        visited.insert(start);
        let mut queue = VecDeque::from([start]);
        let mut block = Vec::new();
        let mut explored = 0usize;
        while let Some(class) = queue.pop_front() {
            explored += 1;
            if explored > fuel {
                return Err(InfiniteError::HorizonExceeded { fuel, explored, factor: None });
            }
            match class {
                MidClass::LeftE(x) => block.push(x as i64),
                MidClass::RightG(y) => block.push(-(y as i64)),
                _ => {}
            }
            for next in neighbors(&pi, class)? {
                if visited.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        sort_signed(&mut block);
        Ok(block)
    })
}
