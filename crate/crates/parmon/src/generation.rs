//! Closure and generation experiments inside finite partition monoids:
//! exhaustive enumeration of `P_n`, breadth-first saturation of generated
//! subsemigroups with shortest-word bookkeeping, generation tests modulo a
//! base set, and relative-rank search with refutation certificates.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::partition::{Partition, PartitionError};

/// Default element cap for closure runs.
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

/// Exhaustive enumeration is guarded at this degree (`|P_4| = 4140`).
pub const MAX_EXHAUSTIVE_DEGREE: u32 = 4;

const PARALLEL_FRONTIER_THRESHOLD: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerationError {
    #[error("degree {0} exceeds the exhaustive size guard ({MAX_EXHAUSTIVE_DEGREE})")]
    SizeGuard(u32),
    #[error("no generators given")]
    NoGenerators,
    #[error("exhaustive relative-rank search is limited to degree 3; use sampled mode for degree 4")]
    ExhaustiveRankGuard,
    #[error("relative-rank search gave up (no witness of size <= {0})")]
    RankSearchExhausted(u32),
    #[error("closure words were not recorded")]
    WordsNotRecorded,
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// The result of a closure or enumeration run.
///
/// `elements` is deterministic: generators first (input order, deduplicated),
/// then one BFS layer at a time, each layer in canonical order.  When
/// requested, `words[i]` is a shortest word over generator indices that
/// evaluates to `elements[i]`.
#[derive(Debug, Clone)]
pub struct ClosureResult {
    pub degree: u32,
    pub generators: Vec<Partition>,
    pub elements: Vec<Partition>,
    pub words: Option<Vec<Vec<usize>>>,
    pub saturated: bool,
}

impl ClosureResult {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.elements.contains(p)
    }

    /// Set equality with another element list, ignoring order.
    pub fn same_elements(&self, other: &[Partition]) -> bool {
        if self.elements.len() != other.len() {
            return false;
        }
        let mut a: Vec<&Partition> = self.elements.iter().collect();
        let mut b: Vec<&Partition> = other.iter().collect();
        a.sort_by(|x, y| x.canonical_cmp(y));
        b.sort_by(|x, y| x.canonical_cmp(y));
        a == b
    }
}

/// All of `P_n`, enumerated via restricted-growth assignments of the `2n`
/// points.  The element count equals `Bell(2n)`.
pub fn enumerate_pn(n: u32) -> Result<ClosureResult, GenerationError> {
    if n > MAX_EXHAUSTIVE_DEGREE {
        return Err(GenerationError::SizeGuard(n));
    }
    let mut elements = Vec::new();
    let points: Vec<i32> = (1..=n as i32).chain((1..=n as i32).map(|x| -x)).collect();
    let mut assignment = vec![0usize; points.len()];
    fn rec(
        points: &[i32],
        assignment: &mut Vec<usize>,
        i: usize,
        used: usize,
        n: u32,
        out: &mut Vec<Partition>,
    ) {
        if i == points.len() {
            let mut blocks = vec![Vec::new(); used];
            for (p, &c) in assignment.iter().enumerate() {
                blocks[c].push(points[p]);
            }
            out.push(Partition::from_blocks(n, blocks).expect("assignment covers all points"));
            return;
        }
        for c in 0..=used {
            assignment[i] = c;
            rec(points, assignment, i + 1, used.max(c + 1), n, out);
        }
    }
    if n == 0 {
        elements.push(Partition::identity(0));
    } else {
        rec(&points, &mut assignment, 0, 0, n, &mut elements);
    }
    elements.sort_by(|a, b| a.canonical_cmp(b));
    Ok(ClosureResult { degree: n, generators: Vec::new(), elements, words: None, saturated: true })
}

/// The idempotents `E_n = {α : α² = α}`.
pub fn idempotents(n: u32) -> Result<Vec<Partition>, GenerationError> {
    Ok(enumerate_pn(n)?.elements.into_iter().filter(Partition::is_idempotent).collect())
}

/// The group of units `S_n`, in canonical order.
pub fn symmetric_group(n: u32) -> Vec<Partition> {
    let mut perms = Vec::new();
    let mut image: Vec<i32> = (1..=n as i32).collect();
    fn heap(image: &mut Vec<i32>, k: usize, n: u32, out: &mut Vec<Partition>) {
        if k <= 1 {
            let blocks = image.iter().enumerate().map(|(i, &y)| vec![i as i32 + 1, -y]).collect();
            out.push(Partition::from_blocks(n, blocks).expect("permutation blocks"));
            return;
        }
        for i in 0..k {
            heap(image, k - 1, n, out);
            if k % 2 == 0 {
                image.swap(i, k - 1);
            } else {
                image.swap(0, k - 1);
            }
        }
    }
    if n == 0 {
        return vec![Partition::identity(0)];
    }
    let k = image.len();
    heap(&mut image, k, n, &mut perms);
    perms.sort_by(|a, b| a.canonical_cmp(b));
    perms
}

/// Breadth-first saturation of `⟨gens⟩`.  Uses parallel frontier expansion
/// for large frontiers; the result is identical to the sequential run.
pub fn closure(gens: &[Partition], cap: usize, record_words: bool) -> Result<ClosureResult, GenerationError> {
    closure_impl(gens, cap, record_words, true)
}

/// Reference single-threaded saturation; same contract as [`closure`].
pub fn closure_sequential(
    gens: &[Partition],
    cap: usize,
    record_words: bool,
) -> Result<ClosureResult, GenerationError> {
    closure_impl(gens, cap, record_words, false)
}

fn closure_impl(
    gens: &[Partition],
    cap: usize,
    record_words: bool,
    parallel: bool,
) -> Result<ClosureResult, GenerationError> {
    let degree = match gens.first() {
        Some(g) => g.degree(),
        None => return Err(GenerationError::NoGenerators),
    };
    for g in gens {
        if g.degree() != degree {
            return Err(PartitionError::DegreeMismatch { left: degree, right: g.degree() }.into());
        }
    }

    let mut elements: Vec<Partition> = Vec::new();
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut index: HashMap<Partition, usize> = HashMap::new();
    for (gi, g) in gens.iter().enumerate() {
        if !index.contains_key(g) {
            index.insert(g.clone(), elements.len());
            elements.push(g.clone());
            words.push(vec![gi]);
        }
    }

    let mut frontier: Vec<usize> = (0..elements.len()).collect();
    let mut saturated = true;
    while !frontier.is_empty() {
        if elements.len() > cap {
            saturated = false;
            break;
        }
        // (product, frontier position, generator index), in deterministic order
        let expand = |&fpos: &usize| -> Vec<(Partition, usize, usize)> {
            let e = &elements[fpos];
            gens.iter()
                .enumerate()
                .map(|(gi, g)| (e.compose(g).expect("common degree"), fpos, gi))
                .collect()
        };
        let mut candidates: Vec<(Partition, usize, usize)> =
            if parallel && frontier.len() >= PARALLEL_FRONTIER_THRESHOLD {
                frontier.par_iter().flat_map_iter(expand).collect()
            } else {
                frontier.iter().flat_map(expand).collect()
            };
        // keep the first discovery per element (frontier-major, generator-minor),
        // then append the layer in canonical order
        candidates.sort_by(|a, b| {
            a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2))
        });
        candidates.dedup_by(|a, b| a.0 == b.0);
        candidates.retain(|(p, _, _)| !index.contains_key(p));

        frontier = Vec::with_capacity(candidates.len());
        for (p, parent, gi) in candidates {
            let id = elements.len();
            index.insert(p.clone(), id);
            if record_words {
                let mut w = words[parent].clone();
                w.push(gi);
                words.push(w);
            }
            elements.push(p);
            frontier.push(id);
        }
    }

    Ok(ClosureResult {
        degree,
        generators: gens.to_vec(),
        elements,
        words: if record_words { Some(words) } else { None },
        saturated,
    })
}

/// Evaluates a word over generator indices by left-to-right composition.
pub fn evaluate_word(word: &[usize], gens: &[Partition]) -> Result<Partition, GenerationError> {
    let mut it = word.iter();
    let first = *it.next().ok_or(GenerationError::NoGenerators)?;
    let mut acc = gens[first].clone();
    for &gi in it {
        acc = acc.compose(&gens[gi])?;
    }
    Ok(acc)
}

/// Does `⟨base ∪ extra⟩ = P_n`?
pub fn is_generating_mod(base: &[Partition], extra: &[Partition]) -> Result<bool, GenerationError> {
    let mut gens = base.to_vec();
    gens.extend_from_slice(extra);
    let degree = gens.first().map(|g| g.degree()).ok_or(GenerationError::NoGenerators)?;
    if degree > MAX_EXHAUSTIVE_DEGREE {
        return Err(GenerationError::SizeGuard(degree));
    }
    let universe = enumerate_pn(degree)?;
    let c = closure(&gens, universe.len() + 1, false)?;
    Ok(c.len() == universe.len())
}

/// Named base sets for relative-rank experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BaseSet {
    #[serde(rename = "S")]
    SymmetricGroup,
    #[serde(rename = "E")]
    Idempotents,
    #[serde(rename = "ES")]
    IdempotentsAndUnits,
}

impl BaseSet {
    pub fn elements(&self, n: u32) -> Result<Vec<Partition>, GenerationError> {
        match self {
            BaseSet::SymmetricGroup => Ok(symmetric_group(n)),
            BaseSet::Idempotents => idempotents(n),
            BaseSet::IdempotentsAndUnits => {
                let mut out = idempotents(n)?;
                for u in symmetric_group(n) {
                    if !out.contains(&u) {
                        out.push(u);
                    }
                }
                out.sort_by(|a, b| a.canonical_cmp(b));
                Ok(out)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankMode {
    Exhaustive,
    /// Seeded pair sampling for degree 4; size-1 refutation stays exhaustive.
    Sampled { seed: u64 },
}

/// A relative-rank result with its witness and refutation status.
#[derive(Debug, Clone)]
pub struct RelRankCertificate {
    pub base: BaseSet,
    pub degree: u32,
    pub rank: u32,
    pub witness: Vec<Partition>,
    /// Every smaller adjunction size was exhaustively refuted.
    pub exhaustive_below: bool,
}

impl RelRankCertificate {
    /// Re-checks the certificate from scratch: the witness generates, and the
    /// witness size matches the claimed rank.
    pub fn verify(&self) -> Result<bool, GenerationError> {
        if self.witness.len() != self.rank as usize {
            return Ok(false);
        }
        let base = self.base.elements(self.degree)?;
        is_generating_mod(&base, &self.witness)
    }
}

/// Computes `rank(P_n : base)` with an exhaustive-refutation certificate.
///
/// Exhaustive mode is allowed for `n ≤ 3`.  For `n = 4` only sampled mode is
/// accepted: candidate pairs are drawn from a seeded PRNG while the size-0
/// and size-1 refutations remain exhaustive (with sound pruning: elements of
/// `⟨base⟩` are skipped, and bases containing `S_n` quotient candidates by
/// the two-sided `S_n` action, which preserves the generated subsemigroup).
pub fn relative_rank(base: BaseSet, n: u32, mode: RankMode) -> Result<RelRankCertificate, GenerationError> {
    if n > MAX_EXHAUSTIVE_DEGREE {
        return Err(GenerationError::SizeGuard(n));
    }
    if matches!(mode, RankMode::Exhaustive) && n > 3 {
        return Err(GenerationError::ExhaustiveRankGuard);
    }
    let universe = enumerate_pn(n)?;
    let base_elems = base.elements(n)?;
    let base_closure = closure(&base_elems, universe.len() + 1, false)?;
    if base_closure.len() == universe.len() {
        return Ok(RelRankCertificate { base, degree: n, rank: 0, witness: vec![], exhaustive_below: true });
    }

    let in_base_closure: HashMap<&Partition, ()> =
        base_closure.elements.iter().map(|p| (p, ())).collect();
    let candidates: Vec<Partition> = universe
        .elements
        .iter()
        .filter(|p| !in_base_closure.contains_key(*p))
        .cloned()
        .collect();

    // size 1, always exhaustive
    let units = symmetric_group(n);
    let base_contains_units = matches!(base, BaseSet::SymmetricGroup | BaseSet::IdempotentsAndUnits);
    let mut seen = vec![false; candidates.len()];
    let cand_index: HashMap<&Partition, usize> =
        candidates.iter().enumerate().map(|(i, p)| (p, i)).collect();
    for i in 0..candidates.len() {
        if seen[i] {
            continue;
        }
        seen[i] = true;
        let u = &candidates[i];
        if base_contains_units {
            // mark the whole S_n-double-coset: ⟨base ∪ {gud}⟩ = ⟨base ∪ {u}⟩
            for g in &units {
                let gu = g.compose(u)?;
                for d in &units {
                    let gud = gu.compose(d)?;
                    if let Some(&j) = cand_index.get(&gud) {
                        seen[j] = true;
                    }
                }
            }
        }
        let mut gens = base_elems.clone();
        gens.push(u.clone());
        if closure(&gens, universe.len() + 1, false)?.len() == universe.len() {
            return Ok(RelRankCertificate {
                base,
                degree: n,
                rank: 1,
                witness: vec![u.clone()],
                exhaustive_below: true,
            });
        }
    }

    // size 2
    let try_pair = |u: &Partition, v: &Partition| -> Result<bool, GenerationError> {
        let mut gens = base_elems.clone();
        gens.push(u.clone());
        gens.push(v.clone());
        Ok(closure(&gens, universe.len() + 1, false)?.len() == universe.len())
    };
    match mode {
        RankMode::Exhaustive => {
            for i in 0..candidates.len() {
                for j in (i + 1)..candidates.len() {
                    if try_pair(&candidates[i], &candidates[j])? {
                        return Ok(RelRankCertificate {
                            base,
                            degree: n,
                            rank: 2,
                            witness: vec![candidates[i].clone(), candidates[j].clone()],
                            exhaustive_below: true,
                        });
                    }
                }
            }
        }
        RankMode::Sampled { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..10_000 {
                let i = rng.random_range(0..candidates.len());
                let j = rng.random_range(0..candidates.len());
                if i == j {
                    continue;
                }
                if try_pair(&candidates[i], &candidates[j])? {
                    return Ok(RelRankCertificate {
                        base,
                        degree: n,
                        rank: 2,
                        witness: vec![candidates[i].clone(), candidates[j].clone()],
                        exhaustive_below: true,
                    });
                }
            }
        }
    }
    Err(GenerationError::RankSearchExhausted(2))
}

/// Distribution of shortest-word lengths over a closure with recorded words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordLengthStats {
    pub histogram: Vec<(usize, usize)>,
    pub max: usize,
}

pub fn word_length_stats(result: &ClosureResult) -> Result<WordLengthStats, GenerationError> {
    let words = result.words.as_ref().ok_or(GenerationError::WordsNotRecorded)?;
    let mut hist: HashMap<usize, usize> = HashMap::new();
    for w in words {
        *hist.entry(w.len()).or_insert(0) += 1;
    }
    let mut histogram: Vec<(usize, usize)> = hist.into_iter().collect();
    histogram.sort_unstable();
    let max = histogram.last().map(|&(len, _)| len).unwrap_or(0);
    Ok(WordLengthStats { histogram, max })
}

/// Report on exhaustively-found generating pairs modulo `S_n`: how many of
/// them have a member in `L_n ∖ S_n` or `R_n ∖ S_n`.  This is reported, not
/// asserted — the corresponding membership statement is proved only for
/// infinite ground sets, and at finite degree `L_n = S_n` forces the count
/// to come out of the search rather than out of the theory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingPairSurvey {
    pub degree: u32,
    pub pairs_checked: usize,
    pub generating_pairs: usize,
    pub pairs_with_lr_member: usize,
}

pub fn survey_generating_pairs_mod_s(n: u32) -> Result<GeneratingPairSurvey, GenerationError> {
    if n > 2 {
        return Err(GenerationError::SizeGuard(n));
    }
    let universe = enumerate_pn(n)?;
    let units = symmetric_group(n);
    let candidates: Vec<&Partition> =
        universe.elements.iter().filter(|p| !units.contains(p)).collect();
    let mut survey = GeneratingPairSurvey {
        degree: n,
        pairs_checked: 0,
        generating_pairs: 0,
        pairs_with_lr_member: 0,
    };
    let strictly_one_sided =
        |p: &Partition| (p.in_l() && !p.is_unit()) || (p.in_r() && !p.is_unit());
    for i in 0..candidates.len() {
        for j in (i + 1)..candidates.len() {
            survey.pairs_checked += 1;
            let mut gens = units.clone();
            gens.push(candidates[i].clone());
            gens.push(candidates[j].clone());
            if closure(&gens, universe.len() + 1, false)?.len() == universe.len() {
                survey.generating_pairs += 1;
                if strictly_one_sided(candidates[i]) || strictly_one_sided(candidates[j]) {
                    survey.pairs_with_lr_member += 1;
                }
            }
        }
    }
    Ok(survey)
}
