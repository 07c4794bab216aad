//! Block-oracle partitions of ℕ ∪ ℕ' and their fuel-bounded composition.
//!
//! An oracle maps a signed point to its full (finite) block.  Composition
//! explores the three-row product graph component of the queried point by
//! breadth-first search; the number of distinct middle-row vertices visited
//! is bounded by the fuel, and crossing that bound refuses the query instead
//! of returning a truncated block.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::{Arc, Mutex};

use crate::partition::Partition;

use super::finitary::sort_signed;
use super::{FinitaryPartition, InfiniteError};

type Oracle = dyn Fn(i64) -> Result<Vec<i64>, InfiniteError> + Send + Sync;

/// A partition of ℕ ∪ ℕ' given by a pure block oracle.
#[derive(Clone)]
pub struct LazyPartition {
    oracle: Arc<Oracle>,
    descriptor: String,
}

impl std::fmt::Debug for LazyPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LazyPartition({})", self.descriptor)
    }
}

impl LazyPartition {
    pub fn new(
        descriptor: impl Into<String>,
        oracle: impl Fn(i64) -> Result<Vec<i64>, InfiniteError> + Send + Sync + 'static,
    ) -> Self {
        LazyPartition { oracle: Arc::new(oracle), descriptor: descriptor.into() }
    }

    pub fn identity() -> Self {
        LazyPartition::new("identity", |p| {
            if p == 0 {
                return Err(InfiniteError::ZeroPoint);
            }
            let x = p.unsigned_abs() as i64;
            Ok(vec![x, -x])
        })
    }

    pub fn from_finitary(f: &FinitaryPartition) -> Self {
        let f = f.clone();
        LazyPartition::new("finitary", move |p| f.block_of(p))
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    /// The full block of a signed point, in canonical signed order.
    pub fn block_of(&self, point: i64) -> Result<Vec<i64>, InfiniteError> {
        if point == 0 {
            return Err(InfiniteError::ZeroPoint);
        }
        let mut block = (self.oracle)(point)?;
        sort_signed(&mut block);
        Ok(block)
    }

    /// The upside-down partition: query with flipped sign, flip the answer.
    pub fn star(&self) -> LazyPartition {
        let inner = self.oracle.clone();
        LazyPartition {
            oracle: Arc::new(move |p: i64| {
                let mut block = inner(-p)?;
                for v in &mut block {
                    *v = -*v;
                }
                Ok(block)
            }),
            descriptor: format!("star({})", self.descriptor),
        }
    }
}

/// Fuel-bounded composition; see [`compose_lazy_tagged`].
pub fn compose_lazy(a: &LazyPartition, b: &LazyPartition, fuel: usize) -> LazyPartition {
    compose_lazy_tagged(a, b, fuel, None)
}

/// Composition whose horizon errors carry `factor` (used by word evaluation
/// to report which composition step blew past the fuel).
///
/// The resulting oracle answers a query exactly when the product-graph
/// component of the queried point closes within `fuel` middle-row vertices;
/// otherwise it reports `HorizonExceeded` for that query.  Answers are
/// memoized, which only caches values, never changes them.
pub fn compose_lazy_tagged(
    a: &LazyPartition,
    b: &LazyPartition,
    fuel: usize,
    factor: Option<usize>,
) -> LazyPartition {
    let left = a.clone();
    let right = b.clone();
    let descriptor = format!("({} ∘ {})", a.descriptor, b.descriptor);
    let cache: Mutex<HashMap<i64, Vec<i64>>> = Mutex::new(HashMap::new());
    LazyPartition::new(descriptor, move |point| {
        if point == 0 {
            return Err(InfiniteError::ZeroPoint);
        }
        if let Some(hit) = cache.lock().unwrap().get(&point) {
            return Ok(hit.clone());
        }
        let block = explore_component(&left, &right, point, fuel, factor)?;
        let mut guard = cache.lock().unwrap();
        for &member in &block {
            guard.insert(member, block.clone());
        }
        Ok(block)
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Vertex {
    Up(i64),
    Mid(i64),
    Low(i64),
}

fn explore_component(
    a: &LazyPartition,
    b: &LazyPartition,
    point: i64,
    fuel: usize,
    factor: Option<usize>,
) -> Result<Vec<i64>, InfiniteError> {
    let start = if point > 0 { Vertex::Up(point) } else { Vertex::Low(-point) };
    let mut visited: BTreeSet<(u8, i64)> = BTreeSet::new();
    let mut queue = VecDeque::new();
    let mut middle_count = 0usize;
    let key = |v: Vertex| match v {
        Vertex::Up(x) => (0u8, x),
        Vertex::Mid(x) => (1, x),
        Vertex::Low(x) => (2, x),
    };
    visited.insert(key(start));
    queue.push_back(start);
    let mut uppers = Vec::new();
    let mut lowers = Vec::new();
    while let Some(v) = queue.pop_front() {
        let mut reach = Vec::new();
        match v {
            Vertex::Up(x) => {
                uppers.push(x);
                for m in a.block_of(x)? {
                    reach.push(if m > 0 { Vertex::Up(m) } else { Vertex::Mid(-m) });
                }
            }
            Vertex::Mid(x) => {
                middle_count += 1;
                if middle_count > fuel {
                    return Err(InfiniteError::HorizonExceeded {
                        fuel,
                        explored: middle_count,
                        factor,
                    });
                }
                for m in a.block_of(-x)? {
                    reach.push(if m > 0 { Vertex::Up(m) } else { Vertex::Mid(-m) });
                }
                for m in b.block_of(x)? {
                    reach.push(if m > 0 { Vertex::Mid(m) } else { Vertex::Low(-m) });
                }
            }
            Vertex::Low(x) => {
                lowers.push(-x);
                for m in b.block_of(-x)? {
                    reach.push(if m > 0 { Vertex::Mid(m) } else { Vertex::Low(-m) });
                }
            }
        }
        for w in reach {
            if visited.insert(key(w)) {
                queue.push_back(w);
            }
        }
    }
    let mut block: Vec<i64> = uppers.into_iter().chain(lowers).collect();
    sort_signed(&mut block);
    Ok(block)
}

/// The trace of a lazy partition on `{±1..±w}` as a finite partition.
pub fn restrict_to_window(lp: &LazyPartition, window: u32) -> Result<Partition, InfiniteError> {
    let w = window as i64;
    let mut traces: BTreeSet<Vec<i32>> = BTreeSet::new();
    for x in 1..=w {
        for p in [x, -x] {
            let block = lp.block_of(p)?;
            let trace: Vec<i32> =
                block.iter().filter(|&&v| v.unsigned_abs() <= window as u64).map(|&v| v as i32).collect();
            traces.insert(trace);
        }
    }
    Ok(Partition::from_blocks(window, traces.into_iter().collect())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infinite::compose_finitary;
    use crate::oracle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_finitary<R: Rng>(rng: &mut R, max_warp: u64) -> FinitaryPartition {
        let n = rng.random_range(1..=max_warp) as u32;
        FinitaryPartition::from_finite(&oracle::random_partition(rng, n))
    }

    #[test]
    fn identity_composed_with_finitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let f = random_finitary(&mut rng, 8);
        let lazy = compose_lazy(&LazyPartition::identity(), &LazyPartition::from_finitary(&f), 1000);
        for x in 1..=64i64 {
            assert_eq!(lazy.block_of(x).unwrap(), f.block_of(x).unwrap());
            assert_eq!(lazy.block_of(-x).unwrap(), f.block_of(-x).unwrap());
        }
    }

    #[test]
    fn lazy_composition_agrees_with_finitary_engine() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..100 {
            let a = random_finitary(&mut rng, 8);
            let b = random_finitary(&mut rng, 8);
            let exact = compose_finitary(&a, &b);
            let lazy = compose_lazy(
                &LazyPartition::from_finitary(&a),
                &LazyPartition::from_finitary(&b),
                10_000,
            );
            for _ in 0..10 {
                let x = rng.random_range(1..=32i64);
                let p = if rng.random_bool(0.5) { x } else { -x };
                assert_eq!(lazy.block_of(p).unwrap(), exact.block_of(p).unwrap());
            }
        }
    }

    #[test]
    fn answers_match_a_ten_fold_fuel_ground_truth() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..50 {
            let a = random_finitary(&mut rng, 8);
            let b = random_finitary(&mut rng, 8);
            let low = compose_lazy(
                &LazyPartition::from_finitary(&a),
                &LazyPartition::from_finitary(&b),
                100,
            );
            let high = compose_lazy(
                &LazyPartition::from_finitary(&a),
                &LazyPartition::from_finitary(&b),
                1000,
            );
            for x in 1..=16i64 {
                if let Ok(block) = low.block_of(x) {
                    assert_eq!(block, high.block_of(x).unwrap());
                }
            }
        }
    }

    /// A pair whose product-graph component of `+1` zigzags through all
    /// `2k+1` middle vertices: the lower blocks of `a` pair `{2i, 2i+1}'`
    /// and the upper blocks of `b` pair `{2i-1, 2i}`, so their join on the
    /// middle row is a single chain.
    fn chain_pair(k: u32) -> (FinitaryPartition, FinitaryPartition) {
        let n = 2 * k + 1;
        let mut a_blocks: Vec<Vec<i32>> = vec![vec![1, -1]];
        for x in 2..=n as i32 {
            a_blocks.push(vec![x]);
        }
        for i in 1..=k as i32 {
            a_blocks.push(vec![-2 * i, -(2 * i + 1)]);
        }
        let mut b_blocks: Vec<Vec<i32>> = vec![vec![n as i32, -1]];
        for i in 1..=k as i32 {
            b_blocks.push(vec![2 * i - 1, 2 * i]);
        }
        for x in 2..=n as i32 {
            b_blocks.push(vec![-x]);
        }
        let a = Partition::from_blocks(n, a_blocks).unwrap();
        let b = Partition::from_blocks(n, b_blocks).unwrap();
        (FinitaryPartition::from_finite(&a), FinitaryPartition::from_finite(&b))
    }

    #[test]
    fn horizon_is_reported_and_lifts_with_more_fuel() {
        let (a, b) = chain_pair(25);
        let starved = compose_lazy(&LazyPartition::from_finitary(&a), &LazyPartition::from_finitary(&b), 10);
        match starved.block_of(1) {
            Err(InfiniteError::HorizonExceeded { fuel: 10, explored, .. }) => {
                assert!(explored > 10);
            }
            other => panic!("expected horizon, got {other:?}"),
        }
        let fed = compose_lazy(&LazyPartition::from_finitary(&a), &LazyPartition::from_finitary(&b), 1000);
        assert_eq!(fed.block_of(1).unwrap(), vec![1, -1]);
    }

    #[test]
    fn oracle_soundness_probes() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let f = random_finitary(&mut rng, 10);
        let g = random_finitary(&mut rng, 10);
        let lazies = [
            LazyPartition::from_finitary(&f),
            LazyPartition::from_finitary(&f).star(),
            compose_lazy(&LazyPartition::from_finitary(&f), &LazyPartition::from_finitary(&g), 10_000),
        ];
        for lp in &lazies {
            for _ in 0..1000 {
                let x = rng.random_range(1..=40i64);
                let p = if rng.random_bool(0.5) { x } else { -x };
                let block = lp.block_of(p).unwrap();
                assert!(block.contains(&p), "block must contain the query point");
                for &q in &block {
                    assert_eq!(lp.block_of(q).unwrap(), block, "symmetry at {q}");
                }
            }
        }
    }

    #[test]
    fn window_restriction_of_identity() {
        let id = LazyPartition::identity();
        assert_eq!(restrict_to_window(&id, 5).unwrap(), Partition::identity(5));
    }
}
