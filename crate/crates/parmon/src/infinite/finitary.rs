//! Partitions of ℕ ∪ ℕ' that equal the identity outside a finite warp set.
//!
//! The representation is a sorted warp window plus a finite core partition
//! over the re-indexed window.  Construction normalizes the window to the
//! true warp set, so equality is structural.

use crate::cardinal::Cardinal;
use crate::partition::{Partition, PartitionError};

use super::{InfiniteError, LazyPartition};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinitaryPartition {
    /// Strictly increasing; after normalization exactly the warp set.
    window: Vec<u64>,
    /// Partition of the window, re-indexed order-preservingly to 1..=|window|.
    core: Partition,
}

impl FinitaryPartition {
    pub fn identity() -> Self {
        FinitaryPartition { window: Vec::new(), core: Partition::identity(0) }
    }

    /// Reads a finite partition of degree `n` as the finitary partition that
    /// agrees with it on `{1..n}` and is the identity beyond.
    pub fn from_finite(p: &Partition) -> Self {
        let window: Vec<u64> = (1..=p.degree() as u64).collect();
        Self::from_window(&window, p).expect("window matches the degree")
    }

    /// Places `core` on the given strictly increasing window.
    pub fn from_window(window: &[u64], core: &Partition) -> Result<Self, InfiniteError> {
        if window.len() != core.degree() as usize {
            return Err(PartitionError::DegreeMismatch {
                left: window.len() as u32,
                right: core.degree(),
            }
            .into());
        }
        for w in window.windows(2) {
            if w[0] >= w[1] {
                return Err(PartitionError::Literal("window must be strictly increasing".into()).into());
            }
        }
        if window.first().is_some_and(|&w| w == 0) {
            return Err(InfiniteError::ZeroPoint);
        }
        Ok(Self::normalized(window.to_vec(), core.clone()))
    }

    /// Drops identity pairs `{x, x'}` from the window.
    fn normalized(window: Vec<u64>, core: Partition) -> Self {
        let keep: Vec<bool> = (1..=core.degree() as i32)
            .map(|x| {
                let b = core.block_of(x).expect("in range");
                !(b.len() == 2 && b.contains(&-x))
            })
            .collect();
        if keep.iter().all(|&k| k) {
            return FinitaryPartition { window, core };
        }
        let mut new_index = vec![0i32; core.degree() as usize];
        let mut new_window = Vec::new();
        for (i, (&kept, &label)) in keep.iter().zip(&window).enumerate() {
            if kept {
                new_window.push(label);
                new_index[i] = new_window.len() as i32;
            }
        }
        let blocks: Vec<Vec<i32>> = core
            .blocks()
            .iter()
            .filter(|b| b.iter().any(|&v| keep[v.unsigned_abs() as usize - 1]))
            .map(|b| {
                b.iter()
                    .map(|&v| new_index[v.unsigned_abs() as usize - 1] * v.signum())
                    .collect()
            })
            .collect();
        let core = Partition::from_blocks(new_window.len() as u32, blocks)
            .expect("dropped blocks were exactly the identity pairs");
        FinitaryPartition { window: new_window, core }
    }

    /// The warp set.
    pub fn warp(&self) -> &[u64] {
        &self.window
    }

    pub fn core(&self) -> &Partition {
        &self.core
    }

    pub fn is_identity(&self) -> bool {
        self.window.is_empty()
    }

    pub fn is_finitary(&self) -> bool {
        true
    }

    /// Core blocks written with their original ℕ labels.
    pub fn blocks_with_labels(&self) -> Vec<Vec<i64>> {
        self.core
            .blocks()
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&v| {
                        let label = self.window[v.unsigned_abs() as usize - 1] as i64;
                        label * v.signum() as i64
                    })
                    .collect()
            })
            .collect()
    }

    /// The full block of a signed point of ℕ ∪ ℕ'.
    pub fn block_of(&self, point: i64) -> Result<Vec<i64>, InfiniteError> {
        if point == 0 {
            return Err(InfiniteError::ZeroPoint);
        }
        let x = point.unsigned_abs();
        match self.window.binary_search(&x) {
            Ok(i) => {
                let idx = (i + 1) as i32;
                let core_point = if point > 0 { idx } else { -idx };
                let block = self.core.block_of(core_point).expect("window point");
                let mut out: Vec<i64> = block
                    .iter()
                    .map(|&v| {
                        let label = self.window[v.unsigned_abs() as usize - 1] as i64;
                        label * v.signum() as i64
                    })
                    .collect();
                sort_signed(&mut out);
                Ok(out)
            }
            Err(_) => Ok(vec![x as i64, -(x as i64)]),
        }
    }

    /// Embeds into a plain finite partition of the given degree.
    pub fn embed(&self, degree: u32) -> Result<Partition, InfiniteError> {
        if let Some(&max) = self.window.last() {
            if max > degree as u64 {
                return Err(InfiniteError::WindowTooSmall { window: degree, point: max });
            }
        }
        let mut blocks: Vec<Vec<i32>> = self
            .blocks_with_labels()
            .iter()
            .map(|b| b.iter().map(|&v| v as i32).collect())
            .collect();
        for x in 1..=degree as u64 {
            if self.window.binary_search(&x).is_err() {
                blocks.push(vec![x as i32, -(x as i32)]);
            }
        }
        Ok(Partition::from_blocks(degree, blocks)?)
    }

    pub fn star(&self) -> FinitaryPartition {
        FinitaryPartition { window: self.window.clone(), core: self.core.star() }
    }

    pub fn is_unit(&self) -> bool {
        self.core.is_unit()
    }

    pub fn in_l(&self) -> bool {
        self.core.in_l()
    }

    pub fn in_r(&self) -> bool {
        self.core.in_r()
    }

    /// Identity blocks contribute nothing to the singularity.
    pub fn singularity(&self) -> u64 {
        self.core.singularity()
    }

    pub fn cosingularity(&self) -> u64 {
        self.core.cosingularity()
    }

    /// Identity blocks have meeting upper and lower parts, so the shift is
    /// carried entirely by the core.
    pub fn shift(&self) -> u64 {
        self.core.shift()
    }

    /// `k(α,μ)`; the cofinite identity part makes this `ℵ0` for `μ ≤ 1`.
    pub fn param_k(&self, mu: &Cardinal) -> Cardinal {
        if *mu <= Cardinal::Finite(1) {
            Cardinal::ALEPH0
        } else {
            Cardinal::Finite(self.core.param_k(mu))
        }
    }

    pub fn param_kstar(&self, mu: &Cardinal) -> Cardinal {
        if *mu <= Cardinal::Finite(1) {
            Cardinal::ALEPH0
        } else {
            Cardinal::Finite(self.core.param_kstar(mu))
        }
    }

    pub fn param_d(&self, mu: &Cardinal) -> Cardinal {
        Cardinal::Finite(self.core.param_d(mu))
    }

    pub fn param_dstar(&self, mu: &Cardinal) -> Cardinal {
        Cardinal::Finite(self.core.param_dstar(mu))
    }

    /// Restriction to `{±1..±w}` as a finite partition.
    pub fn restrict_to_window(&self, window: u32) -> Partition {
        let lazy = LazyPartition::from_finitary(self);
        super::restrict_to_window(&lazy, window).expect("finitary oracles are total")
    }
}

pub(super) fn sort_signed(block: &mut [i64]) {
    block.sort_by_key(|&v| (v.unsigned_abs(), v < 0));
}

/// Exact composition: outside `warp(a) ∪ warp(b)` both factors act as the
/// identity, so the product graph restricts to the union window.
pub fn compose_finitary(a: &FinitaryPartition, b: &FinitaryPartition) -> FinitaryPartition {
    let mut window: Vec<u64> = a.window.iter().chain(b.window.iter()).copied().collect();
    window.sort_unstable();
    window.dedup();
    let lift = |f: &FinitaryPartition| -> Partition {
        let blocks: Vec<Vec<i32>> = f
            .blocks_with_labels()
            .iter()
            .map(|block| {
                block
                    .iter()
                    .map(|&v| {
                        let idx =
                            window.binary_search(&v.unsigned_abs()).expect("window covers warp") as i32 + 1;
                        idx * v.signum() as i32
                    })
                    .collect()
            })
            .chain(window.iter().enumerate().filter_map(|(i, label)| {
                if f.window.binary_search(label).is_err() {
                    let idx = i as i32 + 1;
                    Some(vec![idx, -idx])
                } else {
                    None
                }
            }))
            .collect();
        Partition::from_blocks(window.len() as u32, blocks).expect("lifted blocks cover the window")
    };
    let product = lift(a).compose(&lift(b)).expect("common degree");
    FinitaryPartition::normalized(window, product)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn figure1_finitary() -> FinitaryPartition {
        FinitaryPartition::from_finite(
            &Partition::parse_json("[[1,3,-4],[2,4],[5,6,-1,-6],[-2,-3],[-5]]").unwrap(),
        )
    }

    pub(crate) fn random_finitary<R: Rng>(rng: &mut R, max_warp: u64) -> FinitaryPartition {
        let n = rng.random_range(1..=max_warp) as u32;
        FinitaryPartition::from_finite(&oracle::random_partition(rng, n))
    }

    #[test]
    fn normalization_finds_the_true_warp() {
        // {1,1'} is an identity pair; {2,3,2',3'} is not
        let p = Partition::parse_json("[[1,-1],[2,3,-2,-3]]").unwrap();
        let f = FinitaryPartition::from_finite(&p);
        assert_eq!(f.warp(), &[2, 3]);
        assert_eq!(f.core().degree(), 2);
        assert!(FinitaryPartition::from_finite(&Partition::identity(5)).is_identity());
    }

    #[test]
    fn block_of_reads_identity_outside_warp() {
        let f = figure1_finitary();
        assert_eq!(f.block_of(7).unwrap(), vec![7, -7]);
        assert_eq!(f.block_of(-100).unwrap(), vec![100, -100]);
        assert_eq!(f.block_of(1).unwrap(), vec![1, 3, -4]);
        assert_eq!(f.block_of(-1).unwrap(), vec![-1, 5, 6, -6]);
        assert!(f.block_of(0).is_err());
    }

    #[test]
    fn compose_with_identity() {
        let f = figure1_finitary();
        let id = FinitaryPartition::identity();
        assert_eq!(compose_finitary(&f, &id), f);
        assert_eq!(compose_finitary(&id, &f), f);
    }

    #[test]
    fn figure2_pattern_composes_on_shifted_window() {
        let a = Partition::parse_json("[[1,2,-4],[3],[4],[5,-2],[-1],[-3,-5]]").unwrap();
        let b = Partition::parse_json("[[1,2,-2,-3],[3,5],[4],[-1,-5],[-4]]").unwrap();
        let expected = a.compose(&b).unwrap();
        // place the same pattern on the window {11..15}
        let window: Vec<u64> = (11..=15).collect();
        let fa = FinitaryPartition::from_window(&window, &a).unwrap();
        let fb = FinitaryPartition::from_window(&window, &b).unwrap();
        let prod = compose_finitary(&fa, &fb);
        assert_eq!(prod, FinitaryPartition::from_window(&window, &expected).unwrap());
    }

    #[test]
    fn composition_matches_window_restricted_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..300 {
            let a = random_finitary(&mut rng, 8);
            let b = random_finitary(&mut rng, 8);
            let m = 10u32;
            let prod = compose_finitary(&a, &b);
            let direct = oracle::compose_by_graph(&a.embed(m).unwrap(), &b.embed(m).unwrap());
            assert_eq!(prod.embed(m).unwrap(), direct);
        }
    }

    #[test]
    fn sandwich_identities_hold_for_finitary_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..200 {
            let a = random_finitary(&mut rng, 8);
            let s = a.star();
            let asa = compose_finitary(&compose_finitary(&a, &s), &a);
            assert_eq!(asa, a);
            let sas = compose_finitary(&compose_finitary(&s, &a), &s);
            assert_eq!(sas, s);
        }
    }

    #[test]
    fn warp_of_product_is_contained_in_union() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..500 {
            let a = random_finitary(&mut rng, 9);
            let b = random_finitary(&mut rng, 9);
            let prod = compose_finitary(&a, &b);
            for w in prod.warp() {
                assert!(a.warp().contains(w) || b.warp().contains(w));
            }
        }
    }

    #[test]
    fn parameters_of_the_embedded_figure1() {
        let f = figure1_finitary();
        let two = Cardinal::Finite(2);
        assert_eq!(f.param_k(&two), Cardinal::Finite(2));
        assert_eq!(f.param_kstar(&two), Cardinal::Finite(1));
        assert_eq!(f.param_d(&two), Cardinal::Finite(1));
        assert_eq!(f.param_dstar(&two), Cardinal::Finite(1));
        assert_eq!(f.param_k(&Cardinal::Finite(1)), Cardinal::ALEPH0);
        assert_eq!(f.singularity(), 4);
        assert_eq!(f.cosingularity(), 4);
        assert_eq!(f.shift(), 1);
    }
}
