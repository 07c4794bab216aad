//! Independent reference implementations used to cross-check the main
//! engine, plus seeded random generators for the test suites.
//!
//! Everything here deliberately avoids the production code paths: the
//! composition oracle walks an explicit adjacency-list graph instead of the
//! disjoint-set merge, and the Bell numbers come from the Bell triangle
//! recurrence rather than from enumeration.

use std::collections::BTreeMap;

use rand::Rng;

use crate::partition::Partition;

/// Composition by depth-first search over the explicit three-row graph on
/// `3n` vertices.
pub fn compose_by_graph(a: &Partition, b: &Partition) -> Partition {
    assert_eq!(a.degree(), b.degree(), "degree mismatch");
    let n = a.degree() as usize;
    // vertex ids: 0..n upper, n..2n middle, 2n..3n lower
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); 3 * n];
    let connect = |ids: Vec<usize>, adj: &mut Vec<Vec<usize>>| {
        for w in ids.windows(2) {
            adj[w[0]].push(w[1]);
            adj[w[1]].push(w[0]);
        }
    };
    for block in a.blocks() {
        let ids = block
            .iter()
            .map(|&v| if v > 0 { v as usize - 1 } else { n + (-v) as usize - 1 })
            .collect();
        connect(ids, &mut adj);
    }
    for block in b.blocks() {
        let ids = block
            .iter()
            .map(|&v| if v > 0 { n + v as usize - 1 } else { 2 * n + (-v) as usize - 1 })
            .collect();
        connect(ids, &mut adj);
    }
    let mut comp = vec![usize::MAX; 3 * n];
    let mut next = 0;
    for start in 0..3 * n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = next;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if comp[w] == usize::MAX {
                    comp[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    let mut traces: BTreeMap<usize, Vec<i32>> = BTreeMap::new();
    for x in 0..n {
        traces.entry(comp[x]).or_default().push((x + 1) as i32);
    }
    for x in 0..n {
        traces.entry(comp[2 * n + x]).or_default().push(-((x + 1) as i32));
    }
    let blocks: Vec<Vec<i32>> = traces.into_values().collect();
    Partition::from_blocks(a.degree(), blocks).expect("traces cover the outer rows")
}

/// Bell numbers `B(0) ..= B(limit)` by the Bell-triangle recurrence.
pub fn bell_numbers(limit: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(limit + 1);
    let mut row: Vec<u64> = vec![1];
    out.push(1);
    for _ in 0..limit {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &v in &row {
            let last = *next.last().unwrap();
            next.push(last + v);
        }
        out.push(next[0]);
        row = next;
    }
    out
}

pub fn random_degree<R: Rng>(rng: &mut R, lo: u32, hi: u32) -> u32 {
    rng.random_range(lo..=hi)
}

/// A random partition of degree `n`, built by assigning each of the `2n`
/// points either to an existing block or to a fresh one.
pub fn random_partition<R: Rng>(rng: &mut R, n: u32) -> Partition {
    let mut blocks: Vec<Vec<i32>> = Vec::new();
    let points = (1..=n as i32).chain((1..=n as i32).map(|x| -x));
    for v in points {
        let k = blocks.len();
        let choice = rng.random_range(0..=k);
        if choice == k {
            blocks.push(vec![v]);
        } else {
            blocks[choice].push(v);
        }
    }
    Partition::from_blocks(n, blocks).expect("random blocks cover all points")
}

/// A uniformly random unit (permutation) of degree `n`.
pub fn random_unit<R: Rng>(rng: &mut R, n: u32) -> Partition {
    let mut image: Vec<i32> = (1..=n as i32).collect();
    for i in (1..image.len()).rev() {
        let j = rng.random_range(0..=i);
        image.swap(i, j);
    }
    let blocks = image
        .iter()
        .enumerate()
        .map(|(i, &y)| vec![i as i32 + 1, -y])
        .collect();
    Partition::from_blocks(n, blocks).expect("permutation blocks")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bell_triangle_values() {
        let b = bell_numbers(8);
        assert_eq!(b, vec![1, 1, 2, 5, 15, 52, 203, 877, 4140]);
    }

    #[test]
    fn graph_oracle_agrees_on_figure2() {
        let a = Partition::parse_json("[[1,2,-4],[3],[4],[5,-2],[-1],[-3,-5]]").unwrap();
        let b = Partition::parse_json("[[1,2,-2,-3],[3,5],[4],[-1,-5],[-4]]").unwrap();
        assert_eq!(compose_by_graph(&a, &b), a.compose(&b).unwrap());
    }

    #[test]
    fn oracle_vs_engine_bulk() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..500 {
            let n = random_degree(&mut rng, 1, 6);
            let a = random_partition(&mut rng, n);
            let b = random_partition(&mut rng, n);
            assert_eq!(compose_by_graph(&a, &b), a.compose(&b).unwrap());
        }
    }
}
