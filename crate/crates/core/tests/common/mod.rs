#![allow(dead_code)]

use ftreach_core::instances::{gen_random_digraph, random_pairs};
use ftreach_core::{DiGraph, Pair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn loopy() -> DiGraph {
    DiGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (2, 1)]).unwrap()
}

pub fn diamond() -> DiGraph {
    DiGraph::from_edges(4, [(0, 1), (1, 3), (0, 2), (2, 3)]).unwrap()
}

/// The shared random corpus: 200 digraphs, 4 ≤ n ≤ 10, p ∈ {0.2, 0.35}.
pub fn corpus() -> Vec<DiGraph> {
    (0..200u64)
        .map(|i| {
            let n = 4 + (i as usize % 7);
            let p = if i % 2 == 0 { 0.2 } else { 0.35 };
            gen_random_digraph(n, p, 1000 + i).unwrap()
        })
        .collect()
}

pub fn reachable_pairs(g: &DiGraph) -> Vec<Pair> {
    let mut out = Vec::new();
    for s in 0..g.n() {
        for t in 0..g.n() {
            if s != t && ftreach_core::graph::reachable_avoiding(g, s, t, &[]) {
                out.push((s, t));
            }
        }
    }
    out
}

pub fn some_pairs(g: &DiGraph, count: usize, seed: u64) -> Vec<Pair> {
    random_pairs(g.n(), count, seed)
}

/// A chain of `cuts` vertices `c_0..c_{cuts-1}` (ids `0..cuts`) joined by
/// small forward gadgets, plus random backward edges that never bypass a
/// chain vertex. Returns the graph; `0` reaches `cuts - 1`.
pub fn cut_chain(cuts: usize, back_p: f64, seed: u64) -> DiGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut index: Vec<usize> = (0..cuts).map(|i| 2 * i).collect();
    let mut gadget: Vec<Vec<usize>> = Vec::new();
    let mut edges = Vec::new();
    let mut n = cuts;
    for i in 0..cuts.saturating_sub(1) {
        let size = rng.gen_range(0..=2);
        let ids: Vec<usize> = (n..n + size).collect();
        n += size;
        index.extend(std::iter::repeat(2 * i + 1).take(size));
        if ids.is_empty() || rng.gen_bool(0.3) {
            edges.push((i, i + 1));
        }
        for &v in &ids {
            edges.push((i, v));
            edges.push((v, i + 1));
        }
        if ids.len() == 2 && rng.gen_bool(0.5) {
            edges.push((ids[0], ids[1]));
        }
        gadget.push(ids);
    }
    for u in 0..n {
        for w in 0..n {
            if u != w && (index[w] < index[u] || (index[w] == index[u] && index[u] % 2 == 1)) && rng.gen_bool(back_p) {
                edges.push((u, w));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    DiGraph::from_edges(n, edges).unwrap()
}
