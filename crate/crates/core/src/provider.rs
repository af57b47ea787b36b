//! Single-source and single-destination fault-tolerant reachability
//! structures, used as black boxes by the pairwise constructions.
//!
//! The baseline prunes the input graph greedily (highest edge id first),
//! dropping an edge whenever every failure set of size at most `k` still
//! sees the same reachability from (or to) the root. The result is
//! irredundant but not necessarily minimum.

use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{reaches, DiGraph, EdgeId, FailureSet, Subgraph, VertexId};
use crate::Words;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    /// Reachability from the root to every vertex.
    FromRoot,
    /// Reachability from every vertex to the root.
    ToRoot,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsFtrs {
    pub root: VertexId,
    pub direction: Direction,
    pub k: usize,
    /// False when the work estimate exceeded the budget and the whole graph
    /// was kept.
    pub pruned: bool,
    pub sub: Subgraph,
}

impl SsFtrs {
    /// Whether `v` and the root are connected (in the structure's direction)
    /// after removing `f`. Failures outside the kept edges are ignored.
    pub fn reachable(&self, v: VertexId, f: &FailureSet) -> bool {
        match self.direction {
            Direction::FromRoot => self.sub.reachable(self.root, v, f),
            Direction::ToRoot => self.sub.reachable(v, self.root, f),
        }
    }
}

impl Words for SsFtrs {
    fn words(&self) -> usize {
        3 + self.sub.words()
    }
}

/// Dual-failure oracle for one root, backed by a preserver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsFtro {
    pub inner: SsFtrs,
}

impl SsFtro {
    pub fn root(&self) -> VertexId {
        self.inner.root
    }

    pub fn query(&self, v: VertexId, f: &FailureSet) -> Result<bool> {
        f.check_budget(2)?;
        self.inner.sub.graph().check_vertex(v)?;
        Ok(self.inner.reachable(v, f))
    }
}

impl Words for SsFtro {
    fn words(&self) -> usize {
        self.inner.words()
    }
}

pub const DEFAULT_BUDGET: u128 = 200_000_000;

fn binomial(m: usize, k: usize) -> u128 {
    if k > m {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (m - i) as u128 / (i + 1) as u128)
}

/// Number of failure sets of size at most `k` over `m` edges.
pub fn failure_sets_up_to(m: usize, k: usize) -> u128 {
    (0..=k).map(|r| binomial(m, r)).sum()
}

pub fn ss_ftrs_baseline(g: &DiGraph, root: VertexId, k: usize, dir: Direction, budget: u128) -> Result<SsFtrs> {
    g.check_vertex(root)?;
    let estimate = (g.n() as u128)
        .saturating_mul(failure_sets_up_to(g.m(), k))
        .saturating_mul((g.n() + g.m()) as u128);
    if estimate > budget {
        return Ok(SsFtrs { root, direction: dir, k, pruned: false, sub: Subgraph::whole(g) });
    }
    // Work on a copy oriented so that the root is always the source.
    let h = match dir {
        Direction::FromRoot => g.clone(),
        Direction::ToRoot => g.reversed(),
    };
    let mut kept = vec![true; g.m()];
    for e in (0..g.m()).rev() {
        kept[e] = false;
        if !droppable(&h, root, e, k, &kept) {
            kept[e] = true;
        }
    }
    let sub = Subgraph::from_edge_ids(g, (0..g.m()).filter(|&e| kept[e]));
    Ok(SsFtrs { root, direction: dir, k, pruned: true, sub })
}

// `kept` already excludes `e`. Dropping e=(a,b) is safe under F iff, without
// e, either a is unreachable or b is still reached.
fn droppable(h: &DiGraph, root: VertexId, e: EdgeId, k: usize, kept: &[bool]) -> bool {
    let (a, b) = h.edge(e);
    let others: Vec<EdgeId> = (0..h.m()).filter(|&x| kept[x]).collect();
    for r in 0..=k.min(others.len()) {
        for f in others.iter().copied().combinations(r) {
            let ok = |x: EdgeId| kept[x] && !f.contains(&x);
            if !reaches(h, root, b, ok, |_| true) && reaches(h, root, a, ok, |_| true) {
                return false;
            }
        }
    }
    true
}

pub fn ss_ftro_baseline(g: &DiGraph, root: VertexId, dir: Direction, budget: u128) -> Result<SsFtro> {
    Ok(SsFtro { inner: ss_ftrs_baseline(g, root, 2, dir, budget)? })
}

/// Source of single-root structures for the pairwise builders.
pub trait SsProvider {
    fn name(&self) -> &'static str;
    fn ftrs(&mut self, g: &DiGraph, root: VertexId, k: usize, dir: Direction) -> Result<SsFtrs>;

    fn ftro(&mut self, g: &DiGraph, root: VertexId, dir: Direction) -> Result<SsFtro> {
        Ok(SsFtro { inner: self.ftrs(g, root, 2, dir)? })
    }
}

/// Greedy pruning with memoization across repeated requests.
#[derive(Debug)]
pub struct Baseline {
    pub budget: u128,
    cache: HashMap<(u64, usize, usize, VertexId, usize, Direction), SsFtrs>,
}

impl Baseline {
    pub fn new(budget: u128) -> Self {
        Baseline { budget, cache: HashMap::new() }
    }
}

impl Default for Baseline {
    fn default() -> Self {
        Baseline::new(DEFAULT_BUDGET)
    }
}

impl SsProvider for Baseline {
    fn name(&self) -> &'static str {
        "baseline"
    }

    fn ftrs(&mut self, g: &DiGraph, root: VertexId, k: usize, dir: Direction) -> Result<SsFtrs> {
        let key = (g.fingerprint(), g.n(), g.m(), root, k, dir);
        if let Some(hit) = self.cache.get(&key) {
            return Ok(hit.clone());
        }
        let built = ss_ftrs_baseline(g, root, k, dir, self.budget)?;
        self.cache.insert(key, built.clone());
        Ok(built)
    }
}

/// Keeps the whole graph; trivially correct, useful as a reference.
#[derive(Debug, Default)]
pub struct WholeGraph;

impl SsProvider for WholeGraph {
    fn name(&self) -> &'static str {
        "whole-graph"
    }

    fn ftrs(&mut self, g: &DiGraph, root: VertexId, k: usize, dir: Direction) -> Result<SsFtrs> {
        g.check_vertex(root)?;
        Ok(SsFtrs { root, direction: dir, k, pruned: false, sub: Subgraph::whole(g) })
    }
}

pub fn provider_by_name(name: &str) -> Result<Box<dyn SsProvider>> {
    match name {
        "baseline" => Ok(Box::new(Baseline::default())),
        "whole-graph" => Ok(Box::new(WholeGraph)),
        other => Err(Error::invalid(format!("unknown provider {other:?} (expected baseline or whole-graph)"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::reachable_avoiding;

    fn chain3_plus() -> DiGraph {
        DiGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn kept(g: &DiGraph, h: &SsFtrs) -> Vec<(usize, usize)> {
        h.sub.parent_ids().iter().map(|&e| g.edge(e)).collect()
    }

    // Exhaustive check of the single-root contract against the parent graph.
    fn assert_contract(g: &DiGraph, h: &SsFtrs) {
        for r in 0..=h.k {
            for f in (0..g.m()).combinations(r) {
                let fs = FailureSet::from_ids(g, &f);
                for v in 0..g.n() {
                    let expect = match h.direction {
                        Direction::FromRoot => reachable_avoiding(g, h.root, v, &f),
                        Direction::ToRoot => reachable_avoiding(g, v, h.root, &f),
                    };
                    assert_eq!(h.reachable(v, &fs), expect, "v={v} F={fs:?}");
                }
            }
        }
    }

    #[test]
    fn fixture_examples() {
        let g = diamond();
        let h = ss_ftrs_baseline(&g, 0, 1, Direction::FromRoot, DEFAULT_BUDGET).unwrap();
        assert_eq!(h.sub.len(), 4);
        assert!(h.pruned);

        let g = chain3_plus();
        let h = ss_ftrs_baseline(&g, 0, 1, Direction::FromRoot, DEFAULT_BUDGET).unwrap();
        assert_eq!(h.sub.len(), 3);

        // Highest id first: (0,2) goes, the chain stays.
        let h = ss_ftrs_baseline(&g, 0, 0, Direction::FromRoot, DEFAULT_BUDGET).unwrap();
        assert_eq!(kept(&g, &h), vec![(0, 1), (1, 2)]);
        assert_contract(&g, &h);
    }

    #[test]
    fn ftro_examples() {
        let o = ss_ftro_baseline(&diamond(), 0, Direction::FromRoot, DEFAULT_BUDGET).unwrap();
        assert!(o.query(3, &FailureSet::new([(0, 1)])).unwrap());
        assert!(!o.query(3, &FailureSet::new([(0, 1), (0, 2)])).unwrap());
        assert!(o.query(3, &FailureSet::new([(0, 1), (0, 2), (1, 3)])).is_err());

        let o = ss_ftro_baseline(&chain3(), 2, Direction::ToRoot, DEFAULT_BUDGET).unwrap();
        assert!(!o.query(0, &FailureSet::new([(1, 2)])).unwrap());
        assert!(o.query(0, &FailureSet::empty()).unwrap());
    }

    #[test]
    fn budget_fallback_keeps_graph() {
        let g = bridged();
        let h = ss_ftrs_baseline(&g, 0, 2, Direction::FromRoot, 10).unwrap();
        assert!(!h.pruned);
        assert_eq!(h.sub.len(), g.m());
        assert_contract(&g, &h);
    }

    #[test]
    fn random_contract() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..25 {
            let n = rng.gen_range(2..8);
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (0..n).map(move |v| (u, v)))
                .filter(|&(u, v)| u != v)
                .filter(|_| rng.gen_bool(0.35))
                .collect();
            let g = DiGraph::from_edges(n, edges).unwrap();
            for k in 0..=2 {
                for dir in [Direction::FromRoot, Direction::ToRoot] {
                    let root = rng.gen_range(0..n);
                    let h = ss_ftrs_baseline(&g, root, k, dir, DEFAULT_BUDGET).unwrap();
                    assert_contract(&g, &h);
                }
            }
        }
    }

    #[test]
    fn memoized_provider() {
        let g = diamond();
        let mut p = Baseline::default();
        let a = p.ftrs(&g, 0, 2, Direction::FromRoot).unwrap();
        let b = p.ftrs(&g, 0, 2, Direction::FromRoot).unwrap();
        assert_eq!(a, b);
        assert_eq!(p.cache.len(), 1);
        let w = WholeGraph.ftrs(&g, 3, 2, Direction::ToRoot).unwrap();
        assert_eq!(w.sub.len(), 4);
        assert!(provider_by_name("nope").is_err());
    }
}
