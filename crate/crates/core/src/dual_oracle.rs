//! Pairwise dual-failure reachability oracle.
//!
//! A slack level serves the pairs whose four strand end segments are all hit
//! by a small vertex set `S`. A query first tries routing through the hit
//! vertices recorded for the pair (one single-root oracle into and one out of
//! each), and otherwise falls back to a small auxiliary graph built on the end
//! segments, where strand-disjoint connections of the skeleton become single
//! edges. Levels are stacked until every pair is served.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_with::serde_as;

use crate::error::{Error, Result};
use crate::graph::{reach_set, DiGraph, FailureSet, Pair, Subgraph, VertexId};
use crate::lift::{lift_oracle, LiftedStructure};
use crate::provider::{Direction, SsFtro, SsProvider};
use crate::segments::{segment_stage, PairShape, Segment, SegmentStage};
use crate::skeleton::PairSkeleton;
use crate::Words;

pub fn ceil_sqrt(x: usize) -> usize {
    let mut r = (x as f64).sqrt() as usize;
    while r * r < x {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= x {
        r -= 1;
    }
    r
}

/// Segment length `max(1, ⌈n / ⌈√p⌉⌉)` for `p` pairs.
pub fn segment_len(n: usize, p: usize) -> usize {
    let q = ceil_sqrt(p).max(1);
    n.div_ceil(q).max(1)
}

#[derive(Clone, Debug, Default)]
pub struct DualOracleConfig {
    /// Overrides the segment length on every slack level.
    pub segment_len: Option<usize>,
}

/// Auxiliary graph over a pair's end segments. Local vertex `i` is original
/// vertex `vertices[i]` for `i < vertices.len()`; higher local ids subdivide
/// auxiliary edges that would otherwise coincide with a path edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxGraph {
    pub vertices: Vec<VertexId>,
    pub local: BTreeMap<VertexId, usize>,
    pub graph: DiGraph,
    /// The first `path_edges` edges of `graph` are strand edges.
    pub path_edges: usize,
    /// Auxiliary edges by original endpoints.
    pub aux_edges: Vec<(VertexId, VertexId)>,
}

pub fn aux_graph(g: &DiGraph, sk: &PairSkeleton, len: usize) -> AuxGraph {
    let mut vertices = Vec::new();
    let mut local = BTreeMap::new();
    for seg in Segment::ALL {
        for &v in seg.of(sk, len) {
            local.entry(v).or_insert_with(|| {
                vertices.push(v);
                vertices.len() - 1
            });
        }
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut seen = BTreeSet::new();
    for seg in Segment::ALL {
        for w in seg.of(sk, len).windows(2) {
            let e = (local[&w[0]], local[&w[1]]);
            if seen.insert(e) {
                edges.push(e);
            }
        }
    }
    let path_edges = edges.len();

    let strand: BTreeSet<usize> = sk.strand_edges.iter().copied().collect();
    let (off, _) = g.filtered(|e| sk.kept.contains(e) && !strand.contains(&e));
    let mut aux_edges = Vec::new();
    let mut extra = vertices.len();
    for (lu, &u) in vertices.iter().enumerate() {
        let reach = reach_set(&off, &[u], false, |_| true, |_| true);
        for (lv, &v) in vertices.iter().enumerate() {
            if lv == lu || !reach[v] {
                continue;
            }
            aux_edges.push((u, v));
            if seen.contains(&(lu, lv)) {
                edges.push((lu, extra));
                edges.push((extra, lv));
                extra += 1;
            } else {
                edges.push((lu, lv));
            }
        }
    }
    let graph = DiGraph::from_edges(extra, edges).expect("auxiliary graph is simple");
    AuxGraph { vertices, local, graph, path_edges, aux_edges }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ServedPair {
    /// Hit vertices on the pair's full-length end segments.
    pub through: Vec<VertexId>,
    /// Segment vertices with their auxiliary-graph ids.
    pub members: BTreeMap<VertexId, usize>,
    /// Dual-failure oracle from `s` over the auxiliary graph.
    pub aux: SsFtro,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SlackEntry {
    Unreachable,
    Trivial,
    Served(ServedPair),
}

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualOracleSlack {
    pub n: usize,
    pub len: usize,
    /// For each hit vertex `v`: oracle into `v`, oracle out of `v`.
    pub through: BTreeMap<VertexId, (SsFtro, SsFtro)>,
    #[serde_as(as = "Vec<(_, _)>")]
    pub entries: BTreeMap<Pair, SlackEntry>,
    pub family_size: usize,
    pub family_hit: usize,
}

impl DualOracleSlack {
    pub fn covered(&self) -> Vec<Pair> {
        self.entries.keys().copied().collect()
    }

    pub fn query(&self, pair: Pair, f: &FailureSet) -> Result<bool> {
        f.check_budget(2)?;
        let (s, t) = pair;
        match self.entries.get(&pair).ok_or(Error::UnknownPair(pair))? {
            SlackEntry::Unreachable => Ok(false),
            SlackEntry::Trivial => Ok(true),
            SlackEntry::Served(sp) => {
                for v in &sp.through {
                    let (into, out) = &self.through[v];
                    if into.inner.reachable(s, f) && out.inner.reachable(t, f) {
                        return Ok(true);
                    }
                }
                let local = FailureSet::new(f.edges().iter().filter_map(|(x, y)| {
                    Some((*sp.members.get(x)?, *sp.members.get(y)?))
                }));
                Ok(sp.aux.inner.reachable(sp.members[&t], &local))
            }
        }
    }
}

impl Words for DualOracleSlack {
    fn words(&self) -> usize {
        let through: usize = self.through.values().map(|(a, b)| 1 + a.words() + b.words()).sum();
        let entries: usize = self
            .entries
            .values()
            .map(|e| match e {
                SlackEntry::Served(sp) => 3 + sp.through.len() + 2 * sp.members.len() + sp.aux.words(),
                _ => 3,
            })
            .sum();
        3 + through + entries
    }
}

pub fn build_dual_oracle_slack(
    g: &DiGraph,
    pairs: &[Pair],
    providers: &mut dyn SsProvider,
    cfg: &DualOracleConfig,
) -> Result<DualOracleSlack> {
    if pairs.is_empty() {
        return Err(Error::invalid("slack oracle needs at least one pair"));
    }
    let len = cfg.segment_len.unwrap_or_else(|| segment_len(g.n(), pairs.len()));
    let stage = segment_stage(g, pairs, len)?;
    slack_from_stage(g, &stage, providers)
}

fn slack_from_stage(g: &DiGraph, stage: &SegmentStage, providers: &mut dyn SsProvider) -> Result<DualOracleSlack> {
    let len = stage.len;
    let mut through = BTreeMap::new();
    for &v in stage.chosen() {
        let into = providers.ftro(g, v, Direction::ToRoot)?;
        let out = providers.ftro(g, v, Direction::FromRoot)?;
        through.insert(v, (into, out));
    }
    let chosen: BTreeSet<VertexId> = stage.chosen().iter().copied().collect();
    let mut entries = BTreeMap::new();
    for (idx, &pair) in stage.pairs.iter().enumerate() {
        if !stage.covered[idx] {
            continue;
        }
        let entry = match &stage.shapes[idx] {
            PairShape::Unreachable => SlackEntry::Unreachable,
            PairShape::Trivial => SlackEntry::Trivial,
            PairShape::Strands(sk) => {
                let mut hit_on = Vec::new();
                for &(owner, seg) in &stage.family {
                    if owner == idx {
                        let v = *seg.of(sk, len).iter().find(|v| chosen.contains(v)).expect("covered segment is hit");
                        hit_on.push(v);
                    }
                }
                let a = aux_graph(g, sk, len);
                let aux = providers.ftro(&a.graph, a.local[&pair.0], Direction::FromRoot)?;
                SlackEntry::Served(ServedPair { through: hit_on, members: a.local, aux })
            }
        };
        entries.insert(pair, entry);
    }
    Ok(DualOracleSlack {
        n: g.n(),
        len,
        through,
        entries,
        family_size: stage.family.len(),
        family_hit: stage.hit.hit_count(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseEntry {
    Unreachable,
    Skeleton(Subgraph),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualOracle {
    pub n: usize,
    pub lifted: LiftedStructure<DualOracleSlack, BaseEntry>,
}

impl DualOracle {
    pub fn query(&self, pair: Pair, f: &FailureSet) -> Result<bool> {
        f.check_budget(2)?;
        let (s, t) = pair;
        for v in [s, t] {
            if v >= self.n {
                return Err(Error::UnknownVertex { vertex: v, n: self.n });
            }
        }
        self.lifted.query(
            pair,
            |slack| slack.query(pair, f),
            |base| {
                Ok(match base {
                    BaseEntry::Unreachable => false,
                    BaseEntry::Skeleton(h) => h.reachable(s, t, f),
                })
            },
        )
    }

    pub fn pairs(&self) -> Vec<Pair> {
        self.lifted.pairs().collect()
    }
}

impl Words for DualOracle {
    fn words(&self) -> usize {
        let slack: usize = self.lifted.levels.iter().map(|l| l.structure.words() + 2 * l.pairs.len()).sum();
        let base: usize = self
            .lifted
            .base
            .iter()
            .map(|(_, b)| match b {
                BaseEntry::Unreachable => 3,
                BaseEntry::Skeleton(h) => 2 + h.words(),
            })
            .sum();
        1 + slack + base + 3 * self.lifted.pair_index.len()
    }
}

pub fn base_entry(g: &DiGraph, (s, t): Pair) -> Result<BaseEntry> {
    Ok(match crate::segments::pair_shape(g, (s, t))? {
        PairShape::Unreachable => BaseEntry::Unreachable,
        PairShape::Trivial => BaseEntry::Skeleton(Subgraph::from_edge_ids(g, [])),
        PairShape::Strands(sk) => BaseEntry::Skeleton(sk.kept),
    })
}

pub fn build_dual_oracle(
    g: &DiGraph,
    pairs: &[Pair],
    providers: &mut dyn SsProvider,
    cfg: &DualOracleConfig,
) -> Result<DualOracle> {
    crate::io::check_pairs(g, pairs)?;
    let lifted = lift_oracle(
        pairs,
        |rest| {
            let slack = build_dual_oracle_slack(g, rest, providers, cfg)?;
            let covered = slack.covered();
            Ok((slack, covered))
        },
        |pair| base_entry(g, pair),
    )?;
    Ok(DualOracle { n: g.n(), lifted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::reachable_avoiding;
    use crate::provider::Baseline;
    use crate::skeleton::build_pair_skeleton;

    fn all_dual_failures(g: &DiGraph) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for a in 0..g.m() {
            out.push(vec![a]);
            for b in a + 1..g.m() {
                out.push(vec![a, b]);
            }
        }
        out
    }

    fn check_slack(g: &DiGraph, o: &DualOracleSlack) {
        for pair in o.covered() {
            for f in all_dual_failures(g) {
                let fs = FailureSet::from_ids(g, &f);
                let expect = reachable_avoiding(g, pair.0, pair.1, &f);
                assert_eq!(o.query(pair, &fs).unwrap(), expect, "pair={pair:?} F={fs:?}");
            }
        }
    }

    #[test]
    fn segment_lengths() {
        assert_eq!(segment_len(8, 4), 4);
        assert_eq!(segment_len(16, 1), 16);
        assert_eq!(segment_len(10, 5), 4);
        assert_eq!(segment_len(0, 3), 1);
        assert_eq!(ceil_sqrt(9), 3);
        assert_eq!(ceil_sqrt(10), 4);
        assert_eq!(ceil_sqrt(0), 0);
    }

    #[test]
    fn aux_graph_fixtures() {
        let g = diamond();
        let sk = build_pair_skeleton(&g, 0, 3).unwrap();
        let a = aux_graph(&g, &sk, 10);
        assert_eq!(a.vertices.len(), 4);
        assert_eq!(a.path_edges, 4);
        assert!(a.aux_edges.is_empty());

        let g = chain3();
        let sk = build_pair_skeleton(&g, 0, 2).unwrap();
        let a = aux_graph(&g, &sk, 1);
        assert_eq!(a.vertices, vec![0, 2]);
        assert_eq!((a.path_edges, a.aux_edges.len()), (0, 0));

        let g = bridged();
        let sk = build_pair_skeleton(&g, 0, 5).unwrap();
        let a = aux_graph(&g, &sk, 2);
        assert!(a.aux_edges.contains(&(1, 4)));
    }

    #[test]
    fn aux_edge_parallel_to_strand_edge_is_subdivided() {
        // 0→1 is a strand edge and also connected off-strand via 0→4→1.
        let g = DiGraph::from_edges(5, [(0, 1), (1, 3), (0, 2), (2, 3), (0, 4), (4, 1)]).unwrap();
        let sk = build_pair_skeleton(&g, 0, 3).unwrap();
        let a = aux_graph(&g, &sk, 4);
        assert!(a.aux_edges.contains(&(0, 1)));
        assert_eq!(a.graph.n(), a.vertices.len() + 1);
        let mut p = Baseline::default();
        let o = build_dual_oracle_slack(&g, &[(0, 3)], &mut p, &DualOracleConfig { segment_len: Some(4) }).unwrap();
        check_slack(&g, &o);
    }

    #[test]
    fn slack_fixtures() {
        let mut p = Baseline::default();
        let g = diamond();
        let o = build_dual_oracle_slack(&g, &[(0, 3)], &mut p, &DualOracleConfig::default()).unwrap();
        assert_eq!(o.covered(), vec![(0, 3)]);
        assert!(!o.query((0, 3), &FailureSet::new([(0, 1), (2, 3)])).unwrap());
        assert!(o.query((0, 3), &FailureSet::new([(0, 1)])).unwrap());
        check_slack(&g, &o);

        let g = chain3();
        let o = build_dual_oracle_slack(&g, &[(0, 2)], &mut p, &DualOracleConfig::default()).unwrap();
        assert!(!o.query((0, 2), &FailureSet::new([(0, 1)])).unwrap());

        let g = bridged();
        for len in 1..=4 {
            let o = build_dual_oracle_slack(&g, &[(0, 5)], &mut p, &DualOracleConfig { segment_len: Some(len) })
                .unwrap();
            check_slack(&g, &o);
        }
        let o = build_dual_oracle_slack(&g, &[(0, 5)], &mut p, &DualOracleConfig { segment_len: Some(2) }).unwrap();
        assert!(o.query((0, 5), &FailureSet::new([(1, 2), (3, 4)])).unwrap());
    }

    #[test]
    fn lifted_oracle_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let mut p = Baseline::default();
        for _ in 0..15 {
            let n = rng.gen_range(4..9);
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (0..n).map(move |v| (u, v)))
                .filter(|&(u, v)| u != v)
                .filter(|_| rng.gen_bool(0.3))
                .collect();
            let g = DiGraph::from_edges(n, edges).unwrap();
            let pairs: Vec<Pair> = (0..5).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
            for len in [None, Some(1), Some(2)] {
                let o = build_dual_oracle(&g, &pairs, &mut p, &DualOracleConfig { segment_len: len }).unwrap();
                for &pair in &pairs {
                    for f in all_dual_failures(&g) {
                        let fs = FailureSet::from_ids(&g, &f);
                        assert_eq!(o.query(pair, &fs).unwrap(), reachable_avoiding(&g, pair.0, pair.1, &f));
                    }
                }
            }
        }
    }

    #[test]
    fn unknown_pair_and_budget() {
        let mut p = Baseline::default();
        let g = diamond();
        let o = build_dual_oracle(&g, &[(0, 3)], &mut p, &DualOracleConfig::default()).unwrap();
        assert!(matches!(o.query((1, 3), &FailureSet::empty()), Err(Error::UnknownPair(_))));
        assert!(o.query((0, 3), &FailureSet::new([(0, 1), (0, 2), (1, 3)])).is_err());
        assert!(o.words() > 0);
    }
}
