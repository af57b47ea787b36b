//! Pairwise dual-failure reachability preserver.
//!
//! A slack level keeps, for the pairs whose strand end segments are all hit
//! by `S`: single-root preservers into and out of every vertex of `S` (H1),
//! the end segments themselves (H2), and the essential coupling paths ending
//! in a last segment (H4). Vertices lying on too many of those coupling paths
//! are pulled into `W`, get their own single-root preservers (H3), and take
//! their paths with them.

use std::collections::{BTreeMap, BTreeSet};

use crate::dual_oracle::ceil_sqrt;
use crate::error::{Error, Result};
use crate::graph::{path_edges, DiGraph, EdgeId, Pair, Subgraph, VertexId};
use crate::lift::lift_preserver;
use crate::provider::{Direction, SsProvider};
use crate::segments::{pair_shape, segment_stage, PairShape, Segment};

/// Segment length `max(1, ⌈n^{2/3} p^{-1/3}⌉)` for `p` pairs.
pub fn preserver_segment_len(n: usize, p: usize) -> usize {
    let p = p.max(1) as f64;
    let raw = (n as f64).powf(2.0 / 3.0) / p.cbrt();
    // Guard against 2.9999999 style rounding before taking the ceiling.
    let r = raw.round();
    let len = if (raw - r).abs() < 1e-9 { r } else { raw.ceil() };
    (len as usize).max(1)
}

#[derive(Clone, Debug, Default)]
pub struct DualPreserverConfig {
    pub segment_len: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct DualPreserverBuild {
    pub len: usize,
    pub covered: Vec<Pair>,
    pub family_size: usize,
    pub chosen: Vec<VertexId>,
    /// Coupling paths collected before extraction.
    pub initial_paths: usize,
    pub threshold: usize,
    pub w: Vec<VertexId>,
    /// Highest frequency among the surviving paths.
    pub max_freq_after: usize,
    pub h1: Subgraph,
    pub h2: Subgraph,
    pub h3: Subgraph,
    pub h4: Subgraph,
    pub result: Subgraph,
}

fn through_vertices(
    g: &DiGraph,
    vs: &[VertexId],
    providers: &mut dyn SsProvider,
) -> Result<Subgraph> {
    let mut ids = Vec::new();
    for &v in vs {
        for dir in [Direction::FromRoot, Direction::ToRoot] {
            ids.extend_from_slice(providers.ftrs(g, v, 2, dir)?.sub.parent_ids());
        }
    }
    Ok(Subgraph::from_edge_ids(g, ids))
}

pub fn build_dual_preserver_slack(
    g: &DiGraph,
    pairs: &[Pair],
    providers: &mut dyn SsProvider,
    cfg: &DualPreserverConfig,
) -> Result<DualPreserverBuild> {
    if pairs.is_empty() {
        return Err(Error::invalid("slack preserver needs at least one pair"));
    }
    crate::io::check_pairs(g, pairs)?;
    let len = cfg.segment_len.unwrap_or_else(|| preserver_segment_len(g.n(), pairs.len())).max(1);
    let stage = segment_stage(g, pairs, len)?;
    let covered = stage.covered_pairs();
    let h1 = through_vertices(g, stage.chosen(), providers)?;

    let mut h2_ids: Vec<EdgeId> = Vec::new();
    let mut paths: BTreeSet<Vec<VertexId>> = BTreeSet::new();
    for (idx, shape) in stage.shapes.iter().enumerate() {
        let PairShape::Strands(sk) = shape else { continue };
        if !stage.covered[idx] {
            continue;
        }
        for seg in Segment::ALL {
            h2_ids.extend(path_edges(g, seg.of(sk, len)));
        }
        let last: BTreeSet<VertexId> =
            [1, 3].iter().flat_map(|&k| Segment::ALL[k].of(sk, len).iter().copied()).collect();
        for key in &sk.essential {
            let rec = &sk.couplings[key];
            if rec.path.len() > 1 && last.contains(&key.0) {
                paths.insert(rec.path.clone());
            }
        }
    }
    let h2 = Subgraph::from_edge_ids(g, h2_ids);

    let initial_paths = paths.len();
    let threshold = ceil_sqrt(len * covered.len()).max(1);
    let mut freq: BTreeMap<VertexId, usize> = BTreeMap::new();
    for p in &paths {
        for &v in p {
            *freq.entry(v).or_default() += 1;
        }
    }
    let mut w = Vec::new();
    while let Some((&v, _)) = freq.iter().find(|(_, &c)| c >= threshold) {
        w.push(v);
        let (gone, kept): (BTreeSet<_>, BTreeSet<_>) = std::mem::take(&mut paths).into_iter().partition(|p| p.contains(&v));
        paths = kept;
        for p in &gone {
            for u in p {
                let c = freq.get_mut(u).expect("counted");
                *c -= 1;
                if *c == 0 {
                    freq.remove(u);
                }
            }
        }
    }
    let max_freq_after = freq.values().copied().max().unwrap_or(0);
    let h3 = through_vertices(g, &w, providers)?;
    let h4 = Subgraph::from_edge_ids(g, paths.iter().flat_map(|p| path_edges(g, p)));

    let result = Subgraph::from_edge_ids(
        g,
        [&h1, &h2, &h3, &h4].iter().flat_map(|h| h.parent_ids().iter().copied()),
    );
    Ok(DualPreserverBuild {
        len,
        covered,
        family_size: stage.family.len(),
        chosen: stage.chosen().to_vec(),
        initial_paths,
        threshold,
        w,
        max_freq_after,
        h1,
        h2,
        h3,
        h4,
        result,
    })
}

pub fn pair_base(g: &DiGraph, pair: Pair) -> Result<Subgraph> {
    Ok(match pair_shape(g, pair)? {
        PairShape::Strands(sk) => sk.kept,
        PairShape::Unreachable | PairShape::Trivial => Subgraph::from_edge_ids(g, []),
    })
}

pub fn build_dual_preserver(
    g: &DiGraph,
    pairs: &[Pair],
    providers: &mut dyn SsProvider,
    cfg: &DualPreserverConfig,
) -> Result<Subgraph> {
    crate::io::check_pairs(g, pairs)?;
    lift_preserver(
        g,
        pairs,
        |rest| {
            let b = build_dual_preserver_slack(g, rest, providers, cfg)?;
            Ok((b.result, b.covered))
        },
        |pair| pair_base(g, pair),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::{reachable_avoiding, FailureSet};
    use crate::provider::Baseline;

    fn assert_dual(g: &DiGraph, h: &Subgraph, pairs: &[Pair]) {
        let m = g.m();
        for a in 0..m {
            for b in a..m {
                let f = FailureSet::from_ids(g, &[a, b]);
                for &(s, t) in pairs {
                    assert_eq!(h.reachable(s, t, &f), reachable_avoiding(g, s, t, &[a, b]), "({s},{t}) F={f:?}");
                }
            }
        }
    }

    #[test]
    fn segment_len_formula() {
        assert_eq!(preserver_segment_len(8, 1), 4);
        assert_eq!(preserver_segment_len(27, 27), 3);
        assert_eq!(preserver_segment_len(1, 100), 1);
    }

    #[test]
    fn diamond_slack() {
        let g = diamond();
        let b = build_dual_preserver_slack(&g, &[(0, 3)], &mut Baseline::default(), &Default::default()).unwrap();
        assert_eq!(b.covered, vec![(0, 3)]);
        assert_eq!(b.result.len(), 4);
    }

    #[test]
    fn chain_slack() {
        let g = chain3();
        let b = build_dual_preserver_slack(&g, &[(0, 2)], &mut Baseline::default(), &Default::default()).unwrap();
        assert_eq!(b.covered, vec![(0, 2)]);
        assert_eq!(b.result.len(), 2);
    }

    #[test]
    fn single_pair_is_skeleton() {
        let g = bridged();
        let h = build_dual_preserver(&g, &[(0, 5)], &mut Baseline::default(), &Default::default()).unwrap();
        assert_eq!(h, pair_base(&g, (0, 5)).unwrap());
        assert!(build_dual_preserver(&g, &[], &mut Baseline::default(), &Default::default()).unwrap().is_empty());
    }

    #[test]
    fn random_lifted_exhaustive() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut prov = Baseline::default();
        for round in 0..25 {
            let n = rng.gen_range(4..11);
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (0..n).map(move |v| (u, v)))
                .filter(|&(u, v)| u != v)
                .filter(|_| rng.gen_bool(0.3))
                .collect();
            let g = DiGraph::from_edges(n, edges).unwrap();
            let pairs: Vec<Pair> = (0..5).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
            let cfg = DualPreserverConfig { segment_len: (round % 2 == 0).then_some(2) };
            let h = build_dual_preserver(&g, &pairs, &mut prov, &cfg).unwrap();
            assert_dual(&g, &h, &pairs);
            let b = build_dual_preserver_slack(&g, &pairs, &mut prov, &cfg).unwrap();
            assert_dual(&g, &b.result, &b.covered);
            assert!(b.max_freq_after < b.threshold);
        }
    }
}
