//! Randomized k-failure reachability preserver for many pairs.
//!
//! Pairs whose surviving route is long are caught by a random vertex sample
//! `W` (each sampled vertex brings single-root preservers into and out of
//! it). Pairs that keep a short route get explicit replacement paths: for
//! every failure set in a small, deterministically enumerated family with a
//! short surviving route, both disjoint replacement paths are kept.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{path_edges, reachable_avoiding, shortest_path, DiGraph, EdgeId, FailureSet, Pair, Subgraph, VertexId};
use crate::provider::{Direction, SsProvider};
use crate::strands::strands_avoiding;

pub const DEFAULT_SAMPLE_C: f64 = 4.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KFtrsParams {
    pub k: usize,
    pub ell: usize,
    pub c: f64,
    pub seed: u64,
}

/// `⌈(k·2^k·n²/p·ln n)^{1/(k+1)}⌉`, at least 1.
pub fn default_ell(n: usize, p: usize, k: usize) -> usize {
    let n = n as f64;
    let base = k as f64 * 2f64.powi(k as i32) * n * n / p.max(1) as f64 * n.ln();
    if base <= 1.0 {
        return 1;
    }
    (base.powf(1.0 / (k as f64 + 1.0)).ceil() as usize).max(1)
}

/// `min(n, ⌈c·k·(n/ℓ)·ln n⌉)`.
pub fn sample_size(n: usize, k: usize, ell: usize, c: f64) -> usize {
    if n == 0 {
        return 0;
    }
    let raw = (c * k as f64 * n as f64 / ell as f64 * (n as f64).ln()).ceil();
    if raw.is_nan() || raw <= 0.0 {
        0
    } else {
        (raw as usize).min(n)
    }
}

impl KFtrsParams {
    pub fn with_defaults(g: &DiGraph, pairs: usize, k: usize, seed: u64) -> Self {
        KFtrsParams { k, ell: default_ell(g.n(), pairs, k), c: DEFAULT_SAMPLE_C, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if self.ell == 0 {
            return Err(Error::invalid("ell must be at least 1"));
        }
        if !(self.c.is_finite() && self.c >= 0.0) {
            return Err(Error::invalid(format!("sampling constant {} must be finite and non-negative", self.c)));
        }
        Ok(())
    }
}

/// Failure sets (sorted edge ids) of one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailureFamily {
    pub r: usize,
    pub sets: Vec<Vec<EdgeId>>,
}

fn distance(g: &DiGraph, s: VertexId, t: VertexId, blocked: &[EdgeId]) -> Option<Vec<EdgeId>> {
    shortest_path(g, s, t, |e| !blocked.contains(&e))
}

/// Levels `B_0..=B_{k-1}`: sets whose removal leaves an s→t route of at most
/// `ell` edges, grown by branching on one fixed shortest path.
pub fn short_failure_levels(g: &DiGraph, (s, t): Pair, k: usize, ell: usize) -> Result<Vec<FailureFamily>> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let short = |f: &[EdgeId]| distance(g, s, t, f).filter(|p| p.len() <= ell);
    let mut levels = vec![FailureFamily { r: 0, sets: if short(&[]).is_some() { vec![vec![]] } else { vec![] } }];
    for r in 1..k {
        let mut next = BTreeSet::new();
        for f in &levels[r - 1].sets {
            let path = short(f).expect("family members keep a short route");
            for e in path {
                let mut grown = f.clone();
                grown.push(e);
                grown.sort_unstable();
                if short(&grown).is_some() {
                    next.insert(grown);
                }
            }
        }
        levels.push(FailureFamily { r, sets: next.into_iter().collect() });
    }
    Ok(levels)
}

/// Two s→t paths in `g − f` sharing only the cut edges of `g − f`.
pub fn disjoint_paths_after(g: &DiGraph, f: &FailureSet, s: VertexId, t: VertexId) -> Result<(Vec<VertexId>, Vec<VertexId>)> {
    let blocked = f.resolve(g)?;
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if !reachable_avoiding(g, s, t, &blocked) {
        return Err(Error::Unreachable((s, t)));
    }
    let sp = strands_avoiding(g, s, t, &blocked)?;
    Ok((sp.p1, sp.p2))
}

/// Members of every level whose shorter replacement path has at most `ell`
/// edges.
pub fn enumerate_short_failure_sets(g: &DiGraph, pair: Pair, k: usize, ell: usize) -> Result<Vec<FailureFamily>> {
    let levels = short_failure_levels(g, pair, k, ell)?;
    Ok(levels
        .into_iter()
        .map(|lvl| {
            let sets = lvl
                .sets
                .into_iter()
                .filter(|f| {
                    let sp = strands_avoiding(g, pair.0, pair.1, f).expect("short route exists");
                    sp.p1.len().min(sp.p2.len()) - 1 <= ell
                })
                .collect();
            FailureFamily { r: lvl.r, sets }
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct KFtrsBuild {
    pub params: KFtrsParams,
    pub w: Vec<VertexId>,
    /// Largest last-level family size over all pairs.
    pub max_last_level: usize,
    /// Failure sets that contributed replacement paths.
    pub replacement_sets: usize,
    pub sampled: Subgraph,
    pub result: Subgraph,
}

pub fn build_k_ftrs_report(
    g: &DiGraph,
    pairs: &[Pair],
    params: &KFtrsParams,
    providers: &mut dyn SsProvider,
) -> Result<KFtrsBuild> {
    params.validate()?;
    crate::io::check_pairs(g, pairs)?;
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let size = sample_size(n, params.k, params.ell, params.c);
    let mut w: Vec<VertexId> = sample(&mut rng, n, size).into_vec();
    w.sort_unstable();

    let mut ids: Vec<EdgeId> = Vec::new();
    for &v in &w {
        for dir in [Direction::FromRoot, Direction::ToRoot] {
            ids.extend_from_slice(providers.ftrs(g, v, params.k, dir)?.sub.parent_ids());
        }
    }
    let sampled = Subgraph::from_edge_ids(g, ids.iter().copied());

    let mut max_last_level = 0;
    let mut replacement_sets = 0;
    let distinct: BTreeSet<Pair> = pairs.iter().copied().collect();
    for &(s, t) in &distinct {
        if s == t {
            continue;
        }
        let levels = short_failure_levels(g, (s, t), params.k, params.ell)?;
        max_last_level = max_last_level.max(levels.last().map_or(0, |l| l.sets.len()));
        for f in levels.iter().flat_map(|l| &l.sets) {
            let sp = strands_avoiding(g, s, t, f)?;
            if sp.p1.len().min(sp.p2.len()) - 1 <= params.ell {
                replacement_sets += 1;
                ids.extend(path_edges(g, &sp.p1));
                ids.extend(path_edges(g, &sp.p2));
            }
        }
    }
    let result = Subgraph::from_edge_ids(g, ids);
    Ok(KFtrsBuild { params: params.clone(), w, max_last_level, replacement_sets, sampled, result })
}

pub fn build_k_ftrs(g: &DiGraph, pairs: &[Pair], params: &KFtrsParams, providers: &mut dyn SsProvider) -> Result<Subgraph> {
    Ok(build_k_ftrs_report(g, pairs, params, providers)?.result)
}
