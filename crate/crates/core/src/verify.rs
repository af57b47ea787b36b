//! Brute-force ground truth and exhaustive (or seeded sampled) checkers for
//! preservers and oracles.

use std::fmt;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{reaches, DiGraph, EdgeId, FailureSet, Pair, Subgraph, VertexId};
use crate::io::check_pairs;
use crate::provider::failure_sets_up_to;

pub const DEFAULT_CHECK_BUDGET: u128 = 10_000_000;

/// `FTREACH_BUDGET` if set and valid, else [`DEFAULT_CHECK_BUDGET`].
pub fn default_budget() -> u128 {
    std::env::var("FTREACH_BUDGET").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_CHECK_BUDGET)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampling {
    pub count: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    /// Most failure sets enumerated exhaustively.
    pub budget: u128,
    /// Fallback when the budget is exceeded; without it the check errors.
    pub sampling: Option<Sampling>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { budget: default_budget(), sampling: None }
    }
}

impl CheckOptions {
    pub fn exhaustive() -> Self {
        CheckOptions::default()
    }

    /// Always samples `count` failure sets.
    pub fn sampled(count: usize, seed: u64) -> Self {
        CheckOptions { budget: 0, sampling: Some(Sampling { count, seed }) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Edge,
    Vertex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    Edges(FailureSet),
    Vertices(Vec<VertexId>),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Edges(fs) => {
                write!(f, "F")?;
                for (u, v) in fs.edges() {
                    write!(f, " {u} {v}")?;
                }
                Ok(())
            }
            Failure::Vertices(vs) => {
                write!(f, "V")?;
                for v in vs {
                    write!(f, " {v}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub pair: Pair,
    pub failure: Failure,
    pub expected: bool,
    pub got: bool,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pair {} {} {} expected {} got {}", self.pair.0, self.pair.1, self.failure, self.expected, self.got)
    }
}

#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub total_queries: u64,
    pub failure_sets: u64,
    pub sampled: bool,
    pub mismatches: Vec<Mismatch>,
    pub elapsed: Duration,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Ground truth: s reaches t once the failure is applied. A failed vertex
/// that is an endpoint disconnects the pair.
pub fn brute_reachable(g: &DiGraph, (s, t): Pair, failure: &Failure) -> Result<bool> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    Ok(match failure {
        Failure::Edges(fs) => {
            let blocked = fs.resolve_present(g);
            reaches(g, s, t, |e| !blocked.contains(&e), |_| true)
        }
        Failure::Vertices(vs) => {
            for &v in vs {
                g.check_vertex(v)?;
            }
            !vs.contains(&s) && !vs.contains(&t) && reaches(g, s, t, |_| true, |v| !vs.contains(&v))
        }
    })
}

fn universe(g: &DiGraph, mode: Mode) -> usize {
    match mode {
        Mode::Edge => g.m(),
        Mode::Vertex => g.n(),
    }
}

fn make_failure(g: &DiGraph, mode: Mode, ids: &[usize]) -> Failure {
    match mode {
        Mode::Edge => Failure::Edges(FailureSet::from_ids(g, ids)),
        Mode::Vertex => Failure::Vertices(ids.to_vec()),
    }
}

/// Calls `visit` on every failure set of size at most `k` (lexicographic by
/// sorted ids, smaller sets first) or on a seeded sample.
fn for_each_failure(
    g: &DiGraph,
    mode: Mode,
    k: usize,
    opts: &CheckOptions,
    mut visit: impl FnMut(&Failure) -> Result<()>,
) -> Result<(u64, bool)> {
    let m = universe(g, mode);
    let needed = failure_sets_up_to(m, k);
    if needed <= opts.budget {
        let mut count = 0;
        for r in 0..=k.min(m) {
            for ids in (0..m).combinations(r) {
                visit(&make_failure(g, mode, &ids))?;
                count += 1;
            }
        }
        return Ok((count, false));
    }
    let Some(Sampling { count, seed }) = opts.sampling else {
        return Err(Error::BudgetExceeded { needed, budget: opts.budget });
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = k.min(m);
    for _ in 0..count {
        let r = if top == 0 { 0 } else { rng.gen_range(1..=top) };
        let mut ids = sample(&mut rng, m, r).into_vec();
        ids.sort_unstable();
        visit(&make_failure(g, mode, &ids))?;
    }
    Ok((count as u64, true))
}

/// Compares `answer` against brute force for every pair and failure set.
pub fn check_oracle(
    g: &DiGraph,
    pairs: &[Pair],
    mode: Mode,
    k: usize,
    opts: &CheckOptions,
    mut answer: impl FnMut(Pair, &Failure) -> Result<bool>,
) -> Result<CheckReport> {
    check_pairs(g, pairs)?;
    let start = Instant::now();
    let mut report = CheckReport::default();
    let (sets, sampled) = for_each_failure(g, mode, k, opts, |failure| {
        for &pair in pairs {
            let expected = brute_reachable(g, pair, failure)?;
            let got = answer(pair, failure)?;
            report.total_queries += 1;
            if expected != got {
                report.mismatches.push(Mismatch { pair, failure: failure.clone(), expected, got });
            }
        }
        Ok(())
    })?;
    report.failure_sets = sets;
    report.sampled = sampled;
    report.elapsed = start.elapsed();
    Ok(report)
}

fn check_subgraph_of(g: &DiGraph, h: &Subgraph) -> Result<()> {
    if h.graph().n() != g.n() {
        return Err(Error::invalid(format!("subgraph has {} vertices, graph has {}", h.graph().n(), g.n())));
    }
    for &e in h.graph().edges() {
        g.check_edge(e)?;
    }
    Ok(())
}

/// Whether `h` preserves every pair's reachability under all failure sets of
/// at most `k` edges of `g`.
pub fn is_k_ftrs_with(g: &DiGraph, h: &Subgraph, pairs: &[Pair], k: usize, opts: &CheckOptions) -> Result<CheckReport> {
    check_subgraph_of(g, h)?;
    check_oracle(g, pairs, Mode::Edge, k, opts, |(s, t), failure| match failure {
        Failure::Edges(fs) => Ok(h.reachable(s, t, fs)),
        Failure::Vertices(_) => unreachable!("edge mode"),
    })
}

pub fn is_k_ftrs(g: &DiGraph, h: &Subgraph, pairs: &[Pair], k: usize) -> Result<CheckReport> {
    is_k_ftrs_with(g, h, pairs, k, &CheckOptions::default())
}

/// Edge ids of `g` missing from `h`.
pub fn missing_edges(g: &DiGraph, h: &Subgraph) -> Vec<EdgeId> {
    (0..g.m()).filter(|&e| h.graph().edge_id(g.edge(e).0, g.edge(e).1).is_none()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::reachable_avoiding;
    use proptest::prelude::*;

    #[test]
    fn identity_passes() {
        let g = diamond();
        let r = is_k_ftrs(&g, &Subgraph::whole(&g), &[(0, 3), (3, 0)], 2).unwrap();
        assert!(r.passed());
        assert_eq!(r.failure_sets, 11);
        assert_eq!(r.total_queries, 22);
        assert!(is_k_ftrs(&chain3(), &Subgraph::whole(&chain3()), &[(0, 2)], 2).unwrap().passed());
    }

    #[test]
    fn diamond_missing_edge() {
        let g = diamond();
        let drop = g.edge_id(2, 3).unwrap();
        let h = Subgraph::from_edge_ids(&g, (0..g.m()).filter(|&e| e != drop));
        let r = is_k_ftrs(&g, &h, &[(0, 3)], 1).unwrap();
        assert_eq!(r.mismatches.len(), 2);
        let m = &r.mismatches[1];
        assert_eq!(m.failure, Failure::Edges(FailureSet::new([(1, 3)])));
        assert_eq!(m.to_string(), "pair 0 3 F 1 3 expected true got false");
        assert_eq!(missing_edges(&g, &h), vec![drop]);
    }

    #[test]
    fn budget_and_sampling() {
        let g = diamond();
        let tight = CheckOptions { budget: 3, sampling: None };
        assert!(matches!(
            is_k_ftrs_with(&g, &Subgraph::whole(&g), &[(0, 3)], 2, &tight),
            Err(Error::BudgetExceeded { needed: 11, budget: 3 })
        ));
        let r = is_k_ftrs_with(&g, &Subgraph::whole(&g), &[(0, 3)], 2, &CheckOptions::sampled(50, 1)).unwrap();
        assert!(r.sampled && r.passed());
        assert_eq!(r.failure_sets, 50);
    }

    #[test]
    fn vertex_mode() {
        let g = loopy();
        let r = check_oracle(&g, &[(0, 3)], Mode::Vertex, 1, &CheckOptions::default(), |(s, t), f| {
            let Failure::Vertices(vs) = f else { unreachable!() };
            Ok(match vs.as_slice() {
                [] => true,
                [x] => *x != s && *x != t && crate::graph::reachable_without_vertex(&g, s, t, *x),
                _ => unreachable!(),
            })
        })
        .unwrap();
        assert!(r.passed());
        assert_eq!(r.failure_sets, 5);
        assert_eq!(Failure::Vertices(vec![2]).to_string(), "V 2");
    }

    #[test]
    fn rejects_foreign_subgraph() {
        let g = chain3();
        let other = diamond();
        assert!(is_k_ftrs(&g, &Subgraph::whole(&other), &[(0, 2)], 1).is_err());
    }

    proptest! {
        #[test]
        fn deletion_is_monotone(
            n in 2usize..9,
            raw in proptest::collection::vec((0usize..9, 0usize..9), 0..30),
            cut in proptest::collection::vec(any::<prop::sample::Index>(), 0..4),
        ) {
            let edges: std::collections::BTreeSet<_> =
                raw.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v).collect();
            let g = DiGraph::from_edges(n, edges).unwrap();
            prop_assume!(g.m() > 0);
            let ids: Vec<usize> = cut.iter().map(|i| i.index(g.m())).collect();
            for s in 0..n {
                for t in 0..n {
                    for j in 0..=ids.len() {
                        let fewer = brute_reachable(&g, (s, t), &Failure::Edges(FailureSet::from_ids(&g, &ids[..j]))).unwrap();
                        let more = brute_reachable(&g, (s, t), &Failure::Edges(FailureSet::from_ids(&g, &ids))).unwrap();
                        prop_assert!(!more || fewer);
                        prop_assert_eq!(more, reachable_avoiding(&g, s, t, &ids));
                    }
                }
            }
        }
    }
}
