//! Lifting structures that serve only a fraction of their pairs ("slack"
//! structures) to ones serving every pair.
//!
//! The slack builder is re-applied to whatever it left uncovered until at
//! most one pair remains; leftovers get a per-pair base structure.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_with::serde_as;

use crate::error::{Error, Result};
use crate::graph::{DiGraph, Pair, Subgraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level<S> {
    pub structure: S,
    pub pairs: Vec<Pair>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    Slack(usize),
    Base(usize),
}

#[serde_as]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftedStructure<S, B> {
    pub levels: Vec<Level<S>>,
    pub base: Vec<(Pair, B)>,
    #[serde_as(as = "Vec<(_, _)>")]
    pub pair_index: BTreeMap<Pair, Route>,
}

impl<S, B> LiftedStructure<S, B> {
    pub fn route(&self, pair: Pair) -> Result<Route> {
        self.pair_index.get(&pair).copied().ok_or(Error::UnknownPair(pair))
    }

    /// Dispatches a query to the level serving `pair`.
    pub fn query<R>(
        &self,
        pair: Pair,
        slack: impl FnOnce(&S) -> Result<R>,
        base: impl FnOnce(&B) -> Result<R>,
    ) -> Result<R> {
        match self.route(pair)? {
            Route::Slack(i) => slack(&self.levels[i].structure),
            Route::Base(i) => base(&self.base[i].1),
        }
    }

    pub fn pairs(&self) -> impl Iterator<Item = Pair> + '_ {
        self.pair_index.keys().copied()
    }
}

/// Most slack levels a run may use on `p` distinct pairs before the builder
/// is declared to have broken its coverage contract.
pub fn level_cap(p: usize) -> usize {
    if p <= 1 {
        return 2;
    }
    ((p as f64).ln() / 2.5f64.ln()).ceil() as usize + 2
}

fn dedup_in_order(pairs: &[Pair]) -> Vec<Pair> {
    let mut seen = BTreeSet::new();
    pairs.iter().copied().filter(|p| seen.insert(*p)).collect()
}

pub fn lift_oracle<S, B>(
    pairs: &[Pair],
    mut slack: impl FnMut(&[Pair]) -> Result<(S, Vec<Pair>)>,
    mut base: impl FnMut(Pair) -> Result<B>,
) -> Result<LiftedStructure<S, B>> {
    let mut remaining = dedup_in_order(pairs);
    let cap = level_cap(remaining.len());
    let mut out = LiftedStructure { levels: Vec::new(), base: Vec::new(), pair_index: BTreeMap::new() };

    while remaining.len() >= 2 {
        if out.levels.len() == cap {
            return Err(Error::ContractViolation(format!(
                "{} pairs still uncovered after {cap} slack levels",
                remaining.len()
            )));
        }
        let (structure, covered) = slack(&remaining)?;
        let covered = dedup_in_order(&covered);
        if covered.is_empty() {
            return Err(Error::ContractViolation(format!(
                "slack level covered none of {} pairs",
                remaining.len()
            )));
        }
        let covered_set: BTreeSet<Pair> = covered.iter().copied().collect();
        if let Some(p) = covered.iter().find(|p| !remaining.contains(p)) {
            return Err(Error::ContractViolation(format!("slack level claims foreign pair {p:?}")));
        }
        let level = out.levels.len();
        for &p in &covered {
            out.pair_index.insert(p, Route::Slack(level));
        }
        remaining.retain(|p| !covered_set.contains(p));
        out.levels.push(Level { structure, pairs: covered });
    }
    for p in remaining {
        out.pair_index.insert(p, Route::Base(out.base.len()));
        out.base.push((p, base(p)?));
    }
    Ok(out)
}

/// Union of all levels' kept edges.
pub fn lift_preserver(
    g: &DiGraph,
    pairs: &[Pair],
    slack: impl FnMut(&[Pair]) -> Result<(Subgraph, Vec<Pair>)>,
    base: impl FnMut(Pair) -> Result<Subgraph>,
) -> Result<Subgraph> {
    let lifted = lift_oracle(pairs, slack, base)?;
    let ids = lifted
        .levels
        .iter()
        .map(|l| &l.structure)
        .chain(lifted.base.iter().map(|(_, b)| b))
        .flat_map(|h| h.parent_ids().iter().copied());
    Ok(Subgraph::from_edge_ids(g, ids))
}
