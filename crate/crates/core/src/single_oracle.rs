//! Pairwise reachability oracles for a single vertex or edge failure.
//!
//! Vertex failures: pairs with many cut vertices not yet claimed by earlier
//! pairs are selected, and their newly claimed cut vertices form disjoint
//! groups `V_i`, each with a cut-set all-pairs structure. Every pair then
//! stores, per group, its first and last cut vertex inside the group, plus
//! the few cut vertices of its own that no group claimed.
//!
//! Edge failures reduce to vertex failures: an edge that is a cut edge for
//! some pair either has both endpoints as cut vertices of the queried pair
//! (then it cuts iff both do), or its endpoints are strongly connected only
//! through it, in which case the edge is subdivided and its middle vertex
//! failed instead.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_with::serde_as;

use crate::cutset::{build_ordered, CutSetApr};
use crate::dual_oracle::ceil_sqrt;
use crate::error::{Error, Result};
use crate::graph::{
    cut_elements, reachable_avoiding, split_edges, strongly_connected_masked, DiGraph, Edge, Pair, VertexId,
};
use crate::io::check_pairs;
use crate::Words;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexEntry {
    pub reachable: bool,
    /// First and last cut vertex of this pair inside each group it meets.
    pub ends: BTreeMap<usize, (VertexId, VertexId)>,
    /// Cut vertices of this pair outside every group.
    pub outside: BTreeSet<VertexId>,
}

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexFailOracle {
    pub n: usize,
    pub alpha: usize,
    pub selected: Vec<Pair>,
    /// Group index of every grouped vertex.
    pub group: BTreeMap<VertexId, usize>,
    pub apr: Vec<CutSetApr>,
    #[serde_as(as = "Vec<(_, _)>")]
    pub entries: BTreeMap<Pair, VertexEntry>,
}

pub fn build_vertex_ftro(g: &DiGraph, pairs: &[Pair]) -> Result<VertexFailOracle> {
    build_vertex_ftro_with(g, pairs, ceil_sqrt(g.n()).max(1))
}

pub fn build_vertex_ftro_with(g: &DiGraph, pairs: &[Pair], alpha: usize) -> Result<VertexFailOracle> {
    check_pairs(g, pairs)?;
    let mut cut_vertices: BTreeMap<Pair, Option<Vec<VertexId>>> = BTreeMap::new();
    let mut order = Vec::new();
    for &(s, t) in pairs {
        if cut_vertices.contains_key(&(s, t)) {
            continue;
        }
        order.push((s, t));
        let cv = if reachable_avoiding(g, s, t, &[]) { Some(cut_elements(g, s, t)?.vertices) } else { None };
        cut_vertices.insert((s, t), cv);
    }

    let mut group = BTreeMap::new();
    let mut selected = Vec::new();
    let mut apr = Vec::new();
    for &p in &order {
        let Some(cv) = &cut_vertices[&p] else { continue };
        let fresh: Vec<VertexId> = cv.iter().copied().filter(|v| !group.contains_key(v)).collect();
        if fresh.len() > alpha {
            let i = selected.len();
            for &v in &fresh {
                group.insert(v, i);
            }
            selected.push(p);
            apr.push(build_ordered(g, &fresh));
        }
    }

    let mut entries = BTreeMap::new();
    for &p in &order {
        let entry = match &cut_vertices[&p] {
            None => VertexEntry { reachable: false, ends: BTreeMap::new(), outside: BTreeSet::new() },
            Some(cv) => {
                let mut ends = BTreeMap::new();
                let mut outside = BTreeSet::new();
                for &v in cv {
                    match group.get(&v) {
                        Some(&i) => {
                            ends.entry(i).and_modify(|e: &mut (VertexId, VertexId)| e.1 = v).or_insert((v, v));
                        }
                        None => {
                            outside.insert(v);
                        }
                    }
                }
                VertexEntry { reachable: true, ends, outside }
            }
        };
        entries.insert(p, entry);
    }
    Ok(VertexFailOracle { n: g.n(), alpha, selected, group, apr, entries })
}

impl VertexFailOracle {
    /// Whether `t` is reachable from `s` with nothing failed.
    pub fn intact(&self, pair: Pair) -> Result<bool> {
        Ok(self.entries.get(&pair).ok_or(Error::UnknownPair(pair))?.reachable)
    }

    /// Whether `t` is reachable from `s` once vertex `x` is removed.
    pub fn query(&self, pair: Pair, x: VertexId) -> Result<bool> {
        if x >= self.n {
            return Err(Error::UnknownVertex { vertex: x, n: self.n });
        }
        let e = self.entries.get(&pair).ok_or(Error::UnknownPair(pair))?;
        if !e.reachable || x == pair.0 || x == pair.1 {
            return Ok(false);
        }
        let Some(&i) = self.group.get(&x) else {
            return Ok(!e.outside.contains(&x));
        };
        let Some(&(a, b)) = e.ends.get(&i) else {
            return Ok(true);
        };
        if x == a || x == b {
            return Ok(false);
        }
        self.apr[i].query(x, a, b)
    }

    pub fn pairs(&self) -> Vec<Pair> {
        self.entries.keys().copied().collect()
    }
}

impl Words for VertexFailOracle {
    fn words(&self) -> usize {
        let entries: usize = self.entries.values().map(|e| 3 + 3 * e.ends.len() + e.outside.len()).sum();
        2 + 2 * self.selected.len() + 2 * self.group.len() + self.apr.iter().map(Words::words).sum::<usize>() + entries
    }
}

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeFailOracle {
    pub n: usize,
    /// Cut edges of some pair.
    pub cut_edges: BTreeSet<Edge>,
    /// Cut edges whose endpoints are strongly connected only through them,
    /// with their middle vertex in the split graph.
    #[serde_as(as = "Vec<(_, _)>")]
    pub split: BTreeMap<Edge, VertexId>,
    pub inner: VertexFailOracle,
}

pub fn build_edge_ftro(g: &DiGraph, pairs: &[Pair]) -> Result<EdgeFailOracle> {
    check_pairs(g, pairs)?;
    let mut cut_ids = BTreeSet::new();
    for &(s, t) in pairs {
        if s != t && reachable_avoiding(g, s, t, &[]) {
            cut_ids.extend(cut_elements(g, s, t)?.edges);
        }
    }
    let none = vec![false; g.n()];
    let c0: Vec<usize> = cut_ids
        .iter()
        .copied()
        .filter(|&e| {
            let (x, y) = g.edge(e);
            strongly_connected_masked(g, x, y, &none) && !reachable_avoiding(g, x, y, &[e])
        })
        .collect();
    if c0.len() > 2 * g.n() {
        return Err(Error::ContractViolation(format!("{} split edges exceed 2n = {}", c0.len(), 2 * g.n())));
    }
    let (h, mids) = split_edges(g, &c0)?;
    let inner = build_vertex_ftro(&h, pairs)?;
    Ok(EdgeFailOracle {
        n: g.n(),
        cut_edges: cut_ids.iter().map(|&e| g.edge(e)).collect(),
        split: mids.iter().map(|(&e, &v)| (g.edge(e), v)).collect(),
        inner,
    })
}

impl EdgeFailOracle {
    /// Whether `t` is reachable from `s` once edge `e` is removed. Edges that
    /// are no pair's cut edge (including edges absent from the graph) leave
    /// reachability unchanged.
    pub fn query(&self, pair: Pair, e: Edge) -> Result<bool> {
        let entry = self.inner.entries.get(&pair).ok_or(Error::UnknownPair(pair))?;
        if !entry.reachable {
            return Ok(false);
        }
        if !self.cut_edges.contains(&e) {
            return Ok(true);
        }
        if let Some(&mid) = self.split.get(&e) {
            return self.inner.query(pair, mid);
        }
        Ok(self.inner.query(pair, e.0)? || self.inner.query(pair, e.1)?)
    }

    pub fn split_count(&self) -> usize {
        self.split.len()
    }

    pub fn pairs(&self) -> Vec<Pair> {
        self.inner.pairs()
    }
}

impl Words for EdgeFailOracle {
    fn words(&self) -> usize {
        1 + 2 * self.cut_edges.len() + 3 * self.split.len() + self.inner.words()
    }
}
