//! Linear-size dual-failure preserver for a single pair.
//!
//! Two outer strands plus, for strand vertices, the "essential" coupling
//! paths: strand-edge-disjoint paths from the earliest possible anchor on a
//! strand. After any two failures that leave `t` reachable from `s`, some
//! surviving route is a strand prefix, at most one coupling path, and a strand
//! suffix (a nice path).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_with::serde_as;

use crate::error::Result;
use crate::graph::{bfs_tree, path_edges, path_from_tree, path_vertices, DiGraph, EdgeId, FailureSet, Subgraph, VertexId};
use crate::strands::{strands, StrandPair};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingRecord {
    pub anchor: VertexId,
    /// Position of the anchor on its strand.
    pub anchor_pos: usize,
    /// Vertex sequence from the anchor to the target; a single vertex when
    /// the target is its own anchor.
    pub path: Vec<VertexId>,
}

/// Key of a coupling: target vertex and the strand (0 or 1) its anchor is on.
pub type CouplingKey = (VertexId, usize);

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSkeleton {
    pub s: VertexId,
    pub t: VertexId,
    pub strands: [Vec<VertexId>; 2],
    #[serde_as(as = "Vec<(_, _)>")]
    pub couplings: BTreeMap<CouplingKey, CouplingRecord>,
    /// Couplings whose paths were kept, in key order.
    pub essential: Vec<CouplingKey>,
    pub strand_edges: Vec<EdgeId>,
    pub kept: Subgraph,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NicePath {
    /// Strand followed from `s` to `u`.
    pub i: usize,
    /// Strand followed from `u_prime` to `t`.
    pub j: usize,
    pub u: VertexId,
    pub u_prime: VertexId,
    pub vertices: Vec<VertexId>,
}

impl PairSkeleton {
    pub fn strand_pos(&self, i: usize, v: VertexId) -> Option<usize> {
        self.strands[i].iter().position(|&x| x == v)
    }

    /// Coupling paths edges kept in addition to the strands.
    pub fn coupling_edges(&self, g: &DiGraph) -> Vec<EdgeId> {
        let mut ids: Vec<EdgeId> = self
            .essential
            .iter()
            .flat_map(|k| path_edges(g, &self.couplings[k].path))
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

pub fn build_pair_skeleton(g: &DiGraph, s: VertexId, t: VertexId) -> Result<PairSkeleton> {
    let sp = strands(g, s, t)?;
    Ok(skeleton_from_strands(g, sp))
}

pub(crate) fn skeleton_from_strands(g: &DiGraph, sp: StrandPair) -> PairSkeleton {
    let (s, t) = (sp.p1[0], *sp.p1.last().unwrap());
    let strands = [sp.p1, sp.p2];
    let mut strand_edges: Vec<EdgeId> = (0..2).flat_map(|i| path_edges(g, &strands[i])).collect();
    strand_edges.sort_unstable();
    strand_edges.dedup();
    let mut on_strand_edge = vec![false; g.m()];
    for &e in &strand_edges {
        on_strand_edge[e] = true;
    }
    let mut on_strand = vec![false; g.n()];
    for v in strands.iter().flatten() {
        on_strand[*v] = true;
    }

    // Anchors: scanning strand i from s, the first vertex reaching v off-strand.
    let mut couplings = BTreeMap::new();
    for (i, strand) in strands.iter().enumerate() {
        for (pos, &u) in strand.iter().enumerate() {
            let tree = bfs_tree(g, u, |e| !on_strand_edge[e]);
            for v in 0..g.n() {
                if !on_strand[v] || couplings.contains_key(&(v, i)) {
                    continue;
                }
                if let Some(p) = path_from_tree(g, &tree, u, v) {
                    let path = path_vertices(g, u, &p);
                    couplings.insert((v, i), CouplingRecord { anchor: u, anchor_pos: pos, path });
                }
            }
        }
    }

    // Keep (v, i) when every later vertex on some strand through v has a
    // strictly later anchor on strand i (undefined anchors never block).
    let mut essential = Vec::new();
    for (&(v, i), rec) in &couplings {
        let passes = |j: usize| -> bool {
            let Some(p) = strands[j].iter().position(|&x| x == v) else { return false };
            strands[j][p + 1..].iter().all(|&w| match couplings.get(&(w, i)) {
                Some(other) => rec.anchor_pos < other.anchor_pos,
                None => true,
            })
        };
        if passes(0) || passes(1) {
            essential.push((v, i));
        }
    }

    let mut kept_ids = strand_edges.clone();
    for key in &essential {
        kept_ids.extend(path_edges(g, &couplings[key].path));
    }
    let kept = Subgraph::from_edge_ids(g, kept_ids);
    PairSkeleton { s, t, strands, couplings, essential, strand_edges, kept }
}

fn avoids(vertices: &[VertexId], f: &FailureSet) -> bool {
    vertices.windows(2).all(|w| !f.contains((w[0], w[1])))
}

/// A nice s→t path surviving `f`, if one exists in the skeleton.
pub fn find_nice_path(sk: &PairSkeleton, f: &FailureSet) -> Option<NicePath> {
    for i in 0..2 {
        if avoids(&sk.strands[i], f) {
            return Some(NicePath { i, j: i, u: sk.s, u_prime: sk.s, vertices: sk.strands[i].clone() });
        }
    }
    for &(v, i) in &sk.essential {
        let rec = &sk.couplings[&(v, i)];
        let prefix = &sk.strands[i][..=rec.anchor_pos];
        if !avoids(prefix, f) || !avoids(&rec.path, f) {
            continue;
        }
        for j in 0..2 {
            let Some(p) = sk.strand_pos(j, v) else { continue };
            let suffix = &sk.strands[j][p..];
            if avoids(suffix, f) {
                let mut vertices = prefix.to_vec();
                vertices.extend_from_slice(&rec.path[1..]);
                vertices.extend_from_slice(&suffix[1..]);
                return Some(NicePath { i, j, u: rec.anchor, u_prime: v, vertices });
            }
        }
    }
    None
}
