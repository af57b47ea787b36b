//! Two s→t paths that share only (s,t) cut vertices and cut edges.
//!
//! Computed as a flow of value 2 in the vertex-split network where cut
//! elements get capacity 2 and everything else capacity 1. A unit-capacity
//! bottleneck would itself be a cut element, so the flow always reaches 2.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{cut_elements, path_edges, CutElements, DiGraph, EdgeId, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrandPair {
    pub p1: Vec<VertexId>,
    pub p2: Vec<VertexId>,
    pub cut: CutElements,
}

impl StrandPair {
    pub fn strand(&self, i: usize) -> &[VertexId] {
        match i {
            0 => &self.p1,
            1 => &self.p2,
            _ => panic!("strand index {i} out of range"),
        }
    }

    /// Edge ids of strand `i` (0 or 1) in `g`.
    pub fn strand_edges(&self, g: &DiGraph, i: usize) -> Vec<EdgeId> {
        path_edges(g, self.strand(i))
    }
}

struct Arc {
    to: usize,
    cap: u8,
    flow: i8,
}

struct Network {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Network { arcs: Vec::new(), adj: vec![Vec::new(); nodes] }
    }

    // Forward arc gets an even index, its residual twin the next odd one.
    fn add(&mut self, from: usize, to: usize, cap: u8) {
        self.adj[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap, flow: 0 });
        self.adj[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0, flow: 0 });
    }

    fn residual(&self, a: usize) -> i8 {
        self.arcs[a].cap as i8 - self.arcs[a].flow
    }

    fn augment(&mut self, src: usize, dst: usize) -> bool {
        let mut via = vec![usize::MAX; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        seen[src] = true;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            if u == dst {
                break;
            }
            for &a in &self.adj[u] {
                let w = self.arcs[a].to;
                if !seen[w] && self.residual(a) > 0 {
                    seen[w] = true;
                    via[w] = a;
                    queue.push_back(w);
                }
            }
        }
        if !seen[dst] {
            return false;
        }
        let mut v = dst;
        while v != src {
            let a = via[v];
            self.arcs[a].flow += 1;
            self.arcs[a ^ 1].flow -= 1;
            v = self.arcs[a ^ 1].to;
        }
        true
    }

    // Follows positive flow from src to dst, consuming one unit per arc and
    // cutting out any loop the walk closes.
    fn extract_path(&mut self, src: usize, dst: usize) -> Vec<usize> {
        let mut path = vec![src];
        let mut u = src;
        while u != dst {
            let a = *self.adj[u]
                .iter()
                .find(|&&a| a % 2 == 0 && self.arcs[a].flow > 0)
                .expect("flow conservation");
            self.arcs[a].flow -= 1;
            u = self.arcs[a].to;
            if let Some(pos) = path.iter().position(|&x| x == u) {
                path.truncate(pos + 1);
            } else {
                path.push(u);
            }
        }
        path
    }
}

/// The outer strands of `(s, t)`. Deterministic: augmenting paths are found
/// by BFS scanning arcs in creation order (split arcs by vertex, then edge
/// arcs by edge id).
pub fn strands(g: &DiGraph, s: VertexId, t: VertexId) -> Result<StrandPair> {
    let cut = cut_elements(g, s, t)?;
    if s == t {
        return Ok(StrandPair { p1: vec![s], p2: vec![s], cut });
    }
    let mut double_vertex = vec![false; g.n()];
    for &v in &cut.vertices {
        double_vertex[v] = true;
    }
    let mut double_edge = vec![false; g.m()];
    for &e in &cut.edges {
        double_edge[e] = true;
    }

    let mut net = Network::new(2 * g.n());
    for v in 0..g.n() {
        net.add(2 * v, 2 * v + 1, if double_vertex[v] { 2 } else { 1 });
    }
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        net.add(2 * u + 1, 2 * v, if double_edge[id] { 2 } else { 1 });
    }
    let (src, dst) = (2 * s + 1, 2 * t);
    for _ in 0..2 {
        if !net.augment(src, dst) {
            return Err(Error::ContractViolation(format!(
                "flow between {s} and {t} stopped below 2"
            )));
        }
    }
    let to_vertices = |nodes: Vec<usize>| -> Vec<VertexId> {
        let mut out = vec![s];
        out.extend(nodes.iter().filter(|&&x| x % 2 == 0).map(|&x| x / 2));
        out
    };
    let p1 = to_vertices(net.extract_path(src, dst));
    let p2 = to_vertices(net.extract_path(src, dst));
    Ok(StrandPair { p1, p2, cut })
}

/// Strands of `(s, t)` in `g` with the edges `blocked` removed; the paths are
/// returned as vertex sequences of `g`.
pub fn strands_avoiding(g: &DiGraph, s: VertexId, t: VertexId, blocked: &[EdgeId]) -> Result<StrandPair> {
    let (h, _) = g.filtered(|e| !blocked.contains(&e));
    strands(&h, s, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::reachable_avoiding;

    #[test]
    fn fixture_strands() {
        let sp = strands(&diamond(), 0, 3).unwrap();
        assert_eq!(sp.p1, vec![0, 1, 3]);
        assert_eq!(sp.p2, vec![0, 2, 3]);

        let sp = strands(&chain3(), 0, 2).unwrap();
        assert_eq!((sp.p1.clone(), sp.p2.clone()), (vec![0, 1, 2], vec![0, 1, 2]));

        let sp = strands(&loopy(), 0, 3).unwrap();
        assert_eq!((sp.p1.clone(), sp.p2.clone()), (vec![0, 1, 2, 3], vec![0, 1, 2, 3]));

        let sp = strands(&bridged(), 0, 5).unwrap();
        assert_eq!(sp.p1, vec![0, 1, 2, 5]);
        assert_eq!(sp.p2, vec![0, 3, 4, 5]);
    }

    #[test]
    fn trivial_and_unreachable() {
        let sp = strands(&diamond(), 2, 2).unwrap();
        assert_eq!(sp.p1, vec![2]);
        assert!(strands(&diamond(), 3, 0).is_err());
    }

    #[test]
    fn avoiding_matches_filtered_graph() {
        let g = diamond();
        let sp = strands_avoiding(&g, 0, 3, &[0]).unwrap();
        assert_eq!(sp.p1, vec![0, 2, 3]);
        assert_eq!(sp.p2, vec![0, 2, 3]);
    }

    #[test]
    fn shared_elements_are_cut_elements() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(2..9);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    if u != v && rng.gen_bool(0.3) {
                        edges.push((u, v));
                    }
                }
            }
            let g = DiGraph::from_edges(n, edges).unwrap();
            for s in 0..n {
                for t in 0..n {
                    if s == t || !reachable_avoiding(&g, s, t, &[]) {
                        continue;
                    }
                    let sp = strands(&g, s, t).unwrap();
                    let e1 = sp.strand_edges(&g, 0);
                    let e2 = sp.strand_edges(&g, 1);
                    for e in &e1 {
                        if e2.contains(e) {
                            assert!(!reachable_avoiding(&g, s, t, &[*e]));
                        }
                    }
                    for v in &sp.p1 {
                        if sp.p2.contains(v) && *v != s && *v != t {
                            assert!(!crate::graph::reachable_without_vertex(&g, s, t, *v));
                        }
                    }
                    let mut seen = sp.p1.clone();
                    seen.sort_unstable();
                    seen.dedup();
                    assert_eq!(seen.len(), sp.p1.len(), "strand must be simple");
                }
            }
        }
    }
}
