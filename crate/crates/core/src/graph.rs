//! Simple directed graphs and the reachability primitives every construction
//! in this crate is built from.
//!
//! Vertices are `0..n`, edges are numbered `0..m` in insertion order. Graphs
//! are simple: no self-loops and no parallel edges, so an edge is identified
//! equally well by its id or by its `(tail, head)` endpoints.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;
/// An edge given by its endpoints `(tail, head)`.
pub type Edge = (VertexId, VertexId);
/// A source/destination pair `(s, t)`.
pub type Pair = (VertexId, VertexId);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct DiGraph {
    n: usize,
    edges: Vec<Edge>,
    out_adj: Vec<Vec<EdgeId>>,
    in_adj: Vec<Vec<EdgeId>>,
    index: HashMap<Edge, EdgeId>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl TryFrom<RawGraph> for DiGraph {
    type Error = Error;
    fn try_from(raw: RawGraph) -> Result<Self> {
        DiGraph::from_edges(raw.n, raw.edges)
    }
}

impl From<DiGraph> for RawGraph {
    fn from(g: DiGraph) -> Self {
        RawGraph { n: g.n, edges: g.edges }
    }
}

impl DiGraph {
    pub fn empty(n: usize) -> Self {
        DiGraph {
            n,
            edges: Vec::new(),
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
            index: HashMap::new(),
        }
    }

    /// Builds a graph, rejecting out-of-range endpoints, self-loops and
    /// duplicate edges.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut g = DiGraph::empty(n);
        for e in edges {
            g.push_edge(e)?;
        }
        Ok(g)
    }

    pub(crate) fn push_edge(&mut self, (u, v): Edge) -> Result<EdgeId> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if self.index.contains_key(&(u, v)) {
            return Err(Error::DuplicateEdge((u, v)));
        }
        let id = self.edges.len();
        self.edges.push((u, v));
        self.out_adj[u].push(id);
        self.in_adj[v].push(id);
        self.index.insert((u, v), id);
        Ok(id)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id]
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_adj[v]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_adj[v]
    }

    pub fn edge_id(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.index.get(&(u, v)).copied()
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::UnknownVertex { vertex: v, n: self.n })
        }
    }

    pub fn check_edge(&self, e: Edge) -> Result<EdgeId> {
        self.edge_id(e.0, e.1).ok_or(Error::UnknownEdge(e))
    }

    /// Same vertex set, every edge reversed; edge ids are preserved.
    pub fn reversed(&self) -> DiGraph {
        DiGraph::from_edges(self.n, self.edges.iter().map(|&(u, v)| (v, u)))
            .expect("reversal of a simple graph is simple")
    }

    /// The subgraph keeping the edges accepted by `keep`, together with the
    /// map from new edge ids to the ids in `self`.
    pub fn filtered(&self, keep: impl Fn(EdgeId) -> bool) -> (DiGraph, Vec<EdgeId>) {
        let ids: Vec<EdgeId> = (0..self.m()).filter(|&e| keep(e)).collect();
        let g = DiGraph::from_edges(self.n, ids.iter().map(|&e| self.edges[e]))
            .expect("subgraph of a simple graph is simple");
        (g, ids)
    }

    /// Stable fingerprint of the vertex count and edge list.
    pub(crate) fn fingerprint(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.n.hash(&mut h);
        self.edges.hash(&mut h);
        h.finish()
    }
}

/// A set of failed edges, stored by endpoints in sorted order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FailureSet {
    edges: Vec<Edge>,
}

impl FailureSet {
    pub fn new(edges: impl IntoIterator<Item = Edge>) -> Self {
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();
        FailureSet { edges }
    }

    pub fn empty() -> Self {
        FailureSet::default()
    }

    pub fn from_ids(g: &DiGraph, ids: &[EdgeId]) -> Self {
        FailureSet::new(ids.iter().map(|&e| g.edge(e)))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Edge ids in `g`; every member must exist.
    pub fn resolve(&self, g: &DiGraph) -> Result<Vec<EdgeId>> {
        self.edges.iter().map(|&e| g.check_edge(e)).collect()
    }

    /// Edge ids in `g` of the members present there; the rest are ignored.
    pub fn resolve_present(&self, g: &DiGraph) -> Vec<EdgeId> {
        self.edges.iter().filter_map(|&(u, v)| g.edge_id(u, v)).collect()
    }

    pub(crate) fn check_budget(&self, k: usize) -> Result<()> {
        if self.len() > k {
            Err(Error::invalid(format!(
                "{} failures given, structure tolerates at most {k}",
                self.len()
            )))
        } else {
            Ok(())
        }
    }
}

/// A subset of a parent graph's edges on the parent's vertex set.
///
/// The kept edges are materialized as a standalone graph so that a subgraph
/// can be stored and queried without its parent. Edge `i` of [`Subgraph::graph`]
/// is parent edge `parent_ids()[i]`, and parent ids are kept in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgraph {
    graph: DiGraph,
    parent_ids: Vec<EdgeId>,
}

impl Subgraph {
    pub fn from_edge_ids(parent: &DiGraph, ids: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut ids: Vec<EdgeId> = ids.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        assert!(ids.last().map_or(true, |&e| e < parent.m()), "edge id out of range");
        let graph = DiGraph::from_edges(parent.n(), ids.iter().map(|&e| parent.edge(e)))
            .expect("subgraph of a simple graph is simple");
        Subgraph { graph, parent_ids: ids }
    }

    pub fn whole(parent: &DiGraph) -> Self {
        Subgraph::from_edge_ids(parent, 0..parent.m())
    }

    pub fn graph(&self) -> &DiGraph {
        &self.graph
    }

    pub fn parent_ids(&self) -> &[EdgeId] {
        &self.parent_ids
    }

    pub fn len(&self) -> usize {
        self.parent_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent_ids.is_empty()
    }

    pub fn contains(&self, parent_edge: EdgeId) -> bool {
        self.parent_ids.binary_search(&parent_edge).is_ok()
    }

    /// s→t reachability in the kept edges minus `f`. Failures that are not
    /// kept edges cannot disconnect anything and are ignored.
    pub fn reachable(&self, s: VertexId, t: VertexId, f: &FailureSet) -> bool {
        let blocked = f.resolve_present(&self.graph);
        reachable_avoiding(&self.graph, s, t, &blocked)
    }
}

/// Vertices and edges lying on every s→t path, in path order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutElements {
    /// Cut vertices including `s` and `t`.
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

// ---------------------------------------------------------------------------
// Search primitives

/// Vertices reachable from `sources` (or reaching them when `backward`),
/// traversing only edges accepted by `edge_ok` and vertices accepted by
/// `vertex_ok`. Sources rejected by `vertex_ok` are not entered.
pub fn reach_set(
    g: &DiGraph,
    sources: &[VertexId],
    backward: bool,
    edge_ok: impl Fn(EdgeId) -> bool,
    vertex_ok: impl Fn(VertexId) -> bool,
) -> Vec<bool> {
    let mut seen = vec![false; g.n()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if vertex_ok(s) && !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let adj = if backward { g.in_edges(u) } else { g.out_edges(u) };
        for &e in adj {
            if !edge_ok(e) {
                continue;
            }
            let (a, b) = g.edge(e);
            let w = if backward { a } else { b };
            if !seen[w] && vertex_ok(w) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Early-exit s→t search over the accepted edges and vertices.
pub(crate) fn reaches(
    g: &DiGraph,
    s: VertexId,
    t: VertexId,
    edge_ok: impl Fn(EdgeId) -> bool,
    vertex_ok: impl Fn(VertexId) -> bool,
) -> bool {
    if !vertex_ok(s) || !vertex_ok(t) {
        return false;
    }
    if s == t {
        return true;
    }
    let mut seen = vec![false; g.n()];
    let mut stack = vec![s];
    seen[s] = true;
    while let Some(u) = stack.pop() {
        for &e in g.out_edges(u) {
            if !edge_ok(e) {
                continue;
            }
            let w = g.edge(e).1;
            if w == t {
                return true;
            }
            if !seen[w] && vertex_ok(w) {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    false
}

/// s→t reachability with the listed edge ids removed. No validation.
pub fn reachable_avoiding(g: &DiGraph, s: VertexId, t: VertexId, blocked: &[EdgeId]) -> bool {
    reaches(g, s, t, |e| !blocked.contains(&e), |_| true)
}

/// s→t reachability with vertex `x` (and its incident edges) removed.
/// Removing an endpoint always disconnects the pair.
pub fn reachable_without_vertex(g: &DiGraph, s: VertexId, t: VertexId, x: VertexId) -> bool {
    reaches(g, s, t, |_| true, |v| v != x)
}

/// Breadth-first shortest s→t path as a list of edge ids. Out-edges are
/// scanned in increasing id order and the first discovery wins, so the
/// result is deterministic.
pub fn shortest_path(
    g: &DiGraph,
    s: VertexId,
    t: VertexId,
    edge_ok: impl Fn(EdgeId) -> bool,
) -> Option<Vec<EdgeId>> {
    let parents = bfs_tree(g, s, edge_ok);
    path_from_tree(g, &parents, s, t)
}

/// BFS tree from `s`: `parent_edge[v]` is the edge that discovered `v`.
pub(crate) fn bfs_tree(g: &DiGraph, s: VertexId, edge_ok: impl Fn(EdgeId) -> bool) -> Vec<Option<EdgeId>> {
    let mut parent = vec![None; g.n()];
    let mut seen = vec![false; g.n()];
    let mut queue = VecDeque::from([s]);
    seen[s] = true;
    while let Some(u) = queue.pop_front() {
        for &e in g.out_edges(u) {
            if !edge_ok(e) {
                continue;
            }
            let w = g.edge(e).1;
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(e);
                queue.push_back(w);
            }
        }
    }
    parent
}

pub(crate) fn path_from_tree(
    g: &DiGraph,
    parents: &[Option<EdgeId>],
    s: VertexId,
    t: VertexId,
) -> Option<Vec<EdgeId>> {
    if s == t {
        return Some(Vec::new());
    }
    parents[t]?;
    let mut path = Vec::new();
    let mut v = t;
    while v != s {
        let e = parents[v]?;
        path.push(e);
        v = g.edge(e).0;
    }
    path.reverse();
    Some(path)
}

/// Vertex sequence of an edge path starting at `s`.
pub fn path_vertices(g: &DiGraph, s: VertexId, path: &[EdgeId]) -> Vec<VertexId> {
    let mut out = Vec::with_capacity(path.len() + 1);
    out.push(s);
    out.extend(path.iter().map(|&e| g.edge(e).1));
    out
}

/// Edge ids along a vertex sequence. Panics if a step is not an edge.
pub fn path_edges(g: &DiGraph, vertices: &[VertexId]) -> Vec<EdgeId> {
    vertices
        .windows(2)
        .map(|w| g.edge_id(w[0], w[1]).expect("consecutive path vertices must be adjacent"))
        .collect()
}

// ---------------------------------------------------------------------------
// Validated operations

/// Whether `t` is reachable from `s` once the edges of `f` are removed.
pub fn reachable(g: &DiGraph, s: VertexId, t: VertexId, f: &FailureSet) -> Result<bool> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    let blocked = f.resolve(g)?;
    Ok(reachable_avoiding(g, s, t, &blocked))
}

/// Whether `u` and `v` reach each other once the `removed` vertices are deleted.
pub fn strongly_connected(g: &DiGraph, u: VertexId, v: VertexId, removed: &[VertexId]) -> Result<bool> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if removed.contains(&u) || removed.contains(&v) {
        return Err(Error::invalid(format!("query vertex among removed set {removed:?}")));
    }
    let mut gone = vec![false; g.n()];
    for &x in removed {
        g.check_vertex(x)?;
        gone[x] = true;
    }
    Ok(strongly_connected_masked(g, u, v, &gone))
}

pub(crate) fn strongly_connected_masked(g: &DiGraph, u: VertexId, v: VertexId, gone: &[bool]) -> bool {
    reaches(g, u, v, |_| true, |w| !gone[w]) && reaches(g, v, u, |_| true, |w| !gone[w])
}

/// All (s,t) cut vertices (including `s` and `t`) and cut edges, ordered by
/// their position along the lowest-edge-id BFS path. One reachability probe
/// per candidate on that path.
pub fn cut_elements(g: &DiGraph, s: VertexId, t: VertexId) -> Result<CutElements> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if s == t {
        return Ok(CutElements { vertices: vec![s], edges: Vec::new() });
    }
    let path = shortest_path(g, s, t, |_| true).ok_or(Error::Unreachable((s, t)))?;
    let on_path = path_vertices(g, s, &path);
    let mut vertices = vec![s];
    for &v in &on_path[1..on_path.len() - 1] {
        if !reachable_without_vertex(g, s, t, v) {
            vertices.push(v);
        }
    }
    vertices.push(t);
    let edges = path
        .iter()
        .copied()
        .filter(|&e| !reachable_avoiding(g, s, t, &[e]))
        .collect();
    Ok(CutElements { vertices, edges })
}

/// Replaces every vertex `v` by an edge `(v_in, v_out)` with `v_in = 2v` and
/// `v_out = 2v + 1`; edge `(u, v)` becomes `(u_out, v_in)`. The split edges
/// come first (edge id `v` for vertex `v`), then the rewired edges in order.
pub fn split_vertices(g: &DiGraph) -> (DiGraph, Vec<(VertexId, VertexId)>) {
    let map: Vec<(VertexId, VertexId)> = (0..g.n()).map(|v| (2 * v, 2 * v + 1)).collect();
    let split = (0..g.n()).map(|v| map[v]);
    let rewired = g.edges().iter().map(|&(u, v)| (map[u].1, map[v].0));
    let h = DiGraph::from_edges(2 * g.n(), split.chain(rewired)).expect("split graph is simple");
    (h, map)
}

/// Subdivides every edge of `e0` with a fresh middle vertex. Middle vertices
/// are numbered `n, n+1, ...` in increasing order of the subdivided edge id.
pub fn split_edges(g: &DiGraph, e0: &[EdgeId]) -> Result<(DiGraph, BTreeMap<EdgeId, VertexId>)> {
    let mut mids = BTreeMap::new();
    for &e in e0 {
        if e >= g.m() {
            return Err(Error::invalid(format!("edge id {e} out of range (m = {})", g.m())));
        }
        mids.insert(e, 0);
    }
    for (i, mid) in mids.values_mut().enumerate() {
        *mid = g.n() + i;
    }
    let mut edges = Vec::with_capacity(g.m() + mids.len());
    for (id, &(a, b)) in g.edges().iter().enumerate() {
        match mids.get(&id) {
            Some(&mid) => {
                edges.push((a, mid));
                edges.push((mid, b));
            }
            None => edges.push((a, b)),
        }
    }
    let h = DiGraph::from_edges(g.n() + mids.len(), edges)?;
    Ok((h, mids))
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn fs(edges: &[Edge]) -> FailureSet {
        FailureSet::new(edges.iter().copied())
    }

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert!(matches!(DiGraph::from_edges(2, [(1, 1)]), Err(Error::SelfLoop(1))));
        assert!(matches!(
            DiGraph::from_edges(2, [(0, 1), (0, 1)]),
            Err(Error::DuplicateEdge((0, 1)))
        ));
        assert!(matches!(DiGraph::from_edges(2, [(0, 2)]), Err(Error::UnknownVertex { .. })));
    }

    #[test]
    fn reachable_on_diamond() {
        let g = diamond();
        assert!(reachable(&g, 0, 3, &FailureSet::empty()).unwrap());
        assert!(!reachable(&g, 0, 3, &fs(&[(0, 1), (0, 2)])).unwrap());
        assert!(reachable(&g, 0, 3, &fs(&[(0, 1)])).unwrap());
        assert!(reachable(&g, 2, 2, &fs(&[(0, 1), (0, 2)])).unwrap());
        assert!(matches!(reachable(&g, 0, 3, &fs(&[(3, 0)])), Err(Error::UnknownEdge(_))));
        assert!(reachable(&g, 0, 9, &FailureSet::empty()).is_err());
    }

    #[test]
    fn cut_elements_fixtures() {
        let g = chain3();
        let c = cut_elements(&g, 0, 2).unwrap();
        assert_eq!(c.vertices, vec![0, 1, 2]);
        assert_eq!(c.edges, vec![0, 1]);

        let c = cut_elements(&diamond(), 0, 3).unwrap();
        assert_eq!(c.vertices, vec![0, 3]);
        assert!(c.edges.is_empty());

        // In LOOPY the edge (1,2) is the only way out of 1, so it is a cut
        // edge as well.
        let g = loopy();
        let c = cut_elements(&g, 0, 3).unwrap();
        assert_eq!(c.vertices, vec![0, 1, 2, 3]);
        let ends: Vec<Edge> = c.edges.iter().map(|&e| g.edge(e)).collect();
        assert_eq!(ends, vec![(0, 1), (1, 2), (2, 3)]);

        assert!(matches!(cut_elements(&g, 3, 0), Err(Error::Unreachable((3, 0)))));
    }

    #[test]
    fn strongly_connected_fixtures() {
        assert!(strongly_connected(&cycle3(), 0, 2, &[]).unwrap());
        assert!(!strongly_connected(&cycle3(), 0, 2, &[1]).unwrap());
        assert!(strongly_connected(&loopy(), 1, 2, &[0]).unwrap());
        assert!(strongly_connected(&loopy(), 1, 2, &[1]).is_err());
    }

    #[test]
    fn split_vertices_counts() {
        let (h, map) = split_vertices(&chain3());
        assert_eq!((h.n(), h.m()), (6, 5));
        assert_eq!(map[1], (2, 3));
        let (h, _) = split_vertices(&DiGraph::empty(0));
        assert_eq!((h.n(), h.m()), (0, 0));
        let (h, _) = split_vertices(&diamond());
        assert_eq!((h.n(), h.m()), (8, 8));
    }

    #[test]
    fn split_vertices_reduces_vertex_failures() {
        for g in [chain3(), diamond(), loopy(), bridged(), cycle3()] {
            let (h, map) = split_vertices(&g);
            for s in 0..g.n() {
                for t in 0..g.n() {
                    for x in 0..g.n() {
                        if s == t || x == s || x == t {
                            continue;
                        }
                        let expect = reachable_without_vertex(&g, s, t, x);
                        let got = reachable_avoiding(&h, map[s].1, map[t].0, &[x]);
                        assert_eq!(expect, got, "s={s} t={t} x={x}");
                    }
                }
            }
        }
    }

    #[test]
    fn split_edges_counts() {
        let (h, mids) = split_edges(&chain3(), &[0]).unwrap();
        assert_eq!((h.n(), h.m()), (4, 3));
        assert_eq!(mids[&0], 3);
        let (h, mids) = split_edges(&diamond(), &[]).unwrap();
        assert_eq!(h, diamond());
        assert!(mids.is_empty());
        let g = diamond();
        let e0 = [g.edge_id(0, 1).unwrap(), g.edge_id(2, 3).unwrap()];
        let (h, _) = split_edges(&g, &e0).unwrap();
        assert_eq!((h.n(), h.m()), (6, 6));
        assert!(split_edges(&g, &[7]).is_err());
    }

    #[test]
    fn subgraph_ignores_foreign_failures() {
        let g = diamond();
        let h = Subgraph::from_edge_ids(&g, [0, 1]);
        assert!(h.reachable(0, 3, &fs(&[(0, 2)])));
        assert!(!h.reachable(0, 3, &fs(&[(1, 3)])));
        assert!(h.contains(1) && !h.contains(2));
    }

    #[test]
    fn graph_serde_round_trip() {
        let g = bridged();
        let json = serde_json::to_string(&g).unwrap();
        let back: DiGraph = serde_json::from_str(&json).unwrap();
        assert_eq!(g, back);
        assert!(serde_json::from_str::<DiGraph>(r#"{"n":2,"edges":[[0,0]]}"#).is_err());
    }
}
