//! Instance generators: the layered lower-bound families, their
//! essential-edge witnesses, and seeded random digraphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{reachable_avoiding, DiGraph, Edge, FailureSet, Pair, VertexId};

/// Generated graphs are capped at this many vertices.
pub const MAX_VERTICES: usize = 1 << 26;

/// `2r` vertex-disjoint paths of `N` vertices each, `P_1..P_r` (from `a_i`)
/// and `Q_1..Q_r` (ending in `b_j`), with every `p_{k,i} → q_{k,j}` edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardInstance {
    pub levels: usize,
    pub width: usize,
    pub graph: DiGraph,
    /// `a_1..a_r` followed by `b_1..b_r`.
    pub designated: Vec<VertexId>,
    pub pairs: Vec<Pair>,
}

/// Side of the bipartite layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    P,
    Q,
}

impl HardInstance {
    /// Vertex `p_{k,i}` or `q_{k,i}`, 1-based `k` and `i`.
    pub fn vertex(&self, k: usize, i: usize, side: Side) -> Result<VertexId> {
        if !(1..=self.levels).contains(&k) || !(1..=self.width).contains(&i) {
            return Err(Error::invalid(format!(
                "layout index (k={k}, i={i}) outside 1..={} x 1..={}",
                self.levels, self.width
            )));
        }
        let n = self.levels;
        Ok(match side {
            Side::P => (i - 1) * n + (k - 1),
            Side::Q => self.width * n + (i - 1) * n + (k - 1),
        })
    }

    pub fn a(&self, i: usize) -> Result<VertexId> {
        self.vertex(1, i, Side::P)
    }

    pub fn b(&self, j: usize) -> Result<VertexId> {
        self.vertex(self.levels, j, Side::Q)
    }

    pub fn bipartite_edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.levels * self.width * self.width);
        for k in 1..=self.levels {
            for i in 1..=self.width {
                for j in 1..=self.width {
                    out.push((self.vertex(k, i, Side::P).unwrap(), self.vertex(k, j, Side::Q).unwrap()));
                }
            }
        }
        out
    }
}

fn checked_size(parts: &[usize]) -> Result<usize> {
    let n = parts
        .iter()
        .try_fold(1usize, |acc, &x| acc.checked_mul(x))
        .filter(|&n| n <= MAX_VERTICES)
        .ok_or_else(|| Error::invalid(format!("instance with factors {parts:?} exceeds {MAX_VERTICES} vertices")))?;
    Ok(n)
}

pub fn gen_hard_dual(levels: usize, width: usize) -> Result<HardInstance> {
    if levels == 0 || width == 0 {
        return Err(Error::invalid("N and r must be at least 1"));
    }
    let n = checked_size(&[2, levels, width])?;
    let p = |k: usize, i: usize| (i - 1) * levels + (k - 1);
    let q = |k: usize, j: usize| width * levels + (j - 1) * levels + (k - 1);
    let mut edges = Vec::new();
    for i in 1..=width {
        edges.extend((1..levels).map(|k| (p(k, i), p(k + 1, i))));
    }
    for j in 1..=width {
        edges.extend((1..levels).map(|k| (q(k, j), q(k + 1, j))));
    }
    for k in 1..=levels {
        for i in 1..=width {
            edges.extend((1..=width).map(|j| (p(k, i), q(k, j))));
        }
    }
    let graph = DiGraph::from_edges(n, edges)?;
    let a: Vec<VertexId> = (1..=width).map(|i| p(1, i)).collect();
    let b: Vec<VertexId> = (1..=width).map(|j| q(levels, j)).collect();
    let pairs = a.iter().flat_map(|&s| b.iter().map(move |&t| (s, t))).collect();
    let designated = a.into_iter().chain(b).collect();
    Ok(HardInstance { levels, width, graph, designated, pairs })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EssentialWitness {
    pub edge: Edge,
    pub pair: Pair,
    pub failures: FailureSet,
}

pub fn essential_edge_witness(inst: &HardInstance, k: usize, i: usize, j: usize) -> Result<EssentialWitness> {
    let edge = (inst.vertex(k, i, Side::P)?, inst.vertex(k, j, Side::Q)?);
    let mut failures = Vec::new();
    if k < inst.levels {
        failures.push((edge.0, inst.vertex(k + 1, i, Side::P)?));
    }
    if k > 1 {
        failures.push((inst.vertex(k - 1, j, Side::Q)?, edge.1));
    }
    Ok(EssentialWitness { edge, pair: (inst.a(i)?, inst.b(j)?), failures: FailureSet::new(failures) })
}

/// Reachable under the witness failures with the edge present, unreachable
/// once it is deleted too.
pub fn check_witness(inst: &HardInstance, w: &EssentialWitness) -> Result<bool> {
    let g = &inst.graph;
    let mut blocked = w.failures.resolve(g)?;
    let (s, t) = w.pair;
    let before = reachable_avoiding(g, s, t, &blocked);
    blocked.push(g.check_edge(w.edge)?);
    Ok(before && !reachable_avoiding(g, s, t, &blocked))
}

/// The dual family widened to `r = 2^k·ρ`, with `ρ` out-trees fanning from
/// new roots `x_j` into consecutive groups of `2^k` a-vertices and `ρ`
/// in-trees collecting consecutive groups of b-vertices into roots `y_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardMulti {
    pub base: HardInstance,
    pub graph: DiGraph,
    /// `x_1..x_ρ` followed by `y_1..y_ρ`.
    pub roots: Vec<VertexId>,
    /// Every `(x_i, y_j)`.
    pub pairs: Vec<Pair>,
}

pub fn gen_hard_multi(rho: usize, k: usize, levels: usize) -> Result<HardMulti> {
    if rho == 0 || k == 0 {
        return Err(Error::invalid("rho and k must be at least 1"));
    }
    if k >= 24 {
        return Err(Error::invalid(format!("k = {k} too large")));
    }
    let leaves = 1usize << k;
    let width = checked_size(&[leaves, rho])?;
    checked_size(&[2, width, levels.max(1)])?;
    let base = gen_hard_dual(levels, width)?;
    let internal = leaves - 1;
    let n = checked_size(&[2, rho, internal])?
        .checked_add(base.graph.n())
        .filter(|&n| n <= MAX_VERTICES)
        .ok_or_else(|| Error::invalid("hard multi instance too large"))?;

    let mut edges = base.graph.edges().to_vec();
    let mut next = base.graph.n();
    let mut roots = vec![0; 2 * rho];
    for (t, side) in [Side::P, Side::Q].into_iter().enumerate() {
        for j in 0..rho {
            // Heap-indexed nodes 1..2^{k+1}; indices ≥ 2^k are leaves.
            let ids: Vec<VertexId> = (0..2 * leaves)
                .map(|h| {
                    if h == 0 {
                        usize::MAX
                    } else if h >= leaves {
                        let member = j * leaves + (h - leaves) + 1;
                        match side {
                            Side::P => base.a(member).unwrap(),
                            Side::Q => base.b(member).unwrap(),
                        }
                    } else {
                        next += 1;
                        next - 1
                    }
                })
                .collect();
            roots[t * rho + j] = ids[1];
            for h in 2..2 * leaves {
                let (parent, child) = (ids[h / 2], ids[h]);
                edges.push(if side == Side::P { (parent, child) } else { (child, parent) });
            }
        }
    }
    debug_assert_eq!(next, n);
    let graph = DiGraph::from_edges(n, edges)?;
    let (xs, ys) = roots.split_at(rho);
    let pairs = xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect();
    Ok(HardMulti { base, graph, roots, pairs })
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("edge probability {p} outside [0, 1]")))
    }
}

fn gen_random(n: usize, p: f64, seed: u64, dag: bool) -> Result<DiGraph> {
    check_probability(p)?;
    if n > MAX_VERTICES {
        return Err(Error::invalid(format!("{n} vertices exceeds {MAX_VERTICES}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && (!dag || u < v) && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    DiGraph::from_edges(n, edges)
}

pub fn gen_random_digraph(n: usize, p: f64, seed: u64) -> Result<DiGraph> {
    gen_random(n, p, seed, false)
}

pub fn gen_random_dag(n: usize, p: f64, seed: u64) -> Result<DiGraph> {
    gen_random(n, p, seed, true)
}

/// `count` pairs drawn uniformly (with repetition) from the seeded RNG.
pub fn random_pairs(n: usize, count: usize, seed: u64) -> Vec<Pair> {
    if n == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
}
