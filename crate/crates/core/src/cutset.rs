//! All-pairs reachability under one vertex failure, restricted to a set of
//! (s,t) cut vertices.
//!
//! Cut vertices appear in the same order `σ` on every s→t path, and any path
//! from a vertex before `x` to one after `x` passes through `x`. Two forests
//! over `C` (nearest strongly connected predecessor / successor) and the map
//! `H` then answer "does y reach z in G − x" for `x, y, z ∈ C` with a
//! constant number of forest lookups.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{cut_elements, reaches, strongly_connected_masked, DiGraph, VertexId};
use crate::lca::Forest;
use crate::Words;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Neighbor {
    Successor,
    Predecessor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutSetApr {
    /// The cut-vertex subset in σ-order.
    pub order: Vec<VertexId>,
    pos: BTreeMap<VertexId, usize>,
    /// Forests over positions in `order`.
    pub pred: Forest,
    pub succ: Forest,
    /// `h[a]`: first position `b` with an a→b path avoiding the members of
    /// `C` strictly between `b` and `a`.
    pub h: Vec<usize>,
}

pub fn build_cutset_apr(g: &DiGraph, s: VertexId, t: VertexId, c: &[VertexId]) -> Result<CutSetApr> {
    let cut = cut_elements(g, s, t)?;
    let sigma: BTreeMap<VertexId, usize> = cut.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut last = None;
    for &v in c {
        let &p = sigma
            .get(&v)
            .ok_or_else(|| Error::invalid(format!("vertex {v} is not a ({s},{t}) cut vertex")))?;
        if last.is_some_and(|l| p <= l) {
            return Err(Error::invalid(format!("cut vertex {v} out of σ-order")));
        }
        last = Some(p);
    }
    Ok(build_ordered(g, c))
}

// Trusts that `c` is a set of cut vertices of one pair in path order.
pub(crate) fn build_ordered(g: &DiGraph, c: &[VertexId]) -> CutSetApr {
    let k = c.len();
    let mut gone = vec![false; g.n()];
    let mut pred_parent = vec![None; k];
    for w in 0..k {
        for u in (0..w).rev() {
            // G − L(u): drop C-vertices before u.
            c[..u].iter().for_each(|&x| gone[x] = true);
            let sc = strongly_connected_masked(g, c[u], c[w], &gone);
            c[..u].iter().for_each(|&x| gone[x] = false);
            if sc {
                pred_parent[w] = Some(u);
                break;
            }
        }
    }
    let mut succ_parent = vec![None; k];
    for w in 0..k {
        for u in w + 1..k {
            c[u + 1..].iter().for_each(|&x| gone[x] = true);
            let sc = strongly_connected_masked(g, c[u], c[w], &gone);
            c[u + 1..].iter().for_each(|&x| gone[x] = false);
            if sc {
                succ_parent[w] = Some(u);
                break;
            }
        }
    }
    let mut h = vec![0; k];
    for a in 0..k {
        h[a] = (0..=a)
            .find(|&b| {
                let between = &c[(b + 1).min(a)..a];
                between.iter().for_each(|&x| gone[x] = true);
                let ok = reaches(g, c[a], c[b], |_| true, |v| !gone[v]);
                between.iter().for_each(|&x| gone[x] = false);
                ok
            })
            .expect("a reaches itself");
    }
    CutSetApr {
        order: c.to_vec(),
        pos: c.iter().enumerate().map(|(i, &v)| (v, i)).collect(),
        pred: Forest::new(pred_parent),
        succ: Forest::new(succ_parent),
        h,
    }
}

impl CutSetApr {
    pub fn position(&self, v: VertexId) -> Result<usize> {
        self.pos.get(&v).copied().ok_or_else(|| Error::invalid(format!("vertex {v} not in the cut set")))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.pos.contains_key(&v)
    }

    /// Nearest member after `x` strongly connected to `y` in G − x
    /// (`Successor`, requires `x <σ y`), or nearest before `x`
    /// (`Predecessor`, requires `y <σ x`).
    pub fn order_neighbor(&self, x: VertexId, y: VertexId, dir: Neighbor) -> Result<VertexId> {
        let (px, py) = (self.position(x)?, self.position(y)?);
        let p = match dir {
            Neighbor::Successor if px < py => neighbor(&self.pred, px, py, |a, b| a < b),
            Neighbor::Predecessor if py < px => neighbor(&self.succ, px, py, |a, b| a > b),
            _ => return Err(Error::invalid(format!("order precondition violated for x={x}, y={y}"))),
        };
        Ok(self.order[p])
    }

    /// Whether `z` is reachable from `y` once `x` is removed.
    pub fn query(&self, x: VertexId, y: VertexId, z: VertexId) -> Result<bool> {
        let (px, py, pz) = (self.position(x)?, self.position(y)?, self.position(z)?);
        Ok(self.query_pos(px, py, pz))
    }

    pub(crate) fn query_pos(&self, x: usize, y: usize, z: usize) -> bool {
        if x == y || x == z {
            return false;
        }
        if y == z {
            return true;
        }
        let y0 = || neighbor(&self.pred, x, y, |a, b| a < b);
        let z0 = || neighbor(&self.succ, x, z, |a, b| a > b);
        if y < x && x < z {
            false
        } else if z < x && x < y {
            self.h[y0()] <= z0()
        } else if x < y && x < z {
            y < z || y0() <= z
        } else {
            // y and z both before x.
            y < z || y <= z0()
        }
    }
}

// Nearest position `b` on the far side of `x` (per `beyond`) strongly
// connected to `y` in G − x, via the forest whose parents point back toward x.
fn neighbor(f: &Forest, x: usize, y: usize, beyond: impl Fn(usize, usize) -> bool) -> usize {
    let r = f.root(y);
    if beyond(x, r) {
        return r;
    }
    match f.lca(x, y) {
        Some(a) if a != y => f.level_ancestor(y, f.depth(a) + 1),
        _ => r,
    }
}

impl Words for CutSetApr {
    fn words(&self) -> usize {
        3 * self.order.len() + self.pred.words() + self.succ.words()
    }
}
