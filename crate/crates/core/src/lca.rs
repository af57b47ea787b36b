//! Rooted forests with constant-time lowest common ancestor (Euler tour plus
//! sparse table) and logarithmic level ancestor (jump pointers).

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "RawForest", into = "RawForest")]
pub struct Forest {
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    root: Vec<usize>,
    first: Vec<usize>,
    euler: Vec<usize>,
    sparse: Vec<Vec<usize>>,
    up: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawForest {
    parent: Vec<Option<usize>>,
}

impl From<RawForest> for Forest {
    fn from(raw: RawForest) -> Self {
        Forest::new(raw.parent)
    }
}

impl From<Forest> for RawForest {
    fn from(f: Forest) -> Self {
        RawForest { parent: f.parent }
    }
}

impl Forest {
    /// `parent[v]` is `v`'s parent, `None` for roots. Must be acyclic.
    pub fn new(parent: Vec<Option<usize>>) -> Self {
        let n = parent.len();
        let mut children = vec![Vec::new(); n];
        let mut roots = Vec::new();
        for (v, p) in parent.iter().enumerate() {
            match p {
                Some(p) => children[*p].push(v),
                None => roots.push(v),
            }
        }
        let mut depth = vec![0; n];
        let mut root = vec![0; n];
        let mut first = vec![0; n];
        let mut euler = Vec::with_capacity(2 * n);
        for &r in &roots {
            // (vertex, next child index)
            let mut stack = vec![(r, 0usize)];
            root[r] = r;
            first[r] = euler.len();
            euler.push(r);
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if let Some(&c) = children[v].get(*next) {
                    *next += 1;
                    depth[c] = depth[v] + 1;
                    root[c] = r;
                    first[c] = euler.len();
                    euler.push(c);
                    stack.push((c, 0));
                } else {
                    stack.pop();
                    if let Some(&(p, _)) = stack.last() {
                        euler.push(p);
                    }
                }
            }
        }
        assert_eq!(first.len(), n);
        assert!(euler.len() >= n, "parent array contains a cycle");

        let shallower = |a: usize, b: usize| if depth[a] <= depth[b] { a } else { b };
        let mut sparse = vec![euler.clone()];
        let mut w = 1;
        while 2 * w <= euler.len() {
            let prev = sparse.last().unwrap();
            let row = (0..=euler.len() - 2 * w).map(|i| shallower(prev[i], prev[i + w])).collect();
            sparse.push(row);
            w *= 2;
        }

        let mut up = vec![(0..n).map(|v| parent[v].unwrap_or(v)).collect::<Vec<_>>()];
        let max_depth = depth.iter().copied().max().unwrap_or(0);
        while (1 << up.len()) <= max_depth {
            let prev = up.last().unwrap();
            up.push((0..n).map(|v| prev[prev[v]]).collect());
        }
        Forest { parent, depth, root, first, euler, sparse, up }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn root(&self, v: usize) -> usize {
        self.root[v]
    }

    /// Lowest common ancestor, `None` when `u` and `v` lie in different trees.
    pub fn lca(&self, u: usize, v: usize) -> Option<usize> {
        if self.root[u] != self.root[v] {
            return None;
        }
        let (mut a, mut b) = (self.first[u], self.first[v]);
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        let len = b - a + 1;
        let k = usize::BITS as usize - 1 - len.leading_zeros() as usize;
        let (x, y) = (self.sparse[k][a], self.sparse[k][b + 1 - (1 << k)]);
        Some(if self.depth[x] <= self.depth[y] { x } else { y })
    }

    /// Ancestor of `v` at depth `d` (`d <= depth(v)`).
    pub fn level_ancestor(&self, v: usize, d: usize) -> usize {
        assert!(d <= self.depth[v], "level {d} below vertex depth {}", self.depth[v]);
        let mut climb = self.depth[v] - d;
        let mut v = v;
        let mut k = 0;
        while climb > 0 {
            if climb & 1 == 1 {
                v = self.up[k][v];
            }
            climb >>= 1;
            k += 1;
        }
        v
    }

    pub(crate) fn words(&self) -> usize {
        self.parent.len() * 4 + self.euler.len() + self.sparse.iter().map(Vec::len).sum::<usize>()
            + self.up.iter().map(Vec::len).sum::<usize>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_lca(parent: &[Option<usize>], u: usize, v: usize) -> Option<usize> {
        let chain = |mut x: usize| {
            let mut out = vec![x];
            while let Some(p) = parent[x] {
                out.push(p);
                x = p;
            }
            out
        };
        let cu = chain(u);
        chain(v).into_iter().find(|x| cu.contains(x))
    }

    #[test]
    fn small_forest() {
        // 0 - 1 - 2, 1 - 3; 4 alone
        let f = Forest::new(vec![None, Some(0), Some(1), Some(1), None]);
        assert_eq!(f.lca(2, 3), Some(1));
        assert_eq!(f.lca(2, 0), Some(0));
        assert_eq!(f.lca(2, 4), None);
        assert_eq!(f.level_ancestor(2, 1), 1);
        assert_eq!(f.level_ancestor(2, 0), 0);
        assert_eq!(f.root(3), 0);
        let empty = Forest::new(vec![]);
        assert!(empty.is_empty());
    }

    #[test]
    fn serde_rebuilds_indexes() {
        let f = Forest::new(vec![None, Some(0), Some(0)]);
        let back: Forest = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(f, back);
    }

    proptest! {
        #[test]
        fn matches_naive(raw in proptest::collection::vec((any::<bool>(), any::<usize>()), 1..60)) {
            // Parents always point to a smaller index, so the array is acyclic.
            let parent: Vec<Option<usize>> = raw
                .iter()
                .enumerate()
                .map(|(v, &(has, p))| (has && v > 0).then(|| p % v))
                .collect();
            let f = Forest::new(parent.clone());
            for u in 0..parent.len() {
                for v in 0..parent.len() {
                    prop_assert_eq!(f.lca(u, v), naive_lca(&parent, u, v));
                }
                for d in 0..=f.depth(u) {
                    let a = f.level_ancestor(u, d);
                    prop_assert_eq!(f.depth(a), d);
                    prop_assert_eq!(naive_lca(&parent, u, a), Some(a));
                }
            }
        }
    }
}
