//! Greedy fractional hitting set.
//!
//! Repeatedly picks the vertex contained in the most not-yet-hit sets. After
//! `⌈4n/k⌉` rounds at most a tenth of the sets can remain unhit when every
//! set has at least `k` elements.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::VertexId;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    pub universe_size: usize,
    pub sets: Vec<Vec<VertexId>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HitResult {
    /// Vertices in the order they were picked.
    pub chosen: Vec<VertexId>,
    pub hit_mask: Vec<bool>,
}

impl HitResult {
    pub fn hit_count(&self) -> usize {
        self.hit_mask.iter().filter(|&&h| h).count()
    }
}

pub fn round_limit(n: usize, k: usize) -> usize {
    (4 * n).div_ceil(k)
}

pub fn fractional_hitting_set(fam: &SetFamily, k: usize) -> Result<HitResult> {
    if k == 0 {
        return Err(Error::invalid("hitting set parameter k must be positive"));
    }
    let n = fam.universe_size;
    let mut sets: Vec<Vec<VertexId>> = Vec::with_capacity(fam.sets.len());
    for (i, set) in fam.sets.iter().enumerate() {
        let mut set = set.clone();
        set.sort_unstable();
        set.dedup();
        if set.len() < k {
            return Err(Error::invalid(format!("set {i} has {} elements, fewer than k = {k}", set.len())));
        }
        if let Some(&v) = set.iter().find(|&&v| v >= n) {
            return Err(Error::UnknownVertex { vertex: v, n });
        }
        sets.push(set);
    }

    let mut member_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, set) in sets.iter().enumerate() {
        for &v in set {
            member_of[v].push(i);
        }
    }
    let mut count: Vec<usize> = member_of.iter().map(Vec::len).collect();
    let mut hit = vec![false; sets.len()];
    let mut remaining = sets.len();
    let mut chosen = Vec::new();

    for _ in 0..round_limit(n, k) {
        if remaining == 0 {
            break;
        }
        // max_by_key keeps the last maximum, so scan in reverse for lowest id.
        let best = (0..n).rev().max_by_key(|&v| count[v]);
        let Some(best) = best.filter(|&v| count[v] > 0) else { break };
        chosen.push(best);
        for &i in &member_of[best] {
            if !hit[i] {
                hit[i] = true;
                remaining -= 1;
                for &v in &sets[i] {
                    count[v] -= 1;
                }
            }
        }
    }
    Ok(HitResult { chosen, hit_mask: hit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fam(n: usize, sets: &[&[usize]]) -> SetFamily {
        SetFamily { universe_size: n, sets: sets.iter().map(|s| s.to_vec()).collect() }
    }

    #[test]
    fn small_examples() {
        let r = fractional_hitting_set(&fam(4, &[&[0, 1], &[1, 2], &[2, 3]]), 2).unwrap();
        assert_eq!(r.chosen, vec![1, 2]);
        assert_eq!(r.hit_count(), 3);

        let r = fractional_hitting_set(&fam(1, &[&[0]]), 1).unwrap();
        assert_eq!(r.chosen, vec![0]);
        assert!(r.hit_mask[0]);
    }

    #[test]
    fn disjoint_blocks() {
        let sets: Vec<Vec<usize>> = (0..100).map(|b| (10 * b..10 * b + 10).collect()).collect();
        let f = SetFamily { universe_size: 1000, sets };
        let r = fractional_hitting_set(&f, 10).unwrap();
        assert!(r.chosen.len() <= 400);
        assert_eq!(r.hit_count(), 100);
    }

    #[test]
    fn rejects_small_sets() {
        assert!(fractional_hitting_set(&fam(3, &[&[0, 1], &[2]]), 2).is_err());
        assert!(fractional_hitting_set(&fam(3, &[&[0, 0]]), 2).is_err());
        assert!(fractional_hitting_set(&fam(3, &[&[0, 5]]), 2).is_err());
        assert!(fractional_hitting_set(&fam(3, &[]), 0).is_err());
    }

    #[test]
    fn empty_family() {
        let r = fractional_hitting_set(&fam(5, &[]), 3).unwrap();
        assert!(r.chosen.is_empty());
    }

    proptest! {
        #[test]
        fn bounds_hold(n in 4usize..120, k in 1usize..6, m in 0usize..80, seed in any::<u64>()) {
            use rand::{seq::index::sample, SeedableRng};
            let k = k.min(n);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let sets: Vec<Vec<usize>> = (0..m).map(|_| sample(&mut rng, n, k).into_vec()).collect();
            let f = SetFamily { universe_size: n, sets };
            let r = fractional_hitting_set(&f, k).unwrap();
            prop_assert!(r.chosen.len() <= round_limit(n, k));
            prop_assert!(10 * r.hit_count() >= 9 * m);
            for (i, set) in f.sets.iter().enumerate() {
                prop_assert_eq!(r.hit_mask[i], set.iter().any(|v| r.chosen.contains(v)));
            }
            let again = fractional_hitting_set(&f, k).unwrap();
            prop_assert_eq!(again, r);
        }
    }
}
