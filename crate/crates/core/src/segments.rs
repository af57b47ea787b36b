//! Shared first stage of the pairwise dual-failure constructions: skeletons
//! for every pair, the family of strand end segments, a fractional hitting
//! set over it, and the set of pairs whose segments were all hit.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{reachable_avoiding, DiGraph, Pair, VertexId};
use crate::hitting::{fractional_hitting_set, HitResult, SetFamily};
use crate::skeleton::{build_pair_skeleton, PairSkeleton};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairShape {
    Unreachable,
    /// `s == t`.
    Trivial,
    Strands(Box<PairSkeleton>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub strand: usize,
    /// Last `L` vertices instead of the first `L`.
    pub tail: bool,
}

impl Segment {
    pub const ALL: [Segment; 4] = [
        Segment { strand: 0, tail: false },
        Segment { strand: 0, tail: true },
        Segment { strand: 1, tail: false },
        Segment { strand: 1, tail: true },
    ];

    pub fn of<'a>(&self, sk: &'a PairSkeleton, len: usize) -> &'a [VertexId] {
        let p = &sk.strands[self.strand];
        let take = len.min(p.len());
        if self.tail {
            &p[p.len() - take..]
        } else {
            &p[..take]
        }
    }
}

#[derive(Clone, Debug)]
pub struct SegmentStage {
    pub len: usize,
    pub pairs: Vec<Pair>,
    pub shapes: Vec<PairShape>,
    /// Owner pair index and segment of every family member.
    pub family: Vec<(usize, Segment)>,
    pub hit: HitResult,
    pub covered: Vec<bool>,
}

impl SegmentStage {
    pub fn covered_pairs(&self) -> Vec<Pair> {
        self.pairs.iter().zip(&self.covered).filter(|(_, &c)| c).map(|(&p, _)| p).collect()
    }

    pub fn chosen(&self) -> &[VertexId] {
        &self.hit.chosen
    }
}

pub fn pair_shape(g: &DiGraph, (s, t): Pair) -> Result<PairShape> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    Ok(if s == t {
        PairShape::Trivial
    } else if !reachable_avoiding(g, s, t, &[]) {
        PairShape::Unreachable
    } else {
        PairShape::Strands(Box::new(build_pair_skeleton(g, s, t)?))
    })
}

/// Only segments spanning a full `len` vertices join the family; a shorter
/// strand lies wholly inside its own end segments and needs no hitting.
/// Pairs without a skeleton are covered outright.
pub fn segment_stage(g: &DiGraph, pairs: &[Pair], len: usize) -> Result<SegmentStage> {
    let len = len.max(1);
    let shapes = pairs.iter().map(|&p| pair_shape(g, p)).collect::<Result<Vec<_>>>()?;
    let mut family = Vec::new();
    let mut sets = Vec::new();
    for (idx, shape) in shapes.iter().enumerate() {
        if let PairShape::Strands(sk) = shape {
            for seg in Segment::ALL {
                if sk.strands[seg.strand].len() >= len {
                    family.push((idx, seg));
                    sets.push(seg.of(sk, len).to_vec());
                }
            }
        }
    }
    let hit = fractional_hitting_set(&SetFamily { universe_size: g.n(), sets }, len)?;
    let mut covered = vec![true; pairs.len()];
    for (f, &(idx, _)) in family.iter().enumerate() {
        if !hit.hit_mask[f] {
            covered[idx] = false;
        }
    }
    Ok(SegmentStage { len, pairs: pairs.to_vec(), shapes, family, hit, covered })
}
