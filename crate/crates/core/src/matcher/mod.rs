//! Vertex matching along chains (strokes or boundary loops).
//!
//! A [`ChainSet`] is the matching domain of one phase: strokes with their
//! Frenet frames for inter-stroke matching, boundary loops with surface
//! frames for gap closing. Candidate generation, the per-chain Viterbi pass
//! and the neighbour statistics all operate on it.

pub mod candidates;
pub mod neighbors;
pub mod viterbi;

use serde::Serialize;

use crate::config::Config;
use crate::geom::Vec3;
use crate::mesh::VId;
use crate::scoring::{persistence_log_score, sigma_for, vertex_score, FramedPoint, Side};
use crate::stroke::{Drawing, FrenetFrame};

pub use candidates::{
    baseline_candidates, boundary_candidates, restricted_candidates, BoundaryInfo, BoundaryPhase, CandidateSet,
};
pub use neighbors::{dominant_neighbors, matching_frequencies, Frequencies, NeighborMap};
pub use viterbi::{best_path, run_matching, viterbi_chain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VertexRef {
    pub chain: u32,
    pub index: u32,
}

impl VertexRef {
    pub fn new(chain: usize, index: usize) -> VertexRef {
        VertexRef {
            chain: chain as u32,
            index: index as u32,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ChainVertex {
    pub vid: VId,
    pub position: Vec3,
    pub width: f64,
    pub frame: Option<FrenetFrame>,
    pub color: [f64; 3],
    /// Within one stroke width (arc length) of an open chain's end.
    pub near_end: bool,
}

#[derive(Debug, Clone)]
pub struct Chain {
    pub vertices: Vec<ChainVertex>,
    pub cyclic: bool,
    /// Stroke id for stroke chains, mesh component id for boundary loops.
    pub group: usize,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// How `d_max` (and sigma) is obtained for a vertex pair.
#[derive(Debug, Clone)]
pub enum Reach {
    /// `width_factor * (w(p) + w(q)) / 2`.
    Widths { width_factor: f64 },
    /// One `d_max` per chain group; sigma averages the two groups.
    PerGroup(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct ChainSet {
    pub chains: Vec<Chain>,
    offsets: Vec<usize>,
    pub reach: Reach,
}

impl ChainSet {
    pub fn new(chains: Vec<Chain>, reach: Reach) -> ChainSet {
        let mut offsets = Vec::with_capacity(chains.len() + 1);
        let mut acc = 0;
        for c in &chains {
            offsets.push(acc);
            acc += c.len();
        }
        offsets.push(acc);
        ChainSet { chains, offsets, reach }
    }

    /// One open chain per stroke; vertex ids follow stroke order.
    pub fn from_drawing(drawing: &Drawing, config: &Config) -> ChainSet {
        let mut chains = Vec::with_capacity(drawing.strokes.len());
        let mut vid: VId = 0;
        for (s, stroke) in drawing.strokes.iter().enumerate() {
            let frames = stroke.frames();
            let arc = stroke.arc_lengths();
            let total = *arc.last().unwrap_or(&0.0);
            let vertices = stroke
                .vertices
                .iter()
                .zip(frames)
                .enumerate()
                .map(|(i, (v, frame))| {
                    let cv = ChainVertex {
                        vid,
                        position: v.position,
                        width: v.width,
                        frame,
                        color: stroke.color,
                        near_end: arc[i].min(total - arc[i]) <= v.width,
                    };
                    vid += 1;
                    cv
                })
                .collect();
            chains.push(Chain {
                vertices,
                cyclic: false,
                group: s,
            });
        }
        ChainSet::new(
            chains,
            Reach::Widths {
                width_factor: config.width_factor,
            },
        )
    }

    pub fn vertex_count(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn flat(&self, r: VertexRef) -> usize {
        self.offsets[r.chain as usize] + r.index as usize
    }

    pub fn unflat(&self, k: usize) -> VertexRef {
        let c = self.offsets.partition_point(|&o| o <= k) - 1;
        VertexRef::new(c, k - self.offsets[c])
    }

    pub fn vertex(&self, r: VertexRef) -> &ChainVertex {
        &self.chains[r.chain as usize].vertices[r.index as usize]
    }

    pub fn refs(&self) -> impl Iterator<Item = VertexRef> + '_ {
        self.chains
            .iter()
            .enumerate()
            .flat_map(|(c, ch)| (0..ch.len()).map(move |i| VertexRef::new(c, i)))
    }

    pub fn next(&self, r: VertexRef) -> Option<VertexRef> {
        let ch = &self.chains[r.chain as usize];
        let i = r.index as usize;
        if i + 1 < ch.len() {
            Some(VertexRef::new(r.chain as usize, i + 1))
        } else if ch.cyclic && ch.len() > 2 {
            Some(VertexRef::new(r.chain as usize, 0))
        } else {
            None
        }
    }

    pub fn prev(&self, r: VertexRef) -> Option<VertexRef> {
        let ch = &self.chains[r.chain as usize];
        let i = r.index as usize;
        if i > 0 {
            Some(VertexRef::new(r.chain as usize, i - 1))
        } else if ch.cyclic && ch.len() > 2 {
            Some(VertexRef::new(r.chain as usize, ch.len() - 1))
        } else {
            None
        }
    }

    /// Polyline neighbours along the same chain.
    pub fn adjacent(&self, a: VertexRef, b: VertexRef) -> bool {
        self.next(a) == Some(b) || self.prev(a) == Some(b)
    }

    pub fn framed(&self, r: VertexRef) -> Option<FramedPoint> {
        let v = self.vertex(r);
        v.frame.map(|frame| FramedPoint {
            position: v.position,
            frame,
            width: v.width,
        })
    }

    /// Candidate radius around `p` for the pair `(p, q)`.
    pub fn max_dist(&self, p: VertexRef, q: VertexRef) -> f64 {
        match &self.reach {
            Reach::Widths { width_factor } => width_factor * (self.vertex(p).width + self.vertex(q).width) / 2.0,
            Reach::PerGroup(d) => d[self.chains[p.chain as usize].group],
        }
    }

    /// Upper bound of `max_dist` over all pairs.
    pub fn max_reach(&self) -> f64 {
        match &self.reach {
            Reach::Widths { width_factor } => {
                let w = self
                    .chains
                    .iter()
                    .flat_map(|c| c.vertices.iter().map(|v| v.width))
                    .fold(0.0, f64::max);
                width_factor * w
            }
            Reach::PerGroup(d) => d.iter().copied().fold(0.0, f64::max),
        }
    }

    pub fn sigma(&self, p: VertexRef, q: VertexRef) -> f64 {
        match &self.reach {
            Reach::Widths { width_factor } => {
                let cfg = Config {
                    width_factor: *width_factor,
                    ..Config::default()
                };
                sigma_for(self.vertex(p).width, self.vertex(q).width, &cfg)
            }
            Reach::PerGroup(d) => {
                (d[self.chains[p.chain as usize].group] + d[self.chains[q.chain as usize].group]) / 2.0
            }
        }
    }

    /// Log vertex score, `None` when either frame is degenerate.
    pub fn emission(&self, p: VertexRef, q: VertexRef, side: Side) -> Option<f64> {
        let a = self.framed(p)?;
        let b = self.framed(q)?;
        Some(vertex_score(&a, &b, side, self.sigma(p, q)).log_score)
    }

    /// Log persistence score of matching `p_i -> q_i`, `p_i1 -> q_i1`.
    pub fn transition(&self, p_i: VertexRef, p_i1: VertexRef, q_i: VertexRef, q_i1: VertexRef) -> f64 {
        persistence_log_score(
            &self.vertex(p_i).position,
            &self.vertex(p_i1).position,
            &self.vertex(q_i).position,
            &self.vertex(q_i1).position,
            self.sigma(p_i, q_i),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Match {
    pub target: VertexRef,
    /// Log vertex score of the pair.
    pub log_score: f64,
}

/// Per vertex and side: the chosen match, plus per-chain log totals.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchTable {
    pub entries: Vec<[Option<Match>; 2]>,
    pub chain_scores: Vec<[f64; 2]>,
}

impl MatchTable {
    pub fn empty(chains: &ChainSet) -> MatchTable {
        MatchTable {
            entries: vec![[None, None]; chains.vertex_count()],
            chain_scores: vec![[0.0, 0.0]; chains.chains.len()],
        }
    }

    pub fn get(&self, chains: &ChainSet, r: VertexRef, side: Side) -> Option<Match> {
        self.entries[chains.flat(r)][side.index()]
    }

    /// All recorded matches in `(chain, index, side)` order.
    pub fn iter<'a>(&'a self, chains: &'a ChainSet) -> impl Iterator<Item = (VertexRef, Side, Match)> + 'a {
        chains.refs().flat_map(move |r| {
            let e = self.entries[chains.flat(r)];
            Side::BOTH
                .into_iter()
                .filter_map(move |s| e[s.index()].map(|m| (r, s, m)))
        })
    }

    pub fn match_count(&self) -> usize {
        self.entries.iter().map(|e| e.iter().flatten().count()).sum()
    }

    /// `M = sum over chains of M_l + M_r` in the log domain.
    pub fn total_log_score(&self) -> f64 {
        self.chain_scores.iter().map(|s| s[0] + s[1]).sum()
    }

    /// Debug dump, one JSON object per line.
    pub fn to_json_lines(&self, chains: &ChainSet) -> String {
        let mut out = String::new();
        for (r, side, m) in self.iter(chains) {
            out.push_str(
                &serde_json::json!({
                    "from": [r.chain, r.index],
                    "side": side.tag(),
                    "to": [m.target.chain, m.target.index],
                    "log_score": m.log_score,
                })
                .to_string(),
            );
            out.push('\n');
        }
        out
    }
}
