//! Candidate sets for the matching passes.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{ChainSet, NeighborMap, VertexRef};
use crate::config::Config;
use crate::geom::Vec3;
use crate::scoring::Side;

/// Per vertex and side: the vertices it may be matched to, sorted by
/// `(chain, index)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CandidateSet {
    pub lists: Vec<[Vec<VertexRef>; 2]>,
}

impl CandidateSet {
    pub fn get(&self, chains: &ChainSet, r: VertexRef, side: Side) -> &[VertexRef] {
        &self.lists[chains.flat(r)][side.index()]
    }

    pub fn total(&self) -> usize {
        self.lists.iter().map(|l| l[0].len() + l[1].len()).sum()
    }
}

/// Uniform grid over chain vertices.
struct Grid {
    cell: f64,
    cells: HashMap<[i64; 3], Vec<VertexRef>>,
}

impl Grid {
    fn new(chains: &ChainSet, cell: f64) -> Grid {
        let mut cells: HashMap<[i64; 3], Vec<VertexRef>> = HashMap::new();
        for r in chains.refs() {
            cells.entry(Self::key(&chains.vertex(r).position, cell)).or_default().push(r);
        }
        Grid { cell, cells }
    }

    fn key(p: &Vec3, cell: f64) -> [i64; 3] {
        [
            (p.x / cell).floor() as i64,
            (p.y / cell).floor() as i64,
            (p.z / cell).floor() as i64,
        ]
    }

    /// Every vertex in the 27 cells around `p` (a superset of the ball of
    /// radius `cell`).
    fn around(&self, p: &Vec3) -> Vec<VertexRef> {
        let k = Self::key(p, self.cell);
        let mut out = Vec::new();
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(v) = self.cells.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) {
                        out.extend_from_slice(v);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// The geometric conditions shared by every pass.
pub(crate) fn baseline_ok(chains: &ChainSet, p: VertexRef, side: Side, q: VertexRef, cos_cone: f64, color_cue: bool) -> bool {
    if p == q || chains.adjacent(p, q) {
        return false;
    }
    let vp = chains.vertex(p);
    let vq = chains.vertex(q);
    let (Some(fp), Some(fq)) = (vp.frame, vq.frame) else {
        return false;
    };
    if color_cue && vp.color != vq.color {
        return false;
    }
    let d = vq.position - vp.position;
    let dist = d.norm();
    if dist > chains.max_dist(p, q) || dist == 0.0 {
        return false;
    }
    if d.dot(&(fp.binormal * side.sign())) < cos_cone * dist {
        return false;
    }
    if (vp.near_end || vq.near_end) && d.dot(&fq.binormal).abs() < cos_cone * dist {
        return false;
    }
    true
}

fn collect<F>(chains: &ChainSet, sides: &[Side], filter: F) -> CandidateSet
where
    F: Fn(VertexRef, Side, VertexRef) -> bool + Sync,
{
    let reach = chains.max_reach();
    let grid = Grid::new(chains, if reach > 0.0 { reach } else { 1.0 });
    let refs: Vec<VertexRef> = chains.refs().collect();
    let lists = refs
        .par_iter()
        .map(|&p| {
            let near = grid.around(&chains.vertex(p).position);
            let mut out: [Vec<VertexRef>; 2] = [Vec::new(), Vec::new()];
            for &side in sides {
                out[side.index()] = near.iter().copied().filter(|&q| filter(p, side, q)).collect();
            }
            out
        })
        .collect();
    CandidateSet { lists }
}

/// Both sides, every chain, 60 degree cone.
pub fn baseline_candidates(chains: &ChainSet, config: &Config, color_cue: bool) -> CandidateSet {
    let cos = config.cone_angle_deg.to_radians().cos();
    collect(chains, &Side::BOTH, |p, s, q| baseline_ok(chains, p, s, q, cos, color_cue))
}

/// Baseline conditions with targets limited to the chain itself and its
/// dominant neighbour on that side.
pub fn restricted_candidates(chains: &ChainSet, neighbors: &NeighborMap, config: &Config, color_cue: bool) -> CandidateSet {
    let cos = config.cone_angle_deg.to_radians().cos();
    collect(chains, &Side::BOTH, |p, s, q| {
        let allowed = q.chain == p.chain || neighbors.get(p.chain as usize, s).map(|n| n.target) == Some(q.chain as usize);
        allowed && baseline_ok(chains, p, s, q, cos, color_cue)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryPhase {
    /// Stroke chains, matching restricted to open boundary sides of the same
    /// mesh component.
    Extension,
    /// Boundary-loop chains of all components, left side only (the loop
    /// binormal points away from the surface).
    Gap,
}

/// Mesh boundary data per chain vertex (flat index).
#[derive(Debug, Clone, Default)]
pub struct BoundaryInfo {
    /// Component of the vertex, `None` off the boundary.
    pub component: Vec<Option<usize>>,
    /// Whether each side of the vertex faces an uncovered region.
    pub open: Vec<[bool; 2]>,
}

pub fn boundary_candidates(
    chains: &ChainSet,
    info: &BoundaryInfo,
    phase: BoundaryPhase,
    config: &Config,
    color_cue: bool,
) -> CandidateSet {
    match phase {
        BoundaryPhase::Extension => {
            let cos = config.cone_angle_deg.to_radians().cos();
            collect(chains, &Side::BOTH, |p, s, q| {
                let (kp, kq) = (chains.flat(p), chains.flat(q));
                let (Some(cp), Some(cq)) = (info.component[kp], info.component[kq]) else {
                    return false;
                };
                if cp != cq || !info.open[kp][s.index()] {
                    return false;
                }
                if !baseline_ok(chains, p, s, q, cos, color_cue) {
                    return false;
                }
                // q must face p with one of its open sides
                let fq = chains.vertex(q).frame.expect("checked by baseline");
                match Side::of(&(chains.vertex(p).position - chains.vertex(q).position), &fq.binormal, 0.0) {
                    Some(sq) => info.open[kq][sq.index()],
                    None => false,
                }
            })
        }
        BoundaryPhase::Gap => {
            let cos = config.boundary_cone_angle_deg.to_radians().cos();
            collect(chains, &[Side::Left], |p, s, q| baseline_ok(chains, p, s, q, cos, color_cue))
        }
    }
}
