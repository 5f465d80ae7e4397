//! Stroke and drawing types, per-vertex frames, hook trimming and plain
//! ribbon triangulation.

use std::cmp::Ordering;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::geom::{point_key, Vec3};

/// Cross products shorter than this mark a tangent parallel to the normal.
pub const DEGENERATE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct StrokeVertex {
    pub position: Vec3,
    pub normal: Vec3,
    /// Full ribbon width at this vertex.
    pub width: f64,
    pub stroke: usize,
    pub index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetFrame {
    pub tangent: Vec3,
    pub normal: Vec3,
    pub binormal: Vec3,
}

impl FrenetFrame {
    /// Builds a frame from a tangent direction and a normal; fails when the
    /// two are (nearly) parallel.
    pub fn from_tangent_normal(tangent: Vec3, normal: Vec3) -> Result<FrenetFrame, FrameError> {
        let tl = tangent.norm();
        if !(tl > 0.0) || !tl.is_finite() {
            return Err(FrameError::ZeroTangent);
        }
        let t = tangent / tl;
        let n = normal;
        let b = t.cross(&n);
        let bl = b.norm();
        if bl < DEGENERATE_EPS {
            return Err(FrameError::TangentParallelToNormal);
        }
        Ok(FrenetFrame {
            tangent: t,
            normal: n,
            binormal: b / bl,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum FrameError {
    #[error("tangent is parallel to the normal")]
    TangentParallelToNormal,
    #[error("stroke has coincident neighbours")]
    ZeroTangent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stroke {
    pub vertices: Vec<StrokeVertex>,
    pub color: [f64; 3],
    /// Parsed and carried along, never used for matching.
    pub timestamps: Option<Vec<f64>>,
}

impl Stroke {
    pub fn from_parts(
        positions: &[Vec3],
        normals: &[Vec3],
        widths: &[f64],
        color: [f64; 3],
    ) -> Stroke {
        let vertices = positions
            .iter()
            .zip(normals)
            .zip(widths)
            .enumerate()
            .map(|(i, ((p, n), w))| StrokeVertex {
                position: *p,
                normal: *n,
                width: *w,
                stroke: 0,
                index: i,
            })
            .collect();
        Stroke {
            vertices,
            color,
            timestamps: None,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn position(&self, i: usize) -> Vec3 {
        self.vertices[i].position
    }

    /// Cumulative arc length at every vertex.
    pub fn arc_lengths(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.len());
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                acc += (v.position - self.vertices[i - 1].position).norm();
            }
            out.push(acc);
        }
        out
    }

    pub fn length(&self) -> f64 {
        self.arc_lengths().last().copied().unwrap_or(0.0)
    }

    fn set_id(&mut self, id: usize) {
        for (i, v) in self.vertices.iter_mut().enumerate() {
            v.stroke = id;
            v.index = i;
        }
    }

    pub fn frames(&self) -> Vec<Option<FrenetFrame>> {
        (0..self.len()).map(|i| frame_at(self, i).ok()).collect()
    }

    fn content_cmp(&self, other: &Stroke) -> Ordering {
        let pos = |s: &Stroke| s.vertices.iter().map(|v| point_key(&v.position)).collect::<Vec<_>>();
        let rest = |s: &Stroke| {
            s.vertices
                .iter()
                .map(|v| {
                    let w = point_key(&Vec3::new(v.width, 0.0, 0.0))[0];
                    (w, point_key(&v.normal))
                })
                .collect::<Vec<_>>()
        };
        pos(self)
            .cmp(&pos(other))
            .then_with(|| point_key(&Vec3::from(self.color)).cmp(&point_key(&Vec3::from(other.color))))
            .then_with(|| rest(self).cmp(&rest(other)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Drawing {
    pub strokes: Vec<Stroke>,
    bbox_diagonal: f64,
}

impl Drawing {
    pub fn new(mut strokes: Vec<Stroke>) -> Result<Drawing> {
        if strokes.is_empty() {
            return Err(Error::Validation("drawing has no strokes".into()));
        }
        for (s, stroke) in strokes.iter().enumerate() {
            if stroke.len() < 2 {
                return Err(Error::Validation(format!("stroke {s} has fewer than 2 vertices")));
            }
            for v in &stroke.vertices {
                if !v.position.iter().all(|x| x.is_finite()) || !v.normal.iter().all(|x| x.is_finite()) {
                    return Err(Error::Validation(format!("stroke {s} has non-finite coordinates")));
                }
                if !(v.width > 0.0) || !v.width.is_finite() {
                    return Err(Error::Validation(format!("stroke {s} has non-positive width")));
                }
            }
        }
        for (i, s) in strokes.iter_mut().enumerate() {
            s.set_id(i);
        }
        let bbox_diagonal = bbox_diagonal(strokes.iter().flat_map(|s| s.vertices.iter().map(|v| v.position)));
        Ok(Drawing {
            strokes,
            bbox_diagonal,
        })
    }

    pub fn bbox_diagonal(&self) -> f64 {
        self.bbox_diagonal
    }

    pub fn vertex_count(&self) -> usize {
        self.strokes.iter().map(Stroke::len).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.strokes.iter().map(|s| s.len().saturating_sub(1)).sum()
    }

    /// Reorders strokes by content so that results do not depend on file
    /// order. Returns, for each new position, the previous index.
    pub fn canonicalize(&mut self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.strokes.len()).collect();
        order.sort_by(|&a, &b| self.strokes[a].content_cmp(&self.strokes[b]).then(a.cmp(&b)));
        let old = std::mem::take(&mut self.strokes);
        let mut slots: Vec<Option<Stroke>> = old.into_iter().map(Some).collect();
        self.strokes = order.iter().map(|&i| slots[i].take().unwrap()).collect();
        for (i, s) in self.strokes.iter_mut().enumerate() {
            s.set_id(i);
        }
        order
    }

    /// Replaces strokes (e.g. after trimming) and renumbers them.
    pub fn with_strokes(&self, strokes: Vec<Stroke>) -> Result<Drawing> {
        Drawing::new(strokes)
    }
}

fn bbox_diagonal(points: impl Iterator<Item = Vec3>) -> f64 {
    let mut lo = Vec3::repeat(f64::INFINITY);
    let mut hi = Vec3::repeat(f64::NEG_INFINITY);
    let mut any = false;
    for p in points {
        any = true;
        lo = lo.inf(&p);
        hi = hi.sup(&p);
    }
    if any {
        (hi - lo).norm()
    } else {
        0.0
    }
}

/// Frame at vertex `i`: central difference inside the stroke, one-sided at
/// the ends, binormal `t x n`.
pub fn frame_at(stroke: &Stroke, i: usize) -> Result<FrenetFrame, FrameError> {
    let n = stroke.len();
    assert!(i < n, "vertex index out of range");
    if n < 2 {
        return Err(FrameError::ZeroTangent);
    }
    let (a, b) = if i == 0 {
        (0, 1)
    } else if i == n - 1 {
        (n - 2, n - 1)
    } else {
        (i - 1, i + 1)
    };
    let t = stroke.position(b) - stroke.position(a);
    FrenetFrame::from_tangent_normal(t, stroke.vertices[i].normal)
}

/// Interior polyline angle at vertex `i` (radians); a hairpin is close to 0.
fn interior_angle(stroke: &Stroke, i: usize) -> f64 {
    let p = stroke.position(i);
    crate::geom::angle_between(&(stroke.position(i - 1) - p), &(stroke.position(i + 1) - p))
}

/// Removes short hooked end sections. Returns `None` when fewer than two
/// vertices survive.
pub fn trim_hooks(stroke: &Stroke, config: &Config) -> Option<Stroke> {
    let limit = config.trim_angle_deg.to_radians();
    let mut s = stroke.clone();
    loop {
        if s.len() < 2 {
            return None;
        }
        if s.len() < 3 {
            break;
        }
        let arc = s.arc_lengths();
        let total = *arc.last().unwrap();
        let window = config.trim_fraction * total;
        let n = s.len();
        let hook = |i: usize| interior_angle(&s, i) <= limit;

        // farthest offending vertex inside the start window
        let start_cut = (1..n - 1).filter(|&i| arc[i] <= window && hook(i)).max();
        let end_cut = (1..n - 1).filter(|&i| total - arc[i] <= window && hook(i)).min();
        if start_cut.is_none() && end_cut.is_none() {
            break;
        }
        let lo = start_cut.unwrap_or(0);
        let hi = end_cut.unwrap_or(n - 1);
        if hi <= lo {
            return None;
        }
        s.vertices = s.vertices[lo..=hi].to_vec();
        if let Some(ts) = &mut s.timestamps {
            *ts = ts[lo..=hi].to_vec();
        }
        let id = s.vertices[0].stroke;
        s.set_id(id);
    }
    Some(s)
}

/// Triangulated ribbon of a stroke: corner pairs `p ± w/2 · b` and two
/// triangles per segment.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RibbonMesh {
    pub positions: Vec<Vec3>,
    pub triangles: Vec<[usize; 3]>,
}

impl RibbonMesh {
    pub fn triangle_points(&self) -> impl Iterator<Item = [Vec3; 3]> + '_ {
        self.triangles
            .iter()
            .map(|t| [self.positions[t[0]], self.positions[t[1]], self.positions[t[2]]])
    }
}

/// Quad strip along the stroke, each quad cut along its shorter diagonal.
/// Segments touching a vertex with a degenerate frame are skipped.
pub fn ribbon_geometry(stroke: &Stroke) -> RibbonMesh {
    let frames = stroke.frames();
    let mut out = RibbonMesh::default();
    // corner indices per vertex, ordered by position so the result does not
    // depend on the sign of the normal
    let mut corners: Vec<Option<[usize; 2]>> = Vec::with_capacity(stroke.len());
    for (v, f) in stroke.vertices.iter().zip(&frames) {
        corners.push(f.map(|f| {
            let h = f.binormal * (v.width / 2.0);
            let mut pair = [v.position + h, v.position - h];
            if point_key(&pair[1]) < point_key(&pair[0]) {
                pair.swap(0, 1);
            }
            let base = out.positions.len();
            out.positions.extend_from_slice(&pair);
            [base, base + 1]
        }));
    }
    for i in 0..stroke.len().saturating_sub(1) {
        let (Some(c0), Some(c1)) = (corners[i], corners[i + 1]) else {
            continue;
        };
        let p = |k: usize| out.positions[k];
        // pair up the corners on the same side of the strip
        let (a0, b0) = (c0[0], c0[1]);
        let (a1, b1) = if (p(c1[0]) - p(a0)).norm() + (p(c1[1]) - p(b0)).norm()
            <= (p(c1[1]) - p(a0)).norm() + (p(c1[0]) - p(b0)).norm()
        {
            (c1[0], c1[1])
        } else {
            (c1[1], c1[0])
        };
        if (p(a0) - p(b1)).norm() <= (p(b0) - p(a1)).norm() {
            out.triangles.push([a0, a1, b1]);
            out.triangles.push([a0, b1, b0]);
        } else {
            out.triangles.push([a0, a1, b0]);
            out.triangles.push([a1, b1, b0]);
        }
    }
    out
}
