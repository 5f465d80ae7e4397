//! Mesh quality against ground truth and against the input strokes.
//!
//! Hausdorff distance is estimated from area-weighted surface samples taken
//! on both meshes, with exact point-to-triangle distances to the other mesh
//! found through a uniform grid.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::geom::{point_triangle_distance, triangle_area, Vec3};
use crate::mesh::{edge_key, SurfaceMesh, VId};
use crate::mesh_ops::audit::audit_manifold;
use crate::mesh_ops::stats::{components, MeshComponent};
use crate::stroke::{trim_hooks, Drawing};

/// Samples drawn on each mesh by [`evaluate`].
pub const DEFAULT_SAMPLES: usize = 10_000;

/// Stroke vertices map to the nearest mesh vertex within this fraction of
/// their width. Boundary smoothing can move a vertex next to a stroke end
/// by a fifth of the width or more.
pub const VERTEX_MATCH_FRACTION: f64 = 0.5;

/// Uniform grid over triangle bounding boxes for nearest-triangle queries.
pub struct TriangleIndex<'a> {
    mesh: &'a SurfaceMesh,
    cell: f64,
    lo: [i64; 3],
    hi: [i64; 3],
    cells: HashMap<[i64; 3], Vec<u32>>,
}

impl<'a> TriangleIndex<'a> {
    pub fn new(mesh: &'a SurfaceMesh) -> TriangleIndex<'a> {
        let edges: f64 = mesh
            .triangles
            .iter()
            .map(|t| {
                let [a, b, c] = mesh.points(t);
                ((b - a).norm() + (c - b).norm() + (a - c).norm()) / 3.0
            })
            .sum();
        let mean = edges / mesh.triangles.len().max(1) as f64;
        let cell = if mean > 0.0 { 2.0 * mean } else { 1.0 };
        let key = |p: &Vec3| [0, 1, 2].map(|i| (p[i] / cell).floor() as i64);
        let mut cells: HashMap<[i64; 3], Vec<u32>> = HashMap::new();
        let mut lo = [i64::MAX; 3];
        let mut hi = [i64::MIN; 3];
        for (i, t) in mesh.triangles.iter().enumerate() {
            let [a, b, c] = mesh.points(t);
            let kmin = key(&a.inf(&b).inf(&c));
            let kmax = key(&a.sup(&b).sup(&c));
            for d in 0..3 {
                lo[d] = lo[d].min(kmin[d]);
                hi[d] = hi[d].max(kmax[d]);
            }
            for x in kmin[0]..=kmax[0] {
                for y in kmin[1]..=kmax[1] {
                    for z in kmin[2]..=kmax[2] {
                        cells.entry([x, y, z]).or_default().push(i as u32);
                    }
                }
            }
        }
        TriangleIndex { mesh, cell, lo, hi, cells }
    }

    /// Distance from `p` to the nearest triangle, or `None` for an empty mesh.
    pub fn distance(&self, p: &Vec3) -> Option<f64> {
        if self.cells.is_empty() {
            return None;
        }
        let c = [0, 1, 2].map(|i| (p[i] / self.cell).floor() as i64);
        let reach = (0..3)
            .map(|d| (c[d] - self.lo[d]).abs().max((self.hi[d] - c[d]).abs()))
            .max()
            .unwrap();
        let mut best = f64::INFINITY;
        let mut seen: BTreeSet<u32> = BTreeSet::new();
        for r in 0..=reach {
            let range = |d: usize| (c[d] - r).max(self.lo[d])..=(c[d] + r).min(self.hi[d]);
            for x in range(0) {
                for y in range(1) {
                    for z in range(2) {
                        let shell = (x - c[0]).abs().max((y - c[1]).abs()).max((z - c[2]).abs());
                        if shell != r {
                            continue;
                        }
                        for &t in self.cells.get(&[x, y, z]).into_iter().flatten() {
                            if seen.insert(t) {
                                let [a, b, cc] = self.mesh.points(&self.mesh.triangles[t as usize]);
                                best = best.min(point_triangle_distance(p, &a, &b, &cc));
                            }
                        }
                    }
                }
            }
            // every unvisited cell is at least r whole cells away
            if best <= r as f64 * self.cell {
                break;
            }
        }
        Some(best)
    }
}

/// `n` area-weighted points on the mesh surface from a seeded stream.
pub fn sample_surface(mesh: &SurfaceMesh, n: usize, seed: u64) -> Vec<Vec3> {
    let mut cumulative = Vec::with_capacity(mesh.triangles.len());
    let mut total = 0.0;
    for t in &mesh.triangles {
        let [a, b, c] = mesh.points(t);
        total += triangle_area(&a, &b, &c);
        cumulative.push(total);
    }
    if total <= 0.0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let x = rng.random::<f64>() * total;
            let i = cumulative.partition_point(|&c| c < x).min(cumulative.len() - 1);
            let [a, b, c] = mesh.points(&mesh.triangles[i]);
            let (mut s, mut t): (f64, f64) = (rng.random(), rng.random());
            if s + t > 1.0 {
                s = 1.0 - s;
                t = 1.0 - t;
            }
            a + (b - a) * s + (c - a) * t
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hausdorff {
    /// Largest distance from a sample on the first mesh to the second.
    pub forward: f64,
    /// Largest distance from a sample on the second mesh to the first.
    pub backward: f64,
    pub symmetric: f64,
    pub samples_per_side: usize,
}

/// Sampled symmetric Hausdorff distance. Mesh vertices are sampled too, so
/// corners are never missed.
pub fn hausdorff(a: &SurfaceMesh, b: &SurfaceMesh, samples: usize) -> Hausdorff {
    let one_side = |from: &SurfaceMesh, to: &SurfaceMesh, seed: u64| -> f64 {
        let index = TriangleIndex::new(to);
        let mut pts = sample_surface(from, samples, seed);
        let mut used = vec![false; from.vertices.len()];
        for t in &from.triangles {
            for &v in &t.v {
                used[v as usize] = true;
            }
        }
        pts.extend(from.vertices.iter().zip(used).filter(|(_, u)| *u).map(|(v, _)| v.position));
        pts.par_iter()
            .map(|p| index.distance(p).unwrap_or(f64::INFINITY))
            .reduce(|| 0.0, f64::max)
    };
    let forward = one_side(a, b, 1);
    let backward = one_side(b, a, 2);
    Hausdorff {
        forward,
        backward,
        symmetric: forward.max(backward),
        samples_per_side: samples,
    }
}

/// Share of trimmed input stroke edges whose endpoints map to mesh vertices
/// joined by a mesh edge. A stroke vertex maps to the nearest referenced
/// mesh vertex within [`VERTEX_MATCH_FRACTION`] of its width.
pub fn interpolation_fraction(mesh: &SurfaceMesh, drawing: &Drawing, config: &Config) -> f64 {
    let edges: BTreeSet<[VId; 2]> = mesh.triangles.iter().flat_map(|t| t.edges()).collect();
    let mut referenced = vec![false; mesh.vertices.len()];
    for t in &mesh.triangles {
        for &v in &t.v {
            referenced[v as usize] = true;
        }
    }
    let max_w = drawing
        .strokes
        .iter()
        .flat_map(|s| &s.vertices)
        .map(|v| v.width)
        .fold(0.0, f64::max);
    let cell = (VERTEX_MATCH_FRACTION * max_w).max(1e-12);
    let key = |p: &Vec3| [0, 1, 2].map(|i| (p[i] / cell).floor() as i64);
    let mut grid: HashMap<[i64; 3], Vec<VId>> = HashMap::new();
    for (i, v) in mesh.vertices.iter().enumerate().filter(|(i, _)| referenced[*i]) {
        grid.entry(key(&v.position)).or_default().push(i as VId);
    }
    let nearest = |p: &Vec3, tol: f64| -> Option<VId> {
        let c = key(p);
        let mut best: Option<(f64, VId)> = None;
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    for &v in grid.get(&[c[0] + dx, c[1] + dy, c[2] + dz]).into_iter().flatten() {
                        let d = (mesh.vertices[v as usize].position - p).norm();
                        if d <= tol && best.is_none_or(|(bd, bv)| (d, v) < (bd, bv)) {
                            best = Some((d, v));
                        }
                    }
                }
            }
        }
        best.map(|(_, v)| v)
    };
    let mut total = 0usize;
    let mut hit = 0usize;
    for s in drawing.strokes.iter().filter_map(|s| trim_hooks(s, config)) {
        let ids: Vec<Option<VId>> = s
            .vertices
            .iter()
            .map(|v| nearest(&v.position, VERTEX_MATCH_FRACTION * v.width))
            .collect();
        for w in ids.windows(2) {
            total += 1;
            if let (Some(a), Some(b)) = (w[0], w[1]) {
                if a != b && edges.contains(&edge_key(a, b)) {
                    hit += 1;
                }
            }
        }
    }
    if total == 0 {
        0.0
    } else {
        hit as f64 / total as f64
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub nonmanifold_edges: usize,
    pub nonmanifold_vertices: usize,
    pub components: Vec<MeshComponent>,
    pub triangles: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hausdorff: Option<Hausdorff>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interpolated_edge_fraction: Option<f64>,
}

impl EvalReport {
    pub fn is_manifold(&self) -> bool {
        self.nonmanifold_edges == 0 && self.nonmanifold_vertices == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Topology of `mesh`, plus Hausdorff distance to `truth` and the
/// interpolated edge fraction of `drawing` when given.
pub fn evaluate(mesh: &SurfaceMesh, truth: Option<&SurfaceMesh>, drawing: Option<&Drawing>, config: &Config) -> EvalReport {
    let audit = audit_manifold(mesh);
    EvalReport {
        nonmanifold_edges: audit.nonmanifold_edges.len(),
        nonmanifold_vertices: audit.nonmanifold_vertices.len(),
        components: components(mesh),
        triangles: mesh.triangles.len(),
        hausdorff: truth.map(|t| hausdorff(mesh, t, DEFAULT_SAMPLES)),
        interpolated_edge_fraction: drawing.map(|d| interpolation_fraction(mesh, d, config)),
    }
}
