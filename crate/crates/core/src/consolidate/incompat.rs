//! Pairwise triangle incompatibility.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::config::Config;
use crate::geom::{dihedral_deg, project_2d, segment_hits_open_triangle_2d, Vec3};
use crate::matcher::ChainSet;
use crate::mesh::{edge_key, SurfaceMesh, TriId, Topology, Triangle, VId};
use crate::scoring::Side;

/// Reference binormals deciding which side of a chain a point lies on.
#[derive(Debug, Clone, Default)]
pub struct SideFrames {
    /// Chain edges, keyed by sorted endpoints: mean of the endpoint binormals.
    pub edge: HashMap<[VId; 2], Vec3>,
    pub vertex: HashMap<VId, Vec3>,
}

impl SideFrames {
    pub fn from_chains(chains: &ChainSet) -> SideFrames {
        let mut out = SideFrames::default();
        for r in chains.refs() {
            let v = chains.vertex(r);
            let Some(f) = v.frame else { continue };
            out.vertex.insert(v.vid, f.binormal);
            if let Some(n) = chains.next(r) {
                let w = chains.vertex(n);
                if let Some(g) = w.frame {
                    out.edge.insert(edge_key(v.vid, w.vid), f.binormal + g.binormal);
                }
            }
        }
        out
    }

    /// Entries of `other` replace those of `self`.
    pub fn overlay(&mut self, other: SideFrames) {
        self.edge.extend(other.edge);
        self.vertex.extend(other.vertex);
    }
}

/// Near-zero offsets count as "different sides".
const SIDE_EPS: f64 = 1e-9;

fn shared(t1: &Triangle, t2: &Triangle) -> Vec<VId> {
    t1.v.iter().copied().filter(|v| t2.has(*v)).collect()
}

fn centroid(p: &[Vec3; 3]) -> Vec3 {
    (p[0] + p[1] + p[2]) / 3.0
}

/// Does an edge of `t1` leaving `q`, projected onto the plane of `t2`, run
/// through the open interior of `t2`?
fn projected_edge_overlaps(mesh: &SurfaceMesh, t1: &Triangle, t2: &Triangle, q: VId) -> bool {
    let p2 = mesh.points(t2);
    let n = (p2[1] - p2[0]).cross(&(p2[2] - p2[0]));
    let len = n.norm();
    if len == 0.0 {
        return false;
    }
    let n = n / len;
    let u = (p2[1] - p2[0]).normalize();
    let v = n.cross(&u);
    let scale = (p2[1] - p2[0]).norm().max((p2[2] - p2[0]).norm()).max((p2[2] - p2[1]).norm());
    let tri = [
        project_2d(&p2[0], &p2[0], &u, &v),
        project_2d(&p2[1], &p2[0], &u, &v),
        project_2d(&p2[2], &p2[0], &u, &v),
    ];
    let qp = mesh.position(q);
    t1.v.iter().filter(|&&x| x != q).any(|&x| {
        let a = project_2d(&qp, &p2[0], &u, &v);
        let b = project_2d(&mesh.position(x), &p2[0], &u, &v);
        segment_hits_open_triangle_2d(a, b, tri, 1e-9 * scale)
    })
}

/// The three incompatibility criteria.
pub fn incompatible(mesh: &SurfaceMesh, t1: &Triangle, t2: &Triangle, frames: &SideFrames, config: &Config) -> bool {
    let common = shared(t1, t2);
    match common.len() {
        2 => {
            let e = edge_key(common[0], common[1]);
            let (e0, e1) = (mesh.position(e[0]), mesh.position(e[1]));
            let a1 = mesh.position(t1.opposite(e).expect("shared edge"));
            let a2 = mesh.position(t2.opposite(e).expect("shared edge"));
            if let Some(b) = frames.edge.get(&e) {
                let mid = (e0 + e1) / 2.0;
                let eps = SIDE_EPS * (e1 - e0).norm();
                let b = b.normalize();
                if let (Some(s1), Some(s2)) = (Side::of(&(a1 - mid), &b, eps), Side::of(&(a2 - mid), &b, eps)) {
                    if s1 == s2 {
                        return true;
                    }
                }
            }
            dihedral_deg(&e0, &e1, &a1, &a2) < config.dihedral_min_deg
        }
        1 => {
            let q = common[0];
            let Some(b) = frames.vertex.get(&q) else {
                return false;
            };
            let qp = mesh.position(q);
            let (c1, c2) = (centroid(&mesh.points(t1)), centroid(&mesh.points(t2)));
            let eps = SIDE_EPS * (c1 - qp).norm().max((c2 - qp).norm());
            match (Side::of(&(c1 - qp), b, eps), Side::of(&(c2 - qp), b, eps)) {
                (Some(s1), Some(s2)) if s1 == s2 => {
                    projected_edge_overlaps(mesh, t1, t2, q) || projected_edge_overlaps(mesh, t2, t1, q)
                }
                _ => false,
            }
        }
        _ => false,
    }
}

/// Every incompatible pair `(a, b)` with `a < b`, sorted.
pub fn incompatible_pairs(mesh: &SurfaceMesh, topo: &Topology, frames: &SideFrames, config: &Config) -> Vec<(TriId, TriId)> {
    let mut pairs: Vec<(TriId, TriId)> = (0..mesh.vertices.len())
        .into_par_iter()
        .flat_map_iter(|v| {
            let tris = &topo.vertex_tris[v];
            let mut out = Vec::new();
            for (i, &a) in tris.iter().enumerate() {
                for &b in &tris[i + 1..] {
                    let (a, b) = if a < b { (a, b) } else { (b, a) };
                    // each pair is examined at its lowest shared vertex only
                    let (ta, tb) = (&mesh.triangles[a], &mesh.triangles[b]);
                    let low = ta.v.iter().copied().filter(|x| tb.has(*x)).min();
                    if low != Some(v as VId) {
                        continue;
                    }
                    if incompatible(mesh, ta, tb, frames, config) {
                        out.push((a, b));
                    }
                }
            }
            out.into_iter()
        })
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Triangle;

    fn mesh(points: &[[f64; 3]], tris: &[[VId; 3]]) -> SurfaceMesh {
        let mut m = SurfaceMesh::default();
        for p in points {
            m.add_vertex(Vec3::from(*p), Vec3::z());
        }
        m.triangles = tris.iter().map(|&t| Triangle::new(t, None)).collect();
        m
    }

    fn frames_x(edges: &[[VId; 2]], verts: &[VId]) -> SideFrames {
        SideFrames {
            edge: edges.iter().map(|&e| (edge_key(e[0], e[1]), Vec3::x())).collect(),
            vertex: verts.iter().map(|&v| (v, Vec3::x())).collect(),
        }
    }

    #[test]
    fn same_side_apexes_on_chain_edge() {
        let cfg = Config::default();
        // chain edge 0-1 along y, binormal +x; both apexes at x > 0
        let m = mesh(
            &[[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 0.3, 0.0], [1.0, 0.7, 0.05], [-1.0, 0.5, 0.0]],
            &[[0, 1, 2], [0, 1, 3], [0, 1, 4]],
        );
        let f = frames_x(&[[0, 1]], &[]);
        assert!(incompatible(&m, &m.triangles[0], &m.triangles[1], &f, &cfg));
        assert!(!incompatible(&m, &m.triangles[0], &m.triangles[2], &f, &cfg));
        // without the chain edge only the dihedral test applies
        let none = SideFrames::default();
        assert!(incompatible(&m, &m.triangles[0], &m.triangles[1], &none, &cfg));
        assert!(!incompatible(&m, &m.triangles[0], &m.triangles[2], &none, &cfg));
    }

    #[test]
    fn nearly_flat_pair_is_compatible() {
        let cfg = Config::default();
        let a = 10f64.to_radians();
        let m = mesh(
            &[[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 0.5, 0.0], [-a.cos(), 0.5, a.sin()]],
            &[[0, 1, 2], [1, 0, 3]],
        );
        let (e0, e1) = (m.position(0), m.position(1));
        assert!((dihedral_deg(&e0, &e1, &m.position(2), &m.position(3)) - 170.0).abs() < 1e-9);
        assert!(!incompatible(&m, &m.triangles[0], &m.triangles[1], &frames_x(&[[0, 1]], &[]), &cfg));
    }

    /// Independent check: sample points along the projected edge and test
    /// strict barycentric containment.
    fn sampled_overlap(m: &SurfaceMesh, t1: &Triangle, t2: &Triangle, q: VId) -> bool {
        let p = m.points(t2);
        let n = (p[1] - p[0]).cross(&(p[2] - p[0])).normalize();
        let inside = |x: Vec3| {
            let x = x - n * (x - p[0]).dot(&n);
            let w = |a: Vec3, b: Vec3| (b - a).cross(&(x - a)).dot(&n);
            let (w0, w1, w2) = (w(p[0], p[1]), w(p[1], p[2]), w(p[2], p[0]));
            (w0 > 1e-9 && w1 > 1e-9 && w2 > 1e-9) || (w0 < -1e-9 && w1 < -1e-9 && w2 < -1e-9)
        };
        let qp = m.position(q);
        t1.v.iter().filter(|&&x| x != q).any(|&x| {
            let e = m.position(x);
            (1..1000).any(|k| inside(qp + (e - qp) * (k as f64 / 1000.0)))
        })
    }

    #[test]
    fn overlapping_fans_at_shared_vertex() {
        let cfg = Config::default();
        // q = 0 with binormal +x; both triangles lie at x > 0
        let m = mesh(
            &[[0.0, 0.0, 0.0], [1.0, -0.2, 0.0], [1.0, 0.4, 0.0], [1.0, 0.1, 0.1], [1.2, 0.8, 0.0], [1.0, -1.0, 0.0], [1.0, -0.6, 0.0]],
            &[[0, 1, 2], [0, 3, 4], [0, 5, 6]],
        );
        let f = frames_x(&[], &[0]);
        let (t0, t1, t2) = (&m.triangles[0], &m.triangles[1], &m.triangles[2]);
        let expect01 = sampled_overlap(&m, t0, t1, 0) || sampled_overlap(&m, t1, t0, 0);
        let expect02 = sampled_overlap(&m, t0, t2, 0) || sampled_overlap(&m, t2, t0, 0);
        assert!(expect01 && !expect02);
        assert_eq!(incompatible(&m, t0, t1, &f, &cfg), expect01);
        assert_eq!(incompatible(&m, t0, t2, &f, &cfg), expect02);
    }

    #[test]
    fn fans_on_opposite_sides_are_compatible() {
        let cfg = Config::default();
        let m = mesh(
            &[[0.0, 0.0, 0.0], [1.0, -0.2, 0.0], [1.0, 0.4, 0.0], [-1.0, 0.1, 0.0], [-1.0, 0.8, 0.0]],
            &[[0, 1, 2], [0, 3, 4]],
        );
        assert!(!incompatible(&m, &m.triangles[0], &m.triangles[1], &frames_x(&[], &[0]), &cfg));
    }

    #[test]
    fn pair_listing_matches_brute_force() {
        let cfg = Config::default();
        let m = mesh(
            &[[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 0.3, 0.0], [1.0, 0.7, 0.05], [-1.0, 0.5, 0.0], [0.9, 0.5, 0.02]],
            &[[0, 1, 2], [0, 1, 3], [0, 1, 4], [1, 2, 5], [0, 3, 5]],
        );
        let f = frames_x(&[[0, 1]], &[0, 1, 2]);
        let fast = incompatible_pairs(&m, &m.topology(), &f, &cfg);
        let mut brute = Vec::new();
        for a in 0..m.triangles.len() {
            for b in a + 1..m.triangles.len() {
                if incompatible(&m, &m.triangles[a], &m.triangles[b], &f, &cfg) {
                    brute.push((a, b));
                }
            }
        }
        assert_eq!(fast, brute);
        assert!(!fast.is_empty());
    }
}
