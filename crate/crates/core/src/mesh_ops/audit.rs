//! Manifoldness audit.

use serde::Serialize;

use crate::mesh::{SurfaceMesh, TriId, Topology, VId};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ManifoldReport {
    pub nonmanifold_edges: Vec<[VId; 2]>,
    pub nonmanifold_vertices: Vec<VId>,
}

impl ManifoldReport {
    pub fn is_manifold(&self) -> bool {
        self.nonmanifold_edges.is_empty() && self.nonmanifold_vertices.is_empty()
    }
}

/// Groups the triangles around `v` into fans connected through edges
/// incident to `v`. A manifold vertex has exactly one fan.
pub fn vertex_fans(mesh: &SurfaceMesh, topo: &Topology, v: VId) -> Vec<Vec<TriId>> {
    let tris = &topo.vertex_tris[v as usize];
    let mut fan_of = vec![usize::MAX; tris.len()];
    let mut fans: Vec<Vec<TriId>> = Vec::new();
    for s in 0..tris.len() {
        if fan_of[s] != usize::MAX {
            continue;
        }
        let f = fans.len();
        fan_of[s] = f;
        let mut stack = vec![s];
        let mut fan = Vec::new();
        while let Some(k) = stack.pop() {
            let t = tris[k];
            fan.push(t);
            for &x in mesh.triangles[t].v.iter().filter(|&&x| x != v) {
                for &u in topo.edge_tris(v, x) {
                    if let Some(j) = tris.iter().position(|&w| w == u) {
                        if fan_of[j] == usize::MAX {
                            fan_of[j] = f;
                            stack.push(j);
                        }
                    }
                }
            }
        }
        fan.sort_unstable();
        fans.push(fan);
    }
    fans
}

/// Edges with more than two triangles and vertices whose triangles do not
/// form a single fan.
pub fn audit_manifold(mesh: &SurfaceMesh) -> ManifoldReport {
    let topo = mesh.topology();
    audit_with(mesh, &topo)
}

pub fn audit_with(mesh: &SurfaceMesh, topo: &Topology) -> ManifoldReport {
    let nonmanifold_edges = topo
        .edges
        .iter()
        .filter(|(_, ts)| ts.len() > 2)
        .map(|(e, _)| *e)
        .collect();
    let nonmanifold_vertices = (0..mesh.vertices.len() as VId)
        .filter(|&v| topo.vertex_tris[v as usize].len() > 1 && vertex_fans(mesh, topo, v).len() > 1)
        .collect();
    ManifoldReport {
        nonmanifold_edges,
        nonmanifold_vertices,
    }
}
