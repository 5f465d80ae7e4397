//! Per-component Euler data.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::mesh::{SurfaceMesh, TriId, VId};

use super::boundary::boundary_loops_with;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeshComponent {
    #[serde(skip)]
    pub triangles: Vec<TriId>,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub boundary_loops: usize,
    pub euler: i64,
}

impl MeshComponent {
    /// True when the component has no boundary.
    pub fn is_closed(&self) -> bool {
        self.boundary_loops == 0
    }
}

/// Edge-connected components in order of their smallest triangle id.
pub fn components(mesh: &SurfaceMesh) -> Vec<MeshComponent> {
    let topo = mesh.topology();
    let comps = topo.components(mesh);
    let mut loops = vec![0; comps.len()];
    for l in boundary_loops_with(mesh, &topo) {
        loops[l.component] += 1;
    }
    comps
        .into_iter()
        .zip(loops)
        .map(|(tris, boundary_loops)| {
            let mut vs: BTreeSet<VId> = BTreeSet::new();
            let mut es: BTreeSet<[VId; 2]> = BTreeSet::new();
            for &t in &tris {
                vs.extend(mesh.triangles[t].v);
                es.extend(mesh.triangles[t].edges());
            }
            let euler = vs.len() as i64 - es.len() as i64 + tris.len() as i64;
            MeshComponent {
                vertices: vs.len(),
                edges: es.len(),
                faces: tris.len(),
                boundary_loops,
                euler,
                triangles: tris,
            }
        })
        .collect()
}
