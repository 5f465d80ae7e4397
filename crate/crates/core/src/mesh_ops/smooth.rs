//! Uniform Laplacian smoothing.

use std::collections::BTreeSet;

use crate::geom::Vec3;
use crate::mesh::SurfaceMesh;

/// Moves every interior vertex `lambda` of the way towards the mean of its
/// edge neighbours, `iterations` times (Jacobi updates). Vertices on a
/// boundary edge and unreferenced vertices stay put.
pub fn laplacian_smooth(mesh: &mut SurfaceMesh, iterations: usize, lambda: f64) {
    let topo = mesh.topology();
    let n = mesh.vertices.len();
    let mut nbrs: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n];
    let mut fixed = vec![false; n];
    for (e, ts) in &topo.edges {
        nbrs[e[0] as usize].insert(e[1]);
        nbrs[e[1] as usize].insert(e[0]);
        if ts.len() == 1 {
            fixed[e[0] as usize] = true;
            fixed[e[1] as usize] = true;
        }
    }
    for _ in 0..iterations {
        let next: Vec<Option<Vec3>> = (0..n)
            .map(|v| {
                if fixed[v] || nbrs[v].is_empty() {
                    return None;
                }
                let p = mesh.vertices[v].position;
                let mean: Vec3 = nbrs[v].iter().map(|&u| mesh.vertices[u as usize].position).sum::<Vec3>() / nbrs[v].len() as f64;
                Some(p + (mean - p) * lambda)
            })
            .collect();
        for (v, p) in next.into_iter().enumerate() {
            if let Some(p) = p {
                mesh.vertices[v].position = p;
            }
        }
    }
}
