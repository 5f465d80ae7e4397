//! Boundary loops with surface frames, and boundary smoothing.

use std::collections::{BTreeMap, BTreeSet};

use crate::config::Config;
use crate::geom::{angle_between_deg, unit_normal, Vec3};
use crate::mesh::{edge_key, SurfaceMesh, Topology, VId};
use crate::stroke::FrenetFrame;

/// A closed cycle of boundary vertices. The loop runs along the winding of
/// its adjacent triangles and starts at its smallest vertex id.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryLoop {
    pub vertices: Vec<VId>,
    /// Tangent along the loop, area-weighted surface normal, binormal
    /// pointing away from the surface. `None` where the tangent and normal
    /// are parallel.
    pub frames: Vec<Option<FrenetFrame>>,
    /// Edge-connected component the loop bounds.
    pub component: usize,
}

impl BoundaryLoop {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Directed boundary edges `(a, b)`, oriented like their single triangle.
fn directed_boundary_edges(mesh: &SurfaceMesh, topo: &Topology) -> Vec<(VId, VId)> {
    topo.edges
        .iter()
        .filter(|(_, ts)| ts.len() == 1)
        .map(|(e, ts)| {
            if mesh.triangles[ts[0]].has_directed(e[0], e[1]) {
                (e[0], e[1])
            } else {
                (e[1], e[0])
            }
        })
        .collect()
}

pub fn boundary_loops(mesh: &SurfaceMesh) -> Vec<BoundaryLoop> {
    boundary_loops_with(mesh, &mesh.topology())
}

/// Every boundary edge ends up in exactly one loop. Loops are ordered by
/// their first vertex.
pub fn boundary_loops_with(mesh: &SurfaceMesh, topo: &Topology) -> Vec<BoundaryLoop> {
    let edges = directed_boundary_edges(mesh, topo);
    // undirected boundary adjacency, so inconsistently wound input still
    // yields closed loops
    let mut nbrs: BTreeMap<VId, BTreeSet<VId>> = BTreeMap::new();
    for &(a, b) in &edges {
        nbrs.entry(a).or_default().insert(b);
        nbrs.entry(b).or_default().insert(a);
    }
    let forward: BTreeSet<(VId, VId)> = edges.iter().copied().collect();
    let (comp_of, _) = topo.component_of(mesh);
    let mut used: BTreeSet<[VId; 2]> = BTreeSet::new();
    let mut loops = Vec::new();
    for &(a0, b0) in &edges {
        if used.contains(&edge_key(a0, b0)) {
            continue;
        }
        used.insert(edge_key(a0, b0));
        let mut cycle = vec![a0];
        let mut cur = b0;
        while cur != a0 {
            cycle.push(cur);
            let next = nbrs[&cur].iter().copied().find(|&x| !used.contains(&edge_key(cur, x)));
            let Some(x) = next else { break };
            used.insert(edge_key(cur, x));
            cur = x;
        }
        // follow the majority winding of the loop's own edges
        let n = cycle.len();
        let along = (0..n)
            .filter(|&i| forward.contains(&(cycle[i], cycle[(i + 1) % n])))
            .count();
        if 2 * along < n {
            cycle.reverse();
        }
        let start = (0..n).min_by_key(|&i| cycle[i]).unwrap();
        cycle.rotate_left(start);
        let tri = topo.edge_tris(a0, b0)[0];
        let frames = loop_frames(mesh, topo, &cycle);
        loops.push(BoundaryLoop {
            vertices: cycle,
            frames,
            component: comp_of[tri],
        });
    }
    loops.sort_by_key(|l| l.vertices[0]);
    loops
}

/// Area-weighted normal of the triangles around `v`.
pub fn vertex_normal(mesh: &SurfaceMesh, topo: &Topology, v: VId) -> Vec3 {
    topo.vertex_tris[v as usize]
        .iter()
        .map(|&t| mesh.area_normal(&mesh.triangles[t]))
        .sum()
}

/// In-plane direction from boundary edge `(a, b)` away from its triangle.
fn edge_outward(mesh: &SurfaceMesh, topo: &Topology, a: VId, b: VId) -> Vec3 {
    let ts = topo.edge_tris(a, b);
    let Some(&t) = ts.first() else { return Vec3::zeros() };
    let Some(apex) = mesh.triangles[t].opposite(edge_key(a, b)) else {
        return Vec3::zeros();
    };
    let (pa, pb) = (mesh.position(a), mesh.position(b));
    let d = pb - pa;
    let len2 = d.norm_squared();
    if len2 == 0.0 {
        return Vec3::zeros();
    }
    let x = mesh.position(apex) - pa;
    -(x - d * (x.dot(&d) / len2))
}

fn loop_frames(mesh: &SurfaceMesh, topo: &Topology, cycle: &[VId]) -> Vec<Option<FrenetFrame>> {
    let n = cycle.len();
    (0..n)
        .map(|i| {
            let (prev, v, next) = (cycle[(i + n - 1) % n], cycle[i], cycle[(i + 1) % n]);
            let t = mesh.position(next) - mesh.position(prev);
            let mut normal = vertex_normal(mesh, topo, v);
            let len = normal.norm();
            if !(len > 0.0) {
                return None;
            }
            normal /= len;
            let out = edge_outward(mesh, topo, prev, v) + edge_outward(mesh, topo, v, next);
            if t.cross(&normal).dot(&out) < 0.0 {
                normal = -normal;
            }
            FrenetFrame::from_tangent_normal(t, normal).ok()
        })
        .collect()
}

/// Moves `v` to `v/2 + (prev + next)/4` unless an incident triangle's
/// normal would turn by more than the guard angle or degenerate. Returns
/// whether it moved.
pub(crate) fn smooth_vertex(mesh: &mut SurfaceMesh, topo: &Topology, [prev, v, next]: [VId; 3], config: &Config) -> bool {
    let old = mesh.position(v);
    let new = old / 2.0 + (mesh.position(prev) + mesh.position(next)) / 4.0;
    if new == old {
        return false;
    }
    let ok = topo.vertex_tris[v as usize].iter().all(|&t| {
        let tri = mesh.triangles[t];
        let pts = mesh.points(&tri);
        let moved = [0, 1, 2].map(|k| if tri.v[k] == v { new } else { pts[k] });
        match (unit_normal(&pts[0], &pts[1], &pts[2]), unit_normal(&moved[0], &moved[1], &moved[2])) {
            (Some(before), Some(after)) => angle_between_deg(&before, &after) <= config.smoothing_normal_guard_deg,
            _ => false,
        }
    });
    if ok {
        mesh.vertices[v as usize].position = new;
    }
    ok
}

/// One sweep of the update along every loop, in loop order, each vertex
/// seeing its neighbours' current positions. Returns the number of
/// vertices moved.
pub fn smooth_boundary(mesh: &mut SurfaceMesh, loops: &[BoundaryLoop], config: &Config) -> usize {
    let topo = mesh.topology();
    let mut moved = 0;
    for l in loops {
        let n = l.vertices.len();
        if n < 3 {
            continue;
        }
        for i in 0..n {
            let w = [l.vertices[(i + n - 1) % n], l.vertices[i], l.vertices[(i + 1) % n]];
            if smooth_vertex(mesh, &topo, w, config) {
                moved += 1;
            }
        }
    }
    moved
}
