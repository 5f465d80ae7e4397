//! Closing small holes, and minimal-weight hole filling.

use std::collections::BTreeSet;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::geom::{angle_between_deg, dihedral_deg, min_angle, triangle_area, triangle_normal, Vec3};
use crate::mesh::{SurfaceMesh, Topology, Triangle, VId};

use super::audit::audit_with;
use super::boundary::{boundary_loops_with, BoundaryLoop};

/// Triangles closing a loop of three or four vertices, wound against the
/// loop. A quad is split along the diagonal with the larger minimum angle.
fn small_fill(mesh: &SurfaceMesh, l: &[VId]) -> Vec<[VId; 3]> {
    match l.len() {
        3 => vec![[l[2], l[1], l[0]]],
        4 => {
            let p: Vec<Vec3> = l.iter().map(|&v| mesh.position(v)).collect();
            let split02 = min_angle(&p[0], &p[1], &p[2]).min(min_angle(&p[0], &p[2], &p[3]));
            let split13 = min_angle(&p[1], &p[2], &p[3]).min(min_angle(&p[1], &p[3], &p[0]));
            if split02 >= split13 {
                vec![[l[2], l[1], l[0]], [l[3], l[2], l[0]]]
            } else {
                vec![[l[3], l[2], l[1]], [l[0], l[3], l[1]]]
            }
        }
        _ => Vec::new(),
    }
}

/// Does any fill triangle fold back onto the surface across a loop edge?
fn folds_back(mesh: &SurfaceMesh, topo: &Topology, fill: &[[VId; 3]], min_deg: f64) -> bool {
    fill.iter().any(|f| {
        (0..3).any(|i| {
            let (a, b) = (f[i], f[(i + 1) % 3]);
            let apex = f[(i + 2) % 3];
            topo.edge_tris(a, b).iter().any(|&t| {
                let Some(o) = mesh.triangles[t].opposite(crate::mesh::edge_key(a, b)) else {
                    return false;
                };
                let d = dihedral_deg(&mesh.position(a), &mesh.position(b), &mesh.position(apex), &mesh.position(o));
                d < min_deg
            })
        })
    })
}

/// Closes boundary loops with at most `config.small_hole_max_sides` edges.
/// A fill is skipped when it would fold back onto the surface (dihedral
/// below `dihedral_min_deg`) or break manifoldness. Returns the number of
/// holes closed.
pub fn close_small_holes(mesh: &mut SurfaceMesh, config: &Config) -> usize {
    let max_sides = config.small_hole_max_sides.min(4);
    let topo = mesh.topology();
    let mut fills: Vec<Vec<[VId; 3]>> = Vec::new();
    for l in boundary_loops_with(mesh, &topo) {
        if l.len() > max_sides || l.len() < 3 {
            continue;
        }
        let f = small_fill(mesh, &l.vertices);
        if !folds_back(mesh, &topo, &f, config.dihedral_min_deg) {
            fills.push(f);
        }
    }
    apply_fills(mesh, fills)
}

/// Adds the fills, then drops any fill touching a non-manifold entity until
/// the mesh audits clean. Returns the number of fills kept.
fn apply_fills(mesh: &mut SurfaceMesh, mut fills: Vec<Vec<[VId; 3]>>) -> usize {
    let base = mesh.triangles.clone();
    loop {
        mesh.triangles = base.clone();
        for f in &fills {
            mesh.triangles.extend(f.iter().map(|&v| Triangle::new(v, None)));
        }
        let topo = mesh.topology();
        let report = audit_with(mesh, &topo);
        if report.is_manifold() {
            return fills.len();
        }
        let bad_v: BTreeSet<VId> = report
            .nonmanifold_vertices
            .iter()
            .copied()
            .chain(report.nonmanifold_edges.iter().flatten().copied())
            .collect();
        let before = fills.len();
        fills.retain(|f| !f.iter().flatten().any(|v| bad_v.contains(v)));
        if fills.len() == before {
            // the problem predates the fills
            mesh.triangles = base;
            return 0;
        }
    }
}

/// Unit normal of the oriented triangle, zero when degenerate.
fn normal(mesh: &SurfaceMesh, t: [VId; 3]) -> Vec3 {
    let n = triangle_normal(&mesh.position(t[0]), &mesh.position(t[1]), &mesh.position(t[2]));
    let len = n.norm();
    if len > 0.0 {
        n / len
    } else {
        n
    }
}

/// Angle between two unit normals in degrees; 180 when either is zero.
fn deviation(a: &Vec3, b: &Vec3) -> f64 {
    if a.norm_squared() == 0.0 || b.norm_squared() == 0.0 {
        180.0
    } else {
        angle_between_deg(a, b)
    }
}

/// Triangulates `hole` by dynamic programming over the cycle, minimising
/// the largest normal deviation between adjacent triangles and then the
/// total area. The fill is wound against the loop and added to `mesh`.
/// Returns the number of added triangles.
pub fn fill_hole(mesh: &mut SurfaceMesh, hole: &BoundaryLoop) -> Result<usize> {
    let l = &hole.vertices;
    let n = l.len();
    if n < 3 {
        return Err(Error::HoleFill(format!("loop of {n} vertices")));
    }
    if l.iter().collect::<BTreeSet<_>>().len() != n {
        return Err(Error::HoleFill("loop visits a vertex twice".into()));
    }
    let topo = mesh.topology();
    // normal of the surface triangle across loop edge (i, i + 1)
    let outer: Vec<Vec3> = (0..n)
        .map(|i| {
            let (a, b) = (l[i], l[(i + 1) % n]);
            topo.edge_tris(a, b)
                .first()
                .map_or(Vec3::zeros(), |&t| normal(mesh, mesh.triangles[t].v))
        })
        .collect();
    let tri = |i: usize, m: usize, k: usize| [l[k], l[m], l[i]];

    // best[i][k]: (max deviation, area, split) for the polygon i..=k
    const NONE: usize = usize::MAX;
    let mut best = vec![vec![(0.0f64, 0.0f64, NONE); n]; n];
    // normal of the triangle on edge (i, k) inside the polygon i..=k
    let inner = |best: &Vec<Vec<(f64, f64, usize)>>, i: usize, k: usize| -> Vec3 {
        if k == i + 1 {
            outer[i]
        } else {
            normal(mesh, tri(i, best[i][k].2, k))
        }
    };
    for span in 2..n {
        for i in 0..n - span {
            let k = i + span;
            let mut choice = (f64::INFINITY, f64::INFINITY, NONE);
            for m in i + 1..k {
                let t = tri(i, m, k);
                let nt = normal(mesh, t);
                let mut worst = best[i][m].0.max(best[m][k].0);
                worst = worst.max(deviation(&nt, &inner(&best, i, m)));
                worst = worst.max(deviation(&nt, &inner(&best, m, k)));
                if span == n - 1 {
                    worst = worst.max(deviation(&nt, &outer[n - 1]));
                }
                let p: Vec<Vec3> = t.iter().map(|&v| mesh.position(v)).collect();
                let area = best[i][m].1 + best[m][k].1 + triangle_area(&p[0], &p[1], &p[2]);
                if (worst, area) < (choice.0, choice.1) {
                    choice = (worst, area, m);
                }
            }
            best[i][k] = choice;
        }
    }
    let mut out = Vec::new();
    let mut stack = vec![(0, n - 1)];
    while let Some((i, k)) = stack.pop() {
        if k <= i + 1 {
            continue;
        }
        let m = best[i][k].2;
        out.push(tri(i, m, k));
        stack.push((i, m));
        stack.push((m, k));
    }
    let before = mesh.triangles.len();
    mesh.triangles.extend(out.iter().map(|&v| Triangle::new(v, None)));
    if !audit_with(mesh, &mesh.topology()).is_manifold() {
        mesh.triangles.truncate(before);
        return Err(Error::HoleFill("fill would break manifoldness".into()));
    }
    Ok(out.len())
}

/// Fills every boundary loop with more than the built-in small-hole limit
/// and at most `max_sides` edges. Loops that cannot be filled are left
/// open. Returns the number of filled loops.
pub fn fill_holes_up_to(mesh: &mut SurfaceMesh, max_sides: usize, config: &Config) -> usize {
    let loops = boundary_loops_with(mesh, &mesh.topology());
    let mut filled = 0;
    for l in loops {
        if l.len() <= config.small_hole_max_sides.min(4) || l.len() > max_sides {
            continue;
        }
        if fill_hole(mesh, &l).is_ok() {
            filled += 1;
        }
    }
    filled
}

/// Maximum normal deviation in degrees across interior edges touching any
/// of `tris` (indices into `mesh.triangles`).
#[cfg(test)]
pub(crate) fn max_deviation(mesh: &SurfaceMesh, tris: std::ops::Range<usize>) -> f64 {
    let topo = mesh.topology();
    let mut worst: f64 = 0.0;
    for t in tris {
        for e in mesh.triangles[t].edges() {
            for &u in &topo.edges[&e] {
                if u != t {
                    worst = worst.max(deviation(&normal(mesh, mesh.triangles[t].v), &normal(mesh, mesh.triangles[u].v)));
                }
            }
        }
    }
    worst
}
