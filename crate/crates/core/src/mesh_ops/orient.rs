//! Consistent triangle orientation and resolution of non-orientable strips.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::mesh::{SurfaceMesh, TriId, Topology, VId};

use super::audit::{audit_with, vertex_fans};

/// Do triangles `a` and `b` traverse their shared edge `e` in opposite
/// directions?
fn agree(mesh: &SurfaceMesh, a: TriId, b: TriId, e: [VId; 2]) -> bool {
    mesh.triangles[a].has_directed(e[0], e[1]) != mesh.triangles[b].has_directed(e[0], e[1])
}

/// Breadth-first flood from the lowest triangle id of `component` (which
/// must be sorted) that flips windings until neighbours agree across every
/// manifold edge. Returns the number of flipped triangles.
pub fn orient_component(mesh: &mut SurfaceMesh, topo: &Topology, component: &[TriId]) -> Result<usize> {
    let Some(&seed) = component.first() else { return Ok(0) };
    let mut seen: BTreeSet<TriId> = BTreeSet::from([seed]);
    let mut queue = VecDeque::from([seed]);
    let mut flipped = 0;
    while let Some(t) = queue.pop_front() {
        // edges in vertex-set order, so the traversal ignores input windings
        let [a, b, c] = mesh.triangles[t].key();
        for e in [[a, b], [a, c], [b, c]] {
            let tris = &topo.edges[&e];
            if tris.len() != 2 {
                continue;
            }
            let u = if tris[0] == t { tris[1] } else { tris[0] };
            if seen.contains(&u) {
                if !agree(mesh, t, u, e) {
                    return Err(Error::NonOrientable { edge: (e[0], e[1]) });
                }
                continue;
            }
            if component.binary_search(&u).is_err() {
                continue;
            }
            if !agree(mesh, t, u, e) {
                mesh.triangles[u].flip();
                flipped += 1;
            }
            seen.insert(u);
            queue.push_back(u);
        }
    }
    Ok(flipped)
}

/// Orients every component, then turns each one so that its area normals
/// point away from its centroid on average. The result does not depend on
/// the input windings.
pub fn orient_all(mesh: &mut SurfaceMesh) -> Result<()> {
    let topo = mesh.topology();
    for comp in topo.components(mesh) {
        orient_component(mesh, &topo, &comp)?;
        face_outward(mesh, &comp);
    }
    Ok(())
}

fn face_outward(mesh: &mut SurfaceMesh, comp: &[TriId]) {
    let mut area = 0.0;
    let mut centre = Vec3::zeros();
    for &t in comp {
        let p = mesh.points(&mesh.triangles[t]);
        let a = mesh.area_normal(&mesh.triangles[t]).norm();
        area += a;
        centre += (p[0] + p[1] + p[2]) * (a / 3.0);
    }
    if !(area > 0.0) {
        return;
    }
    centre /= area;
    let flux: f64 = comp
        .iter()
        .map(|&t| {
            let p = mesh.points(&mesh.triangles[t]);
            mesh.area_normal(&mesh.triangles[t]).dot(&((p[0] + p[1] + p[2]) / 3.0 - centre))
        })
        .sum();
    let canonical_first = {
        // flat pieces: the lowest triangle ends up wound as its sorted key
        let t = &mesh.triangles[comp[0]];
        let k = t.key();
        t.has_directed(k[0], k[1])
    };
    if flux < 0.0 || (flux == 0.0 && !canonical_first) {
        for &t in comp {
            mesh.triangles[t].flip();
        }
    }
}

/// Removes strip triangles that would make the union with the rest of the
/// mesh non-orientable. `strip` flags the triangles added last; all others
/// are assumed consistently oriented per component.
///
/// Each edge-connected piece of the strip is oriented on its own, then its
/// border pairs with every neighbouring component are tallied as aligned or
/// inverted; the minority triangles go (ties keep the aligned side). Pieces
/// that still block a global orientation are removed whole. Returns the
/// number of removed triangles.
pub fn resolve_moebius(mesh: &mut SurfaceMesh, strip: &[bool]) -> Result<usize> {
    assert_eq!(strip.len(), mesh.triangles.len());
    let mut keep = vec![true; mesh.triangles.len()];
    let topo = mesh.topology();
    let (pieces, _) = strip_pieces(mesh, &topo, strip);
    let rest_comp = rest_components(mesh, &topo, strip);

    for piece in &pieces {
        if orient_component(mesh, &topo, piece).is_err() {
            for &t in piece {
                keep[t] = false;
            }
            continue;
        }
        // (rest component) -> (aligned border triangles, inverted ones)
        let mut tally: BTreeMap<usize, (Vec<TriId>, Vec<TriId>)> = BTreeMap::new();
        for &t in piece {
            for e in mesh.triangles[t].edges() {
                for &u in &topo.edges[&e] {
                    if strip[u] {
                        continue;
                    }
                    let entry = tally.entry(rest_comp[u]).or_default();
                    if agree(mesh, t, u, e) {
                        entry.0.push(t);
                    } else {
                        entry.1.push(t);
                    }
                }
            }
        }
        for (aligned, inverted) in tally.values() {
            let minority = if inverted.len() > aligned.len() { aligned } else { inverted };
            if !aligned.is_empty() && !inverted.is_empty() {
                for &t in minority {
                    keep[t] = false;
                }
            }
        }
    }
    let mut removed = drop_triangles(mesh, &keep);
    let mut strip: Vec<bool> = strip.iter().zip(&keep).filter(|(_, k)| **k).map(|(s, _)| *s).collect();
    removed += prune_nonmanifold(mesh, &mut strip);

    // whole pieces that still conflict across components
    loop {
        let mut trial = mesh.clone();
        match orient_all(&mut trial) {
            Ok(()) => break,
            Err(Error::NonOrientable { edge }) => {
                let topo = mesh.topology();
                let (pieces, piece_of) = strip_pieces(mesh, &topo, &strip);
                let culprit = topo
                    .edge_tris(edge.0, edge.1)
                    .iter()
                    .copied()
                    .filter(|&t| strip[t])
                    .min()
                    .or_else(|| {
                        // the conflict edge lies inside old triangles; drop
                        // the smallest strip piece instead
                        pieces.iter().min_by_key(|p| (p.len(), p[0])).map(|p| p[0])
                    });
                let Some(c) = culprit else {
                    return Err(Error::NonOrientable { edge });
                };
                let mut keep = vec![true; mesh.triangles.len()];
                for &t in &pieces[piece_of[c]] {
                    keep[t] = false;
                }
                removed += drop_triangles(mesh, &keep);
                strip = strip.iter().zip(&keep).filter(|(_, k)| **k).map(|(s, _)| *s).collect();
                removed += prune_nonmanifold(mesh, &mut strip);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(removed)
}

/// Edge-connected pieces of the flagged triangles, each sorted.
fn strip_pieces(mesh: &SurfaceMesh, topo: &Topology, strip: &[bool]) -> (Vec<Vec<TriId>>, Vec<usize>) {
    let mut piece_of = vec![usize::MAX; mesh.triangles.len()];
    let mut pieces = Vec::new();
    for s in 0..mesh.triangles.len() {
        if !strip[s] || piece_of[s] != usize::MAX {
            continue;
        }
        let id = pieces.len();
        piece_of[s] = id;
        let mut piece = vec![s];
        let mut k = 0;
        while k < piece.len() {
            let t = piece[k];
            k += 1;
            for u in topo.edge_neighbors(mesh, t) {
                if strip[u] && piece_of[u] == usize::MAX {
                    piece_of[u] = id;
                    piece.push(u);
                }
            }
        }
        piece.sort_unstable();
        pieces.push(piece);
    }
    (pieces, piece_of)
}

/// Component index of every unflagged triangle, connected through
/// unflagged triangles only.
fn rest_components(mesh: &SurfaceMesh, topo: &Topology, strip: &[bool]) -> Vec<usize> {
    let rest: Vec<bool> = strip.iter().map(|s| !s).collect();
    let (_, of) = strip_pieces(mesh, topo, &rest);
    of
}

fn drop_triangles(mesh: &mut SurfaceMesh, keep: &[bool]) -> usize {
    let before = mesh.triangles.len();
    let mut i = 0;
    mesh.triangles.retain(|_| {
        i += 1;
        keep[i - 1]
    });
    before - mesh.triangles.len()
}

/// Removes flagged triangles until no vertex has more than one fan: at each
/// non-manifold vertex the fan holding the most unflagged triangles (then
/// the most triangles, then the lowest id) stays. Returns the number
/// removed; `flags` is kept in step with the triangle list.
pub fn prune_nonmanifold(mesh: &mut SurfaceMesh, flags: &mut Vec<bool>) -> usize {
    let mut removed = 0;
    loop {
        let topo = mesh.topology();
        let report = audit_with(mesh, &topo);
        let mut keep = vec![true; mesh.triangles.len()];
        for &v in &report.nonmanifold_vertices {
            let fans = vertex_fans(mesh, &topo, v);
            let best = fans
                .iter()
                .enumerate()
                .max_by_key(|(_, f)| {
                    let fixed = f.iter().filter(|&&t| !flags[t]).count();
                    (fixed, f.len(), std::cmp::Reverse(f[0]))
                })
                .map(|(i, _)| i)
                .unwrap();
            for (i, f) in fans.iter().enumerate() {
                if i != best {
                    for &t in f.iter().filter(|&&t| flags[t]) {
                        keep[t] = false;
                    }
                }
            }
        }
        let n = drop_triangles(mesh, &keep);
        if n == 0 {
            return removed;
        }
        *flags = flags.iter().zip(&keep).filter(|(_, k)| **k).map(|(f, _)| *f).collect();
        removed += n;
    }
}
