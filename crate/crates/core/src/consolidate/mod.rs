//! Consolidation: find incompatible triangles, cluster the contested regions
//! and keep a manifold subset.

pub mod clustering;
pub mod graph;
pub mod incompat;

use std::collections::{BTreeSet, HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

pub use clustering::{solve_clustering, ClusterPartition};
pub use graph::{build_conflict_graph, classify_undecided, Arc, Classification, ConflictGraph, OUTPUT};
pub use incompat::{incompatible, incompatible_pairs, SideFrames};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::mesh::{SurfaceMesh, TriId, TriState, Topology, VId};
use crate::mesh_ops::audit::{audit_with, vertex_fans};

/// Bound on re-clustering rounds; each round removes at least one triangle,
/// so this is only reached on pathological input.
const MAX_ROUNDS: usize = 64;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ConsolidationStats {
    pub incompatible_pairs: usize,
    pub undecided: usize,
    pub components: usize,
    pub removed: usize,
    pub rounds: usize,
    /// Vertex sets of the triangles that were undecided in the first round.
    #[serde(skip)]
    pub undecided_keys: Vec<[VId; 3]>,
}

/// Removes every undecided triangle that its component's partition did not
/// place in the output node's cluster. Returns the number removed.
pub fn apply_consolidation(mesh: &mut SurfaceMesh, graphs: &[ConflictGraph], partitions: &[ClusterPartition]) -> usize {
    let mut drop = vec![false; mesh.triangles.len()];
    for (g, p) in graphs.iter().zip(partitions) {
        let out = p.labels[OUTPUT];
        for (i, &t) in g.triangles.iter().enumerate() {
            if p.labels[i + 1] != out {
                drop[t] = true;
            }
        }
    }
    remove_flagged(mesh, &drop)
}

fn remove_flagged(mesh: &mut SurfaceMesh, drop: &[bool]) -> usize {
    let before = mesh.triangles.len();
    let mut i = 0;
    mesh.triangles.retain(|_| {
        i += 1;
        !drop[i - 1]
    });
    for t in &mut mesh.triangles {
        t.state = TriState::Output;
    }
    before - mesh.triangles.len()
}

/// Pairs that make the mesh non-manifold although no incompatibility
/// criterion flagged them. Frozen-frozen pairs are left out.
fn repair_pairs(mesh: &SurfaceMesh, topo: &Topology) -> Vec<(TriId, TriId)> {
    let report = audit_with(mesh, topo);
    let frozen = |t: TriId| mesh.triangles[t].frozen;
    let mut out = Vec::new();
    for e in &report.nonmanifold_edges {
        let tris = &topo.edges[e];
        let n_frozen = tris.iter().filter(|&&t| frozen(t)).count();
        if n_frozen >= 2 {
            for &a in tris.iter().filter(|&&t| frozen(t)) {
                for &b in tris.iter().filter(|&&t| !frozen(t)) {
                    out.push((a, b));
                }
            }
            continue;
        }
        // split the fins into two half-spaces around the edge; fins in the
        // same half-space overlap
        let (p0, p1) = (mesh.position(e[0]), mesh.position(e[1]));
        let d = (p1 - p0).normalize();
        let perp = |t: TriId| {
            let apex = mesh.triangles[t].opposite(*e).expect("edge triangle");
            let a = mesh.position(apex) - p0;
            a - d * a.dot(&d)
        };
        let lowest = *tris.iter().min().expect("non-empty");
        let u0 = perp(lowest);
        let side: Vec<bool> = tris.iter().map(|&t| perp(t).dot(&u0) >= 0.0).collect();
        for i in 0..tris.len() {
            for j in i + 1..tris.len() {
                if side[i] == side[j] && !(frozen(tris[i]) && frozen(tris[j])) {
                    out.push((tris[i], tris[j]));
                }
            }
        }
    }
    for &v in &report.nonmanifold_vertices {
        let fans = vertex_fans(mesh, topo, v);
        for (i, f) in fans.iter().enumerate() {
            for g in &fans[i + 1..] {
                for &a in f {
                    for &b in g {
                        if !(frozen(a) && frozen(b)) {
                            out.push((a, b));
                        }
                    }
                }
            }
        }
    }
    out.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect()
}

/// Resolves every conflict in `mesh`. Frozen triangles are kept; any
/// triangle conflicting with a frozen one is removed. Afterwards the mesh is
/// manifold and holds no incompatible pair apart from frozen-frozen ones.
pub fn consolidate(mesh: &mut SurfaceMesh, frames: &SideFrames, config: &Config) -> Result<ConsolidationStats> {
    let mut stats = ConsolidationStats::default();
    let mut extra: BTreeSet<[[VId; 3]; 2]> = BTreeSet::new();
    for round in 0..MAX_ROUNDS {
        mesh.sort_triangles();
        let topo = mesh.topology();
        let mut pairs = incompatible_pairs(mesh, &topo, frames, config);
        if round == 0 {
            stats.incompatible_pairs = pairs.len();
        }
        for (a, b) in repair_pairs(mesh, &topo) {
            extra.insert([mesh.triangles[a].key(), mesh.triangles[b].key()]);
        }
        let index: HashMap<[VId; 3], TriId> = mesh.triangles.iter().enumerate().map(|(i, t)| (t.key(), i)).collect();
        pairs.extend(extra.iter().filter_map(|[a, b]| {
            let (a, b) = (*index.get(a)?, *index.get(b)?);
            Some((a.min(b), a.max(b)))
        }));
        pairs.sort_unstable();
        pairs.dedup();

        // conflicts with frozen triangles are settled in favour of the frozen one
        let mut drop = vec![false; mesh.triangles.len()];
        let mut open = Vec::new();
        for &(a, b) in &pairs {
            match (mesh.triangles[a].frozen, mesh.triangles[b].frozen) {
                (true, true) => {}
                (true, false) => drop[b] = true,
                (false, true) => drop[a] = true,
                (false, false) => open.push((a, b)),
            }
        }
        open.retain(|&(a, b)| !drop[a] && !drop[b]);
        let pre = drop.iter().filter(|&&d| d).count();
        if pre > 0 {
            stats.removed += remove_flagged(mesh, &drop);
            continue;
        }
        if open.is_empty() {
            let report = audit_with(mesh, &topo);
            if report.is_manifold() {
                stats.rounds = round + 1;
                return Ok(stats);
            }
            return Err(Error::invariant(
                "consolidation",
                format!(
                    "{} non-manifold edges and {} non-manifold vertices between frozen triangles",
                    report.nonmanifold_edges.len(),
                    report.nonmanifold_vertices.len()
                ),
            ));
        }

        let class = classify_undecided(mesh, &topo, &open);
        if round == 0 {
            stats.undecided = class.undecided.iter().filter(|&&u| u).count();
            stats.components = class.components.len();
            stats.undecided_keys = (0..mesh.triangles.len())
                .filter(|&t| class.undecided[t])
                .map(|t| mesh.triangles[t].key())
                .collect();
        }
        for (t, &u) in class.undecided.iter().enumerate() {
            if u {
                mesh.triangles[t].state = TriState::Undecided;
            }
        }
        let open_set: HashSet<(TriId, TriId)> = open.into_iter().collect();
        let graphs: Vec<ConflictGraph> = class
            .components
            .par_iter()
            .map(|c| build_conflict_graph(c, mesh, &topo, &class, &open_set, config))
            .collect();
        let parts: Vec<ClusterPartition> = graphs.par_iter().map(solve_clustering).collect();
        let removed = apply_consolidation(mesh, &graphs, &parts);
        if removed == 0 {
            return Err(Error::invariant("consolidation", "clustering removed nothing from a contested region"));
        }
        stats.removed += removed;
    }
    Err(Error::invariant("consolidation", format!("no manifold subset after {MAX_ROUNDS} rounds")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec3;
    use crate::mesh::{edge_key, Provenance, Triangle};
    use crate::mesh_ops::audit::audit_manifold;
    use crate::scoring::Side;

    fn scored(v: [VId; 3], score: f64) -> Triangle {
        Triangle::new(v, Some(Provenance { edge: [v[0], v[1]], apex: v[2], side: Side::Left, score }))
    }

    #[test]
    fn clustering_example_keeps_u1() {
        let mut m = SurfaceMesh::default();
        for p in [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0]] {
            m.add_vertex(Vec3::from(p), Vec3::z());
        }
        m.triangles = vec![Triangle::new([0, 1, 2], None), Triangle::new([0, 1, 3], None)];
        let g = ConflictGraph {
            triangles: vec![0, 1],
            arcs: vec![
                Arc { a: 0, b: 1, weight: 5.0, hard: false },
                Arc { a: 0, b: 2, weight: 2.0, hard: false },
                Arc { a: 1, b: 2, weight: -30.0, hard: true },
            ],
        };
        let p = solve_clustering(&g);
        assert_eq!(apply_consolidation(&mut m, &[g], &[p]), 1);
        assert_eq!(m.triangles.len(), 1);
        assert_eq!(m.triangles[0].v, [0, 1, 2]);
    }

    #[test]
    fn clean_mesh_unchanged() {
        let mut m = SurfaceMesh::default();
        for p in [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]] {
            m.add_vertex(Vec3::from(p), Vec3::z());
        }
        m.add_triangles([Triangle::new([0, 1, 2], None), Triangle::new([0, 2, 3], None)]);
        let before = m.clone();
        let s = consolidate(&mut m, &SideFrames::default(), &Config::default()).unwrap();
        assert_eq!(s.removed, 0);
        assert_eq!(m, before);
    }

    const N: usize = 6;

    /// Chains A (x=0), B (x=1) and C (x=2, lifted) along y, with strips A-B,
    /// B-C and A-C. The A-C strip overlaps the other two.
    fn three_strips() -> (SurfaceMesh, SideFrames, Vec<[VId; 3]>) {
        let mut m = SurfaceMesh::default();
        let rows = [(0.0, 0.0), (1.0, 0.0), (2.0, 0.3)];
        for &(x, z) in &rows {
            for i in 0..N {
                m.add_vertex(Vec3::new(x, i as f64, z), Vec3::z());
            }
        }
        let vid = |c: usize, i: usize| (c * N + i) as VId;
        let mut tris = Vec::new();
        let mut ac = Vec::new();
        for (x, y, s) in [(0, 1, 1.5), (1, 2, 1.5), (0, 2, 0.5)] {
            for i in 0..N - 1 {
                let t1 = Triangle::new(
                    [vid(x, i), vid(y, i), vid(x, i + 1)],
                    Some(Provenance { edge: [vid(x, i), vid(x, i + 1)], apex: vid(y, i), side: Side::Left, score: s }),
                );
                let t2 = Triangle::new(
                    [vid(x, i + 1), vid(y, i), vid(y, i + 1)],
                    Some(Provenance { edge: [vid(y, i), vid(y, i + 1)], apex: vid(x, i + 1), side: Side::Right, score: s }),
                );
                if (x, y) == (0, 2) {
                    ac.push(t1.key());
                    ac.push(t2.key());
                }
                tris.push(t1);
                tris.push(t2);
            }
        }
        m.add_triangles(tris);
        let mut f = SideFrames::default();
        for c in 0..3 {
            for i in 0..N {
                f.vertex.insert(vid(c, i), Vec3::x());
                if i + 1 < N {
                    f.edge.insert(edge_key(vid(c, i), vid(c, i + 1)), Vec3::x() * 2.0);
                }
            }
        }
        (m, f, ac)
    }

    fn assert_clean(m: &SurfaceMesh, f: &SideFrames) {
        let cfg = Config::default();
        assert!(audit_manifold(m).is_manifold());
        let topo = m.topology();
        // direct scan over all retained pairs
        for a in 0..m.triangles.len() {
            for b in a + 1..m.triangles.len() {
                assert!(!incompatible(m, &m.triangles[a], &m.triangles[b], f, &cfg), "pair {a} {b}");
            }
        }
        assert!(topo.edges.values().all(|t| t.len() <= 2));
    }

    #[test]
    fn three_strips_keep_one_layer() {
        let (mut m, f, ac) = three_strips();
        let total = m.triangles.len();
        let s = consolidate(&mut m, &f, &Config::default()).unwrap();
        assert!(s.incompatible_pairs > 0);
        assert_clean(&m, &f);
        let kept: HashSet<[VId; 3]> = m.triangles.iter().map(|t| t.key()).collect();
        assert!(ac.iter().all(|k| !kept.contains(k)));
        assert_eq!(s.removed, ac.len());
        assert_eq!(m.triangles.len(), total - ac.len());
        // every interior edge of chain A still has exactly one triangle
        let topo = m.topology();
        for i in 0..N as VId - 1 {
            assert_eq!(topo.edge_tris(i, i + 1).len(), 1);
        }
    }

    #[test]
    fn frozen_triangles_win() {
        let (mut m, f, ac) = three_strips();
        let ac: HashSet<[VId; 3]> = ac.into_iter().collect();
        for t in &mut m.triangles {
            t.frozen = ac.contains(&t.key());
        }
        consolidate(&mut m, &f, &Config::default()).unwrap();
        assert!(audit_manifold(&m).is_manifold());
        let kept: HashSet<[VId; 3]> = m.triangles.iter().map(|t| t.key()).collect();
        assert!(ac.iter().all(|k| kept.contains(k)));
    }

    #[test]
    fn three_fins_on_free_edge_repaired() {
        let mut m = SurfaceMesh::default();
        m.add_vertex(Vec3::zeros(), Vec3::z());
        m.add_vertex(Vec3::z(), Vec3::z());
        let mut tris = Vec::new();
        for k in 0..3 {
            let a = (k as f64 * 120.0).to_radians();
            let v = m.add_vertex(Vec3::new(a.cos(), a.sin(), 0.5), Vec3::z());
            tris.push(scored([0, 1, v], 1.0 + k as f64 * 0.1));
        }
        m.add_triangles(tris);
        let s = consolidate(&mut m, &SideFrames::default(), &Config::default()).unwrap();
        assert_eq!(s.incompatible_pairs, 0);
        assert_eq!(m.triangles.len(), 2);
        assert!(audit_manifold(&m).is_manifold());
    }

    #[test]
    fn bowtie_repaired() {
        let mut m = SurfaceMesh::default();
        for p in [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [-1.0, 0.0, 0.2], [-1.0, -1.0, 0.2]] {
            m.add_vertex(Vec3::from(p), Vec3::z());
        }
        m.add_triangles([scored([0, 1, 2], 1.0), scored([0, 3, 4], 0.8)]);
        consolidate(&mut m, &SideFrames::default(), &Config::default()).unwrap();
        assert_eq!(m.triangles.len(), 1);
        assert_eq!(m.triangles[0].key(), [0, 1, 2]);
        assert!(audit_manifold(&m).is_manifold());
    }
}
