//! Indexed triangle mesh over stroke vertices, with per-triangle provenance.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::geom::{triangle_normal, Vec3};
use crate::scoring::Side;

pub type VId = u32;
pub type TriId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TriState {
    Output,
    Undecided,
}

/// Where a triangle came from: the chain edge it hangs on and its apex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Provenance {
    pub edge: [VId; 2],
    pub apex: VId,
    pub side: Side,
    /// Sum of the two vertex scores between the edge endpoints and the apex.
    pub score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    pub v: [VId; 3],
    pub prov: Option<Provenance>,
    pub state: TriState,
    /// Frozen triangles are never removed by consolidation.
    pub frozen: bool,
}

impl Triangle {
    pub fn new(v: [VId; 3], prov: Option<Provenance>) -> Triangle {
        Triangle {
            v,
            prov,
            state: TriState::Output,
            frozen: false,
        }
    }

    pub fn key(&self) -> [VId; 3] {
        sorted3(self.v)
    }

    pub fn score(&self) -> f64 {
        self.prov.map_or(0.0, |p| p.score)
    }

    pub fn has(&self, v: VId) -> bool {
        self.v.contains(&v)
    }

    /// The three undirected edges, endpoints sorted.
    pub fn edges(&self) -> [[VId; 2]; 3] {
        [
            edge_key(self.v[0], self.v[1]),
            edge_key(self.v[1], self.v[2]),
            edge_key(self.v[2], self.v[0]),
        ]
    }

    /// The vertex opposite the edge `e`, if `e` belongs to this triangle.
    pub fn opposite(&self, e: [VId; 2]) -> Option<VId> {
        if self.has(e[0]) && self.has(e[1]) {
            self.v.iter().copied().find(|&x| x != e[0] && x != e[1])
        } else {
            None
        }
    }

    /// Is the directed edge `a -> b` traversed by this triangle's winding?
    pub fn has_directed(&self, a: VId, b: VId) -> bool {
        (0..3).any(|k| self.v[k] == a && self.v[(k + 1) % 3] == b)
    }

    pub fn flip(&mut self) {
        self.v.swap(1, 2);
    }
}

pub fn sorted3(mut v: [VId; 3]) -> [VId; 3] {
    v.sort_unstable();
    v
}

pub fn edge_key(a: VId, b: VId) -> [VId; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeshVertex {
    pub position: Vec3,
    /// Input normal for stroke vertices; recomputed from the surface on export.
    pub normal: Vec3,
    /// Stroke width and colour of the vertex the mesh vertex came from.
    pub width: f64,
    pub color: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SurfaceMesh {
    pub vertices: Vec<MeshVertex>,
    pub triangles: Vec<Triangle>,
}

impl SurfaceMesh {
    pub fn position(&self, v: VId) -> Vec3 {
        self.vertices[v as usize].position
    }

    pub fn points(&self, t: &Triangle) -> [Vec3; 3] {
        [self.position(t.v[0]), self.position(t.v[1]), self.position(t.v[2])]
    }

    pub fn add_vertex(&mut self, position: Vec3, normal: Vec3) -> VId {
        self.push_vertex(MeshVertex {
            position,
            normal,
            width: 0.0,
            color: [0.0; 3],
        })
    }

    pub fn push_vertex(&mut self, v: MeshVertex) -> VId {
        self.vertices.push(v);
        (self.vertices.len() - 1) as VId
    }

    /// Unnormalized (area-weighted) normal of triangle `t`.
    pub fn area_normal(&self, t: &Triangle) -> Vec3 {
        let [a, b, c] = self.points(t);
        triangle_normal(&a, &b, &c)
    }

    /// Inserts triangles, skipping degenerate ones and any whose vertex set
    /// already exists. Among new duplicates the higher score wins. Returns
    /// the number actually added.
    pub fn add_triangles(&mut self, new: impl IntoIterator<Item = Triangle>) -> usize {
        let mut index: HashMap<[VId; 3], Option<usize>> = self.triangles.iter().map(|t| (t.key(), None)).collect();
        let mut added: Vec<Triangle> = Vec::new();
        for t in new {
            let k = t.key();
            if k[0] == k[1] || k[1] == k[2] {
                continue;
            }
            match index.get(&k) {
                Some(None) => {}
                Some(Some(i)) => {
                    if t.score() > added[*i].score() {
                        added[*i] = t;
                    }
                }
                None => {
                    index.insert(k, Some(added.len()));
                    added.push(t);
                }
            }
        }
        let n = added.len();
        self.triangles.extend(added);
        n
    }

    /// Sorts triangles by vertex set so triangle ids are canonical.
    pub fn sort_triangles(&mut self) {
        self.triangles.sort_by_key(|t| t.key());
    }

    pub fn topology(&self) -> Topology {
        Topology::build(self)
    }

    /// Drops vertices not referenced by any triangle; returns the old-to-new
    /// id map.
    pub fn compact(&mut self) -> Vec<Option<VId>> {
        let mut used = vec![false; self.vertices.len()];
        for t in &self.triangles {
            for &v in &t.v {
                used[v as usize] = true;
            }
        }
        let mut map = vec![None; self.vertices.len()];
        let mut kept = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if used[i] {
                map[i] = Some(kept.len() as VId);
                kept.push(v.clone());
            }
        }
        self.vertices = kept;
        for t in &mut self.triangles {
            for v in &mut t.v {
                *v = map[*v as usize].unwrap();
            }
            if let Some(p) = &mut t.prov {
                p.edge = [map[p.edge[0] as usize].unwrap_or(p.edge[0]), map[p.edge[1] as usize].unwrap_or(p.edge[1])];
                p.apex = map[p.apex as usize].unwrap_or(p.apex);
            }
        }
        map
    }
}

/// Edge and vertex incidence of a mesh.
#[derive(Debug, Clone, Default)]
pub struct Topology {
    pub edges: BTreeMap<[VId; 2], Vec<TriId>>,
    pub vertex_tris: Vec<Vec<TriId>>,
}

impl Topology {
    pub fn build(mesh: &SurfaceMesh) -> Topology {
        let mut edges: BTreeMap<[VId; 2], Vec<TriId>> = BTreeMap::new();
        let mut vertex_tris = vec![Vec::new(); mesh.vertices.len()];
        for (i, t) in mesh.triangles.iter().enumerate() {
            for e in t.edges() {
                edges.entry(e).or_default().push(i);
            }
            for &v in &t.v {
                vertex_tris[v as usize].push(i);
            }
        }
        Topology { edges, vertex_tris }
    }

    pub fn edge_tris(&self, a: VId, b: VId) -> &[TriId] {
        self.edges.get(&edge_key(a, b)).map_or(&[], |v| v.as_slice())
    }

    /// Triangles sharing an edge with `t`.
    pub fn edge_neighbors<'a>(&'a self, mesh: &'a SurfaceMesh, t: TriId) -> impl Iterator<Item = TriId> + 'a {
        mesh.triangles[t]
            .edges()
            .into_iter()
            .flat_map(move |e| self.edges[&e].iter().copied().filter(move |&u| u != t))
    }

    /// Edge-connected components of the triangles, each sorted; components
    /// ordered by their smallest triangle id.
    pub fn components(&self, mesh: &SurfaceMesh) -> Vec<Vec<TriId>> {
        let n = mesh.triangles.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut k = 0;
            while k < comp.len() {
                let t = comp[k];
                k += 1;
                for u in self.edge_neighbors(mesh, t) {
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Component index of every triangle.
    pub fn component_of(&self, mesh: &SurfaceMesh) -> (Vec<usize>, usize) {
        let comps = self.components(mesh);
        let mut of = vec![0; mesh.triangles.len()];
        for (c, ts) in comps.iter().enumerate() {
            for &t in ts {
                of[t] = c;
            }
        }
        (of, comps.len())
    }
}
