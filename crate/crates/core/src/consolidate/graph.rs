//! Undecided-triangle classification and conflict graphs.

use std::collections::{BTreeSet, HashSet};

use crate::config::Config;
use crate::mesh::{SurfaceMesh, TriId, Topology};

/// Node index of the aggregate output node.
pub const OUTPUT: usize = 0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
    /// Endpoints must end up in different clusters.
    pub hard: bool,
}

/// Node 0 is the output node; node `i + 1` is `triangles[i]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConflictGraph {
    pub triangles: Vec<TriId>,
    pub arcs: Vec<Arc>,
}

impl ConflictGraph {
    pub fn node_count(&self) -> usize {
        self.triangles.len() + 1
    }

    /// `sum of w_ij` over arcs whose endpoints share a label.
    pub fn objective(&self, labels: &[usize]) -> f64 {
        self.arcs
            .iter()
            .filter(|a| labels[a.a] == labels[a.b])
            .map(|a| a.weight)
            .sum()
    }

    pub fn feasible(&self, labels: &[usize]) -> bool {
        self.arcs.iter().all(|a| !a.hard || labels[a.a] != labels[a.b])
    }
}

/// Classification result: which triangles are undecided, and the undecided
/// components (sharing an edge or a vertex), each sorted.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Classification {
    pub undecided: Vec<bool>,
    pub components: Vec<Vec<TriId>>,
}

/// Triangles in an incompatible pair, or touching the edge or vertex the
/// pair shares, become undecided. Frozen triangles always stay output.
pub fn classify_undecided(mesh: &SurfaceMesh, topo: &Topology, pairs: &[(TriId, TriId)]) -> Classification {
    let n = mesh.triangles.len();
    let mut undecided = vec![false; n];
    for &(a, b) in pairs {
        let (ta, tb) = (&mesh.triangles[a], &mesh.triangles[b]);
        undecided[a] = true;
        undecided[b] = true;
        for v in ta.v.iter().copied().filter(|v| tb.has(*v)) {
            for &t in &topo.vertex_tris[v as usize] {
                undecided[t] = true;
            }
        }
    }
    for (i, t) in mesh.triangles.iter().enumerate() {
        if t.frozen {
            undecided[i] = false;
        }
    }

    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for s in 0..n {
        if !undecided[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut k = 0;
        while k < comp.len() {
            let t = comp[k];
            k += 1;
            for &v in &mesh.triangles[t].v {
                for &u in &topo.vertex_tris[v as usize] {
                    if undecided[u] && !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                    }
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    Classification { undecided, components }
}

/// Conflict graph of one undecided component. `incompatible` holds every
/// incompatible pair `(a, b)` with `a < b`.
pub fn build_conflict_graph(
    component: &[TriId],
    mesh: &SurfaceMesh,
    topo: &Topology,
    class: &Classification,
    incompatible: &HashSet<(TriId, TriId)>,
    config: &Config,
) -> ConflictGraph {
    let node_of = |t: TriId| component.binary_search(&t).ok().map(|i| i + 1);
    let mut arcs = Vec::new();
    let mut linked: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (i, &t) in component.iter().enumerate() {
        let a = i + 1;
        let tri = &mesh.triangles[t];
        let mut c = 0;
        for e in tri.edges() {
            for &u in &topo.edges[&e] {
                if u == t {
                    continue;
                }
                if !class.undecided[u] {
                    c += 1;
                } else if let Some(b) = node_of(u) {
                    let key = (a.min(b), a.max(b));
                    let pair = (t.min(u), t.max(u));
                    if !incompatible.contains(&pair) && linked.insert(key) {
                        arcs.push(Arc {
                            a: key.0,
                            b: key.1,
                            weight: config.compatible_weight,
                            hard: false,
                        });
                    }
                }
            }
        }
        arcs.push(Arc {
            a: OUTPUT,
            b: a,
            weight: tri.score() + c as f64,
            hard: false,
        });
    }
    let mut hard: Vec<(usize, usize)> = incompatible
        .iter()
        .filter_map(|&(s, t)| Some((node_of(s)?, node_of(t)?)))
        .collect();
    hard.sort_unstable();
    for (a, b) in hard {
        arcs.push(Arc {
            a,
            b,
            weight: config.incompatible_weight,
            hard: true,
        });
    }
    arcs.sort_by_key(|x| (x.a, x.b));
    ConflictGraph {
        triangles: component.to_vec(),
        arcs,
    }
}
