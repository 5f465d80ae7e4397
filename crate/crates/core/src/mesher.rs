//! Triangle strips between matched chain sections.
//!
//! Every pair of consecutive matched vertices `p_i -> q_j`, `p_{i+1} -> q_k`
//! on the same target chain spans a polygon `p_{i+1}, p_i, q_j, ..., q_k`
//! which is triangulated as two fans joined by one triangle. `j == k` gives
//! a single triangle, `|j - k| == 1` a quad.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::config::Config;
use crate::geom::{dihedral_deg, min_angle, Vec3};
use crate::matcher::{ChainSet, MatchTable, VertexRef};
use crate::mesh::{MeshVertex, Provenance, SurfaceMesh, Triangle, VId};
use crate::scoring::Side;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct MeshStats {
    pub triangles_added: usize,
    /// Consecutive matches landing on different chains.
    pub skipped_cross_chain: usize,
    /// Quads whose best split folds sharper than the dihedral limit.
    pub skipped_folded: usize,
    /// Sections with competing matches inside.
    pub skipped_polygon: usize,
    /// Crease sections meshed as half ribbons.
    pub crease_pairs: usize,
}

/// One side of a strip: a mesh vertex plus the chain vertex used for scoring.
#[derive(Debug, Clone, Copy)]
struct Node {
    vid: VId,
    chain_ref: VertexRef,
}

struct Ctx<'a> {
    chains: &'a ChainSet,
    table: &'a MatchTable,
    config: &'a Config,
}

impl Ctx<'_> {
    fn vid(&self, r: VertexRef) -> VId {
        self.chains.vertex(r).vid
    }

    fn score(&self, a: VertexRef, b: VertexRef, side: Side) -> f64 {
        self.chains.emission(a, b, side).map_or(0.0, f64::exp)
    }

    /// Side of `x` relative to the chain edge `(a, b)`.
    fn side_of_edge(&self, a: VertexRef, b: VertexRef, x: &Vec3) -> Side {
        let (va, vb) = (self.chains.vertex(a), self.chains.vertex(b));
        let (Some(fa), Some(fb)) = (va.frame, vb.frame) else {
            return Side::Left;
        };
        let mid = (va.position + vb.position) / 2.0;
        Side::of(&(x - mid), &(fa.binormal + fb.binormal), 0.0).unwrap_or(Side::Left)
    }

    /// The chain section from `j` to `k`, taking the shorter way around on
    /// cyclic chains.
    fn section(&self, j: VertexRef, k: VertexRef) -> Vec<VertexRef> {
        let c = j.chain as usize;
        let ch = &self.chains.chains[c];
        let n = ch.len() as i64;
        let (a, b) = (j.index as i64, k.index as i64);
        let step: i64 = if ch.cyclic {
            let fwd = (b - a).rem_euclid(n);
            let bwd = (a - b).rem_euclid(n);
            if fwd <= bwd {
                1
            } else {
                -1
            }
        } else if b >= a {
            1
        } else {
            -1
        };
        let mut out = vec![j];
        let mut i = a;
        while i != b {
            i = (i + step).rem_euclid(n);
            out.push(VertexRef::new(c, i as usize));
        }
        out
    }

    /// Does a vertex strictly inside the section match something other than
    /// the two source vertices on the side facing them?
    fn section_blocked(&self, section: &[VertexRef], mesh: &SurfaceMesh, p0: VertexRef, p1: VertexRef) -> bool {
        let ppos = mesh.position(self.vid(p0));
        section[1..section.len() - 1].iter().any(|&x| {
            let vx = self.chains.vertex(x);
            let Some(fx) = vx.frame else {
                return false;
            };
            let Some(side) = Side::of(&(ppos - vx.position), &fx.binormal, 0.0) else {
                return false;
            };
            self.table
                .get(self.chains, x, side)
                .is_some_and(|m| m.target != p0 && m.target != p1)
        })
    }

    /// Triangulates the strip between source nodes `a0, a1` and the target
    /// section. Emits triangles wound so that a left strip faces `+n`.
    fn polygon(&self, mesh: &SurfaceMesh, a0: Node, a1: Node, section: &[VertexRef], side: Side, stats: &mut MeshStats) -> Vec<Triangle> {
        let xs: Vec<VId> = section.iter().map(|&r| self.vid(r)).collect();
        let l = xs.len() - 1;
        let pos = |v: VId| mesh.position(v);

        let m = if l == 1 {
            // quad: split by the better-shaped, flatter diagonal
            let eval = |m: usize| {
                let (t0, t1) = if m == 1 {
                    ([a1.vid, a0.vid, xs[1]], [a0.vid, xs[0], xs[1]])
                } else {
                    ([a1.vid, a0.vid, xs[0]], [a1.vid, xs[0], xs[1]])
                };
                let ang = |t: [VId; 3]| min_angle(&pos(t[0]), &pos(t[1]), &pos(t[2]));
                let diag = if m == 1 { [a0.vid, xs[1]] } else { [a1.vid, xs[0]] };
                let others = if m == 1 { [a1.vid, xs[0]] } else { [a0.vid, xs[1]] };
                let dih = dihedral_deg(&pos(diag[0]), &pos(diag[1]), &pos(others[0]), &pos(others[1]));
                let mut key = diag;
                key.sort_unstable();
                (ang(t0).min(ang(t1)), dih, key)
            };
            let (s1, s0) = (eval(1), eval(0));
            let better1 = s1.0 > s0.0
                || (s1.0 == s0.0 && ((180.0 - s1.1).abs() < (180.0 - s0.1).abs() || ((180.0 - s1.1).abs() == (180.0 - s0.1).abs() && s1.2 < s0.2)));
            let (m, chosen) = if better1 { (1, s1) } else { (0, s0) };
            if chosen.1 < self.config.dihedral_min_deg {
                stats.skipped_folded += 1;
                return Vec::new();
            }
            m
        } else {
            // maximise the summed vertex scores of the two fans
            let sa: Vec<f64> = section.iter().map(|&x| self.score(a0.chain_ref, x, side)).collect();
            let sb: Vec<f64> = section.iter().map(|&x| self.score(a1.chain_ref, x, side)).collect();
            let mut best = (f64::NEG_INFINITY, 0);
            for m in 0..=l {
                let total: f64 = sa[..=m].iter().sum::<f64>() + sb[m..].iter().sum::<f64>();
                if total > best.0 {
                    best = (total, m);
                }
            }
            best.1
        };

        let mut out = Vec::with_capacity(l + 1);
        let main_prov = Provenance {
            edge: [a0.vid, a1.vid],
            apex: xs[m],
            side,
            score: self.score(a0.chain_ref, section[m], side) + self.score(a1.chain_ref, section[m], side),
        };
        out.push(Triangle::new([a1.vid, a0.vid, xs[m]], Some(main_prov)));
        for k in 0..l {
            let (apex, apex_ref) = if k < m { (a0, a0.chain_ref) } else { (a1, a1.chain_ref) };
            let (x0, x1) = (section[k], section[k + 1]);
            let s = self.side_of_edge(x0, x1, &pos(apex.vid));
            let prov = Provenance {
                edge: [xs[k], xs[k + 1]],
                apex: apex.vid,
                side: s,
                score: self.score(x0, apex_ref, s) + self.score(x1, apex_ref, s),
            };
            out.push(Triangle::new([apex.vid, xs[k], xs[k + 1]], Some(prov)));
        }
        if side == Side::Right {
            for t in &mut out {
                t.flip();
            }
        }
        out
    }

    /// Strip for one consecutive matched pair, or nothing if skipped.
    fn pair(&self, mesh: &SurfaceMesh, a0: Node, a1: Node, q0: VertexRef, q1: VertexRef, side: Side, stats: &mut MeshStats) -> Vec<Triangle> {
        if q0.chain != q1.chain {
            stats.skipped_cross_chain += 1;
            return Vec::new();
        }
        let section = self.section(q0, q1);
        if section.len() > 2 && self.section_blocked(&section, mesh, a0.chain_ref, a1.chain_ref) {
            stats.skipped_polygon += 1;
            return Vec::new();
        }
        self.polygon(mesh, a0, a1, &section, side, stats)
    }

    /// Consecutive vertex pairs along every chain, with wrap-around on
    /// cyclic chains.
    fn edges(&self) -> Vec<(VertexRef, VertexRef)> {
        let mut out = Vec::new();
        for r in self.chains.refs() {
            if let Some(n) = self.chains.next(r) {
                if n.index > r.index || self.chains.chains[r.chain as usize].cyclic {
                    out.push((r, n));
                }
            }
        }
        out
    }
}

fn node(chains: &ChainSet, r: VertexRef) -> Node {
    Node {
        vid: chains.vertex(r).vid,
        chain_ref: r,
    }
}

/// Meshes every consecutive matched pair on both sides and adds the result
/// to `mesh` (chain vertex ids index `mesh.vertices`).
pub fn mesh_from_matches(chains: &ChainSet, table: &MatchTable, mesh: &mut SurfaceMesh, config: &Config) -> MeshStats {
    let ctx = Ctx { chains, table, config };
    let mut stats = MeshStats::default();
    let mut tris = Vec::new();
    for side in Side::BOTH {
        for (p0, p1) in ctx.edges() {
            let (Some(m0), Some(m1)) = (table.get(chains, p0, side), table.get(chains, p1, side)) else {
                continue;
            };
            tris.extend(ctx.pair(mesh, node(chains, p0), node(chains, p1), m0.target, m1.target, side, &mut stats));
        }
    }
    stats.triangles_added = mesh.add_triangles(tris);
    stats
}

/// Direction from `p` toward its partner along each vertex's binormal; the
/// angle between them is the crease indicator.
fn crease_directions(chains: &ChainSet, p: VertexRef, q: VertexRef, side: Side) -> Option<(Vec3, Vec3)> {
    let (vp, vq) = (chains.vertex(p), chains.vertex(q));
    let (fp, fq) = (vp.frame?, vq.frame?);
    let h_p = fp.binormal * side.sign();
    let s_q = Side::of(&(vp.position - vq.position), &fq.binormal, 0.0)?;
    Some((h_p, fq.binormal * s_q.sign()))
}

fn is_crease(chains: &ChainSet, p: VertexRef, q: VertexRef, side: Side, config: &Config) -> bool {
    crease_directions(chains, p, q, side)
        .is_some_and(|(a, b)| crate::geom::angle_between_deg(&a, &b) <= config.crease_angle_deg + 1e-6)
}

/// Like [`mesh_from_matches`], but sections whose ribbons meet at a crease
/// keep a half ribbon of the stroke with more vertices in the section; its
/// outer edge (fresh vertices at `w/2` along the binormal) is joined to the
/// partner's spine. The partner's own matches onto the keeper are dropped.
pub fn mesh_with_creases(chains: &ChainSet, table: &MatchTable, mesh: &mut SurfaceMesh, config: &Config) -> MeshStats {
    let ctx = Ctx { chains, table, config };
    let mut stats = MeshStats::default();

    // crease-matched vertex counts per ordered chain pair
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut crease: HashMap<(VertexRef, Side), bool> = HashMap::new();
    for (p, side, m) in table.iter(chains) {
        let c = is_crease(chains, p, m.target, side, config);
        crease.insert((p, side), c);
        if c {
            *counts.entry((p.chain as usize, m.target.chain as usize)).or_default() += 1;
        }
    }
    let keeps = |a: usize, b: usize| {
        let ca = counts.get(&(a, b)).copied().unwrap_or(0);
        let cb = counts.get(&(b, a)).copied().unwrap_or(0);
        ca > cb || (ca == cb && a <= b)
    };

    let mut offsets: BTreeMap<(VertexRef, Side), VId> = BTreeMap::new();
    let mut offset_of = |mesh: &mut SurfaceMesh, p: VertexRef, side: Side| -> VId {
        *offsets.entry((p, side)).or_insert_with(|| {
            let v = chains.vertex(p);
            let f = v.frame.expect("crease vertices have frames");
            mesh.push_vertex(MeshVertex {
                position: v.position + f.binormal * (side.sign() * v.width / 2.0),
                normal: f.normal,
                width: v.width,
                color: v.color,
            })
        })
    };

    let mut tris = Vec::new();
    for side in Side::BOTH {
        for (p0, p1) in ctx.edges() {
            let (Some(m0), Some(m1)) = (table.get(chains, p0, side), table.get(chains, p1, side)) else {
                continue;
            };
            let c0 = crease[&(p0, side)];
            let c1 = crease[&(p1, side)];
            if !c0 && !c1 {
                tris.extend(ctx.pair(mesh, node(chains, p0), node(chains, p1), m0.target, m1.target, side, &mut stats));
                continue;
            }
            if c0 != c1 || m0.target.chain != m1.target.chain {
                stats.skipped_cross_chain += 1;
                continue;
            }
            let (a, b) = (p0.chain as usize, m0.target.chain as usize);
            if !keeps(a, b) {
                continue;
            }
            stats.crease_pairs += 1;
            let o0 = offset_of(mesh, p0, side);
            let o1 = offset_of(mesh, p1, side);
            // half ribbon between spine and offset edge; it stands in for the
            // ribbon itself, so it gets the score of a perfect match
            let (s0, s1) = (vid_of(chains, p0), vid_of(chains, p1));
            let prov = |edge: [VId; 2], apex: VId| Provenance { edge, apex, side, score: 2.0 };
            let half = [
                Triangle::new([s1, s0, o0], Some(prov([s0, s1], o0))),
                Triangle::new([s1, o0, o1], Some(prov([o0, o1], s1))),
            ];
            for mut t in half {
                if side == Side::Right {
                    t.flip();
                }
                tris.push(t);
            }
            let n0 = Node { vid: o0, chain_ref: p0 };
            let n1 = Node { vid: o1, chain_ref: p1 };
            tris.extend(ctx.pair(mesh, n0, n1, m0.target, m1.target, side, &mut stats));
        }
    }
    stats.triangles_added = mesh.add_triangles(tris);
    stats
}

fn vid_of(chains: &ChainSet, r: VertexRef) -> VId {
    chains.vertex(r).vid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcher::{baseline_candidates, run_matching, Match};
    use crate::stroke::{Drawing, Stroke};

    fn mesh_for(d: &Drawing) -> SurfaceMesh {
        let mut m = SurfaceMesh::default();
        for s in &d.strokes {
            for v in &s.vertices {
                m.add_vertex(v.position, v.normal);
            }
        }
        m
    }

    fn stroke(ps: &[[f64; 3]], w: f64) -> Stroke {
        let ps: Vec<Vec3> = ps.iter().map(|p| Vec3::from(*p)).collect();
        Stroke::from_parts(&ps, &vec![Vec3::z(); ps.len()], &vec![w; ps.len()], [1.0; 3])
    }

    fn manual(chains: &ChainSet, links: &[((usize, usize), Side, (usize, usize))]) -> MatchTable {
        let mut t = MatchTable::empty(chains);
        for &((c, i), s, (d, j)) in links {
            t.entries[chains.flat(VertexRef::new(c, i))][s.index()] = Some(Match {
                target: VertexRef::new(d, j),
                log_score: -1.0,
            });
        }
        t
    }

    #[test]
    fn parallel_strokes_give_flat_strip() {
        let cfg = Config::default();
        let d = Drawing::new(vec![
            stroke(&[[0.0, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 1.0, 0.0]], 1.0),
            stroke(&[[0.6, 0.0, 0.0], [0.6, 0.5, 0.0], [0.6, 1.0, 0.0]], 1.0),
        ])
        .unwrap();
        let cs = ChainSet::from_drawing(&d, &cfg);
        let t = run_matching(&cs, &baseline_candidates(&cs, &cfg, false), &Side::BOTH);
        let mut m = mesh_for(&d);
        let st = mesh_from_matches(&cs, &t, &mut m, &cfg);
        assert_eq!(m.triangles.len(), 4);
        assert_eq!(st.triangles_added, 4);
        for tri in &m.triangles {
            assert!(m.points(tri).iter().all(|p| p.z == 0.0));
            // left strip of stroke 0 is wound toward +z
            let n = m.area_normal(tri);
            assert!(n.z.abs() > 0.0);
        }
    }

    #[test]
    fn folded_quad_is_rejected() {
        use nalgebra::{Rotation3, Unit};
        let cfg = Config::default();
        // unit square folded about its diagonal p0-q1 to a 30 degree dihedral
        let (p0, p1, q1) = (Vec3::zeros(), Vec3::y(), Vec3::new(1.0, 1.0, 0.0));
        let rot = Rotation3::from_axis_angle(&Unit::new_normalize(q1 - p0), 150f64.to_radians());
        let q0 = rot * Vec3::x();
        assert!((dihedral_deg(&p0, &q1, &p1, &q0) - 30.0).abs() < 1e-9);
        // the better-shaped split is the folded one
        let split_a = min_angle(&p1, &p0, &q1).min(min_angle(&p0, &q0, &q1));
        let split_b = min_angle(&p1, &p0, &q0).min(min_angle(&p1, &q0, &q1));
        assert!(split_a > split_b);
        let d = Drawing::new(vec![
            stroke(&[p0.into(), p1.into()], 2.0),
            stroke(&[q0.into(), q1.into()], 2.0),
        ])
        .unwrap();
        let cs = ChainSet::from_drawing(&d, &cfg);
        let t = manual(&cs, &[((0, 0), Side::Left, (1, 0)), ((0, 1), Side::Left, (1, 1))]);
        let mut m = mesh_for(&d);
        let st = mesh_from_matches(&cs, &t, &mut m, &cfg);
        assert_eq!(st.skipped_folded, 1);
        assert!(m.triangles.is_empty());
    }

    #[test]
    fn sharp_fold_rejected() {
        let cfg = Config::default();
        // both splits fold to under 45 degrees
        let d = Drawing::new(vec![
            stroke(&[[0.0, 0.0, 0.0], [0.0, 1.0, 0.0]], 1.0),
            stroke(&[[0.3, 0.0, 0.1], [0.3, 1.0, -0.1]], 1.0),
        ])
        .unwrap();
        let cs = ChainSet::from_drawing(&d, &cfg);
        let t = manual(&cs, &[((0, 0), Side::Left, (1, 1)), ((0, 1), Side::Left, (1, 0))]);
        let mut m = mesh_for(&d);
        let st = mesh_from_matches(&cs, &t, &mut m, &cfg);
        // crossing quad: split dihedrals are tiny
        assert_eq!(st.skipped_folded, 1);
        assert!(m.triangles.is_empty());
    }

    #[test]
    fn t_junction_single_triangle() {
        let cfg = Config::default();
        let d = Drawing::new(vec![
            stroke(&[[0.0, 0.0, 0.0], [0.0, 0.5, 0.0]], 1.0),
            stroke(&[[0.5, -1.0, 0.0], [0.5, 0.25, 0.0], [0.5, 1.5, 0.0]], 1.0),
        ])
        .unwrap();
        let cs = ChainSet::from_drawing(&d, &cfg);
        let t = manual(&cs, &[((0, 0), Side::Left, (1, 1)), ((0, 1), Side::Left, (1, 1))]);
        let mut m = mesh_for(&d);
        mesh_from_matches(&cs, &t, &mut m, &cfg);
        assert_eq!(m.triangles.len(), 1);
        assert_eq!(m.triangles[0].key(), [0, 1, 3]);
    }

    #[test]
    fn polygon_split_is_score_optimal() {
        let cfg = Config::default();
        let q: Vec<[f64; 3]> = (0..6).map(|i| [0.7 + 0.03 * (i as f64 - 2.5).powi(2), -0.3 + 0.25 * i as f64, 0.0]).collect();
        let d = Drawing::new(vec![stroke(&[[0.0, 0.2, 0.0], [0.0, 0.6, 0.0]], 1.0), stroke(&q, 1.0)]).unwrap();
        let cs = ChainSet::from_drawing(&d, &cfg);
        let t = manual(&cs, &[((0, 0), Side::Left, (1, 1)), ((0, 1), Side::Left, (1, 4))]);
        let mut m = mesh_for(&d);
        mesh_from_matches(&cs, &t, &mut m, &cfg);
        assert_eq!(m.triangles.len(), 4);

        // enumerate every split index independently
        let sc = |a: usize, x: usize| cs.emission(VertexRef::new(0, a), VertexRef::new(1, x), Side::Left).unwrap().exp();
        let best_m = (1..=4)
            .max_by(|&a, &b| {
                let f = |m: usize| (1..=m).map(|x| sc(0, x)).sum::<f64>() + (m..=4).map(|x| sc(1, x)).sum::<f64>();
                f(a).partial_cmp(&f(b)).unwrap().then(b.cmp(&a))
            })
            .unwrap();
        let apex = 2 + best_m as u32;
        assert!(m.triangles.iter().any(|t| t.key() == crate::mesh::sorted3([0, 1, apex])));
    }

    #[test]
    fn interior_matches_block_polygon() {
        let cfg = Config::default();
        let q: Vec<[f64; 3]> = (0..5).map(|i| [0.7, 0.25 * i as f64, 0.0]).collect();
        let d = Drawing::new(vec![
            stroke(&[[0.0, 0.0, 0.0], [0.0, 1.0, 0.0]], 1.0),
            stroke(&q, 1.0),
            stroke(&[[0.3, 0.5, 0.0], [0.3, 0.6, 0.0]], 1.0),
        ])
        .unwrap();
        let cs = ChainSet::from_drawing(&d, &cfg);
        // q_2 faces p with its right side (b = +x) and matches stroke 2
        let t = manual(
            &cs,
            &[((0, 0), Side::Left, (1, 0)), ((0, 1), Side::Left, (1, 4)), ((1, 2), Side::Right, (2, 0))],
        );
        let mut m = mesh_for(&d);
        let st = mesh_from_matches(&cs, &t, &mut m, &cfg);
        assert_eq!(st.skipped_polygon, 1);
    }

    #[test]
    fn cross_chain_pairs_are_skipped() {
        let cfg = Config::default();
        let d = Drawing::new(vec![
            stroke(&[[0.0, 0.0, 0.0], [0.0, 1.0, 0.0]], 1.0),
            stroke(&[[0.6, 0.0, 0.0], [0.6, 0.4, 0.0]], 1.0),
            stroke(&[[0.6, 0.8, 0.0], [0.6, 1.2, 0.0]], 1.0),
        ])
        .unwrap();
        let cs = ChainSet::from_drawing(&d, &cfg);
        let t = manual(&cs, &[((0, 0), Side::Left, (1, 0)), ((0, 1), Side::Left, (2, 1))]);
        let mut m = mesh_for(&d);
        let st = mesh_from_matches(&cs, &t, &mut m, &cfg);
        assert_eq!(st.skipped_cross_chain, 1);
        assert!(m.triangles.is_empty());
    }

    #[test]
    fn creases_off_on_flat_input() {
        let cfg = Config::default();
        let d = Drawing::new(vec![
            stroke(&[[0.0, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 1.0, 0.0]], 1.0),
            stroke(&[[0.6, 0.0, 0.0], [0.6, 0.5, 0.0], [0.6, 1.0, 0.0]], 1.0),
        ])
        .unwrap();
        let cs = ChainSet::from_drawing(&d, &cfg);
        let t = run_matching(&cs, &baseline_candidates(&cs, &cfg, false), &Side::BOTH);
        let mut a = mesh_for(&d);
        let mut b = mesh_for(&d);
        mesh_from_matches(&cs, &t, &mut a, &cfg);
        let st = mesh_with_creases(&cs, &t, &mut b, &cfg);
        assert_eq!(st.crease_pairs, 0);
        assert_eq!(a, b);
    }

    #[test]
    fn crease_keeper_has_more_vertices() {
        let cfg = Config::default();
        let w = 0.2;
        // A lies in z=0 at y=w/2 with 8 vertices; B lies in y=0 at z=w/2 with 5
        let a: Vec<[f64; 3]> = (0..8).map(|i| [i as f64 * 0.1, w / 2.0, 0.0]).collect();
        let b: Vec<[f64; 3]> = (0..5).map(|i| [i as f64 * 0.175, 0.0, w / 2.0]).collect();
        let sa = Stroke::from_parts(
            &a.iter().map(|p| Vec3::from(*p)).collect::<Vec<_>>(),
            &vec![Vec3::z(); 8],
            &vec![w; 8],
            [1.0; 3],
        );
        let sb = Stroke::from_parts(
            &b.iter().map(|p| Vec3::from(*p)).collect::<Vec<_>>(),
            &vec![Vec3::y(); 5],
            &vec![w; 5],
            [1.0; 3],
        );
        let d = Drawing::new(vec![sb, sa]).unwrap();
        let cs = ChainSet::from_drawing(&d, &cfg);
        let t = run_matching(&cs, &baseline_candidates(&cs, &cfg, false), &Side::BOTH);
        let mut m = mesh_for(&d);
        let st = mesh_with_creases(&cs, &t, &mut m, &cfg);
        assert!(st.crease_pairs > 0);
        // offset vertices sit on the crease line and belong to stroke A (index 1)
        assert!(m.vertices.len() > 13);
        for v in &m.vertices[13..] {
            assert!(v.position.y.abs() < 1e-12 && v.position.z.abs() < 1e-12);
            assert_eq!(v.normal, Vec3::z());
        }
    }
}
