//! The full surfacing run: inter-stroke strips, extension, gap closure and
//! post-processing, with a run report and optional stage dumps.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::config::Config;
use crate::consolidate::{consolidate, ConsolidationStats, SideFrames};
use crate::error::{Error, Result};
use crate::matcher::{
    baseline_candidates, boundary_candidates, dominant_neighbors, matching_frequencies, restricted_candidates,
    run_matching, BoundaryInfo, BoundaryPhase, Chain, ChainSet, ChainVertex, MatchTable, Reach,
};
use crate::mesh::{edge_key, MeshVertex, SurfaceMesh, Triangle, VId};
use crate::mesh_ops::audit::audit_manifold;
use crate::mesh_ops::boundary::{boundary_loops, smooth_boundary, BoundaryLoop};
use crate::mesh_ops::holes::{close_small_holes, fill_holes_up_to};
use crate::mesh_ops::obj::{export_obj, recompute_normals};
use crate::mesh_ops::orient::{orient_all, prune_nonmanifold, resolve_moebius};
use crate::mesh_ops::smooth::laplacian_smooth;
use crate::mesh_ops::stats::{components, MeshComponent};
use crate::mesher::{mesh_from_matches, mesh_with_creases};
use crate::scoring::Side;
use crate::stroke::{ribbon_geometry, trim_hooks, Drawing};

/// Step size of the optional Laplacian smoothing.
pub const LAPLACIAN_LAMBDA: f64 = 0.5;

#[derive(Debug, Clone, Default)]
pub struct PipelineOptions {
    /// Forbid matches between strokes of different colours.
    pub use_color: bool,
    pub preserve_creases: bool,
    pub skip_extension: bool,
    /// Fill holes up to this many sides after gap closure; values up to the
    /// built-in small-hole limit add nothing.
    pub close_holes_max_sides: usize,
    pub smooth_iterations: usize,
    pub dump_dir: Option<PathBuf>,
    pub config: Config,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageStat {
    pub name: String,
    pub triangles_added: usize,
    pub triangles_removed: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub stage_stats: Vec<StageStat>,
    pub interpolated_edge_fraction: f64,
    pub nonmanifold_edges: usize,
    pub nonmanifold_vertices: usize,
    pub components: usize,
    pub euler_characteristics: Vec<i64>,
    pub component_stats: Vec<MeshComponent>,
    pub strokes: usize,
    /// Strokes emitted as their own ribbons.
    pub ribbon_strokes: usize,
    pub triangles: usize,
}

impl RunReport {
    /// Pretty JSON; with `with_timing == false` every `seconds` is zeroed so
    /// repeated runs compare byte for byte.
    pub fn to_json(&self, with_timing: bool) -> String {
        let mut r = self.clone();
        if !with_timing {
            for s in &mut r.stage_stats {
                s.seconds = 0.0;
            }
        }
        serde_json::to_string_pretty(&r).expect("report serializes")
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub mesh: SurfaceMesh,
    pub report: RunReport,
    /// The canonically ordered, trimmed strokes whose vertex ids are mesh
    /// vertex ids `0..n`.
    pub trimmed: Vec<Option<crate::stroke::Stroke>>,
}

struct Stages {
    stats: Vec<StageStat>,
    clock: Instant,
    dump: Option<PathBuf>,
}

impl Stages {
    fn finish(&mut self, name: &str, added: usize, removed: usize) {
        let now = Instant::now();
        self.stats.push(StageStat {
            name: name.to_string(),
            triangles_added: added,
            triangles_removed: removed,
            seconds: (now - self.clock).as_secs_f64(),
        });
        self.clock = now;
    }

    fn write(&self, file: &str, contents: &str) -> Result<()> {
        if let Some(dir) = &self.dump {
            let path = dir.join(file);
            std::fs::write(&path, contents).map_err(|e| Error::io(path, e))?;
        }
        Ok(())
    }

    fn dump_mesh(&self, file: &str, mesh: &SurfaceMesh) -> Result<()> {
        if self.dump.is_some() {
            let mut m = mesh.clone();
            recompute_normals(&mut m);
            self.write(file, &export_obj(&m))?;
        }
        Ok(())
    }

    fn dump_json(&self, file: &str, value: &impl Serialize) -> Result<()> {
        if self.dump.is_some() {
            self.write(file, &serde_json::to_string_pretty(value).expect("dump serializes"))?;
        }
        Ok(())
    }
}

/// Runs every stage on `drawing`. The stroke order of the input does not
/// matter: strokes are put in canonical content order first.
pub fn run_pipeline(drawing: &Drawing, options: &PipelineOptions) -> Result<PipelineOutput> {
    let cfg = &options.config;
    cfg.validate()?;
    if let Some(dir) = &options.dump_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut st = Stages {
        stats: Vec::new(),
        clock: Instant::now(),
        dump: options.dump_dir.clone(),
    };

    let mut drawing = drawing.clone();
    drawing.canonicalize();
    let originals = drawing.strokes.clone();
    let trimmed: Vec<Option<crate::stroke::Stroke>> = originals.iter().map(|s| trim_hooks(s, cfg)).collect();
    let kept: Vec<crate::stroke::Stroke> = trimmed.iter().flatten().cloned().collect();
    // kept[i] came from originals[source[i]]
    let source: Vec<usize> = (0..trimmed.len()).filter(|&i| trimmed[i].is_some()).collect();
    st.finish("trim_hooks", 0, 0);

    let mut mesh = SurfaceMesh::default();
    let mut all_matches = Vec::new();
    let mut frames = SideFrames::default();
    let mut stroke_vids: Vec<Vec<VId>> = vec![Vec::new(); originals.len()];
    if !kept.is_empty() {
        let trimmed_drawing = Drawing::new(kept.clone())?;
        let chains = ChainSet::from_drawing(&trimmed_drawing, cfg);
        for (c, ch) in chains.chains.iter().enumerate() {
            let stroke = &kept[c];
            for (v, sv) in ch.vertices.iter().zip(&stroke.vertices) {
                let id = mesh.push_vertex(MeshVertex {
                    position: v.position,
                    normal: sv.normal,
                    width: v.width,
                    color: v.color,
                });
                debug_assert_eq!(id, v.vid);
                stroke_vids[source[c]].push(id);
            }
        }
        frames = SideFrames::from_chains(&chains);

        // inter-stroke strips
        let base = baseline_candidates(&chains, cfg, options.use_color);
        let base_table = run_matching(&chains, &base, &Side::BOTH);
        let freqs = matching_frequencies(&chains, &base_table);
        let neighbors = dominant_neighbors(&chains, &base_table, &freqs, cfg);
        st.finish("baseline_matching", 0, 0);
        let restricted = restricted_candidates(&chains, &neighbors, cfg, options.use_color);
        let table = run_matching(&chains, &restricted, &Side::BOTH);
        st.write("01_restricted_matches.jsonl", &table.to_json_lines(&chains))?;
        st.finish("restricted_matching", 0, 0);
        let stats = if options.preserve_creases {
            mesh_with_creases(&chains, &table, &mut mesh, cfg)
        } else {
            mesh_from_matches(&chains, &table, &mut mesh, cfg)
        };
        collect_matches(&chains, &table, &mut all_matches);
        dump_with_nonmanifold(&st, "02_inter_stroke", &mesh)?;
        st.finish("inter_stroke_meshing", stats.triangles_added, 0);
        let cons = consolidate(&mut mesh, &frames, cfg)?;
        dump_consolidation(&st, "03_inter_stroke_consolidated", &mesh, &cons)?;
        st.finish("inter_stroke_consolidation", 0, cons.removed);

        // partial mesh extension
        if !options.skip_extension {
            let info = boundary_info(&chains, &mesh);
            let cand = boundary_candidates(&chains, &info, BoundaryPhase::Extension, cfg, options.use_color);
            let table = run_matching(&chains, &cand, &Side::BOTH);
            st.write("04_extension_matches.jsonl", &table.to_json_lines(&chains))?;
            st.finish("extension_matching", 0, 0);
            let stats = mesh_from_matches(&chains, &table, &mut mesh, cfg);
            collect_matches(&chains, &table, &mut all_matches);
            st.finish("extension_meshing", stats.triangles_added, 0);
            let cons = consolidate(&mut mesh, &frames, cfg)?;
            dump_consolidation(&st, "05_extension_consolidated", &mesh, &cons)?;
            st.finish("extension_consolidation", 0, cons.removed);
        }
    }

    // per-component orientation and small holes
    let cut = orient_with_cuts(&mut mesh)?;
    let closed = close_small_holes(&mut mesh, cfg);
    orient_all(&mut mesh)?;
    st.dump_mesh("06_partial_surfaces.obj", &mesh)?;
    st.finish("orientation_and_small_holes", closed, cut);

    // gap closure
    for t in &mut mesh.triangles {
        t.frozen = true;
    }
    let loops = boundary_loops(&mesh);
    smooth_boundary(&mut mesh, &loops, cfg);
    st.finish("boundary_smoothing", 0, 0);
    let loops = boundary_loops(&mesh);
    if !loops.is_empty() {
        let gap = gap_chains(&mesh, &loops, &all_matches, cfg);
        let cand = boundary_candidates(&gap, &BoundaryInfo::default(), BoundaryPhase::Gap, cfg, options.use_color);
        let table = run_matching(&gap, &cand, &[Side::Left]);
        st.write("07_gap_matches.jsonl", &table.to_json_lines(&gap))?;
        st.finish("gap_matching", 0, 0);
        let stats = mesh_from_matches(&gap, &table, &mut mesh, cfg);
        dump_with_nonmanifold(&st, "08_gap_strips", &mesh)?;
        st.finish("gap_meshing", stats.triangles_added, 0);
        let mut gap_frames = frames.clone();
        gap_frames.overlay(SideFrames::from_chains(&gap));
        let cons = consolidate(&mut mesh, &gap_frames, cfg)?;
        dump_consolidation(&st, "09_gap_consolidated", &mesh, &cons)?;
        st.finish("gap_consolidation", 0, cons.removed);
        let strip: Vec<bool> = mesh.triangles.iter().map(|t| !t.frozen).collect();
        let removed = resolve_moebius(&mut mesh, &strip)?;
        st.finish("moebius_resolution", 0, removed);
    } else {
        for name in ["gap_matching", "gap_meshing", "gap_consolidation", "moebius_resolution"] {
            st.finish(name, 0, 0);
        }
    }
    let cut = orient_with_cuts(&mut mesh)?;
    st.finish("global_orientation", 0, cut);

    // the gap strips leave small notches of their own
    let n = mesh.triangles.len();
    close_small_holes(&mut mesh, cfg);
    orient_with_cuts(&mut mesh)?;
    st.finish("final_small_holes", mesh.triangles.len().saturating_sub(n), n.saturating_sub(mesh.triangles.len()));

    // isolated strokes keep their ribbons
    let used: BTreeSet<VId> = mesh.triangles.iter().flat_map(|t| t.v).collect();
    let mut ribbon_strokes = 0;
    let mut ribbon_tris = 0;
    for (s, stroke) in originals.iter().enumerate() {
        if stroke_vids[s].iter().any(|v| used.contains(v)) {
            continue;
        }
        let ribbon = ribbon_geometry(stroke);
        if ribbon.triangles.is_empty() {
            continue;
        }
        ribbon_strokes += 1;
        let normal = stroke.vertices[0].normal;
        let width = stroke.vertices[0].width;
        let ids: Vec<VId> = ribbon
            .positions
            .iter()
            .map(|p| {
                mesh.push_vertex(MeshVertex {
                    position: *p,
                    normal,
                    width,
                    color: stroke.color,
                })
            })
            .collect();
        let tris: Vec<Triangle> = ribbon
            .triangles
            .iter()
            .map(|t| Triangle::new([ids[t[0]], ids[t[1]], ids[t[2]]], None))
            .collect();
        ribbon_tris += tris.len();
        mesh.triangles.extend(tris);
    }
    if ribbon_tris > 0 {
        orient_with_cuts(&mut mesh)?;
    }
    st.finish("isolated_ribbons", ribbon_tris, 0);

    if options.close_holes_max_sides > cfg.small_hole_max_sides.min(4) {
        let n = mesh.triangles.len();
        fill_holes_up_to(&mut mesh, options.close_holes_max_sides, cfg);
        orient_all(&mut mesh)?;
        st.finish("hole_filling", mesh.triangles.len() - n, 0);
    }
    if options.smooth_iterations > 0 {
        laplacian_smooth(&mut mesh, options.smooth_iterations, LAPLACIAN_LAMBDA);
        st.finish("laplacian_smoothing", 0, 0);
    }

    for t in &mut mesh.triangles {
        t.frozen = false;
    }
    mesh.sort_triangles();
    recompute_normals(&mut mesh);
    st.dump_mesh("10_final.obj", &mesh)?;
    let audit = audit_manifold(&mesh);
    if !audit.is_manifold() {
        return Err(Error::invariant(
            "final audit",
            format!(
                "{} non-manifold edges, {} non-manifold vertices",
                audit.nonmanifold_edges.len(),
                audit.nonmanifold_vertices.len()
            ),
        ));
    }
    let comps = components(&mesh);
    let report = RunReport {
        stage_stats: st.stats,
        interpolated_edge_fraction: interpolated_fraction(&mesh, &stroke_vids),
        nonmanifold_edges: 0,
        nonmanifold_vertices: 0,
        components: comps.len(),
        euler_characteristics: comps.iter().map(|c| c.euler).collect(),
        component_stats: comps,
        strokes: originals.len(),
        ribbon_strokes,
        triangles: mesh.triangles.len(),
    };
    Ok(PipelineOutput { mesh, report, trimmed })
}

/// Share of trimmed stroke edges present as mesh edges.
fn interpolated_fraction(mesh: &SurfaceMesh, stroke_vids: &[Vec<VId>]) -> f64 {
    let edges: BTreeSet<[VId; 2]> = mesh.triangles.iter().flat_map(|t| t.edges()).collect();
    let mut total = 0;
    let mut hit = 0;
    for ids in stroke_vids {
        for w in ids.windows(2) {
            total += 1;
            if edges.contains(&edge_key(w[0], w[1])) {
                hit += 1;
            }
        }
    }
    if total == 0 {
        0.0
    } else {
        hit as f64 / total as f64
    }
}

/// Matched pair as mesh vertex ids plus their distance.
type MatchedPair = (VId, VId, f64);

fn collect_matches(chains: &ChainSet, table: &MatchTable, out: &mut Vec<MatchedPair>) {
    for (p, _, m) in table.iter(chains) {
        let (a, b) = (chains.vertex(p), chains.vertex(m.target));
        out.push((a.vid, b.vid, (a.position - b.position).norm()));
    }
}

/// Component and open sides of every stroke vertex on a mesh boundary. A
/// side is open when no incident triangle lies on it.
fn boundary_info(chains: &ChainSet, mesh: &SurfaceMesh) -> BoundaryInfo {
    let topo = mesh.topology();
    let (comp_of, _) = topo.component_of(mesh);
    let mut on_boundary = vec![false; mesh.vertices.len()];
    for (e, ts) in &topo.edges {
        if ts.len() == 1 {
            on_boundary[e[0] as usize] = true;
            on_boundary[e[1] as usize] = true;
        }
    }
    let mut info = BoundaryInfo {
        component: vec![None; chains.vertex_count()],
        open: vec![[false; 2]; chains.vertex_count()],
    };
    for r in chains.refs() {
        let k = chains.flat(r);
        let v = chains.vertex(r);
        let tris = &topo.vertex_tris[v.vid as usize];
        if !on_boundary[v.vid as usize] || tris.is_empty() {
            continue;
        }
        let Some(f) = v.frame else { continue };
        info.component[k] = Some(comp_of[tris[0]]);
        let mut covered = [false; 2];
        for &t in tris {
            let p = mesh.points(&mesh.triangles[t]);
            let c = (p[0] + p[1] + p[2]) / 3.0;
            if let Some(s) = Side::of(&(c - v.position), &f.binormal, 1e-12) {
                covered[s.index()] = true;
            }
        }
        info.open[k] = [!covered[0], !covered[1]];
    }
    info
}

/// One cyclic chain per boundary loop. `d_max` per component is the mean
/// distance of the component's earlier matches; components without any
/// fall back to the stroke-width rule.
fn gap_chains(mesh: &SurfaceMesh, loops: &[BoundaryLoop], matches: &[MatchedPair], cfg: &Config) -> ChainSet {
    let topo = mesh.topology();
    let (comp_of, n_comp) = topo.component_of(mesh);
    let mut vcomp: Vec<Option<usize>> = vec![None; mesh.vertices.len()];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for &v in &tri.v {
            vcomp[v as usize] = Some(comp_of[t]);
        }
    }
    let mut sum = vec![0.0; n_comp];
    let mut count = vec![0usize; n_comp];
    for &(a, b, d) in matches {
        if let (Some(ca), Some(cb)) = (vcomp[a as usize], vcomp[b as usize]) {
            if ca == cb {
                sum[ca] += d;
                count[ca] += 1;
            }
        }
    }
    let mut wsum = vec![0.0; n_comp];
    let mut wcount = vec![0usize; n_comp];
    for l in loops {
        for &v in &l.vertices {
            wsum[l.component] += mesh.vertices[v as usize].width;
            wcount[l.component] += 1;
        }
    }
    let d: Vec<f64> = (0..n_comp)
        .map(|c| {
            if count[c] > 0 {
                sum[c] / count[c] as f64
            } else if wcount[c] > 0 {
                cfg.width_factor * wsum[c] / wcount[c] as f64
            } else {
                0.0
            }
        })
        .collect();
    let chains = loops
        .iter()
        .map(|l| Chain {
            vertices: l
                .vertices
                .iter()
                .zip(&l.frames)
                .map(|(&v, f)| {
                    let mv = &mesh.vertices[v as usize];
                    ChainVertex {
                        vid: v,
                        position: mv.position,
                        width: mv.width,
                        frame: *f,
                        color: mv.color,
                        near_end: false,
                    }
                })
                .collect(),
            cyclic: true,
            group: l.component,
        })
        .collect();
    ChainSet::new(chains, Reach::PerGroup(d))
}

/// Orients every component. A component that cannot be oriented loses the
/// non-frozen triangles at the conflicting edge (all of them when every
/// one is frozen) until it can. Returns the number of removed triangles.
fn orient_with_cuts(mesh: &mut SurfaceMesh) -> Result<usize> {
    let mut removed = 0;
    loop {
        let mut trial = mesh.clone();
        match orient_all(&mut trial) {
            Ok(()) => {
                *mesh = trial;
                return Ok(removed);
            }
            Err(Error::NonOrientable { edge }) => {
                let topo = mesh.topology();
                let on_edge = topo.edge_tris(edge.0, edge.1);
                let free: Vec<usize> = on_edge.iter().copied().filter(|&t| !mesh.triangles[t].frozen).collect();
                let cut: BTreeSet<usize> = if free.is_empty() { on_edge.iter().copied().collect() } else { free.into_iter().collect() };
                let mut flags = Vec::with_capacity(mesh.triangles.len());
                let mut i = 0;
                mesh.triangles.retain(|t| {
                    let keep = !cut.contains(&i);
                    i += 1;
                    if keep {
                        flags.push(!t.frozen);
                    }
                    keep
                });
                removed += cut.len();
                removed += prune_nonmanifold(mesh, &mut flags);
            }
            Err(e) => return Err(e),
        }
    }
}

fn dump_with_nonmanifold(st: &Stages, stem: &str, mesh: &SurfaceMesh) -> Result<()> {
    if st.dump.is_none() {
        return Ok(());
    }
    st.dump_mesh(&format!("{stem}.obj"), mesh)?;
    let report = audit_manifold(mesh);
    let value = serde_json::json!({
        "nonmanifold_edges": report.nonmanifold_edges,
        "nonmanifold_vertices": report.nonmanifold_vertices,
    });
    st.dump_json(&format!("{stem}_nonmanifold.json"), &value)
}

fn dump_consolidation(st: &Stages, stem: &str, mesh: &SurfaceMesh, cons: &ConsolidationStats) -> Result<()> {
    if st.dump.is_none() {
        return Ok(());
    }
    st.dump_mesh(&format!("{stem}.obj"), mesh)?;
    let value = serde_json::json!({
        "stats": cons,
        "undecided_triangles": cons.undecided_keys,
    });
    st.dump_json(&format!("{stem}.json"), &value)
}

/// Writes the mesh and, when requested, the report.
pub fn write_outputs(out: &PipelineOutput, obj: &Path, report: Option<&Path>) -> Result<()> {
    std::fs::write(obj, export_obj(&out.mesh)).map_err(|e| Error::io(obj, e))?;
    if let Some(path) = report {
        std::fs::write(path, out.report.to_json(true)).map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

/// Counts of retained triangles keyed by rounded vertex positions, for
/// comparing runs whose vertex numbering may differ.
pub fn triangle_signature(mesh: &SurfaceMesh) -> BTreeMap<[[u64; 3]; 3], usize> {
    let mut out = BTreeMap::new();
    for t in &mesh.triangles {
        let mut k = mesh.points(t).map(|p| crate::geom::point_key(&p));
        k.sort();
        *out.entry(k).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec3;
    use crate::stroke::Stroke;

    fn line(x: f64, n: usize, w: f64) -> Stroke {
        let ps: Vec<Vec3> = (0..n).map(|i| Vec3::new(x, i as f64 * 0.2, 0.0)).collect();
        Stroke::from_parts(&ps, &vec![Vec3::z(); n], &vec![w; n], [1.0; 3])
    }

    #[test]
    fn two_parallel_strokes_make_one_strip() {
        let d = Drawing::new(vec![line(0.0, 10, 0.6), line(0.5, 10, 0.6)]).unwrap();
        let out = run_pipeline(&d, &PipelineOptions::default()).unwrap();
        let r = &out.report;
        assert_eq!(r.components, 1);
        assert_eq!((r.nonmanifold_edges, r.nonmanifold_vertices), (0, 0));
        assert_eq!(r.ribbon_strokes, 0);
        assert_eq!(out.mesh.triangles.len(), 18);
        assert_eq!(r.interpolated_edge_fraction, 1.0);
        let gap: usize = r
            .stage_stats
            .iter()
            .filter(|s| s.name.starts_with("gap"))
            .map(|s| s.triangles_added + s.triangles_removed)
            .sum();
        assert_eq!(gap, 0);
        assert_eq!(r.euler_characteristics, vec![1]);
    }

    #[test]
    fn isolated_stroke_keeps_its_ribbon() {
        let far = line(50.0, 6, 0.6);
        let d = Drawing::new(vec![line(0.0, 10, 0.6), line(0.5, 10, 0.6), far.clone()]).unwrap();
        let out = run_pipeline(&d, &PipelineOptions::default()).unwrap();
        assert_eq!(out.report.ribbon_strokes, 1);
        // the ribbon's triangles appear verbatim
        let ribbon = ribbon_geometry(&far);
        let sig = triangle_signature(&out.mesh);
        for p in ribbon.triangle_points() {
            let mut k = p.map(|q| crate::geom::point_key(&q));
            k.sort();
            assert!(sig.contains_key(&k));
        }
        assert_eq!(out.report.components, 2);
    }

    #[test]
    fn stroke_order_does_not_matter() {
        let s = vec![line(0.0, 10, 0.6), line(0.5, 10, 0.6), line(1.0, 10, 0.6)];
        let a = run_pipeline(&Drawing::new(s.clone()).unwrap(), &PipelineOptions::default()).unwrap();
        let rev: Vec<Stroke> = s.into_iter().rev().collect();
        let b = run_pipeline(&Drawing::new(rev).unwrap(), &PipelineOptions::default()).unwrap();
        assert_eq!(export_obj(&a.mesh), export_obj(&b.mesh));
        assert_eq!(a.report.to_json(false), b.report.to_json(false));
    }

    #[test]
    fn dumps_are_written() {
        let dir = tempfile::tempdir().unwrap();
        let d = Drawing::new(vec![line(0.0, 10, 0.6), line(0.5, 10, 0.6)]).unwrap();
        let opts = PipelineOptions {
            dump_dir: Some(dir.path().to_path_buf()),
            ..Default::default()
        };
        run_pipeline(&d, &opts).unwrap();
        for f in ["01_restricted_matches.jsonl", "02_inter_stroke.obj", "02_inter_stroke_nonmanifold.json", "10_final.obj"] {
            assert!(dir.path().join(f).exists(), "{f}");
        }
    }
}
