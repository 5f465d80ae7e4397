//! Synthetic ribbon drawings over simple base surfaces, with ground truth.
//!
//! Strokes follow one family of curves on the surface (latitudes, rings,
//! face rows) in one of three patterns. Randomness comes from a ChaCha8
//! stream seeded with the spec seed, so a spec always yields the same
//! drawing.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::mesh::{SurfaceMesh, Triangle, VId};
use crate::stroke::{Drawing, Stroke};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseSurface {
    /// Unit sphere.
    Sphere,
    /// Upper unit hemisphere, open at the rim.
    Dome,
    /// The box `[-1, 1]^3`.
    Cube,
    /// Radius 1, height 2, open ends.
    Cylinder,
    /// Major radius 1, tube radius 0.4.
    Torus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pattern {
    /// Every stroke runs the same way along its curve.
    Parallel,
    /// Neighbouring strokes alternate direction.
    Boustrophedon,
    /// One continuous helix cut into one-turn strokes.
    Spiral,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub surface: BaseSurface,
    pub pattern: Pattern,
    pub strokes: usize,
    pub width: f64,
    /// Distance between consecutive stroke vertices.
    pub vertex_spacing: f64,
    /// Largest position offset. Offsets are Gaussian with a third of this
    /// as standard deviation per axis, clamped to this length.
    #[serde(default)]
    pub position_noise: f64,
    /// Standard deviation of the normal tilt in degrees.
    #[serde(default)]
    pub normal_noise_deg: f64,
    #[serde(default = "default_flip")]
    pub flip_probability: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_flip() -> f64 {
    1.0 / 3.0
}

impl SyntheticSpec {
    pub fn new(surface: BaseSurface, pattern: Pattern, strokes: usize, width: f64) -> SyntheticSpec {
        SyntheticSpec {
            surface,
            pattern,
            strokes,
            width,
            vertex_spacing: width / 3.0,
            position_noise: 0.0,
            normal_noise_deg: 0.0,
            flip_probability: default_flip(),
            seed: 0,
        }
    }

    /// Named shapes: `sphere`, `dome`, `cube`, `cylinder`, `torus`, each with
    /// enough strokes for dense coverage.
    pub fn preset(name: &str) -> Option<SyntheticSpec> {
        let (surface, strokes, width) = match name {
            "sphere" => (BaseSurface::Sphere, 24, 0.15),
            "dome" => (BaseSurface::Dome, 14, 0.15),
            "cube" => (BaseSurface::Cube, 48, 0.15),
            "cylinder" => (BaseSurface::Cylinder, 16, 0.15),
            "torus" => (BaseSurface::Torus, 20, 0.15),
            _ => return None,
        };
        Some(SyntheticSpec::new(surface, Pattern::Parallel, strokes, width))
    }

    pub fn from_json(text: &str) -> Result<SyntheticSpec> {
        let spec: SyntheticSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Validation(m.to_string()));
        if self.strokes < 2 {
            return bad("need at least 2 strokes");
        }
        if !(self.width > 0.0 && self.width.is_finite()) {
            return bad("width must be positive");
        }
        if !(self.vertex_spacing > 0.0 && self.vertex_spacing.is_finite()) {
            return bad("vertex_spacing must be positive");
        }
        if !(self.position_noise >= 0.0) || !(self.normal_noise_deg >= 0.0) {
            return bad("noise amplitudes must be non-negative");
        }
        if !(0.0..=1.0).contains(&self.flip_probability) {
            return bad("flip_probability must lie in [0, 1]");
        }
        if self.surface == BaseSurface::Cube && self.strokes < 6 {
            return bad("a cube needs at least 6 strokes");
        }
        let gap = self.line_spacing();
        if gap > self.width {
            return Err(Error::Validation(format!(
                "strokes {gap:.4} apart do not cover the surface at width {}",
                self.width
            )));
        }
        Ok(())
    }

    /// Distance between neighbouring stroke curves.
    pub fn line_spacing(&self) -> f64 {
        let n = self.strokes as f64;
        match (self.surface, self.pattern) {
            (BaseSurface::Sphere, Pattern::Spiral) => PI / (n + 1.0),
            (BaseSurface::Sphere, _) => PI / n,
            (BaseSurface::Dome, _) => PI / 2.0 / n,
            (BaseSurface::Cube, _) => 2.0 / (self.strokes / 3) as f64,
            (BaseSurface::Cylinder, Pattern::Spiral) => 2.0 / n,
            (BaseSurface::Cylinder, _) => 2.0 / (n - 1.0),
            (BaseSurface::Torus, _) => TAU * TORUS_TUBE / n,
        }
    }
}

pub const TORUS_MAJOR: f64 = 1.0;
pub const TORUS_TUBE: f64 = 0.4;

/// Point and outward normal for `(u, v)`; `u` runs around, `v` across the
/// stroke family.
fn surface_point(s: BaseSurface, u: f64, v: f64) -> (Vec3, Vec3) {
    match s {
        BaseSurface::Sphere | BaseSurface::Dome => {
            let th = if s == BaseSurface::Sphere { PI * v } else { PI / 2.0 * v };
            let ph = TAU * u;
            let p = Vec3::new(th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos());
            (p, p)
        }
        BaseSurface::Cylinder => {
            let ph = TAU * u;
            let n = Vec3::new(ph.cos(), ph.sin(), 0.0);
            (n + Vec3::new(0.0, 0.0, -1.0 + 2.0 * v), n)
        }
        BaseSurface::Torus => {
            let ph = TAU * u;
            let ps = TAU * v;
            let radial = Vec3::new(ph.cos(), ph.sin(), 0.0);
            let n = radial * ps.cos() + Vec3::z() * ps.sin();
            (radial * TORUS_MAJOR + n * TORUS_TUBE, n)
        }
        BaseSurface::Cube => unreachable!("cube strokes are built piecewise"),
    }
}

/// A clean stroke: spine points and outward normals.
struct Curve {
    points: Vec<Vec3>,
    normals: Vec<Vec3>,
}

/// Samples `f` on `[0, 1]` at roughly `spacing` arc length.
fn sample(f: impl Fn(f64) -> (Vec3, Vec3), spacing: f64) -> Curve {
    const FINE: usize = 2048;
    let fine: Vec<Vec3> = (0..=FINE).map(|i| f(i as f64 / FINE as f64).0).collect();
    let length: f64 = fine.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
    let n = ((length / spacing).round() as usize).max(1);
    let (points, normals) = (0..=n).map(|i| f(i as f64 / n as f64)).unzip();
    Curve { points, normals }
}

/// Parameter intervals `(u0, u1, v0, v1)` of every stroke, linear in `t`.
fn families(spec: &SyntheticSpec, rng: &mut ChaCha8Rng) -> Vec<(f64, f64, f64, f64)> {
    let n = spec.strokes;
    let nf = n as f64;
    // a ring stops one vertex short of closing
    let closing = |radius: f64| spec.vertex_spacing / (TAU * radius.max(1e-9));
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let kf = k as f64;
        let u0: f64 = rng.random();
        let (v0, v1, radius) = match (spec.surface, spec.pattern) {
            (BaseSurface::Sphere, Pattern::Spiral) => ((kf + 0.5) / (nf + 1.0), (kf + 1.5) / (nf + 1.0), 1.0),
            (BaseSurface::Sphere, _) => {
                let v = (kf + 0.5) / nf;
                (v, v, (PI * v).sin())
            }
            (BaseSurface::Dome, Pattern::Spiral) => {
                let a = (kf + 0.5) / (nf + 1.0);
                (a, a + 1.0 / (nf + 1.0), 1.0)
            }
            (BaseSurface::Dome, _) => {
                let v = (kf + 0.5) / nf;
                (v, v, (PI / 2.0 * v).sin())
            }
            (BaseSurface::Cylinder, Pattern::Spiral) => (kf / nf, (kf + 1.0) / nf, 1.0),
            (BaseSurface::Cylinder, _) => {
                let v = kf / (nf - 1.0);
                (v, v, 1.0)
            }
            (BaseSurface::Torus, Pattern::Spiral) => (kf / nf, (kf + 1.0) / nf, TORUS_MAJOR - TORUS_TUBE),
            (BaseSurface::Torus, _) => {
                let v = kf / nf;
                (v, v, TORUS_MAJOR + TORUS_TUBE * (TAU * v).cos())
            }
            (BaseSurface::Cube, _) => unreachable!(),
        };
        let u0 = if spec.pattern == Pattern::Spiral { 0.0 } else { u0 };
        let u1 = u0 + 1.0 - if spec.pattern == Pattern::Spiral { 0.0 } else { closing(radius) };
        if spec.pattern == Pattern::Boustrophedon && k % 2 == 1 {
            out.push((u1, u0, v1, v0));
        } else {
            out.push((u0, u1, v0, v1));
        }
    }
    out
}

/// Square loop around the cube at height `z`, starting at perimeter
/// fraction `start`, one vertex short of closing.
fn cube_ring(z: f64, start: f64, spacing: f64, reverse: bool) -> Curve {
    let corners = [
        Vec3::new(-1.0, -1.0, z),
        Vec3::new(1.0, -1.0, z),
        Vec3::new(1.0, 1.0, z),
        Vec3::new(-1.0, 1.0, z),
    ];
    let faces = [-Vec3::y(), Vec3::x(), Vec3::y(), -Vec3::x()];
    let per_side = (2.0 / spacing).round().max(1.0) as usize;
    let total = 4 * per_side;
    let mut points = Vec::new();
    let mut normals = Vec::new();
    let offset = (start * total as f64) as usize;
    for i in 0..total {
        let j = (i + offset) % total;
        let (side, step) = (j / per_side, j % per_side);
        let a = corners[side];
        let b = corners[(side + 1) % 4];
        points.push(a + (b - a) * (step as f64 / per_side as f64));
        normals.push(if step == 0 {
            (faces[side] + faces[(side + 3) % 4]).normalize()
        } else {
            faces[side]
        });
    }
    if reverse {
        points.reverse();
        normals.reverse();
    }
    Curve { points, normals }
}

fn cube_curves(spec: &SyntheticSpec, rng: &mut ChaCha8Rng) -> Vec<Curve> {
    let m = spec.strokes / 3;
    let s = 2.0 / m as f64;
    let mut curves = Vec::new();
    let mut k = 0;
    let alt = |k: usize| spec.pattern == Pattern::Boustrophedon && k % 2 == 1;
    for row in 0..m {
        let z = -1.0 + s * (row as f64 + 0.5);
        let start: f64 = rng.random();
        curves.push(cube_ring(z, start, spec.vertex_spacing, alt(k)));
        k += 1;
    }
    // top and bottom rows along x; the spiral pattern turns them into one
    // zigzag per face, cut per row
    for (z, nz) in [(1.0, 1.0), (-1.0, -1.0)] {
        for row in 0..m {
            let y = -1.0 + s * (row as f64 + 0.5);
            let rev = alt(k) || (spec.pattern == Pattern::Spiral && row % 2 == 1);
            let c = sample(
                |t| {
                    let x = if rev { 1.0 - 2.0 * t } else { -1.0 + 2.0 * t };
                    (Vec3::new(x, y, z), Vec3::z() * nz)
                },
                spec.vertex_spacing,
            );
            curves.push(c);
            k += 1;
        }
    }
    curves
}

/// Unit vector perpendicular to `n`.
fn perpendicular(n: &Vec3, angle: f64) -> Vec3 {
    let helper = if n.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let a = n.cross(&helper).normalize();
    let b = n.cross(&a);
    a * angle.cos() + b * angle.sin()
}

/// The drawing for `spec`.
pub fn generate(spec: &SyntheticSpec) -> Result<Drawing> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let curves: Vec<Curve> = if spec.surface == BaseSurface::Cube {
        cube_curves(spec, &mut rng)
    } else {
        families(spec, &mut rng)
            .into_iter()
            .map(|(u0, u1, v0, v1)| {
                sample(
                    |t| surface_point(spec.surface, u0 + (u1 - u0) * t, v0 + (v1 - v0) * t),
                    spec.vertex_spacing,
                )
            })
            .collect()
    };

    let pos_sigma = spec.position_noise / 3.0;
    let pos = Normal::new(0.0, pos_sigma.max(f64::MIN_POSITIVE)).expect("finite sigma");
    let tilt = Normal::new(0.0, spec.normal_noise_deg.to_radians().max(f64::MIN_POSITIVE)).expect("finite sigma");
    let mut strokes = Vec::with_capacity(curves.len());
    for c in curves {
        let flip = rng.random::<f64>() < spec.flip_probability;
        let mut points = c.points;
        let mut normals = c.normals;
        for (p, n) in points.iter_mut().zip(normals.iter_mut()) {
            if spec.position_noise > 0.0 {
                let mut d = Vec3::new(pos.sample(&mut rng), pos.sample(&mut rng), pos.sample(&mut rng));
                let len = d.norm();
                if len > spec.position_noise {
                    d *= spec.position_noise / len;
                }
                *p += d;
            }
            if spec.normal_noise_deg > 0.0 {
                let angle = tilt.sample(&mut rng);
                let axis_angle = rng.random::<f64>() * TAU;
                let dir = perpendicular(n, axis_angle);
                *n = (*n * angle.cos() + dir * angle.sin()).normalize();
            }
            if flip {
                *n = -*n;
            }
        }
        let widths = vec![spec.width; points.len()];
        strokes.push(Stroke::from_parts(&points, &normals, &widths, [1.0; 3]));
    }
    Drawing::new(strokes)
}

/// Triangle mesh of the base surface with edges of about `edge` length.
pub fn truth_mesh(surface: BaseSurface, edge: f64) -> SurfaceMesh {
    let mut m = SurfaceMesh::default();
    match surface {
        BaseSurface::Cube => {
            let k = (2.0 / edge).ceil().max(1.0) as usize;
            // each face as a (k+1)^2 grid; seams are merged by position key
            let mut index = std::collections::HashMap::new();
            let mut id = |m: &mut SurfaceMesh, p: Vec3, n: Vec3| -> VId {
                *index
                    .entry(crate::geom::point_key(&p))
                    .or_insert_with(|| m.add_vertex(p, n))
            };
            let axes = [
                (Vec3::x(), Vec3::y(), Vec3::z()),
                (Vec3::y(), Vec3::z(), Vec3::x()),
                (Vec3::z(), Vec3::x(), Vec3::y()),
            ];
            let mut tris = Vec::new();
            for (a, b, n) in axes {
                for sign in [1.0, -1.0] {
                    let nn = n * sign;
                    let mut ids = vec![vec![0; k + 1]; k + 1];
                    for (i, row) in ids.iter_mut().enumerate() {
                        for (j, slot) in row.iter_mut().enumerate() {
                            let s = -1.0 + 2.0 * i as f64 / k as f64;
                            let t = -1.0 + 2.0 * j as f64 / k as f64;
                            // snap the seams to exact +-1 so neighbouring faces share keys
                            let p = a * s + b * t + nn;
                            *slot = id(&mut m, p, nn);
                        }
                    }
                    for i in 0..k {
                        for j in 0..k {
                            let (p, q, r, s) = (ids[i][j], ids[i + 1][j], ids[i + 1][j + 1], ids[i][j + 1]);
                            let (t1, t2) = if sign > 0.0 { ([p, q, r], [p, r, s]) } else { ([p, r, q], [p, s, r]) };
                            tris.push(Triangle::new(t1, None));
                            tris.push(Triangle::new(t2, None));
                        }
                    }
                }
            }
            m.add_triangles(tris);
        }
        _ => {
            let (closed_u, v_len) = match surface {
                BaseSurface::Sphere => (true, PI),
                BaseSurface::Dome => (true, PI / 2.0),
                BaseSurface::Cylinder => (true, 2.0),
                BaseSurface::Torus => (true, TAU * TORUS_TUBE),
                BaseSurface::Cube => unreachable!(),
            };
            let _ = closed_u;
            let nu = ((TAU * if surface == BaseSurface::Torus { TORUS_MAJOR + TORUS_TUBE } else { 1.0 }) / edge).ceil() as usize;
            let nv = (v_len / edge).ceil().max(1.0) as usize;
            let wrap_v = surface == BaseSurface::Torus;
            let poles = matches!(surface, BaseSurface::Sphere | BaseSurface::Dome);
            let mut ids = vec![vec![0 as VId; nu]; nv + 1];
            let top = if poles {
                let (p, n) = surface_point(surface, 0.0, 0.0);
                Some(m.add_vertex(p, n))
            } else {
                None
            };
            let bottom = if surface == BaseSurface::Sphere {
                let (p, n) = surface_point(surface, 0.0, 1.0);
                Some(m.add_vertex(p, n))
            } else {
                None
            };
            let rows: Vec<usize> = if wrap_v { (0..nv).collect() } else { (0..=nv).collect() };
            for &r in &rows {
                if poles && r == 0 || surface == BaseSurface::Sphere && r == nv {
                    continue;
                }
                for c in 0..nu {
                    let (p, n) = surface_point(surface, c as f64 / nu as f64, r as f64 / nv as f64);
                    ids[r][c] = m.add_vertex(p, n);
                }
            }
            let mut tris = Vec::new();
            for r in 0..nv {
                let r1 = if wrap_v { (r + 1) % nv } else { r + 1 };
                for c in 0..nu {
                    let c1 = (c + 1) % nu;
                    if poles && r == 0 {
                        tris.push(Triangle::new([top.unwrap(), ids[1][c], ids[1][c1]], None));
                    } else if surface == BaseSurface::Sphere && r1 == nv {
                        tris.push(Triangle::new([ids[r][c], bottom.unwrap(), ids[r][c1]], None));
                    } else {
                        tris.push(Triangle::new([ids[r][c], ids[r1][c], ids[r1][c1]], None));
                        tris.push(Triangle::new([ids[r][c], ids[r1][c1], ids[r][c1]], None));
                    }
                }
            }
            m.add_triangles(tris);
        }
    }
    crate::mesh_ops::orient::orient_all(&mut m).expect("base surfaces are orientable");
    crate::mesh_ops::obj::recompute_normals(&mut m);
    m
}

/// Combinations spanning every surface and pattern, clean and with noise at
/// a quarter of the stroke width, all with the default flip rate.
pub fn corpus() -> Vec<SyntheticSpec> {
    let surfaces = [
        BaseSurface::Sphere,
        BaseSurface::Dome,
        BaseSurface::Cube,
        BaseSurface::Cylinder,
        BaseSurface::Torus,
    ];
    let patterns = [Pattern::Parallel, Pattern::Boustrophedon, Pattern::Spiral];
    let mut out = Vec::new();
    for (i, &s) in surfaces.iter().enumerate() {
        for (j, &p) in patterns.iter().enumerate() {
            for noisy in [false, true] {
                let name = format!("{s:?}").to_lowercase();
                let mut spec = SyntheticSpec::preset(&name).expect("every surface has a preset");
                spec.pattern = p;
                spec.seed = (i * 100 + j * 10 + noisy as usize) as u64;
                if noisy {
                    spec.position_noise = 0.25 * spec.width;
                    spec.normal_noise_deg = 10.0;
                }
                out.push(spec);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh_ops::audit::audit_manifold;
    use crate::mesh_ops::stats::components;

    #[test]
    fn clean_sphere_lies_on_the_sphere_with_small_gaps() {
        let mut spec = SyntheticSpec::new(BaseSurface::Sphere, Pattern::Parallel, 24, 0.15);
        spec.flip_probability = 0.0;
        let d = generate(&spec).unwrap();
        assert_eq!(d.strokes.len(), 24);
        for s in &d.strokes {
            for v in &s.vertices {
                assert!((v.position.norm() - 1.0).abs() < 1e-12);
                // outward normals without flips
                assert!(v.normal.dot(&v.position) > 0.0);
            }
        }
        // oracle: latitude of every stroke, sorted, differ by less than w
        let mut lat: Vec<f64> = d.strokes.iter().map(|s| s.vertices[0].position.z.acos()).collect();
        lat.sort_by(f64::total_cmp);
        for w in lat.windows(2) {
            assert!(w[1] - w[0] < 0.15);
        }
        assert!(lat[0] < 0.15 && PI - lat[23] < 0.15);
    }

    #[test]
    fn zero_noise_stays_on_every_surface() {
        for s in [BaseSurface::Sphere, BaseSurface::Dome, BaseSurface::Cylinder, BaseSurface::Torus] {
            for p in [Pattern::Parallel, Pattern::Boustrophedon, Pattern::Spiral] {
                let name = format!("{s:?}").to_lowercase();
                let mut spec = SyntheticSpec::preset(&name).unwrap();
                spec.pattern = p;
                let d = generate(&spec).unwrap();
                for v in d.strokes.iter().flat_map(|s| &s.vertices) {
                    let q = v.position;
                    let off = match s {
                        BaseSurface::Sphere => q.norm() - 1.0,
                        BaseSurface::Dome => (q.norm() - 1.0).abs() + (-q.z).max(0.0),
                        BaseSurface::Cylinder => (q.x.hypot(q.y) - 1.0).abs() + (q.z.abs() - 1.0).max(0.0),
                        BaseSurface::Torus => ((q.x.hypot(q.y) - TORUS_MAJOR).hypot(q.z) - TORUS_TUBE).abs(),
                        BaseSurface::Cube => unreachable!(),
                    };
                    assert!(off.abs() < 1e-12, "{s:?} {p:?} {off}");
                }
            }
        }
    }

    #[test]
    fn cube_strokes_lie_on_the_box() {
        let d = generate(&SyntheticSpec::preset("cube").unwrap()).unwrap();
        for v in d.strokes.iter().flat_map(|s| &s.vertices) {
            let m = v.position.abs().max();
            assert!((m - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn full_flip_points_inward() {
        let mut spec = SyntheticSpec::preset("sphere").unwrap();
        spec.flip_probability = 1.0;
        let d = generate(&spec).unwrap();
        assert!(d.strokes.iter().flat_map(|s| &s.vertices).all(|v| v.normal.dot(&v.position) < 0.0));
    }

    #[test]
    fn same_seed_same_drawing() {
        let mut spec = SyntheticSpec::preset("torus").unwrap();
        spec.position_noise = 0.03;
        spec.normal_noise_deg = 10.0;
        spec.seed = 99;
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let mut other = spec.clone();
        other.seed = 100;
        assert_ne!(generate(&spec).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn noise_is_bounded() {
        let mut spec = SyntheticSpec::preset("sphere").unwrap();
        spec.position_noise = 0.0375;
        spec.seed = 5;
        let d = generate(&spec).unwrap();
        let worst = d
            .strokes
            .iter()
            .flat_map(|s| &s.vertices)
            .map(|v| (v.position.norm() - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 0.0375 + 1e-12 && worst > 0.01);
    }

    #[test]
    fn sparse_specs_are_rejected() {
        let spec = SyntheticSpec::new(BaseSurface::Sphere, Pattern::Parallel, 10, 0.15);
        assert!(matches!(generate(&spec), Err(Error::Validation(_))));
    }

    #[test]
    fn truth_meshes_have_the_right_topology() {
        for (s, chi, loops) in [
            (BaseSurface::Sphere, 2, 0),
            (BaseSurface::Dome, 1, 1),
            (BaseSurface::Cube, 2, 0),
            (BaseSurface::Cylinder, 0, 2),
            (BaseSurface::Torus, 0, 0),
        ] {
            let m = truth_mesh(s, 0.1);
            assert!(audit_manifold(&m).is_manifold(), "{s:?}");
            let c = components(&m);
            assert_eq!(c.len(), 1, "{s:?}");
            assert_eq!((c[0].euler, c[0].boundary_loops), (chi, loops), "{s:?}");
        }
    }

    #[test]
    fn corpus_spans_everything() {
        let c = corpus();
        assert!(c.len() >= 30);
        for spec in &c {
            spec.validate().unwrap();
        }
    }
}
