//! Deterministic OBJ output and a small OBJ reader.
//!
//! Output has one `v` and one `vn` record per referenced vertex, one
//! `g component_k` group per edge-connected component, and `f a//a b//b c//c`
//! faces. Components and faces follow sorted vertex-set order, floats carry
//! nine significant digits.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::mesh::{SurfaceMesh, Triangle, VId};

use super::boundary::vertex_normal;

/// Formats like C's `%.9g`, with negative zero printed as `0`.
pub fn fmt_g9(x: f64) -> String {
    const P: i32 = 9;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mant, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if exp < -4 || exp >= P {
        let mant = trim_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (P - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Sets every referenced vertex normal to the normalized area-weighted
/// average of its triangle normals.
pub fn recompute_normals(mesh: &mut SurfaceMesh) {
    let topo = mesh.topology();
    for v in 0..mesh.vertices.len() {
        if topo.vertex_tris[v].is_empty() {
            continue;
        }
        let n = vertex_normal(mesh, &topo, v as VId);
        let len = n.norm();
        if len > 0.0 {
            mesh.vertices[v].normal = n / len;
        }
    }
}

/// Serializes the mesh. Unreferenced vertices are skipped and the remaining
/// ones keep their relative order.
pub fn export_obj(mesh: &SurfaceMesh) -> String {
    let mut used = vec![false; mesh.vertices.len()];
    for t in &mesh.triangles {
        for &v in &t.v {
            used[v as usize] = true;
        }
    }
    let mut id = vec![0usize; mesh.vertices.len()];
    let mut out = String::new();
    let mut next = 1;
    for (i, v) in mesh.vertices.iter().enumerate().filter(|(i, _)| used[*i]) {
        id[i] = next;
        next += 1;
        let p = v.position;
        let _ = writeln!(out, "v {} {} {}", fmt_g9(p.x), fmt_g9(p.y), fmt_g9(p.z));
    }
    for v in mesh.vertices.iter().enumerate().filter(|(i, _)| used[*i]).map(|(_, v)| v) {
        let n = v.normal;
        let _ = writeln!(out, "vn {} {} {}", fmt_g9(n.x), fmt_g9(n.y), fmt_g9(n.z));
    }
    let mut sorted = mesh.clone();
    sorted.sort_triangles();
    let topo = sorted.topology();
    for (k, comp) in topo.components(&sorted).iter().enumerate() {
        let _ = writeln!(out, "g component_{k}");
        for &t in comp {
            let v = canonical_rotation(&sorted.triangles[t]).map(|v| id[v as usize]);
            let _ = writeln!(out, "f {a}//{a} {b}//{b} {c}//{c}", a = v[0], b = v[1], c = v[2]);
        }
    }
    out
}

/// Vertex order rotated so the smallest id comes first, keeping the winding.
fn canonical_rotation(t: &Triangle) -> [VId; 3] {
    let k = (0..3).min_by_key(|&i| t.v[i]).unwrap();
    [t.v[k], t.v[(k + 1) % 3], t.v[(k + 2) % 3]]
}

pub fn write_obj(mesh: &SurfaceMesh, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, export_obj(mesh)).map_err(|e| Error::io(path, e))
}

pub fn load_obj(path: impl AsRef<Path>) -> Result<SurfaceMesh> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_obj(&text)
}

/// Reads `v`, `vn` and triangular `f` records; other records are ignored.
/// Vertex normals are taken from the `vn` records in order when their count
/// matches the vertex count.
pub fn parse_obj(text: &str) -> Result<SurfaceMesh> {
    let mut positions: Vec<Vec3> = Vec::new();
    let mut normals: Vec<Vec3> = Vec::new();
    let mut faces: Vec<[VId; 3]> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let err = |column: usize, message: String| Error::Parse {
            line: line_no,
            column,
            message,
        };
        let mut fields = line.split_whitespace();
        let Some(tag) = fields.next() else { continue };
        let column_of = |f: &str| f.as_ptr() as usize - line.as_ptr() as usize + 1;
        match tag {
            "v" | "vn" => {
                let mut xyz = [0.0; 3];
                for c in &mut xyz {
                    let f = fields.next().ok_or_else(|| err(line.len() + 1, format!("`{tag}` needs three coordinates")))?;
                    *c = f.parse().map_err(|_| err(column_of(f), format!("bad number `{f}`")))?;
                }
                if tag == "v" {
                    positions.push(Vec3::from(xyz));
                } else {
                    normals.push(Vec3::from(xyz));
                }
            }
            "f" => {
                let refs: Vec<&str> = fields.collect();
                if refs.len() != 3 {
                    return Err(err(1, format!("expected a triangle, got {} vertices", refs.len())));
                }
                let mut f = [0; 3];
                for (slot, r) in f.iter_mut().zip(&refs) {
                    let head = r.split('/').next().unwrap_or("");
                    let i: usize = head.parse().map_err(|_| err(column_of(r), format!("bad vertex reference `{r}`")))?;
                    if i == 0 || i > positions.len() {
                        return Err(err(column_of(r), format!("vertex {i} out of range")));
                    }
                    *slot = (i - 1) as VId;
                }
                faces.push(f);
            }
            _ => {}
        }
    }
    let mut mesh = SurfaceMesh::default();
    let with_normals = normals.len() == positions.len();
    for (i, p) in positions.iter().enumerate() {
        mesh.add_vertex(*p, if with_normals { normals[i] } else { Vec3::zeros() });
    }
    mesh.triangles = faces.into_iter().map(|f| Triangle::new(f, None)).collect();
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh_ops::smooth::tests::icosphere;

    #[test]
    fn g9_matches_printf() {
        let cases = [
            (1.0, "1"),
            (0.5, "0.5"),
            (-0.0, "0"),
            (1.0 / 3.0, "0.333333333"),
            (123456789.0, "123456789"),
            (1234567890.0, "1.23456789e+09"),
            (0.0001, "0.0001"),
            (0.00001, "1e-05"),
            (-2.5e-7, "-2.5e-07"),
            (std::f64::consts::PI, "3.14159265"),
            (999999999.5, "1e+09"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g9(x), want, "{x}");
        }
    }

    #[test]
    fn one_triangle() {
        let mut m = SurfaceMesh::default();
        for p in [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]] {
            m.add_vertex(Vec3::from(p), Vec3::z());
        }
        m.triangles.push(Triangle::new([1, 2, 0], None));
        let s = export_obj(&m);
        assert_eq!(s.lines().filter(|l| l.starts_with("v ")).count(), 3);
        assert_eq!(s.lines().filter(|l| l.starts_with("vn ")).count(), 3);
        assert_eq!(s.lines().filter(|l| l.starts_with("f ")).count(), 1);
        assert!(s.contains("f 1//1 2//2 3//3\n"));
    }

    #[test]
    fn two_components_two_groups() {
        let mut m = SurfaceMesh::default();
        for p in [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [5.0, 0.0, 0.0], [6.0, 0.0, 0.0], [5.0, 1.0, 0.0], [9.0, 9.0, 9.0]] {
            m.add_vertex(Vec3::from(p), Vec3::z());
        }
        m.triangles.push(Triangle::new([3, 4, 5], None));
        m.triangles.push(Triangle::new([0, 1, 2], None));
        let s = export_obj(&m);
        let groups: Vec<&str> = s.lines().filter(|l| l.starts_with("g ")).collect();
        assert_eq!(groups, ["g component_0", "g component_1"]);
        // the unreferenced vertex is dropped
        assert_eq!(s.lines().filter(|l| l.starts_with("v ")).count(), 6);
    }

    #[test]
    fn round_trip_is_a_fixpoint() {
        let mut m = icosphere(2);
        for (i, v) in m.vertices.iter_mut().enumerate() {
            v.position *= 1.0 + 1e-3 * (i as f64).sin();
        }
        recompute_normals(&mut m);
        let first = export_obj(&m);
        let again = export_obj(&parse_obj(&first).unwrap());
        assert_eq!(first, again);
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_obj("v 0 0 0\nv 1 0 0\nv 0 x 0\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 5)),
            other => panic!("{other:?}"),
        }
        match parse_obj("v 0 0 0\nf 1 2 3\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 5)),
            other => panic!("{other:?}"),
        }
    }
}
