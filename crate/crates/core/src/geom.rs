//! Small geometric helpers on `nalgebra` vectors.

use nalgebra::Vector3;

pub type Vec3 = Vector3<f64>;

/// Angle between two vectors in radians, `0` if either is zero.
pub fn angle_between(a: &Vec3, b: &Vec3) -> f64 {
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (a.dot(b) / (na * nb)).clamp(-1.0, 1.0).acos()
}

pub fn angle_between_deg(a: &Vec3, b: &Vec3) -> f64 {
    angle_between(a, b).to_degrees()
}

/// Unnormalized normal `(b - a) x (c - a)`; its norm is twice the area.
pub fn triangle_normal(a: &Vec3, b: &Vec3, c: &Vec3) -> Vec3 {
    (b - a).cross(&(c - a))
}

pub fn triangle_area(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    0.5 * triangle_normal(a, b, c).norm()
}

pub fn unit_normal(a: &Vec3, b: &Vec3, c: &Vec3) -> Option<Vec3> {
    let n = triangle_normal(a, b, c);
    let len = n.norm();
    if len > 0.0 && len.is_finite() {
        Some(n / len)
    } else {
        None
    }
}

/// Smallest interior angle of a triangle in radians.
pub fn min_angle(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let aa = angle_between(&(b - a), &(c - a));
    let bb = angle_between(&(a - b), &(c - b));
    let cc = angle_between(&(a - c), &(b - c));
    aa.min(bb).min(cc)
}

/// Dihedral angle in degrees between the half-planes spanned by the edge
/// `(e0, e1)` and the apexes `a` and `b`; 180 means the two triangles are
/// coplanar and lie on opposite sides of the edge.
pub fn dihedral_deg(e0: &Vec3, e1: &Vec3, a: &Vec3, b: &Vec3) -> f64 {
    let e = e1 - e0;
    let len2 = e.norm_squared();
    if len2 == 0.0 {
        return 0.0;
    }
    let ua = (a - e0) - e * ((a - e0).dot(&e) / len2);
    let ub = (b - e0) - e * ((b - e0).dot(&e) / len2);
    angle_between_deg(&ua, &ub)
}

/// Closest point on triangle `abc` to `p`.
pub fn closest_point_on_triangle(p: &Vec3, a: &Vec3, b: &Vec3, c: &Vec3) -> Vec3 {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return *a;
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return *b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return a + ab * v;
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return *c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return a + ac * w;
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return b + (c - b) * w;
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    a + ab * v + ac * w
}

pub fn point_triangle_distance(p: &Vec3, a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    (p - closest_point_on_triangle(p, a, b, c)).norm()
}

fn cross2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Does the segment `s0 s1` meet the open interior of the 2D triangle `tri`?
/// Points on the triangle's boundary (within `eps`) do not count.
pub fn segment_hits_open_triangle_2d(s0: [f64; 2], s1: [f64; 2], tri: [[f64; 2]; 3], eps: f64) -> bool {
    let orient = cross2(
        [tri[1][0] - tri[0][0], tri[1][1] - tri[0][1]],
        [tri[2][0] - tri[0][0], tri[2][1] - tri[0][1]],
    );
    if orient.abs() <= eps * eps {
        return false;
    }
    let sign = orient.signum();
    let dir = [s1[0] - s0[0], s1[1] - s0[1]];
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for k in 0..3 {
        let a = tri[k];
        let b = tri[(k + 1) % 3];
        let edge = [b[0] - a[0], b[1] - a[1]];
        let len = (edge[0] * edge[0] + edge[1] * edge[1]).sqrt();
        // signed distance of s0 + t*dir from the edge line, positive inside
        let f0 = sign * cross2(edge, [s0[0] - a[0], s0[1] - a[1]]) / len - eps;
        let df = sign * cross2(edge, dir) / len;
        if df.abs() < 1e-300 {
            if f0 <= 0.0 {
                return false;
            }
            continue;
        }
        let t = -f0 / df;
        if df > 0.0 {
            t0 = t0.max(t);
        } else {
            t1 = t1.min(t);
        }
        if t0 >= t1 {
            return false;
        }
    }
    t0 < t1
}

/// Projects `p` into 2D coordinates of the plane through `origin` spanned by
/// the orthonormal pair `(u, v)`.
pub fn project_2d(p: &Vec3, origin: &Vec3, u: &Vec3, v: &Vec3) -> [f64; 2] {
    let d = p - origin;
    [d.dot(u), d.dot(v)]
}

/// Totally ordered key of a point, used for content-based canonical ordering.
pub fn point_key(p: &Vec3) -> [u64; 3] {
    let k = |x: f64| {
        let x = if x == 0.0 { 0.0 } else { x };
        let bits = x.to_bits();
        if bits >> 63 == 1 {
            !bits
        } else {
            bits | (1 << 63)
        }
    };
    [k(p.x), k(p.y), k(p.z)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_flat_and_folded() {
        let e0 = Vec3::new(0.0, 0.0, 0.0);
        let e1 = Vec3::new(1.0, 0.0, 0.0);
        let a = Vec3::new(0.5, 1.0, 0.0);
        assert!((dihedral_deg(&e0, &e1, &a, &Vec3::new(0.5, -1.0, 0.0)) - 180.0).abs() < 1e-9);
        assert!((dihedral_deg(&e0, &e1, &a, &Vec3::new(0.2, 0.0, 1.0)) - 90.0).abs() < 1e-9);
        assert!(dihedral_deg(&e0, &e1, &a, &Vec3::new(0.2, 2.0, 0.0)).abs() < 1e-9);
    }

    #[test]
    fn closest_point_regions() {
        let a = Vec3::new(0.0, 0.0, 0.0);
        let b = Vec3::new(1.0, 0.0, 0.0);
        let c = Vec3::new(0.0, 1.0, 0.0);
        let p = Vec3::new(0.25, 0.25, 2.0);
        assert!((point_triangle_distance(&p, &a, &b, &c) - 2.0).abs() < 1e-12);
        let q = Vec3::new(-1.0, -1.0, 0.0);
        assert!((point_triangle_distance(&q, &a, &b, &c) - 2f64.sqrt()).abs() < 1e-12);
        let r = Vec3::new(1.0, 1.0, 0.0);
        assert!((point_triangle_distance(&r, &a, &b, &c) - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn open_triangle_segment() {
        let tri = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        // starts at a vertex and enters the interior
        assert!(segment_hits_open_triangle_2d([0.0, 0.0], [1.0, 1.0], tri, 1e-12));
        // runs along an edge only
        assert!(!segment_hits_open_triangle_2d([0.0, 0.0], [2.0, 0.0], tri, 1e-12));
        // leaves through the vertex away from the triangle
        assert!(!segment_hits_open_triangle_2d([0.0, 0.0], [-1.0, 0.5], tri, 1e-12));
        // crosses the interior without touching vertices
        assert!(segment_hits_open_triangle_2d([-1.0, 0.2], [2.0, 0.2], tri, 1e-12));
        // misses completely
        assert!(!segment_hits_open_triangle_2d([2.0, 2.0], [3.0, 2.0], tri, 1e-12));
    }

    #[test]
    fn point_key_orders_like_floats() {
        let xs = [-3.0, -0.5, 0.0, 1e-300, 2.0];
        for w in xs.windows(2) {
            assert!(point_key(&Vec3::new(w[0], 0.0, 0.0)) < point_key(&Vec3::new(w[1], 0.0, 0.0)));
        }
        assert_eq!(point_key(&Vec3::new(-0.0, 0.0, 0.0)), point_key(&Vec3::new(0.0, 0.0, 0.0)));
    }
}
