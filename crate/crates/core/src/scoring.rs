//! Vertex-to-vertex and persistence scores.
//!
//! Scores live in `(0, 1]`; every consumer works with their logarithms so
//! products over long chains do not underflow.

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::geom::Vec3;
use crate::stroke::FrenetFrame;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    /// Along `+b`.
    Left,
    /// Along `-b`.
    Right,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];

    pub fn sign(self) -> f64 {
        match self {
            Side::Left => 1.0,
            Side::Right => -1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Side::Left => 0,
            Side::Right => 1,
        }
    }

    pub fn mirror(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Side::Left => "L",
            Side::Right => "R",
        }
    }

    /// Side of `offset` relative to `binormal`, `None` within `eps`.
    pub fn of(offset: &Vec3, binormal: &Vec3, eps: f64) -> Option<Side> {
        let d = offset.dot(binormal);
        if d > eps {
            Some(Side::Left)
        } else if d < -eps {
            Some(Side::Right)
        } else {
            None
        }
    }
}

/// A position with its frame and ribbon width.
#[derive(Debug, Clone, Copy)]
pub struct FramedPoint {
    pub position: Vec3,
    pub frame: FrenetFrame,
    pub width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreBreakdown {
    pub d_a: f64,
    pub d_t: f64,
    pub d_n: f64,
    pub sigma: f64,
    pub score: f64,
    pub log_score: f64,
}

/// `d_max = width_factor * (w(p) + w(q)) / 2`, also used as sigma.
pub fn sigma_for(width_p: f64, width_q: f64, config: &Config) -> f64 {
    config.width_factor * (width_p + width_q) / 2.0
}

/// Score for taking `q` as the `side` match of `p`.
pub fn vertex_score(p: &FramedPoint, q: &FramedPoint, side: Side, sigma: f64) -> ScoreBreakdown {
    let diff = p.position - q.position;
    let d_a = diff.norm();
    let d_t = (diff.dot(&p.frame.tangent).abs() + diff.dot(&q.frame.tangent).abs()) / 2.0;

    let p_c = p.position + p.frame.binormal * (side.sign() * p.width);
    let q_l = q.position + q.frame.binormal * q.width;
    let q_r = q.position - q.frame.binormal * q.width;
    let q_c = if (q_r - p_c).norm() < (q_l - p_c).norm() { q_r } else { q_l };
    let m_offset = (p_c + q_c) / 2.0;
    let m = (p.position + q.position) / 2.0;
    let d_n = (m - m_offset).norm();

    let total = d_a + d_t + d_n;
    let log_score = -(total * total) / (2.0 * sigma * sigma);
    ScoreBreakdown {
        d_a,
        d_t,
        d_n,
        sigma,
        score: log_score.exp(),
        log_score,
    }
}

/// Sum of the three edge-pair distances, exactly as the persistence term is
/// defined (the first and third terms coincide algebraically).
pub fn persistence_distance(p_i: &Vec3, p_i1: &Vec3, q_i: &Vec3, q_i1: &Vec3) -> f64 {
    ((p_i1 - p_i) - (q_i1 - q_i)).norm()
        + ((p_i1 - q_i) - (q_i1 - p_i)).norm()
        + ((p_i1 - q_i1) - (p_i - q_i)).norm()
}

pub fn persistence_log_score(p_i: &Vec3, p_i1: &Vec3, q_i: &Vec3, q_i1: &Vec3, sigma: f64) -> f64 {
    let d = persistence_distance(p_i, p_i1, q_i, q_i1);
    -(d * d) / (2.0 * sigma * sigma)
}

pub fn persistence_score(p_i: &Vec3, p_i1: &Vec3, q_i: &Vec3, q_i1: &Vec3, sigma: f64) -> f64 {
    persistence_log_score(p_i, p_i1, q_i, q_i1, sigma).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Rotation3, Unit};
    use proptest::prelude::*;

    fn fp(pos: Vec3, t: Vec3, n: Vec3, w: f64) -> FramedPoint {
        FramedPoint {
            position: pos,
            frame: FrenetFrame::from_tangent_normal(t, n).unwrap(),
            width: w,
        }
    }

    fn pair() -> (FramedPoint, FramedPoint) {
        let t = Vec3::y();
        let n = Vec3::z();
        (fp(Vec3::zeros(), t, n, 0.5), fp(Vec3::x(), t, n, 0.5))
    }

    #[test]
    fn sigma_rule() {
        let c = Config::default();
        assert!((sigma_for(0.5, 0.5, &c) - 0.75).abs() < 1e-15);
        assert!((sigma_for(1.0, 3.0, &c) - 3.0).abs() < 1e-15);
        let c1 = Config {
            width_factor: 1.0,
            ..Config::default()
        };
        assert!((sigma_for(1.0, 1.0, &c1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn left_score_hand_value() {
        let (p, q) = pair();
        let s = vertex_score(&p, &q, Side::Left, 0.75);
        assert_eq!((s.d_a, s.d_t, s.d_n), (1.0, 0.0, 0.0));
        // exp(-1 / 1.125)
        assert!((s.score - 0.411_112).abs() < 1e-6);
    }

    #[test]
    fn right_score_hand_value() {
        let (p, q) = pair();
        let s = vertex_score(&p, &q, Side::Right, 0.75);
        assert!((s.d_n - 0.5).abs() < 1e-15);
        assert!((s.score - 0.135_335).abs() < 1e-6);
    }

    #[test]
    fn score_tends_to_one() {
        let (p, q) = pair();
        let mut last = 0.0;
        for sigma in [1.0, 10.0, 100.0, 1e4] {
            let s = vertex_score(&p, &q, Side::Left, sigma).score;
            assert!(s > last && s <= 1.0);
            last = s;
        }
        assert!(1.0 - last < 1e-8);
    }

    #[test]
    fn persistence_hand_values() {
        let p0 = Vec3::zeros();
        let p1 = Vec3::y();
        assert_eq!(persistence_score(&p0, &p1, &p0, &p1, 0.75), 1.0);
        let q0 = Vec3::x();
        let q1 = Vec3::new(1.0, 1.0, 0.0);
        assert!((persistence_distance(&p0, &p1, &q0, &q1) - 2.0).abs() < 1e-15);
        assert!((persistence_score(&p0, &p1, &q0, &q1, 0.75) - 0.028_566).abs() < 1e-6);
        assert!((persistence_distance(&p0, &p1, &q1, &q0) - 6.0).abs() < 1e-15);
        assert!((persistence_score(&p0, &p1, &q1, &q0, 0.75) - 1.27e-14).abs() < 0.01e-14);
    }

    fn arb_point() -> impl Strategy<Value = FramedPoint> {
        (
            prop::array::uniform3(-2.0f64..2.0),
            prop::array::uniform3(-1.0f64..1.0),
            prop::array::uniform3(-1.0f64..1.0),
            0.05f64..1.0,
        )
            .prop_filter_map("degenerate frame", |(p, t, n, w)| {
                let n = Vec3::from(n);
                if n.norm() < 0.1 {
                    return None;
                }
                let f = FrenetFrame::from_tangent_normal(Vec3::from(t), n.normalize()).ok()?;
                if Vec3::from(t).cross(&n).norm() < 0.05 {
                    return None;
                }
                Some(FramedPoint {
                    position: Vec3::from(p),
                    frame: f,
                    width: w,
                })
            })
    }

    fn transform(p: &FramedPoint, rot: &Rotation3<f64>, shift: Vec3, scale: f64) -> FramedPoint {
        FramedPoint {
            position: rot * p.position * scale + shift,
            frame: FrenetFrame {
                tangent: rot * p.frame.tangent,
                normal: rot * p.frame.normal,
                binormal: rot * p.frame.binormal,
            },
            width: p.width * scale,
        }
    }

    fn flip_normal(p: &FramedPoint) -> FramedPoint {
        FramedPoint {
            frame: FrenetFrame {
                tangent: p.frame.tangent,
                normal: -p.frame.normal,
                binormal: -p.frame.binormal,
            },
            ..*p
        }
    }

    proptest! {
        #[test]
        fn score_in_unit_interval(p in arb_point(), q in arb_point()) {
            let c = Config::default();
            for side in Side::BOTH {
                let s = vertex_score(&p, &q, side, sigma_for(p.width, q.width, &c));
                prop_assert!(s.score > 0.0 || s.log_score.is_finite());
                prop_assert!(s.score <= 1.0);
                let expected = (-(s.d_a + s.d_t + s.d_n).powi(2) / (2.0 * s.sigma * s.sigma)).exp();
                prop_assert!((s.score - expected).abs() <= 1e-12 * expected.max(1e-300));
            }
        }

        #[test]
        fn rigid_and_scale_invariance(
            p in arb_point(), q in arb_point(),
            axis in prop::array::uniform3(-1.0f64..1.0), ang in -3.0f64..3.0,
            shift in prop::array::uniform3(-5.0f64..5.0), k in 0.2f64..5.0,
        ) {
            prop_assume!(Vec3::from(axis).norm() > 0.1);
            let rot = Rotation3::from_axis_angle(&Unit::new_normalize(Vec3::from(axis)), ang);
            let c = Config::default();
            let (p2, q2) = (transform(&p, &rot, Vec3::from(shift), k), transform(&q, &rot, Vec3::from(shift), k));
            for side in Side::BOTH {
                let a = vertex_score(&p, &q, side, sigma_for(p.width, q.width, &c));
                let b = vertex_score(&p2, &q2, side, sigma_for(p2.width, q2.width, &c));
                prop_assert!((a.log_score - b.log_score).abs() <= 1e-9 * (1.0 + a.log_score.abs()));
            }
        }

        #[test]
        fn normal_flip_symmetries(p in arb_point(), q in arb_point()) {
            let sigma = 0.7;
            // flipping q's normal changes nothing
            let qf = flip_normal(&q);
            for side in Side::BOTH {
                let a = vertex_score(&p, &q, side, sigma);
                let b = vertex_score(&p, &qf, side, sigma);
                prop_assert!((a.log_score - b.log_score).abs() <= 1e-9 * (1.0 + a.log_score.abs()));
            }
            // flipping p's normal swaps sides exactly
            let pf = flip_normal(&p);
            prop_assert_eq!(
                vertex_score(&pf, &q, Side::Left, sigma).log_score,
                vertex_score(&p, &q, Side::Right, sigma).log_score
            );
        }
    }
}
