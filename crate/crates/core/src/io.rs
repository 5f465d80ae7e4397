//! JSON stroke files.
//!
//! ```json
//! {"strokes": [{"vertices": [[x,y,z], ...], "normals": [[x,y,z], ...],
//!               "width": 0.1, "color": [r,g,b], "timestamps": [...]}]}
//! ```
//! `width` is either a scalar or one value per vertex; `color` defaults to
//! white and `timestamps` is optional.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::stroke::{Drawing, Stroke, StrokeVertex};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DrawingFile {
    strokes: Vec<StrokeRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StrokeRecord {
    vertices: Vec<[f64; 3]>,
    normals: Vec<[f64; 3]>,
    width: Width,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    color: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    timestamps: Option<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Width {
    Scalar(f64),
    PerVertex(Vec<f64>),
}

/// A parsed drawing plus the number of strokes dropped for having fewer than
/// two distinct vertices.
#[derive(Debug, Clone)]
pub struct LoadedDrawing {
    pub drawing: Drawing,
    pub dropped_strokes: usize,
}

pub fn load_drawing(path: impl AsRef<Path>) -> Result<LoadedDrawing> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_drawing(&text)
}

pub fn parse_drawing(text: &str) -> Result<LoadedDrawing> {
    let file: DrawingFile = serde_json::from_str(text)?;
    if file.strokes.is_empty() {
        return Err(Error::Validation("drawing has no strokes".into()));
    }

    // bounding box first: the coincidence tolerance is relative to it
    let mut lo = Vec3::repeat(f64::INFINITY);
    let mut hi = Vec3::repeat(f64::NEG_INFINITY);
    for (s, rec) in file.strokes.iter().enumerate() {
        for v in rec.vertices.iter().chain(&rec.normals) {
            if !v.iter().all(|x| x.is_finite()) {
                return Err(Error::Validation(format!("stroke {s} contains non-finite coordinates")));
            }
        }
        for v in &rec.vertices {
            let p = Vec3::from(*v);
            lo = lo.inf(&p);
            hi = hi.sup(&p);
        }
    }
    let tol = 1e-9 * (hi - lo).norm();

    let mut strokes = Vec::new();
    let mut dropped = 0;
    for (s, rec) in file.strokes.into_iter().enumerate() {
        let n = rec.vertices.len();
        if rec.normals.len() != n {
            return Err(Error::Validation(format!(
                "stroke {s}: {n} vertices but {} normals",
                rec.normals.len()
            )));
        }
        let widths = match rec.width {
            Width::Scalar(w) => vec![w; n],
            Width::PerVertex(ws) => {
                if ws.len() != n {
                    return Err(Error::Validation(format!(
                        "stroke {s}: {n} vertices but {} widths",
                        ws.len()
                    )));
                }
                ws
            }
        };
        if let Some(w) = widths.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(Error::Validation(format!("stroke {s}: non-positive width {w}")));
        }
        if let Some(ts) = &rec.timestamps {
            if ts.len() != n {
                return Err(Error::Validation(format!(
                    "stroke {s}: {n} vertices but {} timestamps",
                    ts.len()
                )));
            }
        }
        let color = rec.color.unwrap_or([1.0, 1.0, 1.0]);

        let mut vertices: Vec<StrokeVertex> = Vec::with_capacity(n);
        let mut times = Vec::new();
        for i in 0..n {
            let position = Vec3::from(rec.vertices[i]);
            if let Some(last) = vertices.last() {
                if (position - last.position).norm() <= tol {
                    continue;
                }
            }
            let raw = Vec3::from(rec.normals[i]);
            let len = raw.norm();
            if !(len > 0.0) {
                return Err(Error::Validation(format!("stroke {s}: zero-length normal at vertex {i}")));
            }
            vertices.push(StrokeVertex {
                position,
                normal: raw / len,
                width: widths[i],
                stroke: strokes.len(),
                index: vertices.len(),
            });
            if let Some(ts) = &rec.timestamps {
                times.push(ts[i]);
            }
        }
        if vertices.len() < 2 {
            dropped += 1;
            continue;
        }
        strokes.push(Stroke {
            vertices,
            color,
            timestamps: rec.timestamps.map(|_| times),
        });
    }
    if strokes.is_empty() {
        return Err(Error::Validation("no stroke has two distinct vertices".into()));
    }
    Ok(LoadedDrawing {
        drawing: Drawing::new(strokes)?,
        dropped_strokes: dropped,
    })
}

/// Serializes a drawing with per-vertex widths.
pub fn drawing_to_json(drawing: &Drawing) -> String {
    let file = DrawingFile {
        strokes: drawing
            .strokes
            .iter()
            .map(|s| StrokeRecord {
                vertices: s.vertices.iter().map(|v| v.position.into()).collect(),
                normals: s.vertices.iter().map(|v| v.normal.into()).collect(),
                width: Width::PerVertex(s.vertices.iter().map(|v| v.width).collect()),
                color: Some(s.color),
                timestamps: s.timestamps.clone(),
            })
            .collect(),
    };
    serde_json::to_string(&file).expect("drawing serializes")
}

pub fn save_drawing(drawing: &Drawing, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, drawing_to_json(drawing)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn minimal_file() {
        let d = parse_drawing(r#"{"strokes":[{"vertices":[[0,0,0],[1,0,0]],"normals":[[0,0,1],[0,0,1]],"width":0.5}]}"#)
            .unwrap();
        assert_eq!(d.drawing.strokes.len(), 1);
        assert_eq!(d.drawing.strokes[0].len(), 2);
        assert_eq!(d.drawing.strokes[0].color, [1.0; 3]);
        assert_eq!(d.dropped_strokes, 0);
    }

    #[test]
    fn normals_renormalized() {
        let d = parse_drawing(r#"{"strokes":[{"vertices":[[0,0,0],[1,0,0]],"normals":[[0,0,2],[0,0,1]],"width":[0.5,0.5]}]}"#)
            .unwrap();
        assert_eq!(d.drawing.strokes[0].vertices[0].normal, Vec3::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn short_strokes_dropped_with_warning() {
        let d = parse_drawing(
            r#"{"strokes":[
                {"vertices":[[0,0,0]],"normals":[[0,0,1]],"width":1},
                {"vertices":[[0,0,0],[1,0,0],[2,0,0]],"normals":[[0,0,1],[0,0,1],[0,0,1]],"width":1}
            ]}"#,
        )
        .unwrap();
        assert_eq!(d.drawing.strokes.len(), 1);
        assert_eq!(d.dropped_strokes, 1);
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(parse_drawing(r#"{"strokes":[]}"#), Err(Error::Validation(_))));
        assert!(matches!(
            parse_drawing(r#"{"strokes":[{"vertices":[[0,0,0],[1,0,0]],"normals":[[0,0,1],[0,0,1]],"width":0}]}"#),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            parse_drawing(r#"{"strokes":[{"vertices":[[0,0,0],[1,0,0]],"normals":[[0,0,1]],"width":1}]}"#),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn truncated_file_reports_position() {
        let err = parse_drawing("{\"strokes\":[{\"vertices\":[[0,0,0],\n[1,0").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn save_load_round_trip(
            pts in proptest::collection::vec((-100.0f64..100.0, -100.0f64..100.0, -100.0f64..100.0), 2..12),
            w in 0.01f64..3.0,
        ) {
            let ps: Vec<Vec3> = pts.iter().enumerate()
                .map(|(i, (x, y, z))| Vec3::new(*x + 1000.0 * i as f64, *y, *z)).collect();
            let ns: Vec<Vec3> = ps.iter().map(|p| (p + Vec3::new(0.1, 0.2, 1.0)).normalize()).collect();
            let stroke = Stroke::from_parts(&ps, &ns, &vec![w; ps.len()], [0.2, 0.4, 0.6]);
            let drawing = Drawing::new(vec![stroke]).unwrap();
            let again = parse_drawing(&drawing_to_json(&drawing)).unwrap().drawing;
            for (a, b) in drawing.strokes[0].vertices.iter().zip(&again.strokes[0].vertices) {
                prop_assert_eq!(a.position, b.position);
                prop_assert!((a.normal - b.normal).norm() < 1e-12);
                prop_assert_eq!(a.width, b.width);
            }
        }
    }
}
