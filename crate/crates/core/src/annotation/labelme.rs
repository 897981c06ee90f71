use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeType {
    Rectangle,
    Polygon,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Shape {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub shape_type: ShapeType,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelMeDoc {
    pub image_path: String,
    pub image_width: u32,
    pub image_height: u32,
    pub shapes: Vec<Shape>,
}

impl LabelMeDoc {
    /// Last component of `imagePath`, accepting either separator.
    pub fn file_name(&self) -> &str {
        self.image_path.rsplit(['/', '\\']).next().unwrap_or(&self.image_path)
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LabelMeError {
    #[error("cannot read file: {0}")]
    Io(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("missing field {path}")]
    MissingField { path: String },
    #[error("{path}: expected {expected}")]
    WrongType { path: String, expected: &'static str },
    #[error("{path}: unsupported shape_type {shape_type:?}")]
    UnsupportedShape { path: String, shape_type: String },
    #[error("{path}: rectangle needs exactly 2 points, got {count}")]
    RectanglePoints { path: String, count: usize },
    #[error("{path}: shape needs at least 2 points, got {count}")]
    TooFewPoints { path: String, count: usize },
    #[error("{path}: image dimensions must be positive")]
    InvalidDimensions { path: String },
}

fn field<'a>(obj: &'a Value, key: &str, path: &str) -> Result<&'a Value, LabelMeError> {
    obj.get(key).ok_or_else(|| LabelMeError::MissingField { path: join(path, key) })
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn dimension(doc: &Value, key: &str) -> Result<u32, LabelMeError> {
    let v = field(doc, key, "")?;
    let n = v.as_u64().ok_or(LabelMeError::WrongType { path: key.into(), expected: "a non-negative integer" })?;
    match u32::try_from(n) {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(LabelMeError::InvalidDimensions { path: key.into() }),
    }
}

fn point(v: &Value, path: &str) -> Result<(f64, f64), LabelMeError> {
    let bad = || LabelMeError::WrongType { path: path.into(), expected: "an [x, y] pair of numbers" };
    match v.as_array().map(Vec::as_slice) {
        Some([x, y]) => Ok((x.as_f64().ok_or_else(bad)?, y.as_f64().ok_or_else(bad)?)),
        _ => Err(bad()),
    }
}

fn shape(v: &Value, path: &str) -> Result<Shape, LabelMeError> {
    let label = field(v, "label", path)?
        .as_str()
        .ok_or(LabelMeError::WrongType { path: join(path, "label"), expected: "a string" })?
        .to_string();
    let kind = field(v, "shape_type", path)?
        .as_str()
        .ok_or(LabelMeError::WrongType { path: join(path, "shape_type"), expected: "a string" })?;
    let shape_type = match kind {
        "rectangle" => ShapeType::Rectangle,
        "polygon" => ShapeType::Polygon,
        other => {
            return Err(LabelMeError::UnsupportedShape { path: join(path, "shape_type"), shape_type: other.into() })
        }
    };
    let points_path = join(path, "points");
    let points = field(v, "points", path)?
        .as_array()
        .ok_or(LabelMeError::WrongType { path: points_path.clone(), expected: "an array of points" })?
        .iter()
        .enumerate()
        .map(|(i, p)| point(p, &format!("{points_path}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    match shape_type {
        ShapeType::Rectangle if points.len() != 2 => {
            return Err(LabelMeError::RectanglePoints { path: points_path, count: points.len() })
        }
        _ if points.len() < 2 => return Err(LabelMeError::TooFewPoints { path: points_path, count: points.len() }),
        _ => {}
    }
    Ok(Shape { label, points, shape_type })
}

/// Parse and validate one LabelMe document.
pub fn parse_labelme(bytes: &[u8]) -> Result<LabelMeDoc, LabelMeError> {
    let doc: Value = serde_json::from_slice(bytes).map_err(|e| LabelMeError::Json(e.to_string()))?;
    if !doc.is_object() {
        return Err(LabelMeError::WrongType { path: "$".into(), expected: "an object" });
    }
    let image_path = field(&doc, "imagePath", "")?
        .as_str()
        .ok_or(LabelMeError::WrongType { path: "imagePath".into(), expected: "a string" })?
        .to_string();
    let image_width = dimension(&doc, "imageWidth")?;
    let image_height = dimension(&doc, "imageHeight")?;
    let shapes = field(&doc, "shapes", "")?
        .as_array()
        .ok_or(LabelMeError::WrongType { path: "shapes".into(), expected: "an array" })?
        .iter()
        .enumerate()
        .map(|(i, s)| shape(s, &format!("shapes[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LabelMeDoc { image_path, image_width, image_height, shapes })
}

/// Read and parse files in parallel. Results keep the input order.
pub fn parse_files(paths: &[PathBuf]) -> Vec<(PathBuf, Result<LabelMeDoc, LabelMeError>)> {
    paths
        .par_iter()
        .map(|p| {
            let parsed = read(p).and_then(|bytes| parse_labelme(&bytes));
            (p.clone(), parsed)
        })
        .collect()
}

fn read(path: &Path) -> Result<Vec<u8>, LabelMeError> {
    std::fs::read(path).map_err(|e| LabelMeError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(shapes: &str) -> String {
        format!(r#"{{"version":"5.2.1","flags":{{}},"imagePath":"..\\img\\cow_001.jpg","imageWidth":2704,"imageHeight":1520,"imageData":null,"shapes":[{shapes}]}}"#)
    }

    #[test]
    fn single_rectangle() {
        let d = parse_labelme(
            doc(r#"{"label":"3","points":[[10,20],[40,60]],"group_id":null,"shape_type":"rectangle","flags":{}}"#)
                .as_bytes(),
        )
        .unwrap();
        assert_eq!(d.shapes.len(), 1);
        assert_eq!(d.shapes[0].label, "3");
        assert_eq!(d.shapes[0].shape_type, ShapeType::Rectangle);
        assert_eq!(d.file_name(), "cow_001.jpg");
        assert_eq!((d.image_width, d.image_height), (2704, 1520));
    }

    #[test]
    fn no_shapes_is_fine() {
        assert!(parse_labelme(doc("").as_bytes()).unwrap().shapes.is_empty());
    }

    #[test]
    fn polygon_points_kept() {
        let d = parse_labelme(doc(r#"{"label":"C1","points":[[0,0],[10,2],[4,8]],"shape_type":"polygon"}"#).as_bytes())
            .unwrap();
        assert_eq!(d.shapes[0].points, vec![(0.0, 0.0), (10.0, 2.0), (4.0, 8.0)]);
    }

    #[test]
    fn circle_unsupported() {
        let e = parse_labelme(doc(r#"{"label":"1","points":[[0,0],[3,3]],"shape_type":"circle"}"#).as_bytes())
            .unwrap_err();
        assert_eq!(
            e,
            LabelMeError::UnsupportedShape { path: "shapes[0].shape_type".into(), shape_type: "circle".into() }
        );
    }

    #[test]
    fn rectangle_point_count() {
        let e = parse_labelme(doc(r#"{"label":"1","points":[[0,0],[3,3],[4,4]],"shape_type":"rectangle"}"#).as_bytes())
            .unwrap_err();
        assert!(matches!(e, LabelMeError::RectanglePoints { count: 3, .. }));
        let e = parse_labelme(doc(r#"{"label":"1","points":[[0,0]],"shape_type":"polygon"}"#).as_bytes()).unwrap_err();
        assert!(matches!(e, LabelMeError::TooFewPoints { count: 1, .. }));
    }

    #[test]
    fn distinct_errors_name_paths() {
        assert!(matches!(parse_labelme(b"{"), Err(LabelMeError::Json(_))));
        let e = parse_labelme(br#"{"imagePath":"a.jpg","imageWidth":10,"shapes":[]}"#).unwrap_err();
        assert_eq!(e, LabelMeError::MissingField { path: "imageHeight".into() });
        let e = parse_labelme(doc(r#"{"points":[[0,0],[1,1]],"shape_type":"rectangle"}"#).as_bytes()).unwrap_err();
        assert_eq!(e, LabelMeError::MissingField { path: "shapes[0].label".into() });
        let e = parse_labelme(doc(r#"{"label":"1","points":[[0,"x"],[1,1]],"shape_type":"polygon"}"#).as_bytes())
            .unwrap_err();
        assert!(matches!(e, LabelMeError::WrongType { ref path, .. } if path == "shapes[0].points[0]"));
        let e = parse_labelme(br#"{"imagePath":"a.jpg","imageWidth":0,"imageHeight":5,"shapes":[]}"#).unwrap_err();
        assert!(matches!(e, LabelMeError::InvalidDimensions { .. }));
    }
}
