//! CSV and JSON measure files.
//!
//! CSV: one atom per row, `x1,...,xd,weight`, optional header row.
//! JSON: `{"dim": d, "points": [[...], ...], "weights": [...]}`.
//! Both formats reproduce coordinates and weights bit-exactly on reload.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::DiscreteMeasure;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureFormat {
    Csv,
    Json,
}

impl MeasureFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("csv") => Ok(MeasureFormat::Csv),
            Some("json") => Ok(MeasureFormat::Json),
            _ => Err(Error::InvalidParameter(format!(
                "cannot infer measure format from {} (expected .csv or .json)",
                path.display()
            ))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonMeasure {
    dim: usize,
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

/// Render `x` with 17 significant digits.
pub(crate) fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn save_measure(mu: &DiscreteMeasure, path: &Path) -> Result<()> {
    let text = match MeasureFormat::from_path(path)? {
        MeasureFormat::Csv => to_csv(mu),
        MeasureFormat::Json => to_json(mu),
    };
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_measure(path: &Path) -> Result<DiscreteMeasure> {
    let format = MeasureFormat::from_path(path)?;
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let (dim, coords, weights) = match format {
        MeasureFormat::Csv => parse_csv(&text),
        MeasureFormat::Json => parse_json(&text),
    }
    .map_err(|message| Error::Parse {
        path: path.to_path_buf(),
        message,
    })?;
    DiscreteMeasure::from_flat(dim, coords, weights).map_err(|e| Error::Validation {
        path: path.to_path_buf(),
        source: Box::new(e),
    })
}

pub(crate) fn to_csv(mu: &DiscreteMeasure) -> String {
    let mut out = String::new();
    let header: Vec<String> = (1..=mu.dim()).map(|k| format!("x{k}")).collect();
    out.push_str(&header.join(","));
    out.push_str(",weight\n");
    for (p, &w) in mu.points().zip(mu.weights()) {
        let mut row: Vec<String> = p.iter().map(|&c| fmt17(c)).collect();
        row.push(fmt17(w));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub(crate) fn to_json(mu: &DiscreteMeasure) -> String {
    let doc = JsonMeasure {
        dim: mu.dim(),
        points: mu.points().map(<[f64]>::to_vec).collect(),
        weights: mu.weights().to_vec(),
    };
    let mut s = serde_json::to_string(&doc).expect("finite floats serialize");
    s.push('\n');
    s
}

type Parsed = std::result::Result<(usize, Vec<f64>, Vec<f64>), String>;

fn parse_csv(text: &str) -> Parsed {
    let mut dim = None;
    let mut coords = Vec::new();
    let mut weights = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let values: std::result::Result<Vec<f64>, _> =
            fields.iter().map(|f| f.parse::<f64>()).collect();
        let values = match values {
            Ok(v) => v,
            // a non-numeric first row is a header
            Err(_) if dim.is_none() && weights.is_empty() && lineno == 0 => continue,
            Err(e) => return Err(format!("line {}: {e}", lineno + 1)),
        };
        if values.len() < 2 {
            return Err(format!("line {}: need at least one coordinate and a weight", lineno + 1));
        }
        let d = values.len() - 1;
        match dim {
            None => dim = Some(d),
            Some(expected) if expected != d => {
                return Err(format!(
                    "line {}: {d} coordinates, earlier rows have {expected}",
                    lineno + 1
                ))
            }
            _ => {}
        }
        coords.extend_from_slice(&values[..d]);
        weights.push(values[d]);
    }
    let dim = dim.ok_or_else(|| "no atoms".to_string())?;
    Ok((dim, coords, weights))
}

fn parse_json(text: &str) -> Parsed {
    let doc: JsonMeasure = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if doc.points.len() != doc.weights.len() {
        return Err(format!(
            "{} points but {} weights",
            doc.points.len(),
            doc.weights.len()
        ));
    }
    let mut coords = Vec::with_capacity(doc.points.len() * doc.dim);
    for (i, p) in doc.points.iter().enumerate() {
        if p.len() != doc.dim {
            return Err(format!("point {i} has {} coordinates, dim is {}", p.len(), doc.dim));
        }
        coords.extend_from_slice(p);
    }
    Ok((doc.dim, coords, doc.weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Point;

    fn sample() -> DiscreteMeasure {
        DiscreteMeasure::new(
            vec![Point::xy(0.1, 1.0 / 3.0), Point::xy(-2.5e-300, 7.0)],
            vec![0.5, std::f64::consts::PI],
        )
        .unwrap()
    }

    #[test]
    fn round_trips_both_formats() {
        let dir = tempfile::tempdir().unwrap();
        for name in ["m.csv", "m.json"] {
            let path = dir.path().join(name);
            save_measure(&sample(), &path).unwrap();
            assert_eq!(load_measure(&path).unwrap(), sample(), "{name}");
        }
    }

    #[test]
    fn csv_without_header() {
        let (d, c, w) = parse_csv("0,0,1\n1,0,2\n").unwrap();
        assert_eq!((d, c, w), (2, vec![0.0, 0.0, 1.0, 0.0], vec![1.0, 2.0]));
    }

    #[test]
    fn csv_negative_weight_is_validation_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        fs::write(&path, "0.0,0.0,-1\n").unwrap();
        assert!(matches!(load_measure(&path), Err(Error::Validation { .. })));
    }

    #[test]
    fn csv_mixed_dimensions_is_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("mixed.csv");
        fs::write(&path, "x,y,weight\n0,0,1\n1,2,3,1\n").unwrap();
        assert!(matches!(load_measure(&path), Err(Error::Parse { .. })));
        fs::write(&path, "0,0,1\nfoo,1,1\n").unwrap();
        assert!(matches!(load_measure(&path), Err(Error::Parse { .. })));
    }

    #[test]
    fn json_length_mismatch_is_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        fs::write(
            &path,
            r#"{"dim": 2, "points": [[0,0],[1,0],[2,0]], "weights": [1, 1]}"#,
        )
        .unwrap();
        assert!(matches!(load_measure(&path), Err(Error::Parse { .. })));
    }

    #[test]
    fn missing_file_reports_path() {
        let err = load_measure(Path::new("/nonexistent/missing.json")).unwrap_err();
        assert!(err.to_string().contains("missing.json"));
    }

    #[test]
    fn unknown_extension() {
        assert!(MeasureFormat::from_path(Path::new("m.txt")).is_err());
    }
}
