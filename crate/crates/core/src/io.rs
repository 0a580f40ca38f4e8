//! File formats.
//!
//! Space file (JSON):
//! `{ "points": [{"id": str, "coords": [real, ...]?}], "metric": "explicit" | "euclidean", "matrix": [[real]]? }`
//!
//! Distribution file (JSON): `{ "space": path-or-id, "weights": [real, ...] }`
//!
//! Higgs profiles are CSV rows `point_id,value`; table shapes are CSV rows
//! `x,value`. A first row that does not parse as numbers is treated as a
//! header. Bloch states are JSON triples `[x, y, z]`.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncgeom::BlochState;
use crate::space::{Distribution, FiniteMetricSpace, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Explicit,
    Euclidean,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceFile {
    pub points: Vec<Point>,
    pub metric: MetricKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
}

impl SpaceFile {
    pub fn explicit(space: &FiniteMetricSpace) -> Self {
        SpaceFile { points: space.points().to_vec(), metric: MetricKind::Explicit, matrix: Some(space.matrix()) }
    }

    pub fn into_space(self) -> Result<FiniteMetricSpace> {
        match self.metric {
            MetricKind::Explicit => {
                let matrix =
                    self.matrix.ok_or_else(|| Error::Parse("explicit metric requires a \"matrix\" field".into()))?;
                FiniteMetricSpace::new(self.points, matrix)
            }
            MetricKind::Euclidean => FiniteMetricSpace::euclidean(self.points),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionFile {
    pub space: String,
    pub weights: Vec<f64>,
}

impl DistributionFile {
    pub fn into_distribution(self, space: &FiniteMetricSpace) -> Result<Distribution> {
        let d = Distribution::new(self.weights)?;
        d.check_len(space.len())?;
        Ok(d)
    }
}

pub fn read_space_file(path: impl AsRef<Path>) -> Result<SpaceFile> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

/// Reads and validates a space file.
pub fn load_space(path: impl AsRef<Path>) -> Result<FiniteMetricSpace> {
    read_space_file(path)?.into_space()
}

pub fn save_space(space: &FiniteMetricSpace, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(&SpaceFile::explicit(space))?)?;
    Ok(())
}

pub fn read_distribution_file(path: impl AsRef<Path>) -> Result<DistributionFile> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn load_distribution(path: impl AsRef<Path>, space: &FiniteMetricSpace) -> Result<Distribution> {
    read_distribution_file(path)?.into_distribution(space)
}

pub fn save_distribution(d: &Distribution, space_ref: &str, path: impl AsRef<Path>) -> Result<()> {
    let file = DistributionFile { space: space_ref.to_string(), weights: d.weights().to_vec() };
    fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}

fn csv_rows(path: impl AsRef<Path>) -> Result<Vec<(String, String)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| Error::Parse(e.to_string()))?;
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        if rec.len() != 2 {
            return Err(Error::Parse(format!("expected 2 columns, got {}", rec.len())));
        }
        rows.push((rec[0].to_string(), rec[1].to_string()));
    }
    Ok(rows)
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse().map_err(|_| Error::Parse(format!("not a number: {s:?}")))
}

/// Numeric `x,value` rows, skipping a header line.
pub fn read_pairs(path: impl AsRef<Path>) -> Result<Vec<(f64, f64)>> {
    let rows = csv_rows(path)?;
    let skip = usize::from(rows.first().is_some_and(|(a, _)| a.parse::<f64>().is_err()));
    rows[skip..].iter().map(|(a, b)| Ok((parse_f64(a)?, parse_f64(b)?))).collect()
}

/// Higgs profile `point_id,value`, returned in the space's point order.
pub fn load_profile(path: impl AsRef<Path>, space: &FiniteMetricSpace) -> Result<Vec<f64>> {
    let mut by_id = HashMap::new();
    for (k, (id, value)) in csv_rows(path)?.into_iter().enumerate() {
        match value.parse::<f64>() {
            Ok(v) => {
                by_id.insert(id, v);
            }
            Err(_) if k == 0 => continue,
            Err(_) => return Err(Error::Parse(format!("not a number: {value:?}"))),
        }
    }
    space
        .points()
        .iter()
        .map(|p| {
            by_id.get(&p.id).copied().ok_or_else(|| Error::Parse(format!("no profile value for point {:?}", p.id)))
        })
        .collect()
}

/// A single `[x, y, z]` triple.
pub fn parse_bloch(text: &str) -> Result<BlochState> {
    let [x, y, z]: [f64; 3] = serde_json::from_str(text)?;
    BlochState::new(x, y, z)
}

pub fn load_bloch(path: impl AsRef<Path>) -> Result<BlochState> {
    parse_bloch(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::build_grid_circle;

    #[test]
    fn space_roundtrip_and_euclidean() {
        let dir = tempfile::tempdir().unwrap();
        let c = build_grid_circle(5).unwrap();
        let p = dir.path().join("c.json");
        save_space(&c, &p).unwrap();
        assert_eq!(load_space(&p).unwrap(), c);

        let e = dir.path().join("e.json");
        fs::write(&e, r#"{"points":[{"id":"a","coords":[0,0]},{"id":"b","coords":[3,4]}],"metric":"euclidean"}"#)
            .unwrap();
        assert_eq!(load_space(&e).unwrap().dist(0, 1), 5.0);
    }

    #[test]
    fn asymmetric_file_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.json");
        fs::write(&p, r#"{"points":[{"id":"a"},{"id":"b"}],"metric":"explicit","matrix":[[0,1],[2,0]]}"#).unwrap();
        match load_space(&p) {
            Err(Error::InvalidMetric(r)) => assert!(r.has_symmetry_violation(0, 1)),
            other => panic!("expected metric error, got {other:?}"),
        }
    }

    #[test]
    fn profiles_and_tables() {
        let dir = tempfile::tempdir().unwrap();
        let c = build_grid_circle(3).unwrap();
        let p = dir.path().join("h.csv");
        fs::write(&p, "point_id,value\np2,3.0\np0,1.0\np1,2.0\n").unwrap();
        assert_eq!(load_profile(&p, &c).unwrap(), vec![1.0, 2.0, 3.0]);

        let t = dir.path().join("t.csv");
        fs::write(&t, "x,value\n0,0\n1,2\n").unwrap();
        assert_eq!(read_pairs(&t).unwrap(), vec![(0.0, 0.0), (1.0, 2.0)]);
    }

    #[test]
    fn bloch_triples() {
        assert_eq!(parse_bloch("[0, 0, 1]").unwrap(), BlochState::new(0.0, 0.0, 1.0).unwrap());
        assert!(parse_bloch("[1, 1, 0]").is_err());
    }
}
