use std::collections::HashMap;
use std::path::Path;

use super::LabeledDataset;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Reads a numeric CSV with a header row.
///
/// When `label_column` is given, that column is taken as the class label.
/// Labels that are all non-negative integers are used as-is; otherwise each
/// distinct label string gets an id in order of first appearance.
pub fn load_csv(path: impl AsRef<Path>, label_column: Option<&str>) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_path(path)?;
    let headers = reader.headers()?.clone();
    if headers.is_empty() {
        return Err(Error::Parse {
            row: 0,
            column: 0,
            message: "missing header row".into(),
        });
    }
    let label_idx = match label_column {
        Some(name) => Some(headers.iter().position(|h| h.trim() == name).ok_or_else(|| Error::Parse {
            row: 0,
            column: 0,
            message: format!("label column '{name}' not found"),
        })?),
        None => None,
    };
    let dim = headers.len() - usize::from(label_idx.is_some());

    let mut data = Vec::new();
    let mut raw_labels = Vec::new();
    let mut rows = 0;
    for (r, record) in reader.records().enumerate() {
        let record = record?;
        let row = r + 2; // 1-based, after the header
        if record.len() != headers.len() {
            return Err(Error::Parse {
                row,
                column: record.len() + 1,
                message: format!("expected {} fields, found {}", headers.len(), record.len()),
            });
        }
        for (c, field) in record.iter().enumerate() {
            if Some(c) == label_idx {
                raw_labels.push(field.trim().to_string());
                continue;
            }
            let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
                row,
                column: c + 1,
                message: format!("non-numeric value '{field}'"),
            })?;
            data.push(v);
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::Parse {
            row: 1,
            column: 0,
            message: "no data rows".into(),
        });
    }
    let labels = label_idx.map(|_| encode_labels(&raw_labels));
    let name = path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    LabeledDataset::new(Matrix::new(rows, dim, data)?, labels, name)
}

fn encode_labels(raw: &[String]) -> Vec<usize> {
    if let Ok(ids) = raw.iter().map(|s| s.parse::<usize>()).collect::<std::result::Result<Vec<_>, _>>() {
        return ids;
    }
    let mut ids = HashMap::new();
    raw.iter()
        .map(|s| {
            let next = ids.len();
            *ids.entry(s.as_str()).or_insert(next)
        })
        .collect()
}

/// Writes a dataset as CSV with columns `x0..x{d-1}` and, if present,
/// `label`. Values use the shortest representation that parses back exactly.
pub fn save_csv(path: impl AsRef<Path>, ds: &LabeledDataset) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = (0..ds.dim()).map(|j| format!("x{j}")).collect();
    if ds.labels.is_some() {
        header.push("label".into());
    }
    w.write_record(&header)?;
    for i in 0..ds.len() {
        let mut rec: Vec<String> = ds.points.row(i).iter().map(|v| v.to_string()).collect();
        if let Some(l) = &ds.labels {
            rec.push(l[i].to_string());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `index,cluster` rows. `None` entries are written as `-1`.
pub fn save_assignments(path: impl AsRef<Path>, assignments: &[Option<usize>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["index", "cluster"])?;
    for (i, a) in assignments.iter().enumerate() {
        let c = a.map_or_else(|| "-1".to_string(), |c| c.to_string());
        w.write_record([i.to_string(), c])?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_assignments(path: impl AsRef<Path>) -> Result<Vec<Option<usize>>> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record?;
        let field = record.get(1).ok_or_else(|| Error::Parse {
            row: r + 2,
            column: 2,
            message: "missing cluster column".into(),
        })?;
        let v: i64 = field.trim().parse().map_err(|_| Error::Parse {
            row: r + 2,
            column: 2,
            message: format!("non-integer cluster '{field}'"),
        })?;
        out.push(usize::try_from(v).ok());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn write_then_read_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        let points = Matrix::from_rows(&[vec![0.1 + 0.2, -1e-300], vec![std::f64::consts::PI, 12345.678901234567]]).unwrap();
        let ds = LabeledDataset::new(points, Some(vec![3, 1]), "d").unwrap();
        save_csv(&path, &ds).unwrap();
        let back = load_csv(&path, Some("label")).unwrap();
        assert_eq!(back.points, ds.points);
        assert_eq!(back.labels, ds.labels);
    }

    #[test]
    fn empty_file_is_a_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        std::fs::File::create(&path).unwrap();
        assert!(load_csv(&path, None).is_err());
    }

    #[test]
    fn non_numeric_cell_reports_position() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "a,b\n1,2\n3,oops").unwrap();
        match load_csv(&path, None) {
            Err(Error::Parse { row, column, .. }) => assert_eq!((row, column), (3, 2)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_label_column() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        std::fs::write(&path, "a,b\n1,2\n").unwrap();
        assert!(load_csv(&path, Some("label")).is_err());
    }

    #[test]
    fn string_labels_are_encoded() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("iris.csv");
        std::fs::write(&path, "a,species\n1,setosa\n2,virginica\n3,setosa\n").unwrap();
        let ds = load_csv(&path, Some("species")).unwrap();
        assert_eq!(ds.labels.unwrap(), vec![0, 1, 0]);
    }

    #[test]
    fn assignments_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.csv");
        let a = vec![Some(0), None, Some(4)];
        save_assignments(&path, &a).unwrap();
        assert_eq!(load_assignments(&path).unwrap(), a);
    }
}
