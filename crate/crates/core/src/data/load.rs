use std::collections::BTreeSet;
use std::path::Path;

use super::{Dataset, Label};
use crate::error::{Error, Result};

/// Which column carries the class label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Name(String),
    Index(usize),
}

impl std::str::FromStr for LabelColumn {
    type Err = std::convert::Infallible;

    /// Digits select by zero-based index, anything else by header name.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.trim().parse::<usize>() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) => LabelColumn::Name(s.trim().to_string()),
        })
    }
}

impl std::fmt::Display for LabelColumn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LabelColumn::Name(n) => write!(f, "{n:?}"),
            LabelColumn::Index(i) => write!(f, "#{i}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub label_column: LabelColumn,
    /// Raw label value mapped to `+1`; every other value becomes `-1`.
    pub minority_label: String,
    pub has_header: bool,
}

fn same_label(raw: &str, minority: &str) -> bool {
    let (raw, minority) = (raw.trim(), minority.trim());
    if raw == minority {
        return true;
    }
    match (raw.parse::<f64>(), minority.parse::<f64>()) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

/// Reads a comma-separated file into a [`Dataset`] named after the file stem.
///
/// Rows keep their file order. Empty cells are rejected, not imputed. A file
/// with two or more rows must contain at least two distinct raw labels.
pub fn load_csv(path: impl AsRef<Path>, opts: &LoadOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let csv_err = |e: csv::Error| Error::Csv {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(opts.has_header)
        .trim(csv::Trim::All)
        .from_reader(file);

    let header_index = if opts.has_header {
        let headers = reader.headers().map_err(csv_err)?.clone();
        match &opts.label_column {
            LabelColumn::Name(name) => Some(
                headers
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Error::LabelColumnAbsent(opts.label_column.to_string()))?,
            ),
            LabelColumn::Index(i) if *i < headers.len() => Some(*i),
            LabelColumn::Index(_) => {
                return Err(Error::LabelColumnAbsent(opts.label_column.to_string()))
            }
        }
    } else {
        match &opts.label_column {
            LabelColumn::Index(i) => Some(*i),
            LabelColumn::Name(_) => {
                return Err(Error::LabelColumnAbsent(format!(
                    "{} (file has no header row)",
                    opts.label_column
                )))
            }
        }
    };
    let label_col = header_index.expect("resolved above");

    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut raw_labels = BTreeSet::new();
    let mut width = None;
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err)?;
        if label_col >= record.len() {
            return Err(Error::LabelColumnAbsent(opts.label_column.to_string()));
        }
        let w = record.len() - 1;
        if *width.get_or_insert(w) != w {
            return Err(Error::Csv {
                path: path.to_path_buf(),
                message: format!("row {row} has {} fields, expected {}", w + 1, width.unwrap() + 1),
            });
        }
        for (column, cell) in record.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::MissingValue { row, column });
            }
            if column == label_col {
                raw_labels.insert(cell.to_string());
                labels.push(if same_label(cell, &opts.minority_label) {
                    Label::Minority
                } else {
                    Label::Majority
                });
                continue;
            }
            let value: f64 = cell.parse().map_err(|_| Error::NonNumeric {
                row,
                column,
                value: cell.to_string(),
            })?;
            if !value.is_finite() {
                return Err(Error::NonNumeric {
                    row,
                    column,
                    value: cell.to_string(),
                });
            }
            features.push(value);
        }
    }

    if labels.is_empty() {
        return Err(Error::InvalidDataset(format!("{} has no data rows", path.display())));
    }
    if labels.len() > 1 && raw_labels.len() < 2 {
        return Err(Error::SingleLabel);
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Dataset::from_flat(name, width.unwrap_or(0), features, labels)
}

/// Reads every column of a comma-separated file as a feature.
pub fn load_csv_unlabeled(path: impl AsRef<Path>, has_header: bool) -> Result<Vec<Vec<f64>>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut rows = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Csv {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let values = record
            .iter()
            .enumerate()
            .map(|(column, cell)| {
                if cell.is_empty() {
                    return Err(Error::MissingValue { row, column });
                }
                cell.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::NonNumeric {
                        row,
                        column,
                        value: cell.to_string(),
                    })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(values);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(".csv").tempfile().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    fn opts(col: &str, minority: &str, header: bool) -> LoadOptions {
        LoadOptions {
            label_column: col.parse().unwrap(),
            minority_label: minority.into(),
            has_header: header,
        }
    }

    #[test]
    fn maps_minority_and_keeps_order() {
        let f = write("a,b,class\n1,2,x\n3,4,y\n5,6,x\n");
        let ds = load_csv(f.path(), &opts("class", "x", true)).unwrap();
        assert_eq!(ds.n_samples(), 3);
        assert_eq!(ds.n_features(), 2);
        assert_eq!(ds.labels(), &[Label::Minority, Label::Majority, Label::Minority]);
        assert_eq!(ds.row(1), &[3.0, 4.0]);
    }

    #[test]
    fn label_by_index_without_header() {
        let f = write("2,1.5,0.5\n1,2.5,0.25\n");
        let ds = load_csv(f.path(), &opts("0", "2", false)).unwrap();
        assert_eq!(ds.labels(), &[Label::Minority, Label::Majority]);
        assert_eq!(ds.row(0), &[1.5, 0.5]);
    }

    #[test]
    fn numeric_labels_compare_by_value() {
        let f = write("1,2.0\n2,1.0\n");
        let ds = load_csv(f.path(), &opts("1", "2", false)).unwrap();
        assert_eq!(ds.label(0), Label::Minority);
    }

    #[test]
    fn single_row_is_accepted() {
        let f = write("v,label\n0.5,2\n");
        let ds = load_csv(f.path(), &opts("label", "2", true)).unwrap();
        assert_eq!(ds.n_samples(), 1);
        assert_eq!(ds.label(0), Label::Minority);
    }

    #[test]
    fn rejects_single_distinct_label() {
        let f = write("v,label\n0.5,2\n0.7,2\n");
        assert!(matches!(
            load_csv(f.path(), &opts("label", "2", true)),
            Err(Error::SingleLabel)
        ));
    }

    #[test]
    fn reports_non_numeric_cell_position() {
        let f = write("a,b,label\n1,2,p\n3,oops,n\n");
        match load_csv(f.path(), &opts("label", "p", true)) {
            Err(Error::NonNumeric { row, column, value }) => {
                assert_eq!((row, column, value.as_str()), (1, 1, "oops"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_missing_cells() {
        let f = write("a,b,label\n1,,p\n3,4,n\n");
        assert!(matches!(
            load_csv(f.path(), &opts("label", "p", true)),
            Err(Error::MissingValue { row: 0, column: 1 })
        ));
    }

    #[test]
    fn unlabeled_rows() {
        let f = write("a,b\n1,2\n3,4.5\n");
        assert_eq!(load_csv_unlabeled(f.path(), true).unwrap(), vec![vec![1.0, 2.0], vec![3.0, 4.5]]);
        let bad = write("1,x\n");
        assert!(load_csv_unlabeled(bad.path(), false).is_err());
    }

    #[test]
    fn missing_label_column_and_file() {
        let f = write("a,b\n1,2\n");
        assert!(matches!(
            load_csv(f.path(), &opts("class", "p", true)),
            Err(Error::LabelColumnAbsent(_))
        ));
        assert!(matches!(
            load_csv(f.path(), &opts("7", "p", true)),
            Err(Error::LabelColumnAbsent(_))
        ));
        assert!(matches!(
            load_csv("/nonexistent/nope.csv", &opts("0", "p", false)),
            Err(Error::Io { .. })
        ));
    }
}
