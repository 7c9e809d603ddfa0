//! CSV ingestion with schema validation.
//!
//! Rows with missing, non-numeric, or non-finite feature cells are
//! rejected with the 1-based line number of the offending row. Loaded
//! samples are canonicalized positives-first; the permutation back to
//! source row order is preserved.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Label, LabeledSample};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ColumnRef {
    Index(usize),
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum FeatureColumns {
    /// Every column except the label column, each of which must parse as
    /// a finite number.
    AllRemainingNumeric,
    Explicit(Vec<ColumnRef>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvSchema {
    pub label_column: ColumnRef,
    /// Source label value mapped to +1.
    pub positive_label: String,
    /// When set, the only value mapped to -1; anything else is an
    /// unmapped-label error. When unset, every non-positive value maps
    /// to -1.
    pub negative_label: Option<String>,
    pub delimiter: u8,
    pub has_header: bool,
    pub feature_columns: FeatureColumns,
}

impl Default for CsvSchema {
    fn default() -> Self {
        Self {
            label_column: ColumnRef::Name("label".to_string()),
            positive_label: "1".to_string(),
            negative_label: None,
            delimiter: b',',
            has_header: true,
            feature_columns: FeatureColumns::AllRemainingNumeric,
        }
    }
}

/// A canonicalized dataset plus the map back to the source rows:
/// `source_rows[k]` is the 0-based data-row index canonical sample `k`
/// came from.
#[derive(Clone, Debug)]
pub struct LoadedCsv {
    pub dataset: Dataset,
    pub source_rows: Vec<usize>,
}

fn resolve_column(col: &ColumnRef, header: Option<&csv::StringRecord>) -> Result<usize> {
    match col {
        ColumnRef::Index(i) => Ok(*i),
        ColumnRef::Name(name) => {
            let header = header.ok_or_else(|| {
                Error::CsvSchema(format!(
                    "column \"{name}\" referenced by name but the file has no header"
                ))
            })?;
            header
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| Error::CsvSchema(format!("column \"{name}\" not found in header")))
        }
    }
}

pub fn load_csv(path: &Path, schema: &CsvSchema) -> Result<LoadedCsv> {
    let file = std::fs::File::open(path)?;
    load_csv_reader(file, schema)
}

pub fn load_csv_reader<R: Read>(reader: R, schema: &CsvSchema) -> Result<LoadedCsv> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter)
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);

    let mut records = rdr.records();
    let header = if schema.has_header {
        match records.next() {
            Some(rec) => Some(rec?),
            None => return Err(Error::CsvSchema("empty file".to_string())),
        }
    } else {
        None
    };

    let label_idx = resolve_column(&schema.label_column, header.as_ref())?;
    let feature_idx: Option<Vec<usize>> = match &schema.feature_columns {
        FeatureColumns::AllRemainingNumeric => None,
        FeatureColumns::Explicit(cols) => Some(
            cols.iter()
                .map(|c| resolve_column(c, header.as_ref()))
                .collect::<Result<_>>()?,
        ),
    };

    let header_lines = usize::from(schema.has_header);
    let mut samples = Vec::new();
    for (row, rec) in records.enumerate() {
        let line = row + header_lines + 1;
        let rec = rec?;
        if rec.len() == 1 && rec[0].trim().is_empty() {
            continue; // blank line
        }
        let raw_label = rec
            .get(label_idx)
            .ok_or_else(|| Error::CsvRow {
                line,
                message: format!("missing label column {label_idx}"),
            })?
            .trim();
        let label = if raw_label == schema.positive_label {
            Label::Positive
        } else {
            match &schema.negative_label {
                Some(neg) if raw_label != neg => {
                    return Err(Error::CsvRow {
                        line,
                        message: format!("unmapped label value \"{raw_label}\""),
                    });
                }
                _ => Label::Negative,
            }
        };

        let mut features = Vec::new();
        let parse_cell = |idx: usize| -> Result<f64> {
            let cell = rec.get(idx).ok_or_else(|| Error::CsvRow {
                line,
                message: format!("missing feature column {idx}"),
            })?;
            let cell = cell.trim();
            let value: f64 = cell.parse().map_err(|_| Error::CsvRow {
                line,
                message: format!("non-numeric feature value \"{cell}\" in column {idx}"),
            })?;
            if !value.is_finite() {
                return Err(Error::CsvRow {
                    line,
                    message: format!("non-finite feature value in column {idx}"),
                });
            }
            Ok(value)
        };
        match &feature_idx {
            Some(cols) => {
                for &idx in cols {
                    features.push(parse_cell(idx)?);
                }
            }
            None => {
                for idx in 0..rec.len() {
                    if idx != label_idx {
                        features.push(parse_cell(idx)?);
                    }
                }
            }
        }
        if features.is_empty() {
            return Err(Error::CsvRow {
                line,
                message: "row has no feature columns".to_string(),
            });
        }
        samples.push(LabeledSample::new(features, label));
    }

    let (dataset, source_rows) = Dataset::canonicalize(samples)?;
    Ok(LoadedCsv {
        dataset,
        source_rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load_str(text: &str, schema: &CsvSchema) -> Result<LoadedCsv> {
        load_csv_reader(text.as_bytes(), schema)
    }

    #[test]
    fn three_row_fixture_with_named_label() {
        let text = "f1,f2,label\n1.0,2.0,bad\n3.0,4.0,good\n5.0,6.0,bad\n";
        let schema = CsvSchema {
            positive_label: "bad".to_string(),
            ..CsvSchema::default()
        };
        let loaded = load_str(text, &schema).unwrap();
        assert_eq!(loaded.dataset.m(), 2);
        assert_eq!(loaded.dataset.n(), 3);
        assert_eq!(loaded.dataset.dim(), 2);
        // Canonical order: the two "bad" rows first, stable.
        assert_eq!(loaded.source_rows, vec![0, 2, 1]);
        assert_eq!(loaded.dataset.sample(0).features, vec![1.0, 2.0]);
    }

    #[test]
    fn non_numeric_cell_names_line() {
        let text = "f1,f2,label\n1.0,2.0,1\n3.0,oops,0\n";
        let err = load_str(text, &CsvSchema::default()).unwrap_err();
        match err {
            Error::CsvRow { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("oops"), "{message}");
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn missing_cell_names_line() {
        let text = "f1,f2,label\n1.0,2.0,1\n3.0,0\n";
        let err = load_str(text, &CsvSchema::default()).unwrap_err();
        assert!(matches!(err, Error::CsvRow { line: 3, .. }));
    }

    #[test]
    fn strict_negative_label_rejects_unmapped() {
        let text = "f1,label\n1.0,yes\n2.0,no\n3.0,maybe\n";
        let schema = CsvSchema {
            positive_label: "yes".to_string(),
            negative_label: Some("no".to_string()),
            ..CsvSchema::default()
        };
        let err = load_str(text, &schema).unwrap_err();
        match err {
            Error::CsvRow { line, message } => {
                assert_eq!(line, 4);
                assert!(message.contains("maybe"));
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn single_class_after_mapping_rejected() {
        let text = "f1,label\n1.0,1\n2.0,1\n";
        assert!(matches!(
            load_str(text, &CsvSchema::default()),
            Err(Error::SingleClass { .. })
        ));
    }

    #[test]
    fn headerless_with_index_columns() {
        let text = "2;1.5;7\n1;2.5;9\n";
        let schema = CsvSchema {
            label_column: ColumnRef::Index(0),
            positive_label: "2".to_string(),
            negative_label: None,
            delimiter: b';',
            has_header: false,
            feature_columns: FeatureColumns::Explicit(vec![
                ColumnRef::Index(1),
                ColumnRef::Index(2),
            ]),
        };
        let loaded = load_str(text, &schema).unwrap();
        assert_eq!(loaded.dataset.m(), 1);
        assert_eq!(loaded.dataset.sample(0).features, vec![1.5, 7.0]);
    }

    #[test]
    fn label_counts_match_source() {
        // 10 rows, 3 positives, mixed order.
        let mut text = String::from("a,b,label\n");
        for i in 0..10 {
            let label = if i % 3 == 0 { "p" } else { "n" };
            text.push_str(&format!("{i},{},{label}\n", i * 2));
        }
        let schema = CsvSchema {
            positive_label: "p".to_string(),
            ..CsvSchema::default()
        };
        let loaded = load_str(&text, &schema).unwrap();
        assert_eq!(loaded.dataset.m(), 4);
        assert_eq!(loaded.dataset.n(), 10);
    }
}
