//! CSV ingestion for attribute-inference experiments.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use leakage_core::data::{AttributeDataset, Dataset};

/// Which columns hold what. Every column that is neither the label nor the
/// sensitive attribute is a feature.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvSchema {
    pub label_column: String,
    pub sensitive_column: Option<String>,
    /// When set, the number of feature columns must match.
    pub feature_count: Option<usize>,
    /// When set, labels must lie below this.
    pub classes: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LoadedDataset {
    Plain(Dataset),
    /// Sensitive values are mapped to `0..k` in sorted order.
    Attribute { data: AttributeDataset, sensitive_values: Vec<String> },
}

fn sort_key(s: &str) -> (u8, f64, String) {
    match s.parse::<f64>() {
        Ok(v) => (0, v, String::new()),
        Err(_) => (1, 0.0, s.to_string()),
    }
}

pub fn load_csv_dataset(path: &Path, schema: &CsvSchema) -> Result<LoadedDataset> {
    let file = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_csv_dataset(file, schema).with_context(|| format!("in {}", path.display()))
}

pub fn read_csv_dataset<R: std::io::Read>(input: R, schema: &CsvSchema) -> Result<LoadedDataset> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_string()).collect();
    if header.iter().all(|h| h.parse::<f64>().is_ok()) {
        bail!("missing header row");
    }
    let find = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| anyhow!("no column named `{name}`"))
    };
    let label_col = find(&schema.label_column)?;
    let sensitive_col = schema.sensitive_column.as_deref().map(find).transpose()?;
    let feature_cols: Vec<usize> = (0..header.len())
        .filter(|&c| c != label_col && Some(c) != sensitive_col)
        .collect();
    if feature_cols.is_empty() {
        bail!("no feature columns");
    }
    if let Some(k) = schema.feature_count {
        if k != feature_cols.len() {
            bail!("expected {k} feature columns, found {}", feature_cols.len());
        }
    }

    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut raw_sensitive = Vec::new();
    for (i, record) in reader.records().enumerate() {
        // data rows are numbered from 2; row 1 is the header
        let row = i + 2;
        let record = record.with_context(|| format!("row {row}"))?;
        if record.len() != header.len() {
            bail!("row {row}: expected {} cells, found {}", header.len(), record.len());
        }
        for &c in &feature_cols {
            let cell = record[c].trim();
            let v: f64 = cell
                .parse()
                .map_err(|_| anyhow!("row {row}: column `{}` is not numeric: `{cell}`", header[c]))?;
            if !v.is_finite() {
                bail!("row {row}: column `{}` is not finite", header[c]);
            }
            features.push(v);
        }
        let cell = record[label_col].trim();
        let label: usize = cell
            .parse()
            .map_err(|_| anyhow!("row {row}: label `{cell}` is not a class index"))?;
        if let Some(k) = schema.classes {
            if label >= k {
                bail!("row {row}: label {label} out of range for {k} classes");
            }
        }
        labels.push(label);
        if let Some(c) = sensitive_col {
            raw_sensitive.push(record[c].trim().to_string());
        }
    }
    if labels.is_empty() {
        bail!("no data rows");
    }
    let classes = schema.classes.unwrap_or_else(|| labels.iter().max().unwrap() + 1).max(2);
    let data = Dataset::new(feature_cols.len(), classes, features, labels)?;
    if sensitive_col.is_none() {
        return Ok(LoadedDataset::Plain(data));
    }

    let mut distinct: Vec<String> = raw_sensitive.clone();
    distinct.sort_by(|a, b| sort_key(a).partial_cmp(&sort_key(b)).unwrap());
    distinct.dedup();
    let index: BTreeMap<&str, usize> = distinct.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let sensitive = raw_sensitive.iter().map(|v| index[v.as_str()]).collect();
    let data = AttributeDataset::new(data, sensitive, distinct.len())?;
    Ok(LoadedDataset::Attribute {
        data,
        sensitive_values: distinct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema(sensitive: Option<&str>) -> CsvSchema {
        CsvSchema {
            label_column: "label".into(),
            sensitive_column: sensitive.map(String::from),
            feature_count: None,
            classes: None,
        }
    }

    #[test]
    fn reads_exact_values() {
        let text = "a,b,label\n0.1,2.5,1\n-3,1e-3,0\n7,8,1\n";
        let LoadedDataset::Plain(d) = read_csv_dataset(text.as_bytes(), &schema(None)).unwrap() else {
            panic!("expected a plain dataset")
        };
        assert_eq!(d.len(), 3);
        assert_eq!(d.features(0), &[0.1, 2.5]);
        assert_eq!(d.features(1), &[-3.0, 1e-3]);
        assert_eq!(d.labels(), &[1, 0, 1]);
    }

    #[test]
    fn sensitive_column_is_indexed() {
        let mut text = String::from("x,writer,label\n");
        for w in 0..44 {
            text.push_str(&format!("{}.5,w{w},{}\n", w, w % 10));
        }
        let LoadedDataset::Attribute { data, sensitive_values } = read_csv_dataset(text.as_bytes(), &schema(Some("writer"))).unwrap() else {
            panic!("expected an attribute dataset")
        };
        assert_eq!(data.candidate_count(), 44);
        assert_eq!(sensitive_values.len(), 44);
        assert_eq!(data.input_dim(), 45);
        assert_eq!(sensitive_values[data.sensitive(3)], "w3");
    }

    #[test]
    fn numeric_sensitive_values_sort_numerically() {
        let text = "x,t,label\n1,10,0\n2,9,1\n3,10,0\n";
        let LoadedDataset::Attribute { data, sensitive_values } = read_csv_dataset(text.as_bytes(), &schema(Some("t"))).unwrap() else {
            panic!()
        };
        assert_eq!(sensitive_values, vec!["9", "10"]);
        assert_eq!(data.sensitive(0), 1);
    }

    #[test]
    fn errors_carry_row_numbers() {
        let err = |text: &str, s: &CsvSchema| format!("{:#}", read_csv_dataset(text.as_bytes(), s).unwrap_err());
        assert!(err("1,2,3\n4,5,6\n", &schema(None)).contains("missing header"));
        assert!(err("a,label\n1,0\n2\n", &schema(None)).contains("row 3"));
        assert!(err("a,label\n1,0\nx,1\n", &schema(None)).contains("row 3"));
        let bounded = CsvSchema {
            classes: Some(2),
            ..schema(None)
        };
        assert!(err("a,label\n1,0\n2,5\n", &bounded).contains("row 3"));
        assert!(err("a,label\n1,-1\n", &schema(None)).contains("row 2"));
        assert!(err("a,b\n1,0\n", &schema(None)).contains("label"));
        let counted = CsvSchema {
            feature_count: Some(3),
            ..schema(None)
        };
        assert!(err("a,label\n1,0\n", &counted).contains("expected 3"));
    }
}
