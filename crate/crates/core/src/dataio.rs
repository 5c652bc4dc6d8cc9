//! Prediction files, tabular datasets, encoding and train/test splits.
//!
//! Prediction CSV layout: `id,y_true,y_pred,score,<attr1>,<attr2>,...`.
//! Either `y_pred` or `score` may be empty on a row, not both.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::benefit::{Label, PredictionRecord, PredictionSet};
use crate::error::{Error, Result};
use crate::inequality::BenefitVector;
use crate::seed::{derive_seed, rng};

const FIXED_COLUMNS: [&str; 4] = ["id", "y_true", "y_pred", "score"];

fn parse_err(row: usize, column: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        row,
        column: column.to_string(),
        message: message.into(),
    }
}

fn parse_label(raw: &str, row: usize, column: &str) -> Result<Label> {
    match raw.trim() {
        "0" => Ok(0),
        "1" => Ok(1),
        other => Err(parse_err(row, column, format!("`{other}` is not a binary label"))),
    }
}

/// Reads a prediction CSV. Rows are numbered from 1 for the first data row.
pub fn read_predictions<R: Read>(reader: R) -> Result<PredictionSet> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let names: Vec<&str> = headers.iter().map(str::trim).collect();
    if names.len() < 4 || names[..4] != FIXED_COLUMNS {
        return Err(parse_err(
            0,
            "header",
            format!("expected header to start with id,y_true,y_pred,score; got `{}`", names.join(",")),
        ));
    }
    let attribute_names: Vec<String> = names[4..].iter().map(|s| s.to_string()).collect();
    let mut seen = BTreeSet::new();
    let mut records = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row_no = i + 1;
        let row = row?;
        let get = |j: usize| row.get(j).unwrap_or("").trim();
        let id = get(0).to_string();
        if id.is_empty() {
            return Err(parse_err(row_no, "id", "empty id"));
        }
        if !seen.insert(id.clone()) {
            return Err(parse_err(row_no, "id", format!("duplicate id `{id}`")));
        }
        let y_true = parse_label(get(1), row_no, "y_true")?;
        let y_pred = match get(2) {
            "" => None,
            raw => Some(parse_label(raw, row_no, "y_pred")?),
        };
        let score = match get(3) {
            "" => None,
            raw => {
                let s: f64 = raw
                    .parse()
                    .map_err(|_| parse_err(row_no, "score", format!("`{raw}` is not a number")))?;
                if !(0.0..=1.0).contains(&s) {
                    return Err(parse_err(row_no, "score", format!("{s} is outside [0,1]")));
                }
                Some(s)
            }
        };
        if y_pred.is_none() && score.is_none() {
            return Err(parse_err(row_no, "y_pred", "both y_pred and score are empty"));
        }
        let attributes = attribute_names
            .iter()
            .enumerate()
            .map(|(j, a)| (a.clone(), get(j + 4).to_string()))
            .collect();
        records.push(PredictionRecord {
            id,
            y_true,
            y_pred,
            score,
            attributes,
        });
    }
    if records.is_empty() {
        return Err(parse_err(1, "id", "no data rows"));
    }
    PredictionSet::new(attribute_names, records)
}

pub fn load_predictions(path: &Path) -> Result<PredictionSet> {
    read_predictions(std::fs::File::open(path)?)
}

/// Writes the canonical form of a prediction file.
pub fn write_predictions<W: Write>(preds: &PredictionSet, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = FIXED_COLUMNS.iter().map(|s| s.to_string()).collect();
    header.extend(preds.attribute_names().iter().cloned());
    w.write_record(&header)?;
    for r in preds.records() {
        let mut row = vec![
            r.id.clone(),
            r.y_true.to_string(),
            r.y_pred.map(|p| p.to_string()).unwrap_or_default(),
            r.score.map(|s| s.to_string()).unwrap_or_default(),
        ];
        row.extend(preds.attribute_names().iter().map(|a| r.attributes[a].clone()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// External score file `id,score`.
pub fn read_scores<R: Read>(reader: R) -> Result<HashMap<String, f64>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(|s| s.trim().to_string()).collect();
    if headers != ["id", "score"] {
        return Err(parse_err(0, "header", format!("expected `id,score`, got `{}`", headers.join(","))));
    }
    let mut scores = HashMap::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let id = row.get(0).unwrap_or("").trim().to_string();
        let raw = row.get(1).unwrap_or("").trim();
        let s: f64 = raw
            .parse()
            .map_err(|_| parse_err(i + 1, "score", format!("`{raw}` is not a number")))?;
        if !(0.0..=1.0).contains(&s) {
            return Err(parse_err(i + 1, "score", format!("{s} is outside [0,1]")));
        }
        if scores.insert(id.clone(), s).is_some() {
            return Err(parse_err(i + 1, "id", format!("duplicate id `{id}`")));
        }
    }
    Ok(scores)
}

pub fn load_scores(path: &Path) -> Result<HashMap<String, f64>> {
    read_scores(std::fs::File::open(path)?)
}

/// Benefit file `id,benefit`.
pub fn read_benefits<R: Read>(reader: R) -> Result<BenefitVector> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(|s| s.trim().to_string()).collect();
    if headers != ["id", "benefit"] {
        return Err(parse_err(0, "header", format!("expected `id,benefit`, got `{}`", headers.join(","))));
    }
    let mut ids = Vec::new();
    let mut values = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let id = row.get(0).unwrap_or("").trim().to_string();
        let raw = row.get(1).unwrap_or("").trim();
        let v: f64 = raw
            .parse()
            .map_err(|_| parse_err(i + 1, "benefit", format!("`{raw}` is not a number")))?;
        if !v.is_finite() || v < 0.0 {
            return Err(parse_err(i + 1, "benefit", format!("benefit {v} is negative or not finite")));
        }
        if !seen.insert(id.clone()) {
            return Err(parse_err(i + 1, "id", format!("duplicate id `{id}`")));
        }
        ids.push(id);
        values.push(v);
    }
    if ids.is_empty() {
        return Err(parse_err(1, "id", "no data rows"));
    }
    BenefitVector::new(ids, values)
}

pub fn load_benefits(path: &Path) -> Result<BenefitVector> {
    read_benefits(std::fs::File::open(path)?)
}

/// Rows whose category in `column` is rare or not listed are dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryFilter {
    pub column: String,
    /// Categories holding less than this share of the rows are removed.
    #[serde(default)]
    pub min_share: Option<f64>,
    /// When present, only these categories are kept.
    #[serde(default)]
    pub keep: Option<Vec<String>>,
}

fn default_fraction() -> f64 {
    0.7
}

fn default_repeats() -> usize {
    10
}

fn default_missing() -> Vec<String> {
    vec![String::new(), "?".to_string(), "NA".to_string()]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetConfig {
    /// Relative paths are resolved against the config file's directory.
    pub path: PathBuf,
    #[serde(default)]
    pub id_column: Option<String>,
    pub label_column: String,
    pub positive_label: String,
    #[serde(default)]
    pub sensitive_columns: Vec<String>,
    #[serde(default)]
    pub categorical_columns: Vec<String>,
    #[serde(default)]
    pub numeric_columns: Vec<String>,
    /// Explicit dropped category per categorical column; default is the
    /// first category in sorted order.
    #[serde(default)]
    pub reference_categories: BTreeMap<String, String>,
    #[serde(default)]
    pub category_filters: Vec<CategoryFilter>,
    #[serde(default = "default_fraction")]
    pub split_fraction: f64,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_missing")]
    pub missing_markers: Vec<String>,
}

impl DatasetConfig {
    pub fn validate(&self) -> Result<()> {
        let features: BTreeSet<&String> =
            self.categorical_columns.iter().chain(&self.numeric_columns).collect();
        if features.contains(&self.label_column) {
            return Err(Error::Config(format!(
                "label column `{}` is also a feature",
                self.label_column
            )));
        }
        if let Some(c) = self.categorical_columns.iter().find(|c| self.numeric_columns.contains(c)) {
            return Err(Error::Config(format!("column `{c}` is both categorical and numeric")));
        }
        if !(self.split_fraction > 0.0 && self.split_fraction < 1.0) {
            return Err(Error::Config(format!(
                "split fraction {} is outside (0,1)",
                self.split_fraction
            )));
        }
        if self.repeats == 0 {
            return Err(Error::Config("repeat count must be at least 1".into()));
        }
        for f in &self.category_filters {
            if let Some(s) = f.min_share {
                if !(0.0..=1.0).contains(&s) {
                    return Err(Error::Config(format!("min_share {s} of `{}` is outside [0,1]", f.column)));
                }
            }
        }
        Ok(())
    }

    /// Reads a JSON config and resolves its data path.
    pub fn load(path: &Path) -> Result<DatasetConfig> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg: DatasetConfig = serde_json::from_str(&text)?;
        if cfg.path.is_relative() {
            if let Some(dir) = path.parent() {
                cfg.path = dir.join(&cfg.path);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Encoded feature matrix with labels, ids and sensitive attributes.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedDataset {
    pub ids: Vec<String>,
    pub feature_names: Vec<String>,
    /// Row-major, one row per individual.
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
    pub sensitive_names: Vec<String>,
    pub sensitive: Vec<BTreeMap<String, String>>,
    /// Positions of numeric (standardizable) columns in each feature row.
    pub numeric_features: Vec<usize>,
}

impl EncodedDataset {
    pub fn new(
        ids: Vec<String>,
        feature_names: Vec<String>,
        features: Vec<Vec<f64>>,
        labels: Vec<Label>,
        sensitive_names: Vec<String>,
        sensitive: Vec<BTreeMap<String, String>>,
        numeric_features: Vec<usize>,
    ) -> Result<Self> {
        let n = ids.len();
        if features.len() != n || labels.len() != n || sensitive.len() != n {
            return Err(Error::Structural(format!(
                "{n} ids, {} feature rows, {} labels, {} attribute rows",
                features.len(),
                labels.len(),
                sensitive.len()
            )));
        }
        if let Some(row) = features.iter().position(|r| r.len() != feature_names.len()) {
            return Err(Error::Structural(format!(
                "row {row} has {} features, expected {}",
                features[row].len(),
                feature_names.len()
            )));
        }
        if features.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Domain("feature matrix has non-finite values".into()));
        }
        if let Some(&l) = labels.iter().find(|&&l| l > 1) {
            return Err(Error::Domain(format!("label {l} is not binary")));
        }
        Ok(Self {
            ids,
            feature_names,
            features,
            labels,
            sensitive_names,
            sensitive,
            numeric_features,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    /// Rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> EncodedDataset {
        EncodedDataset {
            ids: indices.iter().map(|&i| self.ids[i].clone()).collect(),
            feature_names: self.feature_names.clone(),
            features: indices.iter().map(|&i| self.features[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            sensitive_names: self.sensitive_names.clone(),
            sensitive: indices.iter().map(|&i| self.sensitive[i].clone()).collect(),
            numeric_features: self.numeric_features.clone(),
        }
    }

    /// Prediction records carrying the given scores and the labels
    /// `score >= 0.5`.
    pub fn to_predictions(&self, scores: &[f64]) -> Result<PredictionSet> {
        if scores.len() != self.len() {
            return Err(Error::Structural(format!(
                "{} scores for {} rows",
                scores.len(),
                self.len()
            )));
        }
        let records = (0..self.len())
            .map(|i| PredictionRecord {
                id: self.ids[i].clone(),
                y_true: self.labels[i],
                y_pred: Some(u8::from(scores[i] >= 0.5)),
                score: Some(scores[i]),
                attributes: self.sensitive[i].clone(),
            })
            .collect();
        PredictionSet::new(self.sensitive_names.clone(), records)
    }
}

/// Row accounting from [`load_dataset`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LoadReport {
    pub rows_read: usize,
    pub dropped_missing: usize,
    pub dropped_filtered: usize,
    pub rows: usize,
    pub features: usize,
}

/// Loads, filters and one-hot encodes a dataset. Numeric columns are left
/// unscaled; fit a [`Standardizer`] on the training split.
pub fn load_dataset(cfg: &DatasetConfig) -> Result<(EncodedDataset, LoadReport)> {
    cfg.validate()?;
    let file = std::fs::File::open(&cfg.path)
        .map_err(|e| Error::Config(format!("cannot open `{}`: {e}", cfg.path.display())))?;
    read_dataset(cfg, file)
}

pub fn read_dataset<R: Read>(cfg: &DatasetConfig, reader: R) -> Result<(EncodedDataset, LoadReport)> {
    cfg.validate()?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Config(format!("unknown column `{name}`")))
    };
    let label_col = col(&cfg.label_column)?;
    let id_col = cfg.id_column.as_deref().map(col).transpose()?;
    let sensitive_cols = cfg.sensitive_columns.iter().map(|c| col(c)).collect::<Result<Vec<_>>>()?;
    let categorical_cols = cfg.categorical_columns.iter().map(|c| col(c)).collect::<Result<Vec<_>>>()?;
    let numeric_cols = cfg.numeric_columns.iter().map(|c| col(c)).collect::<Result<Vec<_>>>()?;
    for f in &cfg.category_filters {
        col(&f.column)?;
    }
    let mut used: BTreeSet<usize> = BTreeSet::from([label_col]);
    used.extend(id_col);
    used.extend(&sensitive_cols);
    used.extend(&categorical_cols);
    used.extend(&numeric_cols);

    let mut report = LoadReport::default();
    let mut rows: Vec<Vec<String>> = Vec::new();
    for record in rdr.records() {
        let record = record?;
        report.rows_read += 1;
        let row: Vec<String> = record.iter().map(str::to_string).collect();
        if used
            .iter()
            .any(|&j| row.get(j).is_none_or(|v| cfg.missing_markers.iter().any(|m| m == v)))
        {
            report.dropped_missing += 1;
            continue;
        }
        rows.push(row);
    }

    for f in &cfg.category_filters {
        let j = col(&f.column)?;
        let before = rows.len();
        if let Some(keep) = &f.keep {
            rows.retain(|r| keep.contains(&r[j]));
        }
        if let Some(min_share) = f.min_share {
            let mut counts: HashMap<&str, usize> = HashMap::new();
            for r in &rows {
                *counts.entry(r[j].as_str()).or_default() += 1;
            }
            let total = rows.len() as f64;
            let rare: BTreeSet<String> = counts
                .into_iter()
                .filter(|&(_, c)| (c as f64) / total < min_share)
                .map(|(k, _)| k.to_string())
                .collect();
            rows.retain(|r| !rare.contains(&r[j]));
        }
        report.dropped_filtered += before - rows.len();
    }
    if rows.is_empty() {
        return Err(Error::Config("no rows left after filtering".into()));
    }

    let mut feature_names = Vec::new();
    let mut numeric_features = Vec::new();
    let mut encoders: Vec<(usize, Vec<String>)> = Vec::new();
    for (name, &j) in cfg.categorical_columns.iter().zip(&categorical_cols) {
        let categories: BTreeSet<&str> = rows.iter().map(|r| r[j].as_str()).collect();
        let reference = match cfg.reference_categories.get(name) {
            Some(r) if categories.contains(r.as_str()) => r.clone(),
            Some(r) => {
                return Err(Error::Config(format!(
                    "reference category `{r}` of `{name}` does not occur"
                )))
            }
            None => categories.iter().next().map(|s| s.to_string()).unwrap_or_default(),
        };
        let kept: Vec<String> = categories
            .into_iter()
            .filter(|c| *c != reference)
            .map(str::to_string)
            .collect();
        feature_names.extend(kept.iter().map(|c| format!("{name}={c}")));
        encoders.push((j, kept));
    }
    for name in &cfg.numeric_columns {
        numeric_features.push(feature_names.len());
        feature_names.push(name.clone());
    }

    let mut ids = Vec::with_capacity(rows.len());
    let mut features = Vec::with_capacity(rows.len());
    let mut labels = Vec::with_capacity(rows.len());
    let mut sensitive = Vec::with_capacity(rows.len());
    let mut seen_ids = BTreeSet::new();
    for (i, r) in rows.iter().enumerate() {
        let id = match id_col {
            Some(j) => r[j].clone(),
            None => i.to_string(),
        };
        if !seen_ids.insert(id.clone()) {
            return Err(parse_err(i + 1, cfg.id_column.as_deref().unwrap_or("id"), format!("duplicate id `{id}`")));
        }
        let mut x = Vec::with_capacity(feature_names.len());
        for (j, kept) in &encoders {
            x.extend(kept.iter().map(|c| if &r[*j] == c { 1.0 } else { 0.0 }));
        }
        for (name, &j) in cfg.numeric_columns.iter().zip(&numeric_cols) {
            let v: f64 = r[j]
                .parse()
                .map_err(|_| parse_err(i + 1, name, format!("`{}` is not a number", r[j])))?;
            x.push(v);
        }
        ids.push(id);
        features.push(x);
        labels.push(u8::from(r[label_col] == cfg.positive_label));
        sensitive.push(
            cfg.sensitive_columns
                .iter()
                .zip(&sensitive_cols)
                .map(|(name, &j)| (name.clone(), r[j].clone()))
                .collect(),
        );
    }
    report.rows = ids.len();
    report.features = feature_names.len();
    let ds = EncodedDataset::new(
        ids,
        feature_names,
        features,
        labels,
        cfg.sensitive_columns.clone(),
        sensitive,
        numeric_features,
    )?;
    Ok((ds, report))
}

/// Row indices `(train, test)`: a seeded shuffle, first `floor(n * fraction)`
/// rows to train. Each part is returned in ascending order.
pub fn split_indices(n: usize, fraction: f64, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut rng(seed));
    let n_train = ((n as f64) * fraction).floor() as usize;
    let mut train = idx[..n_train].to_vec();
    let mut test = idx[n_train..].to_vec();
    train.sort_unstable();
    test.sort_unstable();
    (train, test)
}

/// Train/test split for repeat `repeat_index`, determined by the config seed.
pub fn split(
    ds: &EncodedDataset,
    cfg: &DatasetConfig,
    repeat_index: usize,
) -> Result<(EncodedDataset, EncodedDataset)> {
    if repeat_index >= cfg.repeats {
        return Err(Error::Config(format!(
            "repeat {repeat_index} out of range for {} repeats",
            cfg.repeats
        )));
    }
    Ok(split_with_seed(ds, cfg.split_fraction, derive_seed(cfg.seed, repeat_index as u64)))
}

/// Same machinery for nested (train/validation) splits.
pub fn split_with_seed(ds: &EncodedDataset, fraction: f64, seed: u64) -> (EncodedDataset, EncodedDataset) {
    let (train, test) = split_indices(ds.len(), fraction, seed);
    (ds.subset(&train), ds.subset(&test))
}

/// Per-column mean/standard deviation of the numeric features, fitted on one
/// split and applied to any other.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    columns: Vec<(usize, f64, f64)>,
}

impl Standardizer {
    pub fn fit(train: &EncodedDataset) -> Standardizer {
        let n = train.len().max(1) as f64;
        let columns = train
            .numeric_features
            .iter()
            .map(|&j| {
                let mean = train.features.iter().map(|r| r[j]).sum::<f64>() / n;
                let var = train.features.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n;
                let sd = var.sqrt();
                (j, mean, if sd > 0.0 { sd } else { 1.0 })
            })
            .collect();
        Standardizer { columns }
    }

    pub fn apply(&self, ds: &EncodedDataset) -> EncodedDataset {
        let mut out = ds.clone();
        for row in &mut out.features {
            for &(j, mean, sd) in &self.columns {
                row[j] = (row[j] - mean) / sd;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1_CSV: &str = "id,y_true,y_pred,score,group
i1,1,1,,g1
i2,0,0,,g1
i3,0,0,,g2
i4,1,0,,g2
i5,0,1,,g2
i6,0,1,,g2
i7,1,1,,g3
i8,0,0,,g3
i9,1,1,,g3
i10,1,0,,g3
";

    #[test]
    fn loads_fig1_table() {
        let preds = read_predictions(FIG1_CSV.as_bytes()).unwrap();
        assert_eq!(preds.len(), 10);
        assert_eq!(preds.attribute_names(), &["group"]);
        let groups: BTreeSet<&str> =
            preds.records().iter().map(|r| r.attributes["group"].as_str()).collect();
        assert_eq!(groups, BTreeSet::from(["g1", "g2", "g3"]));
    }

    #[test]
    fn canonical_file_round_trips() {
        let preds = read_predictions(FIG1_CSV.as_bytes()).unwrap();
        let mut out = Vec::new();
        write_predictions(&preds, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), FIG1_CSV);
        let scored = "id,y_true,y_pred,score,race,sex\na,1,,0.25,w,f\nb,0,1,0.9,b,m\n";
        let preds = read_predictions(scored.as_bytes()).unwrap();
        let mut out = Vec::new();
        write_predictions(&preds, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), scored);
    }

    #[test]
    fn score_only_rows() {
        let preds = read_predictions("id,y_true,y_pred,score\na,1,,0.3\nb,0,,0.7\n".as_bytes()).unwrap();
        assert!(preds.records().iter().all(|r| r.y_pred.is_none() && r.score.is_some()));
        assert!(preds.has_scores());
    }

    fn parse_error(text: &str) -> (usize, String) {
        match read_predictions(text.as_bytes()).unwrap_err() {
            Error::Parse { row, column, .. } => (row, column),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn prediction_parse_errors() {
        assert_eq!(parse_error("id,y_true,y_pred,score\n").0, 1);
        assert_eq!(parse_error("id,label\na,1\n"), (0, "header".to_string()));
        assert_eq!(parse_error("id,y_true,y_pred,score\na,1,1,\nb,2,1,\n"), (2, "y_true".to_string()));
        assert_eq!(parse_error("id,y_true,y_pred,score\na,1,1,1.5\n"), (1, "score".to_string()));
        assert_eq!(parse_error("id,y_true,y_pred,score\na,1,1,\na,0,1,\n"), (2, "id".to_string()));
        assert_eq!(parse_error("id,y_true,y_pred,score\na,1,,\n"), (1, "y_pred".to_string()));
    }

    #[test]
    fn benefit_file() {
        let b = read_benefits("id,benefit\na,1\nb,2\n".as_bytes()).unwrap();
        assert_eq!(b.values(), &[1.0, 2.0]);
        match read_benefits("id,benefit\na,1\nb,-2\n".as_bytes()).unwrap_err() {
            Error::Parse { row, .. } => assert_eq!(row, 2),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn score_file() {
        let s = read_scores("id,score\na,0.1\nb,0.9\n".as_bytes()).unwrap();
        assert_eq!(s["b"], 0.9);
        assert!(read_scores("id,score\na,2\n".as_bytes()).is_err());
    }

    fn toy_config() -> DatasetConfig {
        serde_json::from_str(
            r#"{"path": "toy.csv", "label_column": "y", "positive_label": "yes",
                "sensitive_columns": ["race", "sex"],
                "categorical_columns": ["sex", "job"], "numeric_columns": ["age"]}"#,
        )
        .unwrap()
    }

    const TOY: &str = "age,sex,race,job,y
30,f,w,a,yes
40,m,b,b,no
50,f,w,c,yes
";

    #[test]
    fn toy_dataset_without_filters() {
        let (ds, report) = read_dataset(&toy_config(), TOY.as_bytes()).unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(report.rows, 3);
        assert_eq!(ds.feature_names, vec!["sex=m", "job=b", "job=c", "age"]);
        assert_eq!(ds.features[1], vec![1.0, 1.0, 0.0, 40.0]);
        assert_eq!(ds.labels, vec![1, 0, 1]);
        assert_eq!(ds.numeric_features, vec![3]);
        assert_eq!(ds.sensitive[1]["race"], "b");
        assert_eq!(ds.sensitive_names, vec!["race", "sex"]);
    }

    #[test]
    fn encoding_is_deterministic() {
        let a = read_dataset(&toy_config(), TOY.as_bytes()).unwrap();
        let b = read_dataset(&toy_config(), TOY.as_bytes()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn missing_values_and_share_filter() {
        let mut text = String::from("age,sex,race,job,y\n");
        for i in 0..200 {
            let race = if i < 150 { "white" } else if i < 199 { "black" } else { "other" };
            text.push_str(&format!("{},f,{race},a,yes\n", 20 + i % 40));
        }
        text.push_str("?,m,white,a,no\n");
        let mut cfg = toy_config();
        cfg.category_filters.push(CategoryFilter {
            column: "race".into(),
            min_share: Some(0.01),
            keep: None,
        });
        let (ds, report) = read_dataset(&cfg, text.as_bytes()).unwrap();
        assert_eq!(report.dropped_missing, 1);
        assert_eq!(report.dropped_filtered, 1);
        let races: BTreeSet<&str> = ds.sensitive.iter().map(|s| s["race"].as_str()).collect();
        assert_eq!(races, BTreeSet::from(["black", "white"]));
    }

    #[test]
    fn keep_filter_and_config_errors() {
        let mut cfg = toy_config();
        cfg.category_filters.push(CategoryFilter {
            column: "race".into(),
            min_share: None,
            keep: Some(vec!["nobody".into()]),
        });
        assert!(matches!(read_dataset(&cfg, TOY.as_bytes()), Err(Error::Config(_))));
        let mut cfg = toy_config();
        cfg.numeric_columns.push("height".into());
        assert!(matches!(read_dataset(&cfg, TOY.as_bytes()), Err(Error::Config(_))));
        let mut cfg = toy_config();
        cfg.categorical_columns.push("y".into());
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        let mut cfg = toy_config();
        cfg.split_fraction = 1.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn compas_shaped_config_keeps_sensitive_columns() {
        let cfg: DatasetConfig = serde_json::from_str(
            r#"{"path": "compas.csv", "label_column": "two_year_recid", "positive_label": "0",
                "sensitive_columns": ["sex", "race"],
                "categorical_columns": ["age_cat", "race", "sex", "c_charge_degree"],
                "numeric_columns": ["priors_count"],
                "category_filters": [{"column": "race", "keep": ["African-American", "Hispanic", "Caucasian"]}]}"#,
        )
        .unwrap();
        let text = "age_cat,race,sex,priors_count,c_charge_degree,two_year_recid
25 - 45,African-American,Male,3,F,1
Less than 25,Caucasian,Female,0,M,0
Greater than 45,Hispanic,Male,1,F,0
25 - 45,Asian,Male,0,F,0
";
        let (ds, _) = read_dataset(&cfg, text.as_bytes()).unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.sensitive_names, vec!["sex", "race"]);
        assert_eq!(ds.labels, vec![0, 1, 1]);
    }

    fn sized(n: usize) -> EncodedDataset {
        EncodedDataset::new(
            (0..n).map(|i| i.to_string()).collect(),
            vec!["x".into()],
            (0..n).map(|i| vec![i as f64]).collect(),
            (0..n).map(|i| (i % 2) as u8).collect(),
            vec![],
            vec![BTreeMap::new(); n],
            vec![0],
        )
        .unwrap()
    }

    #[test]
    fn split_sizes_and_determinism() {
        let mut cfg = toy_config();
        cfg.seed = 11;
        let ds = sized(10);
        let (train, test) = split(&ds, &cfg, 0).unwrap();
        assert_eq!((train.len(), test.len()), (7, 3));
        assert_eq!(split(&ds, &cfg, 0).unwrap(), (train, test));
        let ds = sized(40);
        assert_ne!(split(&ds, &cfg, 0).unwrap().0.ids, split(&ds, &cfg, 1).unwrap().0.ids);
        assert!(split(&ds, &cfg, 10).is_err());
    }

    #[test]
    fn standardizer_uses_training_statistics() {
        let ds = sized(10);
        let (train, test) = split_with_seed(&ds, 0.7, 3);
        let st = Standardizer::fit(&train);
        let train_s = st.apply(&train);
        let mean: f64 = train_s.features.iter().map(|r| r[0]).sum::<f64>() / train_s.len() as f64;
        let var: f64 = train_s.features.iter().map(|r| r[0] * r[0]).sum::<f64>() / train_s.len() as f64;
        assert!(mean.abs() < 1e-12);
        assert!((var - 1.0).abs() < 1e-12);
        // test rows are transformed with the training statistics, not their own
        let test_s = st.apply(&test);
        let raw_mean = train.features.iter().map(|r| r[0]).sum::<f64>() / train.len() as f64;
        let raw_var = train.features.iter().map(|r| (r[0] - raw_mean).powi(2)).sum::<f64>() / train.len() as f64;
        assert!((test_s.features[0][0] - (test.features[0][0] - raw_mean) / raw_var.sqrt()).abs() < 1e-12);
    }
}
