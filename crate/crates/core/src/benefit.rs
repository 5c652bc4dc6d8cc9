//! Benefit functions: from classifier outcomes to per-individual benefits.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inequality::BenefitVector;

/// Binary label; only 0 and 1 are valid.
pub type Label = u8;

fn check_label(value: Label, what: &str) -> Result<()> {
    if value > 1 {
        return Err(Error::Domain(format!("{what} must be 0 or 1, got {value}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Outcome {
    TruePositive,
    TrueNegative,
    FalsePositive,
    FalseNegative,
}

impl Outcome {
    pub fn of(y: Label, y_hat: Label) -> Result<Self> {
        check_label(y, "true label")?;
        check_label(y_hat, "predicted label")?;
        Ok(match (y, y_hat) {
            (1, 1) => Outcome::TruePositive,
            (0, 0) => Outcome::TrueNegative,
            (0, 1) => Outcome::FalsePositive,
            _ => Outcome::FalseNegative,
        })
    }
}

/// `y_hat - y + 1`: 0 for a false negative, 1 when correct, 2 for a false positive.
pub fn individual_benefit(y: Label, y_hat: Label) -> Result<f64> {
    check_label(y, "true label")?;
    check_label(y_hat, "predicted label")?;
    Ok(f64::from(y_hat) - f64::from(y) + 1.0)
}

/// Benefit per outcome type; `None` excludes individuals with that outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenefitScheme {
    pub name: String,
    pub tp: Option<f64>,
    pub tn: Option<f64>,
    pub fp: Option<f64>,
    #[serde(rename = "fn")]
    pub fn_: Option<f64>,
}

impl BenefitScheme {
    pub fn new(
        name: &str,
        tp: Option<f64>,
        tn: Option<f64>,
        fp: Option<f64>,
        fn_: Option<f64>,
    ) -> Result<Self> {
        let scheme = Self {
            name: name.to_string(),
            tp,
            tn,
            fp,
            fn_,
        };
        let values: Vec<f64> = [tp, tn, fp, fn_].into_iter().flatten().collect();
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::Domain(format!(
                "scheme `{name}` has benefit {v}; benefits must be nonnegative"
            )));
        }
        if !values.iter().any(|&v| v > 0.0) {
            return Err(Error::Domain(format!(
                "scheme `{name}` needs at least one positive, non-excluded benefit"
            )));
        }
        Ok(scheme)
    }

    pub fn value(&self, outcome: Outcome) -> Option<f64> {
        match outcome {
            Outcome::TruePositive => self.tp,
            Outcome::TrueNegative => self.tn,
            Outcome::FalsePositive => self.fp,
            Outcome::FalseNegative => self.fn_,
        }
    }

    /// Builtin scheme by name, case-insensitive.
    pub fn builtin(name: &str) -> Option<BenefitScheme> {
        builtin_schemes()
            .into_iter()
            .find(|s| s.name.eq_ignore_ascii_case(name))
    }
}

fn fmt_entry(v: Option<f64>) -> String {
    v.map_or_else(|| "x".to_string(), |v| v.to_string())
}

impl fmt::Display for BenefitScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{},{},{},{}",
            self.name,
            fmt_entry(self.tp),
            fmt_entry(self.tn),
            fmt_entry(self.fp),
            fmt_entry(self.fn_)
        )
    }
}

/// Parses either a builtin name or `name:tp,tn,fp,fn` with `x` marking an
/// excluded outcome, e.g. `fpr:x,1,0,x`.
impl FromStr for BenefitScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let Some((name, body)) = s.split_once(':') else {
            return BenefitScheme::builtin(s).ok_or_else(|| {
                let known: Vec<String> = builtin_schemes().into_iter().map(|s| s.name).collect();
                Error::Config(format!("unknown scheme `{s}`; builtins: {}", known.join(", ")))
            });
        };
        let entries: Vec<&str> = body.split(',').map(str::trim).collect();
        if entries.len() != 4 {
            return Err(Error::Config(format!(
                "scheme `{s}` must list four values tp,tn,fp,fn"
            )));
        }
        let parse = |e: &str| -> Result<Option<f64>> {
            if e.eq_ignore_ascii_case("x") {
                Ok(None)
            } else {
                e.parse::<f64>()
                    .map(Some)
                    .map_err(|_| Error::Config(format!("scheme `{s}`: `{e}` is not a number or x")))
            }
        };
        BenefitScheme::new(
            name.trim(),
            parse(entries[0])?,
            parse(entries[1])?,
            parse(entries[2])?,
            parse(entries[3])?,
        )
    }
}

/// The seven builtin notions, in table order.
pub fn builtin_schemes() -> Vec<BenefitScheme> {
    let s = |name: &str, tp, tn, fp, fn_| BenefitScheme {
        name: name.to_string(),
        tp,
        tn,
        fp,
        fn_,
    };
    vec![
        s("accuracy", Some(1.0), Some(1.0), Some(0.0), Some(0.0)),
        s("equal-FPR", None, Some(1.0), Some(0.0), None),
        s("equal-FNR", Some(1.0), None, None, Some(0.0)),
        s("equal-FDR", Some(1.0), None, Some(0.0), None),
        s("equal-FOR", None, Some(1.0), None, Some(0.0)),
        s("statistical-parity", Some(1.0), Some(0.0), Some(1.0), Some(0.0)),
        s("individual", Some(1.0), Some(1.0), Some(2.0), Some(0.0)),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRecord {
    pub id: String,
    pub y_true: Label,
    pub y_pred: Option<Label>,
    pub score: Option<f64>,
    pub attributes: BTreeMap<String, String>,
}

/// Validated collection of prediction records with unique ids.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionSet {
    attribute_names: Vec<String>,
    records: Vec<PredictionRecord>,
}

impl PredictionSet {
    pub fn new(attribute_names: Vec<String>, records: Vec<PredictionRecord>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for r in &records {
            if !seen.insert(r.id.as_str()) {
                return Err(Error::Structural(format!("duplicate id `{}`", r.id)));
            }
            check_label(r.y_true, "y_true")?;
            if let Some(p) = r.y_pred {
                check_label(p, "y_pred")?;
            }
            match r.score {
                Some(s) if !(0.0..=1.0).contains(&s) => {
                    return Err(Error::Domain(format!("score of `{}` is {s}, outside [0,1]", r.id)))
                }
                None if r.y_pred.is_none() => {
                    return Err(Error::Structural(format!(
                        "record `{}` has neither y_pred nor score",
                        r.id
                    )))
                }
                _ => {}
            }
            for a in &attribute_names {
                if !r.attributes.contains_key(a) {
                    return Err(Error::Structural(format!("record `{}` lacks attribute `{a}`", r.id)));
                }
            }
        }
        Ok(Self {
            attribute_names,
            records,
        })
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    pub fn records(&self) -> &[PredictionRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn ids(&self) -> Vec<String> {
        self.records.iter().map(|r| r.id.clone()).collect()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.records.iter().map(|r| r.y_true).collect()
    }

    /// Scores of every record; fails if any record is score-less.
    pub fn scores(&self) -> Result<Vec<f64>> {
        self.records
            .iter()
            .map(|r| {
                r.score
                    .ok_or_else(|| Error::Structural(format!("record `{}` has no score", r.id)))
            })
            .collect()
    }

    /// Predicted labels of every record; fails if any record lacks one.
    pub fn predictions(&self) -> Result<Vec<Label>> {
        self.records
            .iter()
            .map(|r| {
                r.y_pred
                    .ok_or_else(|| Error::Structural(format!("record `{}` has no y_pred", r.id)))
            })
            .collect()
    }

    pub fn has_scores(&self) -> bool {
        self.records.iter().all(|r| r.score.is_some())
    }

    /// Same records with predicted labels replaced.
    pub fn with_predictions(&self, y_pred: &[Label]) -> Result<PredictionSet> {
        if y_pred.len() != self.records.len() {
            return Err(Error::Structural(format!(
                "{} predictions for {} records",
                y_pred.len(),
                self.records.len()
            )));
        }
        let records = self
            .records
            .iter()
            .zip(y_pred)
            .map(|(r, &p)| PredictionRecord {
                y_pred: Some(p),
                ..r.clone()
            })
            .collect();
        PredictionSet::new(self.attribute_names.clone(), records)
    }

    /// Same records with scores replaced, keyed by id. Every record must get one.
    pub fn with_scores(&self, scores: &HashMap<String, f64>) -> Result<PredictionSet> {
        let records = self
            .records
            .iter()
            .map(|r| {
                let s = scores
                    .get(&r.id)
                    .ok_or_else(|| Error::Structural(format!("no score for id `{}`", r.id)))?;
                Ok(PredictionRecord {
                    score: Some(*s),
                    ..r.clone()
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PredictionSet::new(self.attribute_names.clone(), records)
    }
}

/// Benefits of labeled individuals under a scheme; individuals whose outcome
/// the scheme excludes are dropped.
pub fn benefits_from_labels(
    ids: &[String],
    y: &[Label],
    y_hat: &[Label],
    scheme: &BenefitScheme,
) -> Result<BenefitVector> {
    if ids.len() != y.len() || y.len() != y_hat.len() {
        return Err(Error::Structural(format!(
            "{} ids, {} labels, {} predictions",
            ids.len(),
            y.len(),
            y_hat.len()
        )));
    }
    let mut kept_ids = Vec::new();
    let mut values = Vec::new();
    for ((id, &yi), &pi) in ids.iter().zip(y).zip(y_hat) {
        if let Some(v) = scheme.value(Outcome::of(yi, pi)?) {
            kept_ids.push(id.clone());
            values.push(v);
        }
    }
    BenefitVector::new(kept_ids, values).map_err(|e| match e {
        Error::UndefinedIndex(msg) => {
            Error::UndefinedIndex(format!("scheme `{}` yields no usable benefits: {msg}", scheme.name))
        }
        other => other,
    })
}

/// Applies a scheme to every record's `(y_true, y_pred)`.
pub fn apply_scheme(preds: &PredictionSet, scheme: &BenefitScheme) -> Result<BenefitVector> {
    let y_hat = preds.predictions()?;
    benefits_from_labels(&preds.ids(), &preds.labels(), &y_hat, scheme)
}

/// Mean benefit over a set of ids.
pub fn group_mean_benefit(b: &BenefitVector, members: &BTreeSet<String>) -> Result<f64> {
    if members.is_empty() {
        return Err(Error::Structural("empty member set".into()));
    }
    let lookup: HashMap<&str, f64> = b.iter().collect();
    let mut sum = 0.0;
    for id in members {
        sum += lookup
            .get(id.as_str())
            .ok_or_else(|| Error::Structural(format!("`{id}` has no benefit")))?;
    }
    Ok(sum / members.len() as f64)
}

/// Fraction of agreeing labels.
pub fn accuracy(y: &[Label], y_hat: &[Label]) -> Result<f64> {
    if y.len() != y_hat.len() {
        return Err(Error::Structural(format!(
            "{} labels against {} predictions",
            y.len(),
            y_hat.len()
        )));
    }
    if y.is_empty() {
        return Err(Error::Structural("no labels".into()));
    }
    for (&a, &b) in y.iter().zip(y_hat) {
        check_label(a, "true label")?;
        check_label(b, "predicted label")?;
    }
    let agree = y.iter().zip(y_hat).filter(|(a, b)| a == b).count();
    Ok(agree as f64 / y.len() as f64)
}
