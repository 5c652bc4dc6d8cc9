//! Experiment pipelines: threshold sweeps, between-group share tables and
//! unfairness tracking across constrained-training factors.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::benefit::{accuracy, apply_scheme, benefits_from_labels, BenefitScheme, PredictionSet};
use crate::dataio::EncodedDataset;
use crate::error::{Error, Result};
use crate::fairtrain::{fnr_cov, group_fnr, ConstrainedTrainer, ConstraintSpec, FairTrainParams};
use crate::inequality::{decompose, Decomposition};
use crate::model::{labels_from_order, rank_order};
use crate::partition::{key_label, GroupPartition};

/// `0.00, 0.01, ..., 1.00`
pub fn default_tau_grid() -> Vec<f64> {
    (0..=100).map(|k| f64::from(k) / 100.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub tau: f64,
    pub accuracy: f64,
    /// `None` when the scheme leaves no benefit or a zero mean at this tau.
    pub overall: Option<f64>,
    pub between: Option<f64>,
    pub within: Option<f64>,
    pub group_within: BTreeMap<String, f64>,
    pub group_mean: BTreeMap<String, f64>,
}

impl SweepRow {
    pub fn defined(&self) -> bool {
        self.overall.is_some()
    }
}

fn group_maps(d: &Decomposition) -> (BTreeMap<String, f64>, BTreeMap<String, f64>) {
    let within = d.group_terms.iter().map(|t| (key_label(&t.key), t.within)).collect();
    let mean = d.group_terms.iter().map(|t| (key_label(&t.key), t.mean)).collect();
    (within, mean)
}

fn check_covers(partition: &GroupPartition, ids: &[String]) -> Result<()> {
    let population = partition.population();
    if population.len() != ids.len() || ids.iter().any(|id| !population.contains(id)) {
        return Err(Error::Structural(format!(
            "partition covers {} ids, predictions have {}",
            population.len(),
            ids.len()
        )));
    }
    Ok(())
}

/// Ranked-threshold predictions for each `tau`, decomposed over `partition`.
///
/// One tie order (from `tie_seed`) is shared by every grid point, so the
/// accepted set shrinks monotonically as `tau` grows.
pub fn threshold_sweep(
    preds: &PredictionSet,
    partition: &GroupPartition,
    alpha: f64,
    tau_grid: &[f64],
    scheme: &BenefitScheme,
    tie_seed: u64,
) -> Result<Vec<SweepRow>> {
    if let Some(t) = tau_grid.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::Domain(format!("tau {t} is outside [0,1]")));
    }
    let ids = preds.ids();
    check_covers(partition, &ids)?;
    let y = preds.labels();
    let order = rank_order(&preds.scores()?, tie_seed)?;
    let mut rows = Vec::with_capacity(tau_grid.len());
    for &tau in tau_grid {
        let y_hat = labels_from_order(&order, tau);
        let acc = accuracy(&y, &y_hat)?;
        let undefined = SweepRow {
            tau,
            accuracy: acc,
            overall: None,
            between: None,
            within: None,
            group_within: BTreeMap::new(),
            group_mean: BTreeMap::new(),
        };
        let b = match benefits_from_labels(&ids, &y, &y_hat, scheme) {
            Ok(b) => b,
            Err(Error::UndefinedIndex(_)) => {
                rows.push(undefined);
                continue;
            }
            Err(e) => return Err(e),
        };
        let d = decompose(&b, &partition.restrict(b.ids().iter().map(String::as_str)), alpha)?;
        let (group_within, group_mean) = group_maps(&d);
        rows.push(SweepRow {
            overall: Some(d.overall),
            between: Some(d.between),
            within: Some(d.within),
            group_within,
            group_mean,
            ..undefined
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShareRow {
    pub attributes: Vec<String>,
    pub n_groups: usize,
    /// `None` when overall inequality is zero.
    pub between_share: Option<f64>,
}

impl ShareRow {
    pub fn label(&self) -> String {
        if self.attributes.is_empty() {
            "none".to_string()
        } else {
            self.attributes.join("+")
        }
    }
}

/// Between-group share of overall unfairness for each attribute set.
pub fn share_by_attribute_sets(
    preds: &PredictionSet,
    attribute_sets: &[Vec<String>],
    alpha: f64,
    scheme: &BenefitScheme,
) -> Result<Vec<ShareRow>> {
    let b = apply_scheme(preds, scheme)?;
    attribute_sets
        .iter()
        .map(|attrs| {
            let partition = GroupPartition::from_attributes(preds, attrs)?
                .restrict(b.ids().iter().map(String::as_str));
            let share = match decompose(&b, &partition, alpha)?.between_share() {
                Ok(s) => Some(s),
                Err(Error::UndefinedIndex(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(ShareRow {
                attributes: attrs.clone(),
                n_groups: partition.len(),
                between_share: share,
            })
        })
        .collect()
}

/// Every non-empty prefix of `attributes`, preceded by the empty set.
pub fn nested_attribute_sets(attributes: &[String]) -> Vec<Vec<String>> {
    (0..=attributes.len()).map(|k| attributes[..k].to_vec()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintRow {
    pub factor: f64,
    /// Training loss and training covariance of the constrained model.
    pub loss: f64,
    pub cov: f64,
    /// Decomposition of test-set benefits over the binarized groups.
    pub between: f64,
    pub within: f64,
    pub overall: f64,
    pub group_within: BTreeMap<String, f64>,
    pub group_fnr: BTreeMap<String, f64>,
}

/// Trains one constrained model per factor on `train` and decomposes the
/// benefits of its `test` predictions between the two binarized groups.
pub fn constrained_unfairness_track(
    train: &EncodedDataset,
    test: &EncodedDataset,
    spec: &ConstraintSpec,
    alpha: f64,
    scheme: &BenefitScheme,
    params: &FairTrainParams,
) -> Result<Vec<ConstraintRow>> {
    spec.validate()?;
    let z_train = spec.binarize(train)?;
    let z_test = spec.binarize(test)?;
    let (in_name, out_name) = spec.group_names();
    let partition = GroupPartition::from_labels(
        &spec.attribute,
        test.ids.iter().zip(&z_test).map(|(id, &z)| {
            (id.clone(), if z == 1 { in_name.clone() } else { out_name.clone() })
        }),
    )?;
    let trainer = ConstrainedTrainer::new(train, &z_train, *params)?;
    let mut rows = Vec::with_capacity(spec.factors.len());
    let mut warm = None;
    for &factor in &spec.factors {
        let fit = trainer.fit(factor, warm.as_ref()).map_err(|e| match e {
            e @ Error::ConstrainedTrainingFailed { .. } => e,
            other => Error::ConstrainedTrainingFailed {
                factor,
                message: other.to_string(),
            },
        })?;
        let y_hat = fit.model.predictions(test)?;
        let b = benefits_from_labels(&test.ids, &test.labels, &y_hat, scheme)?;
        let d = decompose(&b, &partition.restrict(b.ids().iter().map(String::as_str)), alpha)?;
        let (group_within, _) = group_maps(&d);
        rows.push(ConstraintRow {
            factor,
            loss: fit.loss,
            cov: fnr_cov(&fit.model, train, &z_train)?,
            between: d.between,
            within: d.within,
            overall: d.overall,
            group_within,
            group_fnr: group_fnr(&fit.model, test, spec)?,
        });
        warm = Some(fit.model);
    }
    Ok(rows)
}

/// First index `i` where `between` falls and `overall` rises from row `i` to `i + 1`.
pub fn between_overall_tension(rows: &[ConstraintRow]) -> Option<usize> {
    rows.windows(2)
        .position(|w| w[1].between < w[0].between && w[1].overall > w[0].overall)
}

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Shortest decimal form of `x` at 12 significant digits.
pub fn format_number(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        "0".to_string()
    } else {
        r.to_string()
    }
}

/// Rounds every number in a JSON tree to 12 significant digits.
pub fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if let Some(f) = n.as_f64().filter(|_| n.is_f64()) {
                if let Some(r) = serde_json::Number::from_f64(round_sig(f)) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Serializes `value` to pretty JSON with rounded numbers.
pub fn to_rounded_json<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_json(&mut v);
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

fn opt(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

fn group_columns<'a, I>(maps: I) -> Vec<String>
where
    I: Iterator<Item = &'a BTreeMap<String, f64>>,
{
    let names: BTreeSet<&String> = maps.flat_map(BTreeMap::keys).collect();
    names.into_iter().cloned().collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], w: W) -> Result<()> {
    let groups = group_columns(rows.iter().map(|r| &r.group_within));
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<String> = ["tau", "accuracy", "overall", "between", "within"].map(String::from).to_vec();
    header.extend(groups.iter().map(|g| format!("within_{g}")));
    out.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            format_number(r.tau),
            format_number(r.accuracy),
            opt(r.overall),
            opt(r.between),
            opt(r.within),
        ];
        rec.extend(groups.iter().map(|g| opt(r.group_within.get(g).copied())));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_shares_csv<W: Write>(rows: &[ShareRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["attributes", "n_groups", "between_share"])?;
    for r in rows {
        out.write_record([r.label(), r.n_groups.to_string(), opt(r.between_share)])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_constraint_csv<W: Write>(rows: &[ConstraintRow], w: W) -> Result<()> {
    let groups = group_columns(rows.iter().map(|r| &r.group_within));
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<String> = ["factor", "loss", "cov", "between", "overall"].map(String::from).to_vec();
    header.extend(groups.iter().map(|g| format!("within_{g}")));
    out.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            format_number(r.factor),
            format_number(r.loss),
            format_number(r.cov),
            format_number(r.between),
            format_number(r.overall),
        ];
        rec.extend(groups.iter().map(|g| opt(r.group_within.get(g).copied())));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}
