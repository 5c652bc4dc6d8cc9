//! Logistic regression under a false-negative-rate covariance constraint.
//!
//! The constraint bounds the covariance, over ground-truth positives, between
//! a binary sensitive attribute `z` and the signed distance of misclassified
//! positives from the decision boundary, `d = min(0, w.x + b)`. A factor grid
//! in `[0, 1]` scales the unconstrained model's covariance: factor 1 leaves the
//! model unconstrained, factor 0 asks for zero covariance.
//!
//! The bound is enforced with a quadratic penalty
//! `loss + lambda * max(0, |cov| - bound)^2`, escalating `lambda` by 10x from 1
//! until `|cov| <= bound + slack_tol`. Each penalized problem is solved by
//! damped Newton steps on the piecewise-quadratic objective.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::benefit::Label;
use crate::dataio::EncodedDataset;
use crate::error::{Error, Result};
use crate::model::{
    dot, fit_logistic, logistic_hessian, logistic_loss, logistic_objective, LinearModel, LogisticParams,
};

/// Which sensitive attribute to constrain and how to binarize it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSpec {
    pub attribute: String,
    /// Category mapped to `z = 1`; every other category maps to `z = 0`.
    pub reference: String,
    /// Descending factors in `[0, 1]`.
    pub factors: Vec<f64>,
}

impl ConstraintSpec {
    pub fn new(attribute: &str, reference: &str, factors: Vec<f64>) -> Result<Self> {
        let spec = Self {
            attribute: attribute.to_string(),
            reference: reference.to_string(),
            factors,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.factors.is_empty() {
            return Err(Error::Config("empty factor grid".into()));
        }
        if let Some(f) = self.factors.iter().find(|f| !(0.0..=1.0).contains(*f)) {
            return Err(Error::Config(format!("factor {f} is outside [0,1]")));
        }
        if self.factors.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::Config("factor grid must be descending".into()));
        }
        Ok(())
    }

    /// `z_i = 1` iff row `i` carries the reference category.
    pub fn binarize(&self, data: &EncodedDataset) -> Result<Vec<Label>> {
        data.sensitive
            .iter()
            .zip(&data.ids)
            .map(|(attrs, id)| {
                attrs
                    .get(&self.attribute)
                    .map(|v| u8::from(*v == self.reference))
                    .ok_or_else(|| {
                        Error::Config(format!("row `{id}` has no attribute `{}`", self.attribute))
                    })
            })
            .collect()
    }

    /// Names of the two binarized groups, `(z = 1, z = 0)`.
    pub fn group_names(&self) -> (String, String) {
        (self.reference.clone(), format!("non-{}", self.reference))
    }
}

/// Factor grid from `start:stop:step`, e.g. `1.0:0.0:0.05`.
pub fn parse_factor_grid(text: &str) -> Result<Vec<f64>> {
    let grid = parse_grid(text)?;
    ConstraintSpec::new("", "", grid.clone())?;
    Ok(grid)
}

/// Parses `start:stop:step` (inclusive) or a single number into a grid.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    let num = |s: &str| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|_| Error::Config(format!("`{s}` in grid `{text}` is not a number")))
    };
    match parts.as_slice() {
        [single] => Ok(vec![num(single)?]),
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?.abs());
            if step == 0.0 {
                return Err(Error::Config("grid step must be nonzero".into()));
            }
            let count = ((start - stop).abs() / step + 1e-9).floor() as usize;
            let dir = if stop >= start { 1.0 } else { -1.0 };
            let mut grid: Vec<f64> = (0..=count)
                .map(|k| round_grid(start + dir * step * k as f64))
                .collect();
            // land exactly on the endpoint when the step divides the range
            if let Some(last) = grid.last_mut() {
                if (*last - stop).abs() < 1e-9 {
                    *last = stop;
                }
            }
            Ok(grid)
        }
        _ => Err(Error::Config(format!("grid `{text}` must be `start:stop:step`"))),
    }
}

fn round_grid(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// Population covariance of two equally long vectors.
pub fn covariance(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / n
}

/// Positive rows and their centered `z`, shared by every covariance evaluation.
struct Cohort {
    rows: Vec<usize>,
    z_centered: Vec<f64>,
}

impl Cohort {
    fn new(data: &EncodedDataset, z: &[Label]) -> Result<Self> {
        if z.len() != data.len() {
            return Err(Error::Structural(format!(
                "{} sensitive values for {} rows",
                z.len(),
                data.len()
            )));
        }
        if let Some(&v) = z.iter().find(|&&v| v > 1) {
            return Err(Error::Domain(format!("sensitive value {v} is not binary")));
        }
        let rows: Vec<usize> = (0..data.len()).filter(|&i| data.labels[i] == 1).collect();
        if rows.is_empty() {
            return Err(Error::DegenerateData("no ground-truth positive rows".into()));
        }
        let mean = rows.iter().map(|&i| f64::from(z[i])).sum::<f64>() / rows.len() as f64;
        let z_centered = rows.iter().map(|&i| f64::from(z[i]) - mean).collect();
        Ok(Self { rows, z_centered })
    }

    /// Covariance and its (piecewise constant) gradient in packed parameters.
    fn cov_and_grad(&self, data: &EncodedDataset, params: &[f64]) -> (f64, Vec<f64>) {
        let d = params.len() - 1;
        let (w, b) = (&params[..d], params[d]);
        let n = self.rows.len() as f64;
        let mut cov = 0.0;
        let mut grad = vec![0.0; d + 1];
        for (&i, &zc) in self.rows.iter().zip(&self.z_centered) {
            let x = &data.features[i];
            let r = dot(w, x) + b;
            if r < 0.0 {
                cov += zc * r;
                for (g, xi) in grad.iter_mut().zip(x) {
                    *g += zc * xi;
                }
                grad[d] += zc;
            }
        }
        for g in &mut grad {
            *g /= n;
        }
        (cov / n, grad)
    }

    fn cov(&self, data: &EncodedDataset, params: &[f64]) -> f64 {
        let d = params.len() - 1;
        let (w, b) = (&params[..d], params[d]);
        let sum: f64 = self
            .rows
            .iter()
            .zip(&self.z_centered)
            .map(|(&i, &zc)| zc * (dot(w, &data.features[i]) + b).min(0.0))
            .sum();
        sum / self.rows.len() as f64
    }
}

/// Covariance between `z` and `min(0, w.x + b)` over rows with `y = 1`.
pub fn fnr_cov(m: &LinearModel, data: &EncodedDataset, z: &[Label]) -> Result<f64> {
    if m.weights.len() != data.n_features() {
        return Err(Error::Structural(format!(
            "model has {} weights, data has {} features",
            m.weights.len(),
            data.n_features()
        )));
    }
    let positives: Vec<usize> = (0..data.len()).filter(|&i| data.labels[i] == 1).collect();
    if z.len() != data.len() {
        return Err(Error::Structural(format!("{} sensitive values for {} rows", z.len(), data.len())));
    }
    if positives.is_empty() {
        return Err(Error::DegenerateData("no ground-truth positive rows".into()));
    }
    let zs: Vec<f64> = positives.iter().map(|&i| f64::from(z[i])).collect();
    let ds: Vec<f64> = positives
        .iter()
        .map(|&i| m.response(&data.features[i]).map(|r| r.min(0.0)))
        .collect::<Result<_>>()?;
    Ok(covariance(&zs, &ds))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FairTrainParams {
    pub logistic: LogisticParams,
    /// Absolute slack on the covariance bound.
    pub slack_tol: f64,
    pub lambda_start: f64,
    pub lambda_growth: f64,
    pub lambda_max: f64,
    pub newton_max_iters: usize,
}

impl Default for FairTrainParams {
    fn default() -> Self {
        Self {
            logistic: LogisticParams::default(),
            slack_tol: 1e-4,
            lambda_start: 1.0,
            lambda_growth: 10.0,
            lambda_max: 1e12,
            newton_max_iters: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstrainedFit {
    pub factor: f64,
    pub model: LinearModel,
    /// `factor * |cov(unconstrained)|`
    pub bound: f64,
    pub cov: f64,
    pub loss: f64,
    /// Final penalty weight, 0 when the bound did not bind.
    pub lambda: f64,
    /// Whether the intercept-only repair step was needed.
    pub repaired: bool,
}

struct Problem<'a> {
    data: &'a EncodedDataset,
    cohort: Cohort,
    l2: f64,
}

impl Problem<'_> {
    fn penalized(&self, params: &[f64], bound: f64, lambda: f64) -> f64 {
        let excess = (self.cohort.cov(self.data, params).abs() - bound).max(0.0);
        logistic_loss(self.data, params, self.l2) + lambda * excess * excess
    }

    /// Damped Newton on `loss + lambda * max(0, |cov| - bound)^2`.
    fn minimize(&self, start: &[f64], bound: f64, lambda: f64, max_iters: usize) -> Vec<f64> {
        let dim = start.len();
        let mut theta = start.to_vec();
        let mut value = self.penalized(&theta, bound, lambda);
        for _ in 0..max_iters {
            let (_, mut grad) = logistic_objective(self.data, &theta, self.l2);
            let mut hess = logistic_hessian(self.data, &theta, self.l2);
            let (cov, cov_grad) = self.cohort.cov_and_grad(self.data, &theta);
            let excess = cov.abs() - bound;
            if excess > 0.0 {
                let sign = cov.signum();
                for (g, cg) in grad.iter_mut().zip(&cov_grad) {
                    *g += 2.0 * lambda * excess * sign * cg;
                }
                for i in 0..dim {
                    for j in 0..dim {
                        hess[i * dim + j] += 2.0 * lambda * cov_grad[i] * cov_grad[j];
                    }
                }
            }
            let gnorm = dot(&grad, &grad).sqrt();
            if gnorm < 1e-10 {
                break;
            }
            let newton = newton_direction(&hess, &grad, dim);
            let mut improved = false;
            for direction in [newton, grad.iter().map(|g| -g).collect()] {
                let slope = dot(&direction, &grad);
                if slope >= 0.0 {
                    continue;
                }
                let mut step = 1.0;
                while step > 1e-14 {
                    let candidate: Vec<f64> =
                        theta.iter().zip(&direction).map(|(t, p)| t + step * p).collect();
                    let cand_value = self.penalized(&candidate, bound, lambda);
                    if cand_value <= value + 1e-4 * step * slope {
                        theta = candidate;
                        improved = value - cand_value > 1e-15 * (1.0 + value.abs());
                        value = cand_value;
                        break;
                    }
                    step *= 0.5;
                }
                if improved {
                    break;
                }
            }
            if !improved {
                break;
            }
        }
        theta
    }
}

fn newton_direction(hess: &[f64], grad: &[f64], dim: usize) -> Vec<f64> {
    let h = DMatrix::from_row_slice(dim, dim, hess) + DMatrix::identity(dim, dim) * 1e-12;
    let g = DVector::from_column_slice(grad);
    match h.cholesky() {
        Some(chol) => (-chol.solve(&g)).iter().copied().collect(),
        None => grad.iter().map(|v| -v).collect(),
    }
}

fn validate_factor(factor: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&factor) {
        return Err(Error::Domain(format!("factor {factor} is outside [0,1]")));
    }
    Ok(())
}

/// Solver state shared across a sweep: the unconstrained model and its covariance.
pub struct ConstrainedTrainer<'a> {
    problem: Problem<'a>,
    params: FairTrainParams,
    unconstrained: LinearModel,
    unconstrained_cov: f64,
}

impl<'a> ConstrainedTrainer<'a> {
    pub fn new(data: &'a EncodedDataset, z: &[Label], params: FairTrainParams) -> Result<Self> {
        let cohort = Cohort::new(data, z)?;
        let unconstrained = fit_logistic(data, &params.logistic)?.model;
        let unconstrained_cov = cohort.cov(data, &unconstrained.params());
        Ok(Self {
            problem: Problem {
                data,
                cohort,
                l2: params.logistic.l2,
            },
            params,
            unconstrained,
            unconstrained_cov,
        })
    }

    pub fn unconstrained(&self) -> &LinearModel {
        &self.unconstrained
    }

    pub fn unconstrained_cov(&self) -> f64 {
        self.unconstrained_cov
    }

    /// Trains at one factor, starting the penalty search from `warm_start`
    /// (the unconstrained model when `None`).
    pub fn fit(&self, factor: f64, warm_start: Option<&LinearModel>) -> Result<ConstrainedFit> {
        validate_factor(factor)?;
        let data = self.problem.data;
        let bound = factor * self.unconstrained_cov.abs();
        let slack = self.params.slack_tol;
        let feasible = |params: &[f64]| self.problem.cohort.cov(data, params).abs() <= bound + slack;
        let finish = |params: Vec<f64>, lambda: f64, repaired: bool| -> Result<ConstrainedFit> {
            if params.iter().any(|v| !v.is_finite()) {
                return Err(Error::ConstrainedTrainingFailed {
                    factor,
                    message: "non-finite parameters".into(),
                });
            }
            let cov = self.problem.cohort.cov(data, &params);
            let loss = logistic_loss(data, &params, self.problem.l2);
            Ok(ConstrainedFit {
                factor,
                model: LinearModel::from_params(&params),
                bound,
                cov,
                loss,
                lambda,
                repaired,
            })
        };

        let unconstrained = self.unconstrained.params();
        if feasible(&unconstrained) {
            return finish(unconstrained, 0.0, false);
        }
        let mut theta = warm_start.map_or(unconstrained, LinearModel::params);
        let mut lambda = self.params.lambda_start;
        while lambda <= self.params.lambda_max {
            theta = self.problem.minimize(&theta, bound, lambda, self.params.newton_max_iters);
            if feasible(&theta) {
                return finish(theta, lambda, false);
            }
            lambda *= self.params.lambda_growth;
        }
        // Every zero-weight model has a constant distance and so zero
        // covariance; pull back toward the intercept-only model.
        let positives = data.labels.iter().filter(|&&y| y == 1).count() as f64;
        let rate = positives / data.len() as f64;
        let mut anchor = vec![0.0; theta.len()];
        *anchor.last_mut().expect("intercept") = (rate / (1.0 - rate)).ln();
        if !feasible(&anchor) {
            return Err(Error::ConstrainedTrainingFailed {
                factor,
                message: format!(
                    "covariance {} of the intercept-only model exceeds {}",
                    self.problem.cohort.cov(data, &anchor),
                    bound + slack
                ),
            });
        }
        let point = |t: f64| -> Vec<f64> {
            anchor.iter().zip(&theta).map(|(a, b)| a + t * (b - a)).collect()
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if feasible(&point(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        finish(point(lo), lambda / self.params.lambda_growth, true)
    }
}

/// One constrained model at `factor`.
pub fn train_constrained(
    data: &EncodedDataset,
    spec: &ConstraintSpec,
    factor: f64,
    params: &FairTrainParams,
) -> Result<ConstrainedFit> {
    validate_factor(factor)?;
    let z = spec.binarize(data)?;
    ConstrainedTrainer::new(data, &z, *params)?.fit(factor, None)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry {
    pub fit: ConstrainedFit,
    /// False negative rate on `data` per binarized group.
    pub group_fnr: BTreeMap<String, f64>,
}

/// Per-group false negative rates of a model.
pub fn group_fnr(
    m: &LinearModel,
    data: &EncodedDataset,
    spec: &ConstraintSpec,
) -> Result<BTreeMap<String, f64>> {
    let z = spec.binarize(data)?;
    let pred = m.predictions(data)?;
    let (in_name, out_name) = spec.group_names();
    let mut out = BTreeMap::new();
    for (value, name) in [(1u8, in_name), (0u8, out_name)] {
        let positives: Vec<usize> = (0..data.len())
            .filter(|&i| z[i] == value && data.labels[i] == 1)
            .collect();
        if !positives.is_empty() {
            let missed = positives.iter().filter(|&&i| pred[i] == 0).count();
            out.insert(name, missed as f64 / positives.len() as f64);
        }
    }
    Ok(out)
}

/// Trains one model per grid factor, warm-starting each from the previous.
pub fn constraint_sweep(
    data: &EncodedDataset,
    spec: &ConstraintSpec,
    params: &FairTrainParams,
) -> Result<Vec<SweepEntry>> {
    spec.validate()?;
    let z = spec.binarize(data)?;
    let trainer = ConstrainedTrainer::new(data, &z, *params)?;
    let mut out: Vec<SweepEntry> = Vec::with_capacity(spec.factors.len());
    for &factor in &spec.factors {
        let warm = out.last().map(|e| &e.fit.model);
        let fit = trainer.fit(factor, warm).map_err(|e| match e {
            e @ Error::ConstrainedTrainingFailed { .. } => e,
            other => Error::ConstrainedTrainingFailed {
                factor,
                message: other.to_string(),
            },
        })?;
        let group_fnr = group_fnr(&fit.model, data, spec)?;
        out.push(SweepEntry { fit, group_fnr });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{balanced_fixture, planted_disparity};
    use crate::model::train_logistic;
    use proptest::prelude::*;

    fn toy_data(responses_x: &[f64], labels: &[Label]) -> EncodedDataset {
        let n = labels.len();
        EncodedDataset::new(
            (0..n).map(|i| i.to_string()).collect(),
            vec!["x".into()],
            responses_x.iter().map(|&x| vec![x]).collect(),
            labels.to_vec(),
            vec![],
            vec![BTreeMap::new(); n],
            vec![0],
        )
        .unwrap()
    }

    #[test]
    fn hand_covariance_example() {
        // identity model: response = x
        let m = LinearModel {
            weights: vec![1.0],
            intercept: 0.0,
        };
        let data = toy_data(&[-1.0, 1.0, 5.0], &[1, 1, 0]);
        assert!((fnr_cov(&m, &data, &[0, 1, 1]).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn covariance_zero_cases() {
        let m = LinearModel {
            weights: vec![1.0],
            intercept: 0.0,
        };
        let correct = toy_data(&[0.5, 1.0, 2.0, -1.0], &[1, 1, 1, 0]);
        assert_eq!(fnr_cov(&m, &correct, &[0, 1, 0, 1]).unwrap(), 0.0);
        let mixed = toy_data(&[-0.5, 1.0, -2.0], &[1, 1, 1]);
        assert_eq!(fnr_cov(&m, &mixed, &[1, 1, 1]).unwrap(), 0.0);
        let no_positives = toy_data(&[1.0, 2.0], &[0, 0]);
        assert!(matches!(fnr_cov(&m, &no_positives, &[0, 1]), Err(Error::DegenerateData(_))));
    }

    #[test]
    fn grid_parsing() {
        let grid = parse_factor_grid("1.0:0.0:0.05").unwrap();
        assert_eq!(grid.len(), 21);
        assert_eq!(grid[0], 1.0);
        assert_eq!(grid[20], 0.0);
        assert!((grid[1] - 0.95).abs() < 1e-12);
        assert_eq!(parse_factor_grid("1.0:0.0:0.5").unwrap(), vec![1.0, 0.5, 0.0]);
        assert_eq!(parse_factor_grid("1").unwrap(), vec![1.0]);
        assert!(parse_factor_grid("0:1:0.5").is_err());
        assert_eq!(parse_grid("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(parse_factor_grid("1:0").is_err());
        assert!(parse_factor_grid("1:0:0").is_err());
        assert!(ConstraintSpec::new("race", "White", vec![0.0, 1.0]).is_err());
        assert!(ConstraintSpec::new("race", "White", vec![1.2]).is_err());
    }

    #[test]
    fn factor_one_is_unconstrained() {
        let data = planted_disparity(300, 1);
        let spec = ConstraintSpec::new("race", "White", vec![1.0]).unwrap();
        let params = FairTrainParams::default();
        let fit = train_constrained(&data, &spec, 1.0, &params).unwrap();
        assert_eq!(fit.model, train_logistic(&data, &params.logistic).unwrap());
        assert_eq!(fit.lambda, 0.0);
        let sweep = constraint_sweep(&data, &spec, &params).unwrap();
        assert_eq!(sweep.len(), 1);
        assert_eq!(sweep[0].fit.model, fit.model);
    }

    #[test]
    fn factor_zero_meets_bound_and_narrows_fnr_gap() {
        let data = planted_disparity(400, 2);
        let spec = ConstraintSpec::new("race", "White", vec![1.0, 0.0]).unwrap();
        let params = FairTrainParams::default();
        let sweep = constraint_sweep(&data, &spec, &params).unwrap();
        let z = spec.binarize(&data).unwrap();
        let c0 = fnr_cov(&sweep[0].fit.model, &data, &z).unwrap();
        assert!(c0.abs() > 1e-3, "fixture should violate factor 0, cov {c0}");
        let tight = fnr_cov(&sweep[1].fit.model, &data, &z).unwrap();
        assert!(tight.abs() <= 1e-4, "cov {tight}");
        let gap = |e: &SweepEntry| (e.group_fnr["White"] - e.group_fnr["non-White"]).abs();
        assert!(gap(&sweep[1]) < gap(&sweep[0]), "{:?} vs {:?}", sweep[1].group_fnr, sweep[0].group_fnr);
    }

    #[test]
    fn binding_contract_and_loss_order_across_grid() {
        let data = planted_disparity(400, 3);
        let spec = ConstraintSpec::new("race", "White", parse_factor_grid("1:0:0.25").unwrap()).unwrap();
        let params = FairTrainParams::default();
        let sweep = constraint_sweep(&data, &spec, &params).unwrap();
        let c0 = sweep[0].fit.cov.abs();
        for entry in &sweep {
            let f = &entry.fit;
            assert!(f.cov.abs() <= f.factor * c0 + params.slack_tol, "{f:?}");
            if f.factor < 1.0 {
                // active: the unconstrained optimum violates every tighter bound
                assert!(f.cov.abs() >= f.bound - params.slack_tol, "{f:?}");
            }
        }
        for w in sweep.windows(2) {
            assert!(w[1].fit.loss >= w[0].fit.loss - 1e-6, "{} then {}", w[0].fit.loss, w[1].fit.loss);
            assert!(w[1].fit.cov.abs() <= w[0].fit.cov.abs() + 1e-12);
        }
    }

    #[test]
    fn fair_data_gives_identical_models() {
        let data = balanced_fixture(200, 4);
        let spec = ConstraintSpec::new("race", "White", vec![1.0, 0.5, 0.0]).unwrap();
        let sweep = constraint_sweep(&data, &spec, &FairTrainParams::default()).unwrap();
        assert!(sweep.windows(2).all(|w| w[0].fit.model == w[1].fit.model));
    }

    #[test]
    fn missing_attribute_is_config_error() {
        let data = planted_disparity(50, 5);
        let spec = ConstraintSpec::new("gender", "f", vec![1.0]).unwrap();
        assert!(matches!(
            train_constrained(&data, &spec, 0.5, &FairTrainParams::default()),
            Err(Error::Config(_))
        ));
        let spec = ConstraintSpec::new("race", "White", vec![1.0]).unwrap();
        assert!(train_constrained(&data, &spec, 1.5, &FairTrainParams::default()).is_err());
    }

    proptest! {
        #[test]
        fn covariance_ignores_constant_shift(
            pairs in prop::collection::vec((0u8..=1, -5.0f64..5.0), 1..50),
            shift in -10.0f64..10.0,
        ) {
            let z: Vec<f64> = pairs.iter().map(|p| f64::from(p.0)).collect();
            let d: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let shifted: Vec<f64> = d.iter().map(|v| v + shift).collect();
            prop_assert!((covariance(&z, &d) - covariance(&z, &shifted)).abs() < 1e-9);
        }
    }
}
