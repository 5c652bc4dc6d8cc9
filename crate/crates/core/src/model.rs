//! Logistic regression and the ranked-threshold prediction rule.

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use crate::benefit::accuracy;
use crate::benefit::Label;
use crate::dataio::EncodedDataset;
use crate::error::{Error, Result};
use crate::seed::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
}

impl LinearModel {
    pub fn zeros(n_features: usize) -> Self {
        Self {
            weights: vec![0.0; n_features],
            intercept: 0.0,
        }
    }

    /// Parameters packed as `[weights..., intercept]`.
    pub(crate) fn from_params(params: &[f64]) -> Self {
        let (w, b) = params.split_at(params.len() - 1);
        Self {
            weights: w.to_vec(),
            intercept: b[0],
        }
    }

    pub(crate) fn params(&self) -> Vec<f64> {
        let mut p = self.weights.clone();
        p.push(self.intercept);
        p
    }

    fn check_dim(&self, features: &[f64]) -> Result<()> {
        if features.len() != self.weights.len() {
            return Err(Error::Structural(format!(
                "model has {} weights, feature vector has {} entries",
                self.weights.len(),
                features.len()
            )));
        }
        Ok(())
    }

    /// Linear response `w.x + b`.
    pub fn response(&self, features: &[f64]) -> Result<f64> {
        self.check_dim(features)?;
        Ok(dot(&self.weights, features) + self.intercept)
    }

    /// Positive-class likelihood.
    pub fn score(&self, features: &[f64]) -> Result<f64> {
        Ok(sigmoid(self.response(features)?))
    }

    /// Label 1 iff the response is nonnegative.
    pub fn predict(&self, features: &[f64]) -> Result<Label> {
        Ok(u8::from(self.response(features)? >= 0.0))
    }

    pub fn scores(&self, data: &EncodedDataset) -> Result<Vec<f64>> {
        data.features.iter().map(|x| self.score(x)).collect()
    }

    pub fn predictions(&self, data: &EncodedDataset) -> Result<Vec<Label>> {
        data.features.iter().map(|x| self.predict(x)).collect()
    }
}

/// Logistic of the linear response.
pub fn score(m: &LinearModel, features: &[f64]) -> Result<f64> {
    m.score(features)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    pub l2: f64,
    pub max_iters: usize,
    /// Stop once the gradient norm drops below this.
    pub tol: f64,
}

impl Default for LogisticParams {
    fn default() -> Self {
        Self {
            l2: 1e-4,
            max_iters: 10_000,
            tol: 1e-8,
        }
    }
}

/// Mean logistic loss plus `l2/2 |w|^2` (intercept unpenalized), with its
/// gradient, at packed parameters.
pub(crate) fn logistic_objective(data: &EncodedDataset, params: &[f64], l2: f64) -> (f64, Vec<f64>) {
    let d = params.len() - 1;
    let (w, b) = (&params[..d], params[d]);
    let n = data.len() as f64;
    let mut loss = 0.0;
    let mut grad = vec![0.0; d + 1];
    for (x, &y) in data.features.iter().zip(&data.labels) {
        let r = dot(w, x) + b;
        let sign = if y == 1 { 1.0 } else { -1.0 };
        loss += softplus(-sign * r);
        let residual = sigmoid(r) - f64::from(y);
        for (g, xi) in grad.iter_mut().zip(x) {
            *g += residual * xi;
        }
        grad[d] += residual;
    }
    loss /= n;
    for g in &mut grad {
        *g /= n;
    }
    loss += 0.5 * l2 * dot(w, w);
    for (g, wi) in grad.iter_mut().zip(w) {
        *g += l2 * wi;
    }
    (loss, grad)
}

pub(crate) fn logistic_loss(data: &EncodedDataset, params: &[f64], l2: f64) -> f64 {
    let d = params.len() - 1;
    let (w, b) = (&params[..d], params[d]);
    let n = data.len() as f64;
    let loss: f64 = data
        .features
        .iter()
        .zip(&data.labels)
        .map(|(x, &y)| {
            let sign = if y == 1 { 1.0 } else { -1.0 };
            softplus(-sign * (dot(w, x) + b))
        })
        .sum();
    loss / n + 0.5 * l2 * dot(w, w)
}

/// Hessian of [`logistic_objective`], row-major `(d+1) x (d+1)`.
pub(crate) fn logistic_hessian(data: &EncodedDataset, params: &[f64], l2: f64) -> Vec<f64> {
    let d = params.len() - 1;
    let dim = d + 1;
    let (w, b) = (&params[..d], params[d]);
    let n = data.len() as f64;
    let mut h = vec![0.0; dim * dim];
    let mut xt = vec![0.0; dim];
    for x in &data.features {
        let s = sigmoid(dot(w, x) + b);
        let c = s * (1.0 - s) / n;
        xt[..d].copy_from_slice(x);
        xt[d] = 1.0;
        for i in 0..dim {
            let ci = c * xt[i];
            for j in 0..dim {
                h[i * dim + j] += ci * xt[j];
            }
        }
    }
    for i in 0..d {
        h[i * dim + i] += l2;
    }
    h
}

/// Result of a gradient-descent fit.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticFit {
    pub model: LinearModel,
    /// Objective after each accepted step, starting at the zero model.
    pub loss_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

fn check_trainable(data: &EncodedDataset) -> Result<()> {
    if data.is_empty() {
        return Err(Error::DegenerateData("empty training set".into()));
    }
    let positives = data.labels.iter().filter(|&&y| y == 1).count();
    if positives == 0 || positives == data.len() {
        return Err(Error::DegenerateData(
            "training labels contain a single class".into(),
        ));
    }
    Ok(())
}

/// Gradient descent with backtracking (Armijo) line search from the zero model.
pub fn fit_logistic(data: &EncodedDataset, params: &LogisticParams) -> Result<LogisticFit> {
    check_trainable(data)?;
    let mut theta = vec![0.0; data.n_features() + 1];
    let (mut loss, mut grad) = logistic_objective(data, &theta, params.l2);
    let mut history = vec![loss];
    let mut step: f64 = 1.0;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < params.max_iters {
        let gnorm2 = dot(&grad, &grad);
        if gnorm2.sqrt() < params.tol {
            converged = true;
            break;
        }
        iterations += 1;
        step = (step * 2.0).min(1e4);
        let accepted = loop {
            let candidate: Vec<f64> = theta.iter().zip(&grad).map(|(t, g)| t - step * g).collect();
            let cand_loss = logistic_loss(data, &candidate, params.l2);
            if cand_loss <= loss - 0.5 * step * gnorm2 {
                break Some(candidate);
            }
            step *= 0.5;
            if step < 1e-20 {
                break None;
            }
        };
        let Some(candidate) = accepted else {
            // no descent possible at machine precision
            converged = true;
            break;
        };
        theta = candidate;
        let (l, g) = logistic_objective(data, &theta, params.l2);
        loss = l;
        grad = g;
        history.push(loss);
    }
    Ok(LogisticFit {
        model: LinearModel::from_params(&theta),
        loss_history: history,
        iterations,
        converged,
    })
}

pub fn train_logistic(data: &EncodedDataset, params: &LogisticParams) -> Result<LinearModel> {
    Ok(fit_logistic(data, params)?.model)
}

/// Objective value (mean logistic loss plus L2 term) of a model on data.
pub fn objective(m: &LinearModel, data: &EncodedDataset, l2: f64) -> Result<f64> {
    if m.weights.len() != data.n_features() {
        return Err(Error::Structural(format!(
            "model has {} weights, data has {} features",
            m.weights.len(),
            data.n_features()
        )));
    }
    Ok(logistic_loss(data, &m.params(), l2))
}

/// Perfect scores: `p_i = y_i`.
pub fn oracle_scores(y: &[Label]) -> Vec<f64> {
    y.iter().map(|&l| f64::from(l)).collect()
}

/// Accept the top `n - ceil(n tau)` individuals by score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankingRule {
    pub tau: f64,
    pub tie_seed: u64,
}

impl RankingRule {
    pub fn new(tau: f64, tie_seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&tau) {
            return Err(Error::Domain(format!("tau {tau} is outside [0,1]")));
        }
        Ok(Self { tau, tie_seed })
    }
}

/// Ascending score order with ties permuted uniformly at random by `tie_seed`.
/// `order[k]` is the individual at 0-based rank `k`.
pub fn rank_order(scores: &[f64], tie_seed: u64) -> Result<Vec<usize>> {
    if let Some(s) = scores.iter().find(|s| !(0.0..=1.0).contains(*s)) {
        return Err(Error::Domain(format!("score {s} is outside [0,1]")));
    }
    let mut r = rng(tie_seed);
    let keys: Vec<u64> = scores.iter().map(|_| r.gen()).collect();
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(keys[a].cmp(&keys[b])));
    Ok(order)
}

/// Number of rejected individuals at threshold `tau`: `ceil(n tau)`, with
/// products within 1e-9 of an integer snapped to it.
pub fn rejected_count(n: usize, tau: f64) -> usize {
    let cut = (n as f64 * tau - 1e-9).ceil();
    (cut.max(0.0) as usize).min(n)
}

/// Labels from a precomputed rank order.
pub fn labels_from_order(order: &[usize], tau: f64) -> Vec<Label> {
    let cutoff = rejected_count(order.len(), tau);
    let mut labels = vec![0; order.len()];
    for &i in &order[cutoff..] {
        labels[i] = 1;
    }
    labels
}

/// Individuals are ranked by ascending score (0-based rank); label 1 iff
/// `rank >= n * tau`. So `tau = 0` accepts everyone, `tau = 1` no one, and
/// `tau` equal to the negative-class fraction accepts exactly as many
/// individuals as there are positives.
pub fn threshold_rank_predict(scores: &[f64], rule: &RankingRule) -> Result<Vec<Label>> {
    let rule = RankingRule::new(rule.tau, rule.tie_seed)?;
    let order = rank_order(scores, rule.tie_seed)?;
    Ok(labels_from_order(&order, rule.tau))
}
