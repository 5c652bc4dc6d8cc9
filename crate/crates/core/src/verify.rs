//! Executable checks of the theoretical results: closed-form examples,
//! two-point population witnesses and brute-force enumeration of every
//! classifier on small instances.

use serde::Serialize;

use crate::benefit::{benefits_from_labels, individual_benefit, BenefitScheme, Label};
use crate::error::{Error, Result};
use crate::inequality::{
    between_group_share, decompose, decompose_indexed, generalized_entropy, BenefitVector, WeightedBenefits,
};
use crate::model::{labels_from_order, oracle_scores, rank_order};
use crate::partition::GroupPartition;
use crate::seed::rng;

/// Largest instance the enumerators accept.
pub const MAX_ENUMERATION: usize = 16;

/// Benefit distribution of the classifier that accepts with probability `q`
/// on a population where a `p` fraction has `y = 1`.
pub fn theta_q_benefit_distribution(p: f64, q: f64) -> Result<WeightedBenefits> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("p = {p} must lie in (0,1)")));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Domain(format!("q = {q} must lie in [0,1]")));
    }
    WeightedBenefits::new(vec![
        (0.0, p * (1.0 - q)),
        (1.0, p * q + (1.0 - p) * (1.0 - q)),
        (2.0, (1.0 - p) * q),
    ])
}

/// E^2 at `q = 1 - p` is strictly below E^2 of the accuracy-optimal `q = 0`.
pub fn prop2_check(p: f64) -> Result<bool> {
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::Domain(format!("p = {p} must lie in (0,0.5)")));
    }
    let randomized = theta_q_benefit_distribution(p, 1.0 - p)?.generalized_entropy(2.0)?;
    let accurate = theta_q_benefit_distribution(p, 0.0)?.generalized_entropy(2.0)?;
    Ok(randomized < accurate)
}

fn check_small_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::Domain(format!("p = {p} must lie in (0,0.5)")));
    }
    Ok(())
}

/// Stationary point of the objective below, `(1 - 3p + 2p^2) / (3 - 2p)`.
pub fn example1_qstar(p: f64) -> Result<f64> {
    check_small_p(p)?;
    Ok((1.0 - 3.0 * p + 2.0 * p * p) / (3.0 - 2.0 * p))
}

/// `E[(b/mu)^2]` of the `q`-randomized classifier, i.e. `2 E^2 + 1`.
pub fn example1_objective(p: f64, q: f64) -> Result<f64> {
    check_small_p(p)?;
    let mu = 1.0 - p + q;
    Ok(((p * q + (1.0 - p) * (1.0 - q)) + 4.0 * (1.0 - p) * q) / (mu * mu))
}

/// Minimizer of [`example1_objective`] over `q = 0, 1/steps, ..., 1`.
pub fn example1_grid_minimizer(p: f64, steps: usize) -> Result<f64> {
    let mut best = (f64::INFINITY, 0.0);
    for k in 0..=steps {
        let q = k as f64 / steps as f64;
        let v = example1_objective(p, q)?;
        if v < best.0 {
            best = (v, q);
        }
    }
    Ok(best.1)
}

/// Central-difference derivative of [`example1_objective`] in `q`.
pub fn example1_derivative(p: f64, q: f64, h: f64) -> Result<f64> {
    Ok((example1_objective(p, q + h)? - example1_objective(p, q - h)?) / (2.0 * h))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AccuracyGap {
    /// Accuracy of the fairness-optimal classifier (accept everyone).
    pub fair: f64,
    /// Accuracy of the accuracy-optimal classifier (reject everyone).
    pub accurate: f64,
    pub ratio: f64,
}

/// Accuracies read off the benefit distributions: accuracy is the weight on benefit 1.
pub fn example1_accuracy_gap(p: f64) -> Result<AccuracyGap> {
    check_small_p(p)?;
    let weight_of_one = |q: f64| -> Result<f64> {
        Ok(theta_q_benefit_distribution(p, q)?
            .atoms()
            .iter()
            .filter(|(b, _)| *b == 1.0)
            .map(|(_, w)| w)
            .sum())
    };
    let fair = weight_of_one(1.0)?;
    let accurate = weight_of_one(0.0)?;
    Ok(AccuracyGap {
        fair,
        accurate,
        ratio: accurate / fair,
    })
}

/// `E[(b/mu)^2]` before and after a binary feature splits the population:
/// `((4 - 3p) / (2 - p)^2, (4 - 3p - 2r - 2 eps) / (2 - p - r)^2)`.
pub fn example2_values(p: f64, r: f64, eps: f64) -> Result<(f64, f64)> {
    if !(p > 0.5 && p < 1.0) || !(0.0..=1.0).contains(&r) || eps < 0.0 {
        return Err(Error::Domain(format!("(p, r, eps) = ({p}, {r}, {eps}) is outside the example's domain")));
    }
    let pre = (4.0 - 3.0 * p) / ((2.0 - p) * (2.0 - p));
    let post = (4.0 - 3.0 * p - 2.0 * r - 2.0 * eps) / ((2.0 - p - r) * (2.0 - p - r));
    Ok((pre, post))
}

/// The same two quantities summed from the benefit masses. The masses are
/// signed: at some parameter points the benefit-2 mass is slightly negative.
pub fn example2_moments(p: f64, r: f64, eps: f64) -> (f64, f64) {
    let moment = |atoms: &[(f64, f64)]| {
        let mu: f64 = atoms.iter().map(|(b, w)| b * w).sum();
        atoms.iter().map(|(b, w)| w * (b / mu).powi(2)).sum::<f64>()
    };
    let pre = moment(&[(1.0, p), (2.0, 1.0 - p)]);
    let post = moment(&[
        (0.0, r / 2.0 - eps),
        (1.0, p + 2.0 * eps),
        (2.0, 1.0 - p - r / 2.0 - eps),
    ]);
    (pre, post)
}

/// A labeled population with one scalar feature and a group index per
/// individual. Individuals sharing a feature value are indistinguishable to
/// any classifier.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmallInstance {
    pub x: Vec<f64>,
    pub y: Vec<Label>,
    pub group: Vec<usize>,
}

impl SmallInstance {
    pub fn new(x: Vec<f64>, y: Vec<Label>, group: Vec<usize>) -> Result<Self> {
        if x.len() != y.len() || y.len() != group.len() {
            return Err(Error::Structural(format!(
                "{} features, {} labels, {} groups",
                x.len(),
                y.len(),
                group.len()
            )));
        }
        if x.is_empty() {
            return Err(Error::DegenerateData("empty instance".into()));
        }
        if x.len() > MAX_ENUMERATION {
            return Err(Error::EnumerationLimit {
                n: x.len(),
                limit: MAX_ENUMERATION,
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite feature".into()));
        }
        if let Some(&l) = y.iter().find(|&&l| l > 1) {
            return Err(Error::Domain(format!("label {l} is not binary")));
        }
        Ok(Self { x, y, group })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    fn n_groups(&self) -> usize {
        self.group.iter().max().map_or(0, |g| g + 1)
    }

    /// Index of each individual's feature value among the sorted distinct values.
    fn cells(&self) -> (Vec<f64>, Vec<usize>) {
        let mut distinct = self.x.clone();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        let cell = self
            .x
            .iter()
            .map(|v| distinct.iter().position(|d| d == v).expect("present"))
            .collect();
        (distinct, cell)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluated {
    pub labels: Vec<Label>,
    pub errors: usize,
    pub overall: f64,
    pub between: f64,
    pub within: f64,
}

fn evaluate(inst: &SmallInstance, labels: Vec<Label>, alpha: f64) -> Option<Evaluated> {
    let benefits: Vec<f64> = inst
        .y
        .iter()
        .zip(&labels)
        .map(|(&y, &p)| f64::from(1 + p) - f64::from(y))
        .collect();
    let errors = inst.y.iter().zip(&labels).filter(|(a, b)| a != b).count();
    let (overall, between, within) = decompose_indexed(&benefits, &inst.group, inst.n_groups(), alpha)?;
    Some(Evaluated {
        labels,
        errors,
        overall,
        between,
        within,
    })
}

/// Every deterministic classifier: one label per distinct feature value.
/// Labelings whose benefits are all zero (undefined index) are skipped.
pub fn enumerate_classifiers(inst: &SmallInstance, alpha: f64) -> Vec<Evaluated> {
    let (distinct, cell) = inst.cells();
    (0u32..1 << distinct.len())
        .filter_map(|mask| {
            let labels = cell.iter().map(|&c| ((mask >> c) & 1) as Label).collect();
            evaluate(inst, labels, alpha)
        })
        .collect()
}

/// Exact solutions of both programs at one accuracy level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParetoRecord {
    /// Loss budget: feasible classifiers have loss `<= delta`.
    pub delta: f64,
    pub feasible: usize,
    /// Minimizes overall unfairness, ties broken by lowest between-group unfairness.
    pub individual: Option<Evaluated>,
    /// Minimizes between-group unfairness, ties broken by lowest overall unfairness.
    pub group: Option<Evaluated>,
    /// The two optima differ in between-group unfairness.
    pub hypothesis: bool,
    /// When `hypothesis`, the group optimum has strictly larger overall and
    /// within-group unfairness. Vacuously true otherwise.
    pub holds: bool,
}

const TIE: f64 = 1e-12;

/// Solves the individual- and group-unfairness programs by enumeration for
/// every loss budget `k/n`, `k = 0..=n`.
pub fn brute_force_pareto(inst: &SmallInstance, alpha: f64) -> Result<Vec<ParetoRecord>> {
    if inst.len() > MAX_ENUMERATION {
        return Err(Error::EnumerationLimit {
            n: inst.len(),
            limit: MAX_ENUMERATION,
        });
    }
    let all = enumerate_classifiers(inst, alpha);
    let n = inst.len();
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let feasible: Vec<&Evaluated> = all.iter().filter(|e| e.errors <= k).collect();
        let best_overall = feasible.iter().map(|e| e.overall).fold(f64::INFINITY, f64::min);
        let individual = feasible
            .iter()
            .filter(|e| e.overall <= best_overall + TIE)
            .min_by(|a, b| a.between.total_cmp(&b.between))
            .map(|e| (*e).clone());
        let best_between = feasible.iter().map(|e| e.between).fold(f64::INFINITY, f64::min);
        let group = feasible
            .iter()
            .filter(|e| e.between <= best_between + TIE)
            .min_by(|a, b| a.overall.total_cmp(&b.overall))
            .map(|e| (*e).clone());
        let (hypothesis, holds) = match (&individual, &group) {
            (Some(i), Some(g)) => {
                let differs = (i.between - g.between).abs() > TIE;
                (differs, !differs || (g.overall > i.overall && g.within > i.within))
            }
            _ => (false, true),
        };
        out.push(ParetoRecord {
            delta: k as f64 / n as f64,
            feasible: feasible.len(),
            individual,
            group,
            hypothesis,
            holds,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prop1Check {
    pub min_loss: f64,
    pub min_unfairness: f64,
    /// `(min unfairness = 0) <=> (min loss = 0)`
    pub holds: bool,
}

/// Checks the zero-unfairness / zero-loss equivalence over all threshold
/// rules `1[x >= t]` and their complements `1[x < t]`.
pub fn prop1_check(inst: &SmallInstance, alpha: f64) -> Result<Prop1Check> {
    if inst.len() > MAX_ENUMERATION {
        return Err(Error::EnumerationLimit {
            n: inst.len(),
            limit: MAX_ENUMERATION,
        });
    }
    let (distinct, _) = inst.cells();
    let n = inst.len() as f64;
    let mut cuts: Vec<f64> = distinct.clone();
    cuts.push(f64::INFINITY);
    let mut min_loss = f64::INFINITY;
    let mut min_unfairness = f64::INFINITY;
    for &t in &cuts {
        for complement in [false, true] {
            let labels: Vec<Label> = inst.x.iter().map(|&v| u8::from((v >= t) != complement)).collect();
            let errors = inst.y.iter().zip(&labels).filter(|(a, b)| a != b).count();
            min_loss = min_loss.min(errors as f64 / n);
            let benefits = inst
                .y
                .iter()
                .zip(&labels)
                .map(|(&y, &p)| individual_benefit(y, p))
                .collect::<Result<Vec<f64>>>()?;
            match BenefitVector::from_values(benefits) {
                Ok(b) => min_unfairness = min_unfairness.min(generalized_entropy(&b, alpha)?),
                Err(Error::UndefinedIndex(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(Prop1Check {
        min_loss,
        min_unfairness,
        holds: (min_unfairness == 0.0) == (min_loss == 0.0),
    })
}

/// Between and within unfairness from their definitions: between is the index
/// of the vector with every benefit replaced by its group mean, within is the
/// weighted sum of per-group indices. Returns `(between, within)`.
pub fn naive_decomposition(values: &[f64], group: &[usize], alpha: f64) -> Option<(f64, f64)> {
    let n = values.len() as f64;
    let mu = values.iter().sum::<f64>() / n;
    if mu <= 0.0 {
        return None;
    }
    let ge = |v: &[f64]| -> f64 {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        if m == 0.0 {
            return 0.0;
        }
        v.iter().map(|x| (x / m).powf(alpha) - 1.0).sum::<f64>() / (v.len() as f64 * alpha * (alpha - 1.0))
    };
    let mut labels: Vec<usize> = group.to_vec();
    labels.sort_unstable();
    labels.dedup();
    let mut smoothed = vec![0.0; values.len()];
    let mut within = 0.0;
    for g in labels {
        let members: Vec<usize> = (0..values.len()).filter(|&i| group[i] == g).collect();
        let sub: Vec<f64> = members.iter().map(|&i| values[i]).collect();
        let m = sub.iter().sum::<f64>() / sub.len() as f64;
        for &i in &members {
            smoothed[i] = m;
        }
        within += sub.len() as f64 / n * (m / mu).powf(alpha) * ge(&sub);
    }
    Some((ge(&smoothed), within))
}

/// Scores and labels whose overall unfairness turns at least twice along the
/// default tau grid. Found by [`search_non_monotone`] with seed 1 and frozen.
pub const NON_MONOTONE_SCORES: [f64; 8] = [0.4, 0.98, 0.08, 0.21, 0.59, 0.38, 0.83, 0.28];
pub const NON_MONOTONE_LABELS: [Label; 8] = [0, 1, 1, 0, 0, 1, 0, 1];

/// Overall individual-scheme E^2 along `0, 0.01, ..., 1` (undefined points skipped).
pub fn overall_curve(scores: &[f64], y: &[Label], tie_seed: u64) -> Result<Vec<f64>> {
    let ids: Vec<String> = (0..y.len()).map(|i| i.to_string()).collect();
    let order = rank_order(scores, tie_seed)?;
    let scheme = BenefitScheme::builtin("individual").expect("builtin");
    let mut curve = Vec::new();
    for k in 0..=100 {
        let y_hat = labels_from_order(&order, f64::from(k) / 100.0);
        match benefits_from_labels(&ids, y, &y_hat, &scheme) {
            Ok(b) => curve.push(generalized_entropy(&b, 2.0)?),
            Err(Error::UndefinedIndex(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(curve)
}

/// Number of direction changes after collapsing runs equal within `1e-9`.
pub fn turns(curve: &[f64]) -> usize {
    let mut steps: Vec<f64> = curve
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| d.abs() > 1e-9)
        .collect();
    steps.dedup_by(|a, b| a.signum() == b.signum());
    steps.len().saturating_sub(1)
}

/// Neither weakly increasing nor weakly decreasing, beyond `1e-9`.
pub fn is_non_monotone(curve: &[f64]) -> bool {
    turns(curve) > 0
}

/// Draws random 8-individual score/label fixtures until one has a curve
/// that turns at least twice (more than the oracle's single dip).
pub fn search_non_monotone(seed: u64, attempts: usize) -> Result<Option<(Vec<f64>, Vec<Label>)>> {
    use rand::Rng;
    let mut r = rng(seed);
    for _ in 0..attempts {
        let scores: Vec<f64> = (0..8).map(|_| f64::from(r.gen_range(0..100u32)) / 100.0).collect();
        let y: Vec<Label> = (0..8).map(|_| u8::from(r.gen_bool(0.5))).collect();
        if turns(&overall_curve(&scores, &y, 0)?) >= 2 {
            return Ok(Some((scores, y)));
        }
    }
    Ok(None)
}

/// Two 6-individual groups of size 3 whose features separate the labels.
pub fn separable_six() -> SmallInstance {
    SmallInstance::new(
        vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
        vec![0, 0, 0, 1, 1, 1],
        vec![0, 1, 0, 1, 0, 1],
    )
    .expect("valid")
}

/// Eight individuals, two groups, features that cannot separate the labels,
/// and unequal merit inside each group.
pub const PLANTED_EIGHT_X: [f64; 8] = [1.0, 1.0, 1.0, 2.0, 3.0, 3.0, 0.0, 0.0];
pub const PLANTED_EIGHT_Y: [Label; 8] = [1, 0, 0, 0, 0, 0, 1, 0];
pub const PLANTED_EIGHT_GROUP: [usize; 8] = [0, 1, 0, 1, 0, 1, 0, 1];

pub fn planted_eight() -> SmallInstance {
    SmallInstance::new(PLANTED_EIGHT_X.to_vec(), PLANTED_EIGHT_Y.to_vec(), PLANTED_EIGHT_GROUP.to_vec())
        .expect("valid")
}

/// One row of the verification table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, outcome: Result<(bool, String)>) -> CheckResult {
    match outcome {
        Ok((passed, detail)) => CheckResult {
            name: name.to_string(),
            passed,
            detail,
        },
        Err(e) => CheckResult {
            name: name.to_string(),
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn fig1_values() -> Result<(bool, String)> {
    let y = [1, 0, 0, 1, 0, 0, 1, 0, 1, 1];
    let c1 = [1, 0, 0, 0, 1, 1, 1, 0, 1, 0];
    let c2 = [0, 1, 1, 0, 0, 0, 0, 1, 1, 1];
    let ids: Vec<String> = (1..=10).map(|i| format!("i{i}")).collect();
    let scheme = BenefitScheme::builtin("individual").expect("builtin");
    let e1 = generalized_entropy(&benefits_from_labels(&ids, &y, &c1, &scheme)?, 2.0)?;
    let e2 = generalized_entropy(&benefits_from_labels(&ids, &y, &c2, &scheme)?, 2.0)?;
    Ok((
        (e1 - 0.2).abs() <= 1e-12 && (e2 - 0.3).abs() <= 1e-12,
        format!("C1 {e1:.12}, C2 {e2:.12}"),
    ))
}

/// Two groups of 70 and 30 negatives with false positive rates `fpr_a` and `fpr_b`.
pub fn fpr_scenario(fpr_a: f64, fpr_b: f64) -> Result<(BenefitVector, GroupPartition)> {
    let mut ids = Vec::new();
    let mut y_hat = Vec::new();
    let mut groups = Vec::new();
    for (name, size, fpr) in [("A", 70usize, fpr_a), ("B", 30, fpr_b)] {
        let positives = (fpr * size as f64).round() as usize;
        for i in 0..size {
            ids.push(format!("{name}{i}"));
            y_hat.push(u8::from(i < positives));
            groups.push((format!("{name}{i}"), name.to_string()));
        }
    }
    let y = vec![0; ids.len()];
    let scheme = BenefitScheme::builtin("equal-fpr").expect("builtin");
    Ok((benefits_from_labels(&ids, &y, &y_hat, &scheme)?, GroupPartition::from_labels("group", groups)?))
}

fn fpr_between() -> Result<(bool, String)> {
    let (b1, g1) = fpr_scenario(0.8, 0.6)?;
    let (b2, g2) = fpr_scenario(0.6, 0.8)?;
    let c1 = decompose(&b1, &g1, 2.0)?.between;
    let c2 = decompose(&b2, &g2, 2.0)?.between;
    let ok = (c1 - 0.062_130_177_514_8).abs() <= 1e-9
        && (c2 - 0.036_332_179_930_8).abs() <= 1e-9
        && format!("{c1:.2}") == "0.06"
        && format!("{c2:.2}") == "0.04";
    Ok((ok, format!("C1 {c1:.9}, C2 {c2:.9}")))
}

fn prop1_all() -> Result<(bool, String)> {
    let separable = separable_six();
    let conflicting = SmallInstance::new(vec![1.0, 1.0, 2.0, 2.0], vec![0, 1, 1, 1], vec![0, 0, 1, 1])?;
    let constant = SmallInstance::new(vec![1.0, 2.0, 3.0], vec![1, 1, 1], vec![0, 0, 0])?;
    let checks = [
        prop1_check(&separable, 2.0)?,
        prop1_check(&conflicting, 2.0)?,
        prop1_check(&constant, 2.0)?,
    ];
    let shape = checks[0].min_loss == 0.0 && checks[1].min_loss > 0.0 && checks[2].min_loss == 0.0;
    Ok((shape && checks.iter().all(|c| c.holds), format!("{checks:?}")))
}

fn prop2_random() -> Result<(bool, String)> {
    use rand::Rng;
    let mut r = rng(2);
    let mut failures = 0;
    for _ in 0..50 {
        let p = r.gen_range(1e-6..0.5 - 1e-6);
        if !prop2_check(p)? {
            failures += 1;
        }
    }
    Ok((failures == 0, format!("{failures} failures over 50 draws")))
}

fn example1_all() -> Result<(bool, String)> {
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for p in [0.1, 0.2, 0.3, 0.4] {
        ok &= example1_grid_minimizer(p, 1000)? == 1.0;
        let q_star = example1_qstar(p)?;
        // bisection on the sign of the numerical derivative
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if example1_derivative(p, mid, 1e-6)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        worst = worst.max((0.5 * (lo + hi) - q_star).abs());
        ok &= example1_derivative(p, q_star - 1e-3, 1e-6)? > 0.0;
        ok &= example1_derivative(p, q_star + 1e-3, 1e-6)? < 0.0;
    }
    ok &= worst <= 1e-6;
    ok &= (example1_qstar(0.25)? - 0.15).abs() < 1e-12;
    ok &= (example1_accuracy_gap(0.1)?.ratio - 9.0).abs() < 1e-9;
    Ok((ok, format!("root error {worst:.2e}")))
}

fn example2_all() -> Result<(bool, String)> {
    let (pre, post) = example2_values(0.9, 0.2, 0.001)?;
    let (mpre, mpost) = example2_moments(0.9, 0.2, 0.001);
    let ok = (pre - 1.074_380_165_289_256).abs() <= 1e-12
        && (post - 1.108_641_975_308_642).abs() <= 1e-12
        && (pre - 1.075).abs() <= 0.01
        && (post - 1.10).abs() <= 0.01
        && (mpre - pre).abs() <= 1e-12
        && (mpost - post).abs() <= 1e-12
        && post > pre;
    Ok((ok, format!("pre {pre:.7}, post {post:.7}")))
}

fn prop3_all() -> Result<(bool, String)> {
    let planted = brute_force_pareto(&planted_eight(), 2.0)?;
    let fired = planted.iter().filter(|r| r.hypothesis).count();
    let trivial = brute_force_pareto(&separable_six(), 2.0)?;
    let ok = fired > 0
        && planted.iter().all(|r| r.holds)
        && trivial.iter().all(|r| !r.hypothesis && r.holds);
    Ok((ok, format!("hypothesis fired at {fired} of {} budgets", planted.len())))
}

/// Refinement never lowers between, shares stay in [0,1], and enumerated
/// decompositions agree with the definitions.
fn prop4_5_all() -> Result<(bool, String)> {
    use rand::Rng;
    let mut r = rng(45);
    let mut failures = 0;
    for _ in 0..500 {
        let n = r.gen_range(2..30);
        let values: Vec<f64> = (0..n).map(|_| f64::from(r.gen_range(0..3u8))).collect();
        if values.iter().all(|&v| v == 0.0) {
            continue;
        }
        let coarse: Vec<usize> = (0..n).map(|_| r.gen_range(0..3)).collect();
        let fine: Vec<usize> = coarse.iter().map(|&g| 2 * g + r.gen_range(0..2)).collect();
        let (o, bc, wc) = decompose_indexed(&values, &coarse, 3, 2.0).expect("positive mean");
        let (_, bf, _) = decompose_indexed(&values, &fine, 6, 2.0).expect("positive mean");
        let (nb, nw) = naive_decomposition(&values, &coarse, 2.0).expect("positive mean");
        let share = if o > 0.0 { bc / o } else { 0.0 };
        if bf < bc - 1e-12
            || !(0.0..=1.0 + 1e-12).contains(&share)
            || (nb - bc).abs() > 1e-9
            || (nw - wc).abs() > 1e-9
        {
            failures += 1;
        }
    }
    // one group holds all the benefit: share 1; half of every group: share 0
    let ids: Vec<String> = (0..4).map(|i| i.to_string()).collect();
    let part = GroupPartition::from_labels(
        "g",
        ids.iter().map(|id| (id.clone(), if id == "0" || id == "1" { "a" } else { "b" }.to_string())),
    )?;
    let top = between_group_share(&BenefitVector::new(ids.clone(), vec![1.0, 1.0, 0.0, 0.0])?, &part, 2.0)?;
    let none = between_group_share(&BenefitVector::new(ids, vec![1.0, 0.0, 1.0, 0.0])?, &part, 2.0)?;
    Ok((
        failures == 0 && top == 1.0 && none == 0.0,
        format!("{failures} failures over 500 draws; extremes {top}, {none}"),
    ))
}

fn oracle_perfect() -> Result<(bool, String)> {
    let y = [1, 0, 0, 1, 0, 0, 1, 0, 1, 1];
    let curve_at = |tau: f64| -> Result<(f64, f64)> {
        let order = rank_order(&oracle_scores(&y), 0)?;
        let y_hat = labels_from_order(&order, tau);
        let ids: Vec<String> = (0..y.len()).map(|i| i.to_string()).collect();
        let scheme = BenefitScheme::builtin("individual").expect("builtin");
        let acc = crate::benefit::accuracy(&y, &y_hat)?;
        Ok((acc, generalized_entropy(&benefits_from_labels(&ids, &y, &y_hat, &scheme)?, 2.0)?))
    };
    let (acc, e) = curve_at(0.5)?;
    Ok((acc == 1.0 && e.abs() <= 1e-12, format!("accuracy {acc}, overall {e}")))
}

fn non_monotone() -> Result<(bool, String)> {
    let curve = overall_curve(&NON_MONOTONE_SCORES, &NON_MONOTONE_LABELS, 0)?;
    Ok((turns(&curve) >= 2, format!("{} turns", turns(&curve))))
}

/// Runs every check in a fixed order.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        check("fig1-unfairness", fig1_values()),
        check("fpr-between-group", fpr_between()),
        check("prop1-zero-loss-iff-zero-unfairness", prop1_all()),
        check("prop2-randomized-beats-accurate", prop2_random()),
        check("example1-accept-all-is-fairest", example1_all()),
        check("example2-feature-worsens-fairness", example2_all()),
        check("prop3-group-optimum-costs-overall", prop3_all()),
        check("prop4-5-refinement-and-share", prop4_5_all()),
        check("oracle-sweep-perfect-point", oracle_perfect()),
        check("non-monotone-threshold-curve", non_monotone()),
    ]
}
