//! Inequality indices over benefit vectors.
//!
//! The generalized entropy family is the workhorse: it is zero-normalized,
//! scale- and population-invariant, satisfies the transfer principle and is
//! additively decomposable into a between-group and a within-group part for
//! any disjoint partition of the population. Theil (alpha -> 1), the mean log
//! deviation (alpha -> 0), the coefficient of variation and the Gini index are
//! provided as companions.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{GroupKey, GroupPartition};

/// Overall inequality below this value is treated as zero when forming shares.
pub const ZERO_INEQUALITY: f64 = 1e-14;

/// Nonnegative benefits, one per included individual, tagged with the
/// individual's id.
#[derive(Debug, Clone, PartialEq)]
pub struct BenefitVector {
    ids: Vec<String>,
    values: Vec<f64>,
}

impl BenefitVector {
    pub fn new(ids: Vec<String>, values: Vec<f64>) -> Result<Self> {
        if ids.len() != values.len() {
            return Err(Error::Structural(format!(
                "{} ids for {} benefit values",
                ids.len(),
                values.len()
            )));
        }
        if values.is_empty() {
            return Err(Error::UndefinedIndex("empty benefit vector".into()));
        }
        for (id, &v) in ids.iter().zip(&values) {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Domain(format!(
                    "benefit of `{id}` is {v}; benefits must be finite and nonnegative"
                )));
            }
        }
        if values.iter().all(|&v| v == 0.0) {
            return Err(Error::UndefinedIndex(
                "all benefits are zero, the mean benefit is 0".into(),
            ));
        }
        Ok(Self { ids, values })
    }

    /// Builds a vector whose ids are the positions `0..n`.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let ids = (0..values.len()).map(|i| i.to_string()).collect();
        Self::new(ids, values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        mean(&self.values)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.ids.iter().map(String::as_str).zip(self.values.iter().copied())
    }
}

/// A benefit distribution given as (benefit, population weight) atoms.
///
/// Used for limiting arguments over infinitely large populations where only
/// the fraction of individuals at each benefit level matters.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedBenefits {
    atoms: Vec<(f64, f64)>,
}

impl WeightedBenefits {
    /// Weights are normalized to sum to one. Atoms with zero weight are kept
    /// but contribute nothing.
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::UndefinedIndex("empty distribution".into()));
        }
        for &(b, w) in &atoms {
            if !b.is_finite() || b < 0.0 {
                return Err(Error::Domain(format!("benefit {b} must be finite and nonnegative")));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::Domain(format!("weight {w} must be finite and nonnegative")));
            }
        }
        let total: f64 = atoms.iter().map(|&(_, w)| w).sum();
        if total <= 0.0 {
            return Err(Error::Domain("weights sum to zero".into()));
        }
        let atoms: Vec<(f64, f64)> = atoms.into_iter().map(|(b, w)| (b, w / total)).collect();
        let dist = Self { atoms };
        if dist.mean() <= 0.0 {
            return Err(Error::UndefinedIndex("mean benefit is 0".into()));
        }
        Ok(dist)
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|&(b, w)| b * w).sum()
    }

    /// Weight-averaged `(b/mu)^alpha`, the generalized entropy without its
    /// affine constants.
    pub fn raw_alpha_moment(&self, alpha: f64) -> Result<f64> {
        check_alpha_finite(alpha)?;
        let mu = self.mean();
        Ok(self
            .atoms
            .iter()
            .filter(|&&(_, w)| w > 0.0)
            .map(|&(b, w)| w * pow(b / mu, alpha))
            .sum())
    }

    pub fn generalized_entropy(&self, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        if alpha < 1.0 && self.atoms.iter().any(|&(b, w)| b == 0.0 && w > 0.0) {
            return Err(zero_benefit_error(alpha));
        }
        let moment = self.raw_alpha_moment(alpha)?;
        Ok((moment - 1.0) / (alpha * (alpha - 1.0)))
    }
}

fn check_alpha_finite(alpha: f64) -> Result<()> {
    if !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha must be finite, got {alpha}")));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    check_alpha_finite(alpha)?;
    if alpha == 0.0 {
        return Err(Error::Domain(
            "alpha = 0 is the mean log deviation; call mean_log_deviation".into(),
        ));
    }
    if alpha == 1.0 {
        return Err(Error::Domain("alpha = 1 is the Theil index; call theil".into()));
    }
    Ok(())
}

fn zero_benefit_error(alpha: f64) -> Error {
    Error::Domain(format!(
        "zero benefits are not supported for alpha = {alpha} < 1"
    ))
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn is_constant(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[0] == w[1])
}

/// Integer exponents go through `powi` so that small closed-form regressions
/// stay exact to the last few ulps.
fn pow(x: f64, alpha: f64) -> f64 {
    if alpha.fract() == 0.0 && alpha.abs() <= 64.0 {
        x.powi(alpha as i32)
    } else {
        x.powf(alpha)
    }
}

/// Generalized entropy of a raw slice. Callers guarantee a positive mean and a
/// valid alpha.
fn ge_slice(values: &[f64], alpha: f64) -> f64 {
    if is_constant(values) {
        return 0.0;
    }
    let n = values.len() as f64;
    let mu = mean(values);
    let sum: f64 = values.iter().map(|&b| pow(b / mu, alpha) - 1.0).sum();
    (sum / (n * alpha * (alpha - 1.0))).max(0.0)
}

/// Generalized entropy index `E^alpha`.
pub fn generalized_entropy(b: &BenefitVector, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha < 1.0 && b.values.contains(&0.0) {
        return Err(zero_benefit_error(alpha));
    }
    Ok(ge_slice(&b.values, alpha))
}

/// Theil index, the `alpha -> 1` limit. Zero benefits use `0 ln 0 = 0`.
pub fn theil(b: &BenefitVector) -> Result<f64> {
    if is_constant(&b.values) {
        return Ok(0.0);
    }
    let mu = b.mean();
    let n = b.len() as f64;
    let sum: f64 = b
        .values
        .iter()
        .map(|&v| {
            let r = v / mu;
            if r == 0.0 {
                0.0
            } else {
                r * r.ln()
            }
        })
        .sum();
    Ok((sum / n).max(0.0))
}

/// Mean log deviation, the `alpha -> 0` limit. Requires strictly positive benefits.
pub fn mean_log_deviation(b: &BenefitVector) -> Result<f64> {
    if let Some((id, _)) = b.iter().find(|&(_, v)| v == 0.0) {
        return Err(Error::Domain(format!(
            "benefit of `{id}` is 0; the mean log deviation needs positive benefits"
        )));
    }
    if is_constant(&b.values) {
        return Ok(0.0);
    }
    let mu = b.mean();
    let n = b.len() as f64;
    let sum: f64 = b.values.iter().map(|&v| (mu / v).ln()).sum();
    Ok((sum / n).max(0.0))
}

/// Population standard deviation over the mean.
pub fn coefficient_of_variation(b: &BenefitVector) -> Result<f64> {
    if is_constant(&b.values) {
        return Ok(0.0);
    }
    let mu = b.mean();
    let n = b.len() as f64;
    let var = b.values.iter().map(|&v| (v - mu) * (v - mu)).sum::<f64>() / n;
    Ok(var.sqrt() / mu)
}

/// Gini index `sum_ij |b_i - b_j| / (2 n^2 mu)`, evaluated on sorted values.
pub fn gini(b: &BenefitVector) -> Result<f64> {
    gini_slice(&b.values)
}

pub(crate) fn gini_slice(values: &[f64]) -> Result<f64> {
    if is_constant(values) {
        return Ok(0.0);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mu = mean(&sorted);
    if mu <= 0.0 {
        return Err(Error::UndefinedIndex("mean benefit is 0".into()));
    }
    // sum_ij |b_i - b_j| = 2 sum_i (2i - n - 1) b_(i), i 1-based over sorted values
    let pair_sum: f64 = sorted
        .iter()
        .enumerate()
        .map(|(i, &v)| (2.0 * (i as f64 + 1.0) - n - 1.0) * v)
        .sum::<f64>()
        * 2.0;
    Ok(pair_sum / (2.0 * n * n * mu))
}

/// `(1/n) sum (b_i/mu)^alpha`, the generalized entropy with its constants dropped.
pub fn raw_alpha_moment(b: &BenefitVector, alpha: f64) -> Result<f64> {
    check_alpha_finite(alpha)?;
    if alpha < 0.0 && b.values.contains(&0.0) {
        return Err(zero_benefit_error(alpha));
    }
    let mu = b.mean();
    let n = b.len() as f64;
    Ok(b.values.iter().map(|&v| pow(v / mu, alpha)).sum::<f64>() / n)
}

/// Per-group contribution to a decomposition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupTerm {
    pub key: GroupKey,
    pub size: usize,
    pub mean: f64,
    /// `(n_g/n) (mu_g/mu)^alpha E^alpha(b^g)`
    pub within: f64,
    /// `n_g/(n alpha (alpha-1)) [(mu_g/mu)^alpha - 1]`
    pub between: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    pub alpha: f64,
    pub overall: f64,
    pub between: f64,
    pub within: f64,
    pub group_terms: Vec<GroupTerm>,
}

impl Decomposition {
    /// `between / overall`, undefined when overall inequality is zero.
    pub fn between_share(&self) -> Result<f64> {
        if self.overall <= ZERO_INEQUALITY {
            return Err(Error::UndefinedIndex(
                "overall inequality is 0, the between-group share is undefined".into(),
            ));
        }
        Ok((self.between / self.overall).clamp(0.0, 1.0))
    }

    pub fn group(&self, key: &GroupKey) -> Option<&GroupTerm> {
        self.group_terms.iter().find(|t| &t.key == key)
    }
}

/// Between/within split of `E^alpha` over a disjoint partition of the
/// individuals in `b`. `overall` is reported as `between + within`.
pub fn decompose(b: &BenefitVector, partition: &GroupPartition, alpha: f64) -> Result<Decomposition> {
    check_alpha(alpha)?;
    if alpha < 1.0 && b.values.contains(&0.0) {
        return Err(zero_benefit_error(alpha));
    }
    let position: HashMap<&str, usize> =
        b.ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
    if position.len() != b.len() {
        return Err(Error::Structural("benefit vector has duplicate ids".into()));
    }
    let mut covered = 0usize;
    let mut groups: Vec<(GroupKey, Vec<f64>)> = Vec::with_capacity(partition.len());
    for (key, members) in partition.groups() {
        if members.is_empty() {
            return Err(Error::Structural(format!("group {key:?} is empty")));
        }
        let mut values = Vec::with_capacity(members.len());
        for id in members {
            let &pos = position.get(id.as_str()).ok_or_else(|| {
                Error::Structural(format!("partition member `{id}` has no benefit"))
            })?;
            values.push(b.values[pos]);
        }
        covered += values.len();
        groups.push((key.clone(), values));
    }
    if covered != b.len() {
        return Err(Error::Structural(format!(
            "partition covers {covered} individuals, benefit vector has {}",
            b.len()
        )));
    }
    Ok(decompose_groups(&groups, b.mean(), b.len(), alpha))
}

fn decompose_groups(groups: &[(GroupKey, Vec<f64>)], mu: f64, n: usize, alpha: f64) -> Decomposition {
    let n = n as f64;
    let mut between = 0.0;
    let mut within = 0.0;
    let mut group_terms = Vec::with_capacity(groups.len());
    for (key, values) in groups {
        let n_g = values.len() as f64;
        let mu_g = if is_constant(values) { values[0] } else { mean(values) };
        let ratio = if mu_g == mu { 1.0 } else { mu_g / mu };
        let weighted = pow(ratio, alpha);
        let b_term = n_g / (n * alpha * (alpha - 1.0)) * (weighted - 1.0);
        // all-zero groups carry weight 0 for alpha > 0
        let w_term = if mu_g == 0.0 {
            0.0
        } else {
            n_g / n * weighted * ge_slice(values, alpha)
        };
        between += b_term;
        within += w_term;
        group_terms.push(GroupTerm {
            key: key.clone(),
            size: values.len(),
            mean: mu_g,
            within: w_term,
            between: b_term,
        });
    }
    let between = between.max(0.0);
    Decomposition {
        alpha,
        overall: between + within,
        between,
        within,
        group_terms,
    }
}

/// Decomposition over plain slices: `group_of[i]` is the group index of
/// individual `i`, in `0..n_groups`. Empty groups are skipped. Returns
/// `(overall, between, within)`, or `None` when the mean benefit is zero.
pub fn decompose_indexed(
    values: &[f64],
    group_of: &[usize],
    n_groups: usize,
    alpha: f64,
) -> Option<(f64, f64, f64)> {
    debug_assert_eq!(values.len(), group_of.len());
    if values.is_empty() {
        return None;
    }
    let mu = mean(values);
    if mu <= 0.0 {
        return None;
    }
    let mut buckets: Vec<Vec<f64>> = vec![Vec::new(); n_groups];
    for (&v, &g) in values.iter().zip(group_of) {
        buckets[g].push(v);
    }
    let groups: Vec<(GroupKey, Vec<f64>)> = buckets
        .into_iter()
        .enumerate()
        .filter(|(_, v)| !v.is_empty())
        .map(|(g, v)| (vec![g.to_string()], v))
        .collect();
    let d = decompose_groups(&groups, mu, values.len(), alpha);
    Some((d.overall, d.between, d.within))
}

/// Fraction of overall inequality attributable to between-group disparity.
pub fn between_group_share(b: &BenefitVector, partition: &GroupPartition, alpha: f64) -> Result<f64> {
    decompose(b, partition, alpha)?.between_share()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn bv(values: &[f64]) -> BenefitVector {
        BenefitVector::from_values(values.to_vec()).unwrap()
    }

    const C1: [f64; 10] = [1.0, 1.0, 1.0, 0.0, 2.0, 2.0, 1.0, 1.0, 1.0, 0.0];

    fn fig1_partition() -> GroupPartition {
        let ids: Vec<String> = (0..10).map(|i| i.to_string()).collect();
        let labels = ["g1", "g1", "g2", "g2", "g2", "g2", "g3", "g3", "g3", "g3"];
        GroupPartition::from_labels("group", ids.iter().cloned().zip(labels.iter().map(|s| s.to_string())))
            .unwrap()
    }

    #[test]
    fn generalized_entropy_examples() {
        assert!((generalized_entropy(&bv(&C1), 2.0).unwrap() - 0.2).abs() < 1e-12);
        assert_eq!(generalized_entropy(&bv(&[3.5; 7]), 2.0).unwrap(), 0.0);
        assert_eq!(generalized_entropy(&bv(&[0.1; 3]), 0.5).unwrap(), 0.0);
        assert!((generalized_entropy(&bv(&[1.0, 2.0, 3.0]), 2.0).unwrap() - 0.5 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn generalized_entropy_rejects_degenerate_alpha() {
        let b = bv(&[1.0, 2.0]);
        assert!(matches!(generalized_entropy(&b, 0.0), Err(Error::Domain(_))));
        assert!(matches!(generalized_entropy(&b, 1.0), Err(Error::Domain(_))));
        assert!(matches!(generalized_entropy(&b, f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn zero_benefits_need_alpha_above_one() {
        let b = bv(&[0.0, 1.0, 2.0]);
        assert!(generalized_entropy(&b, 2.0).is_ok());
        assert!(generalized_entropy(&b, 1.5).is_ok());
        assert!(matches!(generalized_entropy(&b, 0.5), Err(Error::Domain(_))));
        assert!(matches!(generalized_entropy(&b, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn construction_rejects_bad_vectors() {
        assert!(matches!(BenefitVector::from_values(vec![]), Err(Error::UndefinedIndex(_))));
        assert!(matches!(
            BenefitVector::from_values(vec![0.0, 0.0]),
            Err(Error::UndefinedIndex(_))
        ));
        assert!(matches!(
            BenefitVector::from_values(vec![1.0, -0.5]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            BenefitVector::new(vec!["a".into()], vec![1.0, 2.0]),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn theil_examples() {
        assert_eq!(theil(&bv(&[2.0; 4])).unwrap(), 0.0);
        let expected = 0.5 * (0.5 * 0.5f64.ln() + 1.5 * 1.5f64.ln());
        assert!((theil(&bv(&[1.0, 3.0])).unwrap() - expected).abs() < 1e-12);
        assert!((theil(&bv(&[1.0, 3.0])).unwrap() - 0.130812).abs() < 1e-6);
        assert!((theil(&bv(&[0.0, 2.0])).unwrap() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn mean_log_deviation_examples() {
        assert_eq!(mean_log_deviation(&bv(&[5.0; 3])).unwrap(), 0.0);
        let expected = 0.5 * (2f64.ln() + (2.0f64 / 3.0).ln());
        assert!((mean_log_deviation(&bv(&[1.0, 3.0])).unwrap() - expected).abs() < 1e-12);
        assert!((mean_log_deviation(&bv(&[1.0, 3.0])).unwrap() - 0.143841).abs() < 1e-6);
        let expected = (2.0 * 2f64.ln() + 0.5f64.ln()) / 3.0;
        assert!((mean_log_deviation(&bv(&[1.0, 1.0, 4.0])).unwrap() - expected).abs() < 1e-12);
        assert!((mean_log_deviation(&bv(&[1.0, 1.0, 4.0])).unwrap() - 0.231049).abs() < 1e-6);
        assert!(matches!(mean_log_deviation(&bv(&[0.0, 1.0])), Err(Error::Domain(_))));
    }

    #[test]
    fn coefficient_of_variation_examples() {
        assert_eq!(coefficient_of_variation(&bv(&[0.3; 5])).unwrap(), 0.0);
        assert!((coefficient_of_variation(&bv(&C1)).unwrap() - 0.4f64.sqrt()).abs() < 1e-12);
        assert!((coefficient_of_variation(&bv(&[1.0, 3.0])).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn gini_examples() {
        assert_eq!(gini(&bv(&[4.0; 3])).unwrap(), 0.0);
        assert!((gini(&bv(&[0.0, 1.0])).unwrap() - 0.5).abs() < 1e-12);
        assert!((gini(&bv(&[1.0, 2.0, 3.0])).unwrap() - 2.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn gini_sorted_formula_matches_pairwise_sum() {
        let values = [0.3, 2.0, 0.0, 1.1, 1.1, 5.0, 0.7];
        let n = values.len() as f64;
        let mu = values.iter().sum::<f64>() / n;
        let pairwise: f64 = values
            .iter()
            .flat_map(|a| values.iter().map(move |b| (a - b).abs()))
            .sum();
        assert_relative_eq!(gini(&bv(&values)).unwrap(), pairwise / (2.0 * n * n * mu), max_relative = 1e-12);
    }

    #[test]
    fn gini_is_not_additively_decomposable() {
        // between: Gini of the group-mean-smoothed vector
        // within: sum of (n_g/n)(mu_g/mu) Gini(b^g), the analogue of the GE weights at alpha = 1
        let values = [1.0, 3.0, 2.0, 6.0];
        let groups = [[0usize, 2], [1, 3]];
        let mu = values.iter().sum::<f64>() / 4.0;
        let mut smoothed = [0.0; 4];
        let mut within = 0.0;
        for g in groups {
            let sub: Vec<f64> = g.iter().map(|&i| values[i]).collect();
            let mu_g = sub.iter().sum::<f64>() / sub.len() as f64;
            for &i in &g {
                smoothed[i] = mu_g;
            }
            within += sub.len() as f64 / 4.0 * (mu_g / mu) * gini_slice(&sub).unwrap();
        }
        let between = gini_slice(&smoothed).unwrap();
        let overall = gini(&bv(&values)).unwrap();
        assert!((between + within - overall).abs() > 1e-3);
    }

    #[test]
    fn raw_alpha_moment_examples() {
        assert!((raw_alpha_moment(&bv(&[2.5; 4]), 2.0).unwrap() - 1.0).abs() < 1e-15);
        let p = 0.9;
        let pre = WeightedBenefits::new(vec![(1.0, p), (2.0, 1.0 - p)]).unwrap();
        assert!((pre.raw_alpha_moment(2.0).unwrap() - (4.0 - 3.0 * p) / (2.0 - p).powi(2)).abs() < 1e-12);
        // p + r/2 + eps <= 1 keeps every atom's mass nonnegative
        let (p, r, eps) = (0.7, 0.2, 0.001);
        let post = WeightedBenefits::new(vec![
            (0.0, r / 2.0 - eps),
            (1.0, p + 2.0 * eps),
            (2.0, 1.0 - p - r / 2.0 - eps),
        ])
        .unwrap();
        let closed = (4.0 - 3.0 * p - 2.0 * r - 2.0 * eps) / (2.0 - p - r).powi(2);
        assert!((post.raw_alpha_moment(2.0).unwrap() - closed).abs() < 1e-12);
        assert!(WeightedBenefits::new(vec![(1.0, 0.5), (2.0, -0.1)]).is_err());
    }

    #[test]
    fn weighted_matches_replicated_population() {
        let dist = WeightedBenefits::new(vec![(0.0, 0.3), (1.0, 0.5), (2.0, 0.2)]).unwrap();
        let mut values = vec![0.0; 3];
        values.extend([1.0; 5]);
        values.extend([2.0; 2]);
        let ge = generalized_entropy(&bv(&values), 2.0).unwrap();
        assert!((dist.generalized_entropy(2.0).unwrap() - ge).abs() < 1e-12);
    }

    #[test]
    fn decompose_fig1_c1() {
        let d = decompose(&bv(&C1), &fig1_partition(), 2.0).unwrap();
        assert!((d.between - 0.025).abs() < 1e-12);
        assert!((d.within - 0.175).abs() < 1e-12);
        assert!((d.overall - 0.2).abs() < 1e-12);
        let sizes: Vec<usize> = d.group_terms.iter().map(|t| t.size).collect();
        assert_eq!(sizes, vec![2, 4, 4]);
        let means: Vec<f64> = d.group_terms.iter().map(|t| t.mean).collect();
        assert_eq!(means, vec![1.0, 1.25, 0.75]);
        assert!((d.between_share().unwrap() - 0.125).abs() < 1e-12);
    }

    #[test]
    fn decompose_trivial_and_singleton_partitions() {
        let b = bv(&[0.5, 2.0, 0.0, 3.0, 1.0]);
        let overall = generalized_entropy(&b, 3.0).unwrap();
        let one = decompose(&b, &GroupPartition::single(b.ids().iter().cloned()), 3.0).unwrap();
        assert!(one.between.abs() < 1e-15);
        assert_relative_eq!(one.within, overall, max_relative = 1e-12);
        let singles = decompose(&b, &GroupPartition::singletons(b.ids().iter().cloned()), 3.0).unwrap();
        assert_eq!(singles.within, 0.0);
        assert_relative_eq!(singles.between, overall, max_relative = 1e-12);
    }

    #[test]
    fn decompose_rejects_mismatched_partition() {
        let b = bv(&[1.0, 2.0, 3.0]);
        let short = GroupPartition::single(["0".to_string(), "1".to_string()]);
        assert!(matches!(decompose(&b, &short, 2.0), Err(Error::Structural(_))));
        let extra = GroupPartition::single(["0", "1", "2", "3"].map(String::from));
        assert!(matches!(decompose(&b, &extra, 2.0), Err(Error::Structural(_))));
    }

    #[test]
    fn zero_benefit_group_contributes_no_within_term() {
        let b = bv(&[0.0, 0.0, 1.0, 3.0]);
        let p = GroupPartition::from_labels(
            "g",
            b.ids().iter().cloned().zip(["a", "a", "b", "b"].map(String::from)),
        )
        .unwrap();
        let d = decompose(&b, &p, 2.0).unwrap();
        assert_eq!(d.group(&vec!["a".to_string()]).unwrap().within, 0.0);
        assert_relative_eq!(d.overall, generalized_entropy(&b, 2.0).unwrap(), max_relative = 1e-12);
    }

    #[test]
    fn share_extremes() {
        // members of one group get 1, everyone else 0
        let b = bv(&[1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let p = GroupPartition::from_labels(
            "g",
            b.ids().iter().cloned().zip(["a", "a", "b", "b", "c", "c"].map(String::from)),
        )
        .unwrap();
        assert_eq!(between_group_share(&b, &p, 2.0).unwrap(), 1.0);
        // half of each group gets 1
        let b = bv(&[1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0]);
        let p = GroupPartition::from_labels(
            "g",
            b.ids().iter().cloned().zip(["a", "a", "b", "b", "b", "b", "c", "c"].map(String::from)),
        )
        .unwrap();
        assert_eq!(between_group_share(&b, &p, 2.0).unwrap(), 0.0);
        // constant vector has no share
        let b = bv(&[1.0, 1.0]);
        let p = GroupPartition::singletons(b.ids().iter().cloned());
        assert!(matches!(between_group_share(&b, &p, 2.0), Err(Error::UndefinedIndex(_))));
    }

    #[test]
    fn limits_approach_theil_and_mld() {
        let b = bv(&[0.4, 1.0, 2.5, 3.0, 0.9]);
        let eps = 1e-6;
        assert!((generalized_entropy(&b, 1.0 + eps).unwrap() - theil(&b).unwrap()).abs() < 1e-4);
        assert!((generalized_entropy(&b, eps).unwrap() - mean_log_deviation(&b).unwrap()).abs() < 1e-4);
    }

    #[test]
    fn ge2_is_half_squared_cv() {
        let b = bv(&[0.2, 4.0, 1.5, 0.0, 2.2, 3.3]);
        let cv = coefficient_of_variation(&b).unwrap();
        assert_relative_eq!(generalized_entropy(&b, 2.0).unwrap(), cv * cv / 2.0, max_relative = 1e-9);
    }

    #[test]
    fn indexed_decomposition_agrees() {
        let values = [1.0, 0.0, 2.0, 2.0, 1.0, 0.5];
        let group_of = [0, 1, 0, 2, 2, 1];
        let (overall, between, within) = decompose_indexed(&values, &group_of, 4, 2.0).unwrap();
        let b = bv(&values);
        let p = GroupPartition::from_labels(
            "g",
            b.ids().iter().cloned().zip(group_of.iter().map(|g| g.to_string())),
        )
        .unwrap();
        let d = decompose(&b, &p, 2.0).unwrap();
        assert_relative_eq!(overall, d.overall, max_relative = 1e-12);
        assert_relative_eq!(between, d.between, max_relative = 1e-12);
        assert_relative_eq!(within, d.within, max_relative = 1e-12);
        assert!(decompose_indexed(&[0.0, 0.0], &[0, 0], 1, 2.0).is_none());
    }
}
