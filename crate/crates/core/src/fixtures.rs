//! Small synthetic datasets for tests, examples and smoke runs.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dataio::EncodedDataset;
use crate::seed::rng;

/// Two features and a binary `race` attribute (`White` / `Black`).
///
/// Black rows have `x1` shifted down, so a classifier trained on `x1` misses
/// more Black positives. `x2` is a weak proxy for race that a constrained
/// model can lean on. Positives are a minority, so raising Black acceptance
/// adds false positives faster than it removes false negatives and overall
/// inequality can rise while the group gap closes.
pub fn planted_disparity(n: usize, seed: u64) -> EncodedDataset {
    planted_disparity_with(n, seed, PlantedParams::default())
}

/// Knobs of [`planted_disparity_with`]. `x1 = signal * y - shift * black + N(0,1)`,
/// `x2 = proxy * black + N(0,1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantedParams {
    pub white_share: f64,
    pub base_rate: f64,
    pub signal: f64,
    pub shift: f64,
    pub proxy: f64,
}

impl Default for PlantedParams {
    fn default() -> Self {
        Self {
            white_share: 0.6,
            base_rate: 0.3,
            signal: 1.2,
            shift: 0.9,
            proxy: 0.5,
        }
    }
}

pub fn planted_disparity_with(n: usize, seed: u64, p: PlantedParams) -> EncodedDataset {
    let mut r = rng(seed);
    let mut features = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    let mut sensitive = Vec::with_capacity(n);
    for _ in 0..n {
        let white = r.gen_bool(p.white_share);
        let y = u8::from(r.gen_bool(p.base_rate));
        let minority = if white { 0.0 } else { 1.0 };
        let e1: f64 = StandardNormal.sample(&mut r);
        let e2: f64 = StandardNormal.sample(&mut r);
        features.push(vec![p.signal * f64::from(y) - p.shift * minority + e1, p.proxy * minority + e2]);
        labels.push(y);
        let race = if white { "White" } else { "Black" };
        sensitive.push(BTreeMap::from([("race".to_string(), race.to_string())]));
    }
    EncodedDataset::new(
        (0..n).map(|i| format!("p{i}")).collect(),
        vec!["x1".into(), "x2".into()],
        features,
        labels,
        vec!["race".into()],
        sensitive,
        vec![0, 1],
    )
    .expect("fixture is well formed")
}

/// Every feature row appears once per race, so race carries no signal and the
/// false-negative covariance of any model is zero.
pub fn balanced_fixture(n_pairs: usize, seed: u64) -> EncodedDataset {
    let mut r = rng(seed);
    let mut ids = Vec::with_capacity(2 * n_pairs);
    let mut features = Vec::with_capacity(2 * n_pairs);
    let mut labels = Vec::with_capacity(2 * n_pairs);
    let mut sensitive = Vec::with_capacity(2 * n_pairs);
    for i in 0..n_pairs {
        let y = u8::from(r.gen_bool(0.5));
        let e: f64 = StandardNormal.sample(&mut r);
        for race in ["White", "Black"] {
            ids.push(format!("{race}{i}"));
            features.push(vec![1.2 * f64::from(y) + e]);
            labels.push(y);
            sensitive.push(BTreeMap::from([("race".to_string(), race.to_string())]));
        }
    }
    EncodedDataset::new(ids, vec!["x1".into()], features, labels, vec!["race".into()], sensitive, vec![0])
        .expect("fixture is well formed")
}
