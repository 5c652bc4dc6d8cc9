//! Disjoint group partitions built from sensitive attributes.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::benefit::PredictionSet;
use crate::error::{Error, Result};

/// Attribute values in declared attribute order.
pub type GroupKey = Vec<String>;

/// Human-readable label of a group key, `all` for the empty key.
pub fn key_label(key: &GroupKey) -> String {
    if key.is_empty() {
        "all".to_string()
    } else {
        key.join("/")
    }
}

/// Disjoint assignment of individual ids to groups. Iteration is in sorted key
/// order and no group is ever empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPartition {
    attribute_names: Vec<String>,
    groups: BTreeMap<GroupKey, BTreeSet<String>>,
}

impl GroupPartition {
    /// Checks disjointness and drops empty groups.
    pub fn new(
        attribute_names: Vec<String>,
        groups: BTreeMap<GroupKey, BTreeSet<String>>,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (key, members) in &groups {
            if key.len() != attribute_names.len() {
                return Err(Error::Structural(format!(
                    "group key {key:?} does not match attributes {attribute_names:?}"
                )));
            }
            for id in members {
                if !seen.insert(id.as_str()) {
                    return Err(Error::Structural(format!("`{id}` belongs to two groups")));
                }
            }
        }
        let groups = groups.into_iter().filter(|(_, m)| !m.is_empty()).collect();
        Ok(Self {
            attribute_names,
            groups,
        })
    }

    /// One group per distinct label of a single attribute.
    pub fn from_labels<I>(attribute: &str, assignments: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let mut groups: BTreeMap<GroupKey, BTreeSet<String>> = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for (id, label) in assignments {
            if !seen.insert(id.clone()) {
                return Err(Error::Structural(format!("duplicate id `{id}`")));
            }
            groups.entry(vec![label]).or_default().insert(id);
        }
        Self::new(vec![attribute.to_string()], groups)
    }

    /// Everyone in one group.
    pub fn single<I: IntoIterator<Item = String>>(ids: I) -> Self {
        let members: BTreeSet<String> = ids.into_iter().collect();
        let mut groups = BTreeMap::new();
        if !members.is_empty() {
            groups.insert(Vec::new(), members);
        }
        Self {
            attribute_names: Vec::new(),
            groups,
        }
    }

    /// Every individual in their own group, keyed by id.
    pub fn singletons<I: IntoIterator<Item = String>>(ids: I) -> Self {
        let groups = ids
            .into_iter()
            .map(|id| (vec![id.clone()], BTreeSet::from([id])))
            .collect();
        Self {
            attribute_names: vec!["id".to_string()],
            groups,
        }
    }

    /// One group per observed combination of the named attributes.
    pub fn from_attributes(preds: &PredictionSet, attrs: &[String]) -> Result<Self> {
        for attr in attrs {
            if !preds.attribute_names().contains(attr) {
                return Err(Error::Config(format!(
                    "unknown attribute `{attr}`; available: {}",
                    preds.attribute_names().join(", ")
                )));
            }
        }
        let mut groups: BTreeMap<GroupKey, BTreeSet<String>> = BTreeMap::new();
        for record in preds.records() {
            let key = attrs
                .iter()
                .map(|a| {
                    record.attributes.get(a).cloned().ok_or_else(|| {
                        Error::Config(format!("record `{}` has no attribute `{a}`", record.id))
                    })
                })
                .collect::<Result<GroupKey>>()?;
            groups.entry(key).or_default().insert(record.id.clone());
        }
        Self::new(attrs.to_vec(), groups)
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    pub fn groups(&self) -> impl Iterator<Item = (&GroupKey, &BTreeSet<String>)> {
        self.groups.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &GroupKey> {
        self.groups.keys()
    }

    pub fn members(&self, key: &GroupKey) -> Option<&BTreeSet<String>> {
        self.groups.get(key)
    }

    /// Number of groups.
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn population(&self) -> BTreeSet<String> {
        self.groups.values().flatten().cloned().collect()
    }

    pub fn population_size(&self) -> usize {
        self.groups.values().map(BTreeSet::len).sum()
    }

    pub fn group_of(&self, id: &str) -> Option<&GroupKey> {
        self.groups
            .iter()
            .find(|(_, members)| members.contains(id))
            .map(|(k, _)| k)
    }

    /// Cartesian-product refinement: `i` is in `(g, g')` iff it is in both.
    pub fn product(&self, other: &GroupPartition) -> Result<GroupPartition> {
        let mut other_key: HashMap<&str, &GroupKey> = HashMap::new();
        for (key, members) in &other.groups {
            for id in members {
                other_key.insert(id.as_str(), key);
            }
        }
        if other_key.len() != self.population_size() {
            return Err(Error::Structural(format!(
                "partitions cover {} and {} individuals",
                self.population_size(),
                other_key.len()
            )));
        }
        let mut groups: BTreeMap<GroupKey, BTreeSet<String>> = BTreeMap::new();
        for (key, members) in &self.groups {
            for id in members {
                let k2 = other_key.get(id.as_str()).ok_or_else(|| {
                    Error::Structural(format!("`{id}` is missing from the second partition"))
                })?;
                let mut combined = key.clone();
                combined.extend(k2.iter().cloned());
                groups.entry(combined).or_default().insert(id.clone());
            }
        }
        let mut names = self.attribute_names.clone();
        names.extend(other.attribute_names.iter().cloned());
        GroupPartition::new(names, groups)
    }

    /// Keeps only the given ids; groups left empty are dropped.
    pub fn restrict<'a, I>(&self, ids: I) -> GroupPartition
    where
        I: IntoIterator<Item = &'a str>,
    {
        let keep: BTreeSet<&str> = ids.into_iter().collect();
        let groups = self
            .groups
            .iter()
            .map(|(k, members)| {
                let kept: BTreeSet<String> = members
                    .iter()
                    .filter(|id| keep.contains(id.as_str()))
                    .cloned()
                    .collect();
                (k.clone(), kept)
            })
            .filter(|(_, m)| !m.is_empty())
            .collect();
        GroupPartition {
            attribute_names: self.attribute_names.clone(),
            groups,
        }
    }

    /// The same groups with keys dropped, for comparisons up to relabeling.
    pub fn blocks(&self) -> BTreeSet<BTreeSet<String>> {
        self.groups.values().cloned().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benefit::{PredictionRecord, PredictionSet};

    fn ids(range: std::ops::RangeInclusive<usize>) -> BTreeSet<String> {
        range.map(|i| format!("i{i}")).collect()
    }

    fn fig1() -> GroupPartition {
        let labels = ["g1", "g1", "g2", "g2", "g2", "g2", "g3", "g3", "g3", "g3"];
        GroupPartition::from_labels(
            "group",
            labels
                .iter()
                .enumerate()
                .map(|(i, g)| (format!("i{}", i + 1), g.to_string())),
        )
        .unwrap()
    }

    fn two_attribute_set() -> PredictionSet {
        let rows = [("a", "f", "x"), ("b", "f", "y"), ("c", "m", "x"), ("d", "m", "x"), ("e", "f", "x")];
        let records = rows
            .iter()
            .map(|(id, gender, race)| PredictionRecord {
                id: id.to_string(),
                y_true: 1,
                y_pred: Some(1),
                score: None,
                attributes: BTreeMap::from([
                    ("gender".to_string(), gender.to_string()),
                    ("race".to_string(), race.to_string()),
                ]),
            })
            .collect();
        PredictionSet::new(vec!["gender".into(), "race".into()], records).unwrap()
    }

    #[test]
    fn fig1_groups() {
        let p = fig1();
        assert_eq!(p.len(), 3);
        assert_eq!(p.members(&vec!["g1".into()]).unwrap(), &ids(1..=2));
        assert_eq!(p.members(&vec!["g2".into()]).unwrap(), &ids(3..=6));
        assert_eq!(p.members(&vec!["g3".into()]).unwrap(), &ids(7..=10));
    }

    #[test]
    fn from_attributes_builds_product_keys() {
        let preds = two_attribute_set();
        let p = GroupPartition::from_attributes(&preds, &["gender".into(), "race".into()]).unwrap();
        let keys: Vec<String> = p.keys().map(key_label).collect();
        assert_eq!(keys, vec!["f/x", "f/y", "m/x"]);
        let all = GroupPartition::from_attributes(&preds, &[]).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all.population_size(), 5);
        assert!(matches!(
            GroupPartition::from_attributes(&preds, &["age".into()]),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn product_matches_joint_attributes() {
        let preds = two_attribute_set();
        let gender = GroupPartition::from_attributes(&preds, &["gender".into()]).unwrap();
        let race = GroupPartition::from_attributes(&preds, &["race".into()]).unwrap();
        let joint = GroupPartition::from_attributes(&preds, &["gender".into(), "race".into()]).unwrap();
        assert_eq!(gender.product(&race).unwrap(), joint);
        assert_eq!(race.product(&gender).unwrap().blocks(), joint.blocks());
    }

    #[test]
    fn product_identity_and_idempotence() {
        let p = fig1();
        let trivial = GroupPartition::single(p.population());
        assert_eq!(p.product(&trivial).unwrap().blocks(), p.blocks());
        assert_eq!(p.product(&p).unwrap().blocks(), p.blocks());
    }

    #[test]
    fn product_requires_same_population() {
        let p = fig1();
        let other = GroupPartition::single(ids(1..=9));
        assert!(matches!(p.product(&other), Err(Error::Structural(_))));
    }

    #[test]
    fn restrict_examples() {
        let p = fig1();
        let full = p.population();
        assert_eq!(p.restrict(full.iter().map(String::as_str)), p);
        let r = p.restrict(["i2", "i3", "i5", "i6", "i8"]);
        assert_eq!(r.members(&vec!["g1".into()]).unwrap(), &BTreeSet::from(["i2".to_string()]));
        assert_eq!(
            r.members(&vec!["g2".into()]).unwrap(),
            &["i3", "i5", "i6"].map(String::from).into_iter().collect()
        );
        assert_eq!(r.members(&vec!["g3".into()]).unwrap(), &BTreeSet::from(["i8".to_string()]));
        let one = p.restrict(["i3", "i4"]);
        assert_eq!(one.len(), 1);
    }

    #[test]
    fn rejects_overlap_and_duplicates() {
        let mut groups = BTreeMap::new();
        groups.insert(vec!["a".to_string()], BTreeSet::from(["1".to_string()]));
        groups.insert(vec!["b".to_string()], BTreeSet::from(["1".to_string()]));
        assert!(matches!(GroupPartition::new(vec!["g".into()], groups), Err(Error::Structural(_))));
        let dup = GroupPartition::from_labels("g", [("1".into(), "a".into()), ("1".into(), "b".into())]);
        assert!(matches!(dup, Err(Error::Structural(_))));
    }

    #[test]
    fn group_lookup() {
        let p = fig1();
        assert_eq!(p.group_of("i5"), Some(&vec!["g2".to_string()]));
        assert_eq!(p.group_of("zz"), None);
        assert_eq!(key_label(&vec![]), "all");
    }
}
