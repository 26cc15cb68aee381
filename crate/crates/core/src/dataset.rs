//! Sample collections, label assignments, and the seeded selection ops that
//! carve them up.
//!
//! A [`Dataset`] is an ordered list of unique string ids with one fixed-width
//! feature row each. Order is load-bearing: every seeded selection walks rows
//! in dataset order, so results are deterministic given `(seed, row order)`
//! and nothing here sorts behind the caller's back.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    ids: Vec<String>,
    features: Vec<f64>,
    dim: usize,
}

impl Dataset {
    /// `features` is row-major, `ids.len() * dim` long. Ids must be unique
    /// and non-empty; features must be finite.
    pub fn new(ids: Vec<String>, features: Vec<f64>, dim: usize) -> Result<Self> {
        if ids.is_empty() || dim == 0 {
            return Err(Error::Config("a dataset needs at least one sample and one feature"));
        }
        if features.len() != ids.len() * dim {
            return Err(Error::DimensionMismatch { expected: ids.len() * dim, found: features.len() });
        }
        let mut seen = BTreeMap::new();
        for (row, id) in ids.iter().enumerate() {
            if id.is_empty() {
                return Err(Error::Config("sample ids must be non-empty"));
            }
            if seen.insert(id.clone(), row).is_some() {
                return Err(Error::DuplicateId { id: id.clone() });
            }
        }
        for (idx, &v) in features.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteFeature { row: idx / dim, col: idx % dim });
            }
        }
        Ok(Self { ids, features, dim })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.features.chunks_exact(self.dim)
    }

    /// Map from id to row index, for joining external per-id records.
    pub fn id_index(&self) -> BTreeMap<&str, usize> {
        self.ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect()
    }
}

/// Ordered list of class names; position defines the class index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCatalog {
    names: Vec<String>,
}

impl ClassCatalog {
    pub fn new(names: Vec<String>) -> Result<Self> {
        if names.len() < 2 {
            return Err(Error::Config("a class catalog needs at least two classes"));
        }
        let mut seen: BTreeMap<&str, ()> = BTreeMap::new();
        for name in &names {
            if name.is_empty() {
                return Err(Error::Config("class names must be nonempty"));
            }
            if seen.insert(name, ()).is_some() {
                return Err(Error::DuplicateClass { name: name.clone() });
            }
        }
        Ok(Self { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, class: usize) -> &str {
        &self.names[class]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Per-id class labels against a catalog of `n_classes` classes.
///
/// An assignment may cover any subset of a dataset, down to none of it; it is
/// joined against a concrete [`Dataset`] when row indices are needed.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelAssignment {
    by_id: BTreeMap<String, usize>,
    n_classes: usize,
}

impl LabelAssignment {
    pub fn new(pairs: Vec<(String, usize)>, n_classes: usize) -> Result<Self> {
        if n_classes < 2 {
            return Err(Error::Config("a label assignment needs at least two classes"));
        }
        let mut by_id = BTreeMap::new();
        for (id, class) in pairs {
            if class >= n_classes {
                return Err(Error::ClassOutOfRange { class, k: n_classes });
            }
            if by_id.insert(id.clone(), class).is_some() {
                return Err(Error::DuplicateId { id });
            }
        }
        Ok(Self { by_id, n_classes })
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.by_id.iter().map(|(id, &c)| (id.as_str(), c))
    }

    /// Fraction of the dataset this assignment labels. Errors if the
    /// assignment names an id the dataset lacks.
    pub fn coverage_fraction(&self, dataset: &Dataset) -> Result<f64> {
        Ok(self.join(dataset)?.len() as f64 / dataset.len() as f64)
    }

    /// Resolves ids to `(row, class)` pairs in dataset row order.
    pub fn join(&self, dataset: &Dataset) -> Result<Vec<(usize, usize)>> {
        let index = dataset.id_index();
        let mut rows = Vec::with_capacity(self.by_id.len());
        for (id, &class) in &self.by_id {
            match index.get(id.as_str()) {
                Some(&row) => rows.push((row, class)),
                None => return Err(Error::UnknownId { id: id.clone() }),
            }
        }
        rows.sort_unstable();
        Ok(rows)
    }

    /// Per-row classes for an assignment that must cover the whole dataset.
    pub fn dense_classes(&self, dataset: &Dataset) -> Result<Vec<usize>> {
        let mut classes = Vec::with_capacity(dataset.len());
        for id in dataset.ids() {
            match self.get(id) {
                Some(c) => classes.push(c),
                None => return Err(Error::MissingLabel { id: id.clone() }),
            }
        }
        Ok(classes)
    }
}

/// Parameters for [`train_test_split`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub test_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainTestSplit {
    pub train: Vec<String>,
    pub test: Vec<String>,
    pub warnings: Vec<String>,
}

/// Smallest count covering `fraction` of `n`, i.e. ceil(fraction * n).
/// The tiny slack absorbs float noise in products like 0.2 * 10 so exact
/// decimal fractions never round a count upward by accident.
fn ceil_count(fraction: f64, n: usize) -> usize {
    libm::ceil(fraction * n as f64 - 1e-9) as usize
}

fn members_per_class(classes: &[usize], n_classes: usize) -> Vec<Vec<usize>> {
    let mut members = alloc::vec![Vec::new(); n_classes];
    for (row, &class) in classes.iter().enumerate() {
        members[class].push(row);
    }
    members
}

/// Selects a label subset with at least one member per class: class k keeps
/// max(1, ceil(fraction * n_k)) members, chosen by shuffling that class's
/// rows (in dataset order) with a single stream seeded by `seed` and taking
/// the prefix. Classes are processed in index order.
pub fn stratified_label_subset(
    dataset: &Dataset,
    truth: &LabelAssignment,
    fraction: f64,
    seed: u64,
) -> Result<LabelAssignment> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::Config("label fraction must be in (0, 1]"));
    }
    let classes = truth.dense_classes(dataset)?;
    let members = members_per_class(&classes, truth.n_classes());

    let mut rng = SplitMix64::new(seed);
    let mut picked: Vec<(String, usize)> = Vec::new();
    for (class, mut rows) in members.into_iter().enumerate() {
        if rows.is_empty() {
            return Err(Error::EmptyClass { class });
        }
        let count = ceil_count(fraction, rows.len()).max(1);
        rng.shuffle(&mut rows);
        rows.truncate(count);
        rows.sort_unstable();
        for row in rows {
            picked.push((dataset.ids()[row].clone(), class));
        }
    }
    LabelAssignment::new(picked, truth.n_classes())
}

/// Splits ids into disjoint, exhaustive train and test sets. Plain mode
/// shuffles all rows and takes ceil(test_fraction * n) for test; stratified
/// mode applies the same rule per class, warning when a class is so small
/// that the rule forces a single test sample. Both id lists come back in
/// dataset row order.
pub fn train_test_split(
    dataset: &Dataset,
    truth: &LabelAssignment,
    spec: &SplitSpec,
) -> Result<TrainTestSplit> {
    if !(spec.test_fraction > 0.0 && spec.test_fraction < 1.0) {
        return Err(Error::Config("test fraction must be in (0, 1)"));
    }
    let mut rng = SplitMix64::new(spec.seed);
    let mut warnings = Vec::new();
    let mut test_rows: Vec<usize> = Vec::new();

    if spec.stratified {
        let classes = truth.dense_classes(dataset)?;
        let members = members_per_class(&classes, truth.n_classes());
        for (class, mut rows) in members.into_iter().enumerate() {
            if rows.is_empty() {
                return Err(Error::EmptyClass { class });
            }
            if spec.test_fraction * (rows.len() as f64) < 1.0 - 1e-9 {
                warnings.push(format!(
                    "class {class} has only {} member(s); the test fraction rounds up to one test sample",
                    rows.len()
                ));
            }
            let count = ceil_count(spec.test_fraction, rows.len()).max(1);
            rng.shuffle(&mut rows);
            test_rows.extend(rows.into_iter().take(count));
        }
    } else {
        let mut rows: Vec<usize> = (0..dataset.len()).collect();
        let count = ceil_count(spec.test_fraction, rows.len()).max(1);
        rng.shuffle(&mut rows);
        test_rows.extend(rows.into_iter().take(count));
    }

    test_rows.sort_unstable();
    let mut in_test = alloc::vec![false; dataset.len()];
    for &row in &test_rows {
        in_test[row] = true;
    }
    let test = test_rows.iter().map(|&r| dataset.ids()[r].clone()).collect();
    let train = (0..dataset.len())
        .filter(|&r| !in_test[r])
        .map(|r| dataset.ids()[r].clone())
        .collect();
    Ok(TrainTestSplit { train, test, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn toy_dataset(n: usize) -> Dataset {
        let ids = (0..n).map(|i| format!("s{i:03}")).collect();
        let features = (0..n).map(|i| i as f64).collect();
        Dataset::new(ids, features, 1).unwrap()
    }

    fn two_class_truth(n: usize) -> LabelAssignment {
        // First half class 0, second half class 1.
        let pairs = (0..n).map(|i| (format!("s{i:03}"), usize::from(i >= n / 2))).collect();
        LabelAssignment::new(pairs, 2).unwrap()
    }

    #[test]
    fn dataset_rejects_duplicate_ids() {
        let err = Dataset::new(vec!["a".into(), "a".into()], vec![1.0, 2.0], 1).unwrap_err();
        assert_eq!(err, Error::DuplicateId { id: "a".to_string() });
    }

    #[test]
    fn class_catalog_maps_names_to_indices() {
        let catalog = ClassCatalog::new(vec!["NoDR".into(), "Mild".into(), "Severe".into()]).unwrap();
        assert_eq!(catalog.len(), 3);
        assert_eq!(catalog.name(1), "Mild");
        assert_eq!(catalog.index_of("Severe"), Some(2));
        assert_eq!(catalog.index_of("PDR"), None);
    }

    #[test]
    fn class_catalog_rejects_duplicates_and_short_lists() {
        let err = ClassCatalog::new(vec!["a".into(), "b".into(), "a".into()]).unwrap_err();
        assert_eq!(err, Error::DuplicateClass { name: "a".to_string() });
        assert!(ClassCatalog::new(vec!["only".into()]).is_err());
        assert!(ClassCatalog::new(vec!["a".into(), "".into()]).is_err());
    }

    #[test]
    fn dataset_rejects_non_finite_features() {
        let err = Dataset::new(vec!["a".into(), "b".into()], vec![1.0, f64::NAN], 1).unwrap_err();
        assert_eq!(err, Error::NonFiniteFeature { row: 1, col: 0 });
    }

    #[test]
    fn dataset_rejects_ragged_feature_buffers() {
        let err = Dataset::new(vec!["a".into(), "b".into()], vec![1.0, 2.0, 3.0], 2).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 4, found: 3 });
    }

    #[test]
    fn label_assignment_rejects_out_of_range_classes() {
        let err = LabelAssignment::new(vec![("a".into(), 5)], 2).unwrap_err();
        assert_eq!(err, Error::ClassOutOfRange { class: 5, k: 2 });
    }

    #[test]
    fn empty_assignment_is_valid_with_zero_coverage() {
        let ds = toy_dataset(4);
        let empty = LabelAssignment::new(vec![], 2).unwrap();
        assert!(empty.is_empty());
        assert_eq!(empty.coverage_fraction(&ds).unwrap(), 0.0);
    }

    #[test]
    fn join_reports_ids_missing_from_the_dataset() {
        let ds = toy_dataset(2);
        let stray = LabelAssignment::new(vec![("ghost".into(), 0)], 2).unwrap();
        assert_eq!(stray.join(&ds).unwrap_err(), Error::UnknownId { id: "ghost".to_string() });
    }

    #[test]
    fn subset_keeps_at_least_one_member_per_class() {
        // Two classes of 10: a 5% fraction still yields one pick per class.
        let ds = toy_dataset(20);
        let truth = two_class_truth(20);
        let subset = stratified_label_subset(&ds, &truth, 0.05, 1).unwrap();
        assert_eq!(subset.len(), 2);
        let classes: Vec<usize> = subset.iter().map(|(_, c)| c).collect();
        assert!(classes.contains(&0) && classes.contains(&1));
    }

    #[test]
    fn subset_fraction_one_selects_everything() {
        let ds = toy_dataset(20);
        let truth = two_class_truth(20);
        let subset = stratified_label_subset(&ds, &truth, 1.0, 9).unwrap();
        assert_eq!(subset.len(), 20);
    }

    #[test]
    fn subset_uses_the_ceiling_rule_per_class() {
        // 10 per class at 0.25 -> ceil(2.5) = 3 each.
        let ds = toy_dataset(20);
        let truth = two_class_truth(20);
        let subset = stratified_label_subset(&ds, &truth, 0.25, 4).unwrap();
        assert_eq!(subset.len(), 6);
    }

    #[test]
    fn subset_is_deterministic_for_a_seed_and_varies_across_seeds() {
        let ds = toy_dataset(40);
        let truth = two_class_truth(40);
        let a = stratified_label_subset(&ds, &truth, 0.3, 5).unwrap();
        let b = stratified_label_subset(&ds, &truth, 0.3, 5).unwrap();
        assert_eq!(a, b);
        let sizes_match = stratified_label_subset(&ds, &truth, 0.3, 6).unwrap();
        assert_eq!(a.len(), sizes_match.len());
    }

    #[test]
    fn subset_rejects_a_class_with_no_members() {
        let ds = toy_dataset(4);
        let pairs = (0..4).map(|i| (format!("s{i:03}"), 0)).collect();
        let truth = LabelAssignment::new(pairs, 3).unwrap();
        let err = stratified_label_subset(&ds, &truth, 0.5, 0).unwrap_err();
        assert_eq!(err, Error::EmptyClass { class: 1 });
    }

    #[test]
    fn subset_requires_full_truth_coverage() {
        let ds = toy_dataset(4);
        let partial = LabelAssignment::new(vec![("s000".into(), 0), ("s001".into(), 1)], 2).unwrap();
        let err = stratified_label_subset(&ds, &partial, 0.5, 0).unwrap_err();
        assert_eq!(err, Error::MissingLabel { id: "s002".to_string() });
    }

    #[test]
    fn plain_split_takes_the_ceiling_for_test() {
        let ds = toy_dataset(10);
        let truth = two_class_truth(10);
        let spec = SplitSpec { test_fraction: 0.2, seed: 3, stratified: false };
        let split = train_test_split(&ds, &truth, &spec).unwrap();
        assert_eq!(split.train.len(), 8);
        assert_eq!(split.test.len(), 2);
        assert!(split.warnings.is_empty());
    }

    #[test]
    fn stratified_split_applies_the_rule_per_class() {
        // Classes of 8 and 2 at 0.5 -> test 4 and 1.
        let ids: Vec<String> = (0..10).map(|i| format!("s{i:03}")).collect();
        let pairs = ids.iter().enumerate().map(|(i, id)| (id.clone(), usize::from(i >= 8))).collect();
        let ds = Dataset::new(ids, (0..10).map(|i| i as f64).collect(), 1).unwrap();
        let truth = LabelAssignment::new(pairs, 2).unwrap();
        let spec = SplitSpec { test_fraction: 0.5, seed: 11, stratified: true };
        let split = train_test_split(&ds, &truth, &spec).unwrap();
        assert_eq!(split.test.len(), 5);
        assert_eq!(split.train.len(), 5);
        let test_high = split.test.iter().filter(|id| truth.get(id).unwrap() == 1).count();
        assert_eq!(test_high, 1);
    }

    #[test]
    fn stratified_split_warns_when_a_class_would_underfill_test() {
        let ids: Vec<String> = (0..5).map(|i| format!("s{i:03}")).collect();
        let pairs = ids.iter().enumerate().map(|(i, id)| (id.clone(), usize::from(i == 4))).collect();
        let ds = Dataset::new(ids, (0..5).map(|i| i as f64).collect(), 1).unwrap();
        let truth = LabelAssignment::new(pairs, 2).unwrap();
        let spec = SplitSpec { test_fraction: 0.4, seed: 2, stratified: true };
        let split = train_test_split(&ds, &truth, &spec).unwrap();
        assert_eq!(split.warnings.len(), 1);
        assert!(split.warnings[0].contains("class 1"));
        // The singleton class lands in test despite 0.4 * 1 < 1.
        assert!(split.test.contains(&"s004".to_string()));
    }

    #[test]
    fn split_is_disjoint_and_exhaustive_across_seeds() {
        let ds = toy_dataset(23);
        let truth = two_class_truth(23);
        for seed in 0..20 {
            for stratified in [false, true] {
                let spec = SplitSpec { test_fraction: 0.3, seed, stratified };
                let split = train_test_split(&ds, &truth, &spec).unwrap();
                let mut all: Vec<&String> = split.train.iter().chain(&split.test).collect();
                all.sort_unstable();
                all.dedup();
                assert_eq!(all.len(), 23, "seed {seed} stratified {stratified}");
            }
        }
    }

    #[test]
    fn split_rejects_out_of_range_fractions() {
        let ds = toy_dataset(4);
        let truth = two_class_truth(4);
        for bad in [0.0, 1.0, -0.1, 1.5] {
            let spec = SplitSpec { test_fraction: bad, seed: 0, stratified: false };
            assert!(train_test_split(&ds, &truth, &spec).is_err(), "fraction {bad}");
        }
    }
}
