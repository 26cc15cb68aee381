//! Confusion-matrix classification metrics and inter-rater agreement.
//!
//! Abstentions (indeterminate predictions) are tracked separately from the
//! K-by-K tallies and count against accuracy, so refusing to predict never
//! inflates a score. Every metric is a total function: zero-denominator
//! cells are defined as 0, and kappa with expected agreement 1 is defined
//! as 1, so no NaN can escape.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::{ClassCatalog, LabelAssignment};
use crate::error::{Error, Result};

/// K-by-K tally of (true class, predicted class) pairs, rows indexed by the
/// true class, plus a count of indeterminate predictions that are excluded
/// from the grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    k: usize,
    counts: Vec<usize>,
    indeterminate_count: usize,
}

impl ConfusionMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn count(&self, true_class: usize, pred_class: usize) -> usize {
        self.counts[true_class * self.k + pred_class]
    }

    pub fn indeterminate(&self) -> usize {
        self.indeterminate_count
    }

    /// Determinate predictions in the grid.
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn trace(&self) -> usize {
        (0..self.k).map(|c| self.count(c, c)).sum()
    }

    fn row_sum(&self, true_class: usize) -> usize {
        (0..self.k).map(|c| self.count(true_class, c)).sum()
    }

    fn col_sum(&self, pred_class: usize) -> usize {
        (0..self.k).map(|r| self.count(r, pred_class)).sum()
    }
}

/// Precision, recall, and F1 of one class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Full metric set over one confusion matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    /// Correct predictions over all evaluated samples, indeterminate ones
    /// included in the denominator.
    pub accuracy: f64,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    /// Chance-corrected agreement between truth and prediction, computed on
    /// the determinate subset.
    pub kappa: f64,
    pub per_class: Vec<ClassMetrics>,
    pub indeterminate: usize,
}

/// Tallies aligned class sequences into a confusion matrix. `None` marks an
/// indeterminate prediction.
pub fn tally_confusion(truth: &[usize], pred: &[Option<usize>], k: usize) -> Result<ConfusionMatrix> {
    if k < 2 {
        return Err(Error::Config("a confusion matrix needs at least two classes"));
    }
    if truth.len() != pred.len() {
        return Err(Error::DimensionMismatch { expected: truth.len(), found: pred.len() });
    }
    let mut counts = vec![0usize; k * k];
    let mut indeterminate_count = 0;
    for (&t, &p) in truth.iter().zip(pred) {
        if t >= k {
            return Err(Error::ClassOutOfRange { class: t, k });
        }
        match p {
            None => indeterminate_count += 1,
            Some(c) if c >= k => return Err(Error::ClassOutOfRange { class: c, k }),
            Some(c) => counts[t * k + c] += 1,
        }
    }
    Ok(ConfusionMatrix { k, counts, indeterminate_count })
}

/// Joins per-id predictions against per-id truth and tallies them. Every
/// predicted id must have a truth entry; truth may cover more ids than were
/// predicted.
pub fn confusion_matrix(
    truth: &LabelAssignment,
    pred: &[(String, Option<usize>)],
    catalog: &ClassCatalog,
) -> Result<ConfusionMatrix> {
    if truth.n_classes() != catalog.len() {
        return Err(Error::DimensionMismatch { expected: catalog.len(), found: truth.n_classes() });
    }
    let mut truth_classes = Vec::with_capacity(pred.len());
    let mut pred_classes = Vec::with_capacity(pred.len());
    for (id, p) in pred {
        let t = truth.get(id).ok_or_else(|| Error::MissingLabel { id: id.clone() })?;
        truth_classes.push(t);
        pred_classes.push(*p);
    }
    tally_confusion(&truth_classes, &pred_classes, catalog.len())
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Kappa over the determinate tallies; expected agreement of exactly 1
/// (both marginals concentrated on one identical class) yields 1.
fn kappa_value(cm: &ConfusionMatrix) -> f64 {
    let total = cm.total();
    let mut chance: u128 = 0;
    for c in 0..cm.k() {
        chance += cm.row_sum(c) as u128 * cm.col_sum(c) as u128;
    }
    let total_sq = total as u128 * total as u128;
    if chance == total_sq {
        return 1.0;
    }
    let p_o = cm.trace() as f64 / total as f64;
    let p_e = chance as f64 / total_sq as f64;
    (p_o - p_e) / (1.0 - p_e)
}

/// Computes the full metric set from a confusion matrix with at least one
/// determinate prediction.
pub fn classification_metrics(cm: &ConfusionMatrix) -> Result<MetricsReport> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::Config("confusion matrix has no determinate predictions"));
    }
    let mut per_class = Vec::with_capacity(cm.k());
    for c in 0..cm.k() {
        let precision = ratio(cm.count(c, c), cm.col_sum(c));
        let recall = ratio(cm.count(c, c), cm.row_sum(c));
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        per_class.push(ClassMetrics { precision, recall, f1 });
    }
    let k = cm.k() as f64;
    Ok(MetricsReport {
        accuracy: cm.trace() as f64 / (total + cm.indeterminate()) as f64,
        macro_precision: per_class.iter().map(|m| m.precision).sum::<f64>() / k,
        macro_recall: per_class.iter().map(|m| m.recall).sum::<f64>() / k,
        macro_f1: per_class.iter().map(|m| m.f1).sum::<f64>() / k,
        kappa: kappa_value(cm),
        per_class,
        indeterminate: cm.indeterminate(),
    })
}

/// Cohen's kappa between two raters over the ids they share.
pub fn cohen_kappa(
    rater_a: &LabelAssignment,
    rater_b: &LabelAssignment,
    catalog: &ClassCatalog,
) -> Result<f64> {
    let k = catalog.len();
    if rater_a.n_classes() != k {
        return Err(Error::DimensionMismatch { expected: k, found: rater_a.n_classes() });
    }
    if rater_b.n_classes() != k {
        return Err(Error::DimensionMismatch { expected: k, found: rater_b.n_classes() });
    }
    let mut a_classes = Vec::new();
    let mut b_classes = Vec::new();
    for (id, a) in rater_a.iter() {
        if let Some(b) = rater_b.get(id) {
            a_classes.push(a);
            b_classes.push(Some(b));
        }
    }
    if a_classes.is_empty() {
        return Err(Error::Config("raters share no ids"));
    }
    let cm = tally_confusion(&a_classes, &b_classes, k)?;
    Ok(kappa_value(&cm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use alloc::format;

    fn catalog(k: usize) -> ClassCatalog {
        ClassCatalog::new((0..k).map(|c| format!("c{c}")).collect()).unwrap()
    }

    fn assignment(pairs: &[(&str, usize)], k: usize) -> LabelAssignment {
        LabelAssignment::new(pairs.iter().map(|(id, c)| (String::from(*id), *c)).collect(), k)
            .unwrap()
    }

    #[test]
    fn tally_counts_true_by_predicted() {
        let cm =
            tally_confusion(&[0, 0, 1, 1], &[Some(0), Some(1), Some(1), Some(1)], 2).unwrap();
        assert_eq!(cm.count(0, 0), 1);
        assert_eq!(cm.count(0, 1), 1);
        assert_eq!(cm.count(1, 0), 0);
        assert_eq!(cm.count(1, 1), 2);
        assert_eq!(cm.total(), 4);
        assert_eq!(cm.indeterminate(), 0);
    }

    #[test]
    fn perfect_predictions_land_on_the_diagonal() {
        let truth = [0, 1, 2, 1];
        let pred: Vec<Option<usize>> = truth.iter().map(|&t| Some(t)).collect();
        let cm = tally_confusion(&truth, &pred, 3).unwrap();
        assert_eq!(cm.trace(), 4);
        assert_eq!(cm.total(), 4);
        let report = classification_metrics(&cm).unwrap();
        assert_eq!(report.accuracy, 1.0);
        assert_eq!(report.macro_precision, 1.0);
        assert_eq!(report.macro_recall, 1.0);
        assert_eq!(report.macro_f1, 1.0);
        assert_eq!(report.kappa, 1.0);
    }

    #[test]
    fn abstentions_count_against_accuracy_only() {
        let cm = tally_confusion(&[0, 0, 1, 1], &[Some(0), None, Some(1), Some(1)], 2).unwrap();
        assert_eq!(cm.indeterminate(), 1);
        assert_eq!(cm.total(), 3);
        let report = classification_metrics(&cm).unwrap();
        // 3 correct out of 4 evaluated; the abstention is in the denominator.
        assert_eq!(report.accuracy, 0.75);
        assert_eq!(report.indeterminate, 1);
        // The grid itself is perfect, so per-class metrics are all 1.
        assert_eq!(report.macro_f1, 1.0);
    }

    #[test]
    fn metrics_match_the_hand_worked_two_class_case() {
        let cm =
            tally_confusion(&[0, 0, 1, 1], &[Some(0), Some(1), Some(1), Some(1)], 2).unwrap();
        let report = classification_metrics(&cm).unwrap();
        assert_eq!(report.accuracy, 0.75);
        assert_eq!(report.per_class[0].precision, 1.0);
        assert_eq!(report.per_class[0].recall, 0.5);
        assert!((report.per_class[0].f1 - 2.0 / 3.0).abs() < 1e-12);
        assert!((report.per_class[1].precision - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(report.per_class[1].recall, 1.0);
        assert!((report.per_class[1].f1 - 0.8).abs() < 1e-12);
        assert!((report.macro_precision - 5.0 / 6.0).abs() < 1e-12);
        assert_eq!(report.macro_recall, 0.75);
        assert!((report.macro_f1 - 11.0 / 15.0).abs() < 1e-12);
        assert_eq!(report.kappa, 0.5);
    }

    #[test]
    fn single_class_predictions_hit_the_degenerate_rules() {
        let cm = tally_confusion(&[0, 1], &[Some(1), Some(1)], 2).unwrap();
        let report = classification_metrics(&cm).unwrap();
        assert_eq!(report.per_class[1].recall, 1.0);
        assert_eq!(report.per_class[0].recall, 0.0);
        // Class 0's column is empty, so precision and F1 are 0, not NaN.
        assert_eq!(report.per_class[0].precision, 0.0);
        assert_eq!(report.per_class[0].f1, 0.0);
        assert_eq!(report.per_class[1].precision, 0.5);
    }

    #[test]
    fn metrics_require_a_determinate_prediction() {
        let empty = tally_confusion(&[], &[], 2).unwrap();
        assert!(classification_metrics(&empty).is_err());
        let all_abstained = tally_confusion(&[0, 1], &[None, None], 2).unwrap();
        assert!(classification_metrics(&all_abstained).is_err());
    }

    #[test]
    fn by_id_join_requires_truth_for_every_prediction() {
        let truth = assignment(&[("a", 0), ("b", 1)], 2);
        let pred = vec![(String::from("a"), Some(0)), (String::from("zz"), Some(1))];
        assert_eq!(
            confusion_matrix(&truth, &pred, &catalog(2)),
            Err(Error::MissingLabel { id: String::from("zz") })
        );

        // Truth covering extra ids is fine; only predictions are evaluated.
        let partial = vec![(String::from("a"), Some(1))];
        let cm = confusion_matrix(&truth, &partial, &catalog(2)).unwrap();
        assert_eq!(cm.total(), 1);
        assert_eq!(cm.count(0, 1), 1);
    }

    #[test]
    fn kappa_matches_hand_values() {
        let cat = catalog(2);
        let a = assignment(&[("w", 0), ("x", 0), ("y", 1), ("z", 1)], 2);
        assert_eq!(cohen_kappa(&a, &a, &cat).unwrap(), 1.0);

        let b = assignment(&[("w", 0), ("x", 1), ("y", 1), ("z", 1)], 2);
        assert_eq!(cohen_kappa(&a, &b, &cat).unwrap(), 0.5);

        let constant = assignment(&[("w", 1), ("x", 1), ("y", 1), ("z", 1)], 2);
        assert_eq!(cohen_kappa(&a, &constant, &cat).unwrap(), 0.0);
    }

    #[test]
    fn kappa_defines_total_identical_agreement_as_one() {
        let cat = catalog(2);
        let a = assignment(&[("x", 1), ("y", 1)], 2);
        // Both raters constant and identical: expected agreement is exactly
        // 1, which the formula would turn into 0/0.
        assert_eq!(cohen_kappa(&a, &a.clone(), &cat).unwrap(), 1.0);
    }

    #[test]
    fn kappa_needs_a_shared_id() {
        let cat = catalog(2);
        let a = assignment(&[("x", 0)], 2);
        let b = assignment(&[("y", 0)], 2);
        assert_eq!(cohen_kappa(&a, &b, &cat), Err(Error::Config("raters share no ids")));
    }

    #[test]
    fn kappa_evaluates_only_the_shared_ids() {
        let cat = catalog(2);
        let a = assignment(&[("w", 0), ("x", 0), ("y", 1), ("z", 1), ("extra", 0)], 2);
        let b = assignment(&[("w", 0), ("x", 1), ("y", 1), ("z", 1), ("other", 1)], 2);
        assert_eq!(cohen_kappa(&a, &b, &cat).unwrap(), 0.5);
    }

    #[test]
    fn metrics_are_order_invariant() {
        let truth = [0, 1, 2, 2, 1, 0, 2];
        let pred = [Some(0), Some(2), Some(2), None, Some(1), Some(1), Some(0)];
        let forward = classification_metrics(&tally_confusion(&truth, &pred, 3).unwrap()).unwrap();
        let rev_truth: Vec<usize> = truth.iter().rev().copied().collect();
        let rev_pred: Vec<Option<usize>> = pred.iter().rev().copied().collect();
        let backward =
            classification_metrics(&tally_confusion(&rev_truth, &rev_pred, 3).unwrap()).unwrap();
        assert_eq!(forward, backward);
    }

    #[test]
    fn relabeling_classes_permutes_per_class_metrics() {
        let mut rng = SplitMix64::new(77);
        let n = 60;
        let truth: Vec<usize> = (0..n).map(|_| rng.next_index(3)).collect();
        let pred: Vec<Option<usize>> = (0..n)
            .map(|_| if rng.next_f64() < 0.1 { None } else { Some(rng.next_index(3)) })
            .collect();
        // Relabel classes by the cycle 0 -> 1 -> 2 -> 0.
        let map = [1, 2, 0];
        let truth2: Vec<usize> = truth.iter().map(|&t| map[t]).collect();
        let pred2: Vec<Option<usize>> = pred.iter().map(|p| p.map(|c| map[c])).collect();

        let r1 = classification_metrics(&tally_confusion(&truth, &pred, 3).unwrap()).unwrap();
        let r2 = classification_metrics(&tally_confusion(&truth2, &pred2, 3).unwrap()).unwrap();
        assert!((r1.accuracy - r2.accuracy).abs() < 1e-12);
        assert!((r1.kappa - r2.kappa).abs() < 1e-12);
        assert!((r1.macro_f1 - r2.macro_f1).abs() < 1e-12);
        for (c, &mapped) in map.iter().enumerate() {
            assert_eq!(r1.per_class[c], r2.per_class[mapped]);
        }
    }

    #[test]
    fn no_nan_escapes_random_tallies() {
        let mut rng = SplitMix64::new(78);
        for _ in 0..50 {
            let n = 1 + rng.next_index(30);
            let k = 2 + rng.next_index(4);
            let truth: Vec<usize> = (0..n).map(|_| rng.next_index(k)).collect();
            let pred: Vec<Option<usize>> = (0..n)
                .map(|_| if rng.next_f64() < 0.2 { None } else { Some(rng.next_index(k)) })
                .collect();
            let cm = tally_confusion(&truth, &pred, k).unwrap();
            if cm.total() == 0 {
                continue;
            }
            let report = classification_metrics(&cm).unwrap();
            assert!(report.accuracy.is_finite() && (0.0..=1.0).contains(&report.accuracy));
            assert!(report.kappa.is_finite() && report.kappa <= 1.0);
            for m in &report.per_class {
                for v in [m.precision, m.recall, m.f1] {
                    assert!(v.is_finite() && (0.0..=1.0).contains(&v));
                }
            }
        }
    }
}
