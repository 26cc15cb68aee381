//! Seeded synthetic datasets, a supervised nearest-neighbor baseline, and
//! an end-to-end benchmark loop comparing it against label propagation.
//!
//! Scoring is transductive: only unlabeled samples count, since those are
//! what the propagation actually infers. Labeling everything leaves nothing
//! to evaluate, which the benchmark reports as "n/a" rather than an error.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::{stratified_label_subset, ClassCatalog, Dataset, LabelAssignment};
use crate::error::{Error, Result};
use crate::graph::{build_graph, GraphConfig};
use crate::metrics::{classification_metrics, tally_confusion};
use crate::rng::SplitMix64;
use crate::solver::{fit, init_label_matrix, predict, SolverConfig};

/// One Gaussian blob: where it sits, which class it carries, and its share
/// of the sample budget.
#[derive(Debug, Clone, PartialEq)]
pub struct BlobSpec {
    pub center: Vec<f64>,
    pub class: usize,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SyntheticFamily {
    /// Two interleaved half-circles, classes 0 and 1, n/2 points each.
    TwoMoons,
    /// Gaussian blobs with largest-remainder apportionment of n.
    Blobs { centers: Vec<BlobSpec> },
}

/// Recipe for one synthetic dataset; equal specs generate identical data.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub family: SyntheticFamily,
    pub n: usize,
    /// Standard deviation of the additive Gaussian noise, in feature units.
    pub noise: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.noise.is_finite() || self.noise < 0.0 {
            return Err(Error::Config("noise must be >= 0"));
        }
        match &self.family {
            SyntheticFamily::TwoMoons => {
                if !self.n.is_multiple_of(2) {
                    return Err(Error::Config("two-moons needs an even sample count"));
                }
                if self.n < 4 {
                    return Err(Error::Config("sample count must be at least twice the class count"));
                }
            }
            SyntheticFamily::Blobs { centers } => {
                if centers.is_empty() {
                    return Err(Error::Config("blobs need at least one center"));
                }
                let dim = centers[0].center.len();
                if dim == 0 {
                    return Err(Error::Config("blob centers need at least one dimension"));
                }
                let mut fraction_sum = 0.0;
                for blob in centers {
                    if blob.center.len() != dim {
                        return Err(Error::DimensionMismatch { expected: dim, found: blob.center.len() });
                    }
                    if blob.center.iter().any(|v| !v.is_finite()) {
                        return Err(Error::Config("blob centers must be finite"));
                    }
                    if !blob.fraction.is_finite() || blob.fraction < 0.0 {
                        return Err(Error::Config("blob fractions must be >= 0"));
                    }
                    fraction_sum += blob.fraction;
                }
                if (fraction_sum - 1.0).abs() > 1e-9 {
                    return Err(Error::Config("blob fractions must sum to 1"));
                }
                let k = self.class_count();
                if self.n < 2 * k {
                    return Err(Error::Config("sample count must be at least twice the class count"));
                }
            }
        }
        Ok(())
    }

    /// Number of classes the generated assignment will use.
    pub fn class_count(&self) -> usize {
        match &self.family {
            SyntheticFamily::TwoMoons => 2,
            SyntheticFamily::Blobs { centers } => {
                centers.iter().map(|b| b.class + 1).max().unwrap_or(0)
            }
        }
    }
}

/// The imbalanced five-blob arrangement used by the severity experiments:
/// classes 0..4 on a line with shares 35/25/20/15/5 percent, the rarest
/// class last.
pub fn severity_blob_preset(n: usize, noise: f64, seed: u64) -> SyntheticSpec {
    let fractions = [0.35, 0.25, 0.2, 0.15, 0.05];
    let centers = fractions
        .iter()
        .enumerate()
        .map(|(class, &fraction)| BlobSpec {
            center: vec![2.0 * class as f64, 0.0],
            class,
            fraction,
        })
        .collect();
    SyntheticSpec { family: SyntheticFamily::Blobs { centers }, n, noise, seed }
}

fn point_ids(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

fn full_assignment(ids: &[String], classes: &[usize], k: usize) -> LabelAssignment {
    let pairs = ids.iter().cloned().zip(classes.iter().copied()).collect();
    LabelAssignment::new(pairs, k).expect("generated labels are valid")
}

/// Two interleaved half-circles: class 0 at `(cos t, sin t)` and class 1 at
/// `(1 − cos t, 0.5 − sin t)` for `t` uniform on `[0, π]`, plus isotropic
/// Gaussian noise. The first n/2 rows are class 0.
pub fn gen_two_moons(spec: &SyntheticSpec) -> Result<(Dataset, LabelAssignment)> {
    if !matches!(spec.family, SyntheticFamily::TwoMoons) {
        return Err(Error::Config("spec family must be two-moons"));
    }
    spec.validate()?;
    let n = spec.n;
    let mut rng = SplitMix64::new(spec.seed);
    let mut features = Vec::with_capacity(n * 2);
    let mut classes = Vec::with_capacity(n);
    for i in 0..n {
        let class = usize::from(i >= n / 2);
        let t = rng.next_f64() * core::f64::consts::PI;
        let (base_x, base_y) = if class == 0 {
            (libm::cos(t), libm::sin(t))
        } else {
            (1.0 - libm::cos(t), 0.5 - libm::sin(t))
        };
        features.push(base_x + spec.noise * rng.next_gaussian());
        features.push(base_y + spec.noise * rng.next_gaussian());
        classes.push(class);
    }
    let ids = point_ids(n);
    let truth = full_assignment(&ids, &classes, 2);
    Ok((Dataset::new(ids, features, 2)?, truth))
}

/// Largest-remainder apportionment of `n` into the given shares: floor each
/// product, then hand the leftover units to the largest remainders (ties to
/// the lower index).
fn apportion(fractions: &[f64], n: usize) -> Vec<usize> {
    let mut counts: Vec<usize> = Vec::with_capacity(fractions.len());
    let mut remainders: Vec<(usize, f64)> = Vec::with_capacity(fractions.len());
    for (i, f) in fractions.iter().enumerate() {
        let product = f * n as f64;
        let floor = libm::floor(product) as usize;
        counts.push(floor);
        remainders.push((i, product - floor as f64));
    }
    let assigned: usize = counts.iter().sum();
    remainders.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    for &(i, _) in remainders.iter().take(n.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

/// Gaussian blobs at the configured centers; blob order defines row order,
/// and each coordinate draws one seeded normal deviate scaled by `noise`.
pub fn gen_blobs(spec: &SyntheticSpec) -> Result<(Dataset, LabelAssignment)> {
    let SyntheticFamily::Blobs { centers } = &spec.family else {
        return Err(Error::Config("spec family must be blobs"));
    };
    spec.validate()?;
    let fractions: Vec<f64> = centers.iter().map(|b| b.fraction).collect();
    let counts = apportion(&fractions, spec.n);
    let dim = centers[0].center.len();
    let k = spec.class_count();

    let mut rng = SplitMix64::new(spec.seed);
    let mut features = Vec::with_capacity(spec.n * dim);
    let mut classes = Vec::with_capacity(spec.n);
    for (blob, &count) in centers.iter().zip(&counts) {
        for _ in 0..count {
            for &c in &blob.center {
                features.push(c + spec.noise * rng.next_gaussian());
            }
            classes.push(blob.class);
        }
    }
    let ids = point_ids(spec.n);
    let truth = full_assignment(&ids, &classes, k);
    Ok((Dataset::new(ids, features, dim)?, truth))
}

/// Supervised comparator: every sample takes the class of its nearest
/// labeled sample (Euclidean, distance ties to the lower row index). A
/// labeled sample is its own nearest neighbor, so it keeps its label.
pub fn one_nn_baseline(dataset: &Dataset, labeled: &LabelAssignment) -> Result<LabelAssignment> {
    let anchors = labeled.join(dataset)?;
    if anchors.is_empty() {
        return Err(Error::Config("at least one labeled sample is required"));
    }
    let mut pairs = Vec::with_capacity(dataset.len());
    for (i, row) in dataset.rows().enumerate() {
        let mut best_class = anchors[0].1;
        let mut best_dist = f64::INFINITY;
        for &(anchor_row, class) in &anchors {
            let dist: f64 = dataset
                .row(anchor_row)
                .iter()
                .zip(row)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if dist < best_dist {
                best_dist = dist;
                best_class = class;
            }
        }
        pairs.push((dataset.ids()[i].clone(), best_class));
    }
    LabelAssignment::new(pairs, labeled.n_classes())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BenchMethod {
    Ssgl,
    OneNn,
}

impl BenchMethod {
    pub fn name(&self) -> &'static str {
        match self {
            BenchMethod::Ssgl => "ssgl",
            BenchMethod::OneNn => "1nn",
        }
    }
}

/// Transductive scores of one method on one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchMetrics {
    pub accuracy: f64,
    pub macro_f1: f64,
    /// Recall per class, all K classes.
    pub recalls: Vec<f64>,
}

/// One row of the benchmark table; `metrics` is `None` when there were no
/// unlabeled samples to score.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub method: BenchMethod,
    pub trial: usize,
    pub metrics: Option<BenchMetrics>,
}

/// Mean and population standard deviation over trials.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryStats {
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    pub mean_macro_f1: f64,
    pub std_macro_f1: f64,
    pub mean_recalls: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    pub method: BenchMethod,
    /// `None` when no trial produced scores.
    pub stats: Option<SummaryStats>,
}

/// Full benchmark result: per-trial rows (grouped by method, then trial)
/// plus per-method summaries.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkTable {
    pub class_count: usize,
    pub rows: Vec<BenchRow>,
    pub summary: Vec<MethodSummary>,
}

fn score_rows(
    truth: &[usize],
    predictions: &[Option<usize>],
    rows: &[usize],
    k: usize,
) -> Result<BenchMetrics> {
    let subset_truth: Vec<usize> = rows.iter().map(|&r| truth[r]).collect();
    let subset_pred: Vec<Option<usize>> = rows.iter().map(|&r| predictions[r]).collect();
    let report = classification_metrics(&tally_confusion(&subset_truth, &subset_pred, k)?)?;
    Ok(BenchMetrics {
        accuracy: report.accuracy,
        macro_f1: report.macro_f1,
        recalls: report.per_class.iter().map(|m| m.recall).collect(),
    })
}

fn summarize(method: BenchMethod, rows: &[BenchRow], k: usize) -> MethodSummary {
    let scored: Vec<&BenchMetrics> = rows
        .iter()
        .filter(|r| r.method == method)
        .filter_map(|r| r.metrics.as_ref())
        .collect();
    if scored.is_empty() {
        return MethodSummary { method, stats: None };
    }
    let n = scored.len() as f64;
    let mean = |pick: &dyn Fn(&BenchMetrics) -> f64| scored.iter().map(|m| pick(m)).sum::<f64>() / n;
    let std = |pick: &dyn Fn(&BenchMetrics) -> f64, mean: f64| {
        libm::sqrt(scored.iter().map(|m| (pick(m) - mean) * (pick(m) - mean)).sum::<f64>() / n)
    };
    let mean_accuracy = mean(&|m| m.accuracy);
    let mean_macro_f1 = mean(&|m| m.macro_f1);
    let mean_recalls = (0..k)
        .map(|c| scored.iter().map(|m| m.recalls[c]).sum::<f64>() / n)
        .collect();
    MethodSummary {
        method,
        stats: Some(SummaryStats {
            std_accuracy: std(&|m| m.accuracy, mean_accuracy),
            std_macro_f1: std(&|m| m.macro_f1, mean_macro_f1),
            mean_accuracy,
            mean_macro_f1,
            mean_recalls,
        }),
    }
}

/// Runs `trials` seeded end-to-end comparisons of label propagation
/// against the 1-NN baseline.
///
/// Trial `t` generates data with seed `base + t`, labels a stratified
/// fraction of it, fits both methods, and scores only the unlabeled rows.
/// With `label_fraction = 1` there is nothing to score and every row
/// reports `None`.
pub fn run_benchmark(
    spec: &SyntheticSpec,
    label_fraction: f64,
    graph_config: &GraphConfig,
    solver_config: &SolverConfig,
    trials: usize,
) -> Result<BenchmarkTable> {
    spec.validate()?;
    let k = spec.class_count();
    solver_config.validate(k)?;
    if trials == 0 {
        return Err(Error::Config("at least one trial is required"));
    }
    if !(label_fraction > 0.0 && label_fraction <= 1.0) {
        return Err(Error::Config("label fraction must lie in (0, 1]"));
    }
    let catalog = ClassCatalog::new((0..k).map(|c| format!("c{c}")).collect())?;

    let mut ssgl_rows = Vec::with_capacity(trials);
    let mut baseline_rows = Vec::with_capacity(trials);
    for trial in 0..trials {
        let trial_spec = SyntheticSpec { seed: spec.seed.wrapping_add(trial as u64), ..spec.clone() };
        let (dataset, truth) = match trial_spec.family {
            SyntheticFamily::TwoMoons => gen_two_moons(&trial_spec)?,
            SyntheticFamily::Blobs { .. } => gen_blobs(&trial_spec)?,
        };
        let truth_classes = truth.dense_classes(&dataset)?;
        // Decorrelate the subset shuffle from the generator stream.
        let subset_seed = trial_spec.seed ^ 0x9e37_79b9_7f4a_7c15;
        let labeled = stratified_label_subset(&dataset, &truth, label_fraction, subset_seed)?;
        let labeled_rows = labeled.join(&dataset)?;
        let labeled_set: Vec<bool> = {
            let mut mask = vec![false; dataset.len()];
            for &(row, _) in &labeled_rows {
                mask[row] = true;
            }
            mask
        };
        let unlabeled: Vec<usize> = (0..dataset.len()).filter(|&r| !labeled_set[r]).collect();

        if unlabeled.is_empty() {
            ssgl_rows.push(BenchRow { method: BenchMethod::Ssgl, trial, metrics: None });
            baseline_rows.push(BenchRow { method: BenchMethod::OneNn, trial, metrics: None });
            continue;
        }

        let graph = build_graph(&dataset, graph_config)?;
        let label_matrix = init_label_matrix(dataset.len(), k, &labeled_rows)?;
        let (scores, _, _) = fit(&graph, &label_matrix, solver_config)?;
        let ssgl_pred: Vec<Option<usize>> = predict(&scores, &catalog, solver_config)?
            .iter()
            .map(|p| p.class)
            .collect();
        ssgl_rows.push(BenchRow {
            method: BenchMethod::Ssgl,
            trial,
            metrics: Some(score_rows(&truth_classes, &ssgl_pred, &unlabeled, k)?),
        });

        let nn = one_nn_baseline(&dataset, &labeled)?;
        let nn_classes = nn.dense_classes(&dataset)?;
        let nn_pred: Vec<Option<usize>> = nn_classes.iter().map(|&c| Some(c)).collect();
        baseline_rows.push(BenchRow {
            method: BenchMethod::OneNn,
            trial,
            metrics: Some(score_rows(&truth_classes, &nn_pred, &unlabeled, k)?),
        });
    }

    let mut rows = ssgl_rows;
    rows.append(&mut baseline_rows);
    let summary = vec![
        summarize(BenchMethod::Ssgl, &rows, k),
        summarize(BenchMethod::OneNn, &rows, k),
    ];
    Ok(BenchmarkTable { class_count: k, rows, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{GraphMethod, SigmaChoice, WeightKernel};

    fn moons_spec(n: usize, noise: f64, seed: u64) -> SyntheticSpec {
        SyntheticSpec { family: SyntheticFamily::TwoMoons, n, noise, seed }
    }

    #[test]
    fn noiseless_moons_sit_exactly_on_their_arcs() {
        let (ds, truth) = gen_two_moons(&moons_spec(8, 0.0, 3)).unwrap();
        assert_eq!(ds.len(), 8);
        let classes = truth.dense_classes(&ds).unwrap();
        assert_eq!(classes.iter().filter(|&&c| c == 0).count(), 4);
        for (row, &class) in ds.rows().zip(&classes) {
            let (cx, cy) = if class == 0 { (0.0, 0.0) } else { (1.0, 0.5) };
            let r = libm::sqrt((row[0] - cx) * (row[0] - cx) + (row[1] - cy) * (row[1] - cy));
            assert!((r - 1.0).abs() < 1e-12, "radius {r}");
            // Class 0 is the upper arc, class 1 the lower one.
            if class == 0 {
                assert!(row[1] >= -1e-12);
            } else {
                assert!(row[1] <= 0.5 + 1e-12);
            }
        }
    }

    #[test]
    fn moons_require_an_even_count() {
        assert!(gen_two_moons(&moons_spec(7, 0.0, 1)).is_err());
    }

    #[test]
    fn equal_seeds_generate_identical_data() {
        let (a, _) = gen_two_moons(&moons_spec(30, 0.2, 9)).unwrap();
        let (b, _) = gen_two_moons(&moons_spec(30, 0.2, 9)).unwrap();
        assert_eq!(a, b);
        let (c, _) = gen_two_moons(&moons_spec(30, 0.2, 10)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn apportionment_matches_hand_values() {
        assert_eq!(apportion(&[0.5, 0.5], 10), vec![5, 5]);
        assert_eq!(apportion(&[0.35, 0.25, 0.2, 0.15, 0.05], 200), vec![70, 50, 40, 30, 10]);
        // Equal remainders: the leftover unit goes to the lowest index.
        assert_eq!(apportion(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 10), vec![4, 3, 3]);
    }

    #[test]
    fn blob_counts_and_noiseless_positions_are_exact() {
        let spec = severity_blob_preset(200, 0.0, 4);
        let (ds, truth) = gen_blobs(&spec).unwrap();
        let classes = truth.dense_classes(&ds).unwrap();
        let mut counts = [0usize; 5];
        for &c in &classes {
            counts[c] += 1;
        }
        assert_eq!(counts, [70, 50, 40, 30, 10]);
        for (row, &class) in ds.rows().zip(&classes) {
            assert_eq!(row, &[2.0 * class as f64, 0.0]);
        }
    }

    #[test]
    fn blob_fractions_must_sum_to_one() {
        let spec = SyntheticSpec {
            family: SyntheticFamily::Blobs {
                centers: vec![
                    BlobSpec { center: vec![0.0], class: 0, fraction: 0.5 },
                    BlobSpec { center: vec![1.0], class: 1, fraction: 0.4 },
                ],
            },
            n: 10,
            noise: 0.0,
            seed: 0,
        };
        assert_eq!(gen_blobs(&spec), Err(Error::Config("blob fractions must sum to 1")));
    }

    #[test]
    fn blob_centers_must_share_a_dimension() {
        let spec = SyntheticSpec {
            family: SyntheticFamily::Blobs {
                centers: vec![
                    BlobSpec { center: vec![0.0, 0.0], class: 0, fraction: 0.5 },
                    BlobSpec { center: vec![1.0], class: 1, fraction: 0.5 },
                ],
            },
            n: 10,
            noise: 0.0,
            seed: 0,
        };
        assert_eq!(gen_blobs(&spec), Err(Error::DimensionMismatch { expected: 2, found: 1 }));
    }

    fn line_dataset(points: &[f64]) -> Dataset {
        let ids = (0..points.len()).map(|i| format!("q{i}")).collect();
        Dataset::new(ids, points.to_vec(), 1).unwrap()
    }

    fn labels(pairs: &[(&str, usize)], k: usize) -> LabelAssignment {
        LabelAssignment::new(pairs.iter().map(|(id, c)| (String::from(*id), *c)).collect(), k)
            .unwrap()
    }

    #[test]
    fn nearest_labeled_sample_wins() {
        let ds = line_dataset(&[0.0, 1.0, 10.0]);
        let labeled = labels(&[("q0", 0), ("q2", 1)], 2);
        let pred = one_nn_baseline(&ds, &labeled).unwrap();
        assert_eq!(pred.get("q1"), Some(0));
        // Labeled points keep their own class.
        assert_eq!(pred.get("q0"), Some(0));
        assert_eq!(pred.get("q2"), Some(1));
    }

    #[test]
    fn distance_ties_go_to_the_lower_row() {
        // q1 sits exactly between q0 (class 1) and q2 (class 0).
        let ds = line_dataset(&[0.0, 1.0, 2.0]);
        let labeled = labels(&[("q0", 1), ("q2", 0)], 2);
        let pred = one_nn_baseline(&ds, &labeled).unwrap();
        assert_eq!(pred.get("q1"), Some(1));
    }

    #[test]
    fn a_single_labeled_sample_labels_everything() {
        let ds = line_dataset(&[0.0, 5.0, 9.0]);
        let labeled = labels(&[("q1", 1)], 2);
        let pred = one_nn_baseline(&ds, &labeled).unwrap();
        assert!(ds.ids().iter().all(|id| pred.get(id) == Some(1)));
    }

    #[test]
    fn fully_labeled_distinct_points_predict_themselves() {
        let ds = line_dataset(&[0.0, 1.0, 2.0, 5.0]);
        let truth = labels(&[("q0", 0), ("q1", 1), ("q2", 0), ("q3", 1)], 2);
        let pred = one_nn_baseline(&ds, &truth).unwrap();
        for (id, class) in truth.iter() {
            assert_eq!(pred.get(id), Some(class));
        }
    }

    #[test]
    fn baseline_requires_a_labeled_sample() {
        let ds = line_dataset(&[0.0, 1.0]);
        let labeled = LabelAssignment::new(Vec::new(), 2).unwrap();
        assert!(one_nn_baseline(&ds, &labeled).is_err());
    }

    fn bench_graph_config() -> GraphConfig {
        GraphConfig {
            method: GraphMethod::Knn { k: 5 },
            kernel: WeightKernel::Rbf { sigma: SigmaChoice::Auto },
            standardize: true,
        }
    }

    #[test]
    fn benchmark_is_deterministic_and_sane() {
        let spec = moons_spec(60, 0.1, 42);
        let config = SolverConfig::default();
        let a = run_benchmark(&spec, 0.2, &bench_graph_config(), &config, 3).unwrap();
        let b = run_benchmark(&spec, 0.2, &bench_graph_config(), &config, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 6);
        for summary in &a.summary {
            let stats = summary.stats.as_ref().unwrap();
            assert!((0.0..=1.0).contains(&stats.mean_accuracy));
            assert!((0.0..=1.0).contains(&stats.mean_macro_f1));
            assert_eq!(stats.mean_recalls.len(), 2);
        }
    }

    #[test]
    fn labeling_everything_leaves_nothing_to_score() {
        let spec = moons_spec(20, 0.05, 7);
        let table =
            run_benchmark(&spec, 1.0, &bench_graph_config(), &SolverConfig::default(), 2).unwrap();
        assert!(table.rows.iter().all(|r| r.metrics.is_none()));
        assert!(table.summary.iter().all(|s| s.stats.is_none()));
    }

    #[test]
    fn a_single_trial_reports_zero_spread() {
        let spec = moons_spec(40, 0.1, 11);
        let table =
            run_benchmark(&spec, 0.25, &bench_graph_config(), &SolverConfig::default(), 1).unwrap();
        for summary in &table.summary {
            let stats = summary.stats.as_ref().unwrap();
            assert_eq!(stats.std_accuracy, 0.0);
            assert_eq!(stats.std_macro_f1, 0.0);
        }
    }
}
