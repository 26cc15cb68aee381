//! `ssgl`: the pipeline as composable subcommands.
//!
//! Exit codes: 0 success, 1 runtime or data error (message on stderr),
//! 2 usage error (argument parser output). Every run is a pure function of
//! its flags and input files; all randomness flows from explicit `--seed`
//! values, so identical invocations produce byte-identical outputs. Output
//! files are written atomically (temp file plus rename).

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ssgl_cli::augment::{apply_ops, parse_ops};
use ssgl_cli::formats::{
    eval_report_json, format_float, parse_catalog, parse_edgelist, parse_features_csv,
    parse_labels_csv, parse_predictions_csv, parse_scores_csv, read_bytes, read_text,
    render_edgelist, render_features_csv, render_id_list, render_labels_csv,
    render_predictions_csv, render_scores_csv, to_json_pretty, write_atomic,
};
use ssgl_cli::{data_error, CliError, Result};
use ssgl_core::dataset::{
    stratified_label_subset, train_test_split, ClassCatalog, Dataset, LabelAssignment, SplitSpec,
};
use ssgl_core::graph::{build_graph, GraphConfig, GraphMethod, LaplacianKind, SigmaChoice, WeightKernel};
use ssgl_core::image::{decode_pnm, encode_pnm, extract_features};
use ssgl_core::metrics::{classification_metrics, confusion_matrix};
use ssgl_core::solver::{fit, init_label_matrix, predict, SolverConfig};
use ssgl_core::synth::{run_benchmark, severity_blob_preset, SyntheticFamily, SyntheticSpec};

#[derive(Parser)]
#[command(
    name = "ssgl",
    version,
    about = "Graph-based semi-supervised label propagation toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply an augmentation op chain to PGM/PPM images
    Augment(AugmentArgs),
    /// Extract grid + histogram feature vectors from images
    Features(FeaturesArgs),
    /// Build a similarity graph from a feature table
    Graph(GraphArgs),
    /// Split ids into train and test sets
    Split(SplitArgs),
    /// Select a stratified labeled subset
    LabelSubset(LabelSubsetArgs),
    /// Propagate labels over a graph and write per-sample scores
    Fit(FitArgs),
    /// Re-threshold a score table into predictions
    Predict(PredictArgs),
    /// Score predictions against ground truth
    Evaluate(EvaluateArgs),
    /// Run the synthetic benchmark comparing propagation against 1-NN
    Bench(BenchArgs),
}

#[derive(clap::Args)]
struct AugmentArgs {
    /// Input images (binary PGM or PPM)
    #[arg(long, num_args = 1.., required = true)]
    input: Vec<PathBuf>,
    /// Comma-separated op chain, e.g. "flip-h,rot:15,noise:0.05"
    #[arg(long)]
    ops: String,
    /// Base seed; image i draws noise from seed XOR i
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for the augmented images (same file names)
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(clap::Args)]
struct FeaturesArgs {
    /// Input images; each file stem becomes the sample id
    #[arg(long, num_args = 1.., required = true)]
    images: Vec<PathBuf>,
    /// Grayscale thumbnail is grid x grid
    #[arg(long, default_value_t = 8)]
    grid: usize,
    /// Intensity histogram bin count
    #[arg(long, default_value_t = 16)]
    hist_bins: usize,
    /// Output feature CSV
    #[arg(long)]
    out: PathBuf,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Knn,
    Epsilon,
    Full,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum KernelArg {
    Rbf,
    Cosine,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum LaplacianArg {
    Unnormalized,
    Symmetric,
}

#[derive(clap::Args)]
struct GraphFlags {
    /// Graph connection rule
    #[arg(long, value_enum, default_value_t = MethodArg::Knn)]
    method: MethodArg,
    /// Neighbor count for --method knn
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Distance cutoff for --method epsilon
    #[arg(long)]
    radius: Option<f64>,
    /// Edge weight kernel
    #[arg(long, value_enum, default_value_t = KernelArg::Rbf)]
    kernel: KernelArg,
    /// RBF bandwidth: "auto" (median pairwise distance) or a number
    #[arg(long, default_value = "auto")]
    sigma: String,
}

impl GraphFlags {
    fn to_config(&self, standardize: bool) -> Result<GraphConfig> {
        let method = match self.method {
            MethodArg::Knn => GraphMethod::Knn { k: self.k },
            MethodArg::Epsilon => GraphMethod::Epsilon {
                radius: self.radius.ok_or_else(|| data_error("epsilon graphs need --radius"))?,
            },
            MethodArg::Full => GraphMethod::Full,
        };
        let kernel = match self.kernel {
            KernelArg::Rbf => WeightKernel::Rbf {
                sigma: if self.sigma == "auto" {
                    SigmaChoice::Auto
                } else {
                    SigmaChoice::Fixed(self.sigma.parse().map_err(|_| {
                        data_error(format!(
                            "invalid --sigma value {:?}: expected \"auto\" or a number",
                            self.sigma
                        ))
                    })?)
                },
            },
            KernelArg::Cosine => WeightKernel::Cosine,
        };
        Ok(GraphConfig { method, kernel, standardize })
    }
}

#[derive(clap::Args)]
struct GraphArgs {
    /// Input feature CSV
    #[arg(long)]
    features: PathBuf,
    #[command(flatten)]
    graph: GraphFlags,
    /// Z-score each feature dimension before distances
    #[arg(long)]
    standardize: bool,
    /// Output edge-list file
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct SplitArgs {
    /// Input feature CSV
    #[arg(long)]
    features: PathBuf,
    /// Ground-truth label CSV covering all samples
    #[arg(long)]
    labels: PathBuf,
    /// Class catalog file, one name per line
    #[arg(long)]
    catalog: PathBuf,
    /// Fraction of samples in the test set, in (0, 1)
    #[arg(long)]
    test_fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Preserve class proportions per side
    #[arg(long)]
    stratified: bool,
    /// Output file for train ids, one per line
    #[arg(long)]
    out_train: PathBuf,
    /// Output file for test ids, one per line
    #[arg(long)]
    out_test: PathBuf,
}

#[derive(clap::Args)]
struct LabelSubsetArgs {
    /// Input feature CSV
    #[arg(long)]
    features: PathBuf,
    /// Ground-truth label CSV covering all samples
    #[arg(long)]
    labels: PathBuf,
    /// Class catalog file, one name per line
    #[arg(long)]
    catalog: PathBuf,
    /// Fraction labeled per class, in (0, 1]; every class keeps at least one
    #[arg(long)]
    fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output label CSV
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct SolverFlags {
    /// Laplacian smoothing strength (>= 0)
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Anchor strength toward the initial labels (> 0)
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Severity-weighted loss strength (>= 0)
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Comma-separated per-class severity weights (empty = uniform 1)
    #[arg(long)]
    severity_weights: Option<String>,
    /// Positive-class decision threshold for two-class problems, in (0, 1)
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    /// Convergence tolerance on the label update (> 0)
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
    /// Reset labeled rows to their initial labels after each sweep
    #[arg(long)]
    clamp_labeled: bool,
    /// Laplacian variant
    #[arg(long, value_enum, default_value_t = LaplacianArg::Unnormalized)]
    laplacian: LaplacianArg,
}

impl SolverFlags {
    fn to_config(&self) -> Result<SolverConfig> {
        let severity_weights = match &self.severity_weights {
            None => Vec::new(),
            Some(spec) => spec
                .split(',')
                .map(|t| {
                    t.parse::<f64>().map_err(|_| {
                        data_error(format!("invalid --severity-weights entry {t:?}"))
                    })
                })
                .collect::<Result<Vec<f64>>>()?,
        };
        Ok(SolverConfig {
            lambda: self.lambda,
            gamma: self.gamma,
            alpha: self.alpha,
            severity_weights,
            threshold: self.threshold,
            tol: self.tol,
            max_iter: self.max_iter,
            clamp_labeled: self.clamp_labeled,
            laplacian_kind: match self.laplacian {
                LaplacianArg::Unnormalized => LaplacianKind::Unnormalized,
                LaplacianArg::Symmetric => LaplacianKind::SymmetricNormalized,
            },
        })
    }
}

#[derive(clap::Args)]
struct FitArgs {
    /// Input edge-list file
    #[arg(long)]
    graph: PathBuf,
    /// Feature CSV that defines the id-to-node mapping (row order)
    #[arg(long)]
    features: PathBuf,
    /// Label CSV for the labeled subset
    #[arg(long)]
    labels: PathBuf,
    /// Class catalog file, one name per line
    #[arg(long)]
    catalog: PathBuf,
    #[command(flatten)]
    solver: SolverFlags,
    /// Output score CSV
    #[arg(long)]
    out_scores: PathBuf,
    /// Optional solve report JSON
    #[arg(long)]
    out_report: Option<PathBuf>,
}

#[derive(clap::Args)]
struct PredictArgs {
    /// Input score CSV from fit
    #[arg(long)]
    scores: PathBuf,
    /// Class catalog file, one name per line
    #[arg(long)]
    catalog: PathBuf,
    /// Positive-class decision threshold for two-class problems
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    /// Output prediction CSV
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct EvaluateArgs {
    /// Prediction CSV (id,pred) or a score CSV
    #[arg(long)]
    pred: PathBuf,
    /// Ground-truth label CSV
    #[arg(long)]
    truth: PathBuf,
    /// Class catalog file, one name per line
    #[arg(long)]
    catalog: PathBuf,
    /// Output report JSON (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    /// Two interleaved half-circles, two classes
    Moons,
    /// Imbalanced five-blob severity preset (rarest class 5%)
    BlobsSeverity,
}

#[derive(clap::Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value_t = FamilyArg::Moons)]
    family: FamilyArg,
    /// Sample count
    #[arg(long, default_value_t = 400)]
    n: usize,
    /// Generator noise standard deviation
    #[arg(long, default_value_t = 0.1)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fraction labeled per class, in (0, 1]
    #[arg(long, default_value_t = 0.05)]
    label_fraction: f64,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[command(flatten)]
    graph: GraphFlags,
    /// Disable the benchmark default of z-scoring features
    #[arg(long)]
    no_standardize: bool,
    #[command(flatten)]
    solver: SolverFlags,
    /// Output per-trial CSV
    #[arg(long)]
    out_csv: PathBuf,
    /// Output summary JSON
    #[arg(long)]
    out_json: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Augment(args) => run_augment(args),
        Command::Features(args) => run_features(args),
        Command::Graph(args) => run_graph(args),
        Command::Split(args) => run_split(args),
        Command::LabelSubset(args) => run_label_subset(args),
        Command::Fit(args) => run_fit(args),
        Command::Predict(args) => run_predict(args),
        Command::Evaluate(args) => run_evaluate(args),
        Command::Bench(args) => run_bench(args),
    }
}

fn load_image(path: &Path) -> Result<ssgl_core::image::RasterImage> {
    decode_pnm(&read_bytes(path)?).map_err(|e| CliError::from(e).in_file(path))
}

fn file_stem_id(path: &Path) -> Result<String> {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| data_error(format!("{}: cannot derive an id from the file name", path.display())))?;
    if stem.is_empty() || !stem.bytes().all(|b| b.is_ascii_alphanumeric() || b"_.-".contains(&b)) {
        return Err(data_error(format!(
            "{}: file stem {stem:?} is not a valid id (need [A-Za-z0-9_.-]+)",
            path.display()
        )));
    }
    Ok(stem.to_string())
}

fn run_augment(args: AugmentArgs) -> Result<()> {
    let ops = parse_ops(&args.ops)?;
    let mut names = BTreeSet::new();
    let mut outputs = Vec::new();
    for (index, path) in args.input.iter().enumerate() {
        let name = path
            .file_name()
            .ok_or_else(|| data_error(format!("{}: not a file path", path.display())))?
            .to_owned();
        if !names.insert(name.clone()) {
            return Err(data_error(format!(
                "duplicate output name {:?}: inputs must have distinct file names",
                name.to_string_lossy()
            )));
        }
        let image = load_image(path)?;
        let result = apply_ops(&image, &ops, args.seed ^ index as u64)
            .map_err(|e| e.in_file(path))?;
        outputs.push((name, encode_pnm(&result)));
    }
    std::fs::create_dir_all(&args.out_dir).map_err(|e| CliError::io(&args.out_dir, e))?;
    for (name, bytes) in outputs {
        write_atomic(&args.out_dir.join(name), &bytes)?;
    }
    Ok(())
}

fn run_features(args: FeaturesArgs) -> Result<()> {
    let mut ids = Vec::new();
    let mut values = Vec::new();
    for path in &args.images {
        ids.push(file_stem_id(path)?);
        let image = load_image(path)?;
        values.extend(extract_features(&image, args.grid, args.hist_bins)?);
    }
    let dim = args.grid * args.grid + args.hist_bins;
    let dataset = Dataset::new(ids, values, dim)?;
    write_atomic(&args.out, render_features_csv(&dataset).as_bytes())
}

fn load_features(path: &Path) -> Result<Dataset> {
    parse_features_csv(&read_text(path)?).map_err(|e| e.in_file(path))
}

fn load_catalog(path: &Path) -> Result<ClassCatalog> {
    parse_catalog(&read_text(path)?).map_err(|e| e.in_file(path))
}

fn load_labels(path: &Path, catalog: &ClassCatalog) -> Result<LabelAssignment> {
    parse_labels_csv(&read_text(path)?, catalog).map_err(|e| e.in_file(path))
}

fn run_graph(args: GraphArgs) -> Result<()> {
    let dataset = load_features(&args.features)?;
    let config = args.graph.to_config(args.standardize)?;
    let graph = build_graph(&dataset, &config)?;
    write_atomic(&args.out, render_edgelist(&graph).as_bytes())
}

fn run_split(args: SplitArgs) -> Result<()> {
    let dataset = load_features(&args.features)?;
    let catalog = load_catalog(&args.catalog)?;
    let truth = load_labels(&args.labels, &catalog)?;
    let spec = SplitSpec {
        test_fraction: args.test_fraction,
        seed: args.seed,
        stratified: args.stratified,
    };
    let split = train_test_split(&dataset, &truth, &spec)?;
    for warning in &split.warnings {
        eprintln!("warning: {warning}");
    }
    write_atomic(&args.out_train, render_id_list(&split.train).as_bytes())?;
    write_atomic(&args.out_test, render_id_list(&split.test).as_bytes())
}

fn run_label_subset(args: LabelSubsetArgs) -> Result<()> {
    let dataset = load_features(&args.features)?;
    let catalog = load_catalog(&args.catalog)?;
    let truth = load_labels(&args.labels, &catalog)?;
    let subset = stratified_label_subset(&dataset, &truth, args.fraction, args.seed)?;
    write_atomic(
        &args.out,
        render_labels_csv(&subset, &catalog, dataset.ids()).as_bytes(),
    )
}

#[derive(Serialize)]
struct SolverConfigJson {
    lambda: f64,
    gamma: f64,
    alpha: f64,
    severity_weights: Vec<f64>,
    threshold: f64,
    tol: f64,
    max_iter: usize,
    clamp_labeled: bool,
    laplacian: &'static str,
}

impl From<&SolverConfig> for SolverConfigJson {
    fn from(c: &SolverConfig) -> Self {
        SolverConfigJson {
            lambda: c.lambda,
            gamma: c.gamma,
            alpha: c.alpha,
            severity_weights: c.severity_weights.clone(),
            threshold: c.threshold,
            tol: c.tol,
            max_iter: c.max_iter,
            clamp_labeled: c.clamp_labeled,
            laplacian: match c.laplacian_kind {
                LaplacianKind::Unnormalized => "unnormalized",
                LaplacianKind::SymmetricNormalized => "symmetric",
            },
        }
    }
}

#[derive(Serialize)]
struct GraphConfigJson {
    method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    kernel: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma: Option<String>,
    standardize: bool,
}

impl From<&GraphConfig> for GraphConfigJson {
    fn from(c: &GraphConfig) -> Self {
        let (method, k, radius) = match c.method {
            GraphMethod::Knn { k } => ("knn", Some(k), None),
            GraphMethod::Epsilon { radius } => ("epsilon", None, Some(radius)),
            GraphMethod::Full => ("full", None, None),
        };
        let (kernel, sigma) = match c.kernel {
            WeightKernel::Rbf { sigma: SigmaChoice::Auto } => ("rbf", Some("auto".to_string())),
            WeightKernel::Rbf { sigma: SigmaChoice::Fixed(s) } => ("rbf", Some(format_float(s))),
            WeightKernel::Cosine => ("cosine", None),
        };
        GraphConfigJson { method, k, radius, kernel, sigma, standardize: c.standardize }
    }
}

#[derive(Serialize)]
struct FitReportJson {
    config: SolverConfigJson,
    samples: usize,
    classes: usize,
    labeled: usize,
    iterations: usize,
    converged: bool,
    final_residual: f64,
    objective: Vec<f64>,
}

fn run_fit(args: FitArgs) -> Result<()> {
    let dataset = load_features(&args.features)?;
    let catalog = load_catalog(&args.catalog)?;
    let labels = load_labels(&args.labels, &catalog)?;
    let graph =
        parse_edgelist(&read_text(&args.graph)?).map_err(|e| e.in_file(&args.graph))?;
    if graph.n != dataset.len() {
        return Err(data_error(format!(
            "graph has {} nodes but the feature table has {} rows",
            graph.n,
            dataset.len()
        )));
    }
    let assignments = labels.join(&dataset)?;
    if assignments.is_empty() {
        return Err(data_error("at least one labeled sample is required"));
    }
    let config = args.solver.to_config()?;
    let matrix = init_label_matrix(dataset.len(), catalog.len(), &assignments)?;
    let (scores, _, report) = fit(&graph, &matrix, &config)?;
    let preds: Vec<Option<usize>> =
        predict(&scores, &catalog, &config)?.iter().map(|p| p.class).collect();

    write_atomic(
        &args.out_scores,
        render_scores_csv(dataset.ids(), &scores, &preds, &catalog).as_bytes(),
    )?;
    if let Some(path) = &args.out_report {
        let json = FitReportJson {
            config: SolverConfigJson::from(&config),
            samples: dataset.len(),
            classes: catalog.len(),
            labeled: assignments.len(),
            iterations: report.iterations,
            converged: report.converged,
            final_residual: report.final_residual,
            objective: report.objective_trace.clone(),
        };
        write_atomic(path, to_json_pretty(&json).as_bytes())?;
    }
    Ok(())
}

fn run_predict(args: PredictArgs) -> Result<()> {
    let catalog = load_catalog(&args.catalog)?;
    let scores =
        parse_scores_csv(&read_text(&args.scores)?, &catalog).map_err(|e| e.in_file(&args.scores))?;
    let config = SolverConfig { threshold: args.threshold, ..SolverConfig::default() };
    let preds: Vec<Option<usize>> =
        predict(&scores.scores, &catalog, &config)?.iter().map(|p| p.class).collect();
    write_atomic(
        &args.out,
        render_predictions_csv(&scores.ids, &preds, &catalog).as_bytes(),
    )
}

fn run_evaluate(args: EvaluateArgs) -> Result<()> {
    let catalog = load_catalog(&args.catalog)?;
    let truth = load_labels(&args.truth, &catalog)?;
    let preds =
        parse_predictions_csv(&read_text(&args.pred)?, &catalog).map_err(|e| e.in_file(&args.pred))?;
    let cm = confusion_matrix(&truth, &preds, &catalog)?;
    let report = classification_metrics(&cm)?;
    let json = to_json_pretty(&eval_report_json(&report, &catalog));
    match &args.out {
        Some(path) => write_atomic(path, json.as_bytes()),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct BenchConfigJson {
    family: &'static str,
    n: usize,
    noise: f64,
    seed: u64,
    label_fraction: f64,
    trials: usize,
    graph: GraphConfigJson,
    solver: SolverConfigJson,
}

#[derive(Serialize)]
struct MethodStatsJson {
    mean_accuracy: f64,
    std_accuracy: f64,
    mean_macro_f1: f64,
    std_macro_f1: f64,
    mean_recalls: Vec<f64>,
}

#[derive(Serialize)]
struct BenchMethodsJson {
    ssgl: Option<MethodStatsJson>,
    #[serde(rename = "1nn")]
    one_nn: Option<MethodStatsJson>,
}

#[derive(Serialize)]
struct BenchReportJson {
    config: BenchConfigJson,
    classes: usize,
    methods: BenchMethodsJson,
}

fn run_bench(args: BenchArgs) -> Result<()> {
    let (family_name, spec) = match args.family {
        FamilyArg::Moons => (
            "moons",
            SyntheticSpec {
                family: SyntheticFamily::TwoMoons,
                n: args.n,
                noise: args.noise,
                seed: args.seed,
            },
        ),
        FamilyArg::BlobsSeverity => {
            ("blobs-severity", severity_blob_preset(args.n, args.noise, args.seed))
        }
    };
    let graph_config = args.graph.to_config(!args.no_standardize)?;
    let solver_config = args.solver.to_config()?;
    let table =
        run_benchmark(&spec, args.label_fraction, &graph_config, &solver_config, args.trials)?;

    let k = table.class_count;
    let mut csv = String::from("method,trial,accuracy,macro_f1");
    for c in 0..k {
        csv.push_str(&format!(",recall_class{c}"));
    }
    csv.push('\n');
    for row in &table.rows {
        csv.push_str(&format!("{},{}", row.method.name(), row.trial));
        match &row.metrics {
            Some(m) => {
                csv.push_str(&format!(
                    ",{},{}",
                    format_float(m.accuracy),
                    format_float(m.macro_f1)
                ));
                for r in &m.recalls {
                    csv.push_str(&format!(",{}", format_float(*r)));
                }
            }
            None => {
                for _ in 0..k + 2 {
                    csv.push_str(",n/a");
                }
            }
        }
        csv.push('\n');
    }

    let stats_json = |method: ssgl_core::synth::BenchMethod| -> Option<MethodStatsJson> {
        table
            .summary
            .iter()
            .find(|s| s.method == method)
            .and_then(|s| s.stats.as_ref())
            .map(|st| MethodStatsJson {
                mean_accuracy: st.mean_accuracy,
                std_accuracy: st.std_accuracy,
                mean_macro_f1: st.mean_macro_f1,
                std_macro_f1: st.std_macro_f1,
                mean_recalls: st.mean_recalls.clone(),
            })
    };
    let json = BenchReportJson {
        config: BenchConfigJson {
            family: family_name,
            n: args.n,
            noise: args.noise,
            seed: args.seed,
            label_fraction: args.label_fraction,
            trials: args.trials,
            graph: GraphConfigJson::from(&graph_config),
            solver: SolverConfigJson::from(&solver_config),
        },
        classes: k,
        methods: BenchMethodsJson {
            ssgl: stats_json(ssgl_core::synth::BenchMethod::Ssgl),
            one_nn: stats_json(ssgl_core::synth::BenchMethod::OneNn),
        },
    };

    write_atomic(&args.out_csv, csv.as_bytes())?;
    write_atomic(&args.out_json, to_json_pretty(&json).as_bytes())
}
