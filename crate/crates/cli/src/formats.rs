//! On-disk formats: strict CSV dialect, graph edge lists, JSON reports,
//! and atomic file writes.
//!
//! The CSV dialect is deliberately rigid: comma-separated, UTF-8, `\n` or
//! `\r\n` line endings, no quoting or escaping, ids and class names drawn
//! from `[A-Za-z0-9_.-]+`. Parse errors name the offending line. Reals are
//! printed with at least nine significant digits so every file round-trips
//! to 1e-9 or better.

use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use ssgl_core::dataset::{ClassCatalog, Dataset, LabelAssignment};
use ssgl_core::graph::{GraphConfig, GraphMethod, SigmaChoice, SimilarityGraph, WeightKernel};
use ssgl_core::metrics::MetricsReport;
use ssgl_core::solver::ScoreMatrix;

use crate::{data_error, CliError, Result};

/// Fixed nine decimals for ordinary magnitudes, nine-digit scientific for
/// tiny ones; both carry at least nine significant digits.
pub fn format_float(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    if v == 0.0 || v.abs() >= 1e-3 {
        format!("{v:.9}")
    } else {
        format!("{v:.9e}")
    }
}

/// Writes via a temporary file in the target directory plus rename, so a
/// failed run never leaves a partially written output.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.flush().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::io(path, e))
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b"_.-".contains(&b))
}

/// Lines with 1-based numbers, `\r\n` accepted, one trailing newline
/// tolerated. Interior blank lines are the caller's error to raise.
fn numbered_lines(text: &str) -> Vec<(usize, &str)> {
    let mut lines: Vec<(usize, &str)> = text
        .split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .collect();
    if let Some(&(_, last)) = lines.last() {
        if last.is_empty() {
            lines.pop();
        }
    }
    lines
}

fn line_error(line: usize, message: impl std::fmt::Display) -> CliError {
    data_error(format!("line {line}: {message}"))
}

fn parse_real(line: usize, token: &str) -> Result<f64> {
    let v: f64 = token
        .parse()
        .map_err(|_| line_error(line, format_args!("invalid number {token:?}")))?;
    if !v.is_finite() {
        return Err(line_error(line, format_args!("non-finite value {token:?}")));
    }
    Ok(v)
}

fn parse_id(line: usize, token: &str) -> Result<String> {
    if !valid_name(token) {
        return Err(line_error(
            line,
            format_args!("id {token:?} must match [A-Za-z0-9_.-]+"),
        ));
    }
    Ok(token.to_string())
}

fn check_unique<'a>(
    seen: &mut std::collections::BTreeMap<&'a str, usize>,
    id: &'a str,
    line: usize,
) -> Result<()> {
    if seen.insert(id, line).is_some() {
        return Err(line_error(line, format_args!("duplicate id {id:?}")));
    }
    Ok(())
}

/// Feature table: header `id,f0,...,f{d-1}`, one sample per row.
pub fn parse_features_csv(text: &str) -> Result<Dataset> {
    let lines = numbered_lines(text);
    let Some(&(_, header)) = lines.first() else {
        return Err(data_error("missing header: expected id,f0,..."));
    };
    let head: Vec<&str> = header.split(',').collect();
    let d = head.len().saturating_sub(1);
    let header_ok =
        d >= 1 && head[0] == "id" && head[1..].iter().enumerate().all(|(i, h)| **h == format!("f{i}"));
    if !header_ok {
        return Err(data_error(format!("malformed header {header:?}: expected id,f0,...")));
    }

    let mut ids = Vec::new();
    let mut features = Vec::new();
    let mut seen = std::collections::BTreeMap::new();
    for &(line, row) in &lines[1..] {
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != d + 1 {
            return Err(line_error(
                line,
                format_args!("expected {} fields, found {}", d + 1, fields.len()),
            ));
        }
        let id = parse_id(line, fields[0])?;
        check_unique(&mut seen, fields[0], line)?;
        ids.push(id);
        for token in &fields[1..] {
            features.push(parse_real(line, token)?);
        }
    }
    Ok(Dataset::new(ids, features, d)?)
}

pub fn render_features_csv(dataset: &Dataset) -> String {
    let mut out = String::from("id");
    for i in 0..dataset.dim() {
        out.push_str(&format!(",f{i}"));
    }
    out.push('\n');
    for (id, row) in dataset.ids().iter().zip(dataset.rows()) {
        out.push_str(id);
        for v in row {
            out.push(',');
            out.push_str(&format_float(*v));
        }
        out.push('\n');
    }
    out
}

/// Class catalog: one class name per line; order defines indices 0..K-1.
pub fn parse_catalog(text: &str) -> Result<ClassCatalog> {
    let mut names = Vec::new();
    for (line, name) in numbered_lines(text) {
        if !valid_name(name) {
            return Err(line_error(
                line,
                format_args!("class name {name:?} must match [A-Za-z0-9_.-]+"),
            ));
        }
        names.push(name.to_string());
    }
    Ok(ClassCatalog::new(names)?)
}

/// Label table: header `id,label`, labels resolved against the catalog.
pub fn parse_labels_csv(text: &str, catalog: &ClassCatalog) -> Result<LabelAssignment> {
    let lines = numbered_lines(text);
    let Some(&(_, header)) = lines.first() else {
        return Err(data_error("missing header: expected id,label"));
    };
    if header != "id,label" {
        return Err(data_error(format!("malformed header {header:?}: expected id,label")));
    }
    let mut pairs = Vec::new();
    let mut seen = std::collections::BTreeMap::new();
    for &(line, row) in &lines[1..] {
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 2 {
            return Err(line_error(
                line,
                format_args!("expected 2 fields, found {}", fields.len()),
            ));
        }
        let id = parse_id(line, fields[0])?;
        check_unique(&mut seen, fields[0], line)?;
        let class = catalog
            .index_of(fields[1])
            .ok_or_else(|| line_error(line, format_args!("unknown class name {:?}", fields[1])))?;
        pairs.push((id, class));
    }
    Ok(LabelAssignment::new(pairs, catalog.len())?)
}

/// Rows come out in `order` (normally dataset row order), skipping ids the
/// assignment does not cover; no hidden sorting.
pub fn render_labels_csv(
    labels: &LabelAssignment,
    catalog: &ClassCatalog,
    order: &[String],
) -> String {
    let mut out = String::from("id,label\n");
    for id in order {
        if let Some(class) = labels.get(id) {
            out.push_str(&format!("{id},{}\n", catalog.name(class)));
        }
    }
    out
}

fn scores_header(catalog: &ClassCatalog) -> String {
    let mut h = String::from("id");
    for name in catalog.names() {
        h.push_str(&format!(",score_{name}"));
    }
    h.push_str(",pred");
    h
}

/// Score table parsed back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoresFile {
    pub ids: Vec<String>,
    pub scores: ScoreMatrix,
    pub preds: Vec<Option<usize>>,
}

/// Header `id,score_<class0>,...,score_<classK-1>,pred`; the trailing field
/// is a class name or the indeterminate sentinel `?`.
pub fn render_scores_csv(
    ids: &[String],
    scores: &ScoreMatrix,
    preds: &[Option<usize>],
    catalog: &ClassCatalog,
) -> String {
    let mut out = scores_header(catalog);
    out.push('\n');
    for (i, id) in ids.iter().enumerate() {
        out.push_str(id);
        for c in 0..catalog.len() {
            out.push(',');
            out.push_str(&format_float(scores.at(i, c)));
        }
        out.push(',');
        match preds[i] {
            Some(class) => out.push_str(catalog.name(class)),
            None => out.push('?'),
        }
        out.push('\n');
    }
    out
}

fn parse_pred_field(line: usize, token: &str, catalog: &ClassCatalog) -> Result<Option<usize>> {
    if token == "?" {
        return Ok(None);
    }
    catalog
        .index_of(token)
        .map(Some)
        .ok_or_else(|| line_error(line, format_args!("unknown class name {token:?}")))
}

pub fn parse_scores_csv(text: &str, catalog: &ClassCatalog) -> Result<ScoresFile> {
    let lines = numbered_lines(text);
    let expected = scores_header(catalog);
    let Some(&(_, header)) = lines.first() else {
        return Err(data_error(format!("missing header: expected {expected}")));
    };
    if header != expected {
        return Err(data_error(format!("malformed header {header:?}: expected {expected:?}")));
    }
    let k = catalog.len();
    let mut ids = Vec::new();
    let mut values = Vec::new();
    let mut preds = Vec::new();
    let mut seen = std::collections::BTreeMap::new();
    for &(line, row) in &lines[1..] {
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != k + 2 {
            return Err(line_error(
                line,
                format_args!("expected {} fields, found {}", k + 2, fields.len()),
            ));
        }
        let id = parse_id(line, fields[0])?;
        check_unique(&mut seen, fields[0], line)?;
        ids.push(id);
        for token in &fields[1..=k] {
            values.push(parse_real(line, token)?);
        }
        preds.push(parse_pred_field(line, fields[k + 1], catalog)?);
    }
    let n = ids.len();
    Ok(ScoresFile { ids, scores: ScoreMatrix::new(n, k, values)?, preds })
}

pub fn render_predictions_csv(
    ids: &[String],
    preds: &[Option<usize>],
    catalog: &ClassCatalog,
) -> String {
    let mut out = String::from("id,pred\n");
    for (id, pred) in ids.iter().zip(preds) {
        match pred {
            Some(class) => out.push_str(&format!("{id},{}\n", catalog.name(*class))),
            None => out.push_str(&format!("{id},?\n")),
        }
    }
    out
}

/// Accepts either a predictions table (`id,pred`) or a full scores table,
/// whose first and last columns carry the same information.
pub fn parse_predictions_csv(
    text: &str,
    catalog: &ClassCatalog,
) -> Result<Vec<(String, Option<usize>)>> {
    let lines = numbered_lines(text);
    let Some(&(_, header)) = lines.first() else {
        return Err(data_error("missing header: expected id,pred or a scores header"));
    };
    if header == scores_header(catalog) {
        let scores = parse_scores_csv(text, catalog)?;
        return Ok(scores.ids.into_iter().zip(scores.preds).collect());
    }
    if header != "id,pred" {
        return Err(data_error(format!(
            "malformed header {header:?}: expected \"id,pred\" or \"{}\"",
            scores_header(catalog)
        )));
    }
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeMap::new();
    for &(line, row) in &lines[1..] {
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 2 {
            return Err(line_error(
                line,
                format_args!("expected 2 fields, found {}", fields.len()),
            ));
        }
        let id = parse_id(line, fields[0])?;
        check_unique(&mut seen, fields[0], line)?;
        out.push((id, parse_pred_field(line, fields[1], catalog)?));
    }
    Ok(out)
}

pub fn render_id_list(ids: &[String]) -> String {
    let mut out = String::new();
    for id in ids {
        out.push_str(id);
        out.push('\n');
    }
    out
}

const EDGELIST_MAGIC: &str = "# ssgl-graph v1";

fn sigma_token(sigma: SigmaChoice) -> String {
    match sigma {
        SigmaChoice::Auto => "auto".to_string(),
        SigmaChoice::Fixed(s) => format_float(s),
    }
}

/// Edge list: magic line, a self-describing config line, then one
/// `i j w` per edge with `i < j`.
pub fn render_edgelist(graph: &SimilarityGraph) -> String {
    let config = &graph.config;
    let (method, mut params) = match config.method {
        GraphMethod::Knn { k } => ("knn", vec![format!("k={k}")]),
        GraphMethod::Epsilon { radius } => ("epsilon", vec![format!("radius={}", format_float(radius))]),
        GraphMethod::Full => ("full", Vec::new()),
    };
    let kernel = match config.kernel {
        WeightKernel::Rbf { sigma } => {
            params.push(format!("sigma={}", sigma_token(sigma)));
            "rbf"
        }
        WeightKernel::Cosine => "cosine",
    };
    params.push(format!("std={}", u8::from(config.standardize)));
    let mut out = format!(
        "{EDGELIST_MAGIC}\n# n={} method={method} kernel={kernel} param={}\n",
        graph.n,
        params.join(",")
    );
    for e in &graph.edges {
        out.push_str(&format!("{} {} {}\n", e.i, e.j, format_float(e.weight)));
    }
    out
}

fn header_field<'a>(token: Option<&'a str>, key: &str) -> Result<&'a str> {
    token
        .and_then(|t| t.strip_prefix(key))
        .ok_or_else(|| data_error(format!("malformed config line: expected {key}<value>")))
}

pub fn parse_edgelist(text: &str) -> Result<SimilarityGraph> {
    let lines = numbered_lines(text);
    if lines.first().map(|&(_, l)| l) != Some(EDGELIST_MAGIC) {
        return Err(data_error(format!("not an edge-list file: expected {EDGELIST_MAGIC:?}")));
    }
    let Some(&(_, config_line)) = lines.get(1) else {
        return Err(data_error("missing config line"));
    };
    let mut tokens = config_line.split_whitespace();
    if tokens.next() != Some("#") {
        return Err(data_error("malformed config line: expected # n=... method=..."));
    }
    let n: usize = header_field(tokens.next(), "n=")?
        .parse()
        .map_err(|_| data_error("malformed config line: invalid n"))?;
    let method_token = header_field(tokens.next(), "method=")?;
    let kernel_token = header_field(tokens.next(), "kernel=")?;
    let param_token = header_field(tokens.next(), "param=")?;
    if tokens.next().is_some() {
        return Err(data_error("malformed config line: trailing tokens"));
    }

    let mut params = std::collections::BTreeMap::new();
    for entry in param_token.split(',') {
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| data_error(format!("malformed param entry {entry:?}")))?;
        params.insert(key, value);
    }
    let mut take = |key: &str| -> Result<&str> {
        params.remove(key).ok_or_else(|| data_error(format!("missing param {key}")))
    };
    let method = match method_token {
        "knn" => GraphMethod::Knn {
            k: take("k")?.parse().map_err(|_| data_error("invalid param k"))?,
        },
        "epsilon" => GraphMethod::Epsilon {
            radius: take("radius")?.parse().map_err(|_| data_error("invalid param radius"))?,
        },
        "full" => GraphMethod::Full,
        other => return Err(data_error(format!("unknown method {other:?}"))),
    };
    let kernel = match kernel_token {
        "rbf" => WeightKernel::Rbf {
            sigma: match take("sigma")? {
                "auto" => SigmaChoice::Auto,
                s => SigmaChoice::Fixed(
                    s.parse().map_err(|_| data_error("invalid param sigma"))?,
                ),
            },
        },
        "cosine" => WeightKernel::Cosine,
        other => return Err(data_error(format!("unknown kernel {other:?}"))),
    };
    let standardize = match take("std")? {
        "0" => false,
        "1" => true,
        other => return Err(data_error(format!("invalid param std={other}"))),
    };
    if let Some((key, _)) = params.into_iter().next() {
        return Err(data_error(format!("unexpected param {key}")));
    }

    let mut edges = Vec::new();
    for &(line, row) in &lines[2..] {
        let fields: Vec<&str> = row.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(line_error(
                line,
                format_args!("expected \"i j w\", found {} fields", fields.len()),
            ));
        }
        let i: usize =
            fields[0].parse().map_err(|_| line_error(line, "invalid node index"))?;
        let j: usize =
            fields[1].parse().map_err(|_| line_error(line, "invalid node index"))?;
        if i == j {
            return Err(line_error(line, "self-loop"));
        }
        if i > j {
            return Err(line_error(line, "edge indices must satisfy i < j"));
        }
        let weight = parse_real(line, fields[2])?;
        edges.push(ssgl_core::graph::GraphEdge { i, j, weight });
    }
    let config = GraphConfig { method, kernel, standardize };
    Ok(SimilarityGraph::new(n, edges, config)?)
}

/// Evaluation report in its serialized shape.
#[derive(Debug, Serialize)]
pub struct EvalReportJson {
    pub accuracy: f64,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub kappa: f64,
    pub per_class: Vec<PerClassJson>,
    pub indeterminate: usize,
}

#[derive(Debug, Serialize)]
pub struct PerClassJson {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

pub fn eval_report_json(report: &MetricsReport, catalog: &ClassCatalog) -> EvalReportJson {
    EvalReportJson {
        accuracy: report.accuracy,
        macro_precision: report.macro_precision,
        macro_recall: report.macro_recall,
        macro_f1: report.macro_f1,
        kappa: report.kappa,
        per_class: report
            .per_class
            .iter()
            .zip(catalog.names())
            .map(|(m, name)| PerClassJson {
                class: name.clone(),
                precision: m.precision,
                recall: m.recall,
                f1: m.f1,
            })
            .collect(),
        indeterminate: report.indeterminate,
    }
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report types always serialize");
    out.push('\n');
    out
}
