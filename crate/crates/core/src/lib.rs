//! Graph-based semi-supervised label propagation over small tabular or
//! image-derived datasets.
//!
//! The pipeline this crate implements:
//!
//! 1. Turn raw samples into feature vectors ([`Dataset`]), optionally via the
//!    deterministic image ops in [`image`].
//! 2. Build a similarity graph over the samples ([`graph::build_graph`]) with
//!    a kNN, epsilon, or full connection rule and an RBF or cosine kernel.
//! 3. Seed a label matrix from the few labeled samples and propagate scores
//!    to the rest by alternating minimization of a quadratic objective with
//!    Laplacian smoothing, a severity-weighted fit term, and an anchor to the
//!    initial labels ([`solver::fit`]).
//! 4. Threshold or argmax the scores into predictions ([`solver::predict`])
//!    and evaluate them ([`metrics`]).
//!
//! The crate is `no_std`-compatible (with `alloc`); file formats and the
//! command-line front end live in the companion `ssgl-cli` crate. Everything
//! here is deterministic: all randomness flows through the seeded
//! [`rng::SplitMix64`] stream, and no operation depends on thread count,
//! hash-map iteration order, or platform.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod dataset;
pub mod error;
pub mod graph;
pub mod image;
pub mod linalg;
pub mod metrics;
pub mod rng;
pub mod solver;
pub mod synth;

pub use dataset::{ClassCatalog, Dataset, LabelAssignment, SplitSpec, TrainTestSplit};
pub use error::{Error, Result};
pub use graph::{GraphConfig, GraphMethod, Laplacian, LaplacianKind, SigmaChoice, SimilarityGraph, WeightKernel};
pub use image::RasterImage;
pub use metrics::{ConfusionMatrix, MetricsReport};
pub use solver::{LabelMatrix, RowPrediction, ScoreMatrix, SolveReport, SolverConfig};
pub use synth::{BenchmarkTable, SyntheticFamily, SyntheticSpec};
