//! From-scratch supervised learning and statistical analysis for four-stage
//! child malnutrition classification from household-survey data.
//!
//! The library covers the full pipeline: survey CSV ingestion with a fixed
//! feature schema, numeric encoding and WHO Z-score staging, a calibrated
//! synthetic data generator, PCA, four classifiers (decision tree, random
//! forest, RBF-kernel SVM, multilayer perceptron), a seven-metric evaluation
//! suite, and Pearson risk-factor correlation tables. Everything is
//! deterministic given a seed.

pub mod correlation;
pub mod dataset;
pub mod error;
pub mod forest;
pub mod metrics;
pub mod mlp;
pub mod numeric;
pub mod pca;
pub mod pipeline;
pub mod report;
pub mod schema;
pub mod svm;
pub mod synth;
pub mod tree;

pub use dataset::{EncodedDataset, MalnutritionClass, StagingPolicy, SurveyRecord};
pub use error::{Error, Result};
pub use numeric::{Matrix, Rng};
pub use schema::{FeatureKind, FeatureRole, FeatureSchema, FeatureSpec};
