//! Stratified cross-validation, confusion matrices and per-class accuracy
//! metrics.

mod confusion;
mod cv;
mod metrics;

pub use confusion::ConfusionMatrix;
pub use cv::{cross_validate, cross_validate_detailed, stratified_folds, CrossValidation};
pub use metrics::{metrics_from_confusion, ClassMetrics, EvalReport};
