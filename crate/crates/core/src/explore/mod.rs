//! Descriptor-space exploration: PCA projections for plotting and k-means
//! clustering with label-composition reports.

mod kmeans;
mod pca;
mod report;

pub use kmeans::{kmeans, kmeans_best_of, KmeansResult, DEFAULT_MAX_ITER};
pub use pca::{pca_fit, pca_project, PcaModel};
pub use report::{cluster_report, ClusterComposition, ClusterReport};
