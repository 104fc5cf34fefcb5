use std::fmt::Write;

use crate::dataset::SceneClass;
use crate::error::{Error, Result};

/// Label make-up of one cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterComposition {
    pub cluster: usize,
    pub size: usize,
    /// Members per label, indexed by class code.
    pub counts: [usize; 8],
}

impl ClusterComposition {
    /// Share of `label` among the members; 0 for an empty cluster.
    pub fn fraction(&self, label: SceneClass) -> f64 {
        if self.size == 0 {
            0.0
        } else {
            self.counts[label.code() as usize] as f64 / self.size as f64
        }
    }

    /// Most frequent label, the lowest code on ties.
    pub fn dominant(&self) -> Option<SceneClass> {
        if self.size == 0 {
            return None;
        }
        let best = (0..8).fold(0, |b, i| if self.counts[i] > self.counts[b] { i } else { b });
        SceneClass::from_code(best as u8)
    }
}

/// Per-cluster composition for clusters `0..=max(assignments)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterReport {
    pub clusters: Vec<ClusterComposition>,
}

pub fn cluster_report(assignments: &[usize], labels: &[SceneClass]) -> Result<ClusterReport> {
    if assignments.len() != labels.len() {
        return Err(Error::arg(format!(
            "{} assignments for {} labels",
            assignments.len(),
            labels.len()
        )));
    }
    let k = assignments.iter().max().map_or(0, |&m| m + 1);
    let mut clusters: Vec<ClusterComposition> = (0..k)
        .map(|cluster| ClusterComposition {
            cluster,
            size: 0,
            counts: [0; 8],
        })
        .collect();
    for (&a, &l) in assignments.iter().zip(labels) {
        clusters[a].size += 1;
        clusters[a].counts[l.code() as usize] += 1;
    }
    Ok(ClusterReport { clusters })
}

impl ClusterReport {
    pub fn total(&self) -> usize {
        self.clusters.iter().map(|c| c.size).sum()
    }

    /// Tab-separated table: cluster, size, dominant label, then one
    /// fraction column per label in `labels` order.
    pub fn to_tsv(&self, labels: &[SceneClass]) -> String {
        let mut out = String::from("cluster\tsize\tdominant");
        for l in labels {
            write!(out, "\t{l}").unwrap();
        }
        out.push('\n');
        for c in &self.clusters {
            let dominant = c.dominant().map_or("-", |l| l.name());
            write!(out, "{}\t{}\t{dominant}", c.cluster + 1, c.size).unwrap();
            for &l in labels {
                write!(out, "\t{:.4}", c.fraction(l)).unwrap();
            }
            out.push('\n');
        }
        out
    }
}
