use rayon::prelude::*;

use crate::dataset::{LabeledDataset, SceneClass};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::smo::{model_from_solution, BinaryModel, SmoSolver};
use super::SvmParams;

/// Binary model for one label pair; positive decisions vote `positive`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairModel<T> {
    pub positive: SceneClass,
    pub negative: SceneClass,
    pub model: BinaryModel<T>,
}

/// One-vs-one ensemble over the labels seen in training.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel<T> {
    /// Training labels in code order.
    pub labels: Vec<SceneClass>,
    /// `(labels[a], labels[b])` for `a < b`, lexicographic.
    pub pairs: Vec<PairModel<T>>,
    pub params: SvmParams,
    pub dim: usize,
}

/// Per-label tallies behind a prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct Votes<T> {
    pub winner: SceneClass,
    /// Parallel to the model's `labels`.
    pub counts: Vec<usize>,
    /// Σ |decision value| over every pair model involving the label.
    pub margins: Vec<T>,
}

/// Trains every pair model, in parallel on the current rayon pool.
pub fn train_multiclass<T: Scalar>(ds: &LabeledDataset<T>, params: &SvmParams) -> Result<SvmModel<T>> {
    params.validate()?;
    let labels = ds.classes();
    if labels.len() < 2 {
        return Err(Error::arg(format!(
            "multiclass training needs at least 2 labels, got {}",
            labels.len()
        )));
    }
    let mut pair_labels = Vec::new();
    for a in 0..labels.len() {
        for b in a + 1..labels.len() {
            pair_labels.push((labels[a], labels[b]));
        }
    }

    let workers = rayon::current_num_threads().min(pair_labels.len()).max(1);
    let pair_params = SvmParams {
        cache_bytes: params.cache_bytes / workers,
        ..*params
    };
    let gamma = T::of(params.gamma);
    let pairs: Vec<Result<PairModel<T>>> = pair_labels
        .par_iter()
        .map(|&(positive, negative)| {
            let (x, y): (Vec<&[T]>, Vec<i8>) = ds
                .descriptors()
                .iter()
                .zip(ds.labels())
                .filter_map(|(d, &l)| match l {
                    l if l == positive => Some((d.values(), 1)),
                    l if l == negative => Some((d.values(), -1)),
                    _ => None,
                })
                .unzip();
            let sol = SmoSolver::new(pair_params).solve(&x, &y)?;
            Ok(PairModel {
                positive,
                negative,
                model: model_from_solution(&x, &y, &sol, gamma),
            })
        })
        .collect();

    Ok(SvmModel {
        labels,
        pairs: pairs.into_iter().collect::<Result<_>>()?,
        params: *params,
        dim: ds.dim(),
    })
}

/// Votes of every pair model for `x`.
///
/// The label with most votes wins; ties go to the larger margin sum, then to
/// the earlier label.
pub fn predict_votes<T: Scalar>(m: &SvmModel<T>, x: &[T]) -> Result<Votes<T>> {
    if x.len() != m.dim {
        return Err(Error::arg(format!(
            "descriptor has dimension {}, model expects {}",
            x.len(),
            m.dim
        )));
    }
    let slot = |c: SceneClass| m.labels.iter().position(|&l| l == c).expect("pair label is a model label");
    let mut counts = vec![0usize; m.labels.len()];
    let mut margins = vec![T::zero(); m.labels.len()];
    for p in &m.pairs {
        let dv = p.model.decision_value(x)?;
        let (pos, neg) = (slot(p.positive), slot(p.negative));
        if dv > T::zero() {
            counts[pos] += 1;
        } else {
            counts[neg] += 1;
        }
        margins[pos] = margins[pos] + dv.abs();
        margins[neg] = margins[neg] + dv.abs();
    }
    let mut best = 0;
    for k in 1..m.labels.len() {
        if counts[k] > counts[best] || (counts[k] == counts[best] && margins[k] > margins[best]) {
            best = k;
        }
    }
    Ok(Votes {
        winner: m.labels[best],
        counts,
        margins,
    })
}

pub fn predict<T: Scalar>(m: &SvmModel<T>, x: &[T]) -> Result<SceneClass> {
    predict_votes(m, x).map(|v| v.winner)
}

impl<T: Scalar> SvmModel<T> {
    pub fn predict(&self, x: &[T]) -> Result<SceneClass> {
        predict(self, x)
    }
}
