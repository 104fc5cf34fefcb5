use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dataset::{LabeledDataset, SceneClass};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::svm::{train_multiclass, SvmParams};

use super::{metrics_from_confusion, ConfusionMatrix, EvalReport};

/// Fold index in `[0, k)` for every instance.
///
/// Classes are visited in code order. Each class is shuffled with a
/// generator seeded once from `seed` and dealt round-robin; the deal
/// continues from the fold where the previous class stopped, so fold
/// sizes stay within one of each other as well.
pub fn stratified_folds(labels: &[SceneClass], k: usize, seed: u64) -> Result<Vec<usize>> {
    if k < 2 {
        return Err(Error::arg(format!("fold count must be at least 2, got {k}")));
    }
    if k > labels.len() {
        return Err(Error::arg(format!("{k} folds for {} instances", labels.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![0; labels.len()];
    let mut next = 0;
    for class in SceneClass::ALL {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        members.shuffle(&mut rng);
        for i in members {
            folds[i] = next;
            next = (next + 1) % k;
        }
    }
    Ok(folds)
}

/// Everything a cross-validation run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossValidation {
    pub folds: Vec<usize>,
    /// Held-out prediction for every instance.
    pub predictions: Vec<SceneClass>,
    pub report: EvalReport,
}

/// Stratified k-fold cross-validation with a pooled confusion matrix.
pub fn cross_validate<T: Scalar>(ds: &LabeledDataset<T>, p: &SvmParams, k: usize, seed: u64) -> Result<EvalReport> {
    cross_validate_detailed(ds, p, k, seed).map(|cv| cv.report)
}

/// Like [`cross_validate`], also returning folds and predictions. Folds run
/// in parallel on the current rayon pool.
pub fn cross_validate_detailed<T: Scalar>(
    ds: &LabeledDataset<T>,
    p: &SvmParams,
    k: usize,
    seed: u64,
) -> Result<CrossValidation> {
    let labels = ds.classes();
    if labels.len() < 2 {
        return Err(Error::arg("cross-validation needs at least 2 classes"));
    }
    let folds = stratified_folds(ds.labels(), k, seed)?;
    let per_fold: Vec<Result<Vec<(usize, SceneClass)>>> = (0..k)
        .into_par_iter()
        .map(|f| {
            let (test, train): (Vec<usize>, Vec<usize>) = (0..ds.len()).partition(|&i| folds[i] == f);
            let model = train_multiclass(&ds.subset(&train), p)?;
            test.into_iter()
                .map(|i| Ok((i, model.predict(ds.descriptors()[i].values())?)))
                .collect()
        })
        .collect();

    let mut predictions = vec![labels[0]; ds.len()];
    for fold in per_fold {
        for (i, label) in fold? {
            predictions[i] = label;
        }
    }
    let mut cm = ConfusionMatrix::new(labels)?;
    for (&actual, &predicted) in ds.labels().iter().zip(&predictions) {
        cm.record(actual, predicted)?;
    }
    Ok(CrossValidation {
        folds,
        predictions,
        report: metrics_from_confusion(&cm)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_class_ten_folds() {
        let labels = vec![SceneClass::Tunnel; 10];
        let mut f = stratified_folds(&labels, 10, 4).unwrap();
        f.sort_unstable();
        assert_eq!(f, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn bad_fold_counts() {
        let labels = vec![SceneClass::Road; 3];
        assert!(stratified_folds(&labels, 1, 0).is_err());
        assert!(stratified_folds(&labels, 4, 0).is_err());
    }
}
