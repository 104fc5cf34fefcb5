use std::fmt::Write;

use crate::dataset::SceneClass;
use crate::error::{Error, Result};

use super::ConfusionMatrix;

/// One row of the detailed accuracy table.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassMetrics {
    pub tp_rate: f64,
    pub fp_rate: f64,
    pub precision: f64,
    /// Equal to `tp_rate`.
    pub recall: f64,
    pub f_measure: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub confusion: ConfusionMatrix,
    /// Parallel to `confusion.labels()`.
    pub per_class: Vec<ClassMetrics>,
    /// Support-weighted mean of `per_class`.
    pub weighted: ClassMetrics,
    pub accuracy: f64,
    /// Labels where some metric had a zero denominator and was set to 0.
    pub degenerate: Vec<SceneClass>,
}

fn ratio(num: u64, den: u64, degenerate: &mut bool) -> f64 {
    if den == 0 {
        *degenerate = true;
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Per-class, weighted and overall scores of a confusion matrix.
pub fn metrics_from_confusion(cm: &ConfusionMatrix) -> Result<EvalReport> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::arg("confusion matrix is empty"));
    }
    let mut per_class = Vec::with_capacity(cm.len());
    let mut degenerate = Vec::new();
    let mut weighted = ClassMetrics::default();
    for (c, &label) in cm.labels().iter().enumerate() {
        let tp = cm.count(c, c);
        let fn_ = cm.row_total(c) - tp;
        let fp = cm.column_total(c) - tp;
        let tn = total - tp - fn_ - fp;
        let mut flag = false;
        let recall = ratio(tp, tp + fn_, &mut flag);
        let precision = ratio(tp, tp + fp, &mut flag);
        let fp_rate = ratio(fp, fp + tn, &mut flag);
        let f_measure = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        if flag {
            degenerate.push(label);
        }
        let m = ClassMetrics {
            tp_rate: recall,
            fp_rate,
            precision,
            recall,
            f_measure,
        };
        let w = cm.row_total(c) as f64 / total as f64;
        weighted.tp_rate += w * m.tp_rate;
        weighted.fp_rate += w * m.fp_rate;
        weighted.precision += w * m.precision;
        weighted.recall += w * m.recall;
        weighted.f_measure += w * m.f_measure;
        per_class.push(m);
    }
    Ok(EvalReport {
        confusion: cm.clone(),
        per_class,
        weighted,
        accuracy: cm.trace() as f64 / total as f64,
        degenerate,
    })
}

impl EvalReport {
    pub fn metrics(&self, label: SceneClass) -> Option<&ClassMetrics> {
        self.confusion.index_of(label).map(|i| &self.per_class[i])
    }

    /// Tab-separated detailed accuracy table, three decimals. There is no
    /// ROC estimate, so that column reads `n/a`.
    pub fn accuracy_tsv(&self) -> String {
        let mut out = String::from("Class\tTP Rate\tFP Rate\tPrecision\tRecall\tF-Measure\tROC Area\n");
        let row = |out: &mut String, name: &str, m: &ClassMetrics| {
            writeln!(
                out,
                "{name}\t{:.3}\t{:.3}\t{:.3}\t{:.3}\t{:.3}\tn/a",
                m.tp_rate, m.fp_rate, m.precision, m.recall, m.f_measure
            )
            .unwrap();
        };
        for (l, m) in self.confusion.labels().iter().zip(&self.per_class) {
            row(&mut out, l.name(), m);
        }
        row(&mut out, "Weighted average", &self.weighted);
        out
    }

    /// Same report with labels in the FM1 report order.
    pub fn in_report_order(&self) -> EvalReport {
        let confusion = self.confusion.in_report_order();
        let per_class = confusion
            .labels()
            .iter()
            .map(|&l| *self.metrics(l).expect("same labels"))
            .collect();
        EvalReport {
            confusion,
            per_class,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SceneClass::*;

    #[test]
    fn diagonal_matrix_is_perfect() {
        let cm = ConfusionMatrix::from_counts(vec![Road, Exit], &[vec![4, 0], vec![0, 6]]).unwrap();
        let r = metrics_from_confusion(&cm).unwrap();
        for m in r.per_class.iter().chain([&r.weighted]) {
            assert_eq!((m.tp_rate, m.precision, m.f_measure, m.fp_rate), (1.0, 1.0, 1.0, 0.0));
        }
        assert_eq!(r.accuracy, 1.0);
        assert!(r.degenerate.is_empty());
    }

    #[test]
    fn unpredicted_class_is_flagged() {
        let cm = ConfusionMatrix::from_counts(vec![Road, Exit], &[vec![4, 0], vec![3, 0]]).unwrap();
        let r = metrics_from_confusion(&cm).unwrap();
        let exit = r.metrics(Exit).unwrap();
        assert_eq!((exit.precision, exit.f_measure), (0.0, 0.0));
        assert_eq!(r.degenerate, vec![Exit]);
    }

    #[test]
    fn empty_matrix_rejected() {
        let cm = ConfusionMatrix::new(vec![Road]).unwrap();
        assert!(metrics_from_confusion(&cm).is_err());
    }
}
