use std::fmt::Write;

use crate::dataset::SceneClass;
use crate::error::{Error, Result};

/// Actual-versus-predicted counts. Rows are actual labels, columns the
/// labels they were classified as.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    labels: Vec<SceneClass>,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    /// All-zero matrix over distinct `labels`.
    pub fn new(labels: Vec<SceneClass>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::arg("confusion matrix needs at least one label"));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::arg(format!("label {l} listed twice")));
            }
        }
        let n = labels.len();
        Ok(Self {
            labels,
            counts: vec![0; n * n],
        })
    }

    pub fn from_counts(labels: Vec<SceneClass>, rows: &[Vec<u64>]) -> Result<Self> {
        let mut m = Self::new(labels)?;
        let n = m.labels.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::arg(format!("counts must be {n}x{n}")));
        }
        m.counts = rows.concat();
        Ok(m)
    }

    pub fn labels(&self) -> &[SceneClass] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: SceneClass) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Count at (actual row `i`, predicted column `j`).
    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.labels.len() + j]
    }

    pub fn get(&self, actual: SceneClass, predicted: SceneClass) -> Option<u64> {
        Some(self.count(self.index_of(actual)?, self.index_of(predicted)?))
    }

    pub fn record(&mut self, actual: SceneClass, predicted: SceneClass) -> Result<()> {
        let (Some(i), Some(j)) = (self.index_of(actual), self.index_of(predicted)) else {
            return Err(Error::arg(format!(
                "pair ({actual}, {predicted}) is outside the matrix labels"
            )));
        };
        let n = self.labels.len();
        self.counts[i * n + j] += 1;
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.labels.len()).map(|i| self.count(i, i)).sum()
    }

    /// Instances whose actual label is row `i`.
    pub fn row_total(&self, i: usize) -> u64 {
        (0..self.labels.len()).map(|j| self.count(i, j)).sum()
    }

    /// Instances classified as column `j`.
    pub fn column_total(&self, j: usize) -> u64 {
        (0..self.labels.len()).map(|i| self.count(i, j)).sum()
    }

    /// Same counts with rows and columns in `order`, a permutation of the
    /// current labels.
    pub fn reordered(&self, order: &[SceneClass]) -> Result<Self> {
        if order.len() != self.labels.len() {
            return Err(Error::arg("reordering must list every label once"));
        }
        let idx = order
            .iter()
            .map(|&l| self.index_of(l).ok_or_else(|| Error::arg(format!("label {l} not in matrix"))))
            .collect::<Result<Vec<_>>>()?;
        let mut m = Self::new(order.to_vec())?;
        let n = order.len();
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.counts[a * n + b] = self.count(i, j);
            }
        }
        Ok(m)
    }

    /// Labels in the FM1 report order, restricted to this matrix.
    pub fn in_report_order(&self) -> Self {
        let order: Vec<SceneClass> = SceneClass::REPORT_ORDER
            .iter()
            .copied()
            .filter(|l| self.labels.contains(l))
            .collect();
        self.reordered(&order).expect("report order covers every label")
    }

    /// Tab-separated table with a `classified as:` header row.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("classified as:");
        for l in &self.labels {
            write!(out, "\t{l}").unwrap();
        }
        out.push('\n');
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(l.name());
            for j in 0..self.labels.len() {
                write!(out, "\t{}", self.count(i, j)).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SceneClass::*;

    #[test]
    fn record_and_totals() {
        let mut m = ConfusionMatrix::new(vec![Road, Exit]).unwrap();
        m.record(Road, Road).unwrap();
        m.record(Road, Exit).unwrap();
        m.record(Exit, Exit).unwrap();
        assert_eq!((m.total(), m.trace()), (3, 2));
        assert_eq!((m.row_total(0), m.column_total(1)), (2, 2));
        assert!(m.record(Tunnel, Road).is_err());
        assert_eq!(m.to_tsv(), "classified as:\troad\texit\nroad\t1\t1\nexit\t0\t1\n");
    }

    #[test]
    fn reorder_moves_rows_and_columns() {
        let m = ConfusionMatrix::from_counts(vec![Road, Exit], &[vec![5, 1], vec![2, 7]]).unwrap();
        let r = m.reordered(&[Exit, Road]).unwrap();
        assert_eq!(r.get(Road, Exit), Some(1));
        assert_eq!(r.count(0, 0), 7);
        assert_eq!(m.in_report_order().labels(), &[Exit, Road]);
        assert!(m.reordered(&[Exit]).is_err());
        assert!(ConfusionMatrix::new(vec![Road, Road]).is_err());
    }
}
