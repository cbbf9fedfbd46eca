//! Group separability machinery: logistic regression with k-fold
//! cross-validation and 2-component PCA, both from first principles.

mod logistic;
mod pca;

use thiserror::Error;

pub use logistic::{
    kfold_cv_accuracy, logistic_fit, loss_and_gradient, stratified_folds, LogisticConfig,
    LogisticModel,
};
pub use pca::{pca_fit, pca_transform, PcaModel};

#[derive(Debug, Error, PartialEq)]
pub enum MlError {
    #[error("labels contain a single class")]
    SingleClass,
    #[error("{rows} rows, need at least {needed}")]
    TooFewSamples { rows: usize, needed: usize },
    #[error("{cols} columns, need at least {needed}")]
    TooFewColumns { cols: usize, needed: usize },
    #[error("loss diverged to a non-finite value; lower the learning rate")]
    NonFinite,
    #[error("degenerate data: {0}")]
    DegenerateData(&'static str),
    #[error("row {row} has {got} columns, expected {expected}")]
    RaggedRow {
        row: usize,
        got: usize,
        expected: usize,
    },
}

/// Dense feature matrix with binary row labels and named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
    pub column_names: Vec<String>,
}

impl FeatureMatrix {
    pub fn new(
        rows: Vec<Vec<f64>>,
        labels: Vec<u8>,
        column_names: Vec<String>,
    ) -> Result<Self, MlError> {
        if rows.len() < 2 {
            return Err(MlError::TooFewSamples {
                rows: rows.len(),
                needed: 2,
            });
        }
        let expected = column_names.len();
        for (idx, row) in rows.iter().enumerate() {
            if row.len() != expected {
                return Err(MlError::RaggedRow {
                    row: idx,
                    got: row.len(),
                    expected,
                });
            }
        }
        if labels.len() != rows.len() {
            return Err(MlError::RaggedRow {
                row: labels.len(),
                got: labels.len(),
                expected: rows.len(),
            });
        }
        Ok(FeatureMatrix {
            rows,
            labels,
            column_names,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.column_names.len()
    }

    pub(crate) fn require_both_classes(&self) -> Result<(), MlError> {
        let ones = self.labels.iter().filter(|&&l| l == 1).count();
        if ones == 0 || ones == self.labels.len() {
            return Err(MlError::SingleClass);
        }
        Ok(())
    }
}

/// Per-column mean/sd transform fitted on training data and replayed at
/// prediction time. Constant columns standardize to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
}

impl Standardizer {
    pub fn fit(rows: &[Vec<f64>]) -> Self {
        let n = rows.len() as f64;
        let d = rows.first().map(Vec::len).unwrap_or(0);
        let mut means = vec![0.0; d];
        for row in rows {
            for (m, x) in means.iter_mut().zip(row) {
                *m += x;
            }
        }
        for m in means.iter_mut() {
            *m /= n;
        }
        let mut sds = vec![0.0; d];
        for row in rows {
            for ((s, x), m) in sds.iter_mut().zip(row).zip(&means) {
                *s += (x - m) * (x - m);
            }
        }
        for s in sds.iter_mut() {
            *s = (*s / n).sqrt();
        }
        Standardizer { means, sds }
    }

    pub fn apply_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.means.iter().zip(&self.sds))
            .map(|(x, (m, s))| if *s == 0.0 { 0.0 } else { (x - m) / s })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standardizer_zero_mean_unit_sd() {
        let rows = vec![vec![1.0, 10.0], vec![2.0, 20.0], vec![3.0, 30.0]];
        let s = Standardizer::fit(&rows);
        let transformed: Vec<Vec<f64>> = rows.iter().map(|r| s.apply_row(r)).collect();
        for j in 0..2 {
            let mean: f64 = transformed.iter().map(|r| r[j]).sum::<f64>() / 3.0;
            let var: f64 = transformed.iter().map(|r| r[j] * r[j]).sum::<f64>() / 3.0;
            assert!(mean.abs() < 1e-12);
            assert!((var - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn standardizer_constant_column_passes_through_as_zero() {
        let rows = vec![vec![5.0, 1.0], vec![5.0, 2.0]];
        let s = Standardizer::fit(&rows);
        assert_eq!(s.apply_row(&[5.0, 1.5])[0], 0.0);
    }

    #[test]
    fn matrix_validation() {
        assert!(matches!(
            FeatureMatrix::new(vec![vec![1.0]], vec![0], vec!["x".into()]).unwrap_err(),
            MlError::TooFewSamples { .. }
        ));
        assert!(matches!(
            FeatureMatrix::new(
                vec![vec![1.0], vec![1.0, 2.0]],
                vec![0, 1],
                vec!["x".into()]
            )
            .unwrap_err(),
            MlError::RaggedRow { .. }
        ));
    }
}
