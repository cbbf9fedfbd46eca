//! L2-regularized logistic regression trained by full-batch gradient
//! descent, with stratified k-fold cross-validation.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{FeatureMatrix, MlError, Standardizer};

/// Training hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticConfig {
    pub max_iters: usize,
    pub learning_rate: f64,
    pub l2_lambda: f64,
    /// Stop once the gradient norm falls below this.
    pub tol: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        // Near-separable lexicon data needs the ridge term to keep the
        // optimum finite.
        LogisticConfig {
            max_iters: 5000,
            learning_rate: 0.5,
            l2_lambda: 1e-3,
            tol: 1e-6,
        }
    }
}

/// A fitted model; the standardization applied at fit time is stored so
/// prediction applies the identical transform.
#[derive(Debug, Clone)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub standardizer: Standardizer,
    pub iterations: usize,
    pub final_gradient_norm: f64,
}

impl LogisticModel {
    /// P(class = 1) for one raw (unstandardized) row.
    pub fn predict_proba(&self, row: &[f64]) -> f64 {
        let z: f64 = self
            .standardizer
            .apply_row(row)
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| x * w)
            .sum::<f64>()
            + self.bias;
        sigmoid(z)
    }

    pub fn predict(&self, row: &[f64]) -> u8 {
        (self.predict_proba(row) >= 0.5) as u8
    }

    /// Fraction of rows whose predicted class matches the label.
    pub fn accuracy(&self, rows: &[Vec<f64>], labels: &[u8]) -> f64 {
        let correct = rows
            .iter()
            .zip(labels)
            .filter(|(row, label)| self.predict(row) == **label)
            .count();
        correct as f64 / rows.len() as f64
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Mean negative log-likelihood plus the ridge penalty, and its gradient
/// in (weights, bias). Exposed for oracle comparison against finite
/// differences.
pub fn loss_and_gradient(
    rows: &[Vec<f64>],
    labels: &[u8],
    weights: &[f64],
    bias: f64,
    l2_lambda: f64,
) -> (f64, Vec<f64>, f64) {
    let n = rows.len() as f64;
    let d = weights.len();
    let mut loss = 0.0;
    let mut grad_w = vec![0.0; d];
    let mut grad_b = 0.0;
    for (row, label) in rows.iter().zip(labels) {
        let z: f64 = row.iter().zip(weights).map(|(x, w)| x * w).sum::<f64>() + bias;
        let p = sigmoid(z);
        let y = f64::from(*label);
        // Numerically stable cross-entropy: log(1 + e^-|z|) + max(z,0) - y z.
        loss += z.max(0.0) - y * z + (-z.abs()).exp().ln_1p();
        let residual = p - y;
        for (g, x) in grad_w.iter_mut().zip(row) {
            *g += residual * x;
        }
        grad_b += residual;
    }
    loss /= n;
    grad_b /= n;
    let mut penalty = 0.0;
    for (g, w) in grad_w.iter_mut().zip(weights) {
        *g = *g / n + l2_lambda * w;
        penalty += w * w;
    }
    loss += 0.5 * l2_lambda * penalty;
    (loss, grad_w, grad_b)
}

fn gradient_norm(grad_w: &[f64], grad_b: f64) -> f64 {
    (grad_w.iter().map(|g| g * g).sum::<f64>() + grad_b * grad_b).sqrt()
}

/// Standardizes columns, then minimizes the regularized negative
/// log-likelihood by gradient descent until the gradient norm drops below
/// `tol` or `max_iters` is reached.
pub fn logistic_fit(
    matrix: &FeatureMatrix,
    config: &LogisticConfig,
) -> Result<LogisticModel, MlError> {
    matrix.require_both_classes()?;
    let standardizer = Standardizer::fit(&matrix.rows);
    let rows: Vec<Vec<f64>> = matrix
        .rows
        .iter()
        .map(|r| standardizer.apply_row(r))
        .collect();

    let d = matrix.n_cols();
    let mut weights = vec![0.0; d];
    let mut bias = 0.0;
    let mut iterations = 0;
    let mut norm = f64::INFINITY;
    for iter in 0..config.max_iters {
        let (loss, grad_w, grad_b) =
            loss_and_gradient(&rows, &matrix.labels, &weights, bias, config.l2_lambda);
        if !loss.is_finite() {
            return Err(MlError::NonFinite);
        }
        norm = gradient_norm(&grad_w, grad_b);
        iterations = iter;
        if norm < config.tol {
            break;
        }
        for (w, g) in weights.iter_mut().zip(&grad_w) {
            *w -= config.learning_rate * g;
        }
        bias -= config.learning_rate * grad_b;
    }
    Ok(LogisticModel {
        weights,
        bias,
        standardizer,
        iterations,
        final_gradient_norm: norm,
    })
}

/// Stratified fold assignment: per class, indices are shuffled with the
/// seeded generator and dealt round-robin, so class proportions per fold
/// are preserved within one sample.
pub fn stratified_folds(labels: &[u8], k: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![0usize; labels.len()];
    let mut next_fold = 0usize;
    for class in [0u8, 1] {
        let mut indices: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        indices.shuffle(&mut rng);
        for idx in indices {
            assignment[idx] = next_fold % k;
            next_fold += 1;
        }
    }
    assignment
}

/// Mean held-out accuracy over stratified, seeded k folds.
pub fn kfold_cv_accuracy(
    matrix: &FeatureMatrix,
    k: usize,
    seed: u64,
    config: &LogisticConfig,
) -> Result<f64, MlError> {
    matrix.require_both_classes()?;
    if matrix.n_rows() < k || k < 2 {
        return Err(MlError::TooFewSamples {
            rows: matrix.n_rows(),
            needed: k.max(2),
        });
    }
    let assignment = stratified_folds(&matrix.labels, k, seed);
    let mut total = 0.0;
    for fold in 0..k {
        let mut train_rows = Vec::new();
        let mut train_labels = Vec::new();
        let mut test_rows = Vec::new();
        let mut test_labels = Vec::new();
        for (idx, row) in matrix.rows.iter().enumerate() {
            if assignment[idx] == fold {
                test_rows.push(row.clone());
                test_labels.push(matrix.labels[idx]);
            } else {
                train_rows.push(row.clone());
                train_labels.push(matrix.labels[idx]);
            }
        }
        let train = FeatureMatrix {
            rows: train_rows,
            labels: train_labels,
            column_names: matrix.column_names.clone(),
        };
        let model = logistic_fit(&train, config)?;
        total += model.accuracy(&test_rows, &test_labels);
    }
    Ok(total / k as f64)
}
