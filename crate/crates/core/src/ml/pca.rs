//! Principal component analysis on standardized columns, via iterated
//! power method with deflation.

use super::{MlError, Standardizer};

/// A fitted projection. Components are orthonormal rows; the sign of each
/// is fixed so its largest-magnitude loading is positive, making plots
/// reproducible.
#[derive(Debug, Clone)]
pub struct PcaModel {
    pub components: Vec<Vec<f64>>,
    pub standardizer: Standardizer,
    /// Eigenvalue share of total variance, non-increasing.
    pub explained_variance_ratio: Vec<f64>,
}

const POWER_ITERATIONS: usize = 1000;
const CONVERGENCE_EPS: f64 = 1e-14;

fn matvec(matrix: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    matrix
        .iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Leading eigenvector/eigenvalue of a symmetric PSD matrix, orthogonal
/// to `previous` (re-orthogonalized every iteration for numerical
/// stability).
fn power_iteration(cov: &[Vec<f64>], previous: &[Vec<f64>]) -> Option<(Vec<f64>, f64)> {
    let d = cov.len();
    // Deterministic start: varied entries avoid starting orthogonal to
    // the leading eigenvector for typical data.
    let mut v: Vec<f64> = (0..d)
        .map(|i| 1.0 + 0.5 * ((i % 7) as f64) - 0.25 * ((i % 3) as f64))
        .collect();
    orthogonalize(&mut v, previous);
    let n = norm(&v);
    if n == 0.0 {
        return None;
    }
    for x in v.iter_mut() {
        *x /= n;
    }

    let mut eigenvalue = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let mut next = matvec(cov, &v);
        orthogonalize(&mut next, previous);
        let n = norm(&next);
        if n < 1e-300 {
            return None;
        }
        for x in next.iter_mut() {
            *x /= n;
        }
        let next_eigenvalue = dot(&next, &matvec(cov, &next));
        let delta = (next_eigenvalue - eigenvalue).abs();
        v = next;
        eigenvalue = next_eigenvalue;
        if delta <= CONVERGENCE_EPS * eigenvalue.abs().max(1.0) {
            break;
        }
    }
    Some((v, eigenvalue))
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let proj = dot(v, b);
        for (x, bx) in v.iter_mut().zip(b) {
            *x -= proj * bx;
        }
    }
}

fn fix_sign(v: &mut [f64]) {
    let lead = v
        .iter()
        .copied()
        .max_by(|a, b| a.abs().partial_cmp(&b.abs()).expect("loadings are finite"))
        .unwrap_or(0.0);
    if lead < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Fits the top `n_components` principal components of the standardized
/// data.
pub fn pca_fit(rows: &[Vec<f64>], n_components: usize) -> Result<PcaModel, MlError> {
    let n = rows.len();
    if n < 2 {
        return Err(MlError::TooFewSamples { rows: n, needed: 2 });
    }
    let d = rows[0].len();
    if d < n_components {
        return Err(MlError::TooFewColumns {
            cols: d,
            needed: n_components,
        });
    }
    let standardizer = Standardizer::fit(rows);
    let standardized: Vec<Vec<f64>> = rows.iter().map(|r| standardizer.apply_row(r)).collect();

    // Covariance of standardized columns (n - 1 denominator); columns are
    // already centered.
    #[allow(clippy::needless_range_loop)] // symmetric-matrix indexing
    let cov = {
        let mut cov = vec![vec![0.0; d]; d];
        for row in &standardized {
            for i in 0..d {
                for j in i..d {
                    cov[i][j] += row[i] * row[j];
                }
            }
        }
        let denom = (n - 1) as f64;
        for i in 0..d {
            for j in i..d {
                cov[i][j] /= denom;
                cov[j][i] = cov[i][j];
            }
        }
        cov
    };

    let total_variance: f64 = (0..d).map(|i| cov[i][i]).sum();
    if total_variance <= 0.0 {
        return Err(MlError::DegenerateData("zero total variance"));
    }

    let mut components: Vec<Vec<f64>> = Vec::with_capacity(n_components);
    let mut ratios = Vec::with_capacity(n_components);
    for _ in 0..n_components {
        match power_iteration(&cov, &components) {
            Some((mut v, eigenvalue)) => {
                fix_sign(&mut v);
                ratios.push((eigenvalue / total_variance).clamp(0.0, 1.0));
                components.push(v);
            }
            None => {
                // Remaining variance is zero; pad with an arbitrary
                // orthonormal direction carrying no variance.
                let mut v = vec![0.0; d];
                for (i, x) in v.iter_mut().enumerate() {
                    *x = if (components.len() + i).is_multiple_of(d) {
                        1.0
                    } else {
                        0.0
                    };
                }
                orthogonalize(&mut v, &components);
                let n = norm(&v);
                if n == 0.0 {
                    return Err(MlError::DegenerateData("cannot extend orthonormal basis"));
                }
                for x in v.iter_mut() {
                    *x /= n;
                }
                fix_sign(&mut v);
                ratios.push(0.0);
                components.push(v);
            }
        }
    }
    Ok(PcaModel {
        components,
        standardizer,
        explained_variance_ratio: ratios,
    })
}

/// Projects raw rows through the stored standardization and components.
pub fn pca_transform(model: &PcaModel, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    rows.iter()
        .map(|row| {
            let standardized = model.standardizer.apply_row(row);
            model
                .components
                .iter()
                .map(|c| dot(c, &standardized))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::strategy::Strategy;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line_data(n: usize, d: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let direction: Vec<f64> = (0..d).map(|i| 1.0 + i as f64).collect();
        (0..n)
            .map(|_| {
                let t: f64 = rng.gen_range(-3.0..3.0);
                direction.iter().map(|c| c * t).collect()
            })
            .collect()
    }

    #[test]
    fn rank_one_data_first_ratio_is_one() {
        let rows = line_data(40, 5, 1);
        let model = pca_fit(&rows, 2).unwrap();
        assert!(model.explained_variance_ratio[0] >= 1.0 - 1e-9);
        assert!(model.explained_variance_ratio[1].abs() < 1e-9);
    }

    #[test]
    fn components_are_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rows: Vec<Vec<f64>> = (0..30)
            .map(|_| (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let model = pca_fit(&rows, 2).unwrap();
        let c0 = &model.components[0];
        let c1 = &model.components[1];
        assert!((norm(c0) - 1.0).abs() < 1e-9);
        assert!((norm(c1) - 1.0).abs() < 1e-9);
        assert!(dot(c0, c1).abs() < 1e-9);
    }

    #[test]
    fn ratios_are_nonincreasing_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let rows: Vec<Vec<f64>> = (0..50)
            .map(|_| (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let model = pca_fit(&rows, 2).unwrap();
        let r = &model.explained_variance_ratio;
        assert!(r[0] >= r[1]);
        assert!(r.iter().all(|x| (0.0..=1.0).contains(x)));
    }

    #[test]
    fn column_mean_row_transforms_to_origin() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let rows: Vec<Vec<f64>> = (0..25)
            .map(|_| (0..3).map(|_| rng.gen_range(-5.0..5.0)).collect())
            .collect();
        let model = pca_fit(&rows, 2).unwrap();
        let d = rows[0].len();
        let mean_row: Vec<f64> = (0..d)
            .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / rows.len() as f64)
            .collect();
        let coords = pca_transform(&model, &[mean_row]);
        assert!(coords[0][0].abs() < 1e-9);
        assert!(coords[0][1].abs() < 1e-9);
    }

    proptest::proptest! {
        /// Projecting onto an orthonormal basis can only contract
        /// pairwise distances in the standardized space.
        #[test]
        fn projection_contracts_pairwise_distances(
            (d, rows) in (3usize..7).prop_flat_map(|d| {
                (
                    proptest::strategy::Just(d),
                    proptest::collection::vec(
                        proptest::collection::vec(-10.0f64..10.0, d),
                        4..16,
                    ),
                )
            }),
        ) {
            let _ = d;
            let model = match pca_fit(&rows, 2) {
                Ok(model) => model,
                Err(_) => return Ok(()), // degenerate draw
            };
            let standardized: Vec<Vec<f64>> = rows
                .iter()
                .map(|r| model.standardizer.apply_row(r))
                .collect();
            let projected = pca_transform(&model, &rows);
            for i in 0..rows.len() {
                for j in (i + 1)..rows.len() {
                    let full: f64 = standardized[i]
                        .iter()
                        .zip(&standardized[j])
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum();
                    let low: f64 = projected[i]
                        .iter()
                        .zip(&projected[j])
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum();
                    proptest::prop_assert!(low <= full + 1e-9, "projection expanded a distance");
                }
            }
        }
    }

    /// Reconstruction error of the fitted rank-2 projection is no worse
    /// than any random rank-2 orthogonal projection.
    #[test]
    fn beats_random_projections() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let rows: Vec<Vec<f64>> = (0..30)
            .map(|_| {
                let t: f64 = rng.gen_range(-2.0..2.0);
                let s: f64 = rng.gen_range(-1.0..1.0);
                vec![
                    t + 0.01 * rng.gen_range(-1.0..1.0),
                    s + 0.01 * rng.gen_range(-1.0..1.0),
                    0.5 * t - 0.2 * s,
                    0.1 * rng.gen_range(-1.0..1.0),
                ]
            })
            .collect();
        let model = pca_fit(&rows, 2).unwrap();
        let standardized: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| model.standardizer.apply_row(r))
            .collect();

        let reconstruction_error = |basis: &[Vec<f64>]| -> f64 {
            standardized
                .iter()
                .map(|row| {
                    let mut residual = row.clone();
                    for b in basis {
                        let proj = dot(row, b);
                        for (r, bx) in residual.iter_mut().zip(b) {
                            *r -= proj * bx;
                        }
                    }
                    residual.iter().map(|x| x * x).sum::<f64>()
                })
                .sum()
        };

        let fitted = reconstruction_error(&model.components);
        for _ in 0..1000 {
            let mut b0: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let n0 = norm(&b0);
            for x in b0.iter_mut() {
                *x /= n0;
            }
            let mut b1: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            orthogonalize(&mut b1, &[b0.clone()]);
            let n1 = norm(&b1);
            if n1 < 1e-9 {
                continue;
            }
            for x in b1.iter_mut() {
                *x /= n1;
            }
            let random = reconstruction_error(&[b0, b1]);
            assert!(
                fitted <= random + 1e-9,
                "random projection beat PCA: {random} < {fitted}"
            );
        }
    }

    #[test]
    fn zero_variance_is_degenerate() {
        let rows = vec![vec![1.0, 2.0], vec![1.0, 2.0], vec![1.0, 2.0]];
        assert!(matches!(
            pca_fit(&rows, 2).unwrap_err(),
            MlError::DegenerateData(_)
        ));
    }

    #[test]
    fn needs_enough_columns() {
        let rows = vec![vec![1.0], vec![2.0]];
        assert!(matches!(
            pca_fit(&rows, 2).unwrap_err(),
            MlError::TooFewColumns { .. }
        ));
    }
}
