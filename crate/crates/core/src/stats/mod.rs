//! The statistical battery: two-group one-way ANOVA, Cohen's d,
//! point-biserial correlation, Spearman rank correlation, and top-k
//! selection of correlated features.
//!
//! All functions are pure and deterministic. Every comparison in the
//! reports is between exactly two samples, so the ANOVA is intentionally
//! restricted to two groups (where F equals the squared pooled t
//! statistic).

pub mod beta;

use thiserror::Error;

pub use beta::f_distribution_sf;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum StatsError {
    #[error("need at least {required} samples per group, got {got}")]
    InsufficientSamples { required: usize, got: usize },
    #[error("degenerate data: {0}")]
    DegenerateData(&'static str),
    #[error("labels contain a single class")]
    SingleClass,
    #[error("constant sequence has no rank correlation")]
    ConstantSequence,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}

/// Result of a two-sample test.
#[derive(Debug, Clone, PartialEq)]
pub struct StatResult {
    pub statistic: f64,
    pub p_value: Option<f64>,
    pub effect_size: Option<f64>,
    pub n_a: usize,
    pub n_b: usize,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample variance (n - 1 denominator).
fn sample_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// One-way ANOVA for exactly two groups.
///
/// F = MS_between / MS_within with df = (1, n_a + n_b - 2); the p-value is
/// the upper tail of the F distribution computed via the regularized
/// incomplete beta function. If the groups separate perfectly (zero
/// within-group variance, distinct means) F is +inf with p = 0.
pub fn one_way_anova(a: &[f64], b: &[f64]) -> Result<StatResult, StatsError> {
    for group in [a, b] {
        if group.len() < 2 {
            return Err(StatsError::InsufficientSamples {
                required: 2,
                got: group.len(),
            });
        }
    }
    let (n_a, n_b) = (a.len() as f64, b.len() as f64);
    let (m_a, m_b) = (mean(a), mean(b));
    let grand = (n_a * m_a + n_b * m_b) / (n_a + n_b);

    let ss_between = n_a * (m_a - grand).powi(2) + n_b * (m_b - grand).powi(2);
    let ss_within: f64 = a.iter().map(|x| (x - m_a).powi(2)).sum::<f64>()
        + b.iter().map(|x| (x - m_b).powi(2)).sum::<f64>();

    let df1 = 1.0;
    let df2 = n_a + n_b - 2.0;
    if ss_within == 0.0 {
        if ss_between == 0.0 {
            return Err(StatsError::DegenerateData(
                "both groups constant and equal; F undefined",
            ));
        }
        return Ok(StatResult {
            statistic: f64::INFINITY,
            p_value: Some(0.0),
            effect_size: None,
            n_a: a.len(),
            n_b: b.len(),
        });
    }
    let f = (ss_between / df1) / (ss_within / df2);
    Ok(StatResult {
        statistic: f,
        p_value: Some(f_distribution_sf(df1, df2, f)),
        effect_size: None,
        n_a: a.len(),
        n_b: b.len(),
    })
}

/// Cohen's d with pooled standard deviation.
///
/// Positive when `b`'s mean exceeds `a`'s, so d > 0 for an increase from
/// a "before" sample to an "after" sample.
pub fn cohens_d(a: &[f64], b: &[f64]) -> Result<f64, StatsError> {
    for group in [a, b] {
        if group.len() < 2 {
            return Err(StatsError::InsufficientSamples {
                required: 2,
                got: group.len(),
            });
        }
    }
    let (n_a, n_b) = (a.len() as f64, b.len() as f64);
    let pooled_var =
        ((n_a - 1.0) * sample_variance(a) + (n_b - 1.0) * sample_variance(b)) / (n_a + n_b - 2.0);
    if pooled_var == 0.0 {
        return Err(StatsError::DegenerateData("zero pooled variance"));
    }
    Ok((mean(b) - mean(a)) / pooled_var.sqrt())
}

/// Pearson correlation on raw values (population-SD formulation; the
/// normalization cancels, so sample vs population makes no difference).
fn pearson(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len() as f64;
    let (mx, my) = (mean(x), mean(y));
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        let dx = xi - mx;
        let dy = yi - my;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Err(StatsError::DegenerateData(
            "zero variance in correlation input",
        ));
    }
    Ok((cov / n) / ((var_x / n).sqrt() * (var_y / n).sqrt()))
}

/// Point-biserial correlation between binary labels and values.
///
/// Equals the Pearson correlation of the 0/1 labels with the values;
/// positive means the class-1 mean exceeds the class-0 mean.
pub fn point_biserial(labels: &[u8], values: &[f64]) -> Result<f64, StatsError> {
    if labels.len() != values.len() {
        return Err(StatsError::LengthMismatch {
            left: labels.len(),
            right: values.len(),
        });
    }
    let ones = labels.iter().filter(|&&l| l == 1).count();
    if ones == 0 || ones == labels.len() {
        return Err(StatsError::SingleClass);
    }
    let label_values: Vec<f64> = labels.iter().map(|&l| l as f64).collect();
    pearson(&label_values, values).map_err(|e| match e {
        StatsError::DegenerateData(_) => StatsError::DegenerateData("values all equal"),
        other => other,
    })
}

/// Fractional ranks with average ranks on ties (1-based).
fn fractional_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&i, &j| {
        xs[i]
            .partial_cmp(&xs[j])
            .expect("rank input must not be NaN")
    });
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        // Positions i..=j share the same value; each gets the mean rank.
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation: Pearson correlation of fractional ranks,
/// average ranks on ties.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(StatsError::InsufficientSamples {
            required: 3,
            got: x.len(),
        });
    }
    let constant = |v: &[f64]| v.iter().all(|e| *e == v[0]);
    if constant(x) || constant(y) {
        return Err(StatsError::ConstantSequence);
    }
    pearson(&fractional_ranks(x), &fractional_ranks(y))
}

/// Ranks every matrix column by |coefficient| of `correlate` against that
/// column, descending, ties broken by column name ascending; returns the
/// top k. Column errors propagate.
pub fn top_k_correlates<F>(
    column_names: &[String],
    columns: &[Vec<f64>],
    k: usize,
    mut correlate: F,
) -> Result<Vec<(String, f64)>, StatsError>
where
    F: FnMut(&[f64]) -> Result<f64, StatsError>,
{
    assert_eq!(
        column_names.len(),
        columns.len(),
        "names must align with columns"
    );
    let mut scored: Vec<(String, f64)> = Vec::with_capacity(columns.len());
    for (name, column) in column_names.iter().zip(columns) {
        scored.push((name.clone(), correlate(column)?));
    }
    scored.sort_by(|(name_a, coef_a), (name_b, coef_b)| {
        coef_b
            .abs()
            .partial_cmp(&coef_a.abs())
            .expect("coefficients are finite")
            .then_with(|| name_a.cmp(name_b))
    });
    scored.truncate(k);
    Ok(scored)
}
