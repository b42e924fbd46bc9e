//! Sufficient statistics, two-sample t-statistics, feature ranking, pooled
//! diagonal variances and the largest-eigenvalue curve of nested truncated
//! correlation matrices.

use ndarray::{Array1, Array2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::{ClassLabel, LabeledDataset};
use crate::error::{FairError, Result};

/// Cap substituted for an infinite t-statistic (both variances zero, means
/// different) so rankings stay total.
pub const T_SENTINEL: f64 = 1e15;

/// Relative convergence tolerance of the power iteration.
pub const POWER_ITER_RTOL: f64 = 1e-8;

/// Iteration cap of the power iteration.
pub const POWER_ITER_MAX: usize = 10_000;

/// Per-class per-feature sample means and variances (denominator n_k - 1).
#[derive(Clone, Debug)]
pub struct ClassSummary {
    pub n: usize,
    pub means: Array1<f64>,
    pub variances: Array1<f64>,
}

impl ClassSummary {
    pub fn p(&self) -> usize {
        self.means.len()
    }
}

/// Computes per-class summaries; class 1 first.
pub fn class_summaries(ds: &LabeledDataset) -> (ClassSummary, ClassSummary) {
    let summarize = |label: ClassLabel| {
        let rows = ds.class_indices(label);
        let n_k = rows.len();
        let p = ds.p();
        let mut means = Array1::zeros(p);
        for &i in &rows {
            means += &ds.sample(i);
        }
        means /= n_k as f64;
        let mut variances = Array1::zeros(p);
        for &i in &rows {
            let row = ds.sample(i);
            for j in 0..p {
                let d = row[j] - means[j];
                variances[j] += d * d;
            }
        }
        variances /= (n_k - 1) as f64;
        ClassSummary {
            n: n_k,
            means,
            variances,
        }
    };
    (summarize(ClassLabel::One), summarize(ClassLabel::Two))
}

/// Two-sample t-statistics, one per feature.
#[derive(Clone, Debug)]
pub struct TStats {
    pub values: Array1<f64>,
    /// Indices whose statistic was replaced by the +/- [`T_SENTINEL`] cap.
    pub capped: Vec<usize>,
}

impl TStats {
    pub fn p(&self) -> usize {
        self.values.len()
    }
}

/// T_j = (mean1_j - mean2_j) / sqrt(var1_j/n1 + var2_j/n2).
///
/// A feature with zero variance in both classes gets 0 when the means agree
/// and the signed sentinel otherwise.
pub fn t_statistics(s1: &ClassSummary, s2: &ClassSummary) -> Result<TStats> {
    if s1.p() != s2.p() {
        return Err(FairError::DimensionMismatch {
            expected: s1.p(),
            got: s2.p(),
        });
    }
    let p = s1.p();
    let mut values = Array1::zeros(p);
    let mut capped = Vec::new();
    for j in 0..p {
        let diff = s1.means[j] - s2.means[j];
        let denom = (s1.variances[j] / s1.n as f64 + s2.variances[j] / s2.n as f64).sqrt();
        let t = if denom == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                capped.push(j);
                diff.signum() * T_SENTINEL
            }
        } else {
            let raw = diff / denom;
            if raw.abs() > T_SENTINEL {
                capped.push(j);
                raw.signum() * T_SENTINEL
            } else {
                raw
            }
        };
        values[j] = t;
    }
    Ok(TStats { values, capped })
}

/// Feature order by descending absolute score, ties broken by ascending
/// original index.
#[derive(Clone, Debug)]
pub struct FeatureRanking {
    order: Vec<usize>,
    scores: Array1<f64>,
}

impl FeatureRanking {
    /// Feature index holding rank `k` (0-based: rank 0 is the largest |score|).
    pub fn feature_at(&self, k: usize) -> usize {
        self.order[k]
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn scores(&self) -> &Array1<f64> {
        &self.scores
    }

    pub fn p(&self) -> usize {
        self.order.len()
    }

    /// Score values permuted into rank order.
    pub fn ranked_scores(&self) -> Vec<f64> {
        self.order.iter().map(|&j| self.scores[j]).collect()
    }
}

/// Sorts features by |score| descending; equal magnitudes keep index order.
pub fn rank_by_abs(scores: &Array1<f64>) -> FeatureRanking {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .abs()
            .total_cmp(&scores[a].abs())
            .then(a.cmp(&b))
    });
    FeatureRanking {
        order,
        scores: scores.clone(),
    }
}

/// Pooled per-feature variances (var1 + var2)/2 with zero entries floored.
#[derive(Clone, Debug)]
pub struct PooledDiag {
    pub values: Array1<f64>,
    /// Indices whose pooled variance was zero and replaced by the floor.
    pub floored: Vec<usize>,
}

/// Elementwise (var1_j + var2_j)/2. Exact zeros are replaced by
/// 1e-12 * max pooled variance (or 1e-12 when every entry is zero).
pub fn pooled_diag(s1: &ClassSummary, s2: &ClassSummary) -> Result<PooledDiag> {
    if s1.p() != s2.p() {
        return Err(FairError::DimensionMismatch {
            expected: s1.p(),
            got: s2.p(),
        });
    }
    let mut values: Array1<f64> = (&s1.variances + &s2.variances) / 2.0;
    let max = values.iter().cloned().fold(0.0_f64, f64::max);
    let floor = 1e-12 * if max > 0.0 { max } else { 1.0 };
    let mut floored = Vec::new();
    for (j, v) in values.iter_mut().enumerate() {
        if *v == 0.0 {
            *v = floor;
            floored.push(j);
        }
    }
    Ok(PooledDiag { values, floored })
}

/// Largest eigenvalue of the correlation matrix of the top-m ranked features,
/// for m = 1..=len.
#[derive(Clone, Debug)]
pub struct LambdaMaxCurve {
    values: Vec<f64>,
}

impl LambdaMaxCurve {
    /// Value for m retained features (1-based m).
    pub fn at(&self, m: usize) -> f64 {
        self.values[m - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[cfg(test)]
    pub(crate) fn test_from_values(values: Vec<f64>) -> Self {
        Self { values }
    }
}

/// Power iteration for the top eigenvalue of a symmetric PSD matrix.
///
/// Starts from the all-ones direction and stops once the Rayleigh quotient
/// changes by less than the relative tolerance on two consecutive
/// iterations. A start vector annihilated by the matrix (the deterministic
/// one always is orthogonal to within-class-centered columns, so the first
/// product acts as a projection into the range) is re-drawn from a
/// fixed-seed RNG when the projection leaves nothing usable.
fn power_iteration_top(g: &Array2<f64>) -> Result<f64> {
    let n = g.nrows();
    let mut v = Array1::from_elem(n, 1.0 / (n as f64).sqrt());
    let mut lambda = f64::NAN;
    let mut restarts = 0u64;
    let mut settled = 0u32;
    for iter in 1..=POWER_ITER_MAX {
        let w = g.dot(&v);
        let new_lambda = v.dot(&w);
        let norm = w.dot(&w).sqrt();
        if norm == 0.0 || new_lambda <= 0.0 {
            restarts += 1;
            if restarts > 8 {
                return Err(FairError::NonConvergence {
                    iterations: iter,
                    tolerance: POWER_ITER_RTOL,
                });
            }
            v = restart_vector(n, restarts);
            lambda = f64::NAN;
            settled = 0;
            continue;
        }
        v = w / norm;
        if (new_lambda - lambda).abs() <= POWER_ITER_RTOL * new_lambda {
            settled += 1;
            if settled >= 2 {
                return Ok(new_lambda);
            }
        } else {
            settled = 0;
        }
        lambda = new_lambda;
    }
    Err(FairError::NonConvergence {
        iterations: POWER_ITER_MAX,
        tolerance: POWER_ITER_RTOL,
    })
}

fn restart_vector(n: usize, restart: u64) -> Array1<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x51ac_ed00 + restart);
    let mut v = Array1::from_shape_fn(n, |_| rng.random::<f64>() - 0.5);
    let norm = v.dot(&v).sqrt();
    v /= norm;
    v
}

/// Largest-eigenvalue curve of the nested correlation matrices of the top
/// `m_max` ranked features.
///
/// The features are centered within class and scaled to unit norm, so the
/// eigenvalue tracks noise correlation rather than class separation. The
/// spectrum is taken from the n x n Gram matrix, which shares its nonzero
/// eigenvalues with the m x m correlation matrix and grows by a rank-1
/// update per added feature.
pub fn lambda_max_curve(
    ds: &LabeledDataset,
    ranking: &FeatureRanking,
    m_max: usize,
) -> Result<LambdaMaxCurve> {
    let n = ds.n();
    let p = ds.p();
    if m_max < 1 || m_max > p {
        return Err(FairError::InvalidArgument(format!(
            "m_max must be in 1..={p}, got {m_max}"
        )));
    }
    if n < 3 {
        return Err(FairError::InvalidData(
            "largest-eigenvalue curve needs at least 3 samples".into(),
        ));
    }
    let (s1, s2) = class_summaries(ds);
    let labels = ds.labels();
    let features = ds.features();

    let mut gram = Array2::<f64>::zeros((n, n));
    let mut values = Vec::with_capacity(m_max);
    let mut u = Array1::<f64>::zeros(n);
    for m in 1..=m_max {
        let j = ranking.feature_at(m - 1);
        for i in 0..n {
            let center = match labels[i] {
                ClassLabel::One => s1.means[j],
                ClassLabel::Two => s2.means[j],
            };
            u[i] = features[[i, j]] - center;
        }
        let norm = u.dot(&u).sqrt();
        if norm == 0.0 {
            return Err(FairError::InvalidData(format!(
                "feature {j} has zero variance within both classes; correlation undefined"
            )));
        }
        u /= norm;
        for a in 0..n {
            for b in 0..n {
                gram[[a, b]] += u[a] * u[b];
            }
        }
        let lambda = if m == 1 {
            // 1x1 correlation matrix.
            1.0
        } else {
            // Interlacing makes the true curve non-decreasing; clamp out
            // sub-tolerance dips from the iterative solve.
            power_iteration_top(&gram)?.max(values[m - 2])
        };
        values.push(lambda);
    }
    Ok(LambdaMaxCurve { values })
}
