//! Data-driven choice of the number of retained features, plus the bridge
//! between count-based and threshold-based selection.

use crate::error::{FairError, Result};
use crate::stats::{FeatureRanking, LambdaMaxCurve, TStats};

/// Outcome of a criterion sweep: the chosen count and the whole objective.
#[derive(Clone, Debug)]
pub struct SelectionResult {
    /// Smallest maximizer of the objective (1-based feature count).
    pub m_hat: usize,
    /// objective[m-1] is the criterion value at m retained features.
    pub objective: Vec<f64>,
}

fn smallest_argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best + 1
}

/// Kahan-compensated running sum; keeps the long prefix sweeps stable.
#[derive(Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn add(&mut self, v: f64) {
        let y = v - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

/// Identity-covariance criterion over the ranked mean differences:
/// objective(m) = [sum a_j^2 + m(n1-n2)/(n1 n2)]^2 / (nm/(n1 n2) + sum a_j^2).
pub fn select_m0(alpha_hat_ranked: &[f64], n1: usize, n2: usize) -> Result<SelectionResult> {
    if alpha_hat_ranked.is_empty() {
        return Err(FairError::InvalidArgument(
            "selection needs at least one feature".into(),
        ));
    }
    if n1 < 2 || n2 < 2 {
        return Err(FairError::InvalidArgument(
            "both class sizes must be at least 2".into(),
        ));
    }
    let n = (n1 + n2) as f64;
    let imbalance = (n1 as f64 - n2 as f64) / (n1 as f64 * n2 as f64);
    let noise = n / (n1 as f64 * n2 as f64);
    let mut prefix = Kahan::default();
    let mut objective = Vec::with_capacity(alpha_hat_ranked.len());
    for (i, &a) in alpha_hat_ranked.iter().enumerate() {
        prefix.add(a * a);
        let m = (i + 1) as f64;
        let num = prefix.value() + m * imbalance;
        objective.push(num * num / (noise * m + prefix.value()));
    }
    Ok(SelectionResult {
        m_hat: smallest_argmax(&objective),
        objective,
    })
}

/// Eigenvalue-corrected criterion over the ranked t-statistics:
/// objective(m) = n [sum T_j^2 + m(n1-n2)/n]^2
///               / (lambda_max(m) * (m n1 n2 + n1 n2 sum T_j^2)).
pub fn select_m1(
    t_ranked: &[f64],
    lambda: &LambdaMaxCurve,
    n1: usize,
    n2: usize,
) -> Result<SelectionResult> {
    if t_ranked.len() != lambda.len() {
        return Err(FairError::DimensionMismatch {
            expected: lambda.len(),
            got: t_ranked.len(),
        });
    }
    if t_ranked.is_empty() {
        return Err(FairError::InvalidArgument(
            "selection needs at least one feature".into(),
        ));
    }
    if n1 < 2 || n2 < 2 {
        return Err(FairError::InvalidArgument(
            "both class sizes must be at least 2".into(),
        ));
    }
    let n = (n1 + n2) as f64;
    let n1n2 = n1 as f64 * n2 as f64;
    let imbalance = (n1 as f64 - n2 as f64) / n;
    let mut prefix = Kahan::default();
    let mut objective = Vec::with_capacity(t_ranked.len());
    for (i, &t) in t_ranked.iter().enumerate() {
        prefix.add(t * t);
        let m = (i + 1) as f64;
        let num = prefix.value() + m * imbalance;
        let denom = n1n2 * (m + prefix.value());
        objective.push(n * num * num / (lambda.at(i + 1) * denom));
    }
    Ok(SelectionResult {
        m_hat: smallest_argmax(&objective),
        objective,
    })
}

/// Default cap on the selection sweep: the eigenvalue estimate loses accuracy
/// far beyond the sample size, so the search stops at min(p, 50 n).
pub fn default_m_cap(p: usize, n: usize) -> usize {
    p.min(50 * n)
}

/// Threshold b that makes the threshold rule select exactly the top m
/// features: the midpoint between the m-th and (m+1)-th largest scaled |T|
/// (half the smallest scaled value when m = p).
pub fn m_to_threshold(
    t: &TStats,
    ranking: &FeatureRanking,
    m: usize,
    n1: usize,
    n2: usize,
) -> Result<f64> {
    let p = t.p();
    if m < 1 || m > p {
        return Err(FairError::InvalidArgument(format!(
            "m must be in 1..={p}, got {m}"
        )));
    }
    let n = (n1 + n2) as f64;
    let scale = (n / (n1 as f64 * n2 as f64)).sqrt();
    let at = |rank: usize| scale * t.values[ranking.feature_at(rank)].abs();
    if m == p {
        let last = at(p - 1);
        if last == 0.0 {
            return Err(FairError::InvalidData(
                "count not threshold-representable: smallest scaled |T| is 0".into(),
            ));
        }
        return Ok(last / 2.0);
    }
    let upper = at(m - 1);
    let lower = at(m);
    if upper == lower {
        return Err(FairError::InvalidData(format!(
            "count not threshold-representable: ranks {m} and {} tie at scaled |T| = {upper}",
            m + 1
        )));
    }
    Ok((upper + lower) / 2.0)
}
