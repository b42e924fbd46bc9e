//! Closed-form misclassification rates and bounds for the independence-rule
//! family, evaluated at leading order (every vanishing remainder term is set
//! to zero), plus the Gaussian CDF primitive they share.

/// Standard Gaussian distribution function, accurate to well below 1e-12
/// (erfc is evaluated by libm to within a couple of ulps).
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Upper bound on the error of the full-feature independence rule:
/// 1 - Phi( (sqrt(n1 n2/(p n)) s + sqrt(p/(n n1 n2)) (n1 - n2))
///          / (2 sqrt(b0) sqrt(1 + n1 n2/(p n) s)) ),
/// with s the variance-standardized signal strength alpha' D^-1 alpha and b0
/// the largest correlation eigenvalue.
pub fn theorem1_bound(signal: f64, p: usize, n1: usize, n2: usize, b0: f64) -> f64 {
    let n = (n1 + n2) as f64;
    let n1n2 = n1 as f64 * n2 as f64;
    let pf = p as f64;
    let scaled = (n1n2 / (pf * n)).sqrt() * signal;
    let imbalance = (pf / (n * n1n2)).sqrt() * (n1 as f64 - n2 as f64);
    let arg = (scaled + imbalance) / (2.0 * b0.sqrt() * (1.0 + (n1n2 / (pf * n)) * signal).sqrt());
    1.0 - normal_cdf(arg)
}

/// Worst-case error over the parameter class with signal floor `c_p`:
/// 1 - Phi( (1/2) sqrt(n1 n2 / (p n b0)) c_p ).
pub fn theorem1_worst_case(c_p: f64, p: usize, n1: usize, n2: usize, b0: f64) -> f64 {
    let n = (n1 + n2) as f64;
    let n1n2 = n1 as f64 * n2 as f64;
    let arg = 0.5 * (n1n2 / (p as f64 * n * b0)).sqrt() * c_p;
    1.0 - normal_cdf(arg)
}

/// Limit of the worst-case error when the scaled signal floor converges to
/// `c0`: 1 - Phi(c0 / (2 sqrt(b0))). At c0 = 0 this is exactly 1/2.
pub fn theorem1_limit(c0: f64, b0: f64) -> f64 {
    1.0 - normal_cdf(c0 / (2.0 * b0.sqrt()))
}

/// Error of the truncated (unit-variance) rule keeping m features with
/// cumulative squared mean difference `signal`:
/// 1 - Phi( (signal + m(n1-n2)/(n1 n2)) / (2 sqrt(signal + n m/(n1 n2))) ).
pub fn theorem4_error(signal: f64, m: usize, n1: usize, n2: usize) -> f64 {
    let n = (n1 + n2) as f64;
    let n1n2 = n1 as f64 * n2 as f64;
    let mf = m as f64;
    let num = signal + mf * (n1 as f64 - n2 as f64) / n1n2;
    let arg = num / (2.0 * (signal + n * mf / n1n2).sqrt());
    1.0 - normal_cdf(arg)
}

/// Error of the oracle-gated rule over an active set of size m carrying
/// `signal`; structurally identical to [`theorem4_error`] with the gated set
/// replacing the first-m set.
pub fn oracle_error(signal: f64, m: usize, n1: usize, n2: usize) -> f64 {
    theorem4_error(signal, m, n1, n2)
}

/// Upper bound on the error of the hard-threshold rule at threshold `b`;
/// the threshold inflates the truncated-rule numerator by -m b^2 and nothing
/// else, so the bound coincides with [`theorem4_error`] at b = 0.
pub fn theorem5_bound(signal: f64, m: usize, b: f64, n1: usize, n2: usize) -> f64 {
    let n = (n1 + n2) as f64;
    let n1n2 = n1 as f64 * n2 as f64;
    let mf = m as f64;
    let num = signal + mf * (n1 as f64 - n2 as f64) / n1n2 - mf * b * b;
    let arg = num / (2.0 * (signal + n * mf / n1n2).sqrt());
    1.0 - normal_cdf(arg)
}
