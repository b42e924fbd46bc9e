//! Synthetic factor-model data generation and the Monte Carlo replication
//! driver.
//!
//! Randomness is organized around one master seed and ChaCha8 stream ids so
//! replications are independent, order-insensitive and bitwise reproducible:
//! stream [`STREAM_MEAN_VECTOR`] generates the mean-difference vector once
//! (it is held fixed across replications) and stream
//! [`STREAM_REPLICATION_BASE`] + r drives replication r end to end.

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, Exp, StandardNormal};
use rayon::prelude::*;

use crate::classifiers::{
    fit_fair, fit_projection, fit_shrunken_centroids, random_unit_direction, FairSelection,
};
use crate::data::{ClassLabel, LabeledDataset};
use crate::error::{FairError, Result};
use crate::selection::{default_m_cap, select_m1};
use crate::stats::{class_summaries, lambda_max_curve, rank_by_abs, t_statistics};

pub const STREAM_MEAN_VECTOR: u64 = 1;
pub const STREAM_REPLICATION_BASE: u64 = 2;

/// Number of shrinkage values tried by the soft-threshold baseline.
const NSC_GRID: usize = 31;

/// Configuration of one simulation study.
#[derive(Clone, Debug)]
pub struct SimConfig {
    /// Feature count; must be divisible by 3 (three loading groups).
    pub p: usize,
    /// Fraction of features carrying a nonzero mean difference.
    pub signal_fraction: f64,
    /// Degrees of freedom of the chi-square factors.
    pub chi_df: u64,
    pub n1: usize,
    pub n2: usize,
    pub n_test_per_class: usize,
    pub replications: usize,
    /// Group-factor loadings are drawn from U(0, a_max).
    pub a_max: f64,
    /// Global-factor loadings are drawn from U(0, b_max).
    pub b_max: f64,
    pub master_seed: u64,
    /// Cap on the feature-count search; defaults to min(p, 50 n).
    pub m_cap: Option<usize>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            p: 4500,
            signal_fraction: 0.02,
            chi_df: 6,
            n1: 30,
            n2: 30,
            n_test_per_class: 200,
            replications: 100,
            a_max: 0.4,
            b_max: 0.2,
            master_seed: DEFAULT_MASTER_SEED,
            m_cap: None,
        }
    }
}

/// Default master seed of the simulation CLI and test suites.
pub const DEFAULT_MASTER_SEED: u64 = 8;

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p == 0 || !self.p.is_multiple_of(3) {
            return Err(FairError::InvalidArgument(format!(
                "p must be a positive multiple of 3, got {}",
                self.p
            )));
        }
        if !(self.signal_fraction > 0.0 && self.signal_fraction < 1.0) {
            return Err(FairError::InvalidArgument(format!(
                "signal fraction must be in (0,1), got {}",
                self.signal_fraction
            )));
        }
        if self.chi_df < 1 {
            return Err(FairError::InvalidArgument(
                "chi-square degrees of freedom must be >= 1".into(),
            ));
        }
        if self.n1 < 2 || self.n2 < 2 || self.n_test_per_class < 1 || self.replications < 1 {
            return Err(FairError::InvalidArgument(
                "class sizes need >= 2 train and >= 1 test samples and >= 1 replication".into(),
            ));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn effective_m_cap(&self) -> usize {
        self.m_cap
            .unwrap_or_else(|| default_m_cap(self.p, self.n()))
            .min(self.p)
            .max(1)
    }

    /// The class-1 mean vector, drawn once from its dedicated stream so it is
    /// identical for every replication under the same master seed.
    pub fn mean_vector(&self) -> Result<Array1<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(STREAM_MEAN_VECTOR);
        gen_mean_vector(self.p, self.signal_fraction, &mut rng)
    }
}

/// Factor loadings with the three-group structure: feature j belongs to group
/// j / (p/3) and loads a_j on its group factor and b_j on the global one.
#[derive(Clone, Debug)]
pub struct Loadings {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl Loadings {
    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn group(&self, j: usize) -> usize {
        j / (self.p() / 3)
    }
}

/// Draws loadings a_j ~ U(0, a_max) and b_j ~ U(0, b_max), i.i.d.
pub fn gen_loadings(
    p: usize,
    a_max: f64,
    b_max: f64,
    rng: &mut impl Rng,
) -> Result<Loadings> {
    if p == 0 || !p.is_multiple_of(3) {
        return Err(FairError::InvalidArgument(format!(
            "p must be a positive multiple of 3, got {p}"
        )));
    }
    let a = (0..p).map(|_| rng.random::<f64>() * a_max).collect();
    let b = (0..p).map(|_| rng.random::<f64>() * b_max).collect();
    Ok(Loadings { a, b })
}

/// Draws the sparse mean vector: each entry is 0 with probability 1 - c and
/// otherwise Laplace with density exp(-2|x|) (location 0, scale 1/2).
pub fn gen_mean_vector(p: usize, c: f64, rng: &mut impl Rng) -> Result<Array1<f64>> {
    if !(c > 0.0 && c < 1.0) {
        return Err(FairError::InvalidArgument(format!(
            "signal fraction must be in (0,1), got {c}"
        )));
    }
    let magnitude = Exp::new(2.0).expect("positive rate");
    let mut mu = Array1::zeros(p);
    for v in mu.iter_mut() {
        if rng.random::<f64>() < c {
            let m: f64 = magnitude.sample(rng);
            *v = if rng.random::<bool>() { m } else { -m };
        }
    }
    Ok(mu)
}

/// One sample of the factor-model noise plus mean: per sample, four shared
/// standardized chi-square factors are drawn once, then
/// eps_j = (Z_j + a_j chi_{g(j)} + b_j chi_4) / sqrt(1 + a_j^2 + b_j^2),
/// which has mean 0 and variance 1 by construction.
pub fn gen_class_matrix(
    mu: &Array1<f64>,
    loadings: &Loadings,
    n: usize,
    chi_df: u64,
    rng: &mut impl Rng,
) -> Result<Array2<f64>> {
    let p = loadings.p();
    if mu.len() != p {
        return Err(FairError::DimensionMismatch {
            expected: p,
            got: mu.len(),
        });
    }
    let chi = ChiSquared::new(chi_df as f64)
        .map_err(|e| FairError::InvalidArgument(format!("bad chi-square df: {e}")))?;
    let df = chi_df as f64;
    let scale = (2.0 * df).sqrt();
    let mut out = Array2::zeros((n, p));
    for i in 0..n {
        let mut factors = [0.0_f64; 4];
        for f in &mut factors {
            *f = (chi.sample(rng) - df) / scale;
        }
        for j in 0..p {
            let z: f64 = StandardNormal.sample(rng);
            let a = loadings.a[j];
            let b = loadings.b[j];
            let shared = a * factors[loadings.group(j)] + b * factors[3];
            out[[i, j]] = mu[j] + (z + shared) / (1.0 + a * a + b * b).sqrt();
        }
    }
    Ok(out)
}

/// Everything recorded for one replication.
#[derive(Clone, Debug)]
pub struct ReplicationResult {
    /// Replication index (also the RNG stream offset).
    pub rep: u64,
    /// Test error of the truncated rule at every m, features ranked by |T|.
    pub error_curve_t: Vec<f64>,
    /// Same, features ranked by the true |alpha|.
    pub error_curve_oracle: Vec<f64>,
    /// Feature count chosen by the eigenvalue-corrected criterion.
    pub fair_m: usize,
    pub fair_error: f64,
    pub nsc_features: usize,
    pub nsc_error: f64,
    pub projection_error: f64,
}

/// Error-vs-m curve of the truncated rule, evaluated incrementally: each test
/// sample's score at m is its score at m-1 plus one term, so the whole curve
/// costs O(p) per sample. Misclassification counts match refitting at every m
/// exactly, because the partial sums are the truncated models' scores.
fn nested_error_curve(
    alpha_hat: &Array1<f64>,
    mu_hat: &Array1<f64>,
    order: &[usize],
    test: &Array2<f64>,
    test_labels: &[ClassLabel],
) -> Vec<f64> {
    let n_test = test.nrows();
    let mut wrong = vec![0u32; order.len()];
    for (row, &label) in test.rows().into_iter().zip(test_labels) {
        let is_one = label == ClassLabel::One;
        let mut score = 0.0;
        for (k, &j) in order.iter().enumerate() {
            score += alpha_hat[j] * (row[j] - mu_hat[j]);
            let predicted_one = score > 0.0;
            if predicted_one != is_one {
                wrong[k] += 1;
            }
        }
    }
    wrong
        .into_iter()
        .map(|w| w as f64 / n_test as f64)
        .collect()
}

fn stack_dataset(
    class1: &Array2<f64>,
    class2: &Array2<f64>,
) -> Result<LabeledDataset> {
    let p = class1.ncols();
    let n = class1.nrows() + class2.nrows();
    let mut features = Array2::zeros((n, p));
    for (i, row) in class1.rows().into_iter().enumerate() {
        features.row_mut(i).assign(&row);
    }
    for (i, row) in class2.rows().into_iter().enumerate() {
        features.row_mut(class1.nrows() + i).assign(&row);
    }
    let labels = (0..n)
        .map(|i| {
            if i < class1.nrows() {
                ClassLabel::One
            } else {
                ClassLabel::Two
            }
        })
        .collect();
    LabeledDataset::new(features, labels)
}

/// Runs replication `rep` of the study: fresh loadings, train and test draws,
/// both error curves, the annealed rule at the data-driven feature count, the
/// soft-threshold baseline and one random-projection classifier.
pub fn run_replication(
    cfg: &SimConfig,
    mu1: &Array1<f64>,
    rep: u64,
) -> Result<ReplicationResult> {
    cfg.validate()?;
    if mu1.len() != cfg.p {
        return Err(FairError::DimensionMismatch {
            expected: cfg.p,
            got: mu1.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.master_seed);
    rng.set_stream(STREAM_REPLICATION_BASE + rep);

    let loadings = gen_loadings(cfg.p, cfg.a_max, cfg.b_max, &mut rng)?;
    let mu2 = Array1::zeros(cfg.p);
    let train1 = gen_class_matrix(mu1, &loadings, cfg.n1, cfg.chi_df, &mut rng)?;
    let train2 = gen_class_matrix(&mu2, &loadings, cfg.n2, cfg.chi_df, &mut rng)?;
    let test1 = gen_class_matrix(mu1, &loadings, cfg.n_test_per_class, cfg.chi_df, &mut rng)?;
    let test2 = gen_class_matrix(&mu2, &loadings, cfg.n_test_per_class, cfg.chi_df, &mut rng)?;
    let direction_seed: u64 = rng.random();

    let train = stack_dataset(&train1, &train2)?;
    let test = stack_dataset(&test1, &test2)?;

    let (s1, s2) = class_summaries(&train);
    let t = t_statistics(&s1, &s2)?;
    let ranking_t = rank_by_abs(&t.values);
    let ranking_oracle = rank_by_abs(mu1);
    let alpha_hat = &s1.means - &s2.means;
    let mu_hat = (&s1.means + &s2.means) / 2.0;

    let error_curve_t = nested_error_curve(
        &alpha_hat,
        &mu_hat,
        ranking_t.order(),
        test.features(),
        test.labels(),
    );
    let error_curve_oracle = nested_error_curve(
        &alpha_hat,
        &mu_hat,
        ranking_oracle.order(),
        test.features(),
        test.labels(),
    );

    let m_cap = cfg.effective_m_cap();
    let lambda = lambda_max_curve(&train, &ranking_t, m_cap)?;
    let t_ranked: Vec<f64> = ranking_t.ranked_scores()[..m_cap].to_vec();
    let selection = select_m1(&t_ranked, &lambda, cfg.n1, cfg.n2)?;
    let fair = fit_fair(&train, FairSelection::ByCount(selection.m_hat))?;
    let fair_error = fair.error_rate(&test)?;

    let (nsc_features, nsc_error) = nsc_baseline(&train, &test, &alpha_hat)?;

    let direction = random_unit_direction(cfg.p, direction_seed);
    let projection = fit_projection(&train, &direction)?;
    let projection_error = projection.error_rate(&test)?;

    Ok(ReplicationResult {
        rep,
        error_curve_t,
        error_curve_oracle,
        fair_m: selection.m_hat,
        fair_error,
        nsc_features,
        nsc_error,
        projection_error,
    })
}

/// Soft-threshold baseline: a fixed grid of shrinkage values, keeping the one
/// with the lowest training error (the largest shrinkage on ties, i.e. the
/// smallest surviving model). Descriptive output only.
fn nsc_baseline(
    train: &LabeledDataset,
    test: &LabeledDataset,
    alpha_hat: &Array1<f64>,
) -> Result<(usize, f64)> {
    let (s1, s2) = class_summaries(train);
    let pooled = crate::stats::pooled_diag(&s1, &s2)?;
    let delta_max = alpha_hat
        .iter()
        .zip(pooled.values.iter())
        .map(|(a, v)| (a / v.sqrt()).abs())
        .fold(0.0_f64, f64::max);
    let mut best: Option<(f64, f64)> = None; // (train error, delta)
    for k in 0..NSC_GRID {
        let delta = delta_max * k as f64 / (NSC_GRID - 1) as f64;
        let model = fit_shrunken_centroids(train, delta)?;
        let err = model.error_rate(train)?;
        let better = match best {
            None => true,
            Some((e, _)) => err <= e,
        };
        if better {
            best = Some((err, delta));
        }
    }
    let (_, delta) = best.expect("grid is nonempty");
    let model = fit_shrunken_centroids(train, delta)?;
    Ok((model.active().len(), model.error_rate(test)?))
}

/// Runs all configured replications (in parallel when a rayon pool is
/// available); outputs are indexed by replication and independent of the
/// execution order.
pub fn run_replications(cfg: &SimConfig, mu1: &Array1<f64>) -> Result<Vec<ReplicationResult>> {
    (0..cfg.replications as u64)
        .into_par_iter()
        .map(|rep| run_replication(cfg, mu1, rep))
        .collect()
}

/// Mean / spread summaries across replications. Standard errors and standard
/// deviations are absent for a single replication.
#[derive(Clone, Debug)]
pub struct SimSummary {
    pub replications: usize,
    pub mean_curve_t: Vec<f64>,
    pub se_curve_t: Option<Vec<f64>>,
    pub mean_curve_oracle: Vec<f64>,
    pub se_curve_oracle: Option<Vec<f64>>,
    pub fair_m_mean: f64,
    pub fair_m_sd: Option<f64>,
    pub fair_error_mean: f64,
    pub fair_error_sd: Option<f64>,
    pub nsc_features_mean: f64,
    pub nsc_error_mean: f64,
    pub nsc_error_sd: Option<f64>,
    pub projection_error_mean: f64,
    pub projection_error_sd: Option<f64>,
}

/// Numerically stable sum with a fixed, data-independent reduction tree.
fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 32 {
        let mut s = 0.0;
        for &x in v {
            s += x;
        }
        return s;
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

fn mean(v: &[f64]) -> f64 {
    pairwise_sum(v) / v.len() as f64
}

fn sample_sd(v: &[f64], mean: f64) -> Option<f64> {
    if v.len() < 2 {
        return None;
    }
    let sq: Vec<f64> = v.iter().map(|x| (x - mean) * (x - mean)).collect();
    Some((pairwise_sum(&sq) / (v.len() - 1) as f64).sqrt())
}

pub fn aggregate(results: &[ReplicationResult]) -> Result<SimSummary> {
    if results.is_empty() {
        return Err(FairError::InvalidArgument(
            "aggregate needs at least one replication".into(),
        ));
    }
    let r = results.len();
    let p = results[0].error_curve_t.len();
    let curve_stats = |extract: fn(&ReplicationResult) -> &Vec<f64>| {
        let mut means = Vec::with_capacity(p);
        let mut ses = Vec::with_capacity(p);
        let mut column = vec![0.0; r];
        for m in 0..p {
            for (i, res) in results.iter().enumerate() {
                column[i] = extract(res)[m];
            }
            let mu = mean(&column);
            means.push(mu);
            if let Some(sd) = sample_sd(&column, mu) {
                ses.push(sd / (r as f64).sqrt());
            }
        }
        (means, if r > 1 { Some(ses) } else { None })
    };
    let (mean_curve_t, se_curve_t) = curve_stats(|x| &x.error_curve_t);
    let (mean_curve_oracle, se_curve_oracle) = curve_stats(|x| &x.error_curve_oracle);

    let scalars = |extract: fn(&ReplicationResult) -> f64| {
        let v: Vec<f64> = results.iter().map(extract).collect();
        let mu = mean(&v);
        (mu, sample_sd(&v, mu))
    };
    let (fair_m_mean, fair_m_sd) = scalars(|x| x.fair_m as f64);
    let (fair_error_mean, fair_error_sd) = scalars(|x| x.fair_error);
    let (nsc_features_mean, _) = scalars(|x| x.nsc_features as f64);
    let (nsc_error_mean, nsc_error_sd) = scalars(|x| x.nsc_error);
    let (projection_error_mean, projection_error_sd) = scalars(|x| x.projection_error);

    Ok(SimSummary {
        replications: r,
        mean_curve_t,
        se_curve_t,
        mean_curve_oracle,
        se_curve_oracle,
        fair_m_mean,
        fair_m_sd,
        fair_error_mean,
        fair_error_sd,
        nsc_features_mean,
        nsc_error_mean,
        nsc_error_sd,
        projection_error_mean,
        projection_error_sd,
    })
}

/// Configuration of one t-separation trial: Gaussian classes with `s` signal
/// features whose standardized mean gap |alpha_j| / sqrt(sigma1^2 + sigma2^2)
/// sits exactly at `signal_floor`, and a fixed |T| threshold.
#[derive(Clone, Copy, Debug)]
pub struct SeparationTrial {
    pub p: usize,
    pub s: usize,
    pub n1: usize,
    pub n2: usize,
    pub signal_floor: f64,
    pub threshold: f64,
}

impl SeparationTrial {
    /// Builds the trial from the rate parameters: floor n^-gamma * beta and
    /// threshold c * n^(gamma/2).
    pub fn from_rates(
        p: usize,
        s: usize,
        n1: usize,
        n2: usize,
        gamma_exp: f64,
        beta: f64,
        c: f64,
    ) -> Self {
        let n = (n1 + n2) as f64;
        Self {
            p,
            s,
            n1,
            n2,
            signal_floor: n.powf(-gamma_exp) * beta,
            threshold: c * n.powf(gamma_exp / 2.0),
        }
    }
}

/// Draws one Gaussian dataset for the trial and reports whether the threshold
/// cleanly separates the signal block from the noise block:
/// min over signals of |T_j| >= x and max over noise of |T_j| < x.
pub fn theorem3_property_trial(trial: &SeparationTrial, rng: &mut impl Rng) -> Result<bool> {
    if trial.s > trial.p {
        return Err(FairError::InvalidArgument(format!(
            "signal count {} exceeds dimension {}",
            trial.s, trial.p
        )));
    }
    // Unit class variances, so |alpha| = floor * sqrt(2).
    let alpha = trial.signal_floor * std::f64::consts::SQRT_2;
    let mut x1 = Array2::zeros((trial.n1, trial.p));
    for i in 0..trial.n1 {
        for j in 0..trial.p {
            let z: f64 = StandardNormal.sample(rng);
            x1[[i, j]] = if j < trial.s { z + alpha } else { z };
        }
    }
    let mut x2 = Array2::zeros((trial.n2, trial.p));
    for v in x2.iter_mut() {
        *v = StandardNormal.sample(rng);
    }
    let ds = stack_dataset(&x1, &x2)?;
    let (s1, s2) = class_summaries(&ds);
    let t = t_statistics(&s1, &s2)?;
    let signal_ok = (0..trial.s).all(|j| t.values[j].abs() >= trial.threshold);
    let noise_ok = (trial.s..trial.p).all(|j| t.values[j].abs() < trial.threshold);
    Ok(signal_ok && noise_ok)
}
