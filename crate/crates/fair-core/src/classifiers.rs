//! Every trained classifier expressed in one shared linear-diagonal form:
//! score(x) = sum over active features of w_j * (x_j - center_j), with
//! class 1 chosen exactly when the score is positive.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use ndarray::{Array1, ArrayView1};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::data::{ClassLabel, LabeledDataset};
use crate::error::{FairError, Result};
use crate::stats::{class_summaries, pooled_diag, rank_by_abs, t_statistics, FeatureRanking};

/// Which fitting rule produced a model.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ModelKind {
    Independence,
    TruncatedNc,
    Fair,
    Oracle,
    Projection,
    ShrunkenCentroids,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ModelKind::Independence => "independence",
            ModelKind::TruncatedNc => "truncated_nc",
            ModelKind::Fair => "fair",
            ModelKind::Oracle => "oracle",
            ModelKind::Projection => "projection",
            ModelKind::ShrunkenCentroids => "shrunken_centroids",
        };
        f.write_str(s)
    }
}

impl FromStr for ModelKind {
    type Err = FairError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "independence" => ModelKind::Independence,
            "truncated_nc" => ModelKind::TruncatedNc,
            "fair" => ModelKind::Fair,
            "oracle" => ModelKind::Oracle,
            "projection" => ModelKind::Projection,
            "shrunken_centroids" => ModelKind::ShrunkenCentroids,
            other => {
                return Err(FairError::InvalidData(format!(
                    "unknown model kind '{other}'"
                )))
            }
        })
    }
}

/// Trained linear-diagonal classifier over a subset of features.
#[derive(Clone, Debug)]
pub struct LinearIndependenceModel {
    p: usize,
    active: Vec<usize>,
    weights: Vec<f64>,
    centers: Vec<f64>,
    kind: ModelKind,
    n1: usize,
    n2: usize,
    /// Threshold parameter used by the fit, when one exists (b, a or delta).
    threshold: Option<f64>,
    /// Feature count requested by the fit, when one exists.
    count: Option<usize>,
}

impl LinearIndependenceModel {
    #[allow(clippy::too_many_arguments)]
    fn build(
        p: usize,
        active: Vec<usize>,
        weights: Vec<f64>,
        centers: Vec<f64>,
        kind: ModelKind,
        n1: usize,
        n2: usize,
        threshold: Option<f64>,
        count: Option<usize>,
    ) -> Result<Self> {
        if weights.len() != active.len() || centers.len() != active.len() {
            return Err(FairError::DimensionMismatch {
                expected: active.len(),
                got: weights.len().max(centers.len()),
            });
        }
        for (&j, (&w, &c)) in active.iter().zip(weights.iter().zip(centers.iter())) {
            if j >= p {
                return Err(FairError::InvalidData(format!(
                    "active feature {j} out of range for p = {p}"
                )));
            }
            if !w.is_finite() || !c.is_finite() {
                return Err(FairError::InvalidData(format!(
                    "non-finite weight or center for feature {j}"
                )));
            }
        }
        Ok(Self {
            p,
            active,
            weights,
            centers,
            kind,
            n1,
            n2,
            threshold,
            count,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn threshold(&self) -> Option<f64> {
        self.threshold
    }

    pub fn count(&self) -> Option<usize> {
        self.count
    }

    /// An empty model is legal (every feature rejected); it scores 0
    /// everywhere and therefore always predicts class 2.
    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }

    /// Discriminant score; positive means class 1.
    pub fn score(&self, x: ArrayView1<'_, f64>) -> Result<f64> {
        if x.len() != self.p {
            return Err(FairError::DimensionMismatch {
                expected: self.p,
                got: x.len(),
            });
        }
        let mut s = 0.0;
        for (k, &j) in self.active.iter().enumerate() {
            s += self.weights[k] * (x[j] - self.centers[k]);
        }
        Ok(s)
    }

    /// Class 1 exactly when the score is positive; ties go to class 2.
    pub fn predict(&self, x: ArrayView1<'_, f64>) -> Result<ClassLabel> {
        Ok(if self.score(x)? > 0.0 {
            ClassLabel::One
        } else {
            ClassLabel::Two
        })
    }

    /// Fraction of misclassified samples in `test`.
    pub fn error_rate(&self, test: &LabeledDataset) -> Result<f64> {
        let mut wrong = 0usize;
        for i in 0..test.n() {
            if self.predict(test.sample(i))? != test.labels()[i] {
                wrong += 1;
            }
        }
        Ok(wrong as f64 / test.n() as f64)
    }

    /// Serializes the model as a key=value preamble plus a
    /// (feature_index, weight, center) table. Floats use shortest round-trip
    /// form, so reloading preserves predictions exactly.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut s = String::new();
        s.push_str(&format!("#kind={}\n", self.kind));
        s.push_str(&format!("#p={}\n", self.p));
        s.push_str(&format!("#n1={}\n", self.n1));
        s.push_str(&format!("#n2={}\n", self.n2));
        if let Some(t) = self.threshold {
            s.push_str(&format!("#threshold={t}\n"));
        }
        if let Some(c) = self.count {
            s.push_str(&format!("#count={c}\n"));
        }
        s.push_str("feature_index\tweight\tcenter\n");
        for (k, &j) in self.active.iter().enumerate() {
            s.push_str(&format!("{j}\t{}\t{}\n", self.weights[k], self.centers[k]));
        }
        let mut f = File::create(path).map_err(|e| FairError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        f.write_all(s.as_bytes()).map_err(|e| FairError::Io {
            path: path.to_path_buf(),
            source: e,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| FairError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let mut kind = None;
        let mut p = None;
        let mut n1 = None;
        let mut n2 = None;
        let mut threshold = None;
        let mut count = None;
        let mut active = Vec::new();
        let mut weights = Vec::new();
        let mut centers = Vec::new();
        let mut saw_header = false;
        for (lineno, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| FairError::Io {
                path: path.to_path_buf(),
                source: e,
            })?;
            let parse_err = |msg: String| FairError::Parse {
                path: path.to_path_buf(),
                line: lineno + 1,
                msg,
            };
            if let Some(kv) = line.strip_prefix('#') {
                let (key, value) = kv
                    .split_once('=')
                    .ok_or_else(|| parse_err(format!("bad preamble line '{line}'")))?;
                match key {
                    "kind" => kind = Some(value.parse::<ModelKind>()?),
                    "p" => p = Some(value.parse().map_err(|_| parse_err("bad p".into()))?),
                    "n1" => n1 = Some(value.parse().map_err(|_| parse_err("bad n1".into()))?),
                    "n2" => n2 = Some(value.parse().map_err(|_| parse_err("bad n2".into()))?),
                    "threshold" => {
                        threshold =
                            Some(value.parse().map_err(|_| parse_err("bad threshold".into()))?)
                    }
                    "count" => {
                        count = Some(value.parse().map_err(|_| parse_err("bad count".into()))?)
                    }
                    other => return Err(parse_err(format!("unknown preamble key '{other}'"))),
                }
                continue;
            }
            if !saw_header {
                if line != "feature_index\tweight\tcenter" {
                    return Err(parse_err("missing model table header".into()));
                }
                saw_header = true;
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let mut it = line.split('\t');
            let j: usize = it
                .next()
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| parse_err("bad feature index".into()))?;
            let w: f64 = it
                .next()
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| parse_err("bad weight".into()))?;
            let c: f64 = it
                .next()
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| parse_err("bad center".into()))?;
            active.push(j);
            weights.push(w);
            centers.push(c);
        }
        let missing = |k: &str| FairError::InvalidData(format!("model file missing '{k}'"));
        Self::build(
            p.ok_or_else(|| missing("p"))?,
            active,
            weights,
            centers,
            kind.ok_or_else(|| missing("kind"))?,
            n1.ok_or_else(|| missing("n1"))?,
            n2.ok_or_else(|| missing("n2"))?,
            threshold,
            count,
        )
    }
}

/// Shared per-fit estimates: mean difference, midpoint and pooled variances.
struct FitContext {
    p: usize,
    n1: usize,
    n2: usize,
    alpha_hat: Array1<f64>,
    mu_hat: Array1<f64>,
    pooled: Array1<f64>,
}

fn fit_context(ds: &LabeledDataset) -> Result<FitContext> {
    let (s1, s2) = class_summaries(ds);
    let pooled = pooled_diag(&s1, &s2)?;
    Ok(FitContext {
        p: ds.p(),
        n1: s1.n,
        n2: s2.n,
        alpha_hat: &s1.means - &s2.means,
        mu_hat: (&s1.means + &s2.means) / 2.0,
        pooled: pooled.values,
    })
}

/// Independence rule over all features: w_j = alpha_hat_j / pooled_j.
pub fn fit_independence(ds: &LabeledDataset) -> Result<LinearIndependenceModel> {
    let c = fit_context(ds)?;
    let active: Vec<usize> = (0..c.p).collect();
    let weights: Vec<f64> = active
        .iter()
        .map(|&j| c.alpha_hat[j] / c.pooled[j])
        .collect();
    let centers: Vec<f64> = active.iter().map(|&j| c.mu_hat[j]).collect();
    LinearIndependenceModel::build(
        c.p,
        active,
        weights,
        centers,
        ModelKind::Independence,
        c.n1,
        c.n2,
        None,
        None,
    )
}

/// Truncated nearest-centroid rule: unit-variance weights w_j = alpha_hat_j
/// over the first m ranked features (active kept in ranking order, so scores
/// are exactly nested partial sums).
pub fn fit_truncated_nc(
    ds: &LabeledDataset,
    ranking: &FeatureRanking,
    m: usize,
) -> Result<LinearIndependenceModel> {
    let c = fit_context(ds)?;
    if m < 1 || m > c.p {
        return Err(FairError::InvalidArgument(format!(
            "m must be in 1..={}, got {m}",
            c.p
        )));
    }
    let active: Vec<usize> = ranking.order()[..m].to_vec();
    let weights: Vec<f64> = active.iter().map(|&j| c.alpha_hat[j]).collect();
    let centers: Vec<f64> = active.iter().map(|&j| c.mu_hat[j]).collect();
    LinearIndependenceModel::build(
        c.p,
        active,
        weights,
        centers,
        ModelKind::TruncatedNc,
        c.n1,
        c.n2,
        None,
        Some(m),
    )
}

/// How the annealed rule picks its feature set.
#[derive(Clone, Copy, Debug)]
pub enum FairSelection {
    /// Keep the top m features by |T|.
    ByCount(usize),
    /// Keep features with sqrt(n/(n1 n2)) |T_j| > b.
    ByThreshold(f64),
}

/// Features-annealed independence rule: variance-adjusted weights
/// w_j = alpha_hat_j / pooled_j over the selected features.
///
/// An empty selection is legal; the model then scores 0 everywhere.
pub fn fit_fair(ds: &LabeledDataset, select: FairSelection) -> Result<LinearIndependenceModel> {
    let c = fit_context(ds)?;
    let (s1, s2) = class_summaries(ds);
    let t = t_statistics(&s1, &s2)?;
    let n = (c.n1 + c.n2) as f64;
    let scale = (n / (c.n1 as f64 * c.n2 as f64)).sqrt();
    let mut active: Vec<usize> = match select {
        FairSelection::ByCount(m) => {
            if m < 1 || m > c.p {
                return Err(FairError::InvalidArgument(format!(
                    "m must be in 1..={}, got {m}",
                    c.p
                )));
            }
            rank_by_abs(&t.values).order()[..m].to_vec()
        }
        FairSelection::ByThreshold(b) => (0..c.p)
            .filter(|&j| scale * t.values[j].abs() > b)
            .collect(),
    };
    active.sort_unstable();
    let weights: Vec<f64> = active
        .iter()
        .map(|&j| c.alpha_hat[j] / c.pooled[j])
        .collect();
    let centers: Vec<f64> = active.iter().map(|&j| c.mu_hat[j]).collect();
    let (threshold, count) = match select {
        FairSelection::ByCount(m) => (None, Some(m)),
        FairSelection::ByThreshold(b) => (Some(b), None),
    };
    LinearIndependenceModel::build(
        c.p,
        active,
        weights,
        centers,
        ModelKind::Fair,
        c.n1,
        c.n2,
        threshold,
        count,
    )
}

/// Oracle-gated rule: membership decided by the true mean differences
/// (|alpha_j| > a), weights still estimated from the sample.
pub fn fit_oracle(
    ds: &LabeledDataset,
    true_alpha: &[f64],
    a: f64,
) -> Result<LinearIndependenceModel> {
    let c = fit_context(ds)?;
    if true_alpha.len() != c.p {
        return Err(FairError::DimensionMismatch {
            expected: c.p,
            got: true_alpha.len(),
        });
    }
    let active: Vec<usize> = (0..c.p).filter(|&j| true_alpha[j].abs() > a).collect();
    let weights: Vec<f64> = active.iter().map(|&j| c.alpha_hat[j]).collect();
    let centers: Vec<f64> = active.iter().map(|&j| c.mu_hat[j]).collect();
    LinearIndependenceModel::build(
        c.p,
        active,
        weights,
        centers,
        ModelKind::Oracle,
        c.n1,
        c.n2,
        Some(a),
        None,
    )
}

/// Unit vector drawn uniformly from the sphere, plus the seed that made it.
#[derive(Clone, Debug)]
pub struct ProjectionDirection {
    a: Array1<f64>,
    seed: u64,
}

impl ProjectionDirection {
    pub fn values(&self) -> &Array1<f64> {
        &self.a
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }
}

/// Normalized standard Gaussian vector: uniform on the unit sphere.
pub fn random_unit_direction(p: usize, seed: u64) -> ProjectionDirection {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let z: Array1<f64> =
            Array1::from_shape_fn(p, |_| StandardNormal.sample(&mut rng));
        let norm = z.dot(&z).sqrt();
        if norm > 0.0 {
            return ProjectionDirection {
                a: z / norm,
                seed,
            };
        }
    }
}

/// Projection classifier onto a fixed direction, materialized in linear form:
/// w_j = a_j * (a' mu1_hat - a' mu2_hat), centers mu_hat.
pub fn fit_projection(
    ds: &LabeledDataset,
    dir: &ProjectionDirection,
) -> Result<LinearIndependenceModel> {
    let c = fit_context(ds)?;
    if dir.p() != c.p {
        return Err(FairError::DimensionMismatch {
            expected: c.p,
            got: dir.p(),
        });
    }
    let gap = dir.a.dot(&c.alpha_hat);
    let active: Vec<usize> = (0..c.p).collect();
    let weights: Vec<f64> = active.iter().map(|&j| dir.a[j] * gap).collect();
    let centers: Vec<f64> = active.iter().map(|&j| c.mu_hat[j]).collect();
    LinearIndependenceModel::build(
        c.p,
        active,
        weights,
        centers,
        ModelKind::Projection,
        c.n1,
        c.n2,
        None,
        None,
    )
}

/// Soft-threshold centroid baseline: standardized mean differences shrunk by
/// `delta`, then rescaled, keeping only features that survive the shrinkage.
pub fn fit_shrunken_centroids(
    ds: &LabeledDataset,
    delta: f64,
) -> Result<LinearIndependenceModel> {
    if delta < 0.0 {
        return Err(FairError::InvalidArgument(format!(
            "shrinkage must be >= 0, got {delta}"
        )));
    }
    let c = fit_context(ds)?;
    let mut active = Vec::new();
    let mut weights = Vec::new();
    let mut centers = Vec::new();
    for j in 0..c.p {
        let sd = c.pooled[j].sqrt();
        let r = c.alpha_hat[j] / sd;
        let shrunk = r.signum() * (r.abs() - delta).max(0.0);
        if shrunk != 0.0 {
            active.push(j);
            weights.push(shrunk / sd);
            centers.push(c.mu_hat[j]);
        }
    }
    LinearIndependenceModel::build(
        c.p,
        active,
        weights,
        centers,
        ModelKind::ShrunkenCentroids,
        c.n1,
        c.n2,
        Some(delta),
        None,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::LabeledDataset;
    use ndarray::Array2;
    use rand::Rng;

    fn random_dataset(n1: usize, n2: usize, p: usize, seed: u64) -> LabeledDataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = Array2::from_shape_fn((n1 + n2, p), |(i, j)| {
            let shift = if i < n1 { 0.3 * (j % 3) as f64 } else { 0.0 };
            rng.random::<f64>() * 2.0 - 1.0 + shift
        });
        let labels = (0..n1 + n2)
            .map(|i| {
                if i < n1 {
                    ClassLabel::One
                } else {
                    ClassLabel::Two
                }
            })
            .collect();
        LabeledDataset::new(f, labels).unwrap()
    }

    fn swap_labels(ds: &LabeledDataset) -> LabeledDataset {
        let labels = ds.labels().iter().map(|l| l.other()).collect();
        LabeledDataset::new(ds.features().clone(), labels).unwrap()
    }

    #[test]
    fn independence_midpoint_and_centroid_scores() {
        let ds = random_dataset(8, 7, 6, 1);
        let m = fit_independence(&ds).unwrap();
        let (s1, s2) = class_summaries(&ds);
        let mu_hat = (&s1.means + &s2.means) / 2.0;
        assert_eq!(m.score(mu_hat.view()).unwrap(), 0.0);
        assert!(m.score(s1.means.view()).unwrap() > 0.0);
        assert!(m.score(s2.means.view()).unwrap() < 0.0);
    }

    #[test]
    fn label_swap_negates_scores() {
        let ds = random_dataset(6, 9, 5, 2);
        let m = fit_independence(&ds).unwrap();
        let m_sw = fit_independence(&swap_labels(&ds)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = Array1::from_shape_fn(5, |_| rng.random::<f64>() * 4.0 - 2.0);
            let a = m.score(x.view()).unwrap();
            let b = m_sw.score(x.view()).unwrap();
            assert!((a + b).abs() < 1e-12 * a.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn truncated_nc_reduces_to_independence_at_unit_variance() {
        // With all pooled variances forced to ~1 the two rules coincide at m = p.
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n1 = 40;
        let p = 4;
        let mut f = Array2::from_shape_fn((2 * n1, p), |_| {
            let v: f64 = StandardNormal.sample(&mut rng);
            v
        });
        // Normalize each feature's pooled variance to exactly 1.
        let labels: Vec<ClassLabel> = (0..2 * n1)
            .map(|i| {
                if i < n1 {
                    ClassLabel::One
                } else {
                    ClassLabel::Two
                }
            })
            .collect();
        let tmp = LabeledDataset::new(f.clone(), labels.clone()).unwrap();
        let (s1, s2) = class_summaries(&tmp);
        let d = pooled_diag(&s1, &s2).unwrap();
        for j in 0..p {
            let scale = d.values[j].sqrt();
            for i in 0..2 * n1 {
                f[[i, j]] /= scale;
            }
        }
        let ds = LabeledDataset::new(f, labels).unwrap();
        let (s1, s2) = class_summaries(&ds);
        let t = t_statistics(&s1, &s2).unwrap();
        let ranking = rank_by_abs(&t.values);

        let nc = fit_truncated_nc(&ds, &ranking, p).unwrap();
        let ind = fit_independence(&ds).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let x = Array1::from_shape_fn(p, |_| rng.random::<f64>() * 2.0 - 1.0);
            let a = nc.score(x.view()).unwrap();
            let b = ind.score(x.view()).unwrap();
            assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn truncated_nc_scores_are_nested_partial_sums() {
        let ds = random_dataset(7, 7, 9, 6);
        let (s1, s2) = class_summaries(&ds);
        let t = t_statistics(&s1, &s2).unwrap();
        let ranking = rank_by_abs(&t.values);
        let alpha = &s1.means - &s2.means;
        let mu = (&s1.means + &s2.means) / 2.0;

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = Array1::from_shape_fn(9, |_| rng.random::<f64>() * 2.0 - 1.0);
        let mut prev = 0.0;
        for m in 1..=9 {
            let model = fit_truncated_nc(&ds, &ranking, m).unwrap();
            let s = model.score(x.view()).unwrap();
            let j = ranking.feature_at(m - 1);
            let expect = prev + alpha[j] * (x[j] - mu[j]);
            assert!((s - expect).abs() < 1e-12 * expect.abs().max(1.0));
            prev = s;
        }
    }

    #[test]
    fn fair_threshold_zero_matches_independence() {
        let ds = random_dataset(10, 8, 12, 8);
        let fair = fit_fair(&ds, FairSelection::ByThreshold(0.0)).unwrap();
        let ind = fit_independence(&ds).unwrap();
        assert_eq!(fair.active(), ind.active());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let x = Array1::from_shape_fn(12, |_| rng.random::<f64>() * 2.0 - 1.0);
            let a = fair.score(x.view()).unwrap();
            let b = ind.score(x.view()).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn fair_empty_model_predicts_class_two() {
        let ds = random_dataset(5, 5, 4, 10);
        let fair = fit_fair(&ds, FairSelection::ByThreshold(1e18)).unwrap();
        assert!(fair.is_empty());
        let x = Array1::zeros(4);
        assert_eq!(fair.score(x.view()).unwrap(), 0.0);
        assert_eq!(fair.predict(x.view()).unwrap(), ClassLabel::Two);
    }

    #[test]
    fn fair_count_equals_bracketing_threshold() {
        for seed in 0..10u64 {
            let ds = random_dataset(6, 6, 10, 20 + seed);
            let (s1, s2) = class_summaries(&ds);
            let t = t_statistics(&s1, &s2).unwrap();
            let scale = (12.0_f64 / 36.0).sqrt();
            let mut scaled: Vec<f64> = t.values.iter().map(|v| scale * v.abs()).collect();
            scaled.sort_by(|a, b| b.total_cmp(a));
            let m = 4;
            let b = (scaled[m - 1] + scaled[m]) / 2.0;
            let by_count = fit_fair(&ds, FairSelection::ByCount(m)).unwrap();
            let by_thresh = fit_fair(&ds, FairSelection::ByThreshold(b)).unwrap();
            assert_eq!(by_count.active(), by_thresh.active());
            assert_eq!(by_count.weights(), by_thresh.weights());
        }
    }

    #[test]
    fn fair_scale_equivariance() {
        let ds = random_dataset(9, 9, 6, 33);
        let fair = fit_fair(&ds, FairSelection::ByCount(3)).unwrap();

        let scales = [4.0, 0.5, 10.0, 2.5, 1e-2, 3.0];
        let mut f = ds.features().clone();
        for j in 0..6 {
            for i in 0..f.nrows() {
                f[[i, j]] *= scales[j];
            }
        }
        let ds_s = LabeledDataset::new(f, ds.labels().to_vec()).unwrap();
        let fair_s = fit_fair(&ds_s, FairSelection::ByCount(3)).unwrap();
        assert_eq!(fair.active(), fair_s.active());

        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for _ in 0..20 {
            let x = Array1::from_shape_fn(6, |_| rng.random::<f64>() * 2.0 - 1.0);
            let x_s = Array1::from_shape_fn(6, |j| x[j] * scales[j]);
            let a = fair.score(x.view()).unwrap();
            let b = fair_s.score(x_s.view()).unwrap();
            assert!((a - b).abs() < 1e-9 * a.abs().max(1.0), "{a} vs {b}");
            assert_eq!(
                fair.predict(x.view()).unwrap(),
                fair_s.predict(x_s.view()).unwrap()
            );
        }
    }

    #[test]
    fn oracle_gate_behaviour() {
        let ds = random_dataset(6, 6, 8, 40);
        let alpha = [0.9, -0.4, 0.0, 1.5, -0.05, 0.3, 0.0, -2.0];

        let closed = fit_oracle(&ds, &alpha, 2.5).unwrap();
        assert!(closed.is_empty());

        let open = fit_oracle(&ds, &alpha, 0.0).unwrap();
        let expect: Vec<usize> = (0..8).filter(|&j| alpha[j].abs() > 0.0).collect();
        assert_eq!(open.active(), expect.as_slice());

        let gated = fit_oracle(&ds, &alpha, 0.35).unwrap();
        let brute: Vec<usize> = (0..8).filter(|&j| alpha[j].abs() > 0.35).collect();
        assert_eq!(gated.active(), brute.as_slice());

        // All-nonzero differences with an open gate select every feature,
        // the same set as truncating at m = p.
        let nonzero = [0.9, -0.4, 0.1, 1.5, -0.05, 0.3, 0.2, -2.0];
        let all = fit_oracle(&ds, &nonzero, 0.0).unwrap();
        let (s1, s2) = class_summaries(&ds);
        let t = t_statistics(&s1, &s2).unwrap();
        let full = fit_truncated_nc(&ds, &rank_by_abs(&t.values), 8).unwrap();
        let mut full_set = full.active().to_vec();
        full_set.sort_unstable();
        assert_eq!(all.active(), full_set.as_slice());
    }

    #[test]
    fn unit_direction_norm_determinism_and_symmetry() {
        let d1 = random_unit_direction(50, 99);
        let d2 = random_unit_direction(50, 99);
        assert!((d1.values().dot(d1.values()) - 1.0).abs() < 1e-12);
        assert_eq!(d1.values(), d2.values());

        // Empirical mean of each coordinate over many draws is ~0.
        let p = 5;
        let reps = 10_000;
        let mut mean = vec![0.0; p];
        for s in 0..reps {
            let d = random_unit_direction(p, 1000 + s as u64);
            for (m, v) in mean.iter_mut().zip(d.values()) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= reps as f64;
        }
        let band = 3.0 / (reps as f64).sqrt();
        for (j, m) in mean.iter().enumerate() {
            assert!(m.abs() < band, "coordinate {j}: {m} outside {band}");
        }
    }

    #[test]
    fn projection_matches_direct_formula() {
        let ds = random_dataset(8, 8, 7, 55);
        let dir = random_unit_direction(7, 4242);
        let model = fit_projection(&ds, &dir).unwrap();
        let (s1, s2) = class_summaries(&ds);
        let mu_hat = (&s1.means + &s2.means) / 2.0;
        let gap = dir.values().dot(&s1.means) - dir.values().dot(&s2.means);

        assert!(model.score(mu_hat.view()).unwrap().abs() < 1e-12);
        assert!(model.score(s1.means.view()).unwrap() >= 0.0);

        let mut rng = ChaCha8Rng::seed_from_u64(56);
        for _ in 0..30 {
            let x = Array1::from_shape_fn(7, |_| rng.random::<f64>() * 2.0 - 1.0);
            let direct = (dir.values().dot(&x) - dir.values().dot(&mu_hat)) * gap;
            let via_model = model.score(x.view()).unwrap();
            assert!((direct - via_model).abs() < 1e-10 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn shrunken_centroids_shrinkage_path() {
        let ds = random_dataset(7, 7, 9, 60);
        let none = fit_shrunken_centroids(&ds, 0.0).unwrap();
        let ind = fit_independence(&ds).unwrap();
        assert_eq!(none.active(), ind.active());
        for (a, b) in none.weights().iter().zip(ind.weights()) {
            assert_eq!(a.signum(), b.signum());
        }

        let all = fit_shrunken_centroids(&ds, 1e12).unwrap();
        assert!(all.is_empty());

        // |w_j| non-increasing along a delta grid.
        let mut prev: Vec<f64> = vec![f64::INFINITY; 9];
        for k in 0..=20 {
            let delta = k as f64 * 0.25;
            let m = fit_shrunken_centroids(&ds, delta).unwrap();
            let mut now = vec![0.0; 9];
            for (i, &j) in m.active().iter().enumerate() {
                now[j] = m.weights()[i].abs();
            }
            for j in 0..9 {
                assert!(now[j] <= prev[j] + 1e-12);
            }
            prev = now;
        }
    }

    #[test]
    fn predict_tie_rule_and_strictness() {
        let model = LinearIndependenceModel::build(
            2,
            vec![0],
            vec![1.0],
            vec![0.0],
            ModelKind::Independence,
            2,
            2,
            None,
            None,
        )
        .unwrap();
        let zero = Array1::from_vec(vec![0.0, 5.0]);
        assert_eq!(model.predict(zero.view()).unwrap(), ClassLabel::Two);
        let tiny = Array1::from_vec(vec![1e-300, 5.0]);
        assert_eq!(model.predict(tiny.view()).unwrap(), ClassLabel::One);
        let neg = Array1::from_vec(vec![-1e-300, 5.0]);
        assert_eq!(model.predict(neg.view()).unwrap(), ClassLabel::Two);
    }

    #[test]
    fn error_rate_extremes_and_recount() {
        let ds = random_dataset(10, 10, 3, 70);
        let model = fit_independence(&ds).unwrap();
        let e = model.error_rate(&ds).unwrap();
        let mut wrong = 0;
        for i in 0..ds.n() {
            if model.predict(ds.sample(i)).unwrap() != ds.labels()[i] {
                wrong += 1;
            }
        }
        assert_eq!(e, wrong as f64 / ds.n() as f64);

        // Always-positive scorer on single-class test sets.
        let stub = LinearIndependenceModel::build(
            3,
            vec![],
            vec![],
            vec![],
            ModelKind::Fair,
            2,
            2,
            Some(1.0),
            None,
        )
        .unwrap();
        let all_two = LabeledDataset::new(
            Array2::from_shape_fn((4, 3), |(i, j)| (i + j) as f64),
            vec![ClassLabel::Two; 4],
        );
        // A one-class dataset violates the invariants, so recount on the
        // normal dataset instead: empty model predicts Two everywhere.
        assert!(all_two.is_err());
        let e2 = stub.error_rate(&ds).unwrap();
        assert_eq!(e2, 0.5);
    }

    #[test]
    fn error_rate_invariant_under_double_label_swap() {
        let ds = random_dataset(8, 12, 5, 80);
        let test = random_dataset(9, 11, 5, 81);
        let m = fit_independence(&ds).unwrap();
        let m_sw = fit_independence(&swap_labels(&ds)).unwrap();
        let e = m.error_rate(&test).unwrap();
        let e_sw = m_sw.error_rate(&swap_labels(&test)).unwrap();
        assert_eq!(e, e_sw);
    }

    #[test]
    fn model_save_load_round_trip() {
        let ds = random_dataset(6, 6, 8, 90);
        let model = fit_fair(&ds, FairSelection::ByCount(5)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.tsv");
        model.save(&path).unwrap();
        let back = LinearIndependenceModel::load(&path).unwrap();
        assert_eq!(back.kind(), model.kind());
        assert_eq!(back.active(), model.active());
        assert_eq!(back.count(), model.count());

        let mut rng = ChaCha8Rng::seed_from_u64(91);
        for _ in 0..20 {
            let x = Array1::from_shape_fn(8, |_| rng.random::<f64>() * 6.0 - 3.0);
            let a = model.score(x.view()).unwrap();
            let b = back.score(x.view()).unwrap();
            assert_eq!(a, b);
        }
    }
}
