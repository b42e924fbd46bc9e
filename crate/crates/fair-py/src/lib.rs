//! Python bindings: the dataset/model types, the classifier fits, feature
//! ranking and selection, the closed-form error formulas and a driver for
//! the synthetic factor-model study.

use ndarray::{Array1, Array2};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use fair_core as core;
use fair_core::{ClassLabel, FairSelection};

fn err(e: core::FairError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn labels_from(raw: &[u8]) -> PyResult<Vec<ClassLabel>> {
    raw.iter()
        .map(|&v| match v {
            1 => Ok(ClassLabel::One),
            2 => Ok(ClassLabel::Two),
            other => Err(PyValueError::new_err(format!(
                "labels must be 1 or 2, got {other}"
            ))),
        })
        .collect()
}

/// Two-class dataset held row-major: n samples by p features.
#[pyclass(name = "Dataset")]
struct PyDataset {
    inner: core::LabeledDataset,
}

#[pymethods]
impl PyDataset {
    /// Build from a rectangular list of rows and labels in {1, 2}.
    #[new]
    fn new(features: Vec<Vec<f64>>, labels: Vec<u8>) -> PyResult<Self> {
        let n = features.len();
        let p = features.first().map_or(0, |r| r.len());
        if features.iter().any(|r| r.len() != p) {
            return Err(PyValueError::new_err("feature rows have unequal lengths"));
        }
        let mut arr = Array2::zeros((n, p));
        for (i, row) in features.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                arr[[i, j]] = v;
            }
        }
        Ok(Self {
            inner: core::LabeledDataset::new(arr, labels_from(&labels)?).map_err(err)?,
        })
    }

    /// Load a delimited file (orientation "rows" or "columns").
    #[staticmethod]
    #[pyo3(signature = (path, orientation="rows", label="label"))]
    fn from_file(path: &str, orientation: &str, label: &str) -> PyResult<Self> {
        let orientation = match orientation {
            "rows" => core::Orientation::SamplesInRows,
            "columns" => core::Orientation::SamplesInColumns,
            other => {
                return Err(PyValueError::new_err(format!(
                    "orientation must be 'rows' or 'columns', got '{other}'"
                )))
            }
        };
        Ok(Self {
            inner: core::load_matrix(path, orientation, label).map_err(err)?,
        })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        core::save_matrix(&self.inner, path, b',').map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.p()
    }

    #[getter]
    fn labels(&self) -> Vec<u8> {
        self.inner
            .labels()
            .iter()
            .map(|l| match l {
                ClassLabel::One => 1,
                ClassLabel::Two => 2,
            })
            .collect()
    }

    fn row(&self, i: usize) -> PyResult<Vec<f64>> {
        if i >= self.inner.n() {
            return Err(PyValueError::new_err(format!("row {i} out of range")));
        }
        Ok(self.inner.sample(i).to_vec())
    }

    /// Per-sample standardization to zero mean and unit variance.
    fn standardize_samples(&self) -> PyResult<Self> {
        Ok(Self {
            inner: core::standardize_samples(&self.inner).map_err(err)?,
        })
    }

    /// Seeded stratified split into (train, test).
    fn stratified_split(&self, gamma: f64, seed: u64) -> PyResult<(Self, Self)> {
        let spec = core::SplitSpec::new(gamma, seed).map_err(err)?;
        let (train, test) = core::stratified_split(&self.inner, &spec).map_err(err)?;
        Ok((Self { inner: train }, Self { inner: test }))
    }

    /// Two-sample t-statistic per feature.
    fn t_statistics(&self) -> PyResult<Vec<f64>> {
        let (s1, s2) = core::class_summaries(&self.inner);
        Ok(core::t_statistics(&s1, &s2).map_err(err)?.values.to_vec())
    }

    /// Feature indices sorted by descending |t|.
    fn rank_by_abs_t(&self) -> PyResult<Vec<usize>> {
        let (s1, s2) = core::class_summaries(&self.inner);
        let t = core::t_statistics(&s1, &s2).map_err(err)?;
        Ok(core::rank_by_abs(&t.values).order().to_vec())
    }

    /// Largest eigenvalue of the nested correlation matrices of the top-m
    /// |t|-ranked features, for m = 1..=m_max.
    fn lambda_max_curve(&self, m_max: usize) -> PyResult<Vec<f64>> {
        let (s1, s2) = core::class_summaries(&self.inner);
        let t = core::t_statistics(&s1, &s2).map_err(err)?;
        let ranking = core::rank_by_abs(&t.values);
        Ok(core::lambda_max_curve(&self.inner, &ranking, m_max)
            .map_err(err)?
            .values()
            .to_vec())
    }

    fn __repr__(&self) -> String {
        let (n1, n2) = self.inner.class_counts();
        format!(
            "Dataset(n={}, p={}, classes=({n1}, {n2}))",
            self.inner.n(),
            self.inner.p()
        )
    }
}

/// Trained linear-diagonal classifier.
#[pyclass(name = "Model")]
struct PyModel {
    inner: core::LinearIndependenceModel,
}

#[pymethods]
impl PyModel {
    #[getter]
    fn kind(&self) -> String {
        self.inner.kind().to_string()
    }

    #[getter]
    fn active(&self) -> Vec<usize> {
        self.inner.active().to_vec()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights().to_vec()
    }

    #[getter]
    fn n_features(&self) -> usize {
        self.inner.active().len()
    }

    #[getter]
    fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    fn score(&self, x: Vec<f64>) -> PyResult<f64> {
        self.inner.score(Array1::from_vec(x).view()).map_err(err)
    }

    /// Predicted class in {1, 2}; ties go to 2.
    fn predict(&self, x: Vec<f64>) -> PyResult<u8> {
        Ok(match self.inner.predict(Array1::from_vec(x).view()).map_err(err)? {
            ClassLabel::One => 1,
            ClassLabel::Two => 2,
        })
    }

    fn error_rate(&self, ds: &PyDataset) -> PyResult<f64> {
        self.inner.error_rate(&ds.inner).map_err(err)
    }

    fn save(&self, path: &str) -> PyResult<()> {
        self.inner.save(path).map_err(err)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(Self {
            inner: core::LinearIndependenceModel::load(path).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "Model(kind={}, features={})",
            self.inner.kind(),
            self.inner.active().len()
        )
    }
}

/// Independence rule over all features.
#[pyfunction]
fn fit_independence(ds: &PyDataset) -> PyResult<PyModel> {
    Ok(PyModel {
        inner: core::fit_independence(&ds.inner).map_err(err)?,
    })
}

/// Truncated unit-variance rule on the top-m |t|-ranked features.
#[pyfunction]
fn fit_truncated_nc(ds: &PyDataset, m: usize) -> PyResult<PyModel> {
    let (s1, s2) = core::class_summaries(&ds.inner);
    let t = core::t_statistics(&s1, &s2).map_err(err)?;
    let ranking = core::rank_by_abs(&t.values);
    Ok(PyModel {
        inner: core::fit_truncated_nc(&ds.inner, &ranking, m).map_err(err)?,
    })
}

/// Feature-annealed rule keeping the top m features by |t|.
#[pyfunction]
fn fit_fair_count(ds: &PyDataset, m: usize) -> PyResult<PyModel> {
    Ok(PyModel {
        inner: core::fit_fair(&ds.inner, FairSelection::ByCount(m)).map_err(err)?,
    })
}

/// Feature-annealed rule keeping features with sqrt(n/(n1 n2)) |T_j| > b.
#[pyfunction]
fn fit_fair_threshold(ds: &PyDataset, b: f64) -> PyResult<PyModel> {
    Ok(PyModel {
        inner: core::fit_fair(&ds.inner, FairSelection::ByThreshold(b)).map_err(err)?,
    })
}

/// Oracle-gated rule: membership from the true mean differences.
#[pyfunction]
fn fit_oracle(ds: &PyDataset, true_alpha: Vec<f64>, a: f64) -> PyResult<PyModel> {
    Ok(PyModel {
        inner: core::fit_oracle(&ds.inner, &true_alpha, a).map_err(err)?,
    })
}

/// Classifier on a random unit projection drawn from the seed.
#[pyfunction]
fn fit_projection(ds: &PyDataset, seed: u64) -> PyResult<PyModel> {
    let dir = core::random_unit_direction(ds.inner.p(), seed);
    Ok(PyModel {
        inner: core::fit_projection(&ds.inner, &dir).map_err(err)?,
    })
}

/// Soft-threshold centroid baseline.
#[pyfunction]
fn fit_shrunken_centroids(ds: &PyDataset, delta: f64) -> PyResult<PyModel> {
    Ok(PyModel {
        inner: core::fit_shrunken_centroids(&ds.inner, delta).map_err(err)?,
    })
}

struct RankedStats {
    n1: usize,
    n2: usize,
    ranked_alpha: Vec<f64>,
    ranked_t: Vec<f64>,
    ranking: core::FeatureRanking,
}

fn ranked_stats(ds: &PyDataset, m_cap: Option<usize>) -> PyResult<RankedStats> {
    let (s1, s2) = core::class_summaries(&ds.inner);
    let t = core::t_statistics(&s1, &s2).map_err(err)?;
    let ranking = core::rank_by_abs(&t.values);
    let cap = m_cap
        .unwrap_or_else(|| core::default_m_cap(ds.inner.p(), s1.n + s2.n))
        .clamp(1, ds.inner.p());
    let alpha = &s1.means - &s2.means;
    let ranked_alpha: Vec<f64> = ranking.order()[..cap].iter().map(|&j| alpha[j]).collect();
    let ranked_t: Vec<f64> = ranking.ranked_scores()[..cap].to_vec();
    Ok(RankedStats { n1: s1.n, n2: s2.n, ranked_alpha, ranked_t, ranking })
}

/// Identity-covariance feature count: (m_hat, objective curve).
#[pyfunction]
#[pyo3(signature = (ds, m_cap=None))]
fn select_m0(ds: &PyDataset, m_cap: Option<usize>) -> PyResult<(usize, Vec<f64>)> {
    let rs = ranked_stats(ds, m_cap)?;
    let sel = core::select_m0(&rs.ranked_alpha, rs.n1, rs.n2).map_err(err)?;
    Ok((sel.m_hat, sel.objective))
}

/// Eigenvalue-corrected feature count: (m_hat, objective curve).
#[pyfunction]
#[pyo3(signature = (ds, m_cap=None))]
fn select_m1(ds: &PyDataset, m_cap: Option<usize>) -> PyResult<(usize, Vec<f64>)> {
    let rs = ranked_stats(ds, m_cap)?;
    let lambda = core::lambda_max_curve(&ds.inner, &rs.ranking, rs.ranked_t.len()).map_err(err)?;
    let sel = core::select_m1(&rs.ranked_t, &lambda, rs.n1, rs.n2).map_err(err)?;
    Ok((sel.m_hat, sel.objective))
}

/// Threshold equivalent to keeping exactly the top m features.
#[pyfunction]
fn m_to_threshold(ds: &PyDataset, m: usize) -> PyResult<f64> {
    let (s1, s2) = core::class_summaries(&ds.inner);
    let t = core::t_statistics(&s1, &s2).map_err(err)?;
    let ranking = core::rank_by_abs(&t.values);
    core::m_to_threshold(&t, &ranking, m, s1.n, s2.n).map_err(err)
}

#[pyfunction]
fn normal_cdf(x: f64) -> f64 {
    core::normal_cdf(x)
}

#[pyfunction]
fn theorem1_bound(signal: f64, p: usize, n1: usize, n2: usize, b0: f64) -> f64 {
    core::theorem1_bound(signal, p, n1, n2, b0)
}

#[pyfunction]
fn theorem1_worst_case(c_p: f64, p: usize, n1: usize, n2: usize, b0: f64) -> f64 {
    core::theorem1_worst_case(c_p, p, n1, n2, b0)
}

#[pyfunction]
fn theorem1_limit(c0: f64, b0: f64) -> f64 {
    core::theorem1_limit(c0, b0)
}

#[pyfunction]
fn theorem4_error(signal: f64, m: usize, n1: usize, n2: usize) -> f64 {
    core::theorem4_error(signal, m, n1, n2)
}

#[pyfunction]
fn oracle_error(signal: f64, m: usize, n1: usize, n2: usize) -> f64 {
    core::oracle_error(signal, m, n1, n2)
}

#[pyfunction]
fn theorem5_bound(signal: f64, m: usize, b: f64, n1: usize, n2: usize) -> f64 {
    core::theorem5_bound(signal, m, b, n1, n2)
}

/// Summary of a synthetic factor-model study.
#[pyclass(name = "StudySummary")]
struct PyStudySummary {
    #[pyo3(get)]
    replications: usize,
    #[pyo3(get)]
    mean_curve_t: Vec<f64>,
    #[pyo3(get)]
    mean_curve_oracle: Vec<f64>,
    #[pyo3(get)]
    fair_m_mean: f64,
    #[pyo3(get)]
    fair_error_mean: f64,
    #[pyo3(get)]
    nsc_features_mean: f64,
    #[pyo3(get)]
    nsc_error_mean: f64,
    #[pyo3(get)]
    projection_error_mean: f64,
    #[pyo3(get)]
    projection_error_sd: Option<f64>,
}

/// Run the factor-model study at the given scale.
#[pyfunction]
#[pyo3(signature = (p=90, reps=3, n1=30, n2=30, test_per_class=200, signal_fraction=0.02, seed=8, m_cap=None))]
#[allow(clippy::too_many_arguments)]
fn simulate(
    p: usize,
    reps: usize,
    n1: usize,
    n2: usize,
    test_per_class: usize,
    signal_fraction: f64,
    seed: u64,
    m_cap: Option<usize>,
) -> PyResult<PyStudySummary> {
    let cfg = core::SimConfig {
        p,
        replications: reps,
        n1,
        n2,
        n_test_per_class: test_per_class,
        signal_fraction,
        master_seed: seed,
        m_cap,
        ..core::SimConfig::default()
    };
    cfg.validate().map_err(err)?;
    let mu1 = cfg.mean_vector().map_err(err)?;
    let results = core::run_replications(&cfg, &mu1).map_err(err)?;
    let s = core::aggregate(&results).map_err(err)?;
    Ok(PyStudySummary {
        replications: s.replications,
        mean_curve_t: s.mean_curve_t,
        mean_curve_oracle: s.mean_curve_oracle,
        fair_m_mean: s.fair_m_mean,
        fair_error_mean: s.fair_error_mean,
        nsc_features_mean: s.nsc_features_mean,
        nsc_error_mean: s.nsc_error_mean,
        projection_error_mean: s.projection_error_mean,
        projection_error_sd: s.projection_error_sd,
    })
}

#[pymodule]
fn fair_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDataset>()?;
    m.add_class::<PyModel>()?;
    m.add_class::<PyStudySummary>()?;
    m.add_function(wrap_pyfunction!(fit_independence, m)?)?;
    m.add_function(wrap_pyfunction!(fit_truncated_nc, m)?)?;
    m.add_function(wrap_pyfunction!(fit_fair_count, m)?)?;
    m.add_function(wrap_pyfunction!(fit_fair_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(fit_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(fit_projection, m)?)?;
    m.add_function(wrap_pyfunction!(fit_shrunken_centroids, m)?)?;
    m.add_function(wrap_pyfunction!(select_m0, m)?)?;
    m.add_function(wrap_pyfunction!(select_m1, m)?)?;
    m.add_function(wrap_pyfunction!(m_to_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(normal_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(theorem1_bound, m)?)?;
    m.add_function(wrap_pyfunction!(theorem1_worst_case, m)?)?;
    m.add_function(wrap_pyfunction!(theorem1_limit, m)?)?;
    m.add_function(wrap_pyfunction!(theorem4_error, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_error, m)?)?;
    m.add_function(wrap_pyfunction!(theorem5_bound, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    Ok(())
}
