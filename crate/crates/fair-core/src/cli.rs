//! Command-line surface: simulate, rank, fit, eval, sweep-m and bound.
//!
//! Every run writes a key=value manifest describing the verb, its full
//! parameter set, input digests and outputs, so results can be reproduced
//! bit for bit (timestamps aside).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use crate::classifiers::{
    fit_fair, fit_independence, fit_projection, fit_shrunken_centroids, fit_truncated_nc,
    random_unit_direction, FairSelection, LinearIndependenceModel,
};
use crate::data::{
    load_matrix, standardize_samples, stratified_split, LabeledDataset, Orientation, SplitSpec,
};
use crate::error::{FairError, Result};
use crate::selection::{select_m0, select_m1};
use crate::sim::{aggregate, run_replications, SimConfig};
use crate::stats::{class_summaries, lambda_max_curve, rank_by_abs, t_statistics};
use crate::theory;

#[derive(Parser, Debug)]
#[command(
    name = "fair",
    version,
    about = "Feature-annealed independence rules for two-class data"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the synthetic factor-model study and write its summary tables.
    Simulate(SimulateArgs),
    /// Rank features of a dataset by |t-statistic|.
    Rank(RankArgs),
    /// Train a classifier, optionally evaluating it on a test set.
    Fit(FitArgs),
    /// Evaluate a saved model on a dataset.
    Eval(EvalArgs),
    /// Sweep both feature-count criteria over m and write the curves.
    SweepM(SweepArgs),
    /// Print a closed-form error value or bound.
    Bound(BoundArgs),
}

#[derive(Args, Debug)]
struct CommonIo {
    /// Directory receiving outputs and the run manifest.
    #[arg(long, default_value = "fair-out")]
    out_dir: PathBuf,
    /// Worker threads (0 = one per core). Outputs do not depend on it.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Args, Debug)]
struct DatasetArgs {
    /// Whether samples are rows or columns of the file.
    #[arg(long, value_enum, default_value_t = OrientationArg::Rows)]
    orientation: OrientationArg,
    /// Column (rows orientation) or row (columns orientation) holding labels.
    #[arg(long, default_value = "label")]
    label: String,
    /// Standardize each sample to zero mean and unit variance first.
    #[arg(long)]
    standardize: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum OrientationArg {
    Rows,
    Columns,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::Rows => Orientation::SamplesInRows,
            OrientationArg::Columns => Orientation::SamplesInColumns,
        }
    }
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    io: CommonIo,
    #[arg(long, default_value_t = 4500)]
    p: usize,
    /// Fraction of features carrying signal.
    #[arg(long, default_value_t = 0.02)]
    signal_fraction: f64,
    /// Chi-square degrees of freedom of the factor distribution.
    #[arg(long, default_value_t = 6)]
    chi_df: u64,
    #[arg(long, default_value_t = 30)]
    n1: usize,
    #[arg(long, default_value_t = 30)]
    n2: usize,
    #[arg(long, default_value_t = 200)]
    test_per_class: usize,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[arg(long, default_value_t = crate::sim::DEFAULT_MASTER_SEED)]
    seed: u64,
    /// Cap on the feature-count search (default min(p, 50 n)).
    #[arg(long)]
    m_cap: Option<usize>,
}

#[derive(Args, Debug)]
struct RankArgs {
    #[command(flatten)]
    io: CommonIo,
    #[command(flatten)]
    dataset: DatasetArgs,
    /// Input dataset.
    #[arg(long)]
    data: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum MethodArg {
    Independence,
    Nc,
    Fair,
    Nsc,
    Projection,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum AutoSelect {
    /// Eigenvalue-corrected criterion.
    M1,
    /// Identity-covariance criterion.
    M0,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[command(flatten)]
    io: CommonIo,
    #[command(flatten)]
    dataset: DatasetArgs,
    /// Training dataset.
    #[arg(long, conflicts_with = "data")]
    train: Option<PathBuf>,
    /// Held-out dataset evaluated after training.
    #[arg(long, requires = "train")]
    test: Option<PathBuf>,
    /// Single dataset for --gamma-sweep random splits.
    #[arg(long, requires = "gamma_sweep")]
    data: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = MethodArg::Fair)]
    method: MethodArg,
    /// Fixed feature count (fair, nc).
    #[arg(long, conflicts_with = "threshold")]
    m: Option<usize>,
    /// Scaled |T| threshold (fair).
    #[arg(long)]
    threshold: Option<f64>,
    /// Data-driven count criterion used when no --m/--threshold is given.
    #[arg(long, value_enum, default_value_t = AutoSelect::M1)]
    select: AutoSelect,
    /// Soft-threshold shrinkage (nsc).
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    /// Direction seed (projection).
    #[arg(long, default_value_t = 0)]
    direction_seed: u64,
    /// Comma-separated training fractions; runs repeated random splits.
    #[arg(long, value_delimiter = ',')]
    gamma_sweep: Vec<f64>,
    /// Splits per fraction in --gamma-sweep.
    #[arg(long, default_value_t = 100)]
    splits: usize,
    /// Base RNG seed for --gamma-sweep splits.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cap on the feature-count search (default min(p, 50 n)).
    #[arg(long)]
    m_cap: Option<usize>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    io: CommonIo,
    #[command(flatten)]
    dataset: DatasetArgs,
    /// Saved model table.
    #[arg(long)]
    model: PathBuf,
    /// Dataset to score.
    #[arg(long)]
    data: PathBuf,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    io: CommonIo,
    #[command(flatten)]
    dataset: DatasetArgs,
    /// Input dataset.
    #[arg(long)]
    data: PathBuf,
    /// Cap on the sweep (default min(p, 50 n)).
    #[arg(long)]
    m_cap: Option<usize>,
}

/// Closed-form quantity printed by `bound`. The terse thm*/eq* spellings are
/// accepted as aliases.
#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FormulaArg {
    /// Upper bound for the full-feature independence rule.
    #[value(name = "independence-bound", alias = "thm1")]
    IndependenceBound,
    /// Worst-case error at signal floor cp.
    #[value(name = "worst-case", alias = "thm1-worst")]
    WorstCase,
    /// Limit of the worst-case error at scaled floor c0.
    #[value(name = "limit", alias = "thm1-limit")]
    Limit,
    /// Error of the truncated unit-variance rule.
    #[value(name = "truncated-error", alias = "thm4")]
    TruncatedError,
    /// Error of the oracle-gated rule.
    #[value(name = "oracle-error", alias = "eq41")]
    OracleError,
    /// Upper bound of the hard-threshold rule.
    #[value(name = "fair-bound", alias = "thm5")]
    FairBound,
}

#[derive(Args, Debug)]
struct BoundArgs {
    /// Which quantity to evaluate.
    #[arg(long, value_enum)]
    formula: FormulaArg,
    /// Cumulative squared (standardized) mean difference of the active set.
    #[arg(long, default_value_t = 0.0)]
    signal: f64,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 30)]
    n1: usize,
    #[arg(long, default_value_t = 30)]
    n2: usize,
    #[arg(long, default_value_t = 4500)]
    p: usize,
    /// Largest correlation eigenvalue bound.
    #[arg(long, default_value_t = 1.0)]
    b0: f64,
    /// Hard threshold of the annealed rule.
    #[arg(long, default_value_t = 0.0)]
    b: f64,
    /// Signal floor of the worst-case form.
    #[arg(long, default_value_t = 0.0)]
    cp: f64,
    /// Scaled signal floor of the limit form.
    #[arg(long, default_value_t = 0.0)]
    c0: f64,
    /// Optional directory for the manifest (printed to stdout otherwise).
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

/// Accumulates manifest key=value pairs for one run.
struct Manifest {
    lines: Vec<(String, String)>,
    started: Instant,
}

impl Manifest {
    fn new(verb: &str) -> Self {
        let mut m = Self {
            lines: Vec::new(),
            started: Instant::now(),
        };
        m.put("verb", verb);
        m.put("version", env!("CARGO_PKG_VERSION"));
        m
    }

    fn put(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    fn put_input(&mut self, key: &str, path: &Path) -> Result<()> {
        let bytes = fs::read(path).map_err(|e| FairError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let digest = Sha256::digest(&bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.put(key, path.display());
        self.put(&format!("{key}_sha256"), hex);
        Ok(())
    }

    fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.lines {
            let _ = writeln!(out, "{k}={v}");
        }
        let _ = writeln!(
            out,
            "wall_clock_ms={}",
            self.started.elapsed().as_millis()
        );
        out
    }

    fn write(&self, dir: &Path) -> Result<()> {
        write_file(&dir.join("manifest.txt"), &self.render())
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| FairError::Io {
        path: dir.to_path_buf(),
        source: e,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| FairError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn load_dataset(path: &Path, args: &DatasetArgs) -> Result<LabeledDataset> {
    let ds = load_matrix(path, args.orientation.into(), &args.label)?;
    if args.standardize {
        standardize_samples(&ds)
    } else {
        Ok(ds)
    }
}

fn in_pool<T: Send>(threads: usize, job: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    if threads == 0 {
        return job();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| FairError::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(job)
}

/// Parses argv and runs the requested verb, returning the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version on stdout with status 0.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Rank(a) => cmd_rank(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Eval(a) => cmd_eval(a),
        Command::SweepM(a) => cmd_sweep_m(a),
        Command::Bound(a) => cmd_bound(a),
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let cfg = SimConfig {
        p: args.p,
        signal_fraction: args.signal_fraction,
        chi_df: args.chi_df,
        n1: args.n1,
        n2: args.n2,
        n_test_per_class: args.test_per_class,
        replications: args.reps,
        master_seed: args.seed,
        m_cap: args.m_cap,
        ..SimConfig::default()
    };
    cfg.validate()?;
    ensure_dir(&args.io.out_dir)?;
    let mut manifest = Manifest::new("simulate");
    manifest.put("p", cfg.p);
    manifest.put("signal_fraction", cfg.signal_fraction);
    manifest.put("chi_df", cfg.chi_df);
    manifest.put("n1", cfg.n1);
    manifest.put("n2", cfg.n2);
    manifest.put("test_per_class", cfg.n_test_per_class);
    manifest.put("replications", cfg.replications);
    manifest.put("seed", cfg.master_seed);
    manifest.put("m_cap", cfg.effective_m_cap());
    manifest.put("threads", args.io.threads);

    let mu1 = cfg.mean_vector()?;
    let results = in_pool(args.io.threads, || run_replications(&cfg, &mu1))?;
    let summary = aggregate(&results)?;

    let mut curves = String::from("m\tmean_error_t\tse_t\tmean_error_oracle\tse_oracle\n");
    for m in 0..cfg.p {
        let se_t = summary.se_curve_t.as_ref().map_or(f64::NAN, |v| v[m]);
        let se_o = summary.se_curve_oracle.as_ref().map_or(f64::NAN, |v| v[m]);
        let _ = writeln!(
            curves,
            "{}\t{}\t{}\t{}\t{}",
            m + 1,
            summary.mean_curve_t[m],
            se_t,
            summary.mean_curve_oracle[m],
            se_o
        );
    }
    write_file(&args.io.out_dir.join("curves.tsv"), &curves)?;

    let mut reps =
        String::from("rep\tfair_m\tfair_error\tnsc_features\tnsc_error\tprojection_error\n");
    for r in &results {
        let _ = writeln!(
            reps,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.rep, r.fair_m, r.fair_error, r.nsc_features, r.nsc_error, r.projection_error
        );
    }
    write_file(&args.io.out_dir.join("replications.tsv"), &reps)?;

    manifest.put("output_curves", args.io.out_dir.join("curves.tsv").display());
    manifest.put(
        "output_replications",
        args.io.out_dir.join("replications.tsv").display(),
    );
    manifest.put("fair_error_mean", summary.fair_error_mean);
    manifest.put("fair_m_mean", summary.fair_m_mean);
    manifest.put("projection_error_mean", summary.projection_error_mean);
    manifest.write(&args.io.out_dir)?;
    println!(
        "simulate: {} replications, fair error {:.4} with {:.2} features on average",
        summary.replications, summary.fair_error_mean, summary.fair_m_mean
    );
    Ok(())
}

fn cmd_rank(args: RankArgs) -> Result<()> {
    ensure_dir(&args.io.out_dir)?;
    let mut manifest = Manifest::new("rank");
    manifest.put_input("data", &args.data)?;
    manifest.put("standardize", args.dataset.standardize);
    let ds = load_dataset(&args.data, &args.dataset)?;
    let (s1, s2) = class_summaries(&ds);
    let t = t_statistics(&s1, &s2)?;
    let ranking = rank_by_abs(&t.values);

    let mut out = String::from("rank\tfeature_index\tfeature_name\tt_value\tabs_t\n");
    for (k, &j) in ranking.order().iter().enumerate() {
        let name = ds
            .feature_names()
            .map_or_else(|| format!("f{}", j + 1), |n| n[j].clone());
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            k + 1,
            j + 1,
            name,
            t.values[j],
            t.values[j].abs()
        );
    }
    write_file(&args.io.out_dir.join("ranking.tsv"), &out)?;
    manifest.put("output", args.io.out_dir.join("ranking.tsv").display());
    manifest.write(&args.io.out_dir)?;
    println!("rank: wrote {} features", ds.p());
    Ok(())
}

struct FittedRun {
    model: LinearIndependenceModel,
    selection_note: String,
}

fn fit_model(ds: &LabeledDataset, args: &FitArgs) -> Result<FittedRun> {
    let (n1, n2) = ds.class_counts();
    let n = n1 + n2;
    match args.method {
        MethodArg::Independence => Ok(FittedRun {
            model: fit_independence(ds)?,
            selection_note: "all features".into(),
        }),
        MethodArg::Projection => {
            let dir = random_unit_direction(ds.p(), args.direction_seed);
            Ok(FittedRun {
                model: fit_projection(ds, &dir)?,
                selection_note: format!("direction seed {}", args.direction_seed),
            })
        }
        MethodArg::Nsc => Ok(FittedRun {
            model: fit_shrunken_centroids(ds, args.delta)?,
            selection_note: format!("delta {}", args.delta),
        }),
        MethodArg::Nc | MethodArg::Fair => {
            let (s1, s2) = class_summaries(ds);
            let t = t_statistics(&s1, &s2)?;
            let ranking = rank_by_abs(&t.values);
            let (m, note) = if let Some(m) = args.m {
                (m, format!("fixed m {m}"))
            } else if let Some(b) = args.threshold {
                if args.method == MethodArg::Nc {
                    return Err(FairError::InvalidArgument(
                        "--threshold applies to the fair method only".into(),
                    ));
                }
                let model = fit_fair(ds, FairSelection::ByThreshold(b))?;
                if model.is_empty() {
                    eprintln!("warning: threshold {b} rejects every feature; the model always predicts class 2");
                }
                return Ok(FittedRun {
                    model,
                    selection_note: format!("threshold {b}"),
                });
            } else {
                let m_cap = args
                    .m_cap
                    .unwrap_or_else(|| crate::selection::default_m_cap(ds.p(), n))
                    .clamp(1, ds.p());
                let ranked_t: Vec<f64> = ranking.ranked_scores()[..m_cap].to_vec();
                match args.select {
                    AutoSelect::M1 => {
                        let lambda = lambda_max_curve(ds, &ranking, m_cap)?;
                        let sel = select_m1(&ranked_t, &lambda, n1, n2)?;
                        (sel.m_hat, format!("m1 criterion -> m {}", sel.m_hat))
                    }
                    AutoSelect::M0 => {
                        let alpha = &s1.means - &s2.means;
                        let ranked_alpha: Vec<f64> =
                            ranking.order()[..m_cap].iter().map(|&j| alpha[j]).collect();
                        let sel = select_m0(&ranked_alpha, n1, n2)?;
                        (sel.m_hat, format!("m0 criterion -> m {}", sel.m_hat))
                    }
                }
            };
            let model = match args.method {
                MethodArg::Nc => fit_truncated_nc(ds, &ranking, m)?,
                _ => fit_fair(ds, FairSelection::ByCount(m))?,
            };
            Ok(FittedRun {
                model,
                selection_note: note,
            })
        }
    }
}

fn write_predictions(
    model: &LinearIndependenceModel,
    ds: &LabeledDataset,
    path: &Path,
) -> Result<usize> {
    let mut out = String::from("sample_id\tscore\tpredicted\tactual\n");
    let mut wrong = 0;
    for i in 0..ds.n() {
        let score = model.score(ds.sample(i))?;
        let predicted = model.predict(ds.sample(i))?;
        let actual = ds.labels()[i];
        if predicted != actual {
            wrong += 1;
        }
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            ds.sample_name(i),
            score,
            ds.label_name(predicted),
            ds.label_name(actual)
        );
    }
    write_file(path, &out)?;
    Ok(wrong)
}

fn cmd_fit(args: FitArgs) -> Result<()> {
    if !args.gamma_sweep.is_empty() {
        return cmd_gamma_sweep(&args);
    }
    let train_path = args.train.clone().ok_or_else(|| {
        FairError::InvalidArgument("fit needs --train (or --data with --gamma-sweep)".into())
    })?;
    ensure_dir(&args.io.out_dir)?;
    let mut manifest = Manifest::new("fit");
    manifest.put_input("train", &train_path)?;
    manifest.put("method", format!("{:?}", args.method).to_lowercase());
    manifest.put("standardize", args.dataset.standardize);

    let train = load_dataset(&train_path, &args.dataset)?;
    let fitted = in_pool(args.io.threads, || fit_model(&train, &args))?;
    let model_path = args.io.out_dir.join("model.tsv");
    fitted.model.save(&model_path)?;
    manifest.put("selection", &fitted.selection_note);
    manifest.put("features_used", fitted.model.active().len());
    manifest.put("output_model", model_path.display());

    let train_wrong = write_predictions(
        &fitted.model,
        &train,
        &args.io.out_dir.join("train_predictions.tsv"),
    )?;
    let mut metrics = format!(
        "method={} features={} train_error={}/{}",
        fitted.model.kind(),
        fitted.model.active().len(),
        train_wrong,
        train.n()
    );
    if let Some(test_path) = &args.test {
        manifest.put_input("test", test_path)?;
        let test = load_dataset(test_path, &args.dataset)?;
        if test.p() != train.p() {
            return Err(FairError::DimensionMismatch {
                expected: train.p(),
                got: test.p(),
            });
        }
        let test_wrong = write_predictions(
            &fitted.model,
            &test,
            &args.io.out_dir.join("predictions.tsv"),
        )?;
        let _ = write!(metrics, " test_error={}/{}", test_wrong, test.n());
    }
    write_file(&args.io.out_dir.join("metrics.txt"), &format!("{metrics}\n"))?;
    manifest.put("metrics", &metrics);
    manifest.write(&args.io.out_dir)?;
    println!("{metrics}");
    Ok(())
}

fn cmd_gamma_sweep(args: &FitArgs) -> Result<()> {
    let data_path = args
        .data
        .clone()
        .ok_or_else(|| FairError::InvalidArgument("--gamma-sweep needs --data".into()))?;
    for &g in &args.gamma_sweep {
        if !(g > 0.0 && g < 1.0) {
            return Err(FairError::InvalidArgument(format!(
                "--gamma-sweep fractions must be in (0,1), got {g}"
            )));
        }
    }
    ensure_dir(&args.io.out_dir)?;
    let mut manifest = Manifest::new("fit");
    manifest.put_input("data", &data_path)?;
    manifest.put("method", format!("{:?}", args.method).to_lowercase());
    manifest.put(
        "gamma_sweep",
        args.gamma_sweep
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    manifest.put("splits", args.splits);
    manifest.put("seed", args.seed);

    let ds = load_dataset(&data_path, &args.dataset)?;
    let mut out = String::from("gamma\tsplit\ttrain_error\ttest_error\tfeatures\n");
    for &gamma in &args.gamma_sweep {
        let rows: Vec<(usize, String)> = in_pool(args.io.threads, || {
            use rayon::prelude::*;
            (0..args.splits)
                .into_par_iter()
                .map(|split| {
                    let spec = SplitSpec::new(gamma, args.seed.wrapping_add(split as u64))?;
                    let (train, test) = stratified_split(&ds, &spec)?;
                    let fitted = fit_model(&train, args)?;
                    let train_err = fitted.model.error_rate(&train)?;
                    let test_err = fitted.model.error_rate(&test)?;
                    Ok((
                        split,
                        format!(
                            "{gamma}\t{split}\t{train_err}\t{test_err}\t{}",
                            fitted.model.active().len()
                        ),
                    ))
                })
                .collect::<Result<Vec<_>>>()
        })?;
        for (_, line) in rows {
            let _ = writeln!(out, "{line}");
        }
    }
    write_file(&args.io.out_dir.join("gamma_sweep.tsv"), &out)?;
    manifest.put(
        "output",
        args.io.out_dir.join("gamma_sweep.tsv").display(),
    );
    manifest.write(&args.io.out_dir)?;
    println!(
        "gamma-sweep: {} fractions x {} splits",
        args.gamma_sweep.len(),
        args.splits
    );
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    ensure_dir(&args.io.out_dir)?;
    let mut manifest = Manifest::new("eval");
    manifest.put_input("model", &args.model)?;
    manifest.put_input("data", &args.data)?;
    let model = LinearIndependenceModel::load(&args.model)?;
    let ds = load_dataset(&args.data, &args.dataset)?;
    if ds.p() != model.p() {
        return Err(FairError::DimensionMismatch {
            expected: model.p(),
            got: ds.p(),
        });
    }
    let wrong = write_predictions(&model, &ds, &args.io.out_dir.join("predictions.tsv"))?;
    let metrics = format!(
        "method={} features={} test_error={}/{}",
        model.kind(),
        model.active().len(),
        wrong,
        ds.n()
    );
    write_file(&args.io.out_dir.join("metrics.txt"), &format!("{metrics}\n"))?;
    manifest.put("metrics", &metrics);
    manifest.write(&args.io.out_dir)?;
    println!("{metrics}");
    Ok(())
}

fn cmd_sweep_m(args: SweepArgs) -> Result<()> {
    ensure_dir(&args.io.out_dir)?;
    let mut manifest = Manifest::new("sweep-m");
    manifest.put_input("data", &args.data)?;
    let ds = load_dataset(&args.data, &args.dataset)?;
    let (n1, n2) = ds.class_counts();
    let m_cap = args
        .m_cap
        .unwrap_or_else(|| crate::selection::default_m_cap(ds.p(), n1 + n2))
        .clamp(1, ds.p());
    manifest.put("m_cap", m_cap);

    let (s1, s2) = class_summaries(&ds);
    let t = t_statistics(&s1, &s2)?;
    let ranking = rank_by_abs(&t.values);
    let alpha = &s1.means - &s2.means;
    let ranked_alpha: Vec<f64> = ranking.order()[..m_cap].iter().map(|&j| alpha[j]).collect();
    let ranked_t: Vec<f64> = ranking.ranked_scores()[..m_cap].to_vec();
    let lambda = lambda_max_curve(&ds, &ranking, m_cap)?;
    let sel0 = select_m0(&ranked_alpha, n1, n2)?;
    let sel1 = select_m1(&ranked_t, &lambda, n1, n2)?;

    let mut out = String::from("m\tobjective_m0\tobjective_m1\tlambda_max\tcumulative_T2\n");
    let mut cum_t2 = 0.0;
    for m in 1..=m_cap {
        cum_t2 += ranked_t[m - 1] * ranked_t[m - 1];
        let _ = writeln!(
            out,
            "{m}\t{}\t{}\t{}\t{cum_t2}",
            sel0.objective[m - 1],
            sel1.objective[m - 1],
            lambda.at(m)
        );
    }
    write_file(&args.io.out_dir.join("sweep.tsv"), &out)?;
    manifest.put("m0", sel0.m_hat);
    manifest.put("m1", sel1.m_hat);
    manifest.put("output", args.io.out_dir.join("sweep.tsv").display());
    manifest.write(&args.io.out_dir)?;
    println!("sweep-m: m0 {} m1 {}", sel0.m_hat, sel1.m_hat);
    Ok(())
}

fn cmd_bound(args: BoundArgs) -> Result<()> {
    let (value, describe) = match args.formula {
        FormulaArg::IndependenceBound => (
            theory::theorem1_bound(args.signal, args.p, args.n1, args.n2, args.b0),
            "independence-bound: full-feature rule, upper bound",
        ),
        FormulaArg::WorstCase => (
            theory::theorem1_worst_case(args.cp, args.p, args.n1, args.n2, args.b0),
            "worst-case: error at the signal floor cp",
        ),
        FormulaArg::Limit => (
            theory::theorem1_limit(args.c0, args.b0),
            "limit: worst-case error at scaled floor c0",
        ),
        FormulaArg::TruncatedError => (
            theory::theorem4_error(args.signal, args.m, args.n1, args.n2),
            "truncated-error: m-feature unit-variance rule",
        ),
        FormulaArg::OracleError => (
            theory::oracle_error(args.signal, args.m, args.n1, args.n2),
            "oracle-error: oracle-gated active set",
        ),
        FormulaArg::FairBound => (
            theory::theorem5_bound(args.signal, args.m, args.b, args.n1, args.n2),
            "fair-bound: hard-threshold rule, upper bound",
        ),
    };
    let mut manifest = Manifest::new("bound");
    manifest.put("formula", format!("{:?}", args.formula));
    manifest.put("signal", args.signal);
    manifest.put("m", args.m);
    manifest.put("n1", args.n1);
    manifest.put("n2", args.n2);
    manifest.put("p", args.p);
    manifest.put("b0", args.b0);
    manifest.put("b", args.b);
    manifest.put("cp", args.cp);
    manifest.put("c0", args.c0);
    manifest.put("value", value);
    println!("{describe} (asymptotic leading-order) = {value}");
    match &args.out_dir {
        Some(dir) => {
            ensure_dir(dir)?;
            manifest.write(dir)?;
        }
        None => {
            for line in manifest.render().lines() {
                println!("# {line}");
            }
        }
    }
    Ok(())
}
