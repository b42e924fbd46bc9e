//! Feature-annealed independence rules for high-dimensional two-class
//! classification.
//!
//! The crate covers the full pipeline: dataset handling ([`data`]),
//! two-sample t-statistics and the eigenvalue curve of nested correlation
//! matrices ([`stats`]), the family of linear-diagonal classifiers
//! ([`classifiers`]), data-driven feature-count selection ([`selection`]),
//! closed-form error formulas ([`theory`]), the synthetic factor-model
//! benchmark ([`sim`]) and the `fair` command-line tool ([`cli`]).

pub mod classifiers;
pub mod cli;
pub mod data;
pub mod error;
pub mod selection;
pub mod sim;
pub mod stats;
pub mod theory;

pub use classifiers::{
    fit_fair, fit_independence, fit_oracle, fit_projection, fit_shrunken_centroids,
    fit_truncated_nc, random_unit_direction, FairSelection, LinearIndependenceModel, ModelKind,
    ProjectionDirection,
};
pub use data::{
    load_matrix, save_matrix, standardize_samples, stratified_split, ClassLabel, LabeledDataset,
    Orientation, SplitSpec,
};
pub use error::{FairError, Result};
pub use selection::{default_m_cap, m_to_threshold, select_m0, select_m1, SelectionResult};
pub use sim::{
    aggregate, gen_class_matrix, gen_loadings, gen_mean_vector, run_replication,
    run_replications, theorem3_property_trial, Loadings, ReplicationResult, SeparationTrial,
    SimConfig, SimSummary,
};
pub use stats::{
    class_summaries, lambda_max_curve, pooled_diag, rank_by_abs, t_statistics, ClassSummary,
    FeatureRanking, LambdaMaxCurve, PooledDiag, TStats,
};
pub use theory::{
    normal_cdf, oracle_error, theorem1_bound, theorem1_limit, theorem1_worst_case,
    theorem4_error, theorem5_bound,
};
