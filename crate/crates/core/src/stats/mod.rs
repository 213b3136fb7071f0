//! Statistics on sampled paths and fields, and the replicated Monte Carlo harness.

pub mod cumulants;
pub mod functional;
pub mod harness;
pub mod hurst;
pub mod increments;
pub mod ks;
pub mod probe;
pub mod vasicek;

pub use cumulants::{empirical_cumulants, CumulantEstimates};
pub use functional::{moving_average_second_moments, quadratic_functional_gt, GtEvaluator};
pub use harness::{collect_streams, run_replications, worker_pool, Experiment, FnExperiment, McReport, ReplicateFailure, ReplicationRun};
pub use hurst::{estimate_hurst_qv, HurstEstimate};
pub use increments::{generalized_increment, qv_limit_statistic, quadratic_variation, IncrementCell};
pub use ks::{kolmogorov_sf, ks_normal, ks_one_sample, ks_two_sample, KsResult};
pub use probe::{empirical_cdf, rosenblatt_cdf_probe, rosenblatt_terminal_samples, CdfProbe};
pub use vasicek::{vasicek_estimators, vasicek_mean_estimator, VasicekEstimate};
