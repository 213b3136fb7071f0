//! Replicated Monte Carlo harness.
//!
//! Replicate `r` draws from `derive_stream(master_seed, r)` and nothing else,
//! so results do not depend on worker count or scheduling. Aggregation runs
//! in replicate order after collection, which keeps reports bit-identical.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rng::{derive_stream, RngStream};

/// A named statistic configuration evaluated once per replicate.
pub trait Experiment: Send + Sync {
    fn name(&self) -> &str;
    /// Names of the values returned by [`Experiment::replicate`], in order.
    fn quantities(&self) -> Vec<String>;
    fn replicate(&self, stream: &mut RngStream) -> Result<Vec<f64>>;
}

/// Summary of one quantity over replicates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub quantity: String,
    pub n_replicates: usize,
    pub per_replicate: Vec<f64>,
    pub mean: f64,
    /// Unbiased sample variance; `None` when `n_replicates < 2`.
    pub variance: Option<f64>,
    pub std_error: Option<f64>,
    pub ci95: Option<(f64, f64)>,
    pub master_seed: u64,
}

impl McReport {
    pub fn from_values(quantity: impl Into<String>, values: Vec<f64>, master_seed: u64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InsufficientSamples { needed: 1, got: 0 });
        }
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let (variance, std_error, ci95) = if n >= 2 {
            let v = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            let se = (v / n as f64).sqrt();
            (Some(v), Some(se), Some((mean - 1.96 * se, mean + 1.96 * se)))
        } else {
            (None, None, None)
        };
        Ok(Self {
            quantity: quantity.into(),
            n_replicates: n,
            per_replicate: values,
            mean,
            variance,
            std_error,
            ci95,
            master_seed,
        })
    }

    /// `|mean - target| <= k·s.e.`; false when the standard error is undefined.
    pub fn within_se(&self, target: f64, k: f64) -> bool {
        self.std_error
            .map(|se| (self.mean - target).abs() <= k * se)
            .unwrap_or(false)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicateFailure {
    pub index: u64,
    pub message: String,
}

/// All quantities of one experiment run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRun {
    pub experiment: String,
    pub master_seed: u64,
    pub n_reps: usize,
    pub reports: Vec<McReport>,
    pub failures: Vec<ReplicateFailure>,
    /// Set when any replicate failed; reports then cover the successful ones.
    pub partial: bool,
}

impl ReplicationRun {
    pub fn report(&self, quantity: &str) -> Option<&McReport> {
        self.reports.iter().find(|r| r.quantity == quantity)
    }
}

/// Worker pool with `threads` workers; `0` selects the machine parallelism.
pub fn worker_pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| domain(format!("cannot build worker pool: {e}")))
}

pub fn run_replications(
    master_seed: u64,
    n_reps: usize,
    experiment: &dyn Experiment,
    threads: usize,
) -> Result<ReplicationRun> {
    if n_reps == 0 {
        return Err(domain("n_reps must be positive"));
    }
    let quantities = experiment.quantities();
    let pool = worker_pool(threads)?;
    let outcomes: Vec<Result<Vec<f64>>> = pool.install(|| {
        (0..n_reps as u64)
            .into_par_iter()
            .map(|r| {
                let mut stream = derive_stream(master_seed, r);
                let v = experiment.replicate(&mut stream)?;
                if v.len() != quantities.len() {
                    return Err(domain(format!(
                        "replicate returned {} values, expected {}",
                        v.len(),
                        quantities.len()
                    )));
                }
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(Error::NonFinite("replicate value".into()));
                }
                Ok(v)
            })
            .collect()
    });
    let mut columns = vec![Vec::with_capacity(n_reps); quantities.len()];
    let mut failures = Vec::new();
    for (r, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(v) => {
                for (c, x) in columns.iter_mut().zip(v) {
                    c.push(x);
                }
            }
            Err(e) => failures.push(ReplicateFailure {
                index: r as u64,
                message: e.to_string(),
            }),
        }
    }
    if failures.len() == n_reps {
        return Err(Error::Estimation(format!(
            "all {n_reps} replicates of {} failed; first: {}",
            experiment.name(),
            failures[0].message
        )));
    }
    let reports = quantities
        .into_iter()
        .zip(columns)
        .map(|(q, c)| McReport::from_values(q, c, master_seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReplicationRun {
        experiment: experiment.name().to_string(),
        master_seed,
        n_reps,
        partial: !failures.is_empty(),
        reports,
        failures,
    })
}

/// Evaluates `f` on streams `0..n` of `master_seed` in parallel and returns
/// the results in stream order.
pub fn collect_streams<T, F>(master_seed: u64, n: usize, threads: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut RngStream) -> Result<T> + Send + Sync,
{
    let pool = worker_pool(threads)?;
    pool.install(|| {
        (0..n as u64)
            .into_par_iter()
            .map(|r| f(&mut derive_stream(master_seed, r)))
            .collect()
    })
}

/// Experiment built from a closure.
pub struct FnExperiment<F> {
    name: String,
    quantities: Vec<String>,
    f: F,
}

impl<F> FnExperiment<F>
where
    F: Fn(&mut RngStream) -> Result<Vec<f64>> + Send + Sync,
{
    pub fn new(name: impl Into<String>, quantities: &[&str], f: F) -> Self {
        Self {
            name: name.into(),
            quantities: quantities.iter().map(|s| s.to_string()).collect(),
            f,
        }
    }
}

impl<F> Experiment for FnExperiment<F>
where
    F: Fn(&mut RngStream) -> Result<Vec<f64>> + Send + Sync,
{
    fn name(&self) -> &str {
        &self.name
    }

    fn quantities(&self) -> Vec<String> {
        self.quantities.clone()
    }

    fn replicate(&self, stream: &mut RngStream) -> Result<Vec<f64>> {
        (self.f)(stream)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn normal_mean() -> impl Experiment {
        FnExperiment::new("normal-mean", &["mean", "square"], |s: &mut RngStream| {
            let x = s.normals(100);
            let m = x.iter().sum::<f64>() / 100.0;
            Ok(vec![m, m * m])
        })
    }

    #[test]
    fn invariants_hold() {
        let run = run_replications(9, 50, &normal_mean(), 1).unwrap();
        let r = run.report("mean").unwrap();
        let se = r.std_error.unwrap();
        assert!((se - (r.variance.unwrap() / 50.0).sqrt()).abs() < 1e-15);
        let (lo, hi) = r.ci95.unwrap();
        assert!((lo - (r.mean - 1.96 * se)).abs() < 1e-15 && (hi - (r.mean + 1.96 * se)).abs() < 1e-15);
        assert!(!run.partial);
    }

    #[test]
    fn worker_count_does_not_matter() {
        let a = run_replications(3, 40, &normal_mean(), 1).unwrap();
        let b = run_replications(3, 40, &normal_mean(), 4).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn replicate_uses_its_stream() {
        let run = run_replications(11, 5, &normal_mean(), 2).unwrap();
        let x = derive_stream(11, 3).normals(100);
        let m = x.iter().sum::<f64>() / 100.0;
        assert_eq!(run.report("mean").unwrap().per_replicate[3], m);
    }

    #[test]
    fn single_replicate_has_no_variance() {
        let run = run_replications(1, 1, &normal_mean(), 1).unwrap();
        let r = &run.reports[0];
        assert_eq!(r.variance, None);
        assert_eq!(r.mean, r.per_replicate[0]);
    }

    #[test]
    fn failures_are_collected() {
        let e = FnExperiment::new("flaky", &["x"], |s: &mut RngStream| {
            if s.stream_index() % 3 == 0 {
                Err(Error::Estimation("boom".into()))
            } else {
                Ok(vec![1.0])
            }
        });
        let run = run_replications(0, 9, &e, 2).unwrap();
        assert!(run.partial);
        assert_eq!(run.failures.iter().map(|f| f.index).collect::<Vec<_>>(), vec![0, 3, 6]);
        assert_eq!(run.reports[0].n_replicates, 6);
    }
}
