//! Thin command-line front end over the `hermite_lab` library.
//!
//! Exit codes: 0 success, 1 numerical-domain error, 2 usage error,
//! 3 verification failure.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use hermite_lab::chaos::{cumulant_trace, random_symmetric_kernel, rosenblatt_kernel_pair, sample_second_chaos};
use hermite_lab::info::{de_bruijn_gap, inequality_suite, Bandwidth, DensityModel};
use hermite_lab::io::{
    read_path_csv, write_field_csv, write_kernel_csv, write_run_csv, write_run_json, DataEnvelope,
};
use hermite_lab::process::{
    sample_fbm, sample_moving_average, sample_rosenblatt_grid, sample_vasicek, FieldSample, HermitePathGenerator,
    HermiteSheetGenerator, LatticeConfig, LatticeSequence, MovingAverageKernel, SamplePath,
};
use hermite_lab::special::{const_b_mavg, QuadratureSpec};
use hermite_lab::stats::{
    collect_streams, empirical_cumulants, estimate_hurst_qv, qv_limit_statistic, run_replications,
    vasicek_estimators, FnExperiment, GtEvaluator,
};
use hermite_lab::verify::{conjecture_probabilities, run_experiment, VerifyOptions, CONJECTURE_POINTS, EXPERIMENTS};
use hermite_lab::{derive_stream, Error, HermiteSpec};

#[derive(Parser, Debug, Serialize)]
#[command(name = "hermite-lab", version, about = "Simulation and inference for Hermite processes")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Serialize)]
struct Common {
    /// Master seed; replicate r uses stream r of this seed.
    #[arg(long, global = true, env = "HERMITE_LAB_SEED", default_value_t = 42)]
    seed: u64,
    /// Replicate count for Monte Carlo commands.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    reps: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads; 0 uses the machine parallelism.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Csv,
    Json,
}

fn parse_hurst(s: &str) -> Result<f64, String> {
    let h: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if h > 0.5 && h < 1.0 {
        Ok(h)
    } else {
        Err("H must lie in (0.5, 1)".into())
    }
}

fn parse_order(s: &str) -> Result<u32, String> {
    match s.parse::<u32>() {
        Ok(q) if q >= 1 => Ok(q),
        _ => Err("q must be a positive integer".into()),
    }
}

#[derive(Args, Debug, Serialize)]
struct ProcessArgs {
    /// Chaos order.
    #[arg(long, default_value_t = 2, value_parser = parse_order)]
    q: u32,
    /// Self-similarity index in (0.5, 1).
    #[arg(long = "H", default_value_t = 0.7, value_parser = parse_hurst)]
    hurst: f64,
    #[arg(long, default_value_t = 1.0)]
    t_end: f64,
    /// Output grid intervals.
    #[arg(long, default_value_t = 1024)]
    n: usize,
    /// Inner lattice of the non-central limit construction.
    #[arg(long, default_value_t = 16384)]
    lattice_n: usize,
    /// Gaussian sequence under the lattice.
    #[arg(long, value_enum, default_value_t = SequenceArg::Fgn)]
    sequence: SequenceArg,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SequenceArg {
    Fgn,
    Matched,
}

impl ProcessArgs {
    fn spec(&self) -> hermite_lab::Result<HermiteSpec> {
        HermiteSpec::scalar(self.q, self.hurst)
    }

    fn lattice(&self) -> hermite_lab::Result<LatticeConfig> {
        let seq = match self.sequence {
            SequenceArg::Fgn => LatticeSequence::Fgn,
            SequenceArg::Matched => LatticeSequence::Matched,
        };
        Ok(LatticeConfig::new(self.lattice_n)?.with_sequence(seq))
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ProcessKind {
    /// Fractional Brownian motion.
    Fbm,
    /// Hermite process from the non-central limit lattice.
    Hermite,
    /// Rosenblatt process from the time-interval double integral.
    Rosenblatt,
    /// Hermite sheet on an n × n grid of [0, t_end]².
    Sheet,
    /// Hermite–Vasicek path with parameters a, b.
    Vasicek,
    /// Moving average with kernel e^{-a u}.
    MovingAverage,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum EstimateWhat {
    Vasicek,
    Hurst,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum KernelKind {
    RosenblattPair,
    Random,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ModelKind {
    Gaussian,
    Mixture,
    StudentT,
    Kde,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
enum Command {
    /// Draw one path or field and write it as CSV or a JSON envelope.
    Simulate {
        #[arg(long, value_enum, default_value_t = ProcessKind::Hermite)]
        process: ProcessKind,
        #[command(flatten)]
        p: ProcessArgs,
        /// Drift rate (vasicek, moving-average).
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// Long-run mean (vasicek).
        #[arg(long, default_value_t = 0.0)]
        b: f64,
        /// Inner quadrature size of the rosenblatt generator.
        #[arg(long, default_value_t = 256)]
        m: usize,
    },
    /// Estimate parameters from an observed path file (t,value CSV or JSON envelope).
    Estimate {
        #[arg(long, value_enum)]
        what: EstimateWhat,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "H", value_parser = parse_hurst)]
        hurst: Option<f64>,
        #[arg(long, default_value_t = 2, value_parser = parse_order)]
        q: u32,
    },
    /// Monte Carlo of the normalized quadratic variation statistic.
    Qv {
        #[command(flatten)]
        p: ProcessArgs,
        /// Number of parameters (1 or 2).
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        dim: u8,
    },
    /// Monte Carlo of G_T(1) for the moving average with kernel e^{-a u}.
    Gt {
        #[command(flatten)]
        p: ProcessArgs,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value = "exp")]
        kernel: String,
    },
    /// Trace cumulants of second-chaos kernels, optionally against Monte Carlo.
    Cumulants {
        #[arg(long, value_enum, default_value_t = KernelKind::RosenblattPair)]
        kernel: KernelKind,
        #[arg(long = "H", default_value_t = 0.7, value_parser = parse_hurst)]
        hurst: f64,
        #[arg(long, default_value_t = 0.5)]
        s: f64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Weight alpha of R_t in alpha R_t + beta R_s.
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// Weight beta of R_s.
        #[arg(long, default_value_t = 0.5)]
        b: f64,
        #[arg(long, default_value_t = 256)]
        m: usize,
        /// Monte Carlo draws per kernel (0 skips the comparison).
        #[arg(long, default_value_t = 0)]
        samples: usize,
        /// Also write the first kernel matrix as dense CSV to this path.
        #[arg(long)]
        kernel_out: Option<PathBuf>,
    },
    /// Entropy, Fisher information and the inequality chain for a density.
    Info {
        #[arg(long, value_enum, default_value_t = ModelKind::Mixture)]
        model: ModelKind,
        /// Degrees of freedom of the Student t model.
        #[arg(long, default_value_t = 10.0)]
        nu: f64,
        /// Sample file (t,value CSV; values used) for the kde model.
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Empirical CDF of the Rosenblatt variable at the conjectured points.
    Conjecture {
        #[arg(long = "H", default_value_t = 0.7, value_parser = parse_hurst)]
        hurst: f64,
        #[arg(long, default_value_t = 50_000)]
        samples: usize,
    },
    /// Run acceptance experiments by name, or `all`.
    Verify {
        #[arg(long, default_value = "all")]
        experiment: String,
        /// Draw count for sampling experiments.
        #[arg(long)]
        samples: Option<usize>,
    },
}

enum Outcome {
    Ok,
    VerificationFailed,
}

struct Output {
    body: Vec<u8>,
    format: Format,
}

fn format_or(common: &Common, default: Format) -> Format {
    if let Some(f) = common.format {
        return f;
    }
    match common.out.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("csv") => Format::Csv,
        Some("json") => Format::Json,
        _ => default,
    }
}

fn pretty(v: &impl Serialize) -> hermite_lab::Result<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(v)?;
    s.push(b'\n');
    Ok(s)
}

/// Flat `key,value` CSV of a JSON object.
fn flat_csv(v: &Value) -> Vec<u8> {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, x, out);
                }
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    walk(&format!("{prefix}.{i}"), x, out);
                }
            }
            other => out.push_str(&format!("{prefix},{other}\n")),
        }
    }
    let mut s = String::from("key,value\n");
    walk("", v, &mut s);
    s.into_bytes()
}

fn report(v: Value, format: Format) -> hermite_lab::Result<Output> {
    let body = match format {
        Format::Json => pretty(&v)?,
        Format::Csv => flat_csv(&v),
    };
    Ok(Output { body, format })
}

fn read_path(p: &Path) -> hermite_lab::Result<SamplePath> {
    let f = File::open(p)?;
    if p.extension().and_then(|e| e.to_str()) == Some("json") {
        DataEnvelope::read_json(f)?.to_path()
    } else {
        read_path_csv(f)
    }
}

fn simulate(
    c: &Common,
    process: ProcessKind,
    p: &ProcessArgs,
    a: f64,
    b: f64,
    m: usize,
) -> hermite_lab::Result<Output> {
    let format = format_or(c, Format::Csv);
    let mut st = derive_stream(c.seed, 0);
    let lattice = p.lattice()?;
    let field = match process {
        ProcessKind::Fbm => FieldSample::from_path(&sample_fbm(&mut st, p.hurst, p.t_end, p.n)?),
        ProcessKind::Hermite => {
            FieldSample::from_path(&HermitePathGenerator::new(p.spec()?, p.t_end, p.n, lattice)?.sample(&mut st))
        }
        ProcessKind::Rosenblatt => FieldSample::from_path(&sample_rosenblatt_grid(&mut st, p.hurst, p.t_end, p.n, m)?),
        ProcessKind::Sheet => {
            let spec = HermiteSpec::new(p.q, vec![p.hurst, p.hurst])?;
            HermiteSheetGenerator::new(spec, [p.t_end, p.t_end], [p.n, p.n], lattice)?.sample(&mut st)
        }
        ProcessKind::Vasicek => {
            let z = HermitePathGenerator::new(p.spec()?, p.t_end, p.n, lattice)?.sample(&mut st);
            FieldSample::from_path(&sample_vasicek(a, b, &z)?)
        }
        ProcessKind::MovingAverage => {
            let z = HermitePathGenerator::new(p.spec()?, p.t_end, p.n, lattice)?.sample(&mut st);
            FieldSample::from_path(&sample_moving_average(&MovingAverageKernel::exponential(a), &z)?)
        }
    };
    let body = match format {
        Format::Csv => {
            let mut v = Vec::new();
            write_field_csv(&field, &mut v)?;
            v
        }
        Format::Json => pretty(&DataEnvelope::from_field(&field, Some(c.seed), Some(0), Some(lattice)))?,
    };
    Ok(Output { body, format })
}

fn estimate(c: &Common, what: EstimateWhat, input: &Path, hurst: Option<f64>, q: u32) -> hermite_lab::Result<Output> {
    let path = read_path(input)?;
    let v = match what {
        EstimateWhat::Vasicek => {
            let h = hurst.or_else(|| path.hermite_spec().map(|s| s.h())).ok_or_else(|| {
                Error::Domain("--H is required for vasicek estimation of an external path".into())
            })?;
            let e = vasicek_estimators(&path, h)?;
            json!({"a_hat": e.a_hat, "b_hat": e.b_hat, "alpha": e.alpha, "H": h, "t_end": path.t_end(), "n": path.n()})
        }
        EstimateWhat::Hurst => serde_json::to_value(estimate_hurst_qv(&path, q)?)?,
    };
    report(v, format_or(c, Format::Json))
}

fn run_output(c: &Common, run: &hermite_lab::stats::ReplicationRun, extra: Value) -> hermite_lab::Result<Output> {
    let format = format_or(c, Format::Json);
    let body = match format {
        Format::Csv => {
            let mut v = Vec::new();
            write_run_csv(run, &mut v)?;
            v
        }
        Format::Json => {
            if extra.is_null() {
                let mut v = Vec::new();
                write_run_json(run, &mut v)?;
                v.push(b'\n');
                v
            } else {
                pretty(&json!({"run": run, "reference": extra}))?
            }
        }
    };
    Ok(Output { body, format })
}

fn qv(c: &Common, p: &ProcessArgs, dim: u8) -> hermite_lab::Result<Output> {
    let reps = c.reps.unwrap_or(200) as usize;
    let lattice = p.lattice()?;
    let run = if dim == 1 {
        let spec = p.spec()?;
        let g = HermitePathGenerator::new(spec.clone(), p.t_end, p.n, lattice)?;
        let e = FnExperiment::new("qv d=1", &["s", "s^2"], |st| {
            let s = qv_limit_statistic(&FieldSample::from_path(&g.sample(st)), &spec, &[p.n])?;
            Ok(vec![s, s * s])
        });
        run_replications(c.seed, reps, &e, c.threads)?
    } else {
        let spec = HermiteSpec::new(p.q, vec![p.hurst, p.hurst])?;
        let g = HermiteSheetGenerator::new(spec.clone(), [p.t_end, p.t_end], [p.n, p.n], lattice)?;
        let e = FnExperiment::new("qv d=2", &["s", "s^2"], |st| {
            let s = qv_limit_statistic(&g.sample(st), &spec, &[p.n, p.n])?;
            Ok(vec![s, s * s])
        });
        run_replications(c.seed, reps, &e, c.threads)?
    };
    run_output(c, &run, Value::Null)
}

fn gt(c: &Common, p: &ProcessArgs, a: f64, kernel: &str) -> hermite_lab::Result<Output> {
    if kernel != "exp" {
        return Err(Error::Domain(format!("unknown kernel `{kernel}`; available: exp")));
    }
    let reps = c.reps.unwrap_or(200) as usize;
    let spec = p.spec()?;
    let k = MovingAverageKernel::exponential(a);
    let g = HermitePathGenerator::new(spec.clone(), p.t_end, p.n, p.lattice()?)?;
    let ev = GtEvaluator::new(&k, &spec, p.t_end, p.n)?;
    let e = FnExperiment::new("gt", &["G_T(1)"], |st| {
        let x = sample_moving_average(&k, &g.sample(st))?;
        Ok(vec![ev.evaluate(&x, 1.0)?])
    });
    let run = run_replications(c.seed, reps, &e, c.threads)?;
    let b = const_b_mavg(p.hurst, p.q, |u| (-a * u).exp(), QuadratureSpec::default())?;
    let var = empirical_cumulants(&run.reports[0].per_replicate, 2).ok().map(|c| (c.kappa(2), c.std_error(2)));
    run_output(
        c,
        &run,
        json!({"b": b.value, "b_error": b.error, "b_squared": b.value * b.value,
               "variance": var.map(|v| v.0), "variance_se": var.map(|v| v.1)}),
    )
}

#[allow(clippy::too_many_arguments)]
fn cumulants(
    c: &Common,
    kernel: KernelKind,
    hurst: f64,
    s: f64,
    t: f64,
    a: f64,
    b: f64,
    m: usize,
    samples: usize,
    kernel_out: Option<&Path>,
) -> hermite_lab::Result<Output> {
    let kernels = match kernel {
        KernelKind::RosenblattPair => {
            let (kf, kg) = rosenblatt_kernel_pair(hurst, s, t, a, b, m)?;
            vec![("f", kf), ("g", kg)]
        }
        KernelKind::Random => vec![("random", random_symmetric_kernel(c.seed, m)?)],
    };
    if let Some(path) = kernel_out {
        write_kernel_csv(&kernels[0].1, BufWriter::new(File::create(path)?))?;
        let hdr = path.with_extension("header.json");
        hermite_lab::io::write_kernel_header(&kernels[0].1, BufWriter::new(File::create(hdr)?))?;
    }
    let mut rows = Vec::new();
    for (i, (name, k)) in kernels.iter().enumerate() {
        let emp = if samples > 0 {
            let chunks = 100.min(samples);
            let per = samples.div_ceil(chunks);
            let parts = collect_streams(c.seed.wrapping_add(i as u64), chunks, c.threads, |st| {
                Ok(sample_second_chaos(st, k, per))
            })?;
            Some(empirical_cumulants(&parts.concat(), 4)?)
        } else {
            None
        };
        for p in 2..=4u32 {
            rows.push(json!({
                "kernel": name,
                "p": p,
                "trace": cumulant_trace(k, p)?,
                "empirical": emp.as_ref().map(|e| e.kappa(p as usize)),
                "empirical_se": emp.as_ref().map(|e| e.std_error(p as usize)),
            }));
        }
    }
    let format = format_or(c, Format::Json);
    let body = match format {
        Format::Json => pretty(&json!({"kernel": kernel, "H": hurst, "s": s, "t": t, "alpha": a, "beta": b, "m": m, "cumulants": rows}))?,
        Format::Csv => {
            let mut out = String::from("kernel,p,trace,empirical,empirical_se\n");
            for r in &rows {
                let f = |k: &str| match &r[k] {
                    Value::Null => String::new(),
                    Value::String(s) => s.clone(),
                    v => v.to_string(),
                };
                out.push_str(&format!("{},{},{},{},{}\n", f("kernel"), f("p"), f("trace"), f("empirical"), f("empirical_se")));
            }
            out.into_bytes()
        }
    };
    Ok(Output { body, format })
}

fn info(c: &Common, model: ModelKind, nu: f64, input: Option<&Path>) -> hermite_lab::Result<Output> {
    let quad = QuadratureSpec::default();
    let f = match model {
        ModelKind::Gaussian => DensityModel::gaussian(0.0, 1.0)?,
        ModelKind::Mixture => DensityModel::standardized_mixture()?,
        ModelKind::StudentT => DensityModel::student_t(nu)?,
        ModelKind::Kde => {
            let p = input.ok_or_else(|| Error::Domain("--in is required for the kde model".into()))?;
            let x = read_path_csv(File::open(p)?)?.into_values();
            DensityModel::kde(&x, Bandwidth::Silverman)?
        }
    };
    let mut v = json!({
        "model": f.name(),
        "mean": f.mean(),
        "variance": f.variance(),
        "entropy": hermite_lab::info::entropy(&f, &quad)?,
    });
    // The chain and de Bruijn are stated for standardized F.
    if f.mean().abs() < 1e-6 && (f.variance() - 1.0).abs() < 1e-6 {
        let rep = inequality_suite(&f, &quad)?;
        v["suite"] = serde_json::to_value(&rep)?;
        if let Ok(db) = de_bruijn_gap(&f, &quad, 64) {
            v["de_bruijn"] = json!({"lhs": db.lhs, "rhs": db.rhs, "gap": db.gap()});
        }
    } else {
        v["fisher"] = json!(hermite_lab::info::fisher_information(&f, &quad)?);
        v["standardized_fisher"] = json!(hermite_lab::info::standardized_fisher(&f, &quad)?);
    }
    report(v, format_or(c, Format::Json))
}

fn conjecture(c: &Common, hurst: f64, samples: usize) -> hermite_lab::Result<Output> {
    let probs = conjecture_probabilities(c.seed, hurst, samples, c.threads)?;
    let rows: Vec<Value> = CONJECTURE_POINTS
        .iter()
        .zip(&probs)
        .map(|((x, quoted), (p, se))| {
            json!({"point": x, "probability": p, "std_error": se,
                   "ci95": [p - 1.96 * se, p + 1.96 * se], "quoted": quoted})
        })
        .collect();
    report(json!({"H": hurst, "samples": samples, "probes": rows}), format_or(c, Format::Json))
}

fn verify(c: &Common, experiment: &str, samples: Option<usize>) -> hermite_lab::Result<(Output, bool)> {
    let opts = VerifyOptions {
        seed: c.seed,
        threads: c.threads,
        reps: c.reps.map(|r| r as usize),
        samples,
    };
    let names: Vec<&str> = if experiment == "all" {
        EXPERIMENTS.iter().map(|e| e.1).collect()
    } else {
        vec![experiment]
    };
    let mut reports = Vec::new();
    for name in names {
        let r = run_experiment(name, &opts)?;
        eprintln!("{}", r.summary_line());
        for chk in r.failed_checks() {
            eprintln!("       {}: {} not in [{}, {}]", chk.label, chk.value, chk.lower, chk.upper);
        }
        reports.push(r);
    }
    let all_pass = reports.iter().all(|r| r.passed);
    let format = format_or(c, Format::Json);
    let body = match format {
        Format::Json if reports.len() == 1 => pretty(&reports[0])?,
        Format::Json => pretty(&reports)?,
        Format::Csv => {
            let mut s = String::from("criterion,name,label,value,lower,upper,gating,passed\n");
            for r in &reports {
                for k in &r.checks {
                    s.push_str(&format!(
                        "{},{},\"{}\",{},{},{},{},{}\n",
                        r.id, r.name, k.label, k.value, k.lower, k.upper, k.gating, k.passed
                    ));
                }
            }
            s.into_bytes()
        }
    };
    Ok((Output { body, format }, all_pass))
}

fn execute(cli: &Cli) -> hermite_lab::Result<(Output, Outcome)> {
    let c = &cli.common;
    let ok = |o: Output| Ok((o, Outcome::Ok));
    match &cli.command {
        Command::Simulate { process, p, a, b, m } => ok(simulate(c, *process, p, *a, *b, *m)?),
        Command::Estimate { what, input, hurst, q } => ok(estimate(c, *what, input, *hurst, *q)?),
        Command::Qv { p, dim } => ok(qv(c, p, *dim)?),
        Command::Gt { p, a, kernel } => ok(gt(c, p, *a, kernel)?),
        Command::Cumulants { kernel, hurst, s, t, a, b, m, samples, kernel_out } => {
            ok(cumulants(c, *kernel, *hurst, *s, *t, *a, *b, *m, *samples, kernel_out.as_deref())?)
        }
        Command::Info { model, nu, input } => ok(info(c, *model, *nu, input.as_deref())?),
        Command::Conjecture { hurst, samples } => ok(conjecture(c, *hurst, *samples)?),
        Command::Verify { experiment, samples } => {
            let (o, pass) = verify(c, experiment, *samples)?;
            Ok((o, if pass { Outcome::Ok } else { Outcome::VerificationFailed }))
        }
    }
}

fn write_outputs(cli: &Cli, out: &Output, wall: f64) -> hermite_lab::Result<()> {
    match &cli.common.out {
        None => {
            std::io::stdout().write_all(&out.body)?;
        }
        Some(path) => {
            std::fs::write(path, &out.body)?;
            let mut meta_path = path.clone().into_os_string();
            meta_path.push(".meta.json");
            let meta = json!({
                "program": "hermite-lab",
                "version": env!("CARGO_PKG_VERSION"),
                "seed": cli.common.seed,
                "format": out.format,
                "argv": std::env::args().collect::<Vec<_>>(),
                "params": cli,
                "wall_time_s": wall,
            });
            std::fs::write(meta_path, pretty(&meta)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let result = execute(&cli).and_then(|(out, outcome)| {
        write_outputs(&cli, &out, start.elapsed().as_secs_f64())?;
        Ok(outcome)
    });
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(3),
        Err(e @ (Error::UnknownExperiment(_) | Error::Parse(_) | Error::Io(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
