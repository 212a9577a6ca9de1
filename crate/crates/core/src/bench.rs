//! Algorithm-versus-oracle experiments.
//!
//! [`run_experiment`] expands an [`ExperimentConfig`] into instances, runs
//! every selected partitioner on each, re-verifies every partition with
//! the exact test, optionally computes the optimum, and records one
//! [`BenchRow`] per (instance, algorithm, strategy). [`check_bounds`]
//! evaluates the approximation guarantees on the finished rows:
//!
//! * greedy packing of the tightened set must satisfy `M <= 2 lambda M*`
//!   (hard);
//! * deadline-monotonic partitioning is compared against
//!   `2/(1 - gamma) M* + alpha` (soft, reported only, since the additive
//!   constant is not pinned down);
//! * every partition must re-verify, and `ceil(U) <= M* <= M` (hard).

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feasibility::{verify_partition, FeasibilityConfig, VerifyMode};
use crate::generate::{
    dvp_to_tasks, gen_best_fit_adversary, gen_lemma1_shaped, gen_random_dvp, gen_random_indexed,
    gen_speedup_gap, gen_worst_fit_adversary, GenParams,
};
use crate::io::read_taskset;
use crate::partition::{
    dagger_greedy, dm_partition, optimal_partition, Algorithm, Partition, Strategy,
};
use crate::rational::Rational;
use crate::task::{DeadlineClass, TaskSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum InstanceSource {
    BfAdversary {
        k: Vec<u32>,
        #[serde(default)]
        h: Option<Rational>,
    },
    WfAdversary {
        k: Vec<u32>,
        #[serde(default)]
        h: Option<Rational>,
    },
    SpeedupGap {
        n: Vec<u32>,
        eps: Vec<Rational>,
    },
    /// `count` seeded random sets. Without `class` the deadline class cycles
    /// implicit, constrained, arbitrary. With `utilization_max` the target
    /// sweeps linearly from `utilization` to `utilization_max`.
    Random {
        count: usize,
        n: usize,
        #[serde(default)]
        class: Option<DeadlineClass>,
        utilization: Rational,
        #[serde(default)]
        utilization_max: Option<Rational>,
        #[serde(default = "default_denominator")]
        denominator_bound: u32,
        #[serde(default = "default_max_period")]
        max_period: u32,
        seed: u64,
    },
    /// Random dominated vector instances mapped to task sets.
    Dvp {
        count: usize,
        n: usize,
        #[serde(default = "default_denominator")]
        denominator_bound: u32,
        seed: u64,
    },
    /// Random sets with the common-deadline shape.
    Lemma1 {
        count: usize,
        n: usize,
        #[serde(default = "default_denominator")]
        denominator_bound: u32,
        seed: u64,
    },
    /// Task-set documents matching a glob pattern, in sorted path order.
    Files {
        glob: String,
    },
}

fn default_denominator() -> u32 {
    4
}

fn default_max_period() -> u32 {
    20
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgorithmSpec {
    pub algorithm: Algorithm,
    pub strategy: Strategy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub enabled: bool,
    #[serde(default = "default_n_cap")]
    pub n_cap: usize,
}

fn default_n_cap() -> usize {
    crate::partition::DEFAULT_N_CAP
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            enabled: true,
            n_cap: default_n_cap(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub instances: Vec<InstanceSource>,
    pub algorithms: Vec<AlgorithmSpec>,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default = "Rational::one")]
    pub alpha_slack: Rational,
    /// Record wall-clock time per row. Off by default so reports are
    /// reproducible byte for byte.
    #[serde(default)]
    pub timing: bool,
    #[serde(default)]
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(instances: Vec<InstanceSource>, algorithms: Vec<AlgorithmSpec>) -> Self {
        ExperimentConfig {
            instances,
            algorithms,
            oracle: OracleConfig::default(),
            alpha_slack: Rational::one(),
            timing: false,
            threads: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub family: String,
    pub tasks: TaskSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `M > 2 lambda M*` for the tightened greedy packing.
    TwoLambda,
    /// `M > 2/(1-gamma) M* + alpha` for deadline-monotonic partitioning.
    Asymptotic,
    /// A produced partition failed exact re-verification.
    Reverification,
    /// `M* > M`.
    OracleAboveAlgorithm,
    /// `M* < ceil(U)`.
    UtilizationLowerBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundViolation {
    pub row: usize,
    pub kind: BoundKind,
    pub hard: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRow {
    pub index: usize,
    pub instance: String,
    pub family: String,
    pub n: usize,
    pub class: DeadlineClass,
    pub lambda: Rational,
    pub gamma: Rational,
    pub utilization: Rational,
    pub algorithm: Algorithm,
    pub strategy: Strategy,
    pub m: Option<usize>,
    pub m_star: Option<usize>,
    pub ratio: Option<Rational>,
    pub ratio_decimal: Option<String>,
    pub bound_2lambda: Rational,
    pub bound_asymptotic: Option<Rational>,
    /// `M - 2/(1-gamma) M*` for deadline-monotonic rows.
    pub asymptotic_slack: Option<Rational>,
    pub verified: bool,
    pub runtime_ms: Option<u64>,
    pub bins: Option<Vec<Vec<usize>>>,
    pub violations: Vec<BoundViolation>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Aggregate {
    pub rows: usize,
    pub max_ratio: Option<Rational>,
    pub mean_ratio: Option<Rational>,
    pub max_asymptotic_slack: Option<Rational>,
    pub hard_violations: usize,
    pub soft_violations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchReport {
    pub alpha_slack: Rational,
    pub rows: Vec<BenchRow>,
    pub aggregate: Aggregate,
}

impl BenchReport {
    pub fn from_rows(alpha_slack: Rational, rows: Vec<BenchRow>) -> Self {
        let mut report = BenchReport {
            alpha_slack,
            rows,
            aggregate: Aggregate::default(),
        };
        let violations = check_bounds(&report);
        for row in &mut report.rows {
            row.violations = violations
                .iter()
                .filter(|v| v.row == row.index)
                .cloned()
                .collect();
        }
        report.aggregate = aggregate(&report.rows);
        report
    }

    pub fn hard_violations(&self) -> impl Iterator<Item = &BoundViolation> {
        self.rows
            .iter()
            .flat_map(|r| r.violations.iter())
            .filter(|v| v.hard)
    }
}

fn aggregate(rows: &[BenchRow]) -> Aggregate {
    let ratios: Vec<&Rational> = rows.iter().filter_map(|r| r.ratio.as_ref()).collect();
    let mean_ratio = if ratios.is_empty() {
        None
    } else {
        Some(ratios.iter().copied().sum::<Rational>() / Rational::from(ratios.len()))
    };
    Aggregate {
        rows: rows.len(),
        max_ratio: ratios.iter().copied().max().cloned(),
        mean_ratio,
        max_asymptotic_slack: rows.iter().filter_map(|r| r.asymptotic_slack.clone()).max(),
        hard_violations: rows
            .iter()
            .flat_map(|r| &r.violations)
            .filter(|v| v.hard)
            .count(),
        soft_violations: rows
            .iter()
            .flat_map(|r| &r.violations)
            .filter(|v| !v.hard)
            .count(),
    }
}

/// Expands every instance source, in config order.
pub fn expand_instances(sources: &[InstanceSource]) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for source in sources {
        match source {
            InstanceSource::BfAdversary { k, h } => {
                for &k in k {
                    out.push(Instance {
                        family: "bf-adversary".into(),
                        tasks: gen_best_fit_adversary(k, h.clone())?,
                    });
                }
            }
            InstanceSource::WfAdversary { k, h } => {
                for &k in k {
                    out.push(Instance {
                        family: "wf-adversary".into(),
                        tasks: gen_worst_fit_adversary(k, h.clone())?,
                    });
                }
            }
            InstanceSource::SpeedupGap { n, eps } => {
                for &n in n {
                    for eps in eps {
                        out.push(Instance {
                            family: "speedup-gap".into(),
                            tasks: gen_speedup_gap(n, eps)?,
                        });
                    }
                }
            }
            InstanceSource::Random {
                count,
                n,
                class,
                utilization,
                utilization_max,
                denominator_bound,
                max_period,
                seed,
            } => {
                const CLASSES: [DeadlineClass; 3] = [
                    DeadlineClass::Implicit,
                    DeadlineClass::Constrained,
                    DeadlineClass::Arbitrary,
                ];
                for i in 0..*count {
                    let target = match utilization_max {
                        Some(max) if *count > 1 => {
                            utilization
                                + (max - utilization) * Rational::new(i as i64, (*count - 1) as i64)
                        }
                        _ => utilization.clone(),
                    };
                    let params = GenParams {
                        seed: *seed,
                        n: *n,
                        class: class.unwrap_or(CLASSES[i % 3]),
                        utilization: target,
                        denominator_bound: *denominator_bound,
                        max_period: *max_period,
                    };
                    out.push(Instance {
                        family: "random".into(),
                        tasks: gen_random_indexed(&params, i as u64)?,
                    });
                }
            }
            InstanceSource::Dvp {
                count,
                n,
                denominator_bound,
                seed,
            } => {
                for i in 0..*count {
                    let dvp = gen_random_dvp(seed.wrapping_add(i as u64), *n, *denominator_bound)?;
                    let mut tasks = dvp_to_tasks(&dvp)?;
                    tasks.name = format!("dvp-{seed}-{i}");
                    out.push(Instance {
                        family: "dvp".into(),
                        tasks,
                    });
                }
            }
            InstanceSource::Lemma1 {
                count,
                n,
                denominator_bound,
                seed,
            } => {
                for i in 0..*count {
                    out.push(Instance {
                        family: "lemma1".into(),
                        tasks: gen_lemma1_shaped(
                            seed.wrapping_add(i as u64),
                            *n,
                            *denominator_bound,
                        )?,
                    });
                }
            }
            InstanceSource::Files { glob: pattern } => {
                let mut paths: Vec<PathBuf> = glob::glob(pattern)
                    .map_err(|e| Error::BadParam(format!("bad glob {pattern:?}: {e}")))?
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| Error::Io(e.into()))?;
                paths.sort();
                for path in paths {
                    let mut tasks = read_taskset(&path)?;
                    if tasks.name.is_empty() {
                        tasks.name = path.display().to_string();
                    }
                    out.push(Instance {
                        family: "file".into(),
                        tasks,
                    });
                }
            }
        }
    }
    Ok(out)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<BenchReport> {
    if cfg.algorithms.is_empty() {
        return Err(Error::BadParam("select at least one algorithm".into()));
    }
    if let Some(bad) = cfg
        .algorithms
        .iter()
        .find(|a| a.algorithm == Algorithm::Oracle)
    {
        return Err(Error::BadParam(format!(
            "{} is not a heuristic; enable the oracle section instead",
            bad.algorithm
        )));
    }
    let instances = expand_instances(&cfg.instances)?;
    let feas = FeasibilityConfig::default();

    let run = || -> Vec<Vec<BenchRow>> {
        instances
            .par_iter()
            .enumerate()
            .map(|(i, inst)| instance_rows(cfg, &feas, i, inst))
            .collect()
    };
    let grouped = match cfg.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| Error::BadParam(e.to_string()))?
            .install(run),
        None => run(),
    };
    let mut rows: Vec<BenchRow> = grouped.into_iter().flatten().collect();
    for (index, row) in rows.iter_mut().enumerate() {
        row.index = index;
    }
    Ok(BenchReport::from_rows(cfg.alpha_slack.clone(), rows))
}

fn instance_rows(
    cfg: &ExperimentConfig,
    feas: &FeasibilityConfig,
    _index: usize,
    inst: &Instance,
) -> Vec<BenchRow> {
    let ts = &inst.tasks;
    let lambda = ts.lambda();
    let gamma = ts.gamma();
    let bound_2lambda = Rational::from(2) * &lambda;
    let bound_asymptotic =
        (gamma < Rational::one()).then(|| Rational::from(2) / (Rational::one() - &gamma));

    let oracle = cfg.oracle.enabled.then(|| {
        optimal_partition(ts, VerifyMode::Exact, cfg.oracle.n_cap, feas)
            .map(|r| r.m_star)
            .map_err(|e| e.to_string())
    });

    cfg.algorithms
        .iter()
        .map(|spec| {
            let started = Instant::now();
            let result: Result<Partition> = match spec.algorithm {
                Algorithm::Dm => dm_partition(ts, spec.strategy),
                Algorithm::Dagger => dagger_greedy(ts, spec.strategy),
                Algorithm::Oracle => unreachable!("rejected in run_experiment"),
            };
            let elapsed = started.elapsed().as_millis() as u64;
            let mut errors = Vec::new();
            let (m, verified, bins) = match result {
                Ok(part) => {
                    let verified = match verify_partition(ts, &part, VerifyMode::Exact, feas) {
                        Ok(v) => v,
                        Err(e) => {
                            errors.push(format!("verify: {e}"));
                            false
                        }
                    };
                    (Some(part.m), verified, Some(part.bins))
                }
                Err(e) => {
                    errors.push(format!("{}: {e}", spec.algorithm));
                    (None, false, None)
                }
            };
            let m_star = match &oracle {
                Some(Ok(v)) => Some(*v),
                Some(Err(e)) => {
                    errors.push(format!("oracle: {e}"));
                    None
                }
                None => None,
            };
            let ratio = match (m, m_star) {
                (Some(m), Some(s)) => Some(Rational::new(m as i64, s as i64)),
                _ => None,
            };
            let asymptotic_slack = match (spec.algorithm, m, m_star, &bound_asymptotic) {
                (Algorithm::Dm, Some(m), Some(s), Some(b)) => {
                    Some(Rational::from(m) - b * Rational::from(s))
                }
                _ => None,
            };
            BenchRow {
                index: 0,
                instance: ts.name.clone(),
                family: inst.family.clone(),
                n: ts.len(),
                class: ts.classify(),
                lambda: lambda.clone(),
                gamma: gamma.clone(),
                utilization: ts.total_utilization(),
                algorithm: spec.algorithm,
                strategy: spec.strategy,
                m,
                m_star,
                ratio_decimal: ratio.as_ref().map(|r| r.to_decimal_string(6)),
                ratio,
                bound_2lambda: bound_2lambda.clone(),
                bound_asymptotic: bound_asymptotic.clone(),
                asymptotic_slack,
                verified,
                runtime_ms: cfg.timing.then_some(elapsed),
                bins,
                violations: Vec::new(),
                error: (!errors.is_empty()).then(|| errors.join("; ")),
            }
        })
        .collect()
}

/// Evaluates every bound on every row.
pub fn check_bounds(report: &BenchReport) -> Vec<BoundViolation> {
    let mut out = Vec::new();
    for row in &report.rows {
        let mut flag = |kind, hard, detail: String| {
            out.push(BoundViolation {
                row: row.index,
                kind,
                hard,
                detail,
            })
        };
        if row.m.is_some() && !row.verified {
            flag(
                BoundKind::Reverification,
                true,
                format!(
                    "{}/{} partition failed exact verification",
                    row.algorithm, row.strategy
                ),
            );
        }
        let (Some(m), Some(m_star)) = (row.m, row.m_star) else {
            continue;
        };
        let m_r = Rational::from(m);
        let m_star_r = Rational::from(m_star);
        if m_star > m {
            flag(
                BoundKind::OracleAboveAlgorithm,
                true,
                format!("M* = {m_star} exceeds M = {m}"),
            );
        }
        let lower = row.utilization.ceil();
        if num_bigint::BigInt::from(m_star) < lower {
            flag(
                BoundKind::UtilizationLowerBound,
                true,
                format!("M* = {m_star} below ceil(U) = {lower}"),
            );
        }
        match row.algorithm {
            Algorithm::Dagger => {
                let limit = &row.bound_2lambda * &m_star_r;
                if m_r > limit {
                    flag(
                        BoundKind::TwoLambda,
                        true,
                        format!("M = {m} > 2 lambda M* = {limit}"),
                    );
                }
            }
            Algorithm::Dm => {
                if let Some(b) = &row.bound_asymptotic {
                    let limit = b * &m_star_r + &report.alpha_slack;
                    if m_r > limit {
                        flag(
                            BoundKind::Asymptotic,
                            false,
                            format!("M = {m} > 2/(1-gamma) M* + alpha = {limit}"),
                        );
                    }
                }
            }
            Algorithm::Oracle => {}
        }
    }
    out
}

pub const CSV_COLUMNS: [&str; 14] = [
    "instance",
    "family",
    "N",
    "class",
    "lambda",
    "gamma",
    "U",
    "algorithm",
    "strategy",
    "M",
    "m_star",
    "ratio",
    "bound_2lambda",
    "runtime_ms",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl ReportFormat {
    /// Picks the format from a file extension (`.csv` or `.json`).
    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => Ok(ReportFormat::Csv),
            Some("json") => Ok(ReportFormat::Json),
            _ => Err(Error::BadParam(format!(
                "cannot infer report format from {}",
                path.display()
            ))),
        }
    }
}

pub fn emit_report(report: &BenchReport, format: ReportFormat) -> Result<Vec<u8>> {
    match format {
        ReportFormat::Json => Ok(crate::io::to_pretty(report).into_bytes()),
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_COLUMNS).map_err(csv_err)?;
            let opt = |v: Option<String>| v.unwrap_or_default();
            for row in &report.rows {
                w.write_record([
                    row.instance.clone(),
                    row.family.clone(),
                    row.n.to_string(),
                    row.class.to_string(),
                    row.lambda.to_string(),
                    row.gamma.to_string(),
                    row.utilization.to_string(),
                    row.algorithm.to_string(),
                    row.strategy.to_string(),
                    opt(row.m.map(|v| v.to_string())),
                    opt(row.m_star.map(|v| v.to_string())),
                    opt(row.ratio.as_ref().map(ToString::to_string)),
                    row.bound_2lambda.to_string(),
                    opt(row.runtime_ms.map(|v| v.to_string())),
                ])
                .map_err(csv_err)?;
            }
            w.into_inner().map_err(|e| Error::Io(e.into_error()))
        }
    }
}

pub fn parse_report_json(bytes: &[u8]) -> Result<BenchReport> {
    Ok(serde_json::from_slice(bytes)?)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}
