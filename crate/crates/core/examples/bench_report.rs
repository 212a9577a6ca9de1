//! A small experiment: adversarial and random instances, every heuristic,
//! the optimum, bound checks, and the CSV report on stdout.
//!
//!     cargo run --release --example bench_report

use rtpack::bench::{
    emit_report, run_experiment, AlgorithmSpec, ExperimentConfig, InstanceSource, ReportFormat,
};
use rtpack::{q, Algorithm, Strategy};

fn main() -> rtpack::Result<()> {
    let instances = vec![
        InstanceSource::BfAdversary {
            k: vec![4, 5],
            h: None,
        },
        InstanceSource::WfAdversary {
            k: vec![4],
            h: None,
        },
        InstanceSource::SpeedupGap {
            n: vec![3],
            eps: vec![q(1, 2)],
        },
        InstanceSource::Random {
            count: 6,
            n: 7,
            class: None,
            utilization: q(3, 2),
            utilization_max: Some(q(3, 1)),
            denominator_bound: 4,
            max_period: 20,
            seed: 7,
        },
    ];
    let algorithms = [Algorithm::Dm, Algorithm::Dagger]
        .into_iter()
        .flat_map(|algorithm| {
            Strategy::ALL.map(|strategy| AlgorithmSpec {
                algorithm,
                strategy,
            })
        })
        .collect();
    let report = run_experiment(&ExperimentConfig::new(instances, algorithms))?;

    print!(
        "{}",
        String::from_utf8_lossy(&emit_report(&report, ReportFormat::Csv)?)
    );
    let agg = &report.aggregate;
    eprintln!(
        "rows {}, max ratio {}, hard violations {}, soft {}",
        agg.rows,
        agg.max_ratio
            .as_ref()
            .map(ToString::to_string)
            .unwrap_or_default(),
        agg.hard_violations,
        agg.soft_violations
    );
    Ok(())
}
