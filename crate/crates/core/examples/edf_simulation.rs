//! Synchronous EDF simulation: deadline misses, preemptions and idle time,
//! at unit speed and on a faster processor.
//!
//!     cargo run --example edf_simulation

use rtpack::{q, simulate_edf_synchronous, FeasibilityConfig, TaskSet};

fn main() -> rtpack::Result<()> {
    let ts = TaskSet::from_params(
        "sim",
        [
            (q(1, 1), q(2, 1), q(3, 1)),
            (q(2, 1), q(4, 1), q(5, 1)),
            (q(3, 2), q(3, 1), q(6, 1)),
        ],
    );
    let cfg = FeasibilityConfig::default();
    for speed in [q(1, 1), q(5, 4)] {
        let trace = simulate_edf_synchronous(&ts.tasks, &q(30, 1), &speed, &cfg)?;
        println!(
            "speed {speed}: {} jobs, {} preemptions",
            trace.jobs_released, trace.preemptions
        );
        for miss in &trace.misses {
            println!("  task {} misses deadline {}", miss.task, miss.deadline);
        }
        let idle: Vec<String> = trace
            .idle
            .iter()
            .map(|(a, b)| format!("[{a}, {b})"))
            .collect();
        println!("  idle: {}", idle.join(" "));
    }
    Ok(())
}
