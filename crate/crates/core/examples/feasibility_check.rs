//! Exact uniprocessor EDF feasibility of a small constrained-deadline set,
//! with the demand curve printed at each deadline point.
//!
//!     cargo run --example feasibility_check

use rtpack::feasibility::{deadline_points, demand, test_horizon};
use rtpack::{edf_feasible_exact, q, FeasibilityConfig, Rational, TaskSet};

fn main() -> rtpack::Result<()> {
    let ts = TaskSet::from_params(
        "demo",
        [
            (q(1, 1), q(3, 1), q(4, 1)),
            (q(2, 1), q(5, 1), q(6, 1)),
            (q(3, 2), q(7, 1), q(12, 1)),
        ],
    );
    let cfg = FeasibilityConfig::default();
    let speed = Rational::one();

    println!("U = {}", ts.total_utilization());
    let horizon = test_horizon(&ts.tasks, &speed, &cfg)?;
    println!("test horizon = {horizon}");
    for t in deadline_points(&ts.tasks, &horizon, cfg.point_cap)? {
        println!("  dbf({t}) = {}", demand(&ts.tasks, &t));
    }

    let verdict = edf_feasible_exact(&ts.tasks, &speed, &cfg)?;
    println!("feasible: {}", verdict.feasible);

    // shrinking one deadline overloads the window [0, 3]
    let tight = TaskSet::from_params(
        "tight",
        ts.iter()
            .map(|t| (t.c.clone(), t.d.clone().min(q(3, 1)), t.t.clone())),
    );
    let verdict = edf_feasible_exact(&tight.tasks, &speed, &cfg)?;
    println!(
        "tightened: feasible {} witness {:?}",
        verdict.feasible, verdict.witness
    );
    Ok(())
}
