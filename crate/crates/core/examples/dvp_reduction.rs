//! Two-dimensional dominated vector packing written as a task set: a group
//! of vectors fits in one bin exactly when its tasks are EDF-feasible on
//! one processor.
//!
//!     cargo run --example dvp_reduction

use rtpack::generate::{dvp_to_tasks, DvpInstance};
use rtpack::{edf_feasible_exact, q, FeasibilityConfig, Rational};

fn main() -> rtpack::Result<()> {
    let dvp = DvpInstance::new(vec![
        (q(1, 5), q(1, 2)),
        (q(1, 4), q(1, 3)),
        (q(1, 3), q(0, 1)),
        (q(1, 2), q(0, 1)),
        (q(1, 10), q(1, 5)),
    ])?;
    let ts = dvp_to_tasks(&dvp)?;
    println!("common period H = {}", dvp.common_period());
    for t in ts.iter() {
        println!("  task {}: C={} D={} T={}", t.id, t.c, t.d, t.t);
    }

    let cfg = FeasibilityConfig::default();
    let n = dvp.vectors.len();
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let tasks: Vec<_> = idx.iter().map(|&i| ts.tasks[i].clone()).collect();
        let fits = dvp.fits(&idx);
        let feasible = edf_feasible_exact(&tasks, &Rational::one(), &cfg)?.feasible;
        assert_eq!(fits, feasible);
        if fits && idx.len() > 2 {
            println!("bin {idx:?} fits");
        }
    }
    println!("all {} subsets agree", (1u32 << n) - 1);
    Ok(())
}
