//! Sets where every strict task has deadline 1 and the implicit tasks share
//! one period: feasibility reduces to two sums.
//!
//!     cargo run --example common_deadline

use rtpack::feasibility::lemma1_feasible;
use rtpack::generate::gen_lemma1_shaped;
use rtpack::{edf_feasible_exact, FeasibilityConfig, Rational};

fn main() -> rtpack::Result<()> {
    let cfg = FeasibilityConfig::default();
    for seed in 0..8 {
        let ts = gen_lemma1_shaped(seed, 5, 4)?;
        let strict: Rational = ts.iter().filter(|t| t.d < t.t).map(|t| t.c.clone()).sum();
        let closed = lemma1_feasible(&ts.tasks)?;
        let exact = edf_feasible_exact(&ts.tasks, &Rational::one(), &cfg)?.feasible;
        println!(
            "seed {seed}: sum C (strict) = {:>5}, U = {:>7}, closed form {closed}, exact {exact}",
            strict.to_string(),
            ts.total_utilization().to_decimal_string(3)
        );
    }
    Ok(())
}
