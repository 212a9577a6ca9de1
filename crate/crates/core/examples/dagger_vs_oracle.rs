//! Greedy packing of the tightened set against the optimum on seeded
//! random task sets, with the 2*lambda guarantee checked per instance.
//!
//!     cargo run --release --example dagger_vs_oracle

use rtpack::generate::{gen_random_indexed, GenParams};
use rtpack::partition::{dagger_greedy_with, DaggerOrder};
use rtpack::{
    optimal_partition, q, DeadlineClass, FeasibilityConfig, Rational, Strategy, VerifyMode,
};

fn main() -> rtpack::Result<()> {
    let cfg = FeasibilityConfig::default();
    let params = GenParams::new(42, 8, DeadlineClass::Constrained, q(5, 2));
    println!(
        "{:>3} {:>6} {:>4} {:>4} {:>4} {:>4}",
        "#", "lambda", "ff", "ffd", "wf", "opt"
    );
    for i in 0..12 {
        let ts = gen_random_indexed(&params, i)?;
        let ff = dagger_greedy_with(&ts, Strategy::FirstFit, DaggerOrder::Input)?.m;
        let ffd =
            dagger_greedy_with(&ts, Strategy::FirstFit, DaggerOrder::DecreasingUtilization)?.m;
        let wf = dagger_greedy_with(&ts, Strategy::WorstFit, DaggerOrder::Input)?.m;
        let opt = optimal_partition(&ts, VerifyMode::Exact, 12, &cfg)?.m_star;
        let bound = Rational::from(2) * ts.lambda() * Rational::from(opt);
        assert!(Rational::from(ff.max(wf)) <= bound);
        println!(
            "{i:>3} {:>6} {ff:>4} {ffd:>4} {wf:>4} {opt:>4}",
            ts.lambda().to_decimal_string(2)
        );
    }
    Ok(())
}
