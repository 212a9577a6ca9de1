//! Tasks that need one processor each at unit speed, yet fit on a single
//! processor that is only 1+eps times faster.
//!
//!     cargo run --example speedup_gap -- 5 1/4

use rtpack::generate::gen_speedup_gap;
use rtpack::{
    dagger_greedy, dm_partition, edf_feasible_exact, q, FeasibilityConfig, Rational, Strategy,
};

fn main() -> rtpack::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: u32 = args.next().and_then(|a| a.parse().ok()).unwrap_or(4);
    let eps: Rational = args.next().and_then(|a| a.parse().ok()).unwrap_or(q(1, 2));
    let ts = gen_speedup_gap(n, &eps)?;
    for t in ts.iter() {
        println!("C=D={} T={}", t.d, t.t);
    }
    let cfg = FeasibilityConfig::default();

    println!(
        "dm first fit:     {} processors",
        dm_partition(&ts, Strategy::FirstFit)?.m
    );
    println!(
        "dagger first fit: {} processors",
        dagger_greedy(&ts, Strategy::FirstFit)?.m
    );
    for speed in [Rational::one(), Rational::one() + &eps] {
        let v = edf_feasible_exact(&ts.tasks, &speed, &cfg)?;
        println!(
            "one processor at speed {speed}: feasible {} (witness {:?})",
            v.feasible, v.witness
        );
    }
    Ok(())
}
