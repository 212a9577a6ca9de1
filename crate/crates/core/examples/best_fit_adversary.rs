//! The instance family on which best-fit deadline-monotonic partitioning
//! opens K processors although two suffice.
//!
//!     cargo run --release --example best_fit_adversary -- 6

use rtpack::generate::{adversary_two_processor_bins, gen_best_fit_adversary};
use rtpack::{dm_partition, optimal_partition, FeasibilityConfig, Strategy, VerifyMode};

fn main() -> rtpack::Result<()> {
    let k: u32 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(5);
    let ts = gen_best_fit_adversary(k, None)?;
    for t in ts.iter() {
        println!("tau{}: C={} D={} T={}", t.id + 1, t.c, t.d, t.t);
    }

    let bf = dm_partition(&ts, Strategy::BestFit)?;
    println!("\nbest fit uses {} processors:", bf.m);
    for (j, bin) in bf.bins.iter().enumerate() {
        println!("  P{}: {:?}", j + 1, bin);
    }

    let cfg = FeasibilityConfig::default();
    let opt = optimal_partition(&ts, VerifyMode::Exact, 2 * k as usize, &cfg)?;
    println!(
        "\noptimum: {} processors {:?}",
        opt.m_star, opt.witness.bins
    );
    println!("odd/even split: {:?}", adversary_two_processor_bins(k));
    Ok(())
}
