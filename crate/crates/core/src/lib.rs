//! Partitioned EDF packing of sporadic real-time tasks.
//!
//! The crate answers one question: how few identical processors does a
//! set of sporadic tasks need when each task is pinned to one processor and
//! every processor runs preemptive EDF? It provides
//!
//! * the task model with exact rational arithmetic ([`task`], [`rational`]),
//! * exact uniprocessor feasibility, a closed form for common-deadline
//!   sets and an EDF simulator ([`feasibility`]),
//! * deadline-monotonic partitioning, greedy packing of the tightened
//!   implicit-deadline set and an exhaustive optimal oracle ([`partition`]),
//! * generators for adversarial and random instances ([`generate`]),
//! * an experiment harness comparing algorithms against the oracle
//!   ([`bench`]), and
//! * JSON/CSV formats plus the `rtpack` command line ([`io`], [`cli`]).

pub mod bench;
pub mod cli;
pub mod error;
pub mod feasibility;
pub mod generate;
pub mod io;
pub mod partition;
pub mod rational;
pub mod task;

pub use error::{Error, Result};
pub use feasibility::{
    edf_feasible_exact, simulate_edf_synchronous, verify_partition, FeasibilityConfig,
    FeasibilityVerdict, SimTrace, VerifyMode,
};
pub use partition::{
    dagger_greedy, dm_partition, optimal_partition, Algorithm, OracleResult, Partition, Strategy,
};
pub use rational::{q, Rational};
pub use task::{DeadlineClass, Task, TaskSet};
