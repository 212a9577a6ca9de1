//! Partitioning algorithms.
//!
//! * [`dm_partition`]: deadline-monotonic partitioning with the linear
//!   demand/utilization admission test and a first/best/worst-fit choice.
//! * [`dagger_greedy`]: greedy fitting on utilizations of the tightened
//!   implicit-deadline set.
//! * [`optimal_partition`]: exhaustive search for the minimum processor count.

mod dagger;
mod dm;
mod oracle;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::task::TaskSet;

pub use dagger::{dagger_greedy, dagger_greedy_with, DaggerOrder};
pub use dm::{dm_admits, dm_bin_admissible, dm_order, dm_partition};
pub use oracle::{optimal_partition, OracleResult, DEFAULT_N_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    #[serde(rename = "ff")]
    FirstFit,
    #[serde(rename = "bf")]
    BestFit,
    #[serde(rename = "wf")]
    WorstFit,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::FirstFit, Strategy::BestFit, Strategy::WorstFit];

    pub fn as_str(&self) -> &'static str {
        match self {
            Strategy::FirstFit => "ff",
            Strategy::BestFit => "bf",
            Strategy::WorstFit => "wf",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ff" => Ok(Strategy::FirstFit),
            "bf" => Ok(Strategy::BestFit),
            "wf" => Ok(Strategy::WorstFit),
            other => Err(Error::BadParam(format!("unknown strategy {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Dm,
    Dagger,
    Oracle,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Dm => "dm",
            Algorithm::Dagger => "dagger",
            Algorithm::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dm" => Ok(Algorithm::Dm),
            "dagger" => Ok(Algorithm::Dagger),
            "oracle" => Ok(Algorithm::Oracle),
            other => Err(Error::BadParam(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// Assignment of task ids to processors. Bins are kept in the order the
/// algorithm opened them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub algorithm: Algorithm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<Strategy>,
    pub m: usize,
    pub bins: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(algorithm: Algorithm, strategy: Option<Strategy>, bins: Vec<Vec<usize>>) -> Self {
        let mut bins = bins;
        for bin in &mut bins {
            bin.sort_unstable();
        }
        Partition {
            algorithm,
            strategy,
            m: bins.len(),
            bins,
        }
    }

    pub fn processors(&self) -> usize {
        self.bins.len()
    }

    /// Bin index holding task `id`.
    pub fn bin_of(&self, id: usize) -> Option<usize> {
        self.bins.iter().position(|b| b.contains(&id))
    }
}

pub(crate) fn ensure_valid(ts: &TaskSet) -> Result<()> {
    let violations = ts.validate();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidTaskSet(violations))
    }
}
