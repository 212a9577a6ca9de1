use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feasibility::{edf_feasible_exact, FeasibilityConfig};
use crate::partition::{dm_bin_admissible, Partition};
use crate::rational::Rational;
use crate::task::{Task, TaskSet};

/// Per-processor test used by [`verify_partition`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    /// Exact processor-demand test at speed 1.
    Exact,
    /// The deadline-monotonic admission conditions (linear demand and
    /// utilization), applied task by task in deadline order.
    Approximate,
}

/// Checks that `part` is a partition of `ts` and that every bin passes the
/// selected per-processor test.
pub fn verify_partition(
    ts: &TaskSet,
    part: &Partition,
    mode: VerifyMode,
    cfg: &FeasibilityConfig,
) -> Result<bool> {
    let bins = resolve_bins(ts, part)?;
    for bin in &bins {
        let ok = match mode {
            VerifyMode::Exact => {
                let owned: Vec<Task> = bin.iter().map(|t| (*t).clone()).collect();
                edf_feasible_exact(&owned, &Rational::one(), cfg)?.feasible
            }
            VerifyMode::Approximate => dm_bin_admissible(bin),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Maps bins of ids onto tasks, rejecting anything that is not a partition.
pub(crate) fn resolve_bins<'a>(ts: &'a TaskSet, part: &Partition) -> Result<Vec<Vec<&'a Task>>> {
    let mut seen = HashSet::new();
    let mut bins = Vec::with_capacity(part.bins.len());
    for (index, bin) in part.bins.iter().enumerate() {
        if bin.is_empty() {
            return Err(Error::Coverage(format!("bin {index} is empty")));
        }
        let mut tasks = Vec::with_capacity(bin.len());
        for &id in bin {
            let task = ts
                .task(id)
                .ok_or_else(|| Error::Coverage(format!("unknown task id {id} in bin {index}")))?;
            if !seen.insert(id) {
                return Err(Error::Coverage(format!("task {id} assigned twice")));
            }
            tasks.push(task);
        }
        bins.push(tasks);
    }
    if let Some(missing) = ts.iter().find(|t| !seen.contains(&t.id)) {
        return Err(Error::Coverage(format!(
            "task {} is not assigned",
            missing.id
        )));
    }
    Ok(bins)
}
