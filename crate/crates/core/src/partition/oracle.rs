//! Exhaustive search for the minimum number of processors.
//!
//! Set partitions are enumerated as restricted-growth strings (task `k`
//! goes to an already used bin or to the next fresh one), with the bin
//! count bounded by `m` for `m = ceil(U), ceil(U)+1, ...`. The first `m`
//! that admits a partition is optimal. Feasibility is monotone under
//! removing tasks, so a branch is cut as soon as the bin it extends becomes
//! infeasible. Subset verdicts are memoized by bitmask.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::feasibility::{edf_feasible_exact, FeasibilityConfig, VerifyMode};
use crate::partition::{dm_bin_admissible, ensure_valid, Algorithm, Partition};
use crate::rational::Rational;
use crate::task::{Task, TaskSet};

pub const DEFAULT_N_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub m_star: usize,
    pub witness: Partition,
    pub nodes_explored: u64,
}

pub fn optimal_partition(
    ts: &TaskSet,
    mode: VerifyMode,
    n_cap: usize,
    cfg: &FeasibilityConfig,
) -> Result<OracleResult> {
    ensure_valid(ts)?;
    let n = ts.len();
    if n > n_cap || n > 64 {
        return Err(Error::CapExceeded {
            n,
            cap: n_cap.min(64),
        });
    }

    // Dense tasks first: they constrain bins the most and prune early.
    let mut order: Vec<&Task> = ts.iter().collect();
    order.sort_by(|a, b| b.density().cmp(&a.density()).then(a.id.cmp(&b.id)));

    let mut search = Search {
        order: &order,
        mode,
        cfg,
        memo: HashMap::new(),
        nodes: 0,
    };
    let lower = ts
        .total_utilization()
        .ceil()
        .to_usize()
        .unwrap_or(usize::MAX)
        .max(1);
    for m in lower..=n {
        let mut bins: Vec<u64> = Vec::with_capacity(m);
        if search.place(0, &mut bins, m)? {
            let bins = bins
                .iter()
                .map(|&mask| {
                    (0..n)
                        .filter(|k| mask & (1 << k) != 0)
                        .map(|k| order[k].id)
                        .collect()
                })
                .collect();
            return Ok(OracleResult {
                m_star: m,
                witness: Partition::new(Algorithm::Oracle, None, bins),
                nodes_explored: search.nodes,
            });
        }
    }
    unreachable!("one task per processor is always feasible for a validated set")
}

struct Search<'a> {
    order: &'a [&'a Task],
    mode: VerifyMode,
    cfg: &'a FeasibilityConfig,
    memo: HashMap<u64, bool>,
    nodes: u64,
}

impl Search<'_> {
    fn place(&mut self, k: usize, bins: &mut Vec<u64>, limit: usize) -> Result<bool> {
        self.nodes += 1;
        if k == self.order.len() {
            return Ok(true);
        }
        let bit = 1u64 << k;
        for b in 0..bins.len() {
            let extended = bins[b] | bit;
            if self.feasible(extended)? {
                bins[b] = extended;
                if self.place(k + 1, bins, limit)? {
                    return Ok(true);
                }
                bins[b] &= !bit;
            }
        }
        if bins.len() < limit {
            bins.push(bit);
            if self.place(k + 1, bins, limit)? {
                return Ok(true);
            }
            bins.pop();
        }
        Ok(false)
    }

    fn feasible(&mut self, mask: u64) -> Result<bool> {
        if let Some(&v) = self.memo.get(&mask) {
            return Ok(v);
        }
        let tasks: Vec<&Task> = (0..self.order.len())
            .filter(|k| mask & (1 << k) != 0)
            .map(|k| self.order[k])
            .collect();
        let verdict = match self.mode {
            VerifyMode::Exact => {
                let owned: Vec<Task> = tasks.iter().map(|t| (*t).clone()).collect();
                edf_feasible_exact(&owned, &Rational::one(), self.cfg)?.feasible
            }
            VerifyMode::Approximate => dm_bin_admissible(&tasks),
        };
        self.memo.insert(mask, verdict);
        Ok(verdict)
    }
}
