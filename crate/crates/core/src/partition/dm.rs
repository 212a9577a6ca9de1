//! Deadline-monotonic partitioning.

use crate::error::Result;
use crate::partition::{ensure_valid, Algorithm, Partition, Strategy};
use crate::rational::Rational;
use crate::task::{Task, TaskSet};

/// Admission test for adding `cand` to a processor already holding `bin`
/// (all of which have deadlines no later than `cand.d`):
///
/// * `C + sum dbf*(tau_j, D) <= D`
/// * `u + sum u_j <= 1`
pub fn dm_admits<'a, I>(bin: I, cand: &Task) -> bool
where
    I: IntoIterator<Item = &'a Task>,
{
    let mut demand = cand.c.clone();
    let mut util = cand.utilization();
    for task in bin {
        demand += task.dbf_star(&cand.d);
        util += task.utilization();
    }
    demand <= cand.d && util <= Rational::one()
}

/// Re-checks a whole bin against the admission test, adding its tasks one
/// at a time in deadline-monotonic order.
pub fn dm_bin_admissible(bin: &[&Task]) -> bool {
    let mut ordered = bin.to_vec();
    ordered.sort_by(|a, b| dm_order(a, b));
    (0..ordered.len()).all(|k| dm_admits(ordered[..k].iter().copied(), ordered[k]))
}

/// Nondecreasing relative deadline; equal deadlines keep input (id) order.
pub fn dm_order(a: &Task, b: &Task) -> std::cmp::Ordering {
    (&a.d, a.id).cmp(&(&b.d, b.id))
}

pub fn dm_partition(ts: &TaskSet, strategy: Strategy) -> Result<Partition> {
    ensure_valid(ts)?;
    let mut order: Vec<&Task> = ts.iter().collect();
    order.sort_by(|a, b| dm_order(a, b));

    let mut bins: Vec<Vec<&Task>> = Vec::new();
    for task in order {
        let candidates = bins
            .iter()
            .enumerate()
            .filter(|(_, bin)| dm_admits(bin.iter().copied(), task));
        let chosen = match strategy {
            Strategy::FirstFit => candidates.map(|(i, _)| i).next(),
            Strategy::BestFit | Strategy::WorstFit => {
                let mut best: Option<(usize, Rational)> = None;
                for (i, bin) in candidates {
                    let load: Rational = bin.iter().map(|t| t.dbf_star(&task.d)).sum();
                    let better = match &best {
                        None => true,
                        Some((_, current)) => match strategy {
                            Strategy::BestFit => load > *current,
                            _ => load < *current,
                        },
                    };
                    if better {
                        best = Some((i, load));
                    }
                }
                best.map(|(i, _)| i)
            }
        };
        match chosen {
            Some(i) => bins[i].push(task),
            None => bins.push(vec![task]),
        }
    }
    let bins = bins
        .into_iter()
        .map(|bin| bin.into_iter().map(|t| t.id).collect())
        .collect();
    Ok(Partition::new(Algorithm::Dm, Some(strategy), bins))
}
