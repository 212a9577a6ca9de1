//! Event-driven preemptive EDF on one processor, synchronous periodic
//! arrivals. Used as an independent oracle for the demand test.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feasibility::FeasibilityConfig;
use crate::rational::Rational;
use crate::task::Task;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeadlineMiss {
    pub task: usize,
    pub deadline: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimTrace {
    pub horizon: Rational,
    pub misses: Vec<DeadlineMiss>,
    pub preemptions: u64,
    pub idle: Vec<(Rational, Rational)>,
    pub jobs_released: u64,
}

impl SimTrace {
    pub fn schedulable(&self) -> bool {
        self.misses.is_empty()
    }
}

/// Priority key: absolute deadline, then task id, then job index.
type JobKey = (Rational, usize, u64);

struct Pending {
    remaining: Rational,
    missed: bool,
}

/// Simulates EDF with every task releasing at 0 and then strictly every
/// `T`, on a processor executing `speed` units of work per time unit.
/// Reports every job whose deadline lies in `[0, horizon]` and which still
/// had work left at its deadline. Late jobs keep running.
pub fn simulate_edf_synchronous(
    tasks: &[Task],
    horizon: &Rational,
    speed: &Rational,
    cfg: &FeasibilityConfig,
) -> Result<SimTrace> {
    if !speed.is_positive() {
        return Err(Error::NonPositiveSpeed(Box::new(speed.clone())));
    }
    if !horizon.is_positive() {
        return Err(Error::NonPositiveHorizon(Box::new(horizon.clone())));
    }
    let mut next_release: Vec<Rational> = vec![Rational::zero(); tasks.len()];
    let mut job_index: Vec<u64> = vec![0; tasks.len()];
    let mut active: BTreeMap<JobKey, Pending> = BTreeMap::new();
    let mut running: Option<JobKey> = None;
    let mut trace = SimTrace {
        horizon: horizon.clone(),
        misses: Vec::new(),
        preemptions: 0,
        idle: Vec::new(),
        jobs_released: 0,
    };
    let mut now = Rational::zero();
    let mut events = 0u64;

    loop {
        events += 1;
        if events > cfg.event_cap {
            return Err(Error::EventExplosion { cap: cfg.event_cap });
        }

        for (i, task) in tasks.iter().enumerate() {
            while next_release[i] <= now && &next_release[i] <= horizon {
                let release = next_release[i].clone();
                let key = (&release + &task.d, task.id, job_index[i]);
                active.insert(
                    key,
                    Pending {
                        remaining: task.c.clone(),
                        missed: false,
                    },
                );
                job_index[i] += 1;
                trace.jobs_released += 1;
                next_release[i] = release + &task.t;
            }
        }

        for (key, job) in active.iter_mut() {
            if key.0 > now {
                break;
            }
            if !job.missed && job.remaining.is_positive() && &key.0 <= horizon {
                job.missed = true;
                trace.misses.push(DeadlineMiss {
                    task: key.1,
                    deadline: key.0.clone(),
                });
            }
        }

        if &now >= horizon {
            break;
        }

        let next_arrival = next_release
            .iter()
            .min()
            .cloned()
            .unwrap_or_else(|| horizon.clone())
            .min(horizon.clone());
        // a pending deadline is an event too, so misses are stamped on time
        let next_event = match active.keys().find(|k| k.0 > now) {
            Some(k) if k.0 < next_arrival => k.0.clone(),
            _ => next_arrival.clone(),
        };

        let Some(mut entry) = active.first_entry() else {
            trace.idle.push((now.clone(), next_arrival.clone()));
            running = None;
            now = next_arrival;
            continue;
        };

        if let Some(prev) = &running {
            if prev != entry.key() {
                trace.preemptions += 1;
            }
        }

        let job = entry.get_mut();
        let completion = &now + &job.remaining / speed;
        if completion <= next_event {
            now = completion;
            entry.remove();
            running = None;
        } else {
            job.remaining -= &((&next_event - &now) * speed);
            running = Some(entry.key().clone());
            now = next_event;
        }
    }

    trace
        .misses
        .sort_by(|a, b| (&a.deadline, a.task).cmp(&(&b.deadline, b.task)));
    Ok(trace)
}
