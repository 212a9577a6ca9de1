//! Uniprocessor EDF feasibility.
//!
//! The exact test is the processor-demand criterion: a set is EDF-feasible
//! on a processor of speed `s` iff `sum dbf(tau_i, t) <= s * t` for every
//! `t >= 0`. The demand only changes at absolute deadlines of the
//! synchronous arrival pattern, so the check sweeps those points up to a
//! finite horizon (see [`test_horizon`]).
//!
//! The sweep runs on integers: all parameters are rescaled by the lcm of
//! their denominators and the demand is accumulated incrementally, one
//! deadline event at a time, from a heap of per-task next deadlines.

mod lemma1;
mod sim;
mod verify;

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::task::{total_utilization, Task};

pub use lemma1::{lemma1_feasible, lemma1_shape};
pub use sim::{simulate_edf_synchronous, DeadlineMiss, SimTrace};
pub use verify::{verify_partition, VerifyMode};

/// Limits that keep the exact test and the simulator from running away.
#[derive(Clone, Debug)]
pub struct FeasibilityConfig {
    /// Maximum number of distinct deadline points swept.
    pub point_cap: u64,
    /// Maximum hyperperiod accepted when total (speed-scaled) utilization is 1.
    pub hyperperiod_cap: Rational,
    /// Maximum number of simulator events.
    pub event_cap: u64,
    /// Accept a set early when the linear demand bound already fits under
    /// the supply line. Sound, and skips the sweep for most feasible sets.
    pub linear_shortcut: bool,
}

impl Default for FeasibilityConfig {
    fn default() -> Self {
        FeasibilityConfig {
            point_cap: 10_000_000,
            hyperperiod_cap: Rational::from_integer(BigInt::one() << 64),
            event_cap: 50_000_000,
            linear_shortcut: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityVerdict {
    pub feasible: bool,
    /// Smallest deadline point where demand exceeds supply.
    pub witness: Option<Rational>,
    pub horizon: Rational,
    pub points_checked: u64,
}

/// Total demand of `tasks` in any window of length `at`.
pub fn demand(tasks: &[Task], at: &Rational) -> Rational {
    tasks.iter().map(|t| t.dbf(at)).sum()
}

/// Upper bound `L` such that checking every deadline point in `(0, L]`
/// decides feasibility at the given speed.
///
/// With `U/s < 1` this is `max(D_max, sum (T_i - D_i) u_i/s / (1 - U/s))`;
/// with `U/s = 1` it is the hyperperiod plus `D_max`. With `U/s > 1` the
/// set is infeasible and the returned bound `max(D_max, sum u_i D_i / (U - s))`
/// is a point by which demand has provably overtaken supply.
pub fn test_horizon(tasks: &[Task], speed: &Rational, cfg: &FeasibilityConfig) -> Result<Rational> {
    if !speed.is_positive() {
        return Err(Error::NonPositiveSpeed(Box::new(speed.clone())));
    }
    let d_max = match tasks.iter().map(|t| &t.d).max() {
        Some(d) => d.clone(),
        None => return Ok(Rational::zero()),
    };
    let util = total_utilization(tasks);
    match util.cmp(speed) {
        std::cmp::Ordering::Less => {
            let slack: Rational = tasks.iter().map(|t| (&t.t - &t.d) * t.utilization()).sum();
            let bound = slack / (speed - &util);
            Ok(d_max.max(bound))
        }
        std::cmp::Ordering::Equal => {
            let hyper = hyperperiod(tasks);
            if hyper > cfg.hyperperiod_cap {
                return Err(Error::HorizonOverflow {
                    hyperperiod: Box::new(hyper),
                    cap: Box::new(cfg.hyperperiod_cap.clone()),
                });
            }
            Ok(hyper + d_max)
        }
        std::cmp::Ordering::Greater => {
            let weighted: Rational = tasks.iter().map(|t| t.utilization() * &t.d).sum();
            Ok(d_max.max(weighted / (util - speed)))
        }
    }
}

/// Least common multiple of all periods.
pub fn hyperperiod(tasks: &[Task]) -> Rational {
    let mut iter = tasks.iter();
    let first = match iter.next() {
        Some(t) => t.t.clone(),
        None => return Rational::zero(),
    };
    iter.fold(first, |acc, t| acc.lcm(&t.t))
}

/// Sorted, deduplicated absolute deadlines `k*T_i + D_i <= horizon` of the
/// synchronous arrival pattern.
pub fn deadline_points(tasks: &[Task], horizon: &Rational, cap: u64) -> Result<Vec<Rational>> {
    let mut count = BigInt::from(0);
    for task in tasks {
        if &task.d <= horizon {
            count += ((horizon - &task.d) / &task.t).floor() + 1;
        }
    }
    if count > BigInt::from(cap) {
        return Err(Error::PointExplosion {
            cap,
            horizon: Box::new(horizon.clone()),
        });
    }
    let mut points = Vec::with_capacity(count.to_usize().unwrap_or(0));
    for task in tasks {
        let mut at = task.d.clone();
        while &at <= horizon {
            points.push(at.clone());
            at += &task.t;
        }
    }
    points.sort();
    points.dedup();
    Ok(points)
}

/// Exact EDF feasibility on one processor running at `speed`.
pub fn edf_feasible_exact(
    tasks: &[Task],
    speed: &Rational,
    cfg: &FeasibilityConfig,
) -> Result<FeasibilityVerdict> {
    let horizon = test_horizon(tasks, speed, cfg)?;
    if tasks.is_empty() {
        return Ok(FeasibilityVerdict {
            feasible: true,
            witness: None,
            horizon,
            points_checked: 0,
        });
    }
    let util = total_utilization(tasks);
    if cfg.linear_shortcut && &util <= speed && linear_demand_fits(tasks, speed) {
        return Ok(FeasibilityVerdict {
            feasible: true,
            witness: None,
            horizon,
            points_checked: 0,
        });
    }
    let scaled = ScaledTasks::new(tasks, speed, &horizon);
    let outcome = match scaled.to_i128() {
        Some(small) => small.sweep(cfg.point_cap),
        None => None,
    };
    let outcome = match outcome {
        Some(o) => o,
        None => scaled
            .sweep(cfg.point_cap)
            .expect("arbitrary precision sweep cannot overflow"),
    };
    match outcome {
        SweepOutcome::Exploded => Err(Error::PointExplosion {
            cap: cfg.point_cap,
            horizon: Box::new(horizon),
        }),
        SweepOutcome::Fits { points } => {
            // A sweep that never fails can only happen when U <= s.
            debug_assert!(util <= *speed);
            Ok(FeasibilityVerdict {
                feasible: true,
                witness: None,
                horizon,
                points_checked: points,
            })
        }
        SweepOutcome::Fails { at, points } => Ok(FeasibilityVerdict {
            feasible: false,
            witness: Some(Rational::new(at, scaled.scale.clone())),
            horizon,
            points_checked: points,
        }),
    }
}

/// Sufficient condition: the piecewise-linear `sum dbf*` stays under
/// `s * t`. Between deadlines its slope is at most `U <= s`, so only the
/// deadlines themselves need checking.
fn linear_demand_fits(tasks: &[Task], speed: &Rational) -> bool {
    tasks.iter().all(|probe| {
        let approx: Rational = tasks.iter().map(|t| t.dbf_star(&probe.d)).sum();
        approx <= speed * &probe.d
    })
}

enum SweepOutcome<I> {
    Fits { points: u64 },
    Fails { at: I, points: u64 },
    Exploded,
}

trait SweepInt: Clone + Ord + Add<Output = Self> {
    fn checked_add(&self, other: &Self) -> Option<Self>;
    fn checked_mul(&self, other: &Self) -> Option<Self>;
}

impl SweepInt for i128 {
    fn checked_add(&self, other: &Self) -> Option<Self> {
        i128::checked_add(*self, *other)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        i128::checked_mul(*self, *other)
    }
}

impl SweepInt for BigInt {
    fn checked_add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
}

/// Tasks rescaled to integer time units of `1/scale`.
struct ScaledTasks<I> {
    scale: BigInt,
    /// (c, d, t) per task
    params: Vec<(I, I, I)>,
    limit: I,
    speed_num: I,
    speed_den: I,
}

impl ScaledTasks<BigInt> {
    fn new(tasks: &[Task], speed: &Rational, horizon: &Rational) -> Self {
        let scale = tasks.iter().fold(BigInt::one(), |acc, t| {
            acc.lcm(t.c.denom()).lcm(t.d.denom()).lcm(t.t.denom())
        });
        let to_int = |r: &Rational| {
            let v = r * Rational::from_integer(scale.clone());
            debug_assert!(v.is_integer());
            v.floor()
        };
        let params = tasks
            .iter()
            .map(|t| (to_int(&t.c), to_int(&t.d), to_int(&t.t)))
            .collect();
        let limit = (horizon * Rational::from_integer(scale.clone())).floor();
        ScaledTasks {
            scale,
            params,
            limit,
            speed_num: speed.numer().clone(),
            speed_den: speed.denom().clone(),
        }
    }

    fn to_i128(&self) -> Option<ScaledTasks<i128>> {
        let conv = |v: &BigInt| v.to_i128();
        let params = self
            .params
            .iter()
            .map(|(c, d, t)| Some((conv(c)?, conv(d)?, conv(t)?)))
            .collect::<Option<Vec<_>>>()?;
        Some(ScaledTasks {
            scale: self.scale.clone(),
            params,
            limit: conv(&self.limit)?,
            speed_num: conv(&self.speed_num)?,
            speed_den: conv(&self.speed_den)?,
        })
    }
}

impl<I: SweepInt> ScaledTasks<I> {
    /// `None` on arithmetic overflow.
    fn sweep(&self, cap: u64) -> Option<SweepOutcome<BigInt>>
    where
        I: Into<BigInt>,
    {
        let mut heap: BinaryHeap<Reverse<(I, usize)>> = self
            .params
            .iter()
            .enumerate()
            .filter(|(_, (_, d, _))| *d <= self.limit)
            .map(|(i, (_, d, _))| Reverse((d.clone(), i)))
            .collect();
        let mut demand: Option<I> = None;
        let mut points = 0u64;
        while let Some(Reverse((at, _))) = heap.peek().cloned() {
            while let Some(Reverse((next, idx))) = heap.peek().cloned() {
                if next != at {
                    break;
                }
                heap.pop();
                let (c, _, t) = &self.params[idx];
                demand = Some(match demand {
                    Some(acc) => acc.checked_add(c)?,
                    None => c.clone(),
                });
                let following = next.checked_add(t)?;
                if following <= self.limit {
                    heap.push(Reverse((following, idx)));
                }
            }
            points += 1;
            if points > cap {
                return Some(SweepOutcome::Exploded);
            }
            let demand_scaled = demand.as_ref()?.checked_mul(&self.speed_den)?;
            let supply_scaled = at.checked_mul(&self.speed_num)?;
            if demand_scaled > supply_scaled {
                return Some(SweepOutcome::Fails {
                    at: at.into(),
                    points,
                });
            }
        }
        Some(SweepOutcome::Fits { points })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::task::TaskSet;

    fn set(params: &[(Rational, Rational, Rational)]) -> TaskSet {
        TaskSet::from_params("t", params.iter().cloned())
    }

    fn ints(params: &[(i64, i64, i64)]) -> TaskSet {
        set(&params
            .iter()
            .map(|&(c, d, t)| (q(c, 1), q(d, 1), q(t, 1)))
            .collect::<Vec<_>>())
    }

    fn one() -> Rational {
        Rational::one()
    }

    #[test]
    fn horizon_examples() {
        let cfg = FeasibilityConfig::default();
        assert_eq!(
            test_horizon(&ints(&[(1, 2, 2)]).tasks, &one(), &cfg).unwrap(),
            q(2, 1)
        );
        assert_eq!(
            test_horizon(&ints(&[(1, 1, 2), (1, 2, 4)]).tasks, &one(), &cfg).unwrap(),
            q(4, 1)
        );
        assert_eq!(
            test_horizon(&ints(&[(1, 1, 1)]).tasks, &one(), &cfg).unwrap(),
            q(2, 1)
        );
    }

    #[test]
    fn horizon_overflow_is_reported() {
        let cfg = FeasibilityConfig {
            hyperperiod_cap: q(100, 1),
            ..FeasibilityConfig::default()
        };
        // U = 1/2 + 1/2 with coprime periods: hyperperiod 101 * 103 > 100.
        let ts = set(&[
            (q(101, 2), q(101, 1), q(101, 1)),
            (q(103, 2), q(103, 1), q(103, 1)),
        ]);
        assert_eq!(ts.total_utilization(), one());
        let err = test_horizon(&ts.tasks, &one(), &cfg).unwrap_err();
        assert!(matches!(err, Error::HorizonOverflow { .. }));
    }

    #[test]
    fn deadline_point_examples() {
        let pts = deadline_points(&ints(&[(1, 2, 3)]).tasks, &q(9, 1), 100).unwrap();
        assert_eq!(pts, vec![q(2, 1), q(5, 1), q(8, 1)]);
        let pts = deadline_points(&ints(&[(1, 2, 3), (1, 2, 6)]).tasks, &q(8, 1), 100).unwrap();
        assert_eq!(pts, vec![q(2, 1), q(5, 1), q(8, 1)]);
        let pts = deadline_points(&ints(&[(1, 2, 3)]).tasks, &q(0, 1), 100).unwrap();
        assert!(pts.is_empty());
    }

    #[test]
    fn deadline_points_cap() {
        let err = deadline_points(&ints(&[(1, 1, 1)]).tasks, &q(1000, 1), 10).unwrap_err();
        assert!(matches!(err, Error::PointExplosion { cap: 10, .. }));
    }

    #[test]
    fn exact_examples() {
        let cfg = FeasibilityConfig::default();
        let v = edf_feasible_exact(&ints(&[(1, 1, 1)]).tasks, &one(), &cfg).unwrap();
        assert!(v.feasible);
        let v = edf_feasible_exact(&ints(&[(1, 1, 2), (1, 1, 2)]).tasks, &one(), &cfg).unwrap();
        assert!(!v.feasible);
        assert_eq!(v.witness, Some(q(1, 1)));

        let gap = ints(&[(1, 1, 6), (2, 2, 6), (6, 6, 6)]);
        let v = edf_feasible_exact(&gap.tasks, &q(3, 2), &cfg).unwrap();
        assert!(v.feasible);
        let v = edf_feasible_exact(&gap.tasks, &one(), &cfg).unwrap();
        assert!(!v.feasible);
        // Demand at t=1 is 1 <= 1; at t=2 it is 3 > 2.
        assert_eq!(v.witness, Some(q(2, 1)));
    }

    #[test]
    fn shortcut_and_sweep_agree_on_feasible_set() {
        let ts = ints(&[(1, 2, 4), (1, 3, 6), (2, 8, 8)]);
        let fast = edf_feasible_exact(&ts.tasks, &one(), &FeasibilityConfig::default()).unwrap();
        let slow = edf_feasible_exact(
            &ts.tasks,
            &one(),
            &FeasibilityConfig {
                linear_shortcut: false,
                ..FeasibilityConfig::default()
            },
        )
        .unwrap();
        assert!(fast.feasible && slow.feasible);
        assert!(slow.points_checked > 0);
    }

    #[test]
    fn overload_reports_smallest_witness() {
        // U = 3/2 > 1 but the first violation happens late.
        let ts = ints(&[(1, 10, 2), (1, 10, 2), (1, 10, 2)]);
        let v = edf_feasible_exact(&ts.tasks, &one(), &FeasibilityConfig::default()).unwrap();
        assert!(!v.feasible);
        let w = v.witness.unwrap();
        assert!(demand(&ts.tasks, &w) > w);
        // brute force over integer points below the witness
        for t in 1..w.floor().to_i64().unwrap() {
            let t = q(t, 1);
            assert!(demand(&ts.tasks, &t) <= t);
        }
    }

    #[test]
    fn fractional_parameters_sweep() {
        let ts = set(&[(q(1, 3), q(1, 2), q(1, 1)), (q(1, 4), q(1, 3), q(5, 7))]);
        let v = edf_feasible_exact(
            &ts.tasks,
            &one(),
            &FeasibilityConfig {
                linear_shortcut: false,
                ..FeasibilityConfig::default()
            },
        )
        .unwrap();
        // demand at 1/2: 1/3 + 1/4 = 7/12 > 1/2
        assert!(!v.feasible);
        assert_eq!(v.witness, Some(q(1, 2)));
    }

    #[test]
    fn nonpositive_speed_rejected() {
        let ts = ints(&[(1, 1, 1)]);
        let err =
            edf_feasible_exact(&ts.tasks, &q(0, 1), &FeasibilityConfig::default()).unwrap_err();
        assert!(matches!(err, Error::NonPositiveSpeed(_)));
    }
}
