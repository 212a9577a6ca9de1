//! Sporadic task model: tasks, task sets, demand bound functions and the
//! metrics that parameterize the approximation guarantees.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

/// A sporadic task with worst-case execution time `c`, relative deadline `d`
/// and minimum inter-arrival time `t`.
///
/// `id` is assigned when the task set is built (input order) and survives
/// sorting, transforms and partitioning.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Task {
    pub id: usize,
    pub c: Rational,
    pub d: Rational,
    pub t: Rational,
}

impl Task {
    pub fn new(id: usize, c: Rational, d: Rational, t: Rational) -> Self {
        Task { id, c, d, t }
    }

    pub fn utilization(&self) -> Rational {
        &self.c / &self.t
    }

    /// `c / min(t, d)`, the per-task term of gamma.
    pub fn density(&self) -> Rational {
        &self.c / std::cmp::min(&self.t, &self.d)
    }

    /// Exact demand bound function: `max(0, floor((t - D)/T) + 1) * C`.
    pub fn dbf(&self, at: &Rational) -> Rational {
        if at < &self.d {
            return Rational::zero();
        }
        let jobs = ((at - &self.d) / &self.t).floor() + 1;
        Rational::from(jobs) * &self.c
    }

    /// Linear upper approximation of [`Task::dbf`]: zero before the
    /// deadline, `((t - D)/T + 1) * C` from the deadline on.
    pub fn dbf_star(&self, at: &Rational) -> Rational {
        if at < &self.d {
            return Rational::zero();
        }
        ((at - &self.d) / &self.t + Rational::one()) * &self.c
    }

    /// Deadline/period tightening onto an implicit-deadline task:
    /// both become `min(D, T)`, `C` is kept.
    pub fn dagger(&self) -> Task {
        let tight = std::cmp::min(&self.d, &self.t).clone();
        Task {
            id: self.id,
            c: self.c.clone(),
            d: tight.clone(),
            t: tight,
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "tau{}(C={}, D={}, T={})",
            self.id, self.c, self.d, self.t
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeadlineClass {
    Implicit,
    Constrained,
    Arbitrary,
}

impl fmt::Display for DeadlineClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeadlineClass::Implicit => "implicit",
            DeadlineClass::Constrained => "constrained",
            DeadlineClass::Arbitrary => "arbitrary",
        })
    }
}

impl std::str::FromStr for DeadlineClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "implicit" => Ok(DeadlineClass::Implicit),
            "constrained" => Ok(DeadlineClass::Constrained),
            "arbitrary" => Ok(DeadlineClass::Arbitrary),
            other => Err(format!("unknown deadline class {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    EmptySet,
    DuplicateId,
    NonPositiveExecution,
    NonPositiveDeadline,
    NonPositivePeriod,
    /// `C/T > 1`
    UtilizationAboveOne,
    /// `C/D > 1`
    DensityAboveOne,
}

/// One breach of the task model assumptions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Task id the breach refers to; `None` for set-level breaches.
    pub task: Option<usize>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::EmptySet => "task set is empty",
            ViolationKind::DuplicateId => "duplicate task id",
            ViolationKind::NonPositiveExecution => "C must be > 0",
            ViolationKind::NonPositiveDeadline => "D must be > 0",
            ViolationKind::NonPositivePeriod => "T must be > 0",
            ViolationKind::UtilizationAboveOne => "C/T > 1",
            ViolationKind::DensityAboveOne => "C/D > 1",
        };
        match self.task {
            Some(id) => write!(f, "task {id}: {what}"),
            None => f.write_str(what),
        }
    }
}

/// An ordered collection of tasks with a name.
///
/// Construction does not enforce the model assumptions so that degenerate
/// sets can still be loaded and inspected; call [`TaskSet::validate`] (the
/// solver entry points do) to check them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskSet {
    pub name: String,
    pub tasks: Vec<Task>,
}

impl TaskSet {
    pub fn new(name: impl Into<String>, tasks: Vec<Task>) -> Self {
        TaskSet {
            name: name.into(),
            tasks,
        }
    }

    /// Builds a set from `(C, D, T)` triples, assigning ids in order.
    pub fn from_params<I>(name: impl Into<String>, params: I) -> Self
    where
        I: IntoIterator<Item = (Rational, Rational, Rational)>,
    {
        let tasks = params
            .into_iter()
            .enumerate()
            .map(|(id, (c, d, t))| Task::new(id, c, d, t))
            .collect();
        TaskSet::new(name, tasks)
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Task> {
        self.tasks.iter()
    }

    pub fn task(&self, id: usize) -> Option<&Task> {
        self.tasks.iter().find(|t| t.id == id)
    }

    pub fn total_utilization(&self) -> Rational {
        total_utilization(&self.tasks)
    }

    /// `max over tasks of max(T/D, 1)`.
    pub fn lambda(&self) -> Rational {
        self.tasks
            .iter()
            .map(|t| std::cmp::max(&t.t / &t.d, Rational::one()))
            .max()
            .unwrap_or_else(Rational::one)
    }

    /// `max over tasks of C / min(T, D)`.
    pub fn gamma(&self) -> Rational {
        self.tasks
            .iter()
            .map(Task::density)
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn dagger(&self) -> TaskSet {
        TaskSet::new(
            self.name.clone(),
            self.tasks.iter().map(Task::dagger).collect(),
        )
    }

    pub fn classify(&self) -> DeadlineClass {
        classify(&self.tasks)
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.tasks.is_empty() {
            out.push(Violation {
                task: None,
                kind: ViolationKind::EmptySet,
            });
        }
        let mut seen = HashSet::new();
        for task in &self.tasks {
            let mut push = |kind| {
                out.push(Violation {
                    task: Some(task.id),
                    kind,
                })
            };
            if !seen.insert(task.id) {
                push(ViolationKind::DuplicateId);
            }
            let c_ok = task.c.is_positive();
            let d_ok = task.d.is_positive();
            let t_ok = task.t.is_positive();
            if !c_ok {
                push(ViolationKind::NonPositiveExecution);
            }
            if !d_ok {
                push(ViolationKind::NonPositiveDeadline);
            }
            if !t_ok {
                push(ViolationKind::NonPositivePeriod);
            }
            if t_ok && task.c > task.t {
                push(ViolationKind::UtilizationAboveOne);
            }
            if d_ok && task.c > task.d {
                push(ViolationKind::DensityAboveOne);
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }
}

impl<'a> IntoIterator for &'a TaskSet {
    type Item = &'a Task;
    type IntoIter = std::slice::Iter<'a, Task>;

    fn into_iter(self) -> Self::IntoIter {
        self.tasks.iter()
    }
}

pub fn total_utilization<'a, I>(tasks: I) -> Rational
where
    I: IntoIterator<Item = &'a Task>,
{
    tasks.into_iter().map(Task::utilization).sum()
}

pub fn classify<'a, I>(tasks: I) -> DeadlineClass
where
    I: IntoIterator<Item = &'a Task>,
{
    let mut class = DeadlineClass::Implicit;
    for task in tasks {
        if task.d > task.t {
            return DeadlineClass::Arbitrary;
        }
        if task.d < task.t {
            class = DeadlineClass::Constrained;
        }
    }
    class
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn task(c: Rational, d: Rational, t: Rational) -> Task {
        Task::new(0, c, d, t)
    }

    fn ints(c: i64, d: i64, t: i64) -> Task {
        task(q(c, 1), q(d, 1), q(t, 1))
    }

    fn set(params: &[(i64, i64, i64)]) -> TaskSet {
        TaskSet::from_params(
            "t",
            params.iter().map(|&(c, d, t)| (q(c, 1), q(d, 1), q(t, 1))),
        )
    }

    #[test]
    fn utilization_examples() {
        assert_eq!(ints(1, 2, 4).utilization(), q(1, 4));
        assert_eq!(ints(3, 3, 3).utilization(), q(1, 1));
        assert_eq!(
            task(q(1, 4), q(1, 1), q(4096, 1)).utilization(),
            q(1, 16384)
        );
    }

    #[test]
    fn dbf_examples() {
        let tau = ints(2, 5, 7);
        assert_eq!(tau.dbf(&q(4, 1)), q(0, 1));
        assert_eq!(tau.dbf(&q(5, 1)), q(2, 1));
        assert_eq!(tau.dbf(&q(12, 1)), q(4, 1));
        assert_eq!(tau.dbf(&q(11, 1)), q(2, 1));
        assert_eq!(tau.dbf(&q(23, 2)), q(2, 1));
    }

    #[test]
    fn dbf_star_examples() {
        let tau = ints(2, 5, 7);
        assert_eq!(tau.dbf_star(&q(4, 1)), q(0, 1));
        assert_eq!(tau.dbf_star(&q(5, 1)), q(2, 1));
        assert_eq!(tau.dbf_star(&q(6, 1)), q(16, 7));
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(set(&[(1, 2, 4)]).lambda(), q(2, 1));
        assert_eq!(set(&[(1, 3, 3)]).lambda(), q(1, 1));
        assert_eq!(set(&[(1, 4, 2), (1, 1, 5)]).lambda(), q(5, 1));
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(set(&[(1, 2, 4)]).gamma(), q(1, 2));
        assert_eq!(set(&[(3, 3, 3)]).gamma(), q(1, 1));
        assert_eq!(set(&[(1, 4, 2), (1, 8, 8)]).gamma(), q(1, 2));
    }

    #[test]
    fn dagger_examples() {
        assert_eq!(ints(2, 4, 10).dagger(), ints(2, 4, 4));
        assert_eq!(ints(1, 5, 3).dagger(), ints(1, 3, 3));
        assert_eq!(ints(1, 3, 3).dagger(), ints(1, 3, 3));
        let ts = set(&[(2, 4, 10), (1, 5, 3)]);
        let ids: Vec<_> = ts.dagger().iter().map(|t| t.id).collect();
        assert_eq!(ids, vec![0, 1]);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(set(&[(1, 3, 3)]).classify(), DeadlineClass::Implicit);
        assert_eq!(set(&[(1, 2, 3)]).classify(), DeadlineClass::Constrained);
        assert_eq!(set(&[(1, 5, 3)]).classify(), DeadlineClass::Arbitrary);
        assert_eq!(
            set(&[(1, 2, 3), (1, 5, 3)]).classify(),
            DeadlineClass::Arbitrary
        );
    }

    #[test]
    fn validate_examples() {
        assert!(set(&[(1, 2, 4)]).validate().is_empty());
        assert_eq!(
            set(&[(5, 2, 4)]).validate(),
            vec![
                Violation {
                    task: Some(0),
                    kind: ViolationKind::UtilizationAboveOne
                },
                Violation {
                    task: Some(0),
                    kind: ViolationKind::DensityAboveOne
                }
            ]
        );
        assert_eq!(
            set(&[(5, 6, 4)]).validate(),
            vec![Violation {
                task: Some(0),
                kind: ViolationKind::UtilizationAboveOne
            }]
        );
    }

    #[test]
    fn validate_reports_every_breach() {
        let ts = TaskSet::new(
            "bad",
            vec![
                Task::new(0, q(0, 1), q(1, 1), q(1, 1)),
                Task::new(0, q(1, 1), q(-1, 1), q(1, 1)),
            ],
        );
        let kinds: Vec<_> = ts.validate().into_iter().map(|v| v.kind).collect();
        assert_eq!(
            kinds,
            vec![
                ViolationKind::NonPositiveExecution,
                ViolationKind::DuplicateId,
                ViolationKind::NonPositiveDeadline,
            ]
        );
        assert_eq!(
            TaskSet::new("empty", vec![]).validate()[0].kind,
            ViolationKind::EmptySet
        );
    }
}
