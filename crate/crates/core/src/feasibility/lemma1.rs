//! Closed-form feasibility for the common-deadline shape produced by the
//! vector-packing reduction: strictly constrained tasks sharing `D = 1`,
//! plus implicit-deadline tasks whose common period is an integer multiple
//! of every strict period. On such a set EDF is feasible iff the strict
//! tasks' execution times sum to at most 1 and total utilization is at
//! most 1.

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::task::{total_utilization, Task};

/// Splits `tasks` into (strict, implicit) if it has the common-deadline shape.
pub fn lemma1_shape(tasks: &[Task]) -> Result<(Vec<&Task>, Vec<&Task>)> {
    let one = Rational::one();
    let mut strict = Vec::new();
    let mut implicit = Vec::new();
    for task in tasks {
        if task.d == one && task.d < task.t {
            strict.push(task);
        } else if task.d == task.t {
            implicit.push(task);
        } else {
            return Err(Error::ShapeMismatch(format!(
                "{task} is neither strictly constrained with D = 1 nor implicit"
            )));
        }
    }
    if let Some(first) = implicit.first() {
        let period = &first.t;
        if let Some(other) = implicit.iter().find(|t| &t.t != period) {
            return Err(Error::ShapeMismatch(format!(
                "implicit tasks have different periods ({} and {})",
                period, other.t
            )));
        }
        if let Some(s) = strict.iter().find(|s| !(period / &s.t).is_integer()) {
            return Err(Error::ShapeMismatch(format!(
                "implicit period {} is not an integer multiple of {}",
                period, s.t
            )));
        }
    }
    Ok((strict, implicit))
}

pub fn lemma1_feasible(tasks: &[Task]) -> Result<bool> {
    let (strict, _) = lemma1_shape(tasks)?;
    let strict_exec: Rational = strict.iter().map(|t| &t.c).sum();
    Ok(strict_exec <= Rational::one() && total_utilization(tasks) <= Rational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::{edf_feasible_exact, FeasibilityConfig};
    use crate::rational::q;
    use crate::task::TaskSet;

    fn set(params: &[(Rational, Rational, Rational)]) -> TaskSet {
        TaskSet::from_params("l1", params.iter().cloned())
    }

    #[test]
    fn examples() {
        let a = set(&[
            (q(1, 2), q(1, 1), q(2, 1)),
            (q(1, 4), q(1, 1), q(4, 1)),
            (q(1, 1), q(4, 1), q(4, 1)),
        ]);
        assert!(lemma1_feasible(&a.tasks).unwrap());

        let b = set(&[(q(3, 4), q(1, 1), q(2, 1)), (q(1, 2), q(1, 1), q(4, 1))]);
        assert!(!lemma1_feasible(&b.tasks).unwrap());

        let c = set(&[
            (q(1, 2), q(1, 1), q(2, 1)),
            (q(1, 1), q(4, 1), q(4, 1)),
            (q(1, 1), q(4, 1), q(4, 1)),
        ]);
        assert!(lemma1_feasible(&c.tasks).unwrap());
        let exact =
            edf_feasible_exact(&c.tasks, &Rational::one(), &FeasibilityConfig::default()).unwrap();
        assert!(exact.feasible);
    }

    #[test]
    fn shape_mismatches() {
        let wrong_deadline = set(&[(q(1, 2), q(2, 1), q(3, 1))]);
        assert!(matches!(
            lemma1_feasible(&wrong_deadline.tasks),
            Err(Error::ShapeMismatch(_))
        ));
        let mixed_periods = set(&[(q(1, 2), q(4, 1), q(4, 1)), (q(1, 2), q(8, 1), q(8, 1))]);
        assert!(lemma1_feasible(&mixed_periods.tasks).is_err());
        let not_multiple = set(&[(q(1, 2), q(1, 1), q(3, 1)), (q(1, 2), q(4, 1), q(4, 1))]);
        assert!(lemma1_feasible(&not_multiple.tasks).is_err());
        let rational_multiple = set(&[(q(1, 2), q(1, 1), q(3, 2)), (q(1, 2), q(3, 1), q(3, 1))]);
        assert!(lemma1_feasible(&rational_multiple.tasks).is_ok());
    }
}
