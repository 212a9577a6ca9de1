//! Greedy fitting on the tightened implicit-deadline set.
//!
//! Every task is replaced by `(C, min(D,T), min(D,T))`, which only makes
//! its timing stricter, and packed as a plain bin-packing item of size
//! `C / min(D,T)`. A bin whose sizes sum to at most 1 is EDF-feasible for
//! the tightened tasks, hence for the originals.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::partition::{ensure_valid, Algorithm, Partition, Strategy};
use crate::rational::Rational;
use crate::task::TaskSet;

/// Order in which tasks are offered to the bins.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DaggerOrder {
    #[default]
    Input,
    DecreasingUtilization,
}

pub fn dagger_greedy(ts: &TaskSet, fitting: Strategy) -> Result<Partition> {
    dagger_greedy_with(ts, fitting, DaggerOrder::Input)
}

pub fn dagger_greedy_with(
    ts: &TaskSet,
    fitting: Strategy,
    order: DaggerOrder,
) -> Result<Partition> {
    ensure_valid(ts)?;
    let mut items: Vec<(usize, Rational)> = ts
        .dagger()
        .iter()
        .map(|t| (t.id, t.utilization()))
        .collect();
    if order == DaggerOrder::DecreasingUtilization {
        // stable: equal sizes keep input order
        items.sort_by(|a, b| b.1.cmp(&a.1));
    }

    let one = Rational::one();
    let mut loads: Vec<Rational> = Vec::new();
    let mut bins: Vec<Vec<usize>> = Vec::new();
    for (id, size) in items {
        let fits = loads
            .iter()
            .enumerate()
            .filter(|(_, load)| *load + &size <= one);
        let chosen = match fitting {
            Strategy::FirstFit => fits.map(|(i, _)| i).next(),
            // ties go to the lowest bin index
            Strategy::BestFit => fits
                .fold(
                    None,
                    |best: Option<(usize, &Rational)>, (i, load)| match best {
                        Some((_, b)) if load <= b => best,
                        _ => Some((i, load)),
                    },
                )
                .map(|(i, _)| i),
            Strategy::WorstFit => fits
                .fold(
                    None,
                    |best: Option<(usize, &Rational)>, (i, load)| match best {
                        Some((_, b)) if load >= b => best,
                        _ => Some((i, load)),
                    },
                )
                .map(|(i, _)| i),
        };
        match chosen {
            Some(i) => {
                loads[i] += &size;
                bins[i].push(id);
            }
            None => {
                loads.push(size);
                bins.push(vec![id]);
            }
        }
    }
    Ok(Partition::new(Algorithm::Dagger, Some(fitting), bins))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn implicit(us: &[(i64, i64)]) -> TaskSet {
        TaskSet::from_params("d", us.iter().map(|&(n, d)| (q(n, d), q(1, 1), q(1, 1))))
    }

    #[test]
    fn first_fit_example() {
        let ts = implicit(&[(3, 5), (3, 5), (2, 5)]);
        let p = dagger_greedy(&ts, Strategy::FirstFit).unwrap();
        assert_eq!(p.bins, vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn single_task() {
        let ts = implicit(&[(1, 2)]);
        assert_eq!(dagger_greedy(&ts, Strategy::WorstFit).unwrap().m, 1);
    }

    #[test]
    fn best_and_worst_fit_choices() {
        // loads after three items: [1/2], [7/10] ; next item 1/5 fits both
        let ts = implicit(&[(1, 2), (7, 10), (1, 5)]);
        let bf = dagger_greedy(&ts, Strategy::BestFit).unwrap();
        let wf = dagger_greedy(&ts, Strategy::WorstFit).unwrap();
        assert_eq!(bf.bins, vec![vec![0], vec![1, 2]]);
        assert_eq!(wf.bins, vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn sizes_come_from_the_tightened_tasks() {
        // C=1, D=2, T=8: u = 1/8 but u-dagger = 1/2
        let ts = TaskSet::from_params(
            "c",
            [
                (q(1, 1), q(2, 1), q(8, 1)),
                (q(1, 1), q(2, 1), q(8, 1)),
                (q(1, 1), q(2, 1), q(8, 1)),
            ],
        );
        assert_eq!(dagger_greedy(&ts, Strategy::FirstFit).unwrap().m, 2);
    }

    #[test]
    fn decreasing_order() {
        let ts = implicit(&[(1, 5), (1, 2), (3, 5), (1, 2)]);
        let p = dagger_greedy_with(&ts, Strategy::FirstFit, DaggerOrder::DecreasingUtilization)
            .unwrap();
        // 3/5, 1/2, 1/2, 1/5 -> [3/5, 1/5], [1/2, 1/2]
        assert_eq!(p.bins, vec![vec![0, 2], vec![1, 3]]);
    }
}
