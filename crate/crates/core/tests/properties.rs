use proptest::prelude::*;

use rtpack::bench::{
    check_bounds, emit_report, run_experiment, AlgorithmSpec, ExperimentConfig, InstanceSource,
    ReportFormat,
};
use rtpack::io::{parse_taskset, serialize_taskset};
use rtpack::partition::dm_bin_admissible;
use rtpack::{
    dagger_greedy, dm_partition, edf_feasible_exact, optimal_partition, q,
    simulate_edf_synchronous, verify_partition, Algorithm, FeasibilityConfig, Rational,
    Strategy as Fit, Task, TaskSet, VerifyMode,
};

fn cfg() -> FeasibilityConfig {
    FeasibilityConfig::default()
}

/// Valid task on a half-unit grid: C <= min(D, T).
fn task_params() -> impl Strategy<Value = (Rational, Rational, Rational)> {
    (1i64..=6, 0i64..=16, 0i64..=16).prop_map(|(c, dx, tx)| (q(c, 2), q(c + dx, 2), q(c + tx, 2)))
}

fn task_set(max: usize) -> impl Strategy<Value = TaskSet> {
    prop::collection::vec(task_params(), 1..=max).prop_map(|p| TaskSet::from_params("prop", p))
}

fn strategy() -> impl Strategy<Value = Fit> {
    prop::sample::select(Fit::ALL.to_vec())
}

fn point() -> impl Strategy<Value = Rational> {
    (0i64..=200, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

fn one() -> Rational {
    Rational::one()
}

/// Minimum processors by trying every assignment of tasks to `m` bins.
fn brute_force_min(ts: &TaskSet) -> usize {
    let n = ts.len();
    for m in 1..=n {
        let total = m.pow(n as u32);
        for code in 0..total {
            let mut bins: Vec<Vec<Task>> = vec![Vec::new(); m];
            let mut c = code;
            for t in &ts.tasks {
                bins[c % m].push(t.clone());
                c /= m;
            }
            if bins
                .iter()
                .all(|b| b.is_empty() || edf_feasible_exact(b, &one(), &cfg()).unwrap().feasible)
            {
                return m;
            }
        }
    }
    n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn dbf_is_bounded_by_its_linear_approximation((c, d, t) in task_params(), at in point()) {
        let task = Task::new(0, c, d, t);
        prop_assert!(task.dbf(&at) <= task.dbf_star(&at));
    }

    #[test]
    fn dbf_shape((c, d, t) in task_params(), a in point(), b in point()) {
        let task = Task::new(0, c.clone(), d.clone(), t.clone());
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(task.dbf(&lo) <= task.dbf(&hi));
        prop_assert!(task.dbf_star(&lo) <= task.dbf_star(&hi));
        prop_assert_eq!(task.dbf(&d), c.clone());
        prop_assert_eq!(task.dbf_star(&d), c.clone());
        if lo < d {
            prop_assert!(task.dbf(&lo).is_zero() && task.dbf_star(&lo).is_zero());
        }
        // one period later exactly one more job is due
        if hi >= d {
            prop_assert_eq!(task.dbf(&(&hi + &t)), task.dbf(&hi) + &c);
        }
    }

    #[test]
    fn dagger_is_idempotent(ts in task_set(6)) {
        let once = ts.dagger();
        prop_assert_eq!(once.dagger(), once.clone());
        prop_assert_eq!(once.lambda(), one());
    }

    #[test]
    fn json_round_trip(ts in task_set(8)) {
        let text = serialize_taskset(&ts);
        prop_assert_eq!(parse_taskset(text.as_bytes()).unwrap(), ts);
    }

    #[test]
    fn feasibility_is_monotone_in_speed(ts in task_set(4), extra in 1i64..=8) {
        let slow = edf_feasible_exact(&ts.tasks, &one(), &cfg()).unwrap();
        if slow.feasible {
            let fast = one() + q(extra, 4);
            prop_assert!(edf_feasible_exact(&ts.tasks, &fast, &cfg()).unwrap().feasible);
        }
    }

    #[test]
    fn feasibility_is_monotone_under_removal(ts in task_set(5), drop in 0usize..5) {
        if edf_feasible_exact(&ts.tasks, &one(), &cfg()).unwrap().feasible && ts.len() > 1 {
            let mut sub = ts.tasks.clone();
            sub.remove(drop % sub.len());
            prop_assert!(edf_feasible_exact(&sub, &one(), &cfg()).unwrap().feasible);
        }
    }

    #[test]
    fn demand_test_agrees_with_simulation(ts in task_set(4)) {
        let verdict = edf_feasible_exact(&ts.tasks, &one(), &cfg()).unwrap();
        let horizon = rtpack::feasibility::test_horizon(&ts.tasks, &one(), &cfg()).unwrap();
        let trace = simulate_edf_synchronous(&ts.tasks, &horizon, &one(), &cfg()).unwrap();
        prop_assert_eq!(verdict.feasible, trace.schedulable());
    }

    #[test]
    fn dagger_bins_pairwise_overloaded(ts in task_set(10), s in strategy()) {
        let p = dagger_greedy(&ts, s).unwrap();
        let loads: Vec<Rational> = p
            .bins
            .iter()
            .map(|b| b.iter().map(|&id| ts.task(id).unwrap().dagger().utilization()).sum())
            .collect();
        for a in 0..loads.len() {
            prop_assert!(loads[a] <= one());
            for b in a + 1..loads.len() {
                prop_assert!(&loads[a] + &loads[b] > one());
            }
        }
        prop_assert!(verify_partition(&ts, &p, VerifyMode::Exact, &cfg()).unwrap());
    }

    #[test]
    fn dm_partitions_verify_both_ways(ts in task_set(10), s in strategy()) {
        let p = dm_partition(&ts, s).unwrap();
        let mut seen: Vec<usize> = p.bins.concat();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..ts.len()).collect::<Vec<_>>());
        for bin in &p.bins {
            let tasks: Vec<&Task> = bin.iter().map(|&id| ts.task(id).unwrap()).collect();
            prop_assert!(dm_bin_admissible(&tasks));
        }
        prop_assert!(verify_partition(&ts, &p, VerifyMode::Approximate, &cfg()).unwrap());
        prop_assert!(verify_partition(&ts, &p, VerifyMode::Exact, &cfg()).unwrap());
    }

    #[test]
    fn dagger_within_two_lambda_of_optimum(ts in task_set(7), s in strategy()) {
        let m = dagger_greedy(&ts, s).unwrap().m;
        let m_star = optimal_partition(&ts, VerifyMode::Exact, 12, &cfg()).unwrap().m_star;
        prop_assert!(m_star <= m);
        prop_assert!(Rational::from(m) <= Rational::from(2) * ts.lambda() * Rational::from(m_star));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_matches_brute_force(ts in task_set(5)) {
        let r = optimal_partition(&ts, VerifyMode::Exact, 12, &cfg()).unwrap();
        prop_assert_eq!(r.m_star, brute_force_min(&ts));
        prop_assert!(verify_partition(&ts, &r.witness, VerifyMode::Exact, &cfg()).unwrap());
        let lower = ts.total_utilization().ceil();
        prop_assert!(num_bigint::BigInt::from(r.m_star) >= lower);
    }

    #[test]
    fn rational_text_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let r = q(n, d);
        prop_assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
    }

    #[test]
    fn bench_reports_are_consistent(seed in 0u64..1000, n in 2usize..6) {
        let cfg = ExperimentConfig::new(
            vec![InstanceSource::Random {
                count: 3,
                n,
                class: None,
                utilization: q(1, 1),
                utilization_max: None,
                denominator_bound: 4,
                max_period: 12,
                seed,
            }],
            vec![
                AlgorithmSpec { algorithm: Algorithm::Dagger, strategy: Fit::FirstFit },
                AlgorithmSpec { algorithm: Algorithm::Dm, strategy: Fit::BestFit },
            ],
        );
        let report = run_experiment(&cfg).unwrap();
        prop_assert_eq!(report.rows.len(), 6);
        // per-row violation lists are exactly the failed checks
        let all = check_bounds(&report);
        let listed: Vec<_> = report.rows.iter().flat_map(|r| r.violations.clone()).collect();
        prop_assert_eq!(all, listed);
        prop_assert_eq!(report.hard_violations().count(), 0);
        let csv = String::from_utf8(emit_report(&report, ReportFormat::Csv).unwrap()).unwrap();
        prop_assert_eq!(csv.lines().count(), 7);
    }
}
