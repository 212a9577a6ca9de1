//! Instance generators: the adversarial families that defeat best-fit and
//! worst-fit deadline-monotonic partitioning, the speed-up gap family, the
//! dominated-vector-packing reduction, and seeded random task sets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::task::{DeadlineClass, TaskSet};

fn pow(base: u32, exp: i32) -> Rational {
    Rational::from(base).pow(exp)
}

/// Default period for the long-period tasks of the adversary families.
pub fn default_adversary_period(k: u32) -> Rational {
    pow(k, k as i32 + 2)
}

fn check_adversary_params(k: u32, h: &Rational) -> Result<()> {
    if k < 4 {
        return Err(Error::BadParam(format!("K must be at least 4, got {k}")));
    }
    if *h <= pow(k, k as i32) {
        return Err(Error::BadParam(format!(
            "H must exceed K^K = {}, got {h}",
            pow(k, k as i32)
        )));
    }
    Ok(())
}

/// Shared odd-index task `i >= 3`: `(K^m - K^(m-1), K^m, H)` with `m = (i-1)/2`.
fn odd_task(k: u32, i: u32, h: &Rational) -> (Rational, Rational, Rational) {
    let m = ((i - 1) / 2) as i32;
    (pow(k, m) - pow(k, m - 1), pow(k, m), h.clone())
}

/// 2K tasks that fit on two processors (odd ids on one, even on the other)
/// but make best-fit deadline-monotonic partitioning open K processors.
/// Task `tau_i` of the construction gets id `i - 1`.
pub fn gen_best_fit_adversary(k: u32, h: Option<Rational>) -> Result<TaskSet> {
    let h = h.unwrap_or_else(|| default_adversary_period(k));
    check_adversary_params(k, &h)?;
    let params = (1..=2 * k).map(|i| match i {
        1 => (Rational::new(1, k), Rational::one(), h.clone()),
        i if i % 2 == 0 => {
            let e = (i / 2) as i32;
            (pow(k, e - 2), pow(k, e - 1), pow(k, e - 1))
        }
        i => odd_task(k, i, &h),
    });
    Ok(TaskSet::from_params(format!("bf-adversary-k{k}"), params))
}

/// Worst-fit counterpart of [`gen_best_fit_adversary`].
pub fn gen_worst_fit_adversary(k: u32, h: Option<Rational>) -> Result<TaskSet> {
    let h = h.unwrap_or_else(|| default_adversary_period(k));
    check_adversary_params(k, &h)?;
    let params = (1..=2 * k).map(|i| match i {
        1 => (Rational::one(), Rational::one(), h.clone()),
        i if i % 2 == 0 => {
            let e = (i / 2) as i32;
            (pow(k, e - 1), pow(k, e), pow(k, e))
        }
        i => odd_task(k, i, &h),
    });
    Ok(TaskSet::from_params(format!("wf-adversary-k{k}"), params))
}

/// Bins the adversary families are built to provoke: bin `j` holds ids
/// `2j` and `2j + 1`.
pub fn adversary_expected_bins(k: u32) -> Vec<Vec<usize>> {
    (0..k as usize).map(|j| vec![2 * j, 2 * j + 1]).collect()
}

/// Two-processor partition of the adversary families: even ids (odd
/// indices in 1-based numbering) together, odd ids together.
pub fn adversary_two_processor_bins(k: u32) -> Vec<Vec<usize>> {
    let n = 2 * k as usize;
    vec![(0..n).step_by(2).collect(), (1..n).step_by(2).collect()]
}

/// `N` tasks with `C = D`, pairwise infeasible on a unit-speed processor,
/// all together feasible on one processor of speed `1 + eps`.
pub fn gen_speedup_gap(n: u32, eps: &Rational) -> Result<TaskSet> {
    if n < 2 {
        return Err(Error::BadParam(format!("N must be at least 2, got {n}")));
    }
    if !eps.is_positive() || *eps >= Rational::one() {
        return Err(Error::BadParam(format!(
            "eps must lie in (0, 1), got {eps}"
        )));
    }
    let grow = eps + Rational::one();
    let scale = |i: u32| grow.pow(i as i32 - 2) / eps.pow(i as i32 - 1);
    let period = scale(n);
    let params = (1..=n).map(|i| {
        let d = if i == 1 { Rational::one() } else { scale(i) };
        (d.clone(), d, period.clone())
    });
    Ok(TaskSet::from_params(
        format!("speedup-gap-n{n}-eps{eps}"),
        params,
    ))
}

/// Two-dimensional dominated vector packing instance: every vector has
/// `v1 > 0`, and `v2 > v1` whenever `v2 != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DvpInstance {
    pub vectors: Vec<(Rational, Rational)>,
}

impl DvpInstance {
    pub fn new(vectors: Vec<(Rational, Rational)>) -> Result<Self> {
        let dvp = DvpInstance { vectors };
        dvp.validate()?;
        Ok(dvp)
    }

    pub fn validate(&self) -> Result<()> {
        let one = Rational::one();
        for (i, (v1, v2)) in self.vectors.iter().enumerate() {
            let ok = v1.is_positive()
                && *v1 <= one
                && !v2.is_negative()
                && *v2 <= one
                && (v2.is_zero() || v2 > v1);
            if !ok {
                return Err(Error::BadParam(format!(
                    "vector {i} = ({v1}, {v2}) is not dominated"
                )));
            }
        }
        Ok(())
    }

    /// Least common multiple of the strictly constrained tasks' periods
    /// `v2 / v1` (1 when there are none).
    pub fn common_period(&self) -> Rational {
        self.vectors
            .iter()
            .filter(|(_, v2)| !v2.is_zero())
            .map(|(v1, v2)| v2 / v1)
            .fold(Rational::one(), |acc, t| acc.lcm(&t))
    }

    /// Whether the vectors with the given indices fit in one bin.
    pub fn fits(&self, indices: &[usize]) -> bool {
        let (a, b): (Rational, Rational) = indices
            .iter()
            .fold((Rational::zero(), Rational::zero()), |(a, b), &i| {
                (a + &self.vectors[i].0, b + &self.vectors[i].1)
            });
        a <= Rational::one() && b <= Rational::one()
    }
}

/// Maps each vector to a task: dominated vectors become `(C = v2, D = 1,
/// T = v2/v1)`, zero-`v2` vectors become implicit tasks `(v1*H, H, H)`
/// with `H` the common period. Task ids follow vector order.
pub fn dvp_to_tasks(dvp: &DvpInstance) -> Result<TaskSet> {
    dvp_to_tasks_with_period(dvp, &dvp.common_period())
}

/// Same as [`dvp_to_tasks`] with a caller-chosen common multiple `h`.
pub fn dvp_to_tasks_with_period(dvp: &DvpInstance, h: &Rational) -> Result<TaskSet> {
    dvp.validate()?;
    if !h.is_positive() {
        return Err(Error::BadParam(format!("H must be positive, got {h}")));
    }
    let params = dvp
        .vectors
        .iter()
        .map(|(v1, v2)| {
            if v2.is_zero() {
                Ok((v1 * h, h.clone(), h.clone()))
            } else {
                let period = v2 / v1;
                if !(h / &period).is_integer() {
                    return Err(Error::BadParam(format!(
                        "H = {h} is not a multiple of period {period}"
                    )));
                }
                Ok((v2.clone(), Rational::one(), period))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TaskSet::from_params("dvp", params))
}

/// Random dominated vectors on a grid of step `1/denominator_bound`;
/// roughly a third have `v2 = 0`.
pub fn gen_random_dvp(seed: u64, n: usize, denominator_bound: u32) -> Result<DvpInstance> {
    if denominator_bound < 2 {
        return Err(Error::BadParam(
            "denominator bound must be at least 2".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den = denominator_bound as i64;
    let vectors = (0..n)
        .map(|_| {
            if rng.gen_ratio(1, 3) {
                (Rational::new(rng.gen_range(1..=den), den), Rational::zero())
            } else {
                let a = rng.gen_range(1..den);
                let b = rng.gen_range(a + 1..=den);
                (Rational::new(a, den), Rational::new(b, den))
            }
        })
        .collect();
    DvpInstance::new(vectors)
}

/// Random set with the common-deadline shape: strictly constrained tasks
/// with `D = 1` and integer periods in `2..=6`, plus implicit tasks sharing
/// one period that is a multiple of every strict period.
pub fn gen_lemma1_shaped(seed: u64, n: usize, denominator_bound: u32) -> Result<TaskSet> {
    if n == 0 || denominator_bound < 1 {
        return Err(Error::BadParam(
            "need n >= 1 and a positive denominator bound".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den = denominator_bound as i64;
    let strict = rng.gen_range(0..=n);
    let mut params = Vec::with_capacity(n);
    let mut lcm = BigInt::from(1);
    for _ in 0..strict {
        let period: i64 = rng.gen_range(2..=6);
        lcm = lcm.lcm(&BigInt::from(period));
        // keep sum C around 1 so both outcomes show up
        let c = Rational::new(rng.gen_range(1..=den), den * (strict as i64).max(1))
            * Rational::new(rng.gen_range(2..=4), 2);
        let c = c.min(Rational::one());
        params.push((c, Rational::one(), Rational::from(period)));
    }
    let h = Rational::from(lcm) * Rational::from(rng.gen_range(1..=3i64));
    let implicit = n - strict;
    for _ in 0..implicit {
        let u = Rational::new(rng.gen_range(1..=den), den * (implicit as i64).max(1))
            * Rational::new(rng.gen_range(1..=3), 2);
        let u = u.min(Rational::one());
        params.push((u * &h, h.clone(), h.clone()));
    }
    Ok(TaskSet::from_params(format!("lemma1-{seed}"), params))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    pub seed: u64,
    pub n: usize,
    pub class: DeadlineClass,
    pub utilization: Rational,
    /// Periods, execution times and deadlines are multiples of
    /// `1/denominator_bound` (periods may use any denominator up to it).
    pub denominator_bound: u32,
    /// Periods are drawn from `[1, max_period]`.
    #[serde(default = "default_max_period")]
    pub max_period: u32,
}

fn default_max_period() -> u32 {
    100
}

impl GenParams {
    pub fn new(seed: u64, n: usize, class: DeadlineClass, utilization: Rational) -> Self {
        GenParams {
            seed,
            n,
            class,
            utilization,
            denominator_bound: 4,
            max_period: default_max_period(),
        }
    }

    fn check(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::BadParam("n must be at least 1".into()));
        }
        if !self.utilization.is_positive() || self.utilization > Rational::from(self.n) {
            return Err(Error::BadParam(format!(
                "utilization target must lie in (0, n], got {}",
                self.utilization
            )));
        }
        if self.denominator_bound == 0 || self.max_period == 0 {
            return Err(Error::BadParam(
                "denominator bound and max period must be positive".into(),
            ));
        }
        Ok(())
    }
}

pub fn gen_random(p: &GenParams) -> Result<TaskSet> {
    gen_random_indexed(p, 0)
}

/// The `index`-th instance of the stream selected by `p.seed`. Each
/// (seed, index) pair is an independent ChaCha stream, so instances can be
/// generated in any order or in parallel with identical results.
pub fn gen_random_indexed(p: &GenParams, index: u64) -> Result<TaskSet> {
    p.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    rng.set_stream(index);

    let utils = uunifast_discard(&mut rng, p.n, p.utilization.to_f64());
    let den = p.denominator_bound as i64;
    let max_period = p.max_period as i64;

    let params = utils
        .into_iter()
        .map(|u| {
            let b = rng.gen_range(1..=den);
            let a = rng.gen_range(b..=max_period * b);
            let period = Rational::new(a, b);
            let period_ticks = (&period * Rational::from(den))
                .floor()
                .to_i64()
                .unwrap_or(1);
            let ticks = ((u * period.to_f64() * den as f64).round() as i64).clamp(1, period_ticks);
            let c = Rational::new(ticks, den);
            let d = match p.class {
                DeadlineClass::Implicit => period.clone(),
                DeadlineClass::Constrained => {
                    if rng.gen_ratio(1, 4) {
                        period.clone()
                    } else {
                        Rational::new(rng.gen_range(ticks..=period_ticks), den)
                    }
                }
                DeadlineClass::Arbitrary => {
                    Rational::new(rng.gen_range(ticks..=2 * period_ticks), den)
                }
            };
            (c, d, period)
        })
        .collect::<Vec<_>>();
    Ok(TaskSet::from_params(
        format!("random-{}-{}-{}", p.class, p.seed, index),
        params,
    ))
}

/// UUniFast with rejection of draws that put any single task above 1.
fn uunifast_discard(rng: &mut ChaCha8Rng, n: usize, total: f64) -> Vec<f64> {
    for _ in 0..1000 {
        let mut remaining = total;
        let mut out = Vec::with_capacity(n);
        for i in 1..n {
            let next = remaining * rng.gen::<f64>().powf(1.0 / (n - i) as f64);
            out.push(remaining - next);
            remaining = next;
        }
        out.push(remaining);
        if out.iter().all(|&u| u <= 1.0) {
            return out;
        }
    }
    vec![(total / n as f64).min(1.0); n]
}
