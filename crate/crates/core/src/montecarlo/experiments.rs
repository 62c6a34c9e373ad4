use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sampler::{trajectory_rng, GrowthChain, Sampler};
use crate::error::{Error, Result};
use crate::markov::{AlphaLaw, Distribution};
use crate::qcalc::{format_rational, pow, Rational};

pub const THREADS_ENV: &str = "HOPFCHAIN_THREADS";

/// Worker count: the request (or all cores), capped by `HOPFCHAIN_THREADS`.
pub fn worker_count(requested: Option<usize>) -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut workers = requested.unwrap_or(available).max(1);
    if let Some(cap) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|c| *c > 0)
    {
        workers = workers.min(cap);
    }
    workers
}

/// Runs `task(0..count)` on a dedicated pool and returns results in index order.
pub fn run_trajectories<T: Send>(
    count: u64,
    workers: Option<usize>,
    task: impl Fn(u64) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count(workers))
        .build()
        .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))?;
    pool.install(|| (0..count).into_par_iter().map(&task).collect())
}

fn observe_all(
    chain: &GrowthChain,
    horizons: &[u64],
    num_traj: u64,
    master_seed: u64,
    workers: Option<usize>,
) -> Result<Vec<Vec<u64>>> {
    let last = *horizons.last().unwrap_or(&0);
    let sampler = Sampler::new(chain, last.saturating_mul(chain.max_jump() as u64))?;
    run_trajectories(num_traj, workers, |t| {
        sampler.observe(horizons, &mut trajectory_rng(master_seed, t))
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioEstimate {
    pub n: u64,
    pub num_trajectories: u64,
    pub master_seed: u64,
    /// Exact sample mean of `X_n / n`.
    #[serde(with = "crate::json::rational")]
    pub mean: Rational,
    pub mean_f64: f64,
    pub standard_error: f64,
}

/// Sample mean and standard error of `X_n / n`.
pub fn estimate_ratio(
    chain: &GrowthChain,
    n: u64,
    num_traj: u64,
    master_seed: u64,
    workers: Option<usize>,
) -> Result<RatioEstimate> {
    if n == 0 || num_traj == 0 {
        return Err(Error::Precondition(
            "estimate_ratio needs n >= 1 and traj >= 1".into(),
        ));
    }
    let finals = observe_all(chain, &[n], num_traj, master_seed, workers)?;
    let (sum, sum_sq) = finals.iter().fold((0u128, 0u128), |(s, s2), v| {
        let x = v[0] as u128;
        (s + x, s2 + x * x)
    });
    let mean = Rational::new(
        BigInt::from(sum),
        BigInt::from(n as u128 * num_traj as u128),
    );
    let count = num_traj as f64;
    let mean_x = sum as f64 / count;
    let var_x = if num_traj > 1 {
        ((sum_sq as f64) - count * mean_x * mean_x).max(0.0) / (count - 1.0)
    } else {
        0.0
    };
    Ok(RatioEstimate {
        n,
        num_trajectories: num_traj,
        master_seed,
        mean_f64: mean.to_f64().unwrap_or(f64::NAN),
        mean,
        standard_error: (var_x / count).sqrt() / n as f64,
    })
}

/// Nearest-rank quantile of sorted data: the `⌈p·N⌉`-th smallest value.
pub fn nearest_rank(sorted: &[u64], numer: u64, denom: u64) -> u64 {
    let n = sorted.len() as u64;
    let rank = (numer * n).div_ceil(denom).clamp(1, n);
    sorted[(rank - 1) as usize]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quantiles {
    pub p50: u64,
    pub p90: u64,
    pub p99: u64,
    pub max: u64,
}

impl Quantiles {
    pub fn of(values: &mut [u64]) -> Self {
        values.sort_unstable();
        Self {
            p50: nearest_rank(values, 1, 2),
            p90: nearest_rank(values, 9, 10),
            p99: nearest_rank(values, 99, 100),
            max: *values.last().unwrap_or(&0),
        }
    }
}

/// The candidate bound `X_n <= multiplier · log_q(n) + slack`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogBound {
    pub multiplier: u32,
    pub slack: u32,
}

impl Default for LogBound {
    /// Multiplier `2 + δ` with `δ = 1`.
    fn default() -> Self {
        Self {
            multiplier: 3,
            slack: 10,
        }
    }
}

impl LogBound {
    /// Exact test: `x - slack <= c · log_q(n)` iff `q^(x - slack) <= n^c` for `q > 1`.
    pub fn holds(&self, q: &Rational, n: u64, x: u64) -> Result<bool> {
        let Some(excess) = x.checked_sub(self.slack as u64) else {
            return Ok(true);
        };
        let lhs = pow(
            q,
            i64::try_from(excess).map_err(|_| Error::ExponentOverflow)?,
        )?;
        let rhs = Rational::from_integer(BigInt::from(n).pow(self.multiplier));
        Ok(lhs <= rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HorizonStats {
    pub n: u64,
    pub state: Quantiles,
    /// Quantiles of `n - X_n`.
    pub deficit: Quantiles,
    /// Trajectories breaking the log bound at this horizon (`q > 1` only).
    pub violations: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    #[serde(with = "crate::json::rational")]
    pub q: Rational,
    pub num_trajectories: u64,
    pub master_seed: u64,
    pub log_bound: Option<LogBound>,
    pub horizons: Vec<HorizonStats>,
    /// Least-squares `C` in `max X_n ≈ C · ln n` (`q > 1`).
    pub fitted_c: Option<f64>,
    /// Largest 99th percentile of `n - X_n` over the grid (`q < 1`).
    pub deficit_d: Option<u64>,
    /// Spread of that percentile over the grid (`q < 1`).
    pub deficit_spread: Option<u64>,
}

impl BoundReport {
    pub fn total_violations(&self) -> u64 {
        self.horizons.iter().filter_map(|h| h.violations).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "n,x_p50,x_p90,x_p99,x_max,deficit_p50,deficit_p90,deficit_p99,deficit_max,violations\n",
        );
        for h in &self.horizons {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                h.n,
                h.state.p50,
                h.state.p90,
                h.state.p99,
                h.state.max,
                h.deficit.p50,
                h.deficit.p90,
                h.deficit.p99,
                h.deficit.max,
                h.violations.map_or(String::new(), |v| v.to_string())
            );
        }
        out
    }

    pub fn summary(&self) -> String {
        let q = format_rational(&self.q);
        match (&self.log_bound, self.fitted_c, self.deficit_d) {
            (Some(b), Some(c), _) => format!(
                "q={q} fitted C={c:.6} violations of X_n <= {}*log_q(n)+{}: {}",
                b.multiplier,
                b.slack,
                self.total_violations()
            ),
            (_, _, Some(d)) => format!(
                "q={q} deficit 99th percentile max D={d} spread {}",
                self.deficit_spread.unwrap_or(0)
            ),
            _ => format!("q={q}"),
        }
    }
}

/// Empirical growth of the geometric chain over an `n`-grid.
///
/// Each trajectory is observed at every horizon of the grid.
pub fn bound_experiment(
    q0: &Rational,
    n_grid: &[u64],
    num_traj: u64,
    master_seed: u64,
    bound: LogBound,
    workers: Option<usize>,
) -> Result<BoundReport> {
    if q0.is_one() {
        return Err(Error::Precondition("bound experiments need q != 1".into()));
    }
    if num_traj == 0 || n_grid.is_empty() {
        return Err(Error::Precondition(
            "bound experiments need traj >= 1 and a grid".into(),
        ));
    }
    let mut horizons_n = n_grid.to_vec();
    horizons_n.sort_unstable();
    horizons_n.dedup();
    let chain = GrowthChain::Alpha(AlphaLaw::geometric(q0.clone())?);
    let observed = observe_all(&chain, &horizons_n, num_traj, master_seed, workers)?;
    let growing = q0.is_positive() && *q0 > Rational::one();

    let mut horizons = Vec::with_capacity(horizons_n.len());
    for (j, &n) in horizons_n.iter().enumerate() {
        let mut states: Vec<u64> = observed.iter().map(|v| v[j]).collect();
        let violations = if growing {
            let mut count = 0;
            for x in &states {
                if !bound.holds(q0, n, *x)? {
                    count += 1;
                }
            }
            Some(count)
        } else {
            None
        };
        let mut deficits: Vec<u64> = states.iter().map(|x| n - x).collect();
        horizons.push(HorizonStats {
            n,
            state: Quantiles::of(&mut states),
            deficit: Quantiles::of(&mut deficits),
            violations,
        });
    }

    let (fitted_c, deficit_d, deficit_spread) = if growing {
        let (num, den) = horizons
            .iter()
            .filter(|h| h.n > 1)
            .fold((0.0, 0.0), |(a, b), h| {
                let l = (h.n as f64).ln();
                (a + h.state.max as f64 * l, b + l * l)
            });
        (Some(if den > 0.0 { num / den } else { 0.0 }), None, None)
    } else {
        let p99 = horizons.iter().map(|h| h.deficit.p99);
        let max = p99.clone().max().unwrap_or(0);
        let min = p99.min().unwrap_or(0);
        (None, Some(max), Some(max - min))
    };

    Ok(BoundReport {
        q: q0.clone(),
        num_trajectories: num_traj,
        master_seed,
        log_bound: growing.then_some(bound),
        horizons,
        fitted_c,
        deficit_d,
        deficit_spread,
    })
}

/// Empirical law of `X_n` from independent trajectories.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmpiricalLaw {
    pub n: u64,
    pub num_trajectories: u64,
    pub master_seed: u64,
    pub counts: Vec<u64>,
}

/// One state's comparison against an exact mass.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyCheck {
    pub state: u64,
    pub count: u64,
    #[serde(with = "crate::json::rational")]
    pub exact: Rational,
    pub within: bool,
}

impl EmpiricalLaw {
    /// Per state, whether `|count/N - p| <= k · sqrt(p(1-p)/N)`, decided exactly.
    pub fn compare(&self, exact: &Distribution, k: u32) -> Vec<FrequencyCheck> {
        let states = self.counts.len().max(exact.mass.len()) as u64;
        let trials = Rational::from_integer(BigInt::from(self.num_trajectories));
        let k2 = Rational::from_integer(BigInt::from(k as u64 * k as u64));
        (0..states)
            .map(|state| {
                let count = self.counts.get(state as usize).copied().unwrap_or(0);
                let p = exact.get(state);
                let diff = Rational::from_integer(BigInt::from(count)) - &trials * &p;
                let allowed = &k2 * &trials * &p * (Rational::one() - &p);
                FrequencyCheck {
                    state,
                    count,
                    within: &diff * &diff <= allowed,
                    exact: p,
                }
            })
            .collect()
    }
}

pub fn empirical_law(
    chain: &GrowthChain,
    n: u64,
    num_traj: u64,
    master_seed: u64,
    workers: Option<usize>,
) -> Result<EmpiricalLaw> {
    let finals = observe_all(chain, &[n], num_traj, master_seed, workers)?;
    let mut counts = vec![0u64; (n * chain.max_jump() as u64 + 1) as usize];
    for v in finals {
        counts[v[0] as usize] += 1;
    }
    Ok(EmpiricalLaw {
        n,
        num_trajectories: num_traj,
        master_seed,
        counts,
    })
}
