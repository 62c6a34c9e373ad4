//! Seeded simulation of the growth chains.
//!
//! Trajectory `t` under master seed `s` draws from ChaCha8 seeded with
//! `seed_from_u64(s)` on stream `t`, one 64-bit output per step. A step out
//! of a row with probabilities `p_0, ..., p_g` takes the smallest jump `j`
//! whose threshold `⌊(p_0 + ... + p_j) · 2^64⌋` exceeds the draw, so results
//! depend only on `(chain, horizons, seed, trajectory count)` and never on
//! thread scheduling.

mod experiments;
mod sampler;

pub use experiments::{
    bound_experiment, empirical_law, estimate_ratio, nearest_rank, run_trajectories, worker_count,
    BoundReport, EmpiricalLaw, FrequencyCheck, HorizonStats, LogBound, Quantiles, RatioEstimate,
    THREADS_ENV,
};
pub use sampler::{
    cumulative_thresholds, sample_trajectory, trajectory_rng, GrowthChain, Sampler,
    TrajectorySample,
};
