use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chain_extract::ChainSpec;
use crate::error::{Error, Result};
use crate::markov::AlphaLaw;
use crate::qcalc::Rational;

/// A monotone chain that can be simulated: a unit-step α-chain or an
/// extracted chain of any grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GrowthChain {
    Alpha(AlphaLaw),
    Spec(ChainSpec),
}

impl From<AlphaLaw> for GrowthChain {
    fn from(law: AlphaLaw) -> Self {
        GrowthChain::Alpha(law)
    }
}

impl From<ChainSpec> for GrowthChain {
    fn from(spec: ChainSpec) -> Self {
        GrowthChain::Spec(spec)
    }
}

/// How rows behave past the last one that has to be tabulated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tail {
    /// Every later row equals the last tabulated row.
    Repeat,
    /// Later rows are not defined.
    Undefined,
}

impl GrowthChain {
    pub fn max_jump(&self) -> u32 {
        match self {
            GrowthChain::Alpha(_) => 1,
            GrowthChain::Spec(spec) => spec.grading,
        }
    }

    /// Probabilities of jumps `0..=max_jump` out of `state`.
    pub fn row_probabilities(&self, state: u64) -> Result<Vec<Rational>> {
        match self {
            GrowthChain::Alpha(law) => {
                let a = law.alpha(state)?;
                let go = Rational::one() - &a;
                Ok(vec![a, go])
            }
            GrowthChain::Spec(spec) => spec.row_probabilities(state),
        }
    }

    /// First state from which rows no longer depend on the state, if known.
    fn constant_from(&self) -> Option<u64> {
        match self {
            GrowthChain::Alpha(AlphaLaw::Constant { .. }) => Some(0),
            GrowthChain::Alpha(AlphaLaw::Geometric { q }) if q.is_one() => Some(0),
            GrowthChain::Spec(spec) if spec.q_value.is_one() => Some(spec.rows.len() as u64),
            _ => None,
        }
    }

    /// First state from which rows follow the closed form with `q != 1`.
    ///
    /// There each cumulative jump probability is monotone in the state and
    /// tends to 0 or 1, so once a threshold row is all-zero or all-max it
    /// stays that way.
    fn monotone_from(&self) -> Option<u64> {
        match self {
            GrowthChain::Alpha(law) if law.is_eventually_monotone() => Some(0),
            GrowthChain::Spec(spec) if !spec.q_value.is_one() => Some(spec.rows.len() as u64),
            _ => None,
        }
    }
}

/// `⌊c · 2^64⌋` for the cumulative sums `c` of all but the last probability,
/// clamped to `u64::MAX`.
pub fn cumulative_thresholds(probs: &[Rational]) -> Vec<u64> {
    let scale = BigInt::one() << 64;
    let mut acc = Rational::from_integer(BigInt::from(0));
    probs[..probs.len().saturating_sub(1)]
        .iter()
        .map(|p| {
            acc += p;
            let t: BigInt = (acc.numer() * &scale) / acc.denom();
            t.to_u64().unwrap_or(u64::MAX)
        })
        .collect()
}

/// Precomputed integer thresholds for exact-threshold sampling.
#[derive(Clone, Debug)]
pub struct Sampler {
    rows: Vec<Vec<u64>>,
    tail: Tail,
}

impl Sampler {
    /// Tabulates every row a path of at most `max_state` can visit, stopping
    /// early once rows provably stop changing.
    pub fn new(chain: &GrowthChain, max_state: u64) -> Result<Self> {
        let constant_from = chain.constant_from();
        let monotone_from = chain.monotone_from();
        let limit = match chain {
            GrowthChain::Alpha(law) => law.defined_states().map(|n| n.min(max_state + 1)),
            GrowthChain::Spec(_) => None,
        }
        .unwrap_or(max_state + 1);
        let mut rows = Vec::new();
        for state in 0..limit {
            let row = cumulative_thresholds(&chain.row_probabilities(state)?);
            let degenerate = row.iter().all(|t| *t == 0) || row.iter().all(|t| *t == u64::MAX);
            rows.push(row);
            if constant_from.is_some_and(|s| state >= s)
                || (degenerate && monotone_from.is_some_and(|s| state >= s))
            {
                return Ok(Self {
                    rows,
                    tail: Tail::Repeat,
                });
            }
        }
        let tail = if limit > max_state {
            Tail::Repeat
        } else {
            Tail::Undefined
        };
        Ok(Self { rows, tail })
    }

    pub fn tabulated_rows(&self) -> usize {
        self.rows.len()
    }

    fn row(&self, state: u64) -> Result<&[u64]> {
        match usize::try_from(state).ok().and_then(|i| self.rows.get(i)) {
            Some(row) => Ok(row),
            None if self.tail == Tail::Repeat => Ok(self.rows.last().expect("at least one row")),
            None => Err(Error::AlphaTableExhausted {
                state,
                len: self.rows.len(),
            }),
        }
    }

    /// One jump out of `state` driven by one 64-bit draw.
    pub fn jump(&self, state: u64, rng: &mut impl RngCore) -> Result<u64> {
        let row = self.row(state)?;
        let u = rng.next_u64();
        Ok(row.iter().position(|t| u < *t).unwrap_or(row.len()) as u64)
    }

    /// Runs one path to the largest horizon and returns `X_n` at each one.
    /// `horizons` must be sorted ascending.
    pub fn observe(&self, horizons: &[u64], rng: &mut impl RngCore) -> Result<Vec<u64>> {
        let mut out = Vec::with_capacity(horizons.len());
        let (mut state, mut time) = (0u64, 0u64);
        for &n in horizons {
            while time < n {
                state += self.jump(state, rng)?;
                time += 1;
            }
            out.push(state);
        }
        Ok(out)
    }

    pub fn path(&self, n: u64, rng: &mut impl RngCore) -> Result<Vec<u64>> {
        let mut path = Vec::with_capacity(n as usize + 1);
        let mut state = 0;
        path.push(state);
        for _ in 0..n {
            state += self.jump(state, rng)?;
            path.push(state);
        }
        Ok(path)
    }
}

/// The generator of trajectory `index` under `master_seed`.
pub fn trajectory_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub seed: u64,
    pub horizon: u64,
    pub path: Vec<u64>,
}

impl TrajectorySample {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,state\n");
        for (t, x) in self.path.iter().enumerate() {
            out.push_str(&format!("{t},{x}\n"));
        }
        out
    }
}

/// Samples `X_0, ..., X_n`; equal to trajectory 0 under master seed `seed`.
pub fn sample_trajectory(chain: &GrowthChain, n: u64, seed: u64) -> Result<TrajectorySample> {
    let max_state = n.saturating_mul(chain.max_jump() as u64);
    let sampler = Sampler::new(chain, max_state)?;
    let path = sampler.path(n, &mut trajectory_rng(seed, 0))?;
    Ok(TrajectorySample {
        seed,
        horizon: n,
        path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain_extract::build_chain_spec;
    use crate::qcalc::{int, rat};

    #[test]
    fn certain_success_is_deterministic() {
        let chain = GrowthChain::Alpha(AlphaLaw::constant(int(0)).unwrap());
        let sample = sample_trajectory(&chain, 5, 99).unwrap();
        assert_eq!(sample.path, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn paths_are_unit_step_and_reproducible() {
        let chain = GrowthChain::Alpha(AlphaLaw::geometric(int(2)).unwrap());
        let a = sample_trajectory(&chain, 100, 42).unwrap();
        let b = sample_trajectory(&chain, 100, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.path.len(), 101);
        assert!(a.path.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1));
        assert_ne!(a, sample_trajectory(&chain, 100, 43).unwrap());
    }

    #[test]
    fn graded_paths_respect_max_jump() {
        let spec = build_chain_spec(3, &rat(1, 2), 4).unwrap();
        let sample = sample_trajectory(&GrowthChain::Spec(spec), 200, 1).unwrap();
        assert!(sample
            .path
            .windows(2)
            .all(|w| w[1] >= w[0] && w[1] - w[0] <= 3));
    }

    #[test]
    fn thresholds_are_exact_floors() {
        assert_eq!(
            cumulative_thresholds(&[rat(1, 2), rat(1, 2)]),
            vec![1 << 63]
        );
        assert_eq!(
            cumulative_thresholds(&[rat(1, 4), rat(1, 2), rat(1, 4)]),
            vec![1 << 62, 3 << 62]
        );
        assert_eq!(
            cumulative_thresholds(&[rat(1, 3), rat(2, 3)]),
            vec![u64::MAX / 3]
        );
        assert_eq!(cumulative_thresholds(&[int(1), int(0)]), vec![u64::MAX]);
    }

    #[test]
    fn monotone_laws_stop_tabulating() {
        let half = GrowthChain::Alpha(AlphaLaw::geometric(rat(1, 2)).unwrap());
        let s = Sampler::new(&half, 100_000).unwrap();
        assert!(s.tabulated_rows() < 70);
        let two = GrowthChain::Alpha(AlphaLaw::geometric(int(2)).unwrap());
        assert!(Sampler::new(&two, 100_000).unwrap().tabulated_rows() < 70);
        let one = GrowthChain::Alpha(AlphaLaw::geometric(int(1)).unwrap());
        assert_eq!(Sampler::new(&one, 100_000).unwrap().tabulated_rows(), 1);
        let spec = GrowthChain::Spec(build_chain_spec(2, &rat(1, 2), 3).unwrap());
        assert!(Sampler::new(&spec, 100_000).unwrap().tabulated_rows() < 80);
    }

    #[test]
    fn undefined_table_rows_error() {
        let law = AlphaLaw::table(vec![rat(1, 2); 3]).unwrap();
        let chain = GrowthChain::Alpha(law);
        let mut hits_end = false;
        for seed in 0..50 {
            if sample_trajectory(&chain, 10, seed).is_err() {
                hits_end = true;
            }
        }
        assert!(hits_end);
        assert!(sample_trajectory(&chain, 2, 0).is_ok());
    }
}
