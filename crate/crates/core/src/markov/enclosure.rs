//! Certified enclosures of the law of `X_n` for horizons where the exact
//! rational law is too large to hold.
//!
//! Masses are fixed-point integers with [`FRAC_BITS`] fractional bits. One
//! recursion runs with every product rounded down and another with every
//! product rounded up; all weights are nonnegative, so the two vectors bound
//! the exact law from below and above at every step. No floating point is
//! involved, and the bounds are returned as exact rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::AlphaLaw;
use crate::error::Result;
use crate::qcalc::Rational;

pub const FRAC_BITS: u32 = 62;
const ONE: u64 = 1 << FRAC_BITS;

fn scale() -> BigInt {
    BigInt::from(ONE)
}

fn fixed_floor(r: &Rational) -> u64 {
    let (q, _) = (r.numer() * scale())
        .div_floor(r.denom())
        .div_rem(&BigInt::from(1));
    q.to_u64().expect("probability in [0, 1]")
}

fn fixed_ceil(r: &Rational) -> u64 {
    (r.numer() * scale())
        .div_ceil(r.denom())
        .to_u64()
        .expect("probability in [0, 1]")
}

fn mul_floor(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) >> FRAC_BITS) as u64
}

fn mul_ceil(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128 + (ONE as u128 - 1)) >> FRAC_BITS) as u64
}

fn to_rational(total: u128) -> Rational {
    Rational::new(BigInt::from(total), scale())
}

#[derive(Clone, Copy, Debug)]
struct WeightBounds {
    stay_lo: u64,
    stay_hi: u64,
    go_lo: u64,
    go_hi: u64,
}

/// Lower and upper fixed-point bounds on `P(X_t = k)` for every `k <= t`.
#[derive(Clone, Debug)]
pub struct EnclosedLaw {
    alpha: AlphaLaw,
    time: u64,
    lower: Vec<u64>,
    upper: Vec<u64>,
    weights: Vec<WeightBounds>,
}

impl EnclosedLaw {
    pub fn new(alpha: AlphaLaw) -> Self {
        Self {
            alpha,
            time: 0,
            lower: vec![ONE],
            upper: vec![ONE],
            weights: Vec::new(),
        }
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    fn ensure_weights(&mut self, states: usize) -> Result<()> {
        while self.weights.len() < states {
            let a = self.alpha.alpha(self.weights.len() as u64)?;
            let b = Rational::from_integer(BigInt::from(1)) - &a;
            self.weights.push(WeightBounds {
                stay_lo: fixed_floor(&a),
                stay_hi: fixed_ceil(&a),
                go_lo: fixed_floor(&b),
                go_hi: fixed_ceil(&b),
            });
        }
        Ok(())
    }

    pub fn step(&mut self) -> Result<()> {
        let t = self.lower.len();
        self.ensure_weights(t)?;
        let mut lower = vec![0u64; t + 1];
        let mut upper = vec![0u64; t + 1];
        for k in 0..t {
            let w = self.weights[k];
            let (lo, hi) = (self.lower[k], self.upper[k]);
            lower[k] += mul_floor(w.stay_lo, lo);
            lower[k + 1] += mul_floor(w.go_lo, lo);
            upper[k] += mul_ceil(w.stay_hi, hi);
            upper[k + 1] += mul_ceil(w.go_hi, hi);
        }
        for u in &mut upper {
            *u = (*u).min(ONE);
        }
        self.lower = lower;
        self.upper = upper;
        self.time += 1;
        Ok(())
    }

    pub fn advance_to(&mut self, time: u64) -> Result<()> {
        while self.time < time {
            self.step()?;
        }
        Ok(())
    }

    /// `(lower, upper)` bounds on `P(X_t = k)`.
    pub fn mass_bounds(&self, k: u64) -> (Rational, Rational) {
        let i = k as usize;
        match (self.lower.get(i), self.upper.get(i)) {
            (Some(lo), Some(hi)) => (to_rational(*lo as u128), to_rational(*hi as u128)),
            _ => (Rational::zero(), Rational::zero()),
        }
    }

    /// Bounds on `E[X_t]`.
    pub fn expectation_bounds(&self) -> (Rational, Rational) {
        let weighted = |v: &[u64]| -> Rational {
            let total: BigInt = v
                .iter()
                .enumerate()
                .map(|(k, m)| BigInt::from(k as u64) * BigInt::from(*m))
                .sum();
            Rational::new(total, scale())
        };
        (weighted(&self.lower), weighted(&self.upper))
    }

    /// Bounds on `E[X_t] / t` (requires `t >= 1`).
    pub fn ratio_bounds(&self) -> (Rational, Rational) {
        let (lo, hi) = self.expectation_bounds();
        let t = Rational::from_integer(BigInt::from(self.time.max(1)));
        (lo / &t, hi / t)
    }

    /// Upper bound on `P(X_t > level)`.
    pub fn upper_tail_bound(&self, level: u64) -> Rational {
        let start = (level as usize).saturating_add(1);
        let total: u128 = self.upper.iter().skip(start).map(|v| *v as u128).sum();
        to_rational(total).min(Rational::from_integer(BigInt::from(1)))
    }

    /// Upper bound on `P(X_t < level)`.
    pub fn lower_tail_bound(&self, level: u64) -> Rational {
        let total: u128 = self
            .upper
            .iter()
            .take(level as usize)
            .map(|v| *v as u128)
            .sum();
        to_rational(total).min(Rational::from_integer(BigInt::from(1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::distribution_dp;
    use crate::qcalc::{int, rat};

    #[test]
    fn encloses_the_exact_law() {
        for q in [rat(1, 3), rat(1, 2), int(1), int(2), int(3)] {
            let law = AlphaLaw::geometric(q).unwrap();
            let mut enc = EnclosedLaw::new(law.clone());
            for n in 0..=24u64 {
                enc.advance_to(n).unwrap();
                let exact = distribution_dp(&law, n).unwrap();
                for k in 0..=n {
                    let (lo, hi) = enc.mass_bounds(k);
                    let p = exact.get(k);
                    assert!(lo <= p && p <= hi, "n={n} k={k}");
                    assert!(&hi - &lo <= rat(1, 1 << 50));
                }
                let e = crate::markov::expected_value(&exact);
                let (elo, ehi) = enc.expectation_bounds();
                assert!(elo <= e && e <= ehi);
            }
        }
    }

    #[test]
    fn tail_bounds_cover_exact_tails() {
        let law = AlphaLaw::geometric(int(2)).unwrap();
        let mut enc = EnclosedLaw::new(law.clone());
        enc.advance_to(20).unwrap();
        let exact = distribution_dp(&law, 20).unwrap();
        for level in 0..20u64 {
            let upper: Rational = (level + 1..=20).map(|k| exact.get(k)).sum();
            assert!(upper <= enc.upper_tail_bound(level));
            let lower: Rational = (0..level).map(|k| exact.get(k)).sum();
            assert!(lower <= enc.lower_tail_bound(level));
        }
    }

    #[test]
    fn rounding_helpers() {
        assert_eq!(fixed_floor(&rat(1, 2)), ONE / 2);
        assert_eq!(fixed_ceil(&rat(1, 3)), fixed_floor(&rat(1, 3)) + 1);
        assert_eq!(fixed_floor(&int(1)), ONE);
        assert_eq!(mul_ceil(1, 1), 1);
        assert_eq!(mul_floor(1, 1), 0);
    }
}
