//! Martingales of the growth chains.
//!
//! For stay probabilities `α`, `Y_n = X_n - n + h(X_n)` is a martingale with
//! the compensator `h(x) = Σ_{i<x} α(i) / (1 - α(i))`. Everything here is
//! exact rational arithmetic.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::markov::{AlphaLaw, ForwardLaw};
use crate::qcalc::{ensure_positive, format_rational, pow, Rational};

fn integer(value: u64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

fn exponent(x: u64) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::ExponentOverflow)
}

/// The compensator `h` of an [`AlphaLaw`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Compensator {
    pub alpha: AlphaLaw,
}

impl Compensator {
    pub fn new(alpha: AlphaLaw) -> Self {
        Self { alpha }
    }

    /// `α(i) / (1 - α(i))`, the increment `h(i + 1) - h(i)`.
    pub fn increment(&self, state: u64) -> Result<Rational> {
        let a = self.alpha.alpha(state)?;
        Ok(&a / (Rational::one() - &a))
    }

    pub fn htilde(&self, x: u64) -> Result<Rational> {
        match &self.alpha {
            AlphaLaw::Geometric { q } if q.is_one() => Ok(integer(x)),
            AlphaLaw::Geometric { q } => {
                Ok((Rational::one() - pow(q, exponent(x)?)?) / (Rational::one() - q))
            }
            AlphaLaw::Constant { value } => Ok(integer(x) * value / (Rational::one() - value)),
            AlphaLaw::Table { .. } => (0..x).map(|i| self.increment(i)).sum(),
        }
    }

    /// `sup_x h(x)` when it is finite (geometric laws with `q < 1`).
    pub fn supremum(&self) -> Option<Rational> {
        match &self.alpha {
            AlphaLaw::Geometric { q } if *q < Rational::one() => {
                Some((Rational::one() - q).recip())
            }
            _ => None,
        }
    }

    fn check_strict(&self, below: u64) -> Result<()> {
        match self.alpha.is_zero_somewhere_below(below)? {
            Some(state) => Err(Error::NotInvertible { state }),
            None => Ok(()),
        }
    }

    /// Largest `x` with `h(x) <= v`.
    pub fn inverse(&self, v: &Rational) -> Result<u64> {
        if v.is_negative() {
            return Err(Error::Precondition(format!(
                "inverse needs v >= 0, got {}",
                format_rational(v)
            )));
        }
        if let Some(sup) = self.supremum() {
            if *v >= sup {
                return Err(Error::InverseUnbounded {
                    sup: Box::new(sup),
                    value: Box::new(v.clone()),
                });
            }
        }
        let limit = self.alpha.defined_states().unwrap_or(u64::MAX);
        let mut hi = 1u64.min(limit);
        while self.htilde(hi)? <= *v {
            self.check_strict(hi)?;
            if hi == limit {
                return Err(Error::AlphaTableExhausted {
                    state: limit,
                    len: limit as usize,
                });
            }
            hi = hi.checked_mul(2).ok_or(Error::ExponentOverflow)?.min(limit);
        }
        self.check_strict(hi)?;
        // h(lo) <= v < h(hi)
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.htilde(mid)? <= *v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }
}

/// `Y_n` for the geometric law: `x - n + (1 - q^x)/(1 - q)`, or `2x - n` at `q = 1`.
pub fn y_value(q0: &Rational, x: u64, n: u64) -> Result<Rational> {
    ensure_positive(q0)?;
    y_alpha_value(&AlphaLaw::geometric(q0.clone())?, x, n)
}

pub fn y_alpha_value(alpha: &AlphaLaw, x: u64, n: u64) -> Result<Rational> {
    let h = Compensator::new(alpha.clone()).htilde(x)?;
    Ok(integer(x) - integer(n) + h)
}

/// Exact one-step martingale residuals at a fixed time.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MartingaleReport {
    pub first_state: u64,
    pub last_state: u64,
    pub time: u64,
    /// `E[Y_n | X_{n-1} = x] - Y_{n-1}(x)` for each checked `x`.
    #[serde(with = "crate::json::rational_vec")]
    pub residuals: Vec<Rational>,
    #[serde(with = "crate::json::rational")]
    pub max_residual: Rational,
}

impl MartingaleReport {
    pub fn passed(&self) -> bool {
        self.max_residual.is_zero()
    }

    pub fn first_failure(&self) -> Option<u64> {
        self.residuals
            .iter()
            .position(|r| !r.is_zero())
            .map(|i| self.first_state + i as u64)
    }
}

impl fmt::Display for MartingaleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "states {}..={} at n = {}: max |residual| = {}",
            self.first_state, self.last_state, self.time, self.max_residual
        )?;
        match self.first_failure() {
            None => write!(f, "martingale identity holds exactly"),
            Some(x) => write!(f, "first nonzero residual at x = {x}"),
        }
    }
}

/// Residuals of `Y(x, n) = x - n + h(x)` for an arbitrary candidate `h`.
pub fn one_step_residuals(
    alpha: &AlphaLaw,
    h: impl Fn(u64) -> Result<Rational> + Sync,
    max_state: u64,
    n: u64,
) -> Result<MartingaleReport> {
    if n == 0 {
        return Err(Error::Precondition("one-step check needs n >= 1".into()));
    }
    let y = |x: u64, t: u64| -> Result<Rational> { Ok(integer(x) - integer(t) + h(x)?) };
    let residuals = (0..=max_state)
        .into_par_iter()
        .map(|x| {
            let a = alpha.alpha(x)?;
            let expected = &a * y(x, n)? + (Rational::one() - &a) * y(x + 1, n)?;
            Ok(expected - y(x, n - 1)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let max_residual = residuals
        .iter()
        .map(|r| r.abs())
        .max()
        .unwrap_or_else(Rational::zero);
    Ok(MartingaleReport {
        first_state: 0,
        last_state: max_state,
        time: n,
        residuals,
        max_residual,
    })
}

pub fn verify_one_step(alpha: &AlphaLaw, max_state: u64, n: u64) -> Result<MartingaleReport> {
    let comp = Compensator::new(alpha.clone());
    one_step_residuals(alpha, |x| comp.htilde(x), max_state, n)
}

/// `E[Y_n]` from the forward law of `X_n`.
pub fn expected_y_forward(alpha: &AlphaLaw, n: u64) -> Result<Rational> {
    let mut law = ForwardLaw::new(alpha.clone());
    law.advance_to(n)?;
    let values = (0..=n)
        .map(|x| y_alpha_value(alpha, x, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(law.expectation(|x| values[x as usize].clone()))
}

/// `E[Y_n]` by backward induction of `E[Y_n | X_t = x]` from `t = n` down to 0.
pub fn expected_y_backward(alpha: &AlphaLaw, n: u64) -> Result<Rational> {
    let mut value = (0..=n)
        .map(|x| y_alpha_value(alpha, x, n))
        .collect::<Result<Vec<_>>>()?;
    let stay = alpha.prefix(n)?;
    for t in (0..n as usize).rev() {
        value = (0..=t)
            .map(|x| mix(&stay[x], &value[x], &value[x + 1]))
            .collect();
    }
    Ok(value.swap_remove(0))
}

/// `a·u + (1 - a)·v` with a single reduction.
fn mix(a: &Rational, u: &Rational, v: &Rational) -> Rational {
    let (an, ad) = (a.numer(), a.denom());
    let l = u.denom().lcm(v.denom());
    let num = an * u.numer() * (&l / u.denom()) + (ad - an) * v.numer() * (&l / v.denom());
    Rational::new(num, ad * l)
}

/// Per-step variance increments `E[q^{X_{i-1}}]` for `i = 1..=n`.
pub fn variance_ledger(q0: &Rational, n: u64) -> Result<Vec<Rational>> {
    let alpha = AlphaLaw::geometric(q0.clone())?;
    let mut law = ForwardLaw::new(alpha);
    let mut powers = vec![Rational::one()];
    let mut ledger = Vec::with_capacity(n as usize);
    for i in 1..=n {
        law.advance_to(i - 1)?;
        while powers.len() < i as usize {
            let next = powers.last().unwrap() * q0;
            powers.push(next);
        }
        ledger.push(law.expectation(|x| powers[x as usize].clone()));
    }
    Ok(ledger)
}

/// `E[Y_n^2]` directly from the law of `X_n`.
pub fn second_moment_y(q0: &Rational, n: u64) -> Result<Rational> {
    let alpha = AlphaLaw::geometric(q0.clone())?;
    let squares = (0..=n)
        .map(|x| y_value(q0, x, n).map(|y| &y * &y))
        .collect::<Result<Vec<_>>>()?;
    let mut law = ForwardLaw::new(alpha);
    law.advance_to(n)?;
    Ok(law.expectation(|x| squares[x as usize].clone()))
}

/// `Y_n - Y_{n-1}` given `X_{n-1} = x`: `-1` on a stay, `q^x` on a step.
pub fn y_increment(q0: &Rational, x: u64, step: bool) -> Result<Rational> {
    let next = if step { x + 1 } else { x };
    Ok(y_value(q0, next, 1)? - y_value(q0, x, 0)?)
}

/// `max |Y_n - Y_{n-1}|` over `x <= max_state` and both outcomes.
pub fn increment_bound_check(q0: &Rational, max_state: u64) -> Result<Rational> {
    if !q0.is_positive() || *q0 >= Rational::one() {
        return Err(Error::Precondition(format!(
            "increment bound needs 0 < q < 1, got {}",
            format_rational(q0)
        )));
    }
    let mut max = Rational::zero();
    for x in 0..=max_state {
        for step in [false, true] {
            max = max.max(y_increment(q0, x, step)?.abs());
        }
    }
    Ok(max)
}
