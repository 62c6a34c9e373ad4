use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcalc::{ensure_positive, pow, Rational};

/// Failure (stay-put) probabilities `α(i)` of a unit-step growth chain.
///
/// From state `i` the chain stays with probability `α(i)` and moves to
/// `i + 1` with probability `1 - α(i)`. Every queried value lies in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlphaLaw {
    /// `α(i) = q^i / (1 + q^i)`: the grading-one chain of the Hopf square.
    Geometric {
        #[serde(with = "crate::json::rational")]
        q: Rational,
    },
    Constant {
        #[serde(with = "crate::json::rational")]
        value: Rational,
    },
    /// Explicit values for states `0..len`; later states are not defined.
    Table {
        #[serde(with = "crate::json::rational_vec")]
        values: Vec<Rational>,
    },
}

fn check_probability(state: u64, value: &Rational) -> Result<()> {
    if value.is_negative() || *value >= Rational::one() {
        return Err(Error::InvalidAlpha {
            state,
            value: value.clone(),
        });
    }
    Ok(())
}

impl AlphaLaw {
    pub fn geometric(q: Rational) -> Result<Self> {
        ensure_positive(&q)?;
        Ok(Self::Geometric { q })
    }

    pub fn constant(value: Rational) -> Result<Self> {
        check_probability(0, &value)?;
        Ok(Self::Constant { value })
    }

    pub fn table(values: Vec<Rational>) -> Result<Self> {
        for (i, v) in values.iter().enumerate() {
            check_probability(i as u64, v)?;
        }
        Ok(Self::Table { values })
    }

    /// `α(state)`.
    pub fn alpha(&self, state: u64) -> Result<Rational> {
        let value = match self {
            AlphaLaw::Geometric { q } => {
                let qi = pow(
                    q,
                    i64::try_from(state).map_err(|_| Error::ExponentOverflow)?,
                )?;
                &qi / (Rational::one() + &qi)
            }
            AlphaLaw::Constant { value } => value.clone(),
            AlphaLaw::Table { values } => usize::try_from(state)
                .ok()
                .and_then(|i| values.get(i))
                .cloned()
                .ok_or(Error::AlphaTableExhausted {
                    state,
                    len: values.len(),
                })?,
        };
        check_probability(state, &value)?;
        Ok(value)
    }

    /// Success probability `1 - α(state)`.
    pub fn success(&self, state: u64) -> Result<Rational> {
        Ok(Rational::one() - self.alpha(state)?)
    }

    /// `α(0), ..., α(count - 1)`.
    pub fn prefix(&self, count: u64) -> Result<Vec<Rational>> {
        (0..count).map(|i| self.alpha(i)).collect()
    }

    /// The defining `q` for geometric laws.
    pub fn q(&self) -> Option<&Rational> {
        match self {
            AlphaLaw::Geometric { q } => Some(q),
            _ => None,
        }
    }

    /// Number of states for which `α` is defined, if finite.
    pub fn defined_states(&self) -> Option<u64> {
        match self {
            AlphaLaw::Table { values } => Some(values.len() as u64),
            _ => None,
        }
    }

    /// True when `α(i)` is monotone in `i` and tends to 0 or 1, so rows far
    /// enough out are as degenerate as any earlier degenerate row.
    pub fn is_eventually_monotone(&self) -> bool {
        matches!(self, AlphaLaw::Geometric { q } if !q.is_one())
    }

    pub fn is_zero_somewhere_below(&self, count: u64) -> Result<Option<u64>> {
        for i in 0..count {
            if self.alpha(i)?.is_zero() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

impl fmt::Display for AlphaLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaLaw::Geometric { q } => write!(f, "geometric(q = {q})"),
            AlphaLaw::Constant { value } => write!(f, "constant({value})"),
            AlphaLaw::Table { values } => write!(f, "table({} states)", values.len()),
        }
    }
}
