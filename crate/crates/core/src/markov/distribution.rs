use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::AlphaLaw;
use crate::error::{Error, Result};
use crate::qcalc::{ensure_positive, pow, q_pochhammer_minus1, Rational};

/// The exact law of `X_n`: `mass[k] = P(X_n = k)` for `k = 0..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Distribution {
    pub time: u64,
    #[serde(with = "crate::json::rational_vec")]
    pub mass: Vec<Rational>,
}

impl Distribution {
    pub fn get(&self, k: u64) -> Rational {
        usize::try_from(k)
            .ok()
            .and_then(|i| self.mass.get(i))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.mass.iter().sum()
    }

    /// `E[f(X_n)]`.
    pub fn expectation(&self, f: impl Fn(u64) -> Rational) -> Rational {
        self.mass
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(k, p)| p * f(k as u64))
            .sum()
    }

    /// CSV with header `n,k,p_num,p_den`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,k,p_num,p_den\n");
        for (k, p) in self.mass.iter().enumerate() {
            let _ = writeln!(out, "{},{},{},{}", self.time, k, p.numer(), p.denom());
        }
        out
    }
}

/// `E[X_n] = Σ k P(X_n = k)`.
pub fn expected_value(d: &Distribution) -> Rational {
    d.expectation(|k| Rational::from_integer(BigInt::from(k)))
}

/// The law of `X_t` as integer numerators over one common denominator.
///
/// Evolving in this form avoids a gcd per cell; reduction happens only when a
/// [`Distribution`] or an expectation is read out.
#[derive(Clone, Debug)]
pub struct ForwardLaw {
    alpha: AlphaLaw,
    time: u64,
    numer: Vec<BigInt>,
    denom: BigInt,
    /// Per state: (stay numerator, move numerator, shared denominator).
    weights: Vec<(BigInt, BigInt, BigInt)>,
}

impl ForwardLaw {
    /// `X_0 = 0` almost surely.
    pub fn new(alpha: AlphaLaw) -> Self {
        Self {
            alpha,
            time: 0,
            numer: vec![BigInt::one()],
            denom: BigInt::one(),
            weights: Vec::new(),
        }
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn alpha(&self) -> &AlphaLaw {
        &self.alpha
    }

    fn weight(&mut self, state: usize) -> Result<&(BigInt, BigInt, BigInt)> {
        while self.weights.len() <= state {
            let a = self.alpha.alpha(self.weights.len() as u64)?;
            let d = a.denom().clone();
            let stay = a.numer().clone();
            let go = &d - &stay;
            self.weights.push((stay, go, d));
        }
        Ok(&self.weights[state])
    }

    /// Advances one step: `P_t(k) = α(k) P_{t-1}(k) + (1 - α(k-1)) P_{t-1}(k-1)`.
    pub fn step(&mut self) -> Result<()> {
        let t = self.numer.len();
        self.weight(t - 1)?;
        let lcm = self.weights[..t]
            .iter()
            .fold(BigInt::one(), |acc, (_, _, d)| acc.lcm(d));
        let mut next = vec![BigInt::zero(); t + 1];
        for (k, n) in self.numer.iter().enumerate() {
            if n.is_zero() {
                continue;
            }
            let (stay, go, d) = &self.weights[k];
            let scaled = n * (&lcm / d);
            next[k] += &scaled * stay;
            next[k + 1] += scaled * go;
        }
        self.numer = next;
        self.denom *= lcm;
        self.time += 1;
        Ok(())
    }

    pub fn advance_to(&mut self, time: u64) -> Result<()> {
        while self.time < time {
            self.step()?;
        }
        Ok(())
    }

    pub fn mass(&self, k: u64) -> Rational {
        match usize::try_from(k).ok().and_then(|i| self.numer.get(i)) {
            Some(n) => Rational::new(n.clone(), self.denom.clone()),
            None => Rational::zero(),
        }
    }

    pub fn distribution(&self) -> Distribution {
        Distribution {
            time: self.time,
            mass: self
                .numer
                .iter()
                .map(|n| Rational::new(n.clone(), self.denom.clone()))
                .collect(),
        }
    }

    /// `E[f(X_t)]` with a single reduction at the end.
    pub fn expectation(&self, f: impl Fn(u64) -> Rational) -> Rational {
        let values: Vec<Rational> = (0..self.numer.len() as u64).map(f).collect();
        let common = values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let mut acc = BigInt::zero();
        for (n, v) in self.numer.iter().zip(&values) {
            if n.is_zero() || v.is_zero() {
                continue;
            }
            acc += n * v.numer() * (&common / v.denom());
        }
        Rational::new(acc, &self.denom * common)
    }

    pub fn expected_value(&self) -> Rational {
        self.expectation(|k| Rational::from_integer(BigInt::from(k)))
    }
}

/// The exact law of `X_n` by forward recursion from `X_0 = 0`.
pub fn distribution_dp(alpha: &AlphaLaw, n: u64) -> Result<Distribution> {
    let mut law = ForwardLaw::new(alpha.clone());
    law.advance_to(n)?;
    Ok(law.distribution())
}

/// Visits every weak composition `y_0 + ... + y_{parts-1} = total` in odometer order.
pub(crate) fn for_each_composition(total: u64, parts: usize, mut visit: impl FnMut(&[u64])) {
    assert!(parts > 0);
    let last = parts - 1;
    let mut y = vec![0; parts];
    y[0] = total;
    loop {
        visit(&y);
        let tail = std::mem::take(&mut y[last]);
        match (0..last).rev().find(|&j| y[j] > 0) {
            Some(j) => {
                y[j] -= 1;
                y[j + 1] = tail + 1;
            }
            None => return,
        }
    }
}

/// `Σ_{y_0+...+y_k = total} Π_i failure[i]^{y_i}`.
fn composition_sum(failure: &[Rational], total: u64) -> Rational {
    let powers: Vec<Vec<Rational>> = failure
        .iter()
        .map(|a| {
            std::iter::successors(Some(Rational::one()), |p| Some(p * a))
                .take(total as usize + 1)
                .collect()
        })
        .collect();
    let mut sum = Rational::zero();
    for_each_composition(total, failure.len(), |y| {
        sum += y
            .iter()
            .zip(&powers)
            .fold(Rational::one(), |acc, (&yi, pw)| acc * &pw[yi as usize]);
    });
    sum
}

/// `P(X_n = k) = (1 / (-1;q)_k) Σ_{y_0+...+y_k = n-k} Π_i (q^i/(q^i+1))^{y_i}`.
pub fn distribution_formula(q0: &Rational, n: u64, k: u64) -> Result<Rational> {
    ensure_positive(q0)?;
    if k > n {
        return Err(Error::OutOfSupport { n, k });
    }
    let failure = (0..=k)
        .map(|i| {
            let qi = pow(q0, i as i64)?;
            Ok(&qi / (&qi + Rational::one()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(composition_sum(&failure, n - k) / q_pochhammer_minus1(k, q0)?)
}

/// `P(X_n^α = k) = Π_{i<k} (1 - α(i)) · Σ_{y_0+...+y_k = n-k} Π_i α(i)^{y_i}`.
///
/// Each success factor appears once: the chain passes through each state
/// `0..k-1` exactly once on its way to `k`.
pub fn distribution_formula_general(alpha: &AlphaLaw, n: u64, k: u64) -> Result<Rational> {
    if k > n {
        return Err(Error::OutOfSupport { n, k });
    }
    let failure = alpha.prefix(k + 1)?;
    let successes = failure[..k as usize]
        .iter()
        .fold(Rational::one(), |acc, a| acc * (Rational::one() - a));
    Ok(successes * composition_sum(&failure, n - k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcalc::{binomial, int, rat};

    fn geometric(q: Rational) -> AlphaLaw {
        AlphaLaw::geometric(q).unwrap()
    }

    #[test]
    fn dp_examples() {
        let d0 = distribution_dp(&geometric(int(2)), 0).unwrap();
        assert_eq!(d0.mass, vec![int(1)]);
        for q in [rat(1, 3), int(1), int(5)] {
            let d1 = distribution_dp(&geometric(q), 1).unwrap();
            assert_eq!(d1.mass, vec![rat(1, 2), rat(1, 2)]);
        }
        // Paths: FF 1/2·1/2, FS 1/2·1/2, SF 1/2·2/3, SS 1/2·1/3.
        let d2 = distribution_dp(&geometric(int(2)), 2).unwrap();
        assert_eq!(d2.mass, vec![rat(1, 4), rat(7, 12), rat(1, 6)]);
        assert_eq!(expected_value(&d2), rat(11, 12));
    }

    #[test]
    fn formula_examples() {
        for q in [rat(1, 3), int(1), int(2)] {
            assert_eq!(distribution_formula(&q, 1, 1).unwrap(), rat(1, 2));
        }
        assert_eq!(distribution_formula(&int(1), 5, 2).unwrap(), rat(10, 32));
        assert_eq!(distribution_formula(&int(2), 2, 1).unwrap(), rat(7, 12));
        assert_eq!(
            distribution_formula(&int(2), 2, 3),
            Err(Error::OutOfSupport { n: 2, k: 3 })
        );
    }

    #[test]
    fn general_formula_examples() {
        let half = AlphaLaw::constant(rat(1, 2)).unwrap();
        assert_eq!(
            distribution_formula_general(&half, 4, 2).unwrap(),
            rat(3, 8)
        );
        let sure = AlphaLaw::table(vec![int(0), rat(1, 2), rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(distribution_formula_general(&sure, 3, 0).unwrap(), int(0));
        for q in [rat(1, 2), int(3)] {
            for n in 0..7 {
                for k in 0..=n {
                    assert_eq!(
                        distribution_formula_general(&geometric(q.clone()), n, k).unwrap(),
                        distribution_formula(&q, n, k).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn compositions_are_complete() {
        for total in 0..6u64 {
            for parts in 1..5usize {
                let mut seen = std::collections::BTreeSet::new();
                for_each_composition(total, parts, |y| {
                    assert_eq!(y.iter().sum::<u64>(), total);
                    assert!(seen.insert(y.to_vec()));
                });
                let expected = binomial(total + parts as u64 - 1, parts as u64 - 1);
                assert_eq!(BigInt::from(seen.len()), expected);
            }
        }
    }

    #[test]
    fn q_one_is_binomial() {
        let law = geometric(int(1));
        for n in 0..=20u64 {
            let d = distribution_dp(&law, n).unwrap();
            for k in 0..=n {
                let expected = Rational::new(binomial(n, k), BigInt::one() << n);
                assert_eq!(d.get(k), expected);
            }
            assert_eq!(expected_value(&d), rat(n as i64, 2));
        }
    }

    #[test]
    fn forward_law_expectation_matches_distribution() {
        let mut law = ForwardLaw::new(geometric(rat(2, 3)));
        law.advance_to(9).unwrap();
        let d = law.distribution();
        assert_eq!(d.total(), int(1));
        let f = |k: u64| rat(k as i64 * k as i64, 7) - rat(1, 3);
        assert_eq!(law.expectation(f), d.expectation(f));
        assert_eq!(law.expected_value(), expected_value(&d));
    }

    #[test]
    fn csv_and_json() {
        let d = distribution_dp(&geometric(int(2)), 2).unwrap();
        assert_eq!(d.to_csv(), "n,k,p_num,p_den\n2,0,1,4\n2,1,7,12\n2,2,1,6\n");
        let text = serde_json::to_string(&d).unwrap();
        assert_eq!(text, r#"{"time":2,"mass":[[1,4],[7,12],[1,6]]}"#);
        assert_eq!(serde_json::from_str::<Distribution>(&text).unwrap(), d);
    }
}
