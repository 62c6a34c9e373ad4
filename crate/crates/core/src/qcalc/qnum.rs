use num_traits::One;

use super::{pow, LaurentPoly, Rational};
use crate::error::{Error, Result};

/// The symmetric q-integer `[n] = q^{n-1} + q^{n-3} + ... + q^{1-n}`.
pub fn q_number(n: u64) -> LaurentPoly {
    let n = n as i64;
    LaurentPoly::from_terms((0..n).map(|j| (n - 1 - 2 * j, Rational::one())))
}

/// `[n]! = [1][2]...[n]`.
pub fn q_factorial(n: u64) -> LaurentPoly {
    (1..=n).fold(LaurentPoly::one(), |acc, j| &acc * &q_number(j))
}

/// The Gaussian binomial `[n choose k]`, computed as an exact Laurent quotient
/// of q-factorials.
pub fn q_binomial(n: u64, k: u64) -> Result<LaurentPoly> {
    if k > n {
        return Err(Error::OutOfRange { n, k });
    }
    let denom = &q_factorial(k) * &q_factorial(n - k);
    // A remainder here would be a bug in the Laurent arithmetic, not bad input.
    let quotient = q_factorial(n).exact_div(&denom).unwrap_or_else(|e| {
        panic!(
            "q-factorial quotient [{n}]!/([{k}]![{}]!) failed: {e}",
            n - k
        )
    });
    Ok(quotient)
}

/// `(-1; q)_k = (1 + 1)(1 + q)...(1 + q^{k-1})` evaluated at `q0`.
pub fn q_pochhammer_minus1(k: u64, q0: &Rational) -> Result<Rational> {
    let mut acc = Rational::one();
    for j in 0..k {
        acc *= Rational::one() + pow(q0, j as i64)?;
    }
    Ok(acc)
}
