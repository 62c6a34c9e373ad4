//! Exact arithmetic in the coefficient ring: rationals, Laurent polynomials in
//! `q`, q-integers, q-binomial coefficients and the q-Pochhammer symbol
//! `(-1; q)_k`.

mod laurent;
mod qnum;

pub use laurent::LaurentPoly;
pub use qnum::{q_binomial, q_factorial, q_number, q_pochhammer_minus1};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `base^exp` for any integer exponent. Negative exponents invert the base.
pub fn pow(base: &Rational, exp: i64) -> Result<Rational> {
    if exp == 0 {
        return Ok(Rational::one());
    }
    if base.is_zero() {
        return if exp > 0 {
            Ok(Rational::zero())
        } else {
            Err(Error::ZeroEvaluationPoint)
        };
    }
    let e = u32::try_from(exp.unsigned_abs()).map_err(|_| Error::ExponentOverflow)?;
    let numer = num_traits::Pow::pow(base.numer(), e);
    let denom = num_traits::Pow::pow(base.denom(), e);
    Ok(if exp > 0 {
        Rational::new(numer, denom)
    } else {
        Rational::new(denom, numer)
    })
}

/// Checks the standing assumption `q > 0` for numeric evaluation.
pub fn ensure_positive(q: &Rational) -> Result<()> {
    if q.is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositiveQ(q.clone()))
    }
}

/// Parses `"p/r"` or `"p"` into a rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let parse = |part: &str, offset: usize| {
        part.parse::<BigInt>().map_err(|_| Error::Parse {
            position: offset,
            message: format!("expected an integer, found {part:?}"),
        })
    };
    let n = parse(numer, 0)?;
    let d = parse(denom, numer.len() + 1)?;
    if d.is_zero() {
        return Err(Error::Parse {
            position: numer.len() + 1,
            message: "zero denominator".into(),
        });
    }
    Ok(Rational::new(n, d))
}

/// Formats as `"p/r"`, always including the denominator.
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Ordinary binomial coefficient as an exact integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_handles_signs_and_zero() {
        assert_eq!(pow(&rat(2, 3), 3).unwrap(), rat(8, 27));
        assert_eq!(pow(&rat(2, 3), -2).unwrap(), rat(9, 4));
        assert_eq!(pow(&int(0), 0).unwrap(), int(1));
        assert_eq!(pow(&int(0), -1), Err(Error::ZeroEvaluationPoint));
    }

    #[test]
    fn parse_and_format_round_trip() {
        assert_eq!(parse_rational("2/1").unwrap(), int(2));
        assert_eq!(parse_rational(" -6/4 ").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(format_rational(&int(2)), "2/1");
        assert!(matches!(
            parse_rational("1/0"),
            Err(Error::Parse { position: 2, .. })
        ));
        assert!(matches!(
            parse_rational("x/2"),
            Err(Error::Parse { position: 0, .. })
        ));
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(20, 10), BigInt::from(184_756));
        assert_eq!(binomial(3, 4), BigInt::zero());
    }
}
