use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{pow, Rational};
use crate::error::{Error, Result};

/// A Laurent polynomial in `q` with rational coefficients.
///
/// Stored sparsely as exponent -> coefficient. Zero coefficients are never
/// stored, so the zero polynomial is the empty map and structural equality is
/// polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, 0)
    }

    /// The single term `c * q^exp`.
    pub fn term(c: Rational, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    /// `q^exp`.
    pub fn q_pow(exp: i64) -> Self {
        Self::term(Rational::one(), exp)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(One::is_one)
    }

    pub fn coefficient(&self, exp: i64) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &Rational)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, exp: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Multiplies by `q^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e + shift, c.clone()))
                .collect(),
        }
    }

    /// Every coefficient is a nonnegative integer.
    pub fn has_nonnegative_integer_coefficients(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.is_integer() && !c.is_negative())
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Invariance under `q -> q^{-1}`.
    pub fn is_bar_symmetric(&self) -> bool {
        self.terms
            .iter()
            .all(|(e, c)| self.terms.get(&-e) == Some(c))
    }

    /// Exact substitution `q := q0`.
    pub fn eval(&self, q0: &Rational) -> Result<Rational> {
        if q0.is_zero() {
            if self.min_exponent().is_some_and(|e| e < 0) {
                return Err(Error::ZeroEvaluationPoint);
            }
            return Ok(self.coefficient(0));
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            acc += c * pow(q0, *e)?;
        }
        Ok(acc)
    }

    /// Exact quotient in the Laurent ring: returns `c` with `divisor * c == self`.
    ///
    /// Monomials are units, so both sides are reduced to ordinary polynomials
    /// with a nonzero constant term and long division runs from the top degree.
    pub fn exact_div(&self, divisor: &LaurentPoly) -> Result<LaurentPoly> {
        let (Some(d_lo), Some(d_hi)) = (divisor.min_exponent(), divisor.max_exponent()) else {
            return Err(Error::DivisionByZero);
        };
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let lead = divisor.coefficient(d_hi);
        let mut rem = self.clone();
        let mut quotient = Self::zero();
        while let Some(r_hi) = rem.max_exponent() {
            let r_lo = rem.min_exponent().unwrap_or(r_hi);
            // Remainder spans fewer exponents than the divisor: cannot be a multiple.
            if r_hi - r_lo < d_hi - d_lo {
                return Err(Error::NonExactDivision);
            }
            let factor = rem.coefficient(r_hi) / &lead;
            let exp = r_hi - d_hi;
            rem = &rem - &divisor.shift(exp).scale(&factor);
            quotient.add_term(exp, factor);
        }
        Ok(quotient)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl fmt::Display for LaurentPoly {
    /// Highest exponent first, e.g. `q^2 + 2 - q^-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let magnitude = c.abs();
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let unit = magnitude.is_one();
            if !unit || *e == 0 {
                write!(f, "{magnitude}")?;
            }
            match *e {
                0 => {}
                1 => f.write_str("q")?,
                _ => write!(f, "q^{e}")?,
            }
        }
        Ok(())
    }
}
