use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Generators admitted in words: `E`, `K` and `K^{-1}`. `F` is not part of
/// the sub-Hopf algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    E,
    K,
    KInv,
}

/// The normal-ordered basis word `E^e K^k`; negative `k` denotes powers of `K^{-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub e: u32,
    pub k: i64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { e: 0, k: 0 };

    pub fn new(e: u32, k: i64) -> Self {
        Self { e, k }
    }

    /// The grading is the power of `E`.
    pub fn grading(&self) -> u32 {
        self.e
    }

    /// The word `E...E K...K` spelling this monomial.
    pub fn word(&self) -> Vec<Generator> {
        let k_gen = if self.k >= 0 {
            Generator::K
        } else {
            Generator::KInv
        };
        std::iter::repeat_n(Generator::E, self.e as usize)
            .chain(std::iter::repeat_n(k_gen, self.k.unsigned_abs() as usize))
            .collect()
    }

    /// All monomials with `e <= max_e` and `|k| <= max_abs_k`, in canonical order.
    pub fn grid(max_e: u32, max_abs_k: i64) -> Vec<Monomial> {
        (0..=max_e)
            .flat_map(|e| (-max_abs_k..=max_abs_k).map(move |k| Monomial::new(e, k)))
            .collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E^{} K^{}", self.e, self.k)
    }
}

impl FromStr for Monomial {
    type Err = Error;

    /// Accepts `"E^i K^l"` and the shorthand forms `"E"`, `"K"`, `"E^2"`,
    /// `"E K^-1"`, `"1"`. Factors may be separated by spaces or `*`; `E`
    /// must precede `K`.
    fn from_str(text: &str) -> Result<Self> {
        let bytes = text.as_bytes();
        let mut pos = 0;
        let mut e: Option<u32> = None;
        let mut k: Option<i64> = None;
        let err = |position: usize, message: &str| Error::Parse {
            position,
            message: message.to_string(),
        };
        let skip = |pos: &mut usize| {
            while *pos < bytes.len() && (bytes[*pos].is_ascii_whitespace() || bytes[*pos] == b'*') {
                *pos += 1;
            }
        };
        skip(&mut pos);
        if text.trim() == "1" {
            return Ok(Monomial::ONE);
        }
        while pos < bytes.len() {
            let symbol = bytes[pos];
            let start = pos;
            pos += 1;
            let mut exponent: i64 = 1;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                let digits_start = pos;
                if pos < bytes.len() && (bytes[pos] == b'-' || bytes[pos] == b'+') {
                    pos += 1;
                }
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                exponent = text[digits_start..pos]
                    .parse()
                    .map_err(|_| err(digits_start, "expected an integer exponent"))?;
            }
            match symbol {
                b'E' => {
                    if e.is_some() || k.is_some() {
                        return Err(err(start, "E must appear once, before K"));
                    }
                    let value = u32::try_from(exponent)
                        .map_err(|_| err(start, "power of E must be nonnegative"))?;
                    e = Some(value);
                }
                b'K' => {
                    if k.is_some() {
                        return Err(err(start, "K must appear at most once"));
                    }
                    k = Some(exponent);
                }
                b'F' => return Err(err(start, "F is not part of the E,K sub-Hopf algebra")),
                _ => return Err(err(start, "expected E or K")),
            }
            skip(&mut pos);
        }
        if e.is_none() && k.is_none() {
            return Err(err(0, "empty monomial"));
        }
        Ok(Monomial::new(e.unwrap_or(0), k.unwrap_or(0)))
    }
}
