use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::monomial::{Generator, Monomial};
use crate::json::JsonInt;
use crate::qcalc::{LaurentPoly, Rational};

/// A finite linear combination of normal-ordered monomials with Laurent
/// polynomial coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgebraElement {
    terms: BTreeMap<Monomial, LaurentPoly>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::ONE)
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, LaurentPoly::one())
    }

    pub fn term(m: Monomial, coeff: LaurentPoly) -> Self {
        let mut out = Self::zero();
        out.add_term(m, coeff);
        out
    }

    pub fn add_term(&mut self, m: Monomial, coeff: LaurentPoly) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_default();
        *slot = &*slot + &coeff;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> LaurentPoly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &LaurentPoly)> + '_ {
        self.terms.iter()
    }

    /// `Some(i)` when every monomial has `e == i`; the zero element has no grading.
    pub fn homogeneous_grading(&self) -> Option<u32> {
        let mut gradings = self.terms.keys().map(Monomial::grading);
        let first = gradings.next()?;
        gradings.all(|g| g == first).then_some(first)
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(*m, x * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, -c);
        }
        out
    }

    /// Bilinear product, normal-ordered.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let (m, shift) = monomial_product(*ma, *mb);
                out.add_term(m, (ca * cb).shift(shift));
            }
        }
        out
    }

    /// Applies a linear map defined on monomials.
    pub fn map_linear(&self, f: impl Fn(Monomial) -> AlgebraElement) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out = out.add(&f(*m).scale(c));
        }
        out
    }

    /// Evaluates every coefficient at `q0`.
    pub fn eval(&self, q0: &Rational) -> crate::Result<BTreeMap<Monomial, Rational>> {
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            let v = c.eval(q0)?;
            if !v.is_zero() {
                out.insert(*m, v);
            }
        }
        Ok(out)
    }
}

/// `(E^a K^b)(E^c K^d) = q^{2bc} E^{a+c} K^{b+d}`; returns the product and
/// the exponent of `q`.
pub fn monomial_product(x: Monomial, y: Monomial) -> (Monomial, i64) {
    (Monomial::new(x.e + y.e, x.k + y.k), 2 * x.k * y.e as i64)
}

/// Rewrites a word in `E`, `K`, `K^{-1}` to normal order.
///
/// Rules, applied to the leftmost redex until none remains:
/// `K E -> q^2 E K`, `K^{-1} E -> q^{-2} E K^{-1}`, `K K^{-1} -> 1`, `K^{-1} K -> 1`.
pub fn normal_order(word: &[Generator], scalar: LaurentPoly) -> AlgebraElement {
    use Generator::*;
    let mut word = word.to_vec();
    let mut q_exp = 0i64;
    'rewrite: loop {
        for i in 0..word.len().saturating_sub(1) {
            match (word[i], word[i + 1]) {
                (K, E) => {
                    word.swap(i, i + 1);
                    q_exp += 2;
                }
                (KInv, E) => {
                    word.swap(i, i + 1);
                    q_exp -= 2;
                }
                (K, KInv) | (KInv, K) => {
                    word.drain(i..i + 2);
                }
                _ => continue,
            }
            continue 'rewrite;
        }
        break;
    }
    let e = word.iter().filter(|g| **g == E).count() as u32;
    let k = word.iter().map(|g| match g {
        K => 1,
        KInv => -1,
        E => 0,
    });
    AlgebraElement::term(Monomial::new(e, k.sum()), scalar.shift(q_exp))
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let power = |sym: &str, exp: i64| match exp {
                0 => String::new(),
                1 => sym.to_string(),
                _ => format!("{sym}^{exp}"),
            };
            let word = [power("E", m.e as i64), power("K", m.k)]
                .into_iter()
                .filter(|s| !s.is_empty())
                .collect::<Vec<_>>()
                .join(" ");
            match (c.is_one(), word.is_empty()) {
                (true, true) => f.write_str("1")?,
                (true, false) => f.write_str(&word)?,
                (false, true) => write!(f, "({c})")?,
                (false, false) => write!(f, "({c}) {word}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    e: u32,
    k: i64,
    coeff: Vec<(i64, JsonInt, JsonInt)>,
}

impl Serialize for AlgebraElement {
    /// Canonical form: `[{e, k, coeff: [[exponent, num, den], ...]}, ...]`
    /// sorted by `(e, k)`, coefficient terms by exponent.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.terms.iter().map(|(m, c)| {
            TermRecord {
                e: m.e,
                k: m.k,
                coeff: c
                    .terms()
                    .map(|(x, r)| (x, JsonInt(r.numer().clone()), JsonInt(r.denom().clone())))
                    .collect(),
            }
        }))
    }
}

impl<'de> Deserialize<'de> for AlgebraElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(deserializer)?;
        let mut out = AlgebraElement::zero();
        for r in records {
            let mut coeff = LaurentPoly::zero();
            for (x, n, d) in r.coeff {
                if d.0.is_zero() {
                    return Err(serde::de::Error::custom("zero denominator"));
                }
                coeff.add_term(x, Rational::new(n.0, d.0));
            }
            out.add_term(Monomial::new(r.e, r.k), coeff);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcalc::{int, rat};
    use Generator::*;

    #[test]
    fn normal_order_examples() {
        assert_eq!(
            normal_order(&[K, E], LaurentPoly::one()),
            AlgebraElement::term(Monomial::new(1, 1), LaurentPoly::q_pow(2))
        );
        assert_eq!(
            normal_order(&[K, KInv], LaurentPoly::one()),
            AlgebraElement::one()
        );
        assert_eq!(
            normal_order(&[K, K, E, E], LaurentPoly::one()),
            AlgebraElement::term(Monomial::new(2, 2), LaurentPoly::q_pow(8))
        );
        assert_eq!(
            normal_order(&[KInv, E, K], LaurentPoly::constant(rat(1, 2))),
            AlgebraElement::term(Monomial::new(1, 0), LaurentPoly::term(rat(1, 2), -2))
        );
    }

    #[test]
    fn multiply_examples() {
        for l in -3..=3 {
            for m in -3..=3 {
                let x = AlgebraElement::monomial(Monomial::new(1, l));
                let y = AlgebraElement::monomial(Monomial::new(1, m));
                assert_eq!(
                    x.multiply(&y),
                    AlgebraElement::term(Monomial::new(2, l + m), LaurentPoly::q_pow(2 * l))
                );
            }
        }
        let x = AlgebraElement::term(Monomial::new(2, -1), LaurentPoly::constant(int(3)));
        assert_eq!(AlgebraElement::one().multiply(&x), x);
        assert_eq!(x.multiply(&AlgebraElement::one()), x);
        let ek = AlgebraElement::monomial(Monomial::new(1, 0))
            .multiply(&AlgebraElement::monomial(Monomial::new(0, 1)));
        assert_eq!(ek, AlgebraElement::monomial(Monomial::new(1, 1)));
    }

    #[test]
    fn multiply_agrees_with_rewriting_of_concatenated_words() {
        for x in Monomial::grid(3, 2) {
            for y in Monomial::grid(3, 2) {
                let mut word = x.word();
                word.extend(y.word());
                assert_eq!(
                    normal_order(&word, LaurentPoly::one()),
                    AlgebraElement::monomial(x).multiply(&AlgebraElement::monomial(y)),
                    "{x} * {y}"
                );
            }
        }
    }

    #[test]
    fn json_shape() {
        let mut x = AlgebraElement::monomial(Monomial::new(1, 0));
        x.add_term(
            Monomial::new(1, 1),
            LaurentPoly::from_terms([(2, int(1)), (0, int(1))]),
        );
        let text = serde_json::to_string(&x).unwrap();
        assert_eq!(
            text,
            r#"[{"e":1,"k":0,"coeff":[[0,1,1]]},{"e":1,"k":1,"coeff":[[0,1,1],[2,1,1]]}]"#
        );
        assert_eq!(serde_json::from_str::<AlgebraElement>(&text).unwrap(), x);
    }

    #[test]
    fn display() {
        let mut x = AlgebraElement::monomial(Monomial::new(1, 0));
        x.add_term(Monomial::new(1, 1), LaurentPoly::one());
        assert_eq!(x.to_string(), "E K + E");
        assert_eq!(
            AlgebraElement::monomial(Monomial::new(0, 6)).to_string(),
            "K^6"
        );
    }
}
