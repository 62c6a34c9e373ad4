use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::element::{monomial_product, AlgebraElement};
use super::monomial::Monomial;
use crate::json::JsonInt;
use crate::qcalc::LaurentPoly;

/// An element of the `N`-fold tensor power. Legs are normal-ordered
/// independently and never commute across the tensor symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor<const N: usize> {
    terms: BTreeMap<[Monomial; N], LaurentPoly>,
}

/// `H ⊗ H`, the codomain of the coproduct.
pub type TensorElement = Tensor<2>;

impl<const N: usize> Default for Tensor<N> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<const N: usize> Tensor<N> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(legs: [Monomial; N], coeff: LaurentPoly) -> Self {
        let mut out = Self::zero();
        out.add_term(legs, coeff);
        out
    }

    pub fn add_term(&mut self, legs: [Monomial; N], coeff: LaurentPoly) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(legs).or_default();
        *slot = &*slot + &coeff;
        if slot.is_zero() {
            self.terms.remove(&legs);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Monomial; N], &LaurentPoly)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (legs, c) in &other.terms {
            out.add_term(*legs, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero();
        for (legs, x) in &self.terms {
            out.add_term(*legs, x * c);
        }
        out
    }

    /// Leg-wise product `(a ⊗ b)(c ⊗ d) = ac ⊗ bd`.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (xa, ca) in &self.terms {
            for (xb, cb) in &other.terms {
                let mut shift = 0;
                let legs: [Monomial; N] = std::array::from_fn(|i| {
                    let (m, s) = monomial_product(xa[i], xb[i]);
                    shift += s;
                    m
                });
                out.add_term(legs, (ca * cb).shift(shift));
            }
        }
        out
    }
}

impl Tensor<2> {
    /// `(f ⊗ id)(a ⊗ b) = f(a) ⊗ b` for `f: H -> H ⊗ H`.
    pub fn expand_left(&self, f: impl Fn(Monomial) -> Tensor<2>) -> Tensor<3> {
        let mut out = Tensor::<3>::zero();
        for ([a, b], c) in &self.terms {
            for ([a1, a2], ca) in f(*a).terms() {
                out.add_term([*a1, *a2, *b], ca * c);
            }
        }
        out
    }

    /// `(id ⊗ f)(a ⊗ b) = a ⊗ f(b)`.
    pub fn expand_right(&self, f: impl Fn(Monomial) -> Tensor<2>) -> Tensor<3> {
        let mut out = Tensor::<3>::zero();
        for ([a, b], c) in &self.terms {
            for ([b1, b2], cb) in f(*b).terms() {
                out.add_term([*a, *b1, *b2], cb * c);
            }
        }
        out
    }

    /// `(f ⊗ g)` with scalar-valued `f` on the left leg: `Σ f(a)·b`.
    pub fn contract_left(&self, f: impl Fn(Monomial) -> LaurentPoly) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for ([a, b], c) in &self.terms {
            out.add_term(*b, c * &f(*a));
        }
        out
    }

    /// `Σ a·g(b)` with scalar-valued `g` on the right leg.
    pub fn contract_right(&self, g: impl Fn(Monomial) -> LaurentPoly) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for ([a, b], c) in &self.terms {
            out.add_term(*a, c * &g(*b));
        }
        out
    }

    /// The multiplication map `μ(Σ a ⊗ b) = Σ f(a)·g(b)` after applying
    /// linear maps to each leg.
    pub fn multiply_legs(
        &self,
        f: impl Fn(Monomial) -> AlgebraElement,
        g: impl Fn(Monomial) -> AlgebraElement,
    ) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for ([a, b], c) in &self.terms {
            out = out.add(&f(*a).multiply(&g(*b)).scale(c));
        }
        out
    }
}

impl<const N: usize> fmt::Display for Tensor<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (legs, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if !c.is_one() {
                write!(f, "({c}) ")?;
            }
            let legs: Vec<String> = legs
                .iter()
                .map(|m| AlgebraElement::monomial(*m).to_string())
                .collect();
            f.write_str(&legs.join(" ⊗ "))?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct LegRecord {
    e: u32,
    k: i64,
}

#[derive(Serialize)]
struct TensorRecord {
    legs: Vec<LegRecord>,
    coeff: Vec<(i64, JsonInt, JsonInt)>,
}

impl<const N: usize> Serialize for Tensor<N> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.terms.iter().map(|(legs, c)| {
            TensorRecord {
                legs: legs.iter().map(|m| LegRecord { e: m.e, k: m.k }).collect(),
                coeff: c
                    .terms()
                    .map(|(x, r)| (x, JsonInt(r.numer().clone()), JsonInt(r.denom().clone())))
                    .collect(),
            }
        }))
    }
}
