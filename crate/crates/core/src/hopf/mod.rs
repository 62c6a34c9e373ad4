//! The sub-Hopf algebra of `U_q(sl2)` generated by `E` and `K`, with `K^{-1}`
//! admitted so the antipode can be checked.
//!
//! Relations: `K E = q^2 E K`, `K K^{-1} = K^{-1} K = 1`.
//! Structure maps on generators:
//!
//! ```text
//! Δ(E) = 1 ⊗ E + E ⊗ K     Δ(K) = K ⊗ K     Δ(K^{-1}) = K^{-1} ⊗ K^{-1}
//! ε(E) = 0                 ε(K) = ε(K^{-1}) = 1
//! S(E) = -E K^{-1}         S(K) = K^{-1}    S(K^{-1}) = K
//! ```

mod axioms;
mod element;
mod monomial;
mod tensor;

pub use axioms::{verify_axioms, Axiom, AxiomCheck, AxiomReport};
pub use element::{monomial_product, normal_order, AlgebraElement};
pub use monomial::{Generator, Monomial};
pub use tensor::{Tensor, TensorElement};

use crate::qcalc::{q_binomial, LaurentPoly};

/// `Δ(E^i K^l) = Σ_r q^{r(i-r)} [i choose r] E^{i-r} K^l ⊗ E^r K^{l+i-r}`.
pub fn coproduct(m: Monomial) -> TensorElement {
    let i = m.e;
    let mut out = TensorElement::zero();
    for r in 0..=i {
        let binom = q_binomial(i as u64, r as u64).expect("r <= i");
        let shift = r as i64 * (i - r) as i64;
        out.add_term(
            [
                Monomial::new(i - r, m.k),
                Monomial::new(r, m.k + (i - r) as i64),
            ],
            binom.shift(shift),
        );
    }
    out
}

/// Linear extension of [`coproduct`].
pub fn coproduct_element(x: &AlgebraElement) -> TensorElement {
    let mut out = TensorElement::zero();
    for (m, c) in x.terms() {
        out = out.add(&coproduct(*m).scale(c));
    }
    out
}

/// The coproduct of a word computed as the product of the generators' coproducts.
pub fn coproduct_of_word(word: &[Generator]) -> TensorElement {
    let one = LaurentPoly::one;
    word.iter().fold(
        TensorElement::term([Monomial::ONE, Monomial::ONE], one()),
        |acc, g| {
            let dg = match g {
                Generator::E => {
                    let mut t = TensorElement::term([Monomial::ONE, Monomial::new(1, 0)], one());
                    t.add_term([Monomial::new(1, 0), Monomial::new(0, 1)], one());
                    t
                }
                Generator::K => TensorElement::term([Monomial::new(0, 1); 2], one()),
                Generator::KInv => TensorElement::term([Monomial::new(0, -1); 2], one()),
            };
            acc.multiply(&dg)
        },
    )
}

/// `ε(E^i K^l)` is 1 in grading zero and 0 otherwise.
pub fn counit(m: Monomial) -> LaurentPoly {
    if m.e == 0 {
        LaurentPoly::one()
    } else {
        LaurentPoly::zero()
    }
}

/// Anti-homomorphic extension `S(E^i K^l) = S(K)^l S(E)^i`, normal-ordered.
pub fn antipode(m: Monomial) -> AlgebraElement {
    let s_e = AlgebraElement::term(Monomial::new(1, -1), -LaurentPoly::one());
    let mut out = AlgebraElement::monomial(Monomial::new(0, -m.k));
    for _ in 0..m.e {
        out = out.multiply(&s_e);
    }
    out
}

pub fn antipode_element(x: &AlgebraElement) -> AlgebraElement {
    x.map_linear(antipode)
}

/// The Hopf square `Ψ² = μ ∘ Δ`, contracted from the Sweedler summands of the coproduct.
pub fn hopf_square(m: Monomial) -> AlgebraElement {
    coproduct(m).multiply_legs(AlgebraElement::monomial, AlgebraElement::monomial)
}

pub fn hopf_square_element(x: &AlgebraElement) -> AlgebraElement {
    x.map_linear(hopf_square)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcalc::{int, q_number};

    fn m(e: u32, k: i64) -> Monomial {
        Monomial::new(e, k)
    }

    #[test]
    fn coproduct_examples() {
        let mut de = TensorElement::term([m(0, 0), m(1, 0)], LaurentPoly::one());
        de.add_term([m(1, 0), m(0, 1)], LaurentPoly::one());
        assert_eq!(coproduct(m(1, 0)), de);
        for l in -3..=3 {
            assert_eq!(
                coproduct(m(0, l)),
                TensorElement::term([m(0, l); 2], LaurentPoly::one())
            );
        }
        let mut dek = TensorElement::term([m(1, 1), m(0, 2)], LaurentPoly::one());
        dek.add_term([m(0, 1), m(1, 1)], LaurentPoly::one());
        assert_eq!(coproduct(m(1, 1)), dek);
    }

    #[test]
    fn closed_form_coproduct_matches_product_of_generator_coproducts() {
        for mono in Monomial::grid(5, 3) {
            let c = coproduct(mono);
            assert_eq!(c.len() as u32, mono.e + 1);
            assert_eq!(c, coproduct_of_word(&mono.word()), "{mono}");
        }
    }

    #[test]
    fn counit_examples() {
        assert!(counit(m(0, 5)).is_one());
        assert!(counit(m(1, 0)).is_zero());
        assert!(counit(m(2, 3)).is_zero());
    }

    #[test]
    fn antipode_examples() {
        assert_eq!(
            antipode(m(1, 0)),
            AlgebraElement::term(m(1, -1), -LaurentPoly::one())
        );
        for l in -3..=3 {
            assert_eq!(antipode(m(0, l)), AlgebraElement::monomial(m(0, -l)));
        }
        assert_eq!(
            antipode(m(2, 0)),
            AlgebraElement::term(m(2, -2), LaurentPoly::q_pow(-2))
        );
        for mono in Monomial::grid(4, 3) {
            let s = antipode(mono);
            assert_eq!(s.len(), 1);
            let (_, c) = s.terms().next().unwrap();
            assert_eq!(c.len(), 1);
            let sign = if mono.e % 2 == 0 { int(1) } else { int(-1) };
            assert_eq!(c.terms().next().unwrap().1, &sign);
        }
    }

    #[test]
    fn hopf_square_examples() {
        for l in 0..5 {
            assert_eq!(hopf_square(m(0, l)), AlgebraElement::monomial(m(0, 2 * l)));
        }
        let mut e = AlgebraElement::monomial(m(1, 1));
        e.add_term(m(1, 0), LaurentPoly::one());
        assert_eq!(hopf_square(m(1, 0)), e);
        let mut e2 = AlgebraElement::monomial(m(2, 2));
        e2.add_term(m(2, 1), &LaurentPoly::q_pow(2) + &LaurentPoly::one());
        e2.add_term(m(2, 0), LaurentPoly::one());
        assert_eq!(hopf_square(m(2, 0)), e2);
        assert_eq!(
            hopf_square(m(2, 0)).coefficient(&m(2, 1)),
            &LaurentPoly::q_pow(1) * &q_number(2)
        );
    }

    #[test]
    fn hopf_square_is_homogeneous_with_positive_coefficients() {
        for mono in Monomial::grid(5, 4) {
            let sq = hopf_square(mono);
            assert_eq!(sq.homogeneous_grading(), Some(mono.e));
            assert_eq!(sq.len() as u32, mono.e + 1);
            let ks: Vec<i64> = sq.terms().map(|(x, _)| x.k).collect();
            let lo = 2 * mono.k;
            assert_eq!(ks, (lo..=lo + mono.e as i64).collect::<Vec<_>>());
            assert!(sq
                .terms()
                .all(|(_, c)| c.has_nonnegative_integer_coefficients()));
            assert!(coproduct(mono)
                .terms()
                .all(|(_, c)| c.has_nonnegative_integer_coefficients()));
        }
    }
}
