use std::fmt;

use serde::{Deserialize, Serialize};

use super::{antipode, coproduct, counit, AlgebraElement, Monomial, TensorElement};
use crate::qcalc::LaurentPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Associativity,
    Coassociativity,
    CounitLeft,
    CounitRight,
    CoproductMultiplicative,
    CounitMultiplicative,
    AntipodeLeft,
    AntipodeRight,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            Axiom::Associativity => "(xy)z = x(yz)",
            Axiom::Coassociativity => "(Δ⊗id)Δ = (id⊗Δ)Δ",
            Axiom::CounitLeft => "(ε⊗id)Δ = id",
            Axiom::CounitRight => "(id⊗ε)Δ = id",
            Axiom::CoproductMultiplicative => "Δ(xy) = Δ(x)Δ(y)",
            Axiom::CounitMultiplicative => "ε(xy) = ε(x)ε(y)",
            Axiom::AntipodeLeft => "μ(S⊗id)Δ = ηε",
            Axiom::AntipodeRight => "μ(id⊗S)Δ = ηε",
        };
        f.write_str(text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub cases: usize,
    pub passed: bool,
    /// The first failing input, rendered as text.
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub max_i: u32,
    pub max_abs_l: i64,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, axiom: Axiom) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "monomials E^i K^l with i <= {}, |l| <= {}",
            self.max_i, self.max_abs_l
        )?;
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            write!(
                f,
                "  {status}  {:<22} {:>6} cases",
                c.axiom.to_string(),
                c.cases
            )?;
            if let Some(ce) = &c.counterexample {
                write!(f, "  first counterexample: {ce}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

struct Tally {
    axiom: Axiom,
    cases: usize,
    counterexample: Option<String>,
}

impl Tally {
    fn new(axiom: Axiom) -> Self {
        Self {
            axiom,
            cases: 0,
            counterexample: None,
        }
    }

    fn record(&mut self, ok: bool, input: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(input());
        }
    }

    fn finish(self) -> AxiomCheck {
        AxiomCheck {
            axiom: self.axiom,
            cases: self.cases,
            passed: self.counterexample.is_none(),
            counterexample: self.counterexample,
        }
    }
}

/// Symbolically checks the bialgebra and Hopf axioms on every monomial
/// `E^i K^l` with `i <= max_i`, `|l| <= max_abs_l` (pairs and triples of
/// them for the multiplicative laws). Failures are reported as data.
pub fn verify_axioms(max_i: u32, max_abs_l: i64) -> AxiomReport {
    let grid = Monomial::grid(max_i, max_abs_l);
    let mono = AlgebraElement::monomial;

    let mut coassoc = Tally::new(Axiom::Coassociativity);
    let mut counit_left = Tally::new(Axiom::CounitLeft);
    let mut counit_right = Tally::new(Axiom::CounitRight);
    let mut antipode_left = Tally::new(Axiom::AntipodeLeft);
    let mut antipode_right = Tally::new(Axiom::AntipodeRight);
    for &m in &grid {
        let delta = coproduct(m);
        let left = delta.expand_left(coproduct);
        let right = delta.expand_right(coproduct);
        coassoc.record(left == right, || m.to_string());

        counit_left.record(delta.contract_left(counit) == mono(m), || m.to_string());
        counit_right.record(delta.contract_right(counit) == mono(m), || m.to_string());

        let unit_counit = AlgebraElement::term(Monomial::ONE, counit(m));
        antipode_left.record(delta.multiply_legs(antipode, mono) == unit_counit, || {
            m.to_string()
        });
        antipode_right.record(delta.multiply_legs(mono, antipode) == unit_counit, || {
            m.to_string()
        });
    }

    let mut delta_mult = Tally::new(Axiom::CoproductMultiplicative);
    let mut counit_mult = Tally::new(Axiom::CounitMultiplicative);
    for &x in &grid {
        for &y in &grid {
            let xy = mono(x).multiply(&mono(y));
            let lhs = xy.terms().fold(TensorElement::zero(), |acc, (m, c)| {
                acc.add(&coproduct(*m).scale(c))
            });
            let rhs = coproduct(x).multiply(&coproduct(y));
            delta_mult.record(lhs == rhs, || format!("x = {x}, y = {y}"));

            let eps_xy = xy
                .terms()
                .fold(LaurentPoly::zero(), |acc, (m, c)| &acc + &(c * &counit(*m)));
            counit_mult.record(eps_xy == &counit(x) * &counit(y), || {
                format!("x = {x}, y = {y}")
            });
        }
    }

    // Associativity on a smaller grid; the triple loop grows as |grid|^3.
    let mut assoc = Tally::new(Axiom::Associativity);
    let small = Monomial::grid(max_i.min(3), max_abs_l.min(2));
    for &x in &small {
        for &y in &small {
            for &z in &small {
                let lhs = mono(x).multiply(&mono(y)).multiply(&mono(z));
                let rhs = mono(x).multiply(&mono(y).multiply(&mono(z)));
                assoc.record(lhs == rhs, || format!("x = {x}, y = {y}, z = {z}"));
            }
        }
    }

    AxiomReport {
        max_i,
        max_abs_l,
        checks: vec![
            assoc.finish(),
            coassoc.finish(),
            counit_left.finish(),
            counit_right.finish(),
            delta_mult.finish(),
            counit_mult.finish(),
            antipode_left.finish(),
            antipode_right.finish(),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grouplike_part_passes() {
        let report = verify_axioms(0, 3);
        assert!(report.all_passed(), "{report}");
        assert_eq!(report.check(Axiom::Coassociativity).unwrap().cases, 7);
    }

    #[test]
    fn low_gradings_pass() {
        let report = verify_axioms(1, 2);
        assert!(report.all_passed(), "{report}");
        assert_eq!(
            report.check(Axiom::CoproductMultiplicative).unwrap().cases,
            100
        );
    }

    #[test]
    fn wrong_antipode_is_caught() {
        // S(E) = -E K^{-1} is forced; dropping the sign must break μ(S⊗id)Δ(E) = 0.
        let wrong = |m: Monomial| {
            let s = antipode(m);
            if m.e % 2 == 1 {
                s.scale(&-LaurentPoly::one())
            } else {
                s
            }
        };
        let delta = coproduct(Monomial::new(1, 0));
        assert!(!delta
            .multiply_legs(wrong, AlgebraElement::monomial)
            .is_zero());
        assert!(delta
            .multiply_legs(antipode, AlgebraElement::monomial)
            .is_zero());
    }
}
