//! Markov chains read off the Hopf square on a fixed grading.
//!
//! On grading `i` the Hopf square factors as `Ψ² = Φ_i ∘ D`, where the
//! doubling `D: E^i K^l -> E^i K^{2l}` is deterministic and
//!
//! ```text
//! Φ_i(E^i K^m) = Σ_r q^{r(i-r+m)} [i choose r] E^i K^{m+i-r}
//! ```
//!
//! carries the randomness. Normalizing the evaluated coefficients of
//! `Φ_i(E^i K^m)` by their sum gives the transition row out of state `m`.

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcalc::{ensure_positive, q_binomial, LaurentPoly, Rational};

/// Jump coefficients of `Φ_i` out of state `m`, indexed by jump size `0..=i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JumpLaw {
    pub grading: u32,
    pub state: u64,
    /// `(jump, coefficient)` with jumps in increasing order.
    pub entries: Vec<(u32, LaurentPoly)>,
}

impl JumpLaw {
    pub fn coefficient(&self, jump: u32) -> Option<&LaurentPoly> {
        self.entries
            .iter()
            .find(|(s, _)| *s == jump)
            .map(|(_, c)| c)
    }

    /// The normalization `N = Σ coefficients` as a Laurent polynomial.
    pub fn normalization(&self) -> LaurentPoly {
        self.entries
            .iter()
            .fold(LaurentPoly::zero(), |acc, (_, c)| &acc + c)
    }
}

/// `Φ_i` on `E^i K^m`: the entry for jump `s = i - r` has coefficient
/// `q^{r(i-r+m)} [i choose r]`.
pub fn phi_coefficients(grading: u32, state: u64) -> Result<JumpLaw> {
    let i = grading;
    let m = i64::try_from(state).map_err(|_| Error::ExponentOverflow)?;
    let mut entries = Vec::with_capacity(i as usize + 1);
    for jump in 0..=i {
        let r = i - jump;
        let exponent = (r as i64)
            .checked_mul(jump as i64 + m)
            .ok_or(Error::ExponentOverflow)?;
        let coeff = q_binomial(i as u64, r as u64)?.shift(exponent);
        entries.push((jump, coeff));
    }
    Ok(JumpLaw {
        grading,
        state,
        entries,
    })
}

/// The deterministic part of the Hopf square: state `l` moves to `2l`.
pub fn doubling_map(state: u64) -> u64 {
    state * 2
}

/// Jump probabilities out of `state`, indexed by jump size `0..=grading`.
///
/// Fails with [`Error::NonPositiveCoefficient`] if any evaluated coefficient
/// is not strictly positive; that check is what makes the row a Markov row.
pub fn jump_probabilities(grading: u32, q: &Rational, state: u64) -> Result<Vec<Rational>> {
    ensure_positive(q)?;
    let law = phi_coefficients(grading, state)?;
    let mut values = Vec::with_capacity(law.entries.len());
    for (jump, coeff) in &law.entries {
        let value = coeff.eval(q)?;
        if !value.is_positive() {
            return Err(Error::NonPositiveCoefficient {
                state,
                jump: *jump,
                value,
            });
        }
        values.push(value);
    }
    let total: Rational = values.iter().sum();
    Ok(values.into_iter().map(|v| v / &total).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub target: u64,
    #[serde(with = "crate::json::rational")]
    pub p: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub state: u64,
    pub moves: Vec<Move>,
}

impl Row {
    pub fn total(&self) -> Rational {
        self.moves.iter().map(|m| &m.p).sum()
    }
}

/// The tabulated chain of one grading at a fixed `q`, rows `0..=max_state`.
///
/// Rows beyond the table are available through [`ChainSpec::row_probabilities`],
/// which recomputes them from the closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub grading: u32,
    #[serde(rename = "q", with = "crate::json::rational")]
    pub q_value: Rational,
    pub rows: Vec<Row>,
}

impl ChainSpec {
    pub fn row(&self, state: u64) -> Option<&Row> {
        self.rows.get(usize::try_from(state).ok()?)
    }

    /// Jump probabilities for any state, tabulated or not.
    pub fn row_probabilities(&self, state: u64) -> Result<Vec<Rational>> {
        match self.row(state) {
            Some(row) => Ok(row.moves.iter().map(|m| m.p.clone()).collect()),
            None => jump_probabilities(self.grading, &self.q_value, state),
        }
    }
}

/// Tabulates rows `0..=max_state` of the grading-`i` chain at `q0`.
pub fn build_chain_spec(grading: u32, q0: &Rational, max_state: u64) -> Result<ChainSpec> {
    if grading == 0 {
        return Err(Error::Precondition(
            "grading 0 is the deterministic doubling; use doubling_map".into(),
        ));
    }
    ensure_positive(q0)?;
    let rows = (0..=max_state)
        .map(|state| {
            let probs = jump_probabilities(grading, q0, state)?;
            Ok(Row {
                state,
                moves: probs
                    .into_iter()
                    .enumerate()
                    .map(|(jump, p)| Move {
                        target: state + jump as u64,
                        p,
                    })
                    .collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChainSpec {
        grading,
        q_value: q0.clone(),
        rows,
    })
}

/// One step of the un-split chain from `E^i K^l`: double, then apply `Φ_i`.
/// Targets are `2l, ..., 2l + i`.
pub fn full_step_row(grading: u32, q0: &Rational, state: u64) -> Result<Vec<(u64, Rational)>> {
    ensure_positive(q0)?;
    let doubled = doubling_map(state);
    if grading == 0 {
        return Ok(vec![(doubled, Rational::one())]);
    }
    let probs = jump_probabilities(grading, q0, doubled)?;
    Ok(probs
        .into_iter()
        .enumerate()
        .map(|(jump, p)| (doubled + jump as u64, p))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{hopf_square, Monomial};
    use crate::qcalc::{int, q_number, rat};

    #[test]
    fn phi_examples() {
        for l in 0..6u64 {
            let law = phi_coefficients(1, l).unwrap();
            assert_eq!(law.entries.len(), 2);
            assert!(law.coefficient(1).unwrap().is_one());
            assert_eq!(law.coefficient(0).unwrap(), &LaurentPoly::q_pow(l as i64));
        }
        let zero = phi_coefficients(0, 17).unwrap();
        assert_eq!(zero.entries, vec![(0, LaurentPoly::one())]);
        for l in 0..6i64 {
            let law = phi_coefficients(2, l as u64).unwrap();
            assert!(law.coefficient(2).unwrap().is_one());
            assert_eq!(
                law.coefficient(1).unwrap(),
                &(&LaurentPoly::q_pow(1 + l) * &q_number(2))
            );
            assert_eq!(law.coefficient(0).unwrap(), &LaurentPoly::q_pow(2 * l));
        }
    }

    #[test]
    fn doubling() {
        assert_eq!(doubling_map(0), 0);
        assert_eq!(doubling_map(3), 6);
        assert_eq!(doubling_map(10), 20);
    }

    #[test]
    fn grading_one_rows() {
        let spec = build_chain_spec(1, &int(2), 3).unwrap();
        let probs: Vec<Vec<Rational>> = spec
            .rows
            .iter()
            .map(|r| r.moves.iter().map(|m| m.p.clone()).collect())
            .collect();
        assert_eq!(probs[0], vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(probs[1], vec![rat(2, 3), rat(1, 3)]);
        assert_eq!(probs[2], vec![rat(4, 5), rat(1, 5)]);
        assert_eq!(probs[3], vec![rat(8, 9), rat(1, 9)]);
        assert_eq!(spec.rows[2].moves[1].target, 3);
    }

    #[test]
    fn grading_two_at_q_one() {
        let spec = build_chain_spec(2, &int(1), 0).unwrap();
        let p: Vec<Rational> = spec.rows[0].moves.iter().map(|m| m.p.clone()).collect();
        assert_eq!(p, vec![rat(1, 4), rat(1, 2), rat(1, 4)]);
    }

    #[test]
    fn grading_two_matches_displayed_transition_matrix() {
        // T(l,l) = q^{2l}/N, T(l,l+1) = q^{1+l}(q+q^{-1})/N, T(l,l+2) = 1/N.
        for q in [rat(1, 3), rat(1, 2), int(2), int(3)] {
            for l in 0..8i64 {
                let ql = |e: i64| crate::qcalc::pow(&q, e).unwrap();
                let mid = ql(1 + l) * (q.clone() + ql(-1));
                let n = int(1) + mid.clone() + ql(2 * l);
                let expected = vec![ql(2 * l) / &n, mid / &n, int(1) / &n];
                assert_eq!(jump_probabilities(2, &q, l as u64).unwrap(), expected);
            }
        }
    }

    #[test]
    fn rejects_bad_q_and_grading() {
        assert_eq!(
            build_chain_spec(1, &int(0), 3),
            Err(Error::NonPositiveQ(int(0)))
        );
        assert!(build_chain_spec(1, &int(-2), 3).is_err());
        assert!(matches!(
            build_chain_spec(0, &int(2), 3),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn full_step_examples() {
        assert_eq!(
            full_step_row(1, &int(2), 1).unwrap(),
            vec![(2, rat(4, 5)), (3, rat(1, 5))]
        );
        assert_eq!(
            full_step_row(1, &int(1), 0).unwrap(),
            vec![(0, rat(1, 2)), (1, rat(1, 2))]
        );
        assert_eq!(full_step_row(0, &rat(7, 3), 4).unwrap(), vec![(8, int(1))]);
    }

    #[test]
    fn rows_are_stochastic_on_the_grid() {
        for q in [rat(1, 3), rat(1, 2), int(1), int(2), int(3)] {
            for i in 1..=5 {
                let spec = build_chain_spec(i, &q, 20).unwrap();
                for row in &spec.rows {
                    assert_eq!(row.total(), int(1));
                    assert!(row.moves.iter().all(|m| m.p.is_positive() && m.p <= int(1)));
                    assert_eq!(row.moves.len() as u32, i + 1);
                }
            }
        }
    }

    #[test]
    fn doubling_then_phi_is_the_hopf_square() {
        for i in 0..=5u32 {
            for l in 0..=6u64 {
                let square = hopf_square(Monomial::new(i, l as i64));
                let law = phi_coefficients(i, doubling_map(l)).unwrap();
                assert_eq!(square.len(), law.entries.len());
                for (jump, coeff) in &law.entries {
                    let target = Monomial::new(i, (doubling_map(l) + *jump as u64) as i64);
                    assert_eq!(
                        &square.coefficient(&target),
                        coeff,
                        "i={i} l={l} jump={jump}"
                    );
                }
            }
        }
    }

    #[test]
    fn json_layout() {
        let spec = build_chain_spec(1, &int(2), 1).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            text,
            r#"{"grading":1,"q":[2,1],"rows":[{"state":0,"moves":[{"target":0,"p":[1,2]},{"target":1,"p":[1,2]}]},{"state":1,"moves":[{"target":1,"p":[2,3]},{"target":2,"p":[1,3]}]}]}"#
        );
        assert_eq!(serde_json::from_str::<ChainSpec>(&text).unwrap(), spec);
    }
}
