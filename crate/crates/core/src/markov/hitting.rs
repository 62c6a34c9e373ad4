//! Expected first-passage time from 0 to a target state `N`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::AlphaLaw;
use crate::error::{Error, Result};
use crate::qcalc::{ensure_positive, pow, Rational};

/// `N + (q^N - 1)/(q - 1)`; at `q = 1` the summation form `Σ_{i<N} (1 + q^i) = 2N`.
pub fn hitting_time_closed(q0: &Rational, target: u64) -> Result<Rational> {
    ensure_positive(q0)?;
    let n = Rational::from_integer(BigInt::from(target));
    if q0.is_one() {
        return Ok(n * Rational::from_integer(BigInt::from(2)));
    }
    let qn = pow(
        q0,
        i64::try_from(target).map_err(|_| Error::ExponentOverflow)?,
    )?;
    Ok(n + (qn - Rational::one()) / (q0 - Rational::one()))
}

/// `Σ_{i<N} 1 / (1 - α(i))`.
pub fn hitting_time_general(alpha: &AlphaLaw, target: u64) -> Result<Rational> {
    (0..target).try_fold(Rational::zero(), |acc, i| {
        Ok(acc + alpha.success(i)?.recip())
    })
}

/// The `(N+1) x (N+1)` transition matrix with state `N` made absorbing.
pub fn absorbing_matrix(alpha: &AlphaLaw, target: u64) -> Result<Vec<Vec<Rational>>> {
    let size = target as usize + 1;
    let mut p = vec![vec![Rational::zero(); size]; size];
    for i in 0..target as usize {
        let a = alpha.alpha(i as u64)?;
        p[i][i + 1] = Rational::one() - &a;
        p[i][i] = a;
    }
    p[target as usize][target as usize] = Rational::one();
    Ok(p)
}

/// `I - Q` for the transient block `Q` (first `N` rows and columns).
fn transient_system(alpha: &AlphaLaw, target: u64) -> Result<Vec<Vec<Rational>>> {
    let p = absorbing_matrix(alpha, target)?;
    let n = target as usize;
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let id = if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    };
                    id - &p[i][j]
                })
                .collect()
        })
        .collect())
}

/// Solves `U x = b` for upper-triangular `U` by back-substitution.
fn back_substitute(upper: &[Vec<Rational>], rhs: &[Rational]) -> Result<Vec<Rational>> {
    let n = rhs.len();
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = rhs[i].clone();
        for j in i + 1..n {
            if !upper[i][j].is_zero() {
                acc -= &upper[i][j] * &x[j];
            }
        }
        if upper[i][i].is_zero() {
            return Err(Error::Precondition(format!(
                "state {i} is absorbing before the target"
            )));
        }
        x[i] = acc / &upper[i][i];
    }
    Ok(x)
}

/// The fundamental matrix `W = (I - Q)^{-1}` of the chain absorbed at `N`.
pub fn fundamental_matrix(alpha: &AlphaLaw, target: u64) -> Result<Vec<Vec<Rational>>> {
    let system = transient_system(alpha, target)?;
    let n = target as usize;
    let mut w = vec![vec![Rational::zero(); n]; n];
    for col in 0..n {
        let e: Vec<Rational> = (0..n)
            .map(|i| {
                if i == col {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        for (row, v) in w.iter_mut().zip(back_substitute(&system, &e)?) {
            row[col] = v;
        }
    }
    Ok(w)
}

/// Expected absorption time from 0: `t_0` where `(I - Q) t = 1`.
pub fn hitting_time_matrix(alpha: &AlphaLaw, target: u64) -> Result<Rational> {
    if target == 0 {
        return Err(Error::Precondition(
            "the absorbing chain needs N >= 1".into(),
        ));
    }
    let system = transient_system(alpha, target)?;
    let ones = vec![Rational::one(); target as usize];
    Ok(back_substitute(&system, &ones)?.swap_remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcalc::{int, rat};

    #[test]
    fn closed_form_examples() {
        for q in [rat(1, 3), rat(1, 2), int(1), int(2), int(3)] {
            assert_eq!(hitting_time_closed(&q, 1).unwrap(), int(2));
            assert_eq!(hitting_time_closed(&q, 0).unwrap(), int(0));
        }
        assert_eq!(hitting_time_closed(&int(1), 5).unwrap(), int(10));
        assert_eq!(hitting_time_closed(&int(2), 2).unwrap(), int(5));
    }

    #[test]
    fn general_examples() {
        assert_eq!(
            hitting_time_general(&AlphaLaw::constant(int(0)).unwrap(), 7).unwrap(),
            int(7)
        );
        let t = AlphaLaw::table(vec![int(0), rat(1, 2), rat(2, 3)]).unwrap();
        assert_eq!(hitting_time_general(&t, 3).unwrap(), int(6));
        assert!(hitting_time_general(&t, 4).is_err());
    }

    #[test]
    fn matrix_examples() {
        let g2 = AlphaLaw::geometric(int(2)).unwrap();
        assert_eq!(hitting_time_matrix(&g2, 2).unwrap(), int(5));
        let g1 = AlphaLaw::geometric(int(1)).unwrap();
        assert_eq!(hitting_time_matrix(&g1, 3).unwrap(), int(6));
        assert!(hitting_time_matrix(&g1, 0).is_err());
    }

    #[test]
    fn fundamental_matrix_has_the_expected_upper_triangular_shape() {
        // Row i of W is (0, ..., 0, 1+q^i, ..., 1+q^{N-1}).
        let q = rat(3, 2);
        let law = AlphaLaw::geometric(q.clone()).unwrap();
        let w = fundamental_matrix(&law, 6).unwrap();
        for (i, row) in w.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let expected = if j < i {
                    int(0)
                } else {
                    int(1) + pow(&q, j as i64).unwrap()
                };
                assert_eq!(v, &expected, "W[{i}][{j}]");
            }
        }
        let row0: Rational = w[0].iter().sum();
        let direct: Rational = (0..6).map(|i| int(1) + pow(&q, i).unwrap()).sum();
        assert_eq!(row0, direct);
        assert_eq!(row0, hitting_time_closed(&q, 6).unwrap());
    }
}
