use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{AlphaLaw, EnclosedLaw, ForwardLaw};
use crate::error::{Error, Result};
use crate::qcalc::Rational;

/// One cell of a phase scan: `E[X_n] / n` at a given `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseRow {
    #[serde(with = "crate::json::rational")]
    pub q: Rational,
    pub n: u64,
    #[serde(with = "crate::json::rational")]
    pub ratio: Rational,
}

/// A certified interval `lower <= E[X_n] / n <= upper`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseBoundsRow {
    #[serde(with = "crate::json::rational")]
    pub q: Rational,
    pub n: u64,
    #[serde(with = "crate::json::rational")]
    pub lower: Rational,
    #[serde(with = "crate::json::rational")]
    pub upper: Rational,
}

fn sorted_grid(q_list: &[Rational], n_list: &[u64]) -> Result<(Vec<Rational>, Vec<u64>)> {
    let mut qs = q_list.to_vec();
    qs.sort();
    qs.dedup();
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if ns.first() == Some(&0) {
        return Err(Error::Precondition(
            "phase scan horizons must be >= 1".into(),
        ));
    }
    Ok((qs, ns))
}

/// Exact `E[X_n]/n` for every `(q, n)` from the forward law; rows ordered by `(q, n)`.
pub fn phase_scan(q_list: &[Rational], n_list: &[u64]) -> Result<Vec<PhaseRow>> {
    let (qs, ns) = sorted_grid(q_list, n_list)?;
    let per_q: Vec<Result<Vec<PhaseRow>>> = qs
        .par_iter()
        .map(|q| {
            let mut law = ForwardLaw::new(AlphaLaw::geometric(q.clone())?);
            ns.iter()
                .map(|&n| {
                    law.advance_to(n)?;
                    Ok(PhaseRow {
                        q: q.clone(),
                        n,
                        ratio: law.expected_value() / Rational::from_integer(BigInt::from(n)),
                    })
                })
                .collect()
        })
        .collect();
    Ok(per_q.into_iter().collect::<Result<Vec<_>>>()?.concat())
}

/// Certified bounds on `E[X_n]/n`, for horizons beyond exact reach.
pub fn phase_scan_enclosed(q_list: &[Rational], n_list: &[u64]) -> Result<Vec<PhaseBoundsRow>> {
    let (qs, ns) = sorted_grid(q_list, n_list)?;
    let per_q: Vec<Result<Vec<PhaseBoundsRow>>> = qs
        .par_iter()
        .map(|q| {
            let mut law = EnclosedLaw::new(AlphaLaw::geometric(q.clone())?);
            ns.iter()
                .map(|&n| {
                    law.advance_to(n)?;
                    let (lower, upper) = law.ratio_bounds();
                    Ok(PhaseBoundsRow {
                        q: q.clone(),
                        n,
                        lower,
                        upper,
                    })
                })
                .collect()
        })
        .collect();
    Ok(per_q.into_iter().collect::<Result<Vec<_>>>()?.concat())
}

pub fn phase_rows_to_csv(rows: &[PhaseRow]) -> String {
    let mut out = String::from("q_num,q_den,n,ratio_num,ratio_den\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.q.numer(),
            r.q.denom(),
            r.n,
            r.ratio.numer(),
            r.ratio.denom()
        );
    }
    out
}

pub fn phase_bounds_to_csv(rows: &[PhaseBoundsRow]) -> String {
    let mut out = String::from("q_num,q_den,n,lower_num,lower_den,upper_num,upper_den\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.q.numer(),
            r.q.denom(),
            r.n,
            r.lower.numer(),
            r.lower.denom(),
            r.upper.numer(),
            r.upper.denom()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcalc::{int, rat};

    #[test]
    fn q_one_is_exactly_one_half() {
        let rows = phase_scan(&[int(1)], &[1, 7, 64, 300]).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.ratio == rat(1, 2)));
    }

    #[test]
    fn rows_are_ordered_by_q_then_n() {
        let rows = phase_scan(&[int(2), rat(1, 2)], &[16, 4]).unwrap();
        let keys: Vec<(Rational, u64)> = rows.iter().map(|r| (r.q.clone(), r.n)).collect();
        assert_eq!(
            keys,
            vec![(rat(1, 2), 4), (rat(1, 2), 16), (int(2), 4), (int(2), 16)]
        );
        assert!(phase_scan(&[int(2)], &[0]).is_err());
    }

    #[test]
    fn small_horizon_trends() {
        let rows = phase_scan(&[rat(1, 2), int(2)], &[8, 16, 32, 64]).unwrap();
        let (low, high) = rows.split_at(4);
        assert!(low.windows(2).all(|w| w[1].ratio > w[0].ratio));
        assert!(high.windows(2).all(|w| w[1].ratio < w[0].ratio));
    }

    #[test]
    fn enclosures_contain_exact_ratios() {
        let exact = phase_scan(&[rat(1, 3), int(3)], &[10, 40]).unwrap();
        let bounds = phase_scan_enclosed(&[rat(1, 3), int(3)], &[10, 40]).unwrap();
        for (e, b) in exact.iter().zip(&bounds) {
            assert!(b.lower <= e.ratio && e.ratio <= b.upper);
        }
    }
}
