//! Exact law of X_n three ways: forward DP, the composition-sum formula and,
//! at q = 1, the binomial law.
//!
//! cargo run --example distribution

use hopfchain::markov::{distribution_dp, distribution_formula, expected_value, AlphaLaw};
use hopfchain::qcalc::{binomial, rat, Rational};

fn main() {
    let n = 8;
    for q in [rat(1, 2), rat(1, 1), rat(3, 1)] {
        let dp = distribution_dp(&AlphaLaw::geometric(q.clone()).unwrap(), n).unwrap();
        println!("q = {q}, n = {n}, E[X_n] = {}", expected_value(&dp));
        for k in 0..=n {
            let formula = distribution_formula(&q, n, k).unwrap();
            assert_eq!(formula, dp.get(k));
            println!("  P(X = {k}) = {}", dp.get(k));
        }
    }
    let dp = distribution_dp(&AlphaLaw::geometric(rat(1, 1)).unwrap(), n).unwrap();
    let binomial_law: Vec<Rational> = (0..=n)
        .map(|k| Rational::new(binomial(n, k), 1.into()) / Rational::from_integer(256.into()))
        .collect();
    assert_eq!(dp.mass, binomial_law);
    println!("q = 1 matches C(n,k)/2^n");
}
