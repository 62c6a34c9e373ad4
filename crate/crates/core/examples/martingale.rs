//! The compensated chain Y_n = X_n - n + h(X_n): one-step identity,
//! compensator inverse, variance and increments.
//!
//! cargo run --example martingale

use hopfchain::markov::AlphaLaw;
use hopfchain::martingale::{
    expected_y_backward, increment_bound_check, variance_ledger, verify_one_step, Compensator,
};
use hopfchain::qcalc::{format_rational, rat, Rational};

fn main() {
    let table =
        AlphaLaw::table(vec![rat(1, 3), rat(1, 2), rat(0, 1), rat(3, 4), rat(1, 5)]).unwrap();
    for law in [AlphaLaw::geometric(rat(2, 1)).unwrap(), table] {
        let report = verify_one_step(&law, 3, 5).unwrap();
        println!("{law}: {report}");
    }

    let comp = Compensator::new(AlphaLaw::geometric(rat(2, 1)).unwrap());
    for v in [0, 10, 1000] {
        let x = comp.inverse(&rat(v, 1)).unwrap();
        println!("largest x with h(x) <= {v}: {x}");
    }

    let law = AlphaLaw::geometric(rat(1, 2)).unwrap();
    println!("E[Y_100] = {}", expected_y_backward(&law, 100).unwrap());

    let ledger = variance_ledger(&rat(1, 2), 40).unwrap();
    let mut total = Rational::from_integer(0.into());
    for (i, term) in ledger.iter().enumerate() {
        total += term;
        if (i + 1) % 10 == 0 {
            println!("Var(Y_{}) = {:.6}", i + 1, to_f64(&total));
        }
    }
    println!(
        "max |Y_n - Y_(n-1)| for q = 1/2: {}",
        format_rational(&increment_bound_check(&rat(1, 2), 50).unwrap())
    );
}

fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap()
}
