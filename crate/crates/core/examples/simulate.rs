//! Seeded Monte Carlo estimates of E[X_n]/n and a sampled path.
//!
//! cargo run --release --example simulate

use hopfchain::chain_extract::build_chain_spec;
use hopfchain::markov::AlphaLaw;
use hopfchain::montecarlo::{estimate_ratio, sample_trajectory, GrowthChain};
use hopfchain::qcalc::rat;

fn main() {
    for q in [rat(1, 2), rat(1, 1), rat(2, 1)] {
        let chain = GrowthChain::Alpha(AlphaLaw::geometric(q.clone()).unwrap());
        let est = estimate_ratio(&chain, 1000, 10_000, 7, None).unwrap();
        println!(
            "q = {q}: E[X_1000]/1000 ~ {:.5} +/- {:.5}",
            est.mean_f64, est.standard_error
        );
    }
    let spec = build_chain_spec(2, &rat(1, 2), 0).unwrap();
    let sample = sample_trajectory(&GrowthChain::Spec(spec), 20, 42).unwrap();
    println!("grading-2 path, q = 1/2, seed 42: {:?}", sample.path);
}
