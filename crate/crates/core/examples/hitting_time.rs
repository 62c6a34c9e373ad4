//! Expected time to reach state N, three independent ways.
//!
//! cargo run --example hitting_time

use hopfchain::markov::{
    fundamental_matrix, hitting_time_closed, hitting_time_general, hitting_time_matrix, AlphaLaw,
};
use hopfchain::qcalc::rat;

fn main() {
    for q in [rat(1, 3), rat(1, 1), rat(2, 1)] {
        let law = AlphaLaw::geometric(q.clone()).unwrap();
        println!("q = {q}");
        for target in [1, 2, 5, 10] {
            let closed = hitting_time_closed(&q, target).unwrap();
            assert_eq!(closed, hitting_time_general(&law, target).unwrap());
            assert_eq!(closed, hitting_time_matrix(&law, target).unwrap());
            println!("  N = {target:>2}: {closed}");
        }
    }
    let w = fundamental_matrix(&AlphaLaw::geometric(rat(2, 1)).unwrap(), 3).unwrap();
    println!("\nfundamental matrix, q = 2, N = 3:");
    for row in w {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>4}")).collect();
        println!("  {}", cells.join(""));
    }
}
