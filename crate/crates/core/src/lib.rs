pub mod chain_extract;
pub mod cli;
pub mod error;
pub mod hopf;
pub mod json;
pub mod markov;
pub mod martingale;
pub mod montecarlo;
pub mod qcalc;

pub use error::{Error, Result};
