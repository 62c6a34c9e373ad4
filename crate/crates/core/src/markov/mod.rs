//! Exact analysis of the unit-step growth chains `X_n^α`, and of the Hopf
//! square chain `X_n` as the geometric case `α(i) = q^i / (1 + q^i)`.
//!
//! Probability arithmetic here is exact rational, or integer fixed point with
//! directed rounding in [`EnclosedLaw`].

mod alpha;
mod distribution;
mod enclosure;
mod hitting;
mod phase;

pub use alpha::AlphaLaw;
pub use distribution::{
    distribution_dp, distribution_formula, distribution_formula_general, expected_value,
    Distribution, ForwardLaw,
};
pub use enclosure::{EnclosedLaw, FRAC_BITS};
pub use hitting::{
    absorbing_matrix, fundamental_matrix, hitting_time_closed, hitting_time_general,
    hitting_time_matrix,
};
pub use phase::{
    phase_bounds_to_csv, phase_rows_to_csv, phase_scan, phase_scan_enclosed, PhaseBoundsRow,
    PhaseRow,
};
