//! Bound states of the D-dimensional radial Schrödinger equation with the
//! square-root power-law potential
//!
//! V(r) = a0 + a1/r^(1/2) + a2/r + a3/r^(3/2) + a4/r^2.
//!
//! The [`ansatz`] module solves the problem with an exponential-times-series
//! ansatz, [`wavefunction`] evaluates and normalizes the result,
//! [`closed_forms`] holds the analytic spectra of the solvable special cases,
//! and [`oracle`] is an independent shooting solver used to cross-check all of
//! the above.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ansatz;
pub mod closed_forms;
pub mod cubic;
pub mod error;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod wavefunction;

pub use ansatz::{
    ansatz_factors, build_series, solve_bound_state, solve_bound_states, solve_quantization_cubic,
    terminating_a3_values, termination_constrained_a3, AnsatzFactors, BoundState,
    RecurrenceCoefficients, SeriesSolution,
};
pub use closed_forms::{
    detect_special_cases, energy_coulomb, energy_fractional_pair, energy_mie, SpecialCaseKind,
    SpecialCaseTag,
};
pub use error::{Error, Result};
pub use model::{
    derived_constants, effective_radial_coefficients, potential_value, Channel, DerivedConstants,
    PotentialParams, RadialEquation,
};
pub use oracle::{
    reduce_to_canonical, scan_energies, shoot_eigenvalue, OracleConfig, OracleResult,
};
pub use wavefunction::{
    count_radial_nodes, evaluate_unnormalized, normalize, NormalizationConfig, RadialWavefunction,
};
