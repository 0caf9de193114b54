//! Quantum estimation of the Jaynes–Cummings coupling constant `Ω = gτ`.
//!
//! A qubit prepared in `cos(θ/2)|e⟩ + sin(θ/2)|g⟩` and an oscillator in the
//! Fock state `|n⟩` evolve under `exp(−iΩG)` with
//! `G = (σ₊a + σ₋a†)/2`. This crate provides
//!
//! - [`hilbert`]: dense complex operators, tensor products, partial traces and
//!   a Hermitian eigensolver;
//! - [`jc_model`]: the generator, probe states, exact block evolution, reduced
//!   states and measurement distributions;
//! - [`estimation`]: classical and quantum Fisher information, the symmetric
//!   logarithmic derivative and per-point reports;
//! - [`inference`]: Monte Carlo maximum-likelihood experiments compared with
//!   the Cramér–Rao bound.
//!
//! `ħ = 1` and the qubit is resonant with the mode throughout.

pub mod error;
pub mod estimation;
pub mod hilbert;
pub mod inference;
pub mod jc_model;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use estimation::{
    classical_fi, drho_analytic, qfi_pure_unitary, qfi_report, qfi_spectral, sld, QfiReport,
    Subsystem,
};
pub use hilbert::{
    eig_hermitian, partial_trace, tensor_product, unitary_from_generator, Keep, Operator,
    SpectralDecomposition, StateVector,
};
pub use inference::{
    mle, run_experiment, sample_outcomes, EstimationReport, McConfig, Measurement,
};
pub use jc_model::{
    build_generator, evolve, excitation_expectation, field_distribution, joint_distribution,
    probe_state, qubit_distribution, reduced_field, reduced_qubit, Outcome, OutcomeDistribution,
    ProbeSpec, QubitLevel,
};
