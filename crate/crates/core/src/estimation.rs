//! Classical and quantum Fisher information for the Jaynes–Cummings probe.
//!
//! The quantum Fisher information of a state family `ρ(Ω)` is evaluated in
//! the eigenbasis `{λ_k, φ_k}` of `ρ` as
//!
//! ```text
//! H = 2 Σ_{k,l: λ_k+λ_l > ε} |⟨φ_k|∂ρ|φ_l⟩|² / (λ_k + λ_l)
//! ```
//!
//! which needs `∂ρ` but no eigenvector derivatives. The symmetric logarithmic
//! derivative has the matching entries `L_kl = 2⟨φ_k|∂ρ|φ_l⟩ / (λ_k + λ_l)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{eig_hermitian, Operator, SpectralDecomposition, HERMITIAN_INPUT_TOL};
use crate::jc_model::{
    build_generator, evolve, field_distribution, joint_distribution, probe_state,
    qubit_distribution, reduced_field, reduced_field_derivative, reduced_qubit,
    reduced_qubit_derivative, OutcomeDistribution, ProbeSpec,
};

/// Outcomes with `p ≤ PROB_CUTOFF` are left out of the classical FI sum.
pub const PROB_CUTOFF: f64 = 1e-12;
/// Eigenvalue pairs with `λ_k + λ_l ≤ EIGEN_CUTOFF` are left out of the QFI sum.
pub const EIGEN_CUTOFF: f64 = 1e-10;

/// Which state of the probe is being looked at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    Global,
    Qubit,
    Field,
}

/// `F = Σ_j (∂p_j)² / p_j` over outcomes with `p_j > PROB_CUTOFF`.
///
/// Where some `p_j → 0` the summand has a finite limit that this drops.
pub fn classical_fi(dist: &OutcomeDistribution) -> f64 {
    dist.probs()
        .iter()
        .zip(dist.dprobs())
        .filter(|(&p, _)| p > PROB_CUTOFF)
        .map(|(p, dp)| dp * dp / p)
        .sum()
}

/// `4(⟨G²⟩ − ⟨G⟩²)` on the probe state.
pub fn qfi_pure_unitary(spec: &ProbeSpec) -> f64 {
    let g = build_generator(spec);
    let psi = probe_state(spec);
    let g_psi = g.apply(&psi);
    let mean = psi.inner(&g_psi).re;
    4.0 * (g_psi.norm_sqr() - mean * mean)
}

fn check_inputs(rho: &Operator, drho: &Operator) -> Result<()> {
    if rho.dim() != drho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: drho.dim(),
        });
    }
    let herr = drho.hermiticity_error();
    if herr.is_nan() || herr > HERMITIAN_INPUT_TOL {
        return Err(Error::NotHermitian { deviation: herr });
    }
    Ok(())
}

/// Decomposes `rho` and rotates `drho` into its eigenbasis.
fn eigen_frame(rho: &Operator, drho: &Operator) -> Result<(SpectralDecomposition, Operator)> {
    check_inputs(rho, drho)?;
    let spec = eig_hermitian(rho)?;
    let m = spec.to_eigenbasis(drho);
    Ok((spec, m))
}

pub fn qfi_spectral(rho: &Operator, drho: &Operator) -> Result<f64> {
    let (spec, m) = eigen_frame(rho, drho)?;
    let lambda = spec.eigenvalues();
    let mut h = 0.0;
    for (k, lk) in lambda.iter().enumerate() {
        for (l, ll) in lambda.iter().enumerate() {
            let denom = lk + ll;
            if denom > EIGEN_CUTOFF {
                h += 2.0 * m[(k, l)].norm_sqr() / denom;
            }
        }
    }
    Ok(h)
}

/// Symmetric logarithmic derivative `L` with `∂ρ = (Lρ + ρL)/2` on the support of `ρ`.
pub fn sld(rho: &Operator, drho: &Operator) -> Result<Operator> {
    let (spec, m) = eigen_frame(rho, drho)?;
    let lambda = spec.eigenvalues();
    let l_eig = Operator::from_fn(rho.dim(), |k, l| {
        let denom = lambda[k] + lambda[l];
        if denom > EIGEN_CUTOFF {
            m[(k, l)] * (2.0 / denom)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(spec.from_eigenbasis(&l_eig))
}

/// Largest `|⟨φ_k|∂ρ|φ_l⟩|` over the eigenpairs the QFI sum excludes.
///
/// The cutoff is exact only when this vanishes: `∂ρ` must have no
/// kernel-to-kernel block.
pub fn kernel_leakage(rho: &Operator, drho: &Operator) -> Result<f64> {
    let (spec, m) = eigen_frame(rho, drho)?;
    let lambda = spec.eigenvalues();
    let mut worst = 0.0f64;
    for (k, lk) in lambda.iter().enumerate() {
        for (l, ll) in lambda.iter().enumerate() {
            if lk + ll <= EIGEN_CUTOFF {
                worst = worst.max(m[(k, l)].norm());
            }
        }
    }
    Ok(worst)
}

/// `ρ(Ω)` of the whole system or of one subsystem.
pub fn subsystem_state(spec: &ProbeSpec, omega: f64, subsystem: Subsystem) -> Operator {
    match subsystem {
        Subsystem::Global => evolve(spec, omega).density(),
        Subsystem::Qubit => reduced_qubit(spec, omega),
        Subsystem::Field => reduced_field(spec, omega),
    }
}

/// `∂_Ω ρ(Ω)`; for the whole system this is `−i[G, ρ]`.
pub fn drho_analytic(spec: &ProbeSpec, omega: f64, subsystem: Subsystem) -> Operator {
    match subsystem {
        Subsystem::Global => {
            let rho = evolve(spec, omega).density();
            build_generator(spec)
                .commutator(&rho)
                .scale(Complex64::new(0.0, -1.0))
        }
        Subsystem::Qubit => reduced_qubit_derivative(spec, omega),
        Subsystem::Field => reduced_field_derivative(spec, omega),
    }
}

/// QFI of the chosen state via [`qfi_spectral`] with analytic `∂ρ`.
pub fn subsystem_qfi(spec: &ProbeSpec, omega: f64, subsystem: Subsystem) -> Result<f64> {
    qfi_spectral(
        &subsystem_state(spec, omega, subsystem),
        &drho_analytic(spec, omega, subsystem),
    )
}

/// All Fisher informations at one `(θ, n, Ω)` point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QfiReport {
    #[serde(rename = "H_total")]
    pub h_total: f64,
    #[serde(rename = "H_qubit")]
    pub h_qubit: f64,
    #[serde(rename = "H_field")]
    pub h_field: f64,
    #[serde(rename = "F_joint")]
    pub f_joint: f64,
    #[serde(rename = "F_qubit")]
    pub f_qubit: f64,
    #[serde(rename = "F_field")]
    pub f_field: f64,
}

pub fn qfi_report(spec: &ProbeSpec, omega: f64) -> Result<QfiReport> {
    Ok(QfiReport {
        h_total: subsystem_qfi(spec, omega, Subsystem::Global)?,
        h_qubit: subsystem_qfi(spec, omega, Subsystem::Qubit)?,
        h_field: subsystem_qfi(spec, omega, Subsystem::Field)?,
        f_joint: classical_fi(&joint_distribution(spec, omega)),
        f_qubit: classical_fi(&qubit_distribution(spec, omega)),
        f_field: classical_fi(&field_distribution(spec, omega)),
    })
}
