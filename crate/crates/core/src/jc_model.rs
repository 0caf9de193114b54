//! Resonant Jaynes–Cummings dynamics for a qubit ⊗ Fock-state probe.
//!
//! The interaction couples only `|e,m⟩` and `|g,m+1⟩`, so the evolution of
//! `cos(θ/2)|e,n⟩ + sin(θ/2)|g,n⟩` is exact in closed form: the `|e,n⟩`
//! branch rotates in the block with Rabi angle `Ω√(n+1)` and the `|g,n⟩`
//! branch in the block with angle `Ω√n`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{ops, tensor_product, Operator, StateVector};

/// Probabilities above `-PROB_CLAMP` but below zero are rounding noise.
const PROB_CLAMP: f64 = 1e-14;

/// Probe preparation: qubit angle, Fock number and oscillator truncation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeSpec {
    theta: f64,
    n_photons: usize,
    truncation: usize,
}

impl ProbeSpec {
    /// Probe with the minimal leak-free truncation `d = n + 2`.
    pub fn new(theta: f64, n_photons: usize) -> Result<Self> {
        Self::with_truncation(theta, n_photons, n_photons + 2)
    }

    pub fn with_truncation(theta: f64, n_photons: usize, truncation: usize) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::ThetaOutOfRange(theta));
        }
        if truncation < n_photons + 2 {
            return Err(Error::TruncationTooSmall {
                n: n_photons,
                truncation,
            });
        }
        Ok(Self {
            theta,
            n_photons,
            truncation,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn n_photons(&self) -> usize {
        self.n_photons
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Dimension of the joint space, `2d`.
    pub fn dim(&self) -> usize {
        2 * self.truncation
    }

    /// Composite index of `|j,m⟩`.
    pub fn index(&self, level: QubitLevel, m: usize) -> usize {
        level.index() * self.truncation + m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QubitLevel {
    Excited,
    Ground,
}

impl QubitLevel {
    pub fn index(self) -> usize {
        match self {
            QubitLevel::Excited => 0,
            QubitLevel::Ground => 1,
        }
    }
}

impl fmt::Display for QubitLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QubitLevel::Excited => "e",
            QubitLevel::Ground => "g",
        })
    }
}

/// A measurement outcome label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    /// Population and photon number measured together.
    Joint { level: QubitLevel, fock: usize },
    /// Population of the qubit alone.
    Qubit(QubitLevel),
    /// Photon number of the oscillator alone.
    Fock(usize),
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Joint { level, fock } => write!(f, "{level},{fock}"),
            Outcome::Qubit(level) => write!(f, "{level}"),
            Outcome::Fock(m) => write!(f, "{m}"),
        }
    }
}

/// Labeled outcome probabilities `p(j|Ω)` with their derivatives `∂_Ω p(j|Ω)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution {
    outcomes: Vec<Outcome>,
    probs: Vec<f64>,
    dprobs: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn new(outcomes: Vec<Outcome>, probs: Vec<f64>, dprobs: Vec<f64>) -> Self {
        assert_eq!(outcomes.len(), probs.len());
        assert_eq!(outcomes.len(), dprobs.len());
        let probs = probs
            .into_iter()
            .map(|p| {
                debug_assert!(p >= -PROB_CLAMP, "negative probability {p}");
                p.max(0.0)
            })
            .collect();
        Self {
            outcomes,
            probs,
            dprobs,
        }
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn dprobs(&self) -> &[f64] {
        &self.dprobs
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn position(&self, outcome: &Outcome) -> Option<usize> {
        self.outcomes.iter().position(|o| o == outcome)
    }

    pub fn prob(&self, outcome: &Outcome) -> Option<f64> {
        self.position(outcome).map(|k| self.probs[k])
    }
}

/// Trigonometric building blocks shared by every closed form.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Angles {
    /// `cos²(θ/2)`
    pub c2: f64,
    /// `sin²(θ/2)`
    pub s2: f64,
    /// `cos(θ/2) sin(θ/2) = sin(θ)/2`
    pub cs: f64,
    /// `√n / 2`, the rate of `a`
    pub ra: f64,
    /// `√(n+1) / 2`, the rate of `b`
    pub rb: f64,
    /// `Ω√n / 2`
    pub a: f64,
    /// `Ω√(n+1) / 2`
    pub b: f64,
}

impl Angles {
    pub fn new(spec: &ProbeSpec, omega: f64) -> Self {
        let (s, c) = (spec.theta / 2.0).sin_cos();
        let n = spec.n_photons as f64;
        let ra = n.sqrt() / 2.0;
        let rb = (n + 1.0).sqrt() / 2.0;
        Self {
            c2: c * c,
            s2: s * s,
            cs: c * s,
            ra,
            rb,
            a: omega * ra,
            b: omega * rb,
        }
    }
}

/// `G = (σ₊a + σ₋a†)/2` on the truncated space of `spec`.
pub fn build_generator(spec: &ProbeSpec) -> Operator {
    let a = ops::annihilation(spec.truncation);
    let up = tensor_product(&ops::sigma_plus(), &a);
    let down = tensor_product(&ops::sigma_minus(), &a.adjoint());
    (&up + &down).scale_real(0.5)
}

/// Total excitation number `E = a†a + σ₊σ₋`.
pub fn excitation_operator(spec: &ProbeSpec) -> Operator {
    let d = spec.truncation;
    let field = tensor_product(&Operator::identity(2), &ops::number(d));
    let excited = tensor_product(
        &(&ops::sigma_plus() * &ops::sigma_minus()),
        &Operator::identity(d),
    );
    &field + &excited
}

/// `(cos(θ/2)|e⟩ + sin(θ/2)|g⟩) ⊗ |n⟩`
pub fn probe_state(spec: &ProbeSpec) -> StateVector {
    let (s, c) = (spec.theta / 2.0).sin_cos();
    let n = spec.n_photons;
    let mut psi = StateVector::zeros(spec.dim());
    psi[spec.index(QubitLevel::Excited, n)] = Complex64::new(c, 0.0);
    psi[spec.index(QubitLevel::Ground, n)] = Complex64::new(s, 0.0);
    psi
}

/// `exp(−iΩG)` applied to the probe, evaluated block by block.
pub fn evolve(spec: &ProbeSpec, omega: f64) -> StateVector {
    let (s, c) = (spec.theta / 2.0).sin_cos();
    let ang = Angles::new(spec, omega);
    let n = spec.n_photons;
    let mut psi = StateVector::zeros(spec.dim());
    psi[spec.index(QubitLevel::Excited, n)] = Complex64::new(c * ang.b.cos(), 0.0);
    psi[spec.index(QubitLevel::Ground, n + 1)] = Complex64::new(0.0, -c * ang.b.sin());
    psi[spec.index(QubitLevel::Ground, n)] = Complex64::new(s * ang.a.cos(), 0.0);
    if n > 0 {
        psi[spec.index(QubitLevel::Excited, n - 1)] = Complex64::new(0.0, -s * ang.a.sin());
    }
    psi
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn imag(x: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

/// Reduced qubit state in the `{|e⟩, |g⟩}` basis.
pub fn reduced_qubit(spec: &ProbeSpec, omega: f64) -> Operator {
    let t = Angles::new(spec, omega);
    let gg = t.c2 * t.b.sin().powi(2) + t.s2 * t.a.cos().powi(2);
    let ee = t.c2 * t.b.cos().powi(2) + t.s2 * t.a.sin().powi(2);
    let eg = t.cs * t.a.cos() * t.b.cos();
    Operator::from_rows(vec![real(ee), real(eg), real(eg), real(gg)])
}

/// `∂_Ω` of [`reduced_qubit`].
pub fn reduced_qubit_derivative(spec: &ProbeSpec, omega: f64) -> Operator {
    let t = Angles::new(spec, omega);
    let dgg = t.c2 * t.rb * (2.0 * t.b).sin() - t.s2 * t.ra * (2.0 * t.a).sin();
    let deg = -t.cs * (t.ra * t.a.sin() * t.b.cos() + t.rb * t.a.cos() * t.b.sin());
    Operator::from_rows(vec![real(-dgg), real(deg), real(deg), real(dgg)])
}

/// Reduced oscillator state on Fock levels `0..d`.
///
/// The diagonal holds the photon-number probabilities. Within each qubit
/// branch the evolved state spans two adjacent Fock levels, so for
/// `0 < θ < π` the state also carries the coherences
/// `ρ[n−1,n] = −i sin(θ)/2 · sin(a)cos(b)` and `ρ[n,n+1] = i sin(θ)/2 · cos(a)sin(b)`
/// with `a = Ω√n/2`, `b = Ω√(n+1)/2`.
pub fn reduced_field(spec: &ProbeSpec, omega: f64) -> Operator {
    let t = Angles::new(spec, omega);
    let n = spec.n_photons;
    let mut rho = Operator::zeros(spec.truncation);
    rho[(n, n)] = real(t.c2 * t.b.cos().powi(2) + t.s2 * t.a.cos().powi(2));
    rho[(n + 1, n + 1)] = real(t.c2 * t.b.sin().powi(2));
    let upper = imag(t.cs * t.a.cos() * t.b.sin());
    rho[(n, n + 1)] = upper;
    rho[(n + 1, n)] = upper.conj();
    if n > 0 {
        rho[(n - 1, n - 1)] = real(t.s2 * t.a.sin().powi(2));
        let lower = imag(-t.cs * t.a.sin() * t.b.cos());
        rho[(n - 1, n)] = lower;
        rho[(n, n - 1)] = lower.conj();
    }
    rho
}

/// `∂_Ω` of [`reduced_field`].
pub fn reduced_field_derivative(spec: &ProbeSpec, omega: f64) -> Operator {
    let t = Angles::new(spec, omega);
    let n = spec.n_photons;
    let up = t.c2 * t.rb * (2.0 * t.b).sin();
    let down = t.s2 * t.ra * (2.0 * t.a).sin();
    let mut d = Operator::zeros(spec.truncation);
    d[(n, n)] = real(-up - down);
    d[(n + 1, n + 1)] = real(up);
    let upper = imag(t.cs * (t.rb * t.a.cos() * t.b.cos() - t.ra * t.a.sin() * t.b.sin()));
    d[(n, n + 1)] = upper;
    d[(n + 1, n)] = upper.conj();
    if n > 0 {
        d[(n - 1, n - 1)] = real(down);
        let lower = imag(-t.cs * (t.ra * t.a.cos() * t.b.cos() - t.rb * t.a.sin() * t.b.sin()));
        d[(n - 1, n)] = lower;
        d[(n, n - 1)] = lower.conj();
    }
    d
}

/// Joint population and photon-number outcomes.
///
/// Order: `(e,n)`, `(g,n+1)`, `(g,n)` and, for `n > 0`, `(e,n−1)`.
pub fn joint_distribution(spec: &ProbeSpec, omega: f64) -> OutcomeDistribution {
    use QubitLevel::{Excited, Ground};
    let t = Angles::new(spec, omega);
    let n = spec.n_photons;
    let db = t.rb * (2.0 * t.b).sin();
    let da = t.ra * (2.0 * t.a).sin();
    let mut outcomes = vec![
        Outcome::Joint {
            level: Excited,
            fock: n,
        },
        Outcome::Joint {
            level: Ground,
            fock: n + 1,
        },
        Outcome::Joint {
            level: Ground,
            fock: n,
        },
    ];
    let mut probs = vec![
        t.c2 * t.b.cos().powi(2),
        t.c2 * t.b.sin().powi(2),
        t.s2 * t.a.cos().powi(2),
    ];
    let mut dprobs = vec![-t.c2 * db, t.c2 * db, -t.s2 * da];
    if n > 0 {
        outcomes.push(Outcome::Joint {
            level: Excited,
            fock: n - 1,
        });
        probs.push(t.s2 * t.a.sin().powi(2));
        dprobs.push(t.s2 * da);
    }
    OutcomeDistribution::new(outcomes, probs, dprobs)
}

/// Population measurement on the qubit: outcomes `e`, `g`.
pub fn qubit_distribution(spec: &ProbeSpec, omega: f64) -> OutcomeDistribution {
    let rho = reduced_qubit(spec, omega);
    let drho = reduced_qubit_derivative(spec, omega);
    OutcomeDistribution::new(
        vec![
            Outcome::Qubit(QubitLevel::Excited),
            Outcome::Qubit(QubitLevel::Ground),
        ],
        vec![rho[(0, 0)].re, rho[(1, 1)].re],
        vec![drho[(0, 0)].re, drho[(1, 1)].re],
    )
}

/// Photon-number measurement: outcomes `n−1` (for `n > 0`), `n`, `n+1`.
pub fn field_distribution(spec: &ProbeSpec, omega: f64) -> OutcomeDistribution {
    let rho = reduced_field(spec, omega);
    let drho = reduced_field_derivative(spec, omega);
    let n = spec.n_photons;
    let levels: Vec<usize> = (n.saturating_sub(1)..=n + 1).collect();
    OutcomeDistribution::new(
        levels.iter().map(|&m| Outcome::Fock(m)).collect(),
        levels.iter().map(|&m| rho[(m, m)].re).collect(),
        levels.iter().map(|&m| drho[(m, m)].re).collect(),
    )
}

/// `⟨Ψ₀|E|Ψ₀⟩`, the mean number of excitations of the probe.
pub fn excitation_expectation(spec: &ProbeSpec) -> f64 {
    excitation_operator(spec).expectation(&probe_state(spec)).re
}
