//! Monte Carlo check of the Cramér–Rao bound.
//!
//! Each repetition draws `M` outcomes at the true coupling, estimates `Ω` by
//! maximum likelihood on a bounded search interval, and the spread of the
//! estimates is compared with `1/(M·F)` and `1/(M·H)`.
//!
//! The likelihood is quasi-periodic in `Ω`, so estimation is local: the search
//! interval must be a neighbourhood of the true value in which the likelihood
//! has a single maximum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::{classical_fi, qfi_pure_unitary};
use crate::jc_model::{
    field_distribution, joint_distribution, qubit_distribution, Angles, Outcome,
    OutcomeDistribution, ProbeSpec,
};

const GRID_POINTS: usize = 1000;
const GOLDEN_TOL: f64 = 1e-8;
const TIE_TOL: f64 = 1e-12;
/// Below this the measurement is treated as carrying no information.
const MIN_FISHER: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measurement {
    Joint,
    Qubit,
    Field,
}

impl Measurement {
    pub fn distribution(self, spec: &ProbeSpec, omega: f64) -> OutcomeDistribution {
        match self {
            Measurement::Joint => joint_distribution(spec, omega),
            Measurement::Qubit => qubit_distribution(spec, omega),
            Measurement::Field => field_distribution(spec, omega),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub spec: ProbeSpec,
    pub omega_true: f64,
    pub measurement: Measurement,
    /// Outcomes per experiment, `M`.
    pub samples: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub search_interval: (f64, f64),
}

impl McConfig {
    /// Config with the default search interval `Ω* ± π/(4√(n+1))`, clamped at 0.
    pub fn new(
        spec: ProbeSpec,
        omega_true: f64,
        measurement: Measurement,
        samples: usize,
        repetitions: usize,
        seed: u64,
    ) -> Self {
        let half = std::f64::consts::FRAC_PI_4 / ((spec.n_photons() + 1) as f64).sqrt();
        Self {
            spec,
            omega_true,
            measurement,
            samples,
            repetitions,
            seed,
            search_interval: ((omega_true - half).max(0.0), omega_true + half),
        }
    }

    pub fn with_interval(mut self, lo: f64, hi: f64) -> Self {
        self.search_interval = (lo, hi);
        self
    }

    /// Widest interval admitted by [`run_experiment`]: `π/√(n+1)`.
    pub fn max_interval_width(&self) -> f64 {
        std::f64::consts::PI / ((self.spec.n_photons() + 1) as f64).sqrt()
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.search_interval;
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.samples == 0 {
            return bad("samples must be positive".into());
        }
        if self.repetitions == 0 {
            return bad("repetitions must be positive".into());
        }
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return bad(format!("search interval ({lo}, {hi}) is empty"));
        }
        if !(lo < self.omega_true && self.omega_true < hi) {
            return bad(format!(
                "omega_true = {} is not inside ({lo}, {hi})",
                self.omega_true
            ));
        }
        Ok(())
    }

    fn rng(&self, repetition: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(repetition as u64);
        rng
    }
}

/// Outcome of one Monte Carlo run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimationReport {
    pub estimates: Vec<f64>,
    pub mean: f64,
    /// `mean − Ω*`
    pub bias: f64,
    /// Unbiased sample variance of the estimates around their mean.
    pub empirical_variance: f64,
    /// Classical Fisher information of the measurement at `Ω*`.
    pub fisher: f64,
    /// Quantum Fisher information of the whole system.
    pub qfi: f64,
    /// `1/(M·F)`
    pub cr_bound: f64,
    /// `1/(M·H)`
    pub q_cr_bound: f64,
    /// `cr_bound / empirical_variance`
    pub efficiency: f64,
    /// Whether `empirical_variance ≥ q_cr_bound·(1 − 3/√repetitions)`.
    pub above_quantum_bound: bool,
}

/// Inverse-CDF sampler over outcome indices.
struct IndexSampler {
    cumulative: Vec<f64>,
    last_nonzero: usize,
}

impl IndexSampler {
    fn new(probs: &[f64]) -> Self {
        let cumulative = probs
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        let last_nonzero = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        Self {
            cumulative,
            last_nonzero,
        }
    }

    fn draw(&self, rng: &mut impl Rng) -> usize {
        let total = self.cumulative[self.cumulative.len() - 1];
        let u = rng.random::<f64>() * total;
        self.cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.last_nonzero)
    }
}

/// Multinomial counts as a chain of conditional binomials.
fn draw_counts(probs: &[f64], samples: usize, rng: &mut impl Rng) -> Vec<u64> {
    let mut counts = vec![0u64; probs.len()];
    let Some(last) = probs.iter().rposition(|&p| p > 0.0) else {
        return counts;
    };
    let mut remaining = samples as u64;
    let mut mass: f64 = probs[..=last].iter().sum();
    for (k, &p) in probs[..last].iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let q = (p / mass).clamp(0.0, 1.0);
        let c = Binomial::new(remaining, q)
            .expect("q is a probability")
            .sample(rng);
        counts[k] = c;
        remaining -= c;
        mass -= p;
    }
    counts[last] += remaining;
    counts
}

/// `M` i.i.d. outcomes at `omega_true` from the stream of repetition 0.
pub fn sample_outcomes(cfg: &McConfig) -> Result<Vec<Outcome>> {
    cfg.validate()?;
    let dist = cfg.measurement.distribution(&cfg.spec, cfg.omega_true);
    let sampler = IndexSampler::new(dist.probs());
    let mut rng = cfg.rng(0);
    Ok((0..cfg.samples)
        .map(|_| dist.outcomes()[sampler.draw(&mut rng)])
        .collect())
}

/// Outcome probabilities in the order of [`Measurement::distribution`],
/// without building the full distribution.
fn outcome_probs(m: Measurement, spec: &ProbeSpec, omega: f64) -> ([f64; 4], usize) {
    let t = Angles::new(spec, omega);
    let (cb2, sb2) = (t.b.cos().powi(2), t.b.sin().powi(2));
    let (ca2, sa2) = (t.a.cos().powi(2), t.a.sin().powi(2));
    let vacuum = spec.n_photons() == 0;
    let (p, len) = match m {
        Measurement::Joint => (
            [t.c2 * cb2, t.c2 * sb2, t.s2 * ca2, t.s2 * sa2],
            if vacuum { 3 } else { 4 },
        ),
        Measurement::Qubit => (
            [t.c2 * cb2 + t.s2 * sa2, t.c2 * sb2 + t.s2 * ca2, 0.0, 0.0],
            2,
        ),
        Measurement::Field if vacuum => ([t.c2 * cb2 + t.s2 * ca2, t.c2 * sb2, 0.0, 0.0], 2),
        Measurement::Field => ([t.s2 * sa2, t.c2 * cb2 + t.s2 * ca2, t.c2 * sb2, 0.0], 3),
    };
    (p.map(|x| x.max(0.0)), len)
}

fn log_likelihood(cfg: &McConfig, counts: &[u64], omega: f64) -> f64 {
    let (probs, len) = outcome_probs(cfg.measurement, &cfg.spec, omega);
    counts
        .iter()
        .zip(&probs[..len])
        .filter(|(&c, _)| c > 0)
        .map(|(&c, &p)| {
            if p > 0.0 {
                c as f64 * p.ln()
            } else {
                f64::NEG_INFINITY
            }
        })
        .sum()
}

/// Maximises `f` on `[a, b]` by golden-section search.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > GOLDEN_TOL {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

fn mle_from_counts(cfg: &McConfig, counts: &[u64]) -> Result<f64> {
    if counts.iter().all(|&c| c == 0) {
        return Err(Error::EmptySample);
    }
    let (lo, hi) = cfg.search_interval;
    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..GRID_POINTS).map(|i| lo + step * i as f64).collect();
    let ll: Vec<f64> = grid
        .iter()
        .map(|&w| log_likelihood(cfg, counts, w))
        .collect();

    let best = ll.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if best == f64::NEG_INFINITY {
        return Err(Error::ImpossibleOutcome);
    }
    let worst = ll.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = best.abs().max(1.0);
    if best - worst <= TIE_TOL * scale {
        return Err(Error::FlatLikelihood);
    }

    let mid = 0.5 * (lo + hi);
    let mut pick: Option<usize> = None;
    for (i, &v) in ll.iter().enumerate() {
        if v < best - TIE_TOL * scale {
            continue;
        }
        pick = match pick {
            None => Some(i),
            Some(j) => {
                let (di, dj) = ((grid[i] - mid).abs(), (grid[j] - mid).abs());
                // Equal distances keep the earlier (lower) point.
                if di < dj - TIE_TOL {
                    Some(i)
                } else {
                    Some(j)
                }
            }
        };
    }
    let i = pick.expect("at least one grid point attains the maximum");

    let a = grid[i.saturating_sub(1)];
    let b = grid[(i + 1).min(GRID_POINTS - 1)];
    let refined = golden_max(|w| log_likelihood(cfg, counts, w), a, b);
    if log_likelihood(cfg, counts, refined) >= ll[i] {
        Ok(refined)
    } else {
        Ok(grid[i])
    }
}

/// Maximum-likelihood estimate of `Ω` on `cfg.search_interval`.
pub fn mle(cfg: &McConfig, outcomes: &[Outcome]) -> Result<f64> {
    if outcomes.is_empty() {
        return Err(Error::EmptySample);
    }
    let (lo, hi) = cfg.search_interval;
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(Error::InvalidConfig(format!(
            "search interval ({lo}, {hi}) is empty"
        )));
    }
    // Outcome labels do not depend on Ω.
    let labels = cfg.measurement.distribution(&cfg.spec, lo);
    let mut counts = vec![0u64; labels.len()];
    for o in outcomes {
        let k = labels
            .position(o)
            .ok_or_else(|| Error::UnknownOutcome(o.to_string()))?;
        counts[k] += 1;
    }
    mle_from_counts(cfg, &counts)
}

/// Runs `repetitions` independent experiments and aggregates the estimates.
pub fn run_experiment(cfg: &McConfig) -> Result<EstimationReport> {
    cfg.validate()?;
    let (lo, hi) = cfg.search_interval;
    if hi - lo > cfg.max_interval_width() + 1e-12 {
        return Err(Error::InvalidConfig(format!(
            "search interval width {} exceeds π/√(n+1) = {}",
            hi - lo,
            cfg.max_interval_width()
        )));
    }
    let dist = cfg.measurement.distribution(&cfg.spec, cfg.omega_true);
    let fisher = classical_fi(&dist);
    if fisher < MIN_FISHER {
        return Err(Error::ZeroInformation {
            omega: cfg.omega_true,
            fisher,
        });
    }
    let qfi = qfi_pure_unitary(&cfg.spec);

    let estimates = (0..cfg.repetitions)
        .into_par_iter()
        .map(|rep| {
            let counts = draw_counts(dist.probs(), cfg.samples, &mut cfg.rng(rep));
            mle_from_counts(cfg, &counts)
        })
        .collect::<Result<Vec<f64>>>()?;

    let r = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / r;
    let empirical_variance = if estimates.len() > 1 {
        estimates.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (r - 1.0)
    } else {
        0.0
    };
    let m = cfg.samples as f64;
    let cr_bound = 1.0 / (m * fisher);
    let q_cr_bound = 1.0 / (m * qfi);
    Ok(EstimationReport {
        mean,
        bias: mean - cfg.omega_true,
        empirical_variance,
        fisher,
        qfi,
        cr_bound,
        q_cr_bound,
        efficiency: cr_bound / empirical_variance,
        above_quantum_bound: empirical_variance >= q_cr_bound * (1.0 - 3.0 / r.sqrt()),
        estimates,
    })
}
