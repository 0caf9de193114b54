//! Dense complex linear algebra on finite-dimensional Hilbert spaces.
//!
//! Composite qubit ⊗ oscillator spaces use the index `k = j·d + m` where
//! `j ∈ {0 ≡ e, 1 ≡ g}` is the qubit level and `m` the Fock index, with `d`
//! the oscillator truncation. Every module in the crate relies on this
//! ordering.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum `|A − A†|` entry for an operator to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Looser Hermiticity bound accepted by the eigensolver and QFI routines.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-10;
/// Maximum `|U†U − 𝟙|` entry for an operator to count as unitary.
pub const UNITARY_TOL: f64 = 1e-10;
/// Smallest eigenvalue still accepted as positive semi-definite.
pub const PSD_TOL: f64 = 1e-10;
/// Allowed deviation of a density operator's trace from one.
pub const TRACE_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A pure state as a column of complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amps: Vec<Complex64>) -> Self {
        assert!(!amps.is_empty(), "state vector must have dimension >= 1");
        Self { amps }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![ZERO; dim])
    }

    /// Standard basis vector `|k⟩`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        let mut v = Self::zeros(dim);
        v.amps[k] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// The projector `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> Operator {
        Operator::from_fn(self.dim(), |i, j| self.amps[i] * self.amps[j].conj())
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.amps
            .iter()
            .all(|a| a.re.is_finite() && a.im.is_finite())
    }
}

impl Index<usize> for StateVector {
    type Output = Complex64;
    fn index(&self, k: usize) -> &Complex64 {
        &self.amps[k]
    }
}

impl IndexMut<usize> for StateVector {
    fn index_mut(&mut self, k: usize) -> &mut Complex64 {
        &mut self.amps[k]
    }
}

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Operator({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  [")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "operator must have dimension >= 1");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        assert!(dim >= 1, "operator must have dimension >= 1");
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds an operator from row-major entries. Panics if `entries.len()` is
    /// not a perfect square.
    pub fn from_rows(entries: Vec<Complex64>) -> Self {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        assert_eq!(
            dim * dim,
            entries.len(),
            "entries do not form a square matrix"
        );
        assert!(dim >= 1);
        Self { dim, data: entries }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    /// Keeps only the diagonal (dephasing in the standard basis).
    pub fn diagonal_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| if i == j { self[(i, j)] } else { ZERO })
    }

    /// `AB − BA`
    pub fn commutator(&self, other: &Operator) -> Operator {
        &(self * other) - &(other * self)
    }

    pub fn apply(&self, v: &StateVector) -> StateVector {
        assert_eq!(self.dim, v.dim(), "operator/state dimension mismatch");
        let amps = (0..self.dim)
            .map(|i| {
                self.data[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(v.amplitudes())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        StateVector::new(amps)
    }

    /// `⟨ψ|A|ψ⟩`
    pub fn expectation(&self, v: &StateVector) -> Complex64 {
        v.inner(&self.apply(v))
    }

    /// Largest entry-wise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        assert_eq!(self.dim, other.dim, "operator dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |A − A†|` over all entries.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_error() <= HERMITIAN_TOL
    }

    pub fn is_unitary(&self) -> bool {
        (&self.adjoint() * self).max_abs_diff(&Operator::identity(self.dim)) <= UNITARY_TOL
    }

    /// Hermitian, trace one and positive semi-definite.
    pub fn is_density(&self) -> bool {
        if !self.is_hermitian() {
            return false;
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return false;
        }
        match eig_hermitian(self) {
            Ok(spec) => spec.eigenvalues().iter().all(|&l| l >= -PSD_TOL),
            Err(_) => false,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<(usize, usize)> for Operator {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for Operator {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        let n = self.dim;
        let mut out = Operator::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        Operator {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        Operator {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Kronecker product `a ⊗ b`; `a` is the leading (slow) index.
pub fn tensor_product(a: &Operator, b: &Operator) -> Operator {
    let db = b.dim();
    Operator::from_fn(a.dim() * db, |i, j| {
        a[(i / db, j / db)] * b[(i % db, j % db)]
    })
}

/// Which factor of a qubit ⊗ oscillator space survives a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    Qubit,
    Field,
}

/// Partial trace over one factor of a `dims.0 ⊗ dims.1` operator.
pub fn partial_trace(rho: &Operator, dims: (usize, usize), keep: Keep) -> Result<Operator> {
    let (dq, df) = dims;
    if dq * df != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: dq * df,
            found: rho.dim(),
        });
    }
    let out = match keep {
        Keep::Qubit => Operator::from_fn(dq, |a, b| {
            (0..df).map(|m| rho[(a * df + m, b * df + m)]).sum()
        }),
        Keep::Field => Operator::from_fn(df, |m, k| {
            (0..dq).map(|j| rho[(j * df + m, j * df + k)]).sum()
        }),
    };
    Ok(out)
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian operator.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    eigenvectors: Operator,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &Operator {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, k: usize) -> StateVector {
        let v = &self.eigenvectors;
        StateVector::new((0..v.dim()).map(|i| v[(i, k)]).collect())
    }

    /// `Σ f(λ_k) φ_k φ_k†`
    pub fn apply_fn(&self, f: impl Fn(f64) -> Complex64) -> Operator {
        let v = &self.eigenvectors;
        let n = v.dim();
        let weights: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        Operator::from_fn(n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * weights[k] * v[(j, k)].conj())
                .sum()
        })
    }

    pub fn reconstruct(&self) -> Operator {
        self.apply_fn(|l| Complex64::new(l, 0.0))
    }

    /// Expresses `a` in the eigenbasis: `V† a V`.
    pub fn to_eigenbasis(&self, a: &Operator) -> Operator {
        &(&self.eigenvectors.adjoint() * a) * &self.eigenvectors
    }

    /// Inverse of [`Self::to_eigenbasis`].
    pub fn from_eigenbasis(&self, a: &Operator) -> Operator {
        &(&self.eigenvectors * a) * &self.eigenvectors.adjoint()
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn eig_hermitian(a: &Operator) -> Result<SpectralDecomposition> {
    let herr = a.hermiticity_error();
    if herr.is_nan() || herr > HERMITIAN_INPUT_TOL {
        return Err(Error::NotHermitian { deviation: herr });
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = a.dim();
    // Work on the exactly Hermitian part.
    let mut m = Operator::from_fn(n, |i, j| {
        if i == j {
            Complex64::new(a[(i, i)].re, 0.0)
        } else {
            (a[(i, j)] + a[(j, i)].conj()) * 0.5
        }
    });
    let mut v = Operator::identity(n);

    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum();
        if off.sqrt() <= f64::EPSILON * 1e-3 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                jacobi_rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[(x, x)].re.total_cmp(&m[(y, y)].re));
    let eigenvalues = order.iter().map(|&k| m[(k, k)].re).collect();
    let eigenvectors = Operator::from_fn(n, |i, k| v[(i, order[k])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Annihilates `m[p][q]` with `R = [[c, s], [−s e^{−iφ}, c e^{−iφ}]]`,
/// updating `m ← R† m R` and `v ← v R`.
fn jacobi_rotate(m: &mut Operator, v: &mut Operator, p: usize, q: usize) {
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // Already negligible against both diagonal entries: drop it.
    if mag <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        m[(p, q)] = ZERO;
        m[(q, p)] = ZERO;
        return;
    }
    let phase = apq / mag;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let conj_phase = phase.conj();
    let n = m.dim();

    // Columns: m ← m R
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * c - mkq * conj_phase * s;
        m[(k, q)] = mkp * s + mkq * conj_phase * c;
    }
    // Rows: m ← R† m
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = mpk * c - mqk * phase * s;
        m[(q, k)] = mpk * s + mqk * phase * c;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = Complex64::new(app - t * mag, 0.0);
    m[(q, q)] = Complex64::new(aqq + t * mag, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * conj_phase * s;
        v[(k, q)] = vkp * s + vkq * conj_phase * c;
    }
}

/// `exp(−iΩg)` for Hermitian `g`, via its spectral decomposition.
pub fn unitary_from_generator(g: &Operator, omega: f64) -> Result<Operator> {
    let spec = eig_hermitian(g)?;
    Ok(spec.apply_fn(|l| Complex64::from_polar(1.0, -omega * l)))
}

/// Common single-mode and qubit operators.
pub mod ops {
    use super::*;

    /// Truncated annihilation operator on Fock levels `0..dim`.
    pub fn annihilation(dim: usize) -> Operator {
        Operator::from_fn(dim, |i, j| {
            if j == i + 1 {
                Complex64::new((j as f64).sqrt(), 0.0)
            } else {
                ZERO
            }
        })
    }

    pub fn number(dim: usize) -> Operator {
        Operator::from_real_diag(&(0..dim).map(|k| k as f64).collect::<Vec<_>>())
    }

    /// `σ₊ = |e⟩⟨g|` with `e ≡ 0`, `g ≡ 1`.
    pub fn sigma_plus() -> Operator {
        Operator::from_rows(vec![ZERO, ONE, ZERO, ZERO])
    }

    pub fn sigma_minus() -> Operator {
        sigma_plus().adjoint()
    }

    pub fn sigma_x() -> Operator {
        Operator::from_rows(vec![ZERO, ONE, ONE, ZERO])
    }

    pub fn sigma_y() -> Operator {
        let i = Complex64::i();
        Operator::from_rows(vec![ZERO, -i, i, ZERO])
    }

    /// `σ_z = |e⟩⟨e| − |g⟩⟨g|`
    pub fn sigma_z() -> Operator {
        Operator::from_real_diag(&[1.0, -1.0])
    }
}
