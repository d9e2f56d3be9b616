use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, HermitianMatrix};
use crate::scalar::Real;

/// Tolerance on unit trace / unit norm and on negative eigenvalues.
pub const STATE_TOL: f64 = 1e-10;

/// A state with `tr(rho^2) > 1 - PURITY_TOL` is treated as pure.
pub const PURITY_TOL: f64 = 1e-10;

/// Normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> PureState<T> {
    /// Wraps amplitudes whose 2-norm is already 1 (within `1e-10`).
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = norm(&amplitudes);
        if amplitudes.is_empty() || (norm - T::one()).abs() > T::tol(STATE_TOL) {
            return Err(Error::NotNormalized {
                norm: norm.as_f64(),
            });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales an arbitrary nonzero vector to unit norm.
    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = norm(&amplitudes);
        if amplitudes.is_empty() || norm == T::zero() || !norm.is_finite() {
            return Err(Error::NotNormalized {
                norm: norm.as_f64(),
            });
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn from_real(amplitudes: &[T]) -> Result<Self> {
        Self::new(
            amplitudes
                .iter()
                .map(|&a| Complex::new(a, T::zero()))
                .collect(),
        )
    }

    /// Computational basis vector `|k>`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dim {dim}");
        let mut amplitudes = vec![Complex::zero(); dim];
        amplitudes[k] = Complex::new(T::one(), T::zero());
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.dim(), other.dim());
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * b)
    }

    /// `|<self|other>|^2`.
    pub fn overlap(&self, other: &Self) -> T {
        self.inner(other).norm_sqr()
    }

    /// Multiplies by a global phase `e^{i theta}`.
    pub fn with_phase(&self, theta: T) -> Self {
        let p = Complex::from_polar(T::one(), theta);
        Self {
            amplitudes: self.amplitudes.iter().map(|a| a * p).collect(),
        }
    }

    /// `|psi><psi|`.
    pub fn to_density(&self) -> DensityOperator<T> {
        DensityOperator {
            matrix: HermitianMatrix::outer(&self.amplitudes),
        }
    }
}

fn norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt()
}

/// Positive-semidefinite, unit-trace operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator<T> {
    matrix: HermitianMatrix<T>,
}

impl<T: Real> DensityOperator<T> {
    /// Validates unit trace and positivity (both within `1e-10`).
    pub fn new(matrix: HermitianMatrix<T>) -> Result<Self> {
        let tol = T::tol(STATE_TOL);
        let trace = matrix.trace();
        if (trace - T::one()).abs() > tol {
            return Err(Error::InvalidState(format!("trace = {trace}, expected 1")));
        }
        let min = eig_hermitian(&matrix).min();
        if min < -tol {
            return Err(Error::InvalidState(format!(
                "minimum eigenvalue {min} is negative"
            )));
        }
        Ok(Self { matrix })
    }

    /// Wraps an operator that is a valid state by construction (e.g. a channel output).
    pub(crate) fn from_trusted(matrix: HermitianMatrix<T>) -> Self {
        Self { matrix }
    }

    /// `I / d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let w = T::one() / T::from_count(dim);
        Self {
            matrix: HermitianMatrix::diagonal(&vec![w; dim]),
        }
    }

    /// Convex mixture `sum_k w_k |psi_k><psi_k|` with weights summing to one.
    pub fn mixture(components: &[(T, PureState<T>)]) -> Result<Self> {
        let dim = components
            .first()
            .map(|(_, s)| s.dim())
            .ok_or_else(|| Error::InvalidState("empty mixture".into()))?;
        let mut m = HermitianMatrix::zeros(dim);
        for (w, s) in components {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: s.dim(),
                });
            }
            if *w < T::zero() {
                return Err(Error::InvalidState(format!("negative weight {w}")));
            }
            m = m.add(&HermitianMatrix::outer(s.amplitudes()).scale(*w));
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix<T> {
        &self.matrix
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> T {
        self.matrix
            .as_matrix()
            .as_slice()
            .iter()
            .map(|z| z.norm_sqr())
            .sum()
    }

    pub fn is_pure(&self) -> bool {
        self.purity() > T::one() - T::tol(PURITY_TOL)
    }

    /// Dominant eigenvector; the state itself when `is_pure()`.
    pub fn principal_vector(&self) -> PureState<T> {
        let s = eig_hermitian(&self.matrix);
        PureState::normalized(s.eigenvector(s.dim() - 1)).expect("eigenvector is nonzero")
    }

    /// `<psi| rho |psi>`.
    pub fn overlap_with(&self, psi: &PureState<T>) -> T {
        self.matrix.quadratic_form(psi.amplitudes())
    }
}
