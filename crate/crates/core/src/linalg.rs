//! Dense complex Hermitian linear algebra.
//!
//! Everything here works on small dense matrices (desk-scale Hilbert spaces,
//! `d <= MAX_DIM`). Eigendecompositions use a cyclic complex Jacobi sweep,
//! which is slow in `d` but accurate to a few ulps of `||M||`, and that
//! accuracy is what the certification checks downstream rely on.

use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::DensityOperator;
use crate::scalar::{clamp, Real};

/// Largest Hilbert-space dimension accepted by dense routines.
pub const MAX_DIM: usize = 1 << 10;

/// Relative Hermiticity tolerance used when validating input matrices.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Eigenvalue clipping threshold for PSD operations, relative to `max(1, ||M||)`.
pub const PSD_TOL: f64 = 1e-10;

const MAX_JACOBI_SWEEPS: usize = 100;

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> SquareMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from row-major entries; `data.len()` must be a perfect square.
    pub fn from_row_major(data: Vec<Complex<T>>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim * dim != data.len() || dim == 0 {
            return Err(Error::Shape(format!(
                "{} entries do not form a non-empty square matrix",
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Shape("empty matrix".into()));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    /// `|u><v|`.
    pub fn outer(u: &[Complex<T>], v: &[Complex<T>]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                let rrow = &rhs.data[k * n..(k + 1) * n];
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, r) in orow.iter_mut().zip(rrow) {
                    *o += a * *r;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.dim, v.len());
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Complex::zero(), |acc, (a, b)| acc + *a * *b)
            })
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// `max |M[i][j] - conj(M[j][i])|`.
    pub fn hermiticity_violation(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(M + M^dagger) / 2`.
    pub fn hermitian_part(&self) -> HermitianMatrix<T> {
        let half = T::lit(0.5);
        HermitianMatrix(Self::from_fn(self.dim, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * half
        }))
    }
}

impl<T> Index<(usize, usize)> for SquareMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for SquareMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

/// A square complex matrix validated to be Hermitian.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix<T>(SquareMatrix<T>);

impl<T: Real> HermitianMatrix<T> {
    /// Validates Hermiticity to `1e-12 * max|M|` and stores the exact Hermitian part.
    pub fn new(m: SquareMatrix<T>) -> Result<Self> {
        if m.dim() > MAX_DIM {
            return Err(Error::TooLarge {
                dim: m.dim(),
                max: MAX_DIM,
            });
        }
        let violation = m.hermiticity_violation();
        let allowed = T::tol(HERMITICITY_TOL) * m.max_abs();
        if violation > allowed || violation.is_nan() {
            return Err(Error::NonHermitian {
                violation: violation.as_f64(),
            });
        }
        Ok(m.hermitian_part())
    }

    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        Self::new(SquareMatrix::from_rows(rows)?)
    }

    pub fn from_real_rows(rows: &[Vec<T>]) -> Result<Self> {
        let rows: Vec<Vec<Complex<T>>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex::new(x, T::zero())).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(SquareMatrix::zeros(dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(SquareMatrix::identity(dim))
    }

    pub fn diagonal(values: &[T]) -> Self {
        let mut m = SquareMatrix::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex::new(v, T::zero());
        }
        Self(m)
    }

    /// Rank-one projector-like matrix `|v><v|` (not normalized).
    pub fn outer(v: &[Complex<T>]) -> Self {
        Self(SquareMatrix::outer(v, v)).symmetrized()
    }

    /// Wraps a matrix that is Hermitian by construction, taking its Hermitian part.
    pub(crate) fn from_hermitian_part(m: &SquareMatrix<T>) -> Self {
        m.hermitian_part()
    }

    fn symmetrized(self) -> Self {
        self.0.hermitian_part()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_matrix(&self) -> &SquareMatrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> SquareMatrix<T> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.0[(i, j)]
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self(self.0.add(&rhs.0))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self(self.0.sub(&rhs.0))
    }

    pub fn scale(&self, c: T) -> Self {
        Self(self.0.scale(c))
    }

    /// `self + c * I`.
    pub fn shift(&self, c: T) -> Self {
        let mut m = self.0.clone();
        for i in 0..m.dim() {
            m[(i, i)] += Complex::new(c, T::zero());
        }
        Self(m)
    }

    /// `self * self`.
    pub fn square(&self) -> Self {
        Self::from_hermitian_part(&self.0.matmul(&self.0))
    }

    /// `self * inner * self`, Hermitian whenever both factors are.
    pub fn sandwich(&self, inner: &Self) -> Self {
        Self::from_hermitian_part(&self.0.matmul(&inner.0).matmul(&self.0))
    }

    /// `U * self * U^dagger` for an arbitrary (unitary) `U`.
    pub fn conjugate_by(&self, u: &SquareMatrix<T>) -> Self {
        Self::from_hermitian_part(&u.matmul(&self.0).matmul(&u.adjoint()))
    }

    /// Real part of `tr(self * rhs)`, with the imaginary residue.
    pub fn trace_product(&self, rhs: &Self) -> Complex<T> {
        let n = self.dim();
        let mut acc = Complex::zero();
        for i in 0..n {
            for j in 0..n {
                acc += self.0[(i, j)] * rhs.0[(j, i)];
            }
        }
        acc
    }

    pub fn trace(&self) -> T {
        self.0.trace().re
    }

    /// `<v| self |v>` (real part).
    pub fn quadratic_form(&self, v: &[Complex<T>]) -> T {
        let mv = self.0.mul_vec(v);
        v.iter()
            .zip(&mv)
            .fold(Complex::zero(), |acc: Complex<T>, (a, b)| {
                acc + a.conj() * b
            })
            .re
    }

    pub fn max_abs(&self) -> T {
        self.0.max_abs()
    }
}

/// Eigendecomposition `M = V diag(eigenvalues) V^dagger`.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition<T> {
    /// Real eigenvalues in ascending order.
    pub eigenvalues: Vec<T>,
    /// Orthonormal eigenvectors stored as columns, matching `eigenvalues`.
    pub eigenvectors: SquareMatrix<T>,
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex<T>> {
        self.eigenvectors.column(k)
    }

    /// `sum_k f(lambda_k) |v_k><v_k|`.
    pub fn map(&self, mut f: impl FnMut(T) -> T) -> HermitianMatrix<T> {
        let n = self.dim();
        let weights: Vec<T> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let v = &self.eigenvectors;
        let m = SquareMatrix::from_fn(n, |i, j| {
            let mut acc = Complex::zero();
            for (k, &w) in weights.iter().enumerate() {
                if w != T::zero() {
                    acc += v[(i, k)] * v[(j, k)].conj() * w;
                }
            }
            acc
        });
        HermitianMatrix::from_hermitian_part(&m)
    }

    /// Projector onto the span of eigenvectors whose eigenvalue satisfies `keep`.
    pub fn projector(&self, mut keep: impl FnMut(T) -> bool) -> HermitianMatrix<T> {
        self.map(|l| if keep(l) { T::one() } else { T::zero() })
    }

    pub fn reconstruct(&self) -> HermitianMatrix<T> {
        self.map(|l| l)
    }

    pub fn min(&self) -> T {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> T {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eig_hermitian<T: Real>(m: &HermitianMatrix<T>) -> SpectralDecomposition<T> {
    let (eigenvalues, eigenvectors) = jacobi(m.as_matrix());
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Eigenvalues only, ascending.
pub fn eigenvalues<T: Real>(m: &HermitianMatrix<T>) -> Vec<T> {
    eig_hermitian(m).eigenvalues
}

fn jacobi<T: Real>(input: &SquareMatrix<T>) -> (Vec<T>, SquareMatrix<T>) {
    let n = input.dim();
    let mut a = input.clone();
    let mut v = SquareMatrix::<T>::identity(n);
    let scale = a.frobenius_norm();
    let eps = T::epsilon();
    let two = T::lit(2.0);

    if scale > T::zero() {
        for _ in 0..MAX_JACOBI_SWEEPS {
            let mut off = T::zero();
            for p in 0..n {
                for q in p + 1..n {
                    off += a[(p, q)].norm_sqr();
                }
            }
            if off.sqrt() <= eps * scale {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    let mag = apq.norm();
                    if mag == T::zero() {
                        continue;
                    }
                    let phase = apq / mag;
                    let theta = (a[(q, q)].re - a[(p, p)].re) / (two * mag);
                    let t = if theta.is_infinite() {
                        T::zero()
                    } else {
                        theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
                    };
                    let c = T::one() / (t * t + T::one()).sqrt();
                    let s = t * c;
                    // J = diag(1, e^{-i phi}) * [[c, s], [-s, c]] acting on (p, q)
                    let j00 = Complex::new(c, T::zero());
                    let j01 = Complex::new(s, T::zero());
                    let j10 = phase.conj() * (-s);
                    let j11 = phase.conj() * c;

                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = akp * j00 + akq * j10;
                        a[(k, q)] = akp * j01 + akq * j11;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = j00.conj() * apk + j10.conj() * aqk;
                        a[(q, k)] = j01.conj() * apk + j11.conj() * aqk;
                    }
                    a[(p, q)] = Complex::zero();
                    a[(q, p)] = Complex::zero();
                    a[(p, p)].im = T::zero();
                    a[(q, q)].im = T::zero();

                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * j00 + vkq * j10;
                        v[(k, q)] = vkp * j01 + vkq * j11;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .expect("finite eigenvalues")
    });
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = SquareMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    (eigenvalues, vectors)
}

fn psd_threshold<T: Real>(spectrum: &SpectralDecomposition<T>) -> T {
    let norm = spectrum.min().abs().max(spectrum.max().abs());
    T::tol(PSD_TOL) * norm.max(T::one())
}

/// Principal square root of a positive-semidefinite matrix.
///
/// Eigenvalues down to `-1e-10 * max(1, ||M||)` are clipped to zero.
pub fn psd_sqrt<T: Real>(m: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>> {
    let spectrum = eig_hermitian(m);
    let threshold = psd_threshold(&spectrum);
    if spectrum.min() < -threshold {
        return Err(Error::NotPsd {
            min_eigenvalue: spectrum.min().as_f64(),
        });
    }
    Ok(spectrum.map(|l| l.max(T::zero()).sqrt()))
}

/// Trace norm `||M||_1 = sum |lambda_k|`.
pub fn trace_norm<T: Real>(m: &HermitianMatrix<T>) -> T {
    eig_hermitian(m).eigenvalues.iter().map(|l| l.abs()).sum()
}

/// Purity gap below which a state is treated as exactly rank one.
const RANK_ONE_PURITY_GAP: f64 = 1e-12;

/// Uhlmann fidelity `F(rho, sigma) = ||sqrt(rho) sqrt(sigma)||_1^2`, clipped to `[0, 1]`.
///
/// Evaluated as `(sum_k sqrt(mu_k))^2` over the eigenvalues of
/// `sqrt(rho) sigma sqrt(rho)`. When either argument is rank one the
/// fidelity is linear in the other one and is computed as `<v|other|v>`.
pub fn fidelity<T: Real>(rho: &DensityOperator<T>, sigma: &DensityOperator<T>) -> Result<T> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let rank_one = T::one() - T::tol(RANK_ONE_PURITY_GAP);
    for (pure, other) in [(sigma, rho), (rho, sigma)] {
        if pure.purity() >= rank_one {
            let spectrum = eig_hermitian(pure.matrix());
            let top = spectrum.eigenvector(spectrum.dim() - 1);
            let f = other.matrix().quadratic_form(&top);
            return Ok(clamp(f, T::zero(), T::one()));
        }
    }

    let sqrt_rho = psd_sqrt(rho.matrix())?;
    let inner = sqrt_rho.sandwich(sigma.matrix());
    let mu = eigenvalues(&inner);
    let top = mu.last().copied().unwrap_or_else(T::zero).max(T::zero());
    // eigenvalues at rounding level carry no information but would add
    // O(sqrt(eps)) each after the square root
    let floor = T::epsilon() * T::from_count(4 * mu.len()) * top;
    let root_sum: T = mu
        .iter()
        .map(|&m| if m > floor { m.sqrt() } else { T::zero() })
        .sum();
    Ok(clamp(root_sum * root_sum, T::zero(), T::one()))
}
