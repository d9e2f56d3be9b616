//! Seeded random ensembles for tests, property sweeps and the simulator.
//!
//! Every generator is a `ChaCha8Rng`; independent streams for the same seed
//! are derived with [`rng_for_stream`].

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{HermitianMatrix, SquareMatrix};
use crate::model::{DensityOperator, Observable, Pauli, PauliSum, PauliTerm, PureState};
use crate::scalar::Real;

pub type DefaultRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for stream `stream` of `seed`; streams never overlap.
pub fn rng_for_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

pub fn gaussian_vector<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex<T>> {
    (0..dim).map(|_| gaussian(rng)).collect()
}

/// Haar-distributed unit vector.
pub fn random_pure_state<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState<T> {
    loop {
        if let Ok(s) = PureState::normalized(gaussian_vector(dim, rng)) {
            return s;
        }
    }
}

/// Unit vector orthogonal to `psi`, uniform on the orthogonal complement.
pub fn random_orthogonal_state<T: Real, R: Rng + ?Sized>(
    psi: &PureState<T>,
    rng: &mut R,
) -> PureState<T> {
    loop {
        let mut v = gaussian_vector(psi.dim(), rng);
        let c: Complex<T> = psi
            .amplitudes()
            .iter()
            .zip(&v)
            .map(|(a, b)| a.conj() * b)
            .sum();
        for (vi, pi) in v.iter_mut().zip(psi.amplitudes()) {
            *vi -= c * pi;
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm > T::lit(1e-6) {
            return PureState::normalized(v).expect("nonzero vector");
        }
    }
}

/// Density operator `G G^dag / tr(G G^dag)` with `G` a `dim x rank` Gaussian matrix.
pub fn random_density<T: Real, R: Rng + ?Sized>(
    dim: usize,
    rank: usize,
    rng: &mut R,
) -> DensityOperator<T> {
    let mut m = SquareMatrix::zeros(dim);
    for _ in 0..rank.max(1) {
        let g: Vec<Complex<T>> = gaussian_vector(dim, rng);
        m = m.add(&SquareMatrix::outer(&g, &g));
    }
    let trace = m.trace().re;
    DensityOperator::new(m.scale(T::one() / trace).hermitian_part())
        .expect("Wishart matrix is a valid state")
}

/// Hermitian matrix from the Gaussian unitary ensemble (entries of order one).
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianMatrix<T> {
    let g = SquareMatrix::from_fn(dim, |_, _| gaussian(rng));
    g.add(&g.adjoint()).scale(T::lit(0.5)).hermitian_part()
}

/// Haar-random unitary from the QR decomposition of a Gaussian matrix.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> SquareMatrix<T> {
    complete_unitary(Vec::with_capacity(dim), dim, rng)
}

/// Random unitary whose first column is `v`.
pub fn random_unitary_with_column<T: Real, R: Rng + ?Sized>(
    v: &PureState<T>,
    rng: &mut R,
) -> SquareMatrix<T> {
    complete_unitary(vec![v.amplitudes().to_vec()], v.dim(), rng)
}

/// Extends orthonormal columns to a basis with Gram-Schmidt on Gaussian vectors.
fn complete_unitary<T: Real, R: Rng + ?Sized>(
    mut cols: Vec<Vec<Complex<T>>>,
    dim: usize,
    rng: &mut R,
) -> SquareMatrix<T> {
    while cols.len() < dim {
        let mut v: Vec<Complex<T>> = gaussian_vector(dim, rng);
        for u in &cols {
            let c: Complex<T> = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= c * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm > T::lit(1e-6) {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    SquareMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// Observable with eigenvector `v` for `values[0]` and a random remaining eigenbasis.
pub fn random_observable_with_eigenvector<T: Real, R: Rng + ?Sized>(
    v: &PureState<T>,
    values: &[T],
    rng: &mut R,
) -> Observable<T> {
    let u = random_unitary_with_column(v, rng);
    Observable::from_matrix(HermitianMatrix::diagonal(values).conjugate_by(&u))
}

/// Observable `U diag(values) U^dag` with a Haar-random eigenbasis.
pub fn random_observable_with_spectrum<T: Real, R: Rng + ?Sized>(
    values: &[T],
    rng: &mut R,
) -> (Observable<T>, SquareMatrix<T>) {
    let u = random_unitary(values.len(), rng);
    let m = HermitianMatrix::diagonal(values).conjugate_by(&u);
    (Observable::from_matrix(m), u)
}

/// Random Pauli sum with `terms` terms (coefficients in `[-1, 1]`) on `n` qubits.
pub fn random_pauli_sum<T: Real, R: Rng + ?Sized>(
    n_qubits: usize,
    terms: usize,
    rng: &mut R,
) -> PauliSum<T> {
    let letters = [Pauli::X, Pauli::Y, Pauli::Z];
    let generated = (0..terms).map(|_| {
        let coefficient = T::lit(rng.random_range(-1.0..1.0));
        let support = (0..n_qubits).filter_map(|q| {
            let k = rng.random_range(0..4usize);
            (k < 3).then(|| (q, letters[k]))
        });
        PauliTerm::new(coefficient, support.collect::<Vec<_>>())
    });
    PauliSum::new(n_qubits, generated.collect::<Vec<_>>()).expect("indices are in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_draws() {
        let a: PureState<f64> = random_pure_state(4, &mut rng_from_seed(1));
        let b: PureState<f64> = random_pure_state(4, &mut rng_from_seed(1));
        assert_eq!(a, b);
        let c: PureState<f64> = random_pure_state(4, &mut rng_for_stream(1, 1));
        assert_ne!(a, c);
    }

    #[test]
    fn orthogonal_state_is_orthogonal() {
        let mut rng = rng_from_seed(2);
        let psi: PureState<f64> = random_pure_state(5, &mut rng);
        let perp = random_orthogonal_state(&psi, &mut rng);
        assert!(psi.overlap(&perp) < 1e-28);
    }

    #[test]
    fn unitary_is_unitary() {
        let u: SquareMatrix<f64> = random_unitary(6, &mut rng_from_seed(3));
        let should_be_id = u.adjoint().matmul(&u);
        assert!(should_be_id.sub(&SquareMatrix::identity(6)).max_abs() < 1e-12);
    }

    #[test]
    fn prescribed_eigenvector() {
        let mut rng = rng_from_seed(9);
        let v: PureState<f64> = random_pure_state(4, &mut rng);
        let a = random_observable_with_eigenvector(&v, &[0.5, -1.0, 2.0, 0.0], &mut rng);
        let av = a.matrix().as_matrix().mul_vec(v.amplitudes());
        for (x, y) in av.iter().zip(v.amplitudes()) {
            assert!((x - y * 0.5).norm() < 1e-12);
        }
    }

    #[test]
    fn density_rank() {
        let rho: DensityOperator<f64> = random_density(4, 1, &mut rng_from_seed(4));
        assert!(rho.is_pure());
    }
}
