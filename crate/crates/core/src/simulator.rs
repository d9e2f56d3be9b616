//! Small density-matrix simulator: rotation/Clifford circuits with bit-flip
//! and depolarizing noise, perturbed states, shot sampling and a
//! derivative-free energy minimizer.

use num_complex::Complex;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, SquareMatrix};
use crate::model::{
    expectation, group_qubitwise_commuting, DensityOperator, MomentStats, Observable, PauliSum,
    PureState,
};
use crate::random::{random_orthogonal_state, rng_for_stream, rng_from_seed};
use crate::scalar::Real;

/// Largest register evolved as a density matrix.
pub const MAX_QUBITS: usize = 8;

#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Gate<T> {
    Rx { qubit: usize, theta: T },
    Ry { qubit: usize, theta: T },
    Rz { qubit: usize, theta: T },
    X { qubit: usize },
    H { qubit: usize },
    Cnot { control: usize, target: usize },
}

impl<T: Real> Gate<T> {
    pub fn angle(&self) -> Option<T> {
        match *self {
            Gate::Rx { theta, .. } | Gate::Ry { theta, .. } | Gate::Rz { theta, .. } => Some(theta),
            _ => None,
        }
    }

    fn with_angle(self, t: T) -> Self {
        match self {
            Gate::Rx { qubit, .. } => Gate::Rx { qubit, theta: t },
            Gate::Ry { qubit, .. } => Gate::Ry { qubit, theta: t },
            Gate::Rz { qubit, .. } => Gate::Rz { qubit, theta: t },
            g => g,
        }
    }

    fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::Rx { qubit, .. }
            | Gate::Ry { qubit, .. }
            | Gate::Rz { qubit, .. }
            | Gate::X { qubit }
            | Gate::H { qubit } => (qubit, None),
            Gate::Cnot { control, target } => (control, Some(target)),
        }
    }

    /// 2x2 matrix of a single-qubit gate, row-major.
    fn unitary(&self) -> Option<[[Complex<T>; 2]; 2]> {
        let re = |x: T| Complex::new(x, T::zero());
        let half = T::lit(0.5);
        Some(match *self {
            Gate::Rx { theta, .. } => {
                let (s, c) = (theta * half).sin_cos();
                let mis = Complex::new(T::zero(), -s);
                [[re(c), mis], [mis, re(c)]]
            }
            Gate::Ry { theta, .. } => {
                let (s, c) = (theta * half).sin_cos();
                [[re(c), re(-s)], [re(s), re(c)]]
            }
            Gate::Rz { theta, .. } => {
                let (s, c) = (theta * half).sin_cos();
                let z = Complex::zero();
                [[Complex::new(c, -s), z], [z, Complex::new(c, s)]]
            }
            Gate::X { .. } => {
                let (o, z) = (re(T::one()), Complex::zero());
                [[z, o], [o, z]]
            }
            Gate::H { .. } => {
                let h = re(T::one() / T::lit(2.0).sqrt());
                [[h, h], [h, -h]]
            }
            Gate::Cnot { .. } => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit<T> {
    n_qubits: usize,
    gates: Vec<Gate<T>>,
}

impl<T: Real> Circuit<T> {
    pub fn new(n_qubits: usize, gates: Vec<Gate<T>>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidCircuit("no qubits".into()));
        }
        for (k, g) in gates.iter().enumerate() {
            let (a, b) = g.qubits();
            if a >= n_qubits || b.is_some_and(|b| b >= n_qubits) {
                return Err(Error::InvalidCircuit(format!(
                    "gate {k} addresses a qubit outside 0..{n_qubits}"
                )));
            }
            if b == Some(a) {
                return Err(Error::InvalidCircuit(format!(
                    "gate {k}: control and target coincide"
                )));
            }
            if g.angle().is_some_and(|t| !t.is_finite()) {
                return Err(Error::InvalidCircuit(format!("gate {k}: non-finite angle")));
            }
        }
        Ok(Self { n_qubits, gates })
    }

    /// `layers` rounds of `RY` on every qubit followed by a `CNOT` chain, then a
    /// final `RY` layer; all angles start at zero.
    pub fn hardware_efficient(n_qubits: usize, layers: usize) -> Result<Self> {
        let ry_layer = |gates: &mut Vec<Gate<T>>| {
            gates.extend((0..n_qubits).map(|qubit| Gate::Ry {
                qubit,
                theta: T::zero(),
            }))
        };
        let mut gates = Vec::new();
        for _ in 0..layers {
            ry_layer(&mut gates);
            gates.extend((1..n_qubits).map(|t| Gate::Cnot {
                control: t - 1,
                target: t,
            }));
        }
        ry_layer(&mut gates);
        Self::new(n_qubits, gates)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate<T>] {
        &self.gates
    }

    pub fn params(&self) -> Vec<T> {
        self.gates.iter().filter_map(Gate::angle).collect()
    }

    /// Copy with the rotation angles replaced, in gate order.
    pub fn with_params(&self, params: &[T]) -> Result<Self> {
        let n = self.params().len();
        if params.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: params.len(),
            });
        }
        let mut it = params.iter();
        let gates = self
            .gates
            .iter()
            .map(|g| match g.angle() {
                Some(_) => g.with_angle(*it.next().expect("length checked")),
                None => *g,
            })
            .collect();
        Self::new(self.n_qubits, gates)
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct NoiseModel<T> {
    pub p_bitflip_1q: T,
    pub p_depol_2q: T,
}

impl<T: Real> NoiseModel<T> {
    pub fn new(p_bitflip_1q: T, p_depol_2q: T) -> Result<Self> {
        for (name, p) in [("p_bitflip_1q", p_bitflip_1q), ("p_depol_2q", p_depol_2q)] {
            if !(p >= T::zero() && p <= T::one()) {
                return Err(Error::OutOfRange {
                    name,
                    value: p.as_f64(),
                    range: "[0, 1]",
                });
            }
        }
        Ok(Self {
            p_bitflip_1q,
            p_depol_2q,
        })
    }

    pub fn noiseless() -> Self {
        Self {
            p_bitflip_1q: T::zero(),
            p_depol_2q: T::zero(),
        }
    }

    /// One percent on both channels.
    pub fn default_hardware() -> Self {
        Self {
            p_bitflip_1q: T::lit(0.01),
            p_depol_2q: T::lit(0.01),
        }
    }
}

fn bit(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

/// `U rho U^dag` for a single-qubit `U` on qubit `q`.
fn conjugate_1q<T: Real>(m: &mut SquareMatrix<T>, n: usize, q: usize, u: &[[Complex<T>; 2]; 2]) {
    let d = m.dim();
    let b = bit(n, q);
    for i0 in (0..d).filter(|i| i & b == 0) {
        let i1 = i0 | b;
        for j in 0..d {
            let (x0, x1) = (m[(i0, j)], m[(i1, j)]);
            m[(i0, j)] = u[0][0] * x0 + u[0][1] * x1;
            m[(i1, j)] = u[1][0] * x0 + u[1][1] * x1;
        }
    }
    for j0 in (0..d).filter(|j| j & b == 0) {
        let j1 = j0 | b;
        for i in 0..d {
            let (x0, x1) = (m[(i, j0)], m[(i, j1)]);
            m[(i, j0)] = x0 * u[0][0].conj() + x1 * u[0][1].conj();
            m[(i, j1)] = x0 * u[1][0].conj() + x1 * u[1][1].conj();
        }
    }
}

fn cnot_index(i: usize, cb: usize, tb: usize) -> usize {
    if i & cb != 0 {
        i ^ tb
    } else {
        i
    }
}

fn pauli_unitaries<T: Real>() -> [[[Complex<T>; 2]; 2]; 4] {
    let (o, z) = (Complex::new(T::one(), T::zero()), Complex::zero());
    let i = Complex::new(T::zero(), T::one());
    [
        [[o, z], [z, o]],
        [[z, o], [o, z]],
        [[z, -i], [i, z]],
        [[o, z], [z, -o]],
    ]
}

/// `(1 - p) rho + p X rho X` on qubit `q`.
fn bit_flip<T: Real>(m: &mut SquareMatrix<T>, n: usize, q: usize, p: T) {
    if p == T::zero() {
        return;
    }
    let mut flipped = m.clone();
    conjugate_1q(&mut flipped, n, q, &pauli_unitaries()[1]);
    *m = m.scale(T::one() - p).add(&flipped.scale(p));
}

/// `(1 - p) rho + p tr_{a,b}(rho) (x) I/4`, written as the uniform Pauli twirl
/// `tr_{a,b}(rho) (x) I/4 = (1/16) sum_P P rho P` over the 16 Paulis on `(a, b)`.
fn depolarize_pair<T: Real>(m: &mut SquareMatrix<T>, n: usize, a: usize, b: usize, p: T) {
    if p == T::zero() {
        return;
    }
    let paulis = pauli_unitaries::<T>();
    let mut twirl = SquareMatrix::zeros(m.dim());
    for pa in &paulis {
        let mut half = m.clone();
        conjugate_1q(&mut half, n, a, pa);
        for pb in &paulis {
            let mut full = half.clone();
            conjugate_1q(&mut full, n, b, pb);
            twirl = twirl.add(&full);
        }
    }
    *m = m.scale(T::one() - p).add(&twirl.scale(p / T::lit(16.0)));
}

/// Noisy density-matrix evolution from `|0...0>`.
///
/// Each single-qubit gate is followed by a bit flip on its qubit, each CNOT
/// by two-qubit depolarizing noise on its pair.
pub fn evolve<T: Real>(circuit: &Circuit<T>, noise: &NoiseModel<T>) -> Result<DensityOperator<T>> {
    let n = circuit.n_qubits;
    if n > MAX_QUBITS {
        return Err(Error::TooLarge {
            dim: 1 << n,
            max: 1 << MAX_QUBITS,
        });
    }
    let d = 1usize << n;
    let mut m = SquareMatrix::zeros(d);
    m[(0, 0)] = Complex::new(T::one(), T::zero());
    for gate in &circuit.gates {
        match (gate.unitary(), *gate) {
            (Some(u), _) => {
                let q = gate.qubits().0;
                conjugate_1q(&mut m, n, q, &u);
                bit_flip(&mut m, n, q, noise.p_bitflip_1q);
            }
            (None, Gate::Cnot { control, target }) => {
                let (cb, tb) = (bit(n, control), bit(n, target));
                let src = m.clone();
                m = SquareMatrix::from_fn(d, |i, j| {
                    src[(cnot_index(i, cb, tb), cnot_index(j, cb, tb))]
                });
                depolarize_pair(&mut m, n, control, target, noise.p_depol_2q);
            }
            (None, _) => unreachable!("only CNOT lacks a 2x2 matrix"),
        }
    }
    Ok(DensityOperator::from_trusted(m.hermitian_part()))
}

/// Noiseless state-vector evolution from `|0...0>`.
pub fn evolve_statevector<T: Real>(circuit: &Circuit<T>) -> Result<PureState<T>> {
    let n = circuit.n_qubits;
    if n > 2 * MAX_QUBITS {
        return Err(Error::TooLarge {
            dim: 1 << n,
            max: 1 << (2 * MAX_QUBITS),
        });
    }
    let d = 1usize << n;
    let mut v = vec![Complex::zero(); d];
    v[0] = Complex::new(T::one(), T::zero());
    for gate in &circuit.gates {
        match (gate.unitary(), *gate) {
            (Some(u), _) => {
                let b = bit(n, gate.qubits().0);
                for i0 in (0..d).filter(|i| i & b == 0) {
                    let (x0, x1) = (v[i0], v[i0 | b]);
                    v[i0] = u[0][0] * x0 + u[0][1] * x1;
                    v[i0 | b] = u[1][0] * x0 + u[1][1] * x1;
                }
            }
            (None, Gate::Cnot { control, target }) => {
                let (cb, tb) = (bit(n, control), bit(n, target));
                let src = v.clone();
                for (i, vi) in v.iter_mut().enumerate() {
                    *vi = src[cnot_index(i, cb, tb)];
                }
            }
            (None, _) => unreachable!("only CNOT lacks a 2x2 matrix"),
        }
    }
    PureState::normalized(v)
}

/// `sqrt(1 - eps) psi + sqrt(eps) psi_perp` with `psi_perp` uniform on the
/// orthogonal complement of `psi`, drawn from `seed`.
pub fn perturbed_state<T: Real>(psi: &PureState<T>, eps: T, seed: u64) -> Result<PureState<T>> {
    if psi.dim() < 2 {
        return Err(Error::DimensionOne);
    }
    if !(eps >= T::zero() && eps <= T::one()) {
        return Err(Error::OutOfRange {
            name: "eps",
            value: eps.as_f64(),
            range: "[0, 1]",
        });
    }
    let perp = random_orthogonal_state(psi, &mut rng_from_seed(seed));
    let (a, b) = ((T::one() - eps).sqrt(), eps.sqrt());
    let amps = psi
        .amplitudes()
        .iter()
        .zip(perp.amplitudes())
        .map(|(x, y)| x * a + y * b)
        .collect();
    PureState::normalized(amps)
}

/// Shot budget and confidence level of the sampling procedure.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SamplingConfig {
    pub shots: u64,
    pub repetitions: usize,
    /// One-sided confidence level of each half-width.
    pub confidence: f64,
    pub seed: u64,
}

impl SamplingConfig {
    pub fn new(shots: u64, repetitions: usize, seed: u64) -> Self {
        Self {
            shots,
            repetitions,
            confidence: 0.99,
            seed,
        }
    }

    pub fn with_confidence(self, confidence: f64) -> Self {
        Self { confidence, ..self }
    }

    fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::OutOfRange {
                name: "shots",
                value: 0.0,
                range: "[1, inf)",
            });
        }
        if self.repetitions < 2 {
            return Err(Error::OutOfRange {
                name: "repetitions",
                value: self.repetitions as f64,
                range: "[2, inf)",
            });
        }
        if !(self.confidence > 0.5 && self.confidence < 1.0) {
            return Err(Error::OutOfRange {
                name: "confidence",
                value: self.confidence,
                range: "(0.5, 1)",
            });
        }
        Ok(())
    }
}

/// Outcome distribution of measuring `A` on `rho`: `(eigenvalue, probability)`.
pub fn outcome_distribution<T: Real>(
    a: &Observable<T>,
    rho: &DensityOperator<T>,
) -> Result<Vec<(T, T)>> {
    if a.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: rho.dim(),
        });
    }
    let s = eig_hermitian(a.matrix());
    let mut probs: Vec<T> = (0..s.dim())
        .map(|k| {
            rho.matrix()
                .quadratic_form(&s.eigenvector(k))
                .max(T::zero())
        })
        .collect();
    let total: T = probs.iter().copied().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    Ok(s.eigenvalues.into_iter().zip(probs).collect())
}

/// Multinomial counts by sequential binomial draws.
fn multinomial<R: Rng + ?Sized>(shots: u64, probs: &[f64], rng: &mut R) -> Vec<u64> {
    let mut remaining = shots;
    let mut mass = 1.0;
    let mut counts = Vec::with_capacity(probs.len());
    for (k, &p) in probs.iter().enumerate() {
        let c = if remaining == 0 || k + 1 == probs.len() {
            remaining
        } else {
            let q = (p / mass).clamp(0.0, 1.0);
            Binomial::new(remaining, q)
                .expect("probability in [0, 1]")
                .sample(rng)
        };
        counts.push(c);
        remaining -= c;
        mass -= p;
    }
    counts
}

/// Sampled moments with one-sided Student-t half-widths at 99%.
pub fn sample_moments<T: Real>(
    a: &Observable<T>,
    rho: &DensityOperator<T>,
    shots: u64,
    repetitions: usize,
    seed: u64,
) -> Result<MomentStats<T>> {
    sample_moments_with(a, rho, &SamplingConfig::new(shots, repetitions, seed), 0)
}

/// Sampled moments; repetition `r` draws from stream `(stream << 32) | r` of the seed.
pub fn sample_moments_with<T: Real>(
    a: &Observable<T>,
    rho: &DensityOperator<T>,
    config: &SamplingConfig,
    stream: u64,
) -> Result<MomentStats<T>> {
    config.validate()?;
    let dist = outcome_distribution(a, rho)?;
    let values: Vec<f64> = dist.iter().map(|(v, _)| v.as_f64()).collect();
    let probs: Vec<f64> = dist.iter().map(|(_, p)| p.as_f64()).collect();

    let mut firsts = Vec::with_capacity(config.repetitions);
    let mut seconds = Vec::with_capacity(config.repetitions);
    for r in 0..config.repetitions {
        let mut rng = rng_for_stream(config.seed, (stream << 32) | r as u64);
        let counts = multinomial(config.shots, &probs, &mut rng);
        let shots = config.shots as f64;
        let (mut m1, mut m2) = (0.0, 0.0);
        for (&c, &v) in counts.iter().zip(&values) {
            m1 += c as f64 * v;
            m2 += c as f64 * v * v;
        }
        firsts.push(m1 / shots);
        seconds.push(m2 / shots);
    }
    let (mean1, hw1) = mean_and_half_width(&firsts, config.confidence);
    let (mean2, hw2) = mean_and_half_width(&seconds, config.confidence);
    MomentStats::new(T::lit(mean1), T::lit(mean2.max(mean1 * mean1)))?
        .with_half_widths(T::lit(hw1), T::lit(hw2))
}

/// Sample mean and `t_{conf, n-1} s / sqrt(n)`.
pub fn mean_and_half_width(xs: &[f64], confidence: f64) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    let t = StudentsT::new(0.0, 1.0, n - 1.0)
        .expect("at least two repetitions")
        .inverse_cdf(confidence);
    (mean, t * (var / n).sqrt())
}

/// Sampled moments of every qubit-wise commuting group of `h`, in group order.
pub fn sample_group_moments<T: Real>(
    h: &PauliSum<T>,
    rho: &DensityOperator<T>,
    config: &SamplingConfig,
) -> Result<Vec<MomentStats<T>>> {
    group_qubitwise_commuting(h)
        .into_iter()
        .enumerate()
        .map(|(k, g)| sample_moments_with(&Observable::from_pauli(g)?, rho, config, k as u64))
        .collect()
}

/// Stopping rules of the coordinate search.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct MinimizeOptions {
    pub max_sweeps: usize,
    /// Stop once no angle moves by more than this in a sweep.
    pub tol: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            max_sweeps: 200,
            tol: 1e-7,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VqeResult<T> {
    pub params: Vec<T>,
    pub energy: T,
    pub state: DensityOperator<T>,
    pub sweeps: usize,
}

/// Coordinate descent on the template's angles.
///
/// Each coordinate is scanned on an 8-point grid over one period, then refined
/// by golden-section search in the bracket around the best grid point; a move
/// is kept only if it lowers the energy. The seed fixes the visiting order.
pub fn minimize_energy<T: Real>(
    h: &PauliSum<T>,
    template: &Circuit<T>,
    noise: &NoiseModel<T>,
    seed: u64,
    options: &MinimizeOptions,
) -> Result<VqeResult<T>> {
    let mut params = template.params();
    if params.is_empty() {
        return Err(Error::NoParameters);
    }
    if h.n_qubits() != template.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: template.n_qubits(),
            found: h.n_qubits(),
        });
    }
    let obs = Observable::from_pauli(h.clone())?;
    let energy_of = |p: &[T]| -> Result<T> {
        let rho = evolve(&template.with_params(p)?, noise)?;
        expectation(&obs, &rho)
    };

    let mut rng = rng_from_seed(seed);
    let mut order: Vec<usize> = (0..params.len()).collect();
    let mut energy = energy_of(&params)?;
    let mut sweeps = 0;
    let two_pi = T::lit(2.0) * T::PI();
    let step = two_pi / T::lit(8.0);
    let inv_phi = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let tol = T::lit(options.tol);

    while sweeps < options.max_sweeps {
        sweeps += 1;
        order.shuffle(&mut rng);
        let mut largest_move = T::zero();
        for &i in &order {
            let start = params[i];
            let mut trial = params.clone();
            let mut along = |x: T| -> Result<T> {
                trial[i] = x;
                energy_of(&trial)
            };
            let (mut best_x, mut best_e) = (start, energy);
            for k in 1..8 {
                let x = start + step * T::from_count(k);
                let e = along(x)?;
                if e < best_e {
                    (best_x, best_e) = (x, e);
                }
            }
            let (mut lo, mut hi) = (best_x - step, best_x + step);
            let mut c = hi - inv_phi * (hi - lo);
            let mut d = lo + inv_phi * (hi - lo);
            let (mut fc, mut fd) = (along(c)?, along(d)?);
            while hi - lo > tol {
                if fc < fd {
                    hi = d;
                    (d, fd) = (c, fc);
                    c = hi - inv_phi * (hi - lo);
                    fc = along(c)?;
                } else {
                    lo = c;
                    (c, fc) = (d, fd);
                    d = lo + inv_phi * (hi - lo);
                    fd = along(d)?;
                }
            }
            let x = T::lit(0.5) * (lo + hi);
            let e = along(x)?;
            if e < best_e {
                (best_x, best_e) = (x, e);
            }
            if best_e < energy {
                // keep angles in (-pi, pi]
                let mut wrapped = best_x % two_pi;
                if wrapped > T::PI() {
                    wrapped -= two_pi;
                } else if wrapped <= -T::PI() {
                    wrapped += two_pi;
                }
                let delta = (best_x - start).abs();
                largest_move = largest_move.max(delta);
                params[i] = wrapped;
                energy = best_e;
            }
        }
        if largest_move <= tol {
            break;
        }
    }
    let state = evolve(&template.with_params(&params)?, noise)?;
    let energy = expectation(&obs, &state)?;
    Ok(VqeResult {
        params,
        energy,
        state,
        sweeps,
    })
}
