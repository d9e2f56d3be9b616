//! Brute-force and constructive checks for the closed forms: exact
//! diagonalization, the Helstrom construction of the optimal type-II error,
//! the observable that saturates the SDP upper bound, and the Gram-matrix
//! inequality.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, fidelity, HermitianMatrix, SpectralDecomposition, SquareMatrix,
};
use crate::model::{
    expectation, moments, normalize_to_unit_spectrum, DensityOperator, MomentStats, Observable,
    PureState, PURITY_TOL,
};
use crate::robustness::{
    gramian_eigenvalue_interval, gramian_expectation_lb, sdp_interval, Method, RobustnessInterval,
};
use crate::scalar::{clamp, Real};

/// Levels closer than this are the same eigenvalue.
pub const DISTINCT_TOL: f64 = 1e-9;

/// Relative zero threshold on the spectrum of `sigma - t rho`.
pub const HELSTROM_ZERO_TOL: f64 = 1e-12;

const BISECTION_MAX_ITER: usize = 200;
const BISECTION_TOL: f64 = 1e-12;
const SANDWICH_TOL: f64 = 1e-10;
const Q0_GUARD: f64 = 1e-14;

/// Lowest part of a spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundInfo<T> {
    pub lambda0: T,
    /// Second-lowest distinct level; absent for a multiple of the identity.
    pub lambda1: Option<T>,
    pub psi0: PureState<T>,
    pub degeneracy: usize,
}

/// Two lowest distinct levels, a ground vector and the ground degeneracy.
pub fn exact_ground<T: Real>(h: &Observable<T>) -> GroundInfo<T> {
    let s = eig_hermitian(h.matrix());
    let lambda0 = s.min();
    let tol = T::tol(DISTINCT_TOL) * T::one().max(lambda0.abs());
    let degeneracy = s
        .eigenvalues
        .iter()
        .take_while(|&&l| l - lambda0 <= tol)
        .count();
    GroundInfo {
        lambda0,
        lambda1: s.eigenvalues.get(degeneracy).copied(),
        psi0: PureState::normalized(s.eigenvector(0)).expect("eigenvector is a unit vector"),
        degeneracy,
    }
}

/// Weight of `rho` on the ground eigenspace of `h`.
pub fn ground_space_overlap<T: Real>(h: &Observable<T>, rho: &DensityOperator<T>) -> T {
    let s = eig_hermitian(h.matrix());
    let lambda0 = s.min();
    let tol = T::tol(DISTINCT_TOL) * T::one().max(lambda0.abs());
    let p = s.projector(|l| l - lambda0 <= tol);
    p.trace_product(rho.matrix()).re
}

/// Optimal test for `rho` against `sigma` at type-I level `alpha0`.
#[derive(Clone, Debug)]
pub struct HelstromResult<T> {
    pub t0: T,
    pub lambda: HermitianMatrix<T>,
    pub q0: T,
    /// `tr(Lambda rho)`.
    pub alpha_achieved: T,
    /// `1 - tr(Lambda sigma)`.
    pub beta: T,
}

struct Split<T> {
    plus: HermitianMatrix<T>,
    zero: HermitianMatrix<T>,
}

fn op_norm<T: Real>(s: &SpectralDecomposition<T>) -> T {
    s.min().abs().max(s.max().abs())
}

/// Projectors onto the positive and null eigenspaces of `sigma - t rho`.
///
/// The null space is `|eta| <= 1e-12 max(||sigma||, t ||rho||) + slack`; the
/// threshold scales with the operands rather than with `sigma - t rho`, which
/// vanishes when `rho = sigma` and `t = 1`.
fn split<T: Real>(
    sigma: &HermitianMatrix<T>,
    rho: &HermitianMatrix<T>,
    norms: (T, T),
    t: T,
    slack: T,
) -> Split<T> {
    let s = eig_hermitian(&sigma.sub(&rho.scale(t)));
    let thr = T::tol(HELSTROM_ZERO_TOL) * norms.0.max(t * norms.1) + slack;
    Split {
        plus: s.projector(|e| e > thr),
        zero: s.projector(|e| e.abs() <= thr),
    }
}

fn weight<T: Real>(p: &HermitianMatrix<T>, rho: &HermitianMatrix<T>) -> T {
    p.trace_product(rho).re
}

/// Helstrom operator `Lambda = P_+ + q0 P_0` at the smallest `t0 >= 0` with
/// `tr(P_{t0,+} rho) <= alpha0`.
///
/// At `alpha0 = 0` the optimum is the projector onto the kernel of `rho`,
/// reached only as `t -> inf`; `t0` is then reported as infinite.
pub fn helstrom<T: Real>(
    rho: &DensityOperator<T>,
    sigma: &DensityOperator<T>,
    alpha0: T,
) -> Result<HelstromResult<T>> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    if !(alpha0 >= T::zero() && alpha0 <= T::one()) {
        return Err(Error::OutOfRange {
            name: "alpha0",
            value: alpha0.as_f64(),
            range: "[0, 1]",
        });
    }
    let (r, s) = (rho.matrix(), sigma.matrix());
    let rho_spec = eig_hermitian(r);
    let norms = (op_norm(&eig_hermitian(s)), op_norm(&rho_spec));

    if alpha0 <= T::lit(Q0_GUARD) {
        let thr = T::tol(HELSTROM_ZERO_TOL) * norms.1;
        let lambda = rho_spec.projector(|e| e <= thr);
        return Ok(finish(T::infinity(), lambda, T::zero(), r, s));
    }

    let p_plus = |t: T| weight(&split(s, r, norms, t, T::zero()).plus, r);
    let (mut lo, mut hi) = (T::zero(), T::zero());
    if p_plus(T::zero()) > alpha0 {
        hi = T::one();
        let mut doublings = 0;
        while p_plus(hi) > alpha0 {
            lo = hi;
            hi *= T::lit(2.0);
            doublings += 1;
            if doublings > 64 {
                return Err(Error::BisectionFailure(format!(
                    "tr(P_+ rho) stays above alpha0 = {alpha0} for t up to {hi}"
                )));
            }
        }
        for _ in 0..BISECTION_MAX_ITER {
            if hi - lo <= T::tol(BISECTION_TOL) * T::one().max(hi) {
                break;
            }
            let mid = T::lit(0.5) * (lo + hi);
            if p_plus(mid) <= alpha0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    let t0 = hi;
    // an eigenvalue crossing zero inside the final bracket moves by at most
    // (hi - lo) ||rho||, so it belongs to the null space at t0
    let parts = split(s, r, norms, t0, (hi - lo) * norms.1);
    let w_plus = weight(&parts.plus, r);
    let w_zero = weight(&parts.zero, r);
    let tol = T::tol(SANDWICH_TOL);
    if w_plus > alpha0 + tol || alpha0 > w_plus + w_zero + tol {
        return Err(Error::BisectionFailure(format!(
            "sandwich fails at t0 = {t0}: tr(P_+ rho) = {w_plus}, tr((P_+ + P_0) rho) = {}",
            w_plus + w_zero
        )));
    }
    let q0 = if w_zero < T::lit(Q0_GUARD) {
        T::zero()
    } else {
        clamp((alpha0 - w_plus) / w_zero, T::zero(), T::one())
    };
    let lambda = parts.plus.add(&parts.zero.scale(q0));
    Ok(finish(t0, lambda, q0, r, s))
}

fn finish<T: Real>(
    t0: T,
    lambda: HermitianMatrix<T>,
    q0: T,
    rho: &HermitianMatrix<T>,
    sigma: &HermitianMatrix<T>,
) -> HelstromResult<T> {
    let alpha_achieved = weight(&lambda, rho);
    let beta = T::one() - weight(&lambda, sigma);
    HelstromResult {
        t0,
        lambda,
        q0,
        alpha_achieved,
        beta,
    }
}

/// Minimal type-II error `beta*(alpha0; rho, sigma)` by the Helstrom construction.
pub fn beta_star_numeric<T: Real>(
    rho: &DensityOperator<T>,
    sigma: &DensityOperator<T>,
    alpha0: T,
) -> Result<T> {
    helstrom(rho, sigma, alpha0).map(|h| h.beta)
}

/// `t0` for pure states with overlap `g = |<psi|phi>|^2`, `0 < alpha0 < 1`.
pub fn pure_t0<T: Real>(g: T, alpha0: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    two * g - one - (two * alpha0 - one) * (g * (one - g) / (alpha0 * (one - alpha0))).sqrt()
}

/// Eigenvalues `(eta0, eta1) = (1 - t) / 2 -+ R_t` of `sigma - t rho` for pure
/// states with overlap `g`, where `R_t = sqrt((1 - t)^2 / 4 + t (1 - g))`.
pub fn pure_eta<T: Real>(t: T, g: T) -> (T, T) {
    let half = T::lit(0.5);
    let one = T::one();
    let r = ((one - t) * (one - t) * T::lit(0.25) + t * (one - g)).sqrt();
    (half * (one - t) - r, half * (one - t) + r)
}

fn require_pure<T: Real>(state: &DensityOperator<T>) -> Result<()> {
    let purity = state.purity();
    if purity > T::one() - T::tol(PURITY_TOL) {
        Ok(())
    } else {
        Err(Error::NotPure {
            purity: purity.as_f64(),
        })
    }
}

/// `A* = 2 Lambda* - I` with `Lambda*` the Helstrom operator at
/// `alpha0 = (1 + first) / 2`, so that `<A*>_rho = first` and `<A*>_sigma`
/// attains the SDP upper bound at `(first, 1 - F(rho, sigma))`.
pub fn tight_observable<T: Real>(
    rho: &DensityOperator<T>,
    sigma: &DensityOperator<T>,
    first: T,
) -> Result<Observable<T>> {
    require_pure(rho)?;
    require_pure(sigma)?;
    if !(first.abs() <= T::one()) {
        return Err(Error::OutOfRange {
            name: "first",
            value: first.as_f64(),
            range: "[-1, 1]",
        });
    }
    let alpha0 = T::lit(0.5) * (T::one() + first);
    let h = helstrom(rho, sigma, alpha0)?;
    let a = h.lambda.scale(T::lit(2.0)).shift(-T::one());
    Ok(Observable::from_matrix(a))
}

/// Both sides of the Gram-matrix inequality for one triple.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct GramCheck<T> {
    pub lower: T,
    /// `Re <psi|A|phi>` after rotating `psi` so that `<phi|psi>` is real and non-negative.
    pub value: T,
    pub upper: T,
    pub determinant: T,
    pub holds: bool,
}

fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `det` of a 3x3 Hermitian matrix (real up to rounding).
fn det3<T: Real>(g: &[[Complex<T>; 3]; 3]) -> T {
    let m = |i: usize, j: usize| g[i][j];
    (m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
        - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)))
    .re
}

/// Evaluates `c <A>_phi - dA sqrt(1 - c^2) <= Re <psi|A|phi> <= c <A>_phi + dA sqrt(1 - c^2)`
/// with `c = |<phi|psi>|`, and positivity of the Gram matrix of `(psi, phi, A phi)`.
pub fn gram_check<T: Real>(
    psi: &PureState<T>,
    phi: &PureState<T>,
    a: &Observable<T>,
) -> Result<GramCheck<T>> {
    if psi.dim() != phi.dim() || a.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: psi.dim(),
            found: if psi.dim() != phi.dim() {
                phi.dim()
            } else {
                a.dim()
            },
        });
    }
    let gamma = inner(phi.amplitudes(), psi.amplitudes());
    let rotation = if gamma.norm() > T::zero() {
        gamma.conj() / gamma.norm()
    } else {
        Complex::new(T::one(), T::zero())
    };
    let psi_r: Vec<Complex<T>> = psi.amplitudes().iter().map(|z| z * rotation).collect();
    let phi_v = phi.amplitudes();
    let a_phi = a.matrix().as_matrix().mul_vec(phi_v);

    let c = gamma.norm().min(T::one());
    let stats = moments(a, &phi.to_density())?;
    let spread = stats.std_dev() * (T::one() - c * c).max(T::zero()).sqrt();
    let lower = c * stats.first() - spread;
    let upper = c * stats.first() + spread;
    let value = inner(&psi_r, &a_phi).re;

    let vs = [&psi_r[..], phi_v, &a_phi[..]];
    let mut g = [[Complex::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = inner(vs[i], vs[j]);
        }
    }
    let determinant = det3(&g);

    let scale = T::one().max(a.matrix().max_abs());
    let tol = T::tol(1e-10) * scale;
    let holds = lower - tol <= value && value <= upper + tol && determinant >= -tol * scale;
    Ok(GramCheck {
        lower,
        value,
        upper,
        determinant,
        holds,
    })
}

/// True iff the Gram-matrix inequality and positivity hold within `1e-10`.
pub fn gram_inequality_check<T: Real>(
    psi: &PureState<T>,
    phi: &PureState<T>,
    a: &Observable<T>,
) -> bool {
    gram_check(psi, phi, a).is_ok_and(|g| g.holds)
}

/// One bound family evaluated against the true value.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ContainmentCase<T> {
    pub interval: RobustnessInterval<T>,
    pub truth: T,
    /// False only if an applicable side excludes the truth beyond tolerance.
    pub contained: bool,
}

/// All bound families for `(A, rho, sigma)` at the exact `eps = 1 - F(rho, sigma)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContainmentReport<T> {
    pub epsilon: T,
    pub cases: Vec<ContainmentCase<T>>,
}

impl<T: Real> ContainmentReport<T> {
    pub fn violations(&self) -> usize {
        self.cases.iter().filter(|c| !c.contained).count()
    }

    pub fn case(&self, method: Method) -> Option<&ContainmentCase<T>> {
        self.cases.iter().find(|c| c.interval.method == method)
    }
}

fn judge<T: Real>(interval: RobustnessInterval<T>, truth: T, tol: T) -> ContainmentCase<T> {
    let lower_ok = !interval.applicable.lower || interval.lower <= truth + tol;
    let upper_ok = !interval.applicable.upper || truth <= interval.upper + tol;
    ContainmentCase {
        interval,
        truth,
        contained: lower_ok && upper_ok,
    }
}

/// Checks every applicable bound against `<A>_sigma`.
///
/// The SDP interval is taken on `A` normalized by its exact spectrum, the
/// expectation bound on `A - lambda_min`, and the eigenvalue interval only
/// when `sigma` is a pure eigenstate of `A`. All results are on the original
/// scale of `A`; `tol` is absolute on that scale.
pub fn check_containment<T: Real>(
    a: &Observable<T>,
    rho: &DensityOperator<T>,
    sigma: &DensityOperator<T>,
    tol: T,
) -> Result<ContainmentReport<T>> {
    let eps = T::one() - fidelity(rho, sigma)?;
    let stats = moments(a, rho)?;
    let truth = expectation(a, sigma)?;
    let spectrum = a.spectrum();
    let (lo, hi) = (spectrum[0], spectrum[spectrum.len() - 1]);
    let mut cases = Vec::with_capacity(3);

    if hi - lo > T::tol(1e-12) * T::one().max(lo.abs()).max(hi.abs()) {
        let (_, map) = normalize_to_unit_spectrum(a, lo, hi)?;
        let unit = sdp_interval(map.invert(stats.first()), eps)?;
        let interval = RobustnessInterval {
            lower: map.apply(unit.lower),
            upper: map.apply(unit.upper),
            ..unit
        };
        cases.push(judge(interval, truth, tol));

        let shifted = stats.affine(T::one(), -lo);
        if shifted.first() > T::zero() {
            let g = gramian_expectation_lb(&shifted, eps)?;
            let interval = RobustnessInterval {
                lower: g.lower + lo,
                ..g
            };
            cases.push(judge(interval, truth, tol));
        }
    }

    if let Some(lambda) = eigenvalue_of(a, sigma) {
        if eps < T::one() - T::lit(1e-9) {
            let interval = gramian_eigenvalue_interval(&stats, eps)?;
            cases.push(judge(interval, lambda, tol));
        }
    }
    Ok(ContainmentReport {
        epsilon: eps,
        cases,
    })
}

/// `lambda` if `sigma = |v><v|` with `A v = lambda v` (within `1e-9`).
pub fn eigenvalue_of<T: Real>(a: &Observable<T>, sigma: &DensityOperator<T>) -> Option<T> {
    if !sigma.is_pure() {
        return None;
    }
    let v = sigma.principal_vector();
    let av = a.matrix().as_matrix().mul_vec(v.amplitudes());
    let lambda = inner(v.amplitudes(), &av).re;
    let residual = av
        .iter()
        .zip(v.amplitudes())
        .map(|(x, y)| (x - y * lambda).norm_sqr())
        .sum::<T>()
        .sqrt();
    (residual <= T::tol(1e-9) * T::one().max(a.matrix().max_abs())).then_some(lambda)
}

/// `tr_B` of a state on `C^{dim_a} (x) C^{dim_b}`.
pub fn partial_trace_second<T: Real>(
    rho: &DensityOperator<T>,
    dim_a: usize,
    dim_b: usize,
) -> Result<DensityOperator<T>> {
    if dim_a * dim_b != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: dim_a * dim_b,
        });
    }
    let m = rho.matrix().as_matrix();
    let reduced = SquareMatrix::from_fn(dim_a, |i, j| {
        (0..dim_b).map(|k| m[(i * dim_b + k, j * dim_b + k)]).sum()
    });
    DensityOperator::new(reduced.hermitian_part())
}

/// Moments of `A` on `rho` bundled with `eps = 1 - F(rho, sigma)`.
pub fn exact_inputs<T: Real>(
    a: &Observable<T>,
    rho: &DensityOperator<T>,
    sigma: &DensityOperator<T>,
) -> Result<(MomentStats<T>, T)> {
    Ok((moments(a, rho)?, T::one() - fidelity(rho, sigma)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_pure_state, rng_from_seed};
    use crate::robustness::beta_star_pure;

    fn qubit(g: f64) -> (DensityOperator<f64>, DensityOperator<f64>) {
        let sigma = PureState::basis(2, 0).to_density();
        let rho = PureState::from_real(&[g.sqrt(), (1.0 - g).sqrt()])
            .unwrap()
            .to_density();
        (rho, sigma)
    }

    #[test]
    fn exact_ground_examples() {
        let z = Observable::<f64>::diagonal(&[1.0, -1.0]);
        let g = exact_ground(&z);
        assert_eq!((g.lambda0, g.lambda1, g.degeneracy), (-1.0, Some(1.0), 1));
        assert!((g.psi0.amplitudes()[1].norm() - 1.0).abs() < 1e-15);

        let id = Observable::diagonal(&[1.0, 1.0, 1.0, 1.0]);
        let g = exact_ground(&id);
        assert_eq!((g.lambda1, g.degeneracy), (None, 4));

        let d = Observable::diagonal(&[0.0, 0.0, 1.0]);
        let g = exact_ground(&d);
        assert_eq!((g.lambda0, g.lambda1, g.degeneracy), (0.0, Some(1.0), 2));
    }

    #[test]
    fn helstrom_identical_states() {
        let zero = PureState::<f64>::basis(2, 0).to_density();
        let h = helstrom(&zero, &zero, 0.5).unwrap();
        assert!((h.t0 - 1.0).abs() < 1e-10);
        assert!((h.q0 - 0.5).abs() < 1e-10);
        assert!((h.beta - 0.5).abs() < 1e-10);
        assert!((h.alpha_achieved - 0.5).abs() < 1e-10);
    }

    #[test]
    fn helstrom_full_level() {
        let (rho, sigma) = qubit(0.9);
        let h = helstrom(&rho, &sigma, 1.0).unwrap();
        assert!(h.beta.abs() < 1e-12);
        assert!(h.lambda.sub(&HermitianMatrix::identity(2)).max_abs() < 1e-12);
    }

    #[test]
    fn helstrom_pure_t0_closed_form() {
        let (rho, sigma) = qubit(0.9);
        let h = helstrom(&rho, &sigma, 0.5).unwrap();
        assert!((h.t0 - pure_t0(0.9, 0.5)).abs() < 1e-8);
        let closed = beta_star_pure(0.5, 0.1).unwrap().value;
        assert!((h.beta - closed).abs() < 1e-8);
    }

    #[test]
    fn beta_star_limits() {
        let (rho, _) = qubit(0.7);
        assert!((beta_star_numeric(&rho, &rho, 0.3).unwrap() - 0.7).abs() < 1e-10);
        let a = PureState::<f64>::basis(2, 0).to_density();
        let b = PureState::<f64>::basis(2, 1).to_density();
        for alpha in [0.0, 0.2, 0.9] {
            assert!(beta_star_numeric(&a, &b, alpha).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn tight_observable_saturates() {
        let (rho, sigma) = qubit(0.9);
        let a = tight_observable(&rho, &sigma, -0.4).unwrap();
        let on_rho = expectation(&a, &rho).unwrap();
        assert!((on_rho + 0.4).abs() < 1e-10);
        let on_sigma = expectation(&a, &sigma).unwrap();
        let sdp = sdp_interval(on_rho, 0.1).unwrap();
        assert!(sdp.applicable.upper);
        assert!((on_sigma - sdp.upper).abs() < 1e-9);
        assert!(tight_observable(&DensityOperator::maximally_mixed(2), &sigma, 0.0).is_err());
    }

    #[test]
    fn gram_check_examples() {
        let mut rng = rng_from_seed(4);
        let z = Observable::diagonal(&[1.0, -1.0]);
        let psi: PureState<f64> = random_pure_state(2, &mut rng);
        let phi = random_pure_state(2, &mut rng);
        assert!(gram_inequality_check(&psi, &phi, &z));
        let same = gram_check(&psi, &psi, &z).unwrap();
        assert!((same.lower - same.upper).abs() < 1e-12);
        assert!((same.value - same.lower).abs() < 1e-12);
    }

    #[test]
    fn pure_eta_matches_spectrum() {
        let (rho, sigma) = qubit(0.6);
        let t = 0.5;
        let m = sigma.matrix().sub(&rho.matrix().scale(t));
        let e = crate::linalg::eigenvalues(&m);
        let (e0, e1) = pure_eta(t, 0.6);
        assert!((e[0] - e0).abs() < 1e-12 && (e[1] - e1).abs() < 1e-12);
    }
}
