//! Seeded property suites comparing every closed form against an independent
//! oracle. Shared by the CLI `verify` command and the acceptance target.

use rand::Rng;

use crate::fidelity::{
    eckart_lb, eckart_value, gap_lb_simple, gap_lb_tight, gap_simple_value, gap_tight_value,
    half_rule, SpectralInfo,
};
use crate::linalg::fidelity;
use crate::model::{expectation, moments, DensityOperator, MomentStats, Observable};
use crate::oracle::{
    beta_star_numeric, check_containment, exact_ground, gram_inequality_check, tight_observable,
};
use crate::random::{
    random_density, random_hermitian, random_observable_with_eigenvector, random_pure_state,
    rng_for_stream,
};
use crate::robustness::{
    beta_star_pure, gramian_eigenvalue_interval, gramian_expectation_lb, interval,
    sampling_adjusted_interval, sdp_interval, Method,
};
use crate::simulator::{
    evolve, evolve_statevector, perturbed_state, sample_moments_with, Circuit, NoiseModel,
    SamplingConfig,
};
use crate::Result;

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    /// Random instances or grid points visited.
    pub cases: usize,
    /// Individual comparisons made.
    pub checks: usize,
    pub violations: usize,
    /// Largest observed violation or deviation, in the suite's own units.
    pub worst: f64,
    pub passed: bool,
    pub detail: String,
}

impl SuiteReport {
    fn counted(
        name: &'static str,
        cases: usize,
        checks: usize,
        violations: usize,
        worst: f64,
    ) -> Self {
        Self {
            name,
            cases,
            checks,
            violations,
            worst,
            passed: violations == 0,
            detail: format!(
                "{violations} violations in {checks} checks over {cases} cases, worst {worst:.3e}"
            ),
        }
    }
}

fn dim_for(k: usize) -> usize {
    [2, 4, 8][k % 3]
}

fn excess(value: f64, limit: f64) -> f64 {
    (value - limit).max(0.0)
}

/// Largest violation of any applicable bound in a containment report.
fn worst_violation(cases: &[crate::oracle::ContainmentCase<f64>]) -> f64 {
    cases
        .iter()
        .map(|c| {
            let lo = if c.interval.applicable.lower {
                excess(c.interval.lower, c.truth)
            } else {
                0.0
            };
            let hi = if c.interval.applicable.upper {
                excess(c.truth, c.interval.upper)
            } else {
                0.0
            };
            lo.max(hi)
        })
        .fold(0.0, f64::max)
}

/// Random `(A, rho, sigma)` on 1 to 3 qubits with `sigma` pure.
///
/// Even instances take `rho` from `perturbed_state`, odd ones from a noisy run
/// of a random hardware-efficient circuit whose noiseless output is `sigma`.
/// Every second pair of instances uses an `A` with `sigma` as an eigenvector.
pub fn containment_instance(
    seed: u64,
    k: usize,
) -> Result<(Observable<f64>, DensityOperator<f64>, DensityOperator<f64>)> {
    let mut rng = rng_for_stream(seed, k as u64);
    let n = 1 + k % 3;
    let d = 1 << n;
    let (psi, rho) = if k.is_multiple_of(2) {
        let psi = random_pure_state(d, &mut rng);
        let eps = rng.random_range(0.0..0.6);
        let phi = perturbed_state(&psi, eps, rng.random())?;
        (psi, phi.to_density())
    } else {
        let template = Circuit::hardware_efficient(n, 2)?;
        let params: Vec<f64> = (0..template.params().len())
            .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
            .collect();
        let circuit = template.with_params(&params)?;
        let noise = NoiseModel::new(rng.random_range(0.0..0.05), rng.random_range(0.0..0.05))?;
        (evolve_statevector(&circuit)?, evolve(&circuit, &noise)?)
    };
    let a = if k % 4 < 2 {
        Observable::from_matrix(random_hermitian(d, &mut rng))
    } else {
        let values: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
        random_observable_with_eigenvector(&psi, &values, &mut rng)
    };
    Ok((a, rho, psi.to_density()))
}

/// Every applicable SDP, expectation and eigenvalue bound contains the truth.
pub fn containment_suite(instances: usize, seed: u64) -> Result<SuiteReport> {
    let (mut checks, mut violations, mut worst) = (0, 0, 0.0f64);
    for k in 0..instances {
        let (a, rho, sigma) = containment_instance(seed, k)?;
        let tol = 1e-9 * a.matrix().max_abs().max(1.0);
        let report = check_containment(&a, &rho, &sigma, tol)?;
        checks += report.cases.len();
        violations += report.violations();
        worst = worst.max(worst_violation(&report.cases));
    }
    Ok(SuiteReport::counted(
        "containment",
        instances,
        checks,
        violations,
        worst,
    ))
}

/// Helstrom `beta*` equals the pure-state closed form on pure pairs and is
/// never below it on mixed pairs.
pub fn lemma_suite(pure_pairs: usize, mixed_pairs: usize, seed: u64) -> Result<SuiteReport> {
    let alphas: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
    let (mut checks, mut violations, mut worst) = (0, 0, 0.0f64);
    for k in 0..pure_pairs {
        let mut rng = rng_for_stream(seed, k as u64);
        let d = dim_for(k);
        let rho = random_pure_state(d, &mut rng).to_density();
        let sigma = random_pure_state(d, &mut rng).to_density();
        let eps = 1.0 - fidelity(&rho, &sigma)?;
        for &alpha0 in &alphas {
            let numeric = beta_star_numeric(&rho, &sigma, alpha0)?;
            let closed = beta_star_pure(alpha0, eps)?.value;
            let dev = (numeric - closed).abs();
            checks += 1;
            worst = worst.max(dev);
            if dev >= 1e-8 {
                violations += 1;
            }
        }
    }
    let mut mixed_worst = 0.0f64;
    for k in 0..mixed_pairs {
        let mut rng = rng_for_stream(seed ^ 0x006d_6978_6564, k as u64);
        let d = dim_for(k);
        let rho = random_density(d, rng.random_range(1..=d), &mut rng);
        let sigma = random_density(d, rng.random_range(1..=d), &mut rng);
        let eps = 1.0 - fidelity(&rho, &sigma)?;
        let alpha0 = alphas[k % alphas.len()];
        let numeric = beta_star_numeric(&rho, &sigma, alpha0)?;
        let closed = beta_star_pure(alpha0, eps)?.value;
        checks += 1;
        let shortfall = excess(closed, numeric);
        mixed_worst = mixed_worst.max(shortfall);
        if numeric < closed - 1e-9 {
            violations += 1;
        }
    }
    let mut report =
        SuiteReport::counted("lemma", pure_pairs + mixed_pairs, checks, violations, worst);
    report.detail = format!(
        "{violations} violations in {checks} checks; max pure |numeric - closed| {worst:.3e}, max mixed shortfall {mixed_worst:.3e}"
    );
    Ok(report)
}

/// `<A*>_sigma` equals the SDP upper bound at `(<A*>_rho, eps)`.
pub fn tightness_suite(pairs: usize, seed: u64) -> Result<SuiteReport> {
    let (mut violations, mut worst) = (0, 0.0f64);
    for k in 0..pairs {
        let mut rng = rng_for_stream(seed, k as u64);
        let d = dim_for(k);
        let rho: DensityOperator<f64> = random_pure_state(d, &mut rng).to_density();
        let sigma = random_pure_state(d, &mut rng).to_density();
        let eps = 1.0 - fidelity(&rho, &sigma)?;
        // keep the upper side applicable: first <= 1 - 2 eps
        let first = -1.0 + (2.0 - 2.0 * eps) * rng.random_range(0.05..1.0);
        let a = tight_observable(&rho, &sigma, first)?;
        let bound = sdp_interval(expectation(&a, &rho)?, eps)?;
        let dev = (expectation(&a, &sigma)? - bound.upper).abs();
        worst = worst.max(dev);
        if !bound.applicable.upper || dev > 1e-9 {
            violations += 1;
        }
    }
    Ok(SuiteReport::counted(
        "tightness",
        pairs,
        pairs,
        violations,
        worst,
    ))
}

/// Interior points of `(0, 1)` on an `n x n` grid for `(<P>_rho, eps)`.
pub fn projection_grid(n: usize) -> Vec<(f64, f64)> {
    let axis: Vec<f64> = (1..=n).map(|i| i as f64 / (n + 1) as f64).collect();
    axis.iter()
        .flat_map(|&p| axis.iter().map(move |&e| (p, e)))
        .collect()
}

/// Expectation lower bound on a projection equals the un-scaled SDP lower
/// bound on `2P - 1` wherever both apply.
pub fn projection_identity_suite(n: usize) -> Result<SuiteReport> {
    let (mut checks, mut violations, mut worst) = (0, 0, 0.0f64);
    for (p, eps) in projection_grid(n) {
        let g = gramian_expectation_lb(&MomentStats::from_projection(p)?, eps)?;
        let s = sdp_interval(2.0 * p - 1.0, eps)?;
        if !(g.applicable.lower && s.applicable.lower) {
            continue;
        }
        let dev = (g.lower - 0.5 * (s.lower + 1.0)).abs();
        checks += 1;
        worst = worst.max(dev);
        if dev > 1e-12 {
            violations += 1;
        }
    }
    Ok(SuiteReport::counted(
        "projection-identity",
        n * n,
        checks,
        violations,
        worst,
    ))
}

/// Eigenvalue interval on a projection lies inside the un-scaled SDP
/// interval on every side where the SDP bound applies.
pub fn dominance_suite(n: usize) -> Result<SuiteReport> {
    let (mut checks, mut violations, mut worst) = (0, 0, 0.0f64);
    let (mut lower_gap_min, mut upper_gap_min) = (f64::INFINITY, f64::INFINITY);
    for (p, eps) in projection_grid(n) {
        let e = gramian_eigenvalue_interval(&MomentStats::from_projection(p)?, eps)?;
        let s = sdp_interval(2.0 * p - 1.0, eps)?;
        let (s_lo, s_hi) = (0.5 * (s.lower + 1.0), 0.5 * (s.upper + 1.0));
        if s.applicable.lower {
            let diff = e.lower - s_lo;
            lower_gap_min = lower_gap_min.min(diff);
            checks += 1;
            worst = worst.max(-diff);
            if diff < -1e-12 {
                violations += 1;
            }
        }
        if s.applicable.upper {
            let diff = s_hi - e.upper;
            upper_gap_min = upper_gap_min.min(diff);
            checks += 1;
            worst = worst.max(-diff);
            if diff < -1e-12 {
                violations += 1;
            }
        }
    }
    let mut report = SuiteReport::counted("dominance", n * n, checks, violations, worst.max(0.0));
    report.detail = format!(
        "{violations} violations in {checks} checks; min(eig_lo - sdp_lo) {lower_gap_min:.3e}, min(sdp_hi - eig_hi) {upper_gap_min:.3e}"
    );
    Ok(report)
}

/// Least-squares slope of `ln y` against `ln x`, skipping non-positive `y`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    Some(sxy / sxx)
}

/// Largest distance from `truth` over the applicable sides.
fn bound_error(lower: Option<f64>, upper: Option<f64>, truth: f64) -> f64 {
    let lo = lower.map_or(0.0, |l| (truth - l).abs());
    let hi = upper.map_or(0.0, |u| (u - truth).abs());
    lo.max(hi)
}

/// Bound errors on the one-qubit `Z` fixture for each family, as
/// `(family, [(eps, error)])`. The target is `psi`, perturbed along a random
/// orthogonal direction; the expectation bound uses `Z + 1`.
pub type ErrorCurves = Vec<(Method, Vec<(f64, f64)>)>;

pub fn faithfulness_errors(
    psi: &crate::model::PureState<f64>,
    eps_grid: &[f64],
) -> Result<ErrorCurves> {
    let z = Observable::diagonal(&[1.0, -1.0]);
    let sigma = psi.to_density();
    let truth = expectation(&z, &sigma)?;
    let mut out: Vec<(Method, Vec<(f64, f64)>)> =
        Method::ALL.iter().map(|&m| (m, Vec::new())).collect();
    for (k, &eps) in eps_grid.iter().enumerate() {
        let rho = perturbed_state(psi, eps, k as u64)?.to_density();
        let stats = moments(&z, &rho)?;
        for (method, errors) in out.iter_mut() {
            let err = match method {
                Method::Sdp => {
                    let i = sdp_interval(stats.first(), eps)?;
                    bound_error(
                        i.applicable.lower.then_some(i.lower),
                        i.applicable.upper.then_some(i.upper),
                        truth,
                    )
                }
                Method::GramianExpectation => {
                    let i = gramian_expectation_lb(&stats.affine(1.0, 1.0), eps)?;
                    bound_error(i.applicable.lower.then_some(i.lower), None, truth + 1.0)
                }
                Method::GramianEigenvalue => {
                    let i = gramian_eigenvalue_interval(&stats, eps)?;
                    if crate::oracle::eigenvalue_of(&z, &sigma).is_none() {
                        continue;
                    }
                    bound_error(Some(i.lower), Some(i.upper), truth)
                }
            };
            errors.push((eps, err));
        }
    }
    Ok(out)
}

/// Nine log-spaced points in `[1e-6, 1e-2]`.
pub fn faithfulness_grid() -> Vec<f64> {
    (0..9).map(|k| 10f64.powf(-6.0 + 0.5 * k as f64)).collect()
}

/// Log-log slope of each family's error on the `|0>` fixture must lie in `[0.4, 0.6]`.
pub fn faithfulness_suite() -> Result<SuiteReport> {
    let psi = crate::model::PureState::basis(2, 0);
    let families = faithfulness_errors(&psi, &faithfulness_grid())?;
    let mut parts = Vec::new();
    let mut violations = 0;
    let mut worst = 0.0f64;
    for (method, errors) in &families {
        let slope = log_log_slope(errors);
        let ok = slope.is_some_and(|s| (0.4..=0.6).contains(&s));
        if !ok {
            violations += 1;
        }
        let s = slope.unwrap_or(f64::NAN);
        worst = worst.max((s - 0.5).abs());
        parts.push(format!("{} {:.4}", method.name(), s));
    }
    // not an eigenstate of Z: the first-moment error is of order sqrt(eps) here
    let plus = crate::model::PureState::from_real(&[0.5f64.sqrt(), 0.5f64.sqrt()])?;
    let informative: Vec<String> = faithfulness_errors(&plus, &faithfulness_grid())?
        .iter()
        .filter(|(_, e)| !e.is_empty())
        .map(|(m, e)| format!("{} {:.4}", m.name(), log_log_slope(e).unwrap_or(f64::NAN)))
        .collect();
    Ok(SuiteReport {
        name: "faithfulness",
        cases: families.len(),
        checks: families.len(),
        violations,
        worst,
        passed: violations == 0,
        detail: format!(
            "slopes on |0>: {}; for reference on |+>: {}",
            parts.join(", "),
            informative.join(", ")
        ),
    })
}

/// Every applicable fidelity bound lies below the exact ground overlap, and
/// the tight gap budget never exceeds the simple one.
pub fn fidelity_suite(instances: usize, seed: u64) -> Result<SuiteReport> {
    let (mut cases, mut checks, mut violations, mut worst) = (0, 0, 0, 0.0f64);
    let mut k = 0u64;
    while cases < instances {
        let mut rng = rng_for_stream(seed, k);
        k += 1;
        let d = dim_for(cases);
        let h = Observable::from_matrix(random_hermitian(d, &mut rng));
        let ground = exact_ground(&h);
        let Some(lambda1) = ground.lambda1 else {
            continue;
        };
        if ground.degeneracy != 1 {
            continue;
        }
        let rho = if cases % 2 == 0 {
            let eps = rng.random_range(0.0..0.5);
            perturbed_state(&ground.psi0, eps, rng.random())?.to_density()
        } else {
            let q: f64 = rng.random_range(0.0..0.5);
            let noise = random_density(d, rng.random_range(1..=d), &mut rng);
            let target = ground.psi0.to_density();
            let m = target.matrix().scale(1.0 - q).add(&noise.matrix().scale(q));
            DensityOperator::new(m)?
        };
        cases += 1;
        let exact = rho.overlap_with(&ground.psi0);
        let gap = (lambda1 - ground.lambda0) * rng.random_range(0.5..1.0);
        let info = SpectralInfo::from_state(&h, &rho)?
            .with_levels(ground.lambda0, lambda1)
            .with_gap(gap);
        let budgets = [
            eckart_lb(&info),
            half_rule(&info),
            gap_lb_simple(&info),
            gap_lb_tight(&info),
        ];
        for b in budgets.iter().flatten() {
            checks += 1;
            let over = excess(b.fidelity_lower_bound(), exact);
            worst = worst.max(over);
            if over > 1e-12 {
                violations += 1;
            }
        }
        if let (Ok(simple), Ok(tight)) = (&budgets[2], &budgets[3]) {
            checks += 1;
            let over = excess(tight.epsilon(), simple.epsilon());
            worst = worst.max(over);
            if over > 1e-12 {
                violations += 1;
            }
        }
    }
    let counter = degenerate_counterexample()?;
    let counter_ok = counter.guard_fired && counter.max_fraction_error <= 1e-12;
    if !counter_ok {
        violations += 1;
    }
    let mut report = SuiteReport::counted("fidelity", cases, checks + 1, violations, worst);
    report.detail = format!(
        "{}; counterexample: guard {}, fractions off by {:.1e}",
        report.detail,
        if counter.guard_fired {
            "fired"
        } else {
            "silent"
        },
        counter.max_fraction_error
    );
    Ok(report)
}

/// The mixed state `I/3` against `H = diag(0, 0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    /// Overlap of `rho` with each ground eigenvector.
    pub true_overlap: f64,
    pub eckart: f64,
    pub gap_simple: f64,
    pub gap_tight: f64,
    pub guard_fired: bool,
    pub max_fraction_error: f64,
}

pub fn degenerate_counterexample() -> Result<Counterexample> {
    let h = Observable::diagonal(&[0.0, 0.0, 1.0]);
    let rho = DensityOperator::maximally_mixed(3);
    let info = SpectralInfo::from_state(&h, &rho)?
        .with_levels(0.0, 1.0)
        .with_degenerate_ground(true)
        .with_gap(1.0);
    let true_overlap = (0..2)
        .map(|k| rho.overlap_with(&crate::model::PureState::basis(3, k)))
        .fold(f64::NEG_INFINITY, f64::max);
    let eckart = eckart_value(info.energy_mean, 0.0, 1.0);
    let gap_simple = gap_simple_value(info.energy_std(), 1.0);
    let gap_tight = gap_tight_value(info.energy_std(), 1.0);
    let degenerate = |r: Result<crate::robustness::FidelityBudget<f64>>| {
        matches!(r, Err(crate::Error::DegenerateMixed))
    };
    let guard_fired = degenerate(eckart_lb(&info))
        && degenerate(gap_lb_simple(&info))
        && degenerate(gap_lb_tight(&info));
    let expected = [
        (true_overlap, 1.0 / 3.0),
        (eckart, 2.0 / 3.0),
        (gap_simple, 1.0 - 2f64.sqrt() / 3.0),
        (gap_tight, 2.0 / 3.0),
    ];
    let max_fraction_error = expected
        .iter()
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(Counterexample {
        true_overlap,
        eckart,
        gap_simple,
        gap_tight,
        guard_fired,
        max_fraction_error,
    })
}

/// Gram inequality on random pure triples, then full containment on mixed
/// `rho` and `sigma`.
pub fn gram_suite(pure_triples: usize, mixed: usize, seed: u64) -> Result<SuiteReport> {
    let (mut checks, mut violations, mut worst) = (0, 0, 0.0f64);
    for k in 0..pure_triples {
        let mut rng = rng_for_stream(seed, k as u64);
        let d = dim_for(k);
        let psi: crate::model::PureState<f64> = random_pure_state(d, &mut rng);
        let phi = random_pure_state(d, &mut rng);
        let a = Observable::from_matrix(random_hermitian(d, &mut rng));
        checks += 1;
        if !gram_inequality_check(&psi, &phi, &a) {
            violations += 1;
        }
    }
    for k in 0..mixed {
        let mut rng = rng_for_stream(seed ^ 0x6772_616d, k as u64);
        let d = dim_for(k);
        let rho = random_density(d, rng.random_range(1..=d), &mut rng);
        let sigma = random_density(d, rng.random_range(2..=d), &mut rng);
        let a: Observable<f64> = Observable::from_matrix(random_hermitian(d, &mut rng));
        let tol = 1e-10 * a.matrix().max_abs().max(1.0);
        let report = check_containment(&a, &rho, &sigma, tol)?;
        checks += report.cases.len();
        violations += report.violations();
        worst = worst.max(worst_violation(&report.cases));
    }
    Ok(SuiteReport::counted(
        "gram",
        pure_triples + mixed,
        checks,
        violations,
        worst,
    ))
}

/// Coverage of the exact-statistics interval by sampling-adjusted intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct Coverage {
    pub method: Method,
    pub covered: usize,
    pub trials: usize,
}

impl Coverage {
    pub fn fraction(&self) -> f64 {
        self.covered as f64 / self.trials as f64
    }
}

/// `trials` meta-trials of 20 repetitions x `shots` on a noisy one-qubit
/// state, measuring `Z`, at fixture infidelity `eps = 0.05`.
pub fn calibration_coverage(
    trials: usize,
    shots: u64,
    confidence: f64,
    seed: u64,
) -> Result<Vec<Coverage>> {
    let circuit = Circuit::new(
        1,
        vec![crate::simulator::Gate::Ry {
            qubit: 0,
            theta: 1.1,
        }],
    )?;
    let rho = evolve(&circuit, &NoiseModel::new(0.01, 0.0)?)?;
    let z = Observable::diagonal(&[1.0, -1.0]);
    let eps = 0.05;
    let exact = moments(&z, &rho)?;
    let shifted = |s: &MomentStats<f64>| s.affine(1.0, 1.0);

    let mut coverage: Vec<Coverage> = Method::ALL
        .iter()
        .map(|&method| Coverage {
            method,
            covered: 0,
            trials,
        })
        .collect();
    for t in 0..trials {
        let config =
            SamplingConfig::new(shots, 20, seed.wrapping_add(t as u64)).with_confidence(confidence);
        let sampled = sample_moments_with(&z, &rho, &config, 0)?;
        for c in coverage.iter_mut() {
            let (s, e) = match c.method {
                Method::GramianExpectation => (shifted(&sampled), shifted(&exact)),
                _ => (sampled, exact),
            };
            let reference = interval(c.method, &e, eps)?;
            let adjusted = match sampling_adjusted_interval(&s, eps, c.method) {
                Ok(i) => i,
                Err(_) => continue,
            };
            let lower_ok = adjusted.lower <= reference.lower + 1e-12;
            let upper_ok =
                !reference.upper.is_finite() || adjusted.upper >= reference.upper - 1e-12;
            if lower_ok && upper_ok {
                c.covered += 1;
            }
        }
    }
    Ok(coverage)
}

/// Joint coverage of both interval ends must reach 98% for every family.
///
/// `confidence` is the one-sided level of each half-width. Both ends of the
/// SDP and eigenvalue intervals must hold at once, so a per-side level of
/// `0.995` is the Bonferroni choice for a simultaneous 99% interval.
pub fn calibration_suite(trials: usize, confidence: f64, seed: u64) -> Result<SuiteReport> {
    let coverage = calibration_coverage(trials, 1000, confidence, seed)?;
    let violations = coverage.iter().filter(|c| c.fraction() < 0.98).count();
    let worst = coverage.iter().map(|c| c.fraction()).fold(1.0, f64::min);
    let parts: Vec<String> = coverage
        .iter()
        .map(|c| format!("{} {}/{}", c.method.name(), c.covered, c.trials))
        .collect();
    Ok(SuiteReport {
        name: "calibration",
        cases: trials,
        checks: coverage.len(),
        violations,
        worst,
        passed: violations == 0,
        detail: format!(
            "per-side confidence {confidence}; covered {}",
            parts.join(", ")
        ),
    })
}

/// Problem sizes for [`run_all`].
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SuiteSizes {
    pub containment: usize,
    pub lemma_pure: usize,
    pub lemma_mixed: usize,
    pub tightness: usize,
    pub grid: usize,
    pub fidelity: usize,
    pub gram_pure: usize,
    pub gram_mixed: usize,
    pub calibration: usize,
}

impl SuiteSizes {
    /// The sizes fixed by the acceptance criteria.
    pub const FULL: Self = Self {
        containment: 1000,
        lemma_pure: 500,
        lemma_mixed: 200,
        tightness: 100,
        grid: 50,
        fidelity: 1000,
        gram_pure: 1000,
        gram_mixed: 300,
        calibration: 1000,
    };

    pub const QUICK: Self = Self {
        containment: 100,
        lemma_pure: 50,
        lemma_mixed: 20,
        tightness: 20,
        grid: 20,
        fidelity: 100,
        gram_pure: 100,
        gram_mixed: 30,
        calibration: 200,
    };
}

/// Runs every suite in order.
pub fn run_all(sizes: SuiteSizes, seed: u64) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        containment_suite(sizes.containment, seed)?,
        lemma_suite(sizes.lemma_pure, sizes.lemma_mixed, seed)?,
        tightness_suite(sizes.tightness, seed)?,
        projection_identity_suite(sizes.grid)?,
        dominance_suite(sizes.grid)?,
        faithfulness_suite()?,
        fidelity_suite(sizes.fidelity, seed)?,
        gram_suite(sizes.gram_pure, sizes.gram_mixed, seed)?,
        calibration_suite(sizes.calibration, 0.995, seed)?,
    ])
}
