use proptest::prelude::*;
use robint::linalg::fidelity;
use robint::model::{expectation, moments};
use robint::oracle::{
    beta_star_numeric, exact_ground, gram_inequality_check, helstrom, tight_observable,
};
use robint::random::{
    random_density, random_pauli_sum, random_pure_state, random_unitary, rng_from_seed,
};
use robint::robustness::{
    beta_star_pure, bound_hamiltonian, bound_observable, group_moments, interval, sdp_interval,
};
use robint::simulator::perturbed_state;
use robint::{DensityOperator, HermitianMatrix, Method, MomentStats, Observable, PureState};

fn qubit_pair(overlap_sq: f64) -> (DensityOperator, DensityOperator) {
    let rho = PureState::from_real(&[overlap_sq.sqrt(), (1.0 - overlap_sq).sqrt()])
        .unwrap()
        .to_density();
    (rho, PureState::basis(2, 0).to_density())
}

#[test]
fn closed_form_beta_matches_helstrom_on_qubit() {
    let (rho, sigma) = qubit_pair(0.9);
    let numeric = beta_star_numeric(&rho, &sigma, 0.5).unwrap();
    let closed = beta_star_pure(0.5, 0.1).unwrap();
    assert!(closed.condition_met);
    assert!((numeric - closed.value).abs() < 1e-8);
}

#[test]
fn sdp_fixture_is_tight_on_qubit() {
    let (rho, sigma) = qubit_pair(0.9);
    let z = Observable::diagonal(&[1.0, -1.0]);
    let r = sdp_interval(expectation(&z, &rho).unwrap(), 0.1).unwrap();
    assert!(r.lower <= 1.0 && 1.0 <= r.upper);

    let first = 0.2;
    let a = tight_observable(&rho, &sigma, first).unwrap();
    assert!((expectation(&a, &rho).unwrap() - first).abs() < 1e-10);
    let upper = sdp_interval(first, 0.1).unwrap().upper;
    assert!((expectation(&a, &sigma).unwrap() - upper).abs() < 1e-9);
}

#[test]
fn gram_inequality_on_qubit_with_z() {
    let mut rng = rng_from_seed(5);
    let psi = random_pure_state(2, &mut rng);
    let phi = random_pure_state(2, &mut rng);
    assert!(gram_inequality_check(
        &psi,
        &phi,
        &Observable::diagonal(&[1.0, -1.0])
    ));
}

#[test]
fn aggregate_bounds_contain_ground_energy() {
    let mut rng = rng_from_seed(276);
    let h = random_pauli_sum(3, 10, &mut rng);
    let dense = Observable::from_pauli(h.clone()).unwrap();
    let ground = exact_ground(&dense);
    let rho = perturbed_state(&ground.psi0, 0.05, 3).unwrap().to_density();
    let eps = 1.0 - fidelity(&rho, &ground.psi0.to_density()).unwrap();
    assert!((eps - 0.05).abs() < 1e-12);
    let stats = group_moments(&h, &rho).unwrap();
    for method in Method::ALL {
        let r = if method == Method::GramianEigenvalue {
            bound_observable(&dense, &moments(&dense, &rho).unwrap(), eps, method).unwrap()
        } else {
            bound_hamiltonian(&h, &stats, eps, method).unwrap()
        };
        assert!(
            r.lower <= ground.lambda0 + 1e-10,
            "{method}: {} > {}",
            r.lower,
            ground.lambda0
        );
        assert!(
            ground.lambda0 <= r.upper + 1e-10,
            "{method}: {} < {}",
            r.upper,
            ground.lambda0
        );
    }
}

/// Random `0 <= Lambda <= 1` rescaled to satisfy `tr(Lambda rho) <= alpha0`.
fn feasible_test(seed: u64, rho: &DensityOperator, alpha0: f64) -> HermitianMatrix {
    let mut rng = rng_from_seed(seed);
    let d = rho.dim();
    let values: Vec<f64> = (0..d)
        .map(|_| rand::Rng::random_range(&mut rng, 0.0..1.0))
        .collect();
    let lambda = HermitianMatrix::diagonal(&values).conjugate_by(&random_unitary(d, &mut rng));
    let used = lambda.trace_product(rho.matrix()).re;
    if used > alpha0 {
        lambda.scale(alpha0 / used)
    } else {
        lambda
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn helstrom_beats_random_feasible_tests(seed in any::<u64>(), dim in 2usize..=6, alpha0 in 0.05f64..0.95) {
        let mut rng = rng_from_seed(seed);
        let rho = random_density(dim, 1 + (seed % dim as u64) as usize, &mut rng);
        let sigma = random_density(dim, 1 + (seed / 7 % dim as u64) as usize, &mut rng);
        let best = helstrom(&rho, &sigma, alpha0).unwrap();
        prop_assert!(best.alpha_achieved <= alpha0 + 1e-9);
        let e = robint::linalg::eigenvalues(&best.lambda);
        prop_assert!(e[0] >= -1e-9 && e[e.len() - 1] <= 1.0 + 1e-9);
        for k in 0..20 {
            let lambda = feasible_test(seed ^ (k + 1), &rho, alpha0);
            let beta = 1.0 - lambda.trace_product(sigma.matrix()).re;
            prop_assert!(beta >= best.beta - 1e-9);
        }
    }

    #[test]
    fn intervals_widen_with_eps(first in -0.99f64..0.99, var_frac in 0.0f64..1.0, e1 in 0.0f64..0.99, e2 in 0.0f64..0.99) {
        let (lo_eps, hi_eps) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let stats = MomentStats::from_mean_variance(first, var_frac * (1.0 - first * first)).unwrap();
        let positive = stats.affine(1.0, 1.0);
        for method in Method::ALL {
            let s = if method == Method::GramianExpectation { &positive } else { &stats };
            let narrow = interval(method, s, lo_eps).unwrap();
            let wide = interval(method, s, hi_eps).unwrap();
            prop_assert!(wide.lower <= narrow.lower + 1e-12, "{} lower", method);
            prop_assert!(wide.upper >= narrow.upper - 1e-12, "{} upper", method);
        }
    }

    #[test]
    fn exact_stats_are_contained(seed in any::<u64>(), eps in 0.0f64..0.6) {
        let mut rng = rng_from_seed(seed);
        let psi = random_pure_state(4, &mut rng);
        let a = Observable::diagonal(&[1.0, 0.2, -0.4, -1.0]).matrix().conjugate_by(&random_unitary(4, &mut rng));
        let a = Observable::from_matrix(a);
        let rho = perturbed_state(&psi, eps, seed).unwrap().to_density();
        let truth = expectation(&a, &psi.to_density()).unwrap();
        let stats = moments(&a, &rho).unwrap();
        let r = sdp_interval(stats.first(), eps).unwrap();
        prop_assert!(r.lower <= truth + 1e-10 && truth <= r.upper + 1e-10);
    }
}
