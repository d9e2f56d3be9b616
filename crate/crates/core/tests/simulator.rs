use proptest::prelude::*;
use robint::linalg::{eigenvalues, fidelity};
use robint::model::{expectation, moments};
use robint::oracle::exact_ground;
use robint::random::{random_pauli_sum, rng_from_seed};
use robint::robustness::{bound_observable, sdp_interval};
use robint::simulator::{
    evolve, minimize_energy, perturbed_state, sample_moments_with, MinimizeOptions,
};
use robint::{
    Circuit, DensityOperator, Gate, Method, NoiseModel, Observable, PauliSum, PureState,
    SamplingConfig,
};

fn ry_template() -> Circuit {
    Circuit::new(
        1,
        vec![Gate::Ry {
            qubit: 0,
            theta: 0.3,
        }],
    )
    .unwrap()
}

#[test]
fn single_rotation_reaches_ground() {
    let h = PauliSum::parse("Z0").unwrap();
    let r = minimize_energy(
        &h,
        &ry_template(),
        &NoiseModel::noiseless(),
        1,
        &MinimizeOptions::default(),
    )
    .unwrap();
    assert!((r.energy + 1.0).abs() < 1e-6);
    assert!((r.params[0].abs() - std::f64::consts::PI).abs() < 1e-3);
}

#[test]
fn bit_flip_noise_raises_the_optimum() {
    let h = PauliSum::parse("Z0").unwrap();
    let noise = NoiseModel::new(0.01, 0.0).unwrap();
    let r = minimize_energy(&h, &ry_template(), &noise, 1, &MinimizeOptions::default()).unwrap();
    assert!((r.energy + 0.98).abs() < 2e-3);
}

#[test]
fn noisy_optimum_is_still_bracketed() {
    let h = PauliSum::parse("Z0").unwrap();
    let a = Observable::from_pauli(h.clone()).unwrap();
    let sigma = PureState::basis(2, 1).to_density();
    for noise in [NoiseModel::noiseless(), NoiseModel::new(0.01, 0.0).unwrap()] {
        let r =
            minimize_energy(&h, &ry_template(), &noise, 1, &MinimizeOptions::default()).unwrap();
        let eps = 1.0 - fidelity(&r.state, &sigma).unwrap();
        let stats = moments(&a, &r.state).unwrap();
        for method in Method::ALL {
            let i = bound_observable(&a, &stats, eps, method).unwrap();
            assert!(
                i.lower <= -1.0 + 1e-9 && -1.0 <= i.upper + 1e-9,
                "{method}: {i:?}"
            );
        }
    }
}

#[test]
fn one_sided_mean_coverage() {
    let circuit = Circuit::new(
        1,
        vec![Gate::Ry {
            qubit: 0,
            theta: 0.8,
        }],
    )
    .unwrap();
    let rho = evolve(&circuit, &NoiseModel::new(0.02, 0.0).unwrap()).unwrap();
    let z = Observable::diagonal(&[1.0, -1.0]);
    let truth = expectation(&z, &rho).unwrap();
    let trials = 1000;
    let covered = (0..trials)
        .filter(|&t| {
            let s = sample_moments_with(&z, &rho, &SamplingConfig::new(500, 20, t), 0).unwrap();
            s.first() - s.half_widths().unwrap().first <= truth
        })
        .count();
    assert!(covered as f64 >= 0.98 * trials as f64, "{covered}/{trials}");
}

#[test]
fn sampled_means_are_unbiased() {
    let circuit = Circuit::hardware_efficient(2, 1).unwrap();
    let params: Vec<f64> = (0..circuit.params().len())
        .map(|k| 0.4 + 0.3 * k as f64)
        .collect();
    let rho = evolve(
        &circuit.with_params(&params).unwrap(),
        &NoiseModel::default_hardware(),
    )
    .unwrap();
    let a =
        Observable::from_pauli(PauliSum::parse("0.5 Z0 Z1 + 0.3 Z0 - 0.2 Z1").unwrap()).unwrap();
    let exact = moments(&a, &rho).unwrap();
    let s = sample_moments_with(&a, &rho, &SamplingConfig::new(10_000, 200, 9), 0).unwrap();
    // standard error of the mean over 2e6 shots is below 1e-3
    assert!((s.first() - exact.first()).abs() < 4e-3);
    assert!((s.second() - exact.second()).abs() < 4e-3);
}

#[test]
fn perturbed_qubit_has_requested_fidelity() {
    let psi = PureState::basis(2, 0);
    let phi = perturbed_state(&psi, 0.1, 4).unwrap();
    assert!((phi.overlap(&psi) - 0.9).abs() < 1e-15);
    let stats = moments(&Observable::diagonal(&[1.0, -1.0]), &phi.to_density()).unwrap();
    assert!((stats.first() - 0.8).abs() < 1e-12);
    let r = sdp_interval(stats.first(), 0.1).unwrap();
    assert!(r.lower <= 1.0 && 1.0 <= r.upper);
}

#[test]
fn ground_of_random_hamiltonian_is_certified_by_vqe_state() {
    let h = random_pauli_sum(2, 6, &mut rng_from_seed(31));
    let a = Observable::from_pauli(h.clone()).unwrap();
    let ground = exact_ground(&a);
    let template = Circuit::hardware_efficient(2, 2).unwrap();
    let r = minimize_energy(
        &h,
        &template,
        &NoiseModel::default_hardware(),
        2,
        &MinimizeOptions::default(),
    )
    .unwrap();
    let eps = 1.0 - robint::oracle::ground_space_overlap(&a, &r.state);
    assert_eq!(ground.degeneracy, 1);
    let i = bound_observable(
        &a,
        &moments(&a, &r.state).unwrap(),
        eps,
        Method::GramianEigenvalue,
    )
    .unwrap();
    assert!(i.lower <= ground.lambda0 + 1e-9 && ground.lambda0 <= i.upper + 1e-9);
}

fn random_circuit(seed: u64, n: usize) -> Circuit {
    let template = Circuit::hardware_efficient(n, 2).unwrap();
    let mut rng = rng_from_seed(seed);
    let params: Vec<f64> = (0..template.params().len())
        .map(|_| rand::Rng::random_range(&mut rng, -3.2..3.2))
        .collect();
    template.with_params(&params).unwrap()
}

fn is_state(rho: &DensityOperator) -> bool {
    let e = eigenvalues(rho.matrix());
    (rho.matrix().trace() - 1.0).abs() < 1e-12 && e[0] >= -1e-12
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn noisy_evolution_yields_states(seed in any::<u64>(), n in 1usize..=3, p1 in 0.0f64..=1.0, p2 in 0.0f64..=1.0) {
        let rho = evolve(&random_circuit(seed, n), &NoiseModel::new(p1, p2).unwrap()).unwrap();
        prop_assert!(is_state(&rho));
    }
}
