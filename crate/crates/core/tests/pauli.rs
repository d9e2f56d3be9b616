use nalgebra::{Complex as NComplex, DMatrix};
use proptest::prelude::*;
use robint::linalg::eigenvalues;
use robint::model::{
    expectation, group_qubitwise_commuting, group_spectrum, normalize_to_unit_spectrum, Pauli,
};
use robint::random::{random_density, random_pauli_sum, rng_from_seed};
use robint::{Observable, PauliSum};

fn letter(p: Option<&Pauli>) -> DMatrix<NComplex<f64>> {
    let c = |re: f64, im: f64| NComplex::new(re, im);
    let z = c(0.0, 0.0);
    let entries = match p {
        None => [c(1.0, 0.0), z, z, c(1.0, 0.0)],
        Some(Pauli::X) => [z, c(1.0, 0.0), c(1.0, 0.0), z],
        Some(Pauli::Y) => [z, c(0.0, -1.0), c(0.0, 1.0), z],
        Some(Pauli::Z) => [c(1.0, 0.0), z, z, c(-1.0, 0.0)],
    };
    DMatrix::from_row_slice(2, 2, &entries)
}

/// Sum of explicit Kronecker products, qubit 0 leftmost.
fn kronecker_matrix(h: &PauliSum) -> DMatrix<NComplex<f64>> {
    let d = h.dim();
    let mut total = DMatrix::zeros(d, d);
    for term in h.terms() {
        let mut m = DMatrix::from_element(1, 1, NComplex::new(1.0, 0.0));
        for q in 0..h.n_qubits() {
            m = m.kronecker(&letter(term.letters.get(&q)));
        }
        total += m * NComplex::new(term.coefficient, 0.0);
    }
    total
}

fn pauli_sum(seed: u64, n: usize, terms: usize) -> PauliSum {
    random_pauli_sum(n, terms, &mut rng_from_seed(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_matches_kronecker_products(seed in any::<u64>(), n in 1usize..=4, terms in 1usize..8) {
        let h = pauli_sum(seed, n, terms);
        let ours = h.to_matrix();
        let theirs = kronecker_matrix(&h);
        for i in 0..h.dim() {
            for j in 0..h.dim() {
                let (a, b) = (ours.get(i, j), theirs[(i, j)]);
                prop_assert!((a.re - b.re).abs() < 1e-12 && (a.im - b.im).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn grouping_is_a_commuting_partition(seed in any::<u64>(), n in 1usize..=4, terms in 1usize..12) {
        let h = pauli_sum(seed, n, terms);
        let groups = group_qubitwise_commuting(&h);
        let count: usize = groups.iter().map(|g| g.len()).sum();
        prop_assert_eq!(count, h.len());
        let mut rebuilt = PauliSum::new(n, Vec::new()).unwrap();
        for g in &groups {
            prop_assert!(g.is_qubitwise_commuting());
            rebuilt = PauliSum::new(n, rebuilt.terms().iter().chain(g.terms()).cloned()).unwrap();
        }
        prop_assert!(rebuilt.to_matrix().sub(&h.to_matrix()).max_abs() < 1e-12);
    }

    #[test]
    fn group_spectrum_matches_diagonalization(seed in any::<u64>(), n in 1usize..=4, terms in 1usize..10) {
        for g in group_qubitwise_commuting(&pauli_sum(seed, n, terms)) {
            let (lo, hi) = group_spectrum(&g);
            let e = eigenvalues(&g.to_matrix());
            prop_assert!((lo - e[0]).abs() < 1e-10);
            prop_assert!((hi - e[e.len() - 1]).abs() < 1e-10);
        }
    }

    #[test]
    fn normalization_round_trips(seed in any::<u64>(), n in 1usize..=3, terms in 2usize..8) {
        let h = pauli_sum(seed, n, terms);
        let a = Observable::from_pauli(h.clone()).unwrap();
        let e = a.spectrum();
        prop_assume!(e[e.len() - 1] - e[0] > 1e-6);
        let (unit, map) = normalize_to_unit_spectrum(&a, e[0], e[e.len() - 1]).unwrap();
        let u = unit.spectrum();
        prop_assert!(u[0] >= -1.0 - 1e-10 && u[u.len() - 1] <= 1.0 + 1e-10);
        let rho = random_density(a.dim(), 2, &mut rng_from_seed(seed ^ 1));
        let back = map.apply(expectation(&unit, &rho).unwrap());
        prop_assert!((back - expectation(&a, &rho).unwrap()).abs() < 1e-10);
        prop_assert!((map.invert(map.apply(0.3)) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn text_format_round_trips(seed in any::<u64>(), n in 1usize..=4, terms in 1usize..8) {
        let h = pauli_sum(seed, n, terms);
        let parsed = PauliSum::parse_on(&h.to_string(), n).unwrap();
        prop_assert!(parsed.to_matrix().sub(&h.to_matrix()).max_abs() < 1e-12);
    }
}
