use proptest::prelude::*;
use quipi::evolution::{circuit_matrix, compile_trotter, coupled_exponential, Circuit, GateCache};
use quipi::hamiltonians::{diagonalize, LocalHamiltonian};
use quipi::linalg::{hermiticity_residual, identity, max_abs, CMat};
use quipi::noise::{zne_extrapolate, LossChannel};

fn pauli_word(n: usize) -> impl Strategy<Value = String> {
    proptest::collection::vec(prop_oneof![Just('I'), Just('X'), Just('Y'), Just('Z')], n).prop_map(|v| v.into_iter().collect())
}

fn hamiltonian(n: usize) -> impl Strategy<Value = Vec<(f64, String)>> {
    proptest::collection::vec((-1.5f64..1.5, pauli_word(n)), 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pauli_sums_are_hermitian(terms in hamiltonian(3)) {
        let h = LocalHamiltonian::from_terms(&terms, 0.3).unwrap();
        prop_assert!(hermiticity_residual(&h.matrix().unwrap()) < 1e-12);
        let spec = diagonalize(&h).unwrap();
        prop_assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn single_term_circuit_is_exact(coeff in -1.5f64..1.5, word in pauli_word(2)) {
        prop_assume!(word != "II");
        let h = LocalHamiltonian::from_terms(&[(coeff, word.as_str())], 0.0).unwrap();
        let cache = GateCache::new();
        let circuit = compile_trotter(&h, 1).unwrap();
        let compiled = circuit_matrix(&circuit, 10, &cache).unwrap();
        let dense = coupled_exponential(&h, 10, 1.0).unwrap();
        prop_assert!(max_abs(&(compiled - dense)) < 1e-10);
        prop_assert_eq!(Circuit::parse(&circuit.to_text()).unwrap(), circuit);
    }

    #[test]
    fn loss_is_complete(p in 0.0f64..0.01, big in 0.0f64..0.9, cut in 1usize..30) {
        let completeness = |loss: &LossChannel| {
            let mut sum = CMat::zeros(cut + 1, cut + 1);
            for k in loss.kraus_matrices(cut) {
                sum += k.adjoint() * &k;
            }
            max_abs(&(sum - identity(cut + 1)))
        };
        // the default rank drops terms of order p^8
        prop_assert!(completeness(&LossChannel::new(p).unwrap()) < 1e-8);
        let full = LossChannel { kraus_rank: cut + 1, ..LossChannel::new(big).unwrap() };
        prop_assert!(completeness(&full) < 1e-10);
    }

    #[test]
    fn richardson_recovers_quadratics(a in -2.0f64..2.0, b in -1.0f64..1.0, c in -0.5f64..0.5) {
        let f = |x: f64| a + b * x + c * x * x;
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 3.0].iter().map(|&x| (x, f(x))).collect();
        prop_assert!((zne_extrapolate(&pts).unwrap() - a).abs() < 1e-12);
    }
}
