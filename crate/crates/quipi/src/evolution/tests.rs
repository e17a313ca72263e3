use super::*;
use crate::hamiltonians::{build_h2, H2CoefficientTable, LocalHamiltonian};
use crate::hilbert::{FockQumode, HybridState, Qumode};
use crate::linalg::{c, identity, kron, max_abs, norm_sqr, CMat, CVec, C64};
use crate::hilbert::momentum_operator;

/// Independent oracle: nalgebra's Padé exponential of `-i t H ⊗ p`.
fn pade_coupled(h: &LocalHamiltonian, cut: usize, t: f64) -> CMat {
    (kron(&h.matrix().unwrap(), &momentum_operator(cut)) * c(0.0, -t)).exp()
}

#[test]
fn empty_and_involutive_circuits() {
    let cache = GateCache::new();
    let id = circuit_matrix(&Circuit::new(2, 1, vec![]).unwrap(), 3, &cache).unwrap();
    assert_eq!(max_abs(&(id - identity(16))), 0.0);
    let hh = circuit_matrix(&Circuit::new(2, 1, vec![Gate::H(0), Gate::H(0)]).unwrap(), 3, &cache).unwrap();
    assert!(max_abs(&(hh - identity(16))) < 1e-15);
}

#[test]
fn single_letter_terms_match_exponential() {
    let cache = GateCache::new();
    let cut = 6;
    for pos in 0..2 {
        for letter in ['X', 'Y', 'Z'] {
            let mut s: Vec<char> = "II".chars().collect();
            s[pos] = letter;
            let s: String = s.into_iter().collect();
            let h = LocalHamiltonian::from_terms(&[(0.37, s.as_str())], 0.0).unwrap();
            let got = circuit_matrix(&compile_trotter(&h, 1).unwrap(), cut, &cache).unwrap();
            let want = pade_coupled(&h, cut, 1.0);
            assert!(max_abs(&(got - want)) < 1e-10, "{s}");
        }
    }
}

#[test]
fn multi_qubit_terms_match_exponential() {
    let cache = GateCache::new();
    for s in ["XX", "YY", "ZZ", "XY", "ZY", "XYZ", "YIZ", "ZZZ", "IYX"] {
        let h = LocalHamiltonian::from_terms(&[(-0.61, s)], 0.0).unwrap();
        let got = circuit_matrix(&compile_trotter(&h, 1).unwrap(), 5, &cache).unwrap();
        assert!(max_abs(&(got - pade_coupled(&h, 5, 1.0))) < 1e-10, "{s}");
    }
    let shift = LocalHamiltonian::new(1, vec![], 0.8).unwrap();
    let got = circuit_matrix(&compile_trotter(&shift, 1).unwrap(), 5, &cache).unwrap();
    assert!(max_abs(&(got - pade_coupled(&shift, 5, 1.0))) < 1e-10);
}

#[test]
fn compiled_circuit_is_unitary() {
    let cache = GateCache::new();
    let h = build_h2(0.75, &H2CoefficientTable::bundled()).unwrap().with_shift(1.37);
    let u = circuit_matrix(&compile_trotter(&h, 3).unwrap(), 10, &cache).unwrap();
    assert!(max_abs(&(&u * u.adjoint() - identity(44))) < 1e-9);
}

#[test]
fn trotter_error_halves_with_step_doubling() {
    let cache = GateCache::new();
    let h = build_h2(0.75, &H2CoefficientTable::bundled()).unwrap();
    let cut = 6;
    let exact = coupled_exponential(&h, cut, 1.0).unwrap();
    let err = |n| max_abs(&(circuit_matrix(&compile_trotter(&h, n).unwrap(), cut, &cache).unwrap() - &exact));
    for n in [8, 16] {
        let ratio = err(n) / err(2 * n);
        assert!((1.7..=2.3).contains(&ratio), "n={n}: {ratio}");
    }
}

#[test]
fn spectral_exponential_matches_pade() {
    let h = build_h2(0.75, &H2CoefficientTable::bundled()).unwrap().with_shift(0.4);
    assert!(max_abs(&(coupled_exponential(&h, 9, 0.7).unwrap() - pade_coupled(&h, 9, 0.7))) < 1e-10);
}

fn sample_state(cut: usize) -> HybridState {
    let mode: Vec<C64> = (0..=cut).map(|n| c(1.0 / (1.0 + n as f64), 0.3 * n as f64 - 0.2)).collect();
    let r = norm_sqr(&mode).sqrt();
    let mode = FockQumode::new(mode.iter().map(|z| z / r).collect()).unwrap();
    let q = [c(0.5, 0.1), c(-0.3, 0.4), c(0.2, -0.6), c(0.1, 0.2)];
    let qr = norm_sqr(&q).sqrt();
    let q: Vec<C64> = q.iter().map(|z| z / qr).collect();
    HybridState::product(&q, &Qumode::Fock(mode)).unwrap()
}

#[test]
fn fock_exact_evolution_matches_dense() {
    let cache = GateCache::new();
    let h = build_h2(0.75, &H2CoefficientTable::bundled()).unwrap().with_shift(1.0);
    let st = sample_state(12);
    let got = evolve_exact(&st, &h, &cache).unwrap();
    let want = pade_coupled(&h, 12, 1.0) * CVec::from_vec(st.amplitudes.clone());
    for (a, b) in got.amplitudes.iter().zip(want.iter()) {
        assert!((a - b).norm() < 1e-10);
    }
    assert!((got.norm_sqr() - 1.0).abs() < 1e-10);
}

#[test]
fn trivial_hamiltonians() {
    let cache = GateCache::new();
    let st = sample_state(8);
    let zero = LocalHamiltonian::from_terms(&[(0.0, "II")], 0.0).unwrap();
    let out = evolve_exact(&st, &zero, &cache).unwrap();
    for (a, b) in out.amplitudes.iter().zip(&st.amplitudes) {
        assert!((a - b).norm() < 1e-12);
    }
    // identity: qubit part factorizes, every qubit block gets the same qumode operator
    let ident = LocalHamiltonian::new(2, vec![], 1.0).unwrap();
    let out = evolve_exact(&st, &ident, &cache).unwrap();
    let m = 9;
    let q0 = st.amplitudes[0] / st.amplitudes[0].norm();
    for x in 0..4 {
        let ratio = st.amplitudes[x * m] / q0;
        for k in 0..m {
            let expect = out.amplitudes[k] * ratio / (st.amplitudes[0] / q0);
            assert!((out.amplitudes[x * m + k] - expect).norm() < 1e-12);
        }
    }
}

#[test]
fn norm_preserved_over_many_gates() {
    let cache = GateCache::new();
    let h = build_h2(0.75, &H2CoefficientTable::bundled()).unwrap().with_shift(1.37);
    let circ = compile_trotter(&h, 400).unwrap();
    assert!(circ.gates.len() >= 9600);
    let out = run_circuit(&sample_state(20), &circ, &cache).unwrap();
    assert!((out.norm_sqr() - 1.0).abs() < 1e-9);
}
