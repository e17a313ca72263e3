use super::gate::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::hamiltonians::{LocalHamiltonian, Pauli};

/// First-order Trotter circuit for `exp(-i H ⊗ p)` with `n` steps.
///
/// Per step and term: rotate every non-identity letter to X (`H` for Z; `SDG` then
/// later `S` for Y), CNOTs controlled on the highest active qubit onto each other
/// active qubit, `HXP(last, c/n)`, then the inverse ladder and basis changes.
/// Identity strings and the shift become `QP` gates.
pub fn compile_trotter(h: &LocalHamiltonian, n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidArgument("Trotter step count must be at least 1".into()));
    }
    if h.term_count() == 0 && h.shift() == 0.0 {
        return Err(Error::InvalidArgument("Hamiltonian has no terms".into()));
    }
    let nf = n as f64;
    let mut step = Vec::new();
    if h.shift() != 0.0 {
        step.push(Gate::Qp { theta: h.shift() / nf });
    }
    for t in h.terms() {
        let theta = t.coeff / nf;
        let support = t.string.support();
        let Some(&last) = support.last() else {
            step.push(Gate::Qp { theta });
            continue;
        };
        let letters = t.string.letters();
        let mut pre = Vec::new();
        let mut post = Vec::new();
        for &q in &support {
            match letters[q] {
                Pauli::Z => {
                    pre.push(Gate::H(q));
                    post.push(Gate::H(q));
                }
                Pauli::Y => {
                    pre.push(Gate::Sdg(q));
                    post.push(Gate::S(q));
                }
                _ => {}
            }
        }
        let ladder: Vec<Gate> = support[..support.len() - 1].iter().map(|&q| Gate::Cnot { control: last, target: q }).collect();
        step.extend(&pre);
        step.extend(&ladder);
        step.push(Gate::Hxp { qubit: last, theta });
        step.extend(ladder.iter().rev());
        step.extend(post.iter().rev());
    }
    let gates = (0..n).flat_map(|_| step.iter().copied()).collect();
    Circuit::new(h.qubit_count(), n, gates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::{build_h2, H2CoefficientTable};

    #[test]
    fn single_terms() {
        let z = LocalHamiltonian::from_terms(&[(0.3, "ZI")], 0.0).unwrap();
        assert_eq!(compile_trotter(&z, 1).unwrap().gates, vec![Gate::H(0), Gate::Hxp { qubit: 0, theta: 0.3 }, Gate::H(0)]);
        let xx = LocalHamiltonian::from_terms(&[(0.5, "XX")], 0.0).unwrap();
        assert_eq!(
            compile_trotter(&xx, 1).unwrap().gates,
            vec![
                Gate::Cnot { control: 1, target: 0 },
                Gate::Hxp { qubit: 1, theta: 0.5 },
                Gate::Cnot { control: 1, target: 0 }
            ]
        );
    }

    #[test]
    fn h2_gate_count() {
        let h = build_h2(0.75, &H2CoefficientTable::bundled()).unwrap();
        // I:1  Z1:3  Z2:3  Z1Z2:2·2+2·1+1  X1X2:2·1+1  Y1Y2:2·2+2·1+1
        let per_step = 1 + 3 + 3 + 7 + 3 + 7;
        assert_eq!(compile_trotter(&h, 3).unwrap().gates.len(), 3 * per_step);
        assert_eq!(compile_trotter(&h.with_shift(1.37), 3).unwrap().gates.len(), 3 * (per_step + 1));
    }

    #[test]
    fn rejects_empty() {
        let h = LocalHamiltonian::new(2, vec![], 0.0).unwrap();
        assert!(compile_trotter(&h, 1).is_err());
        let z = LocalHamiltonian::from_terms(&[(1.0, "Z")], 0.0).unwrap();
        assert!(compile_trotter(&z, 0).is_err());
    }
}
