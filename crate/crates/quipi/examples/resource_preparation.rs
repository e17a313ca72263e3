// Builds the half-Gaussian resource state from vacuum with displaced creation
// operators and reports how much of the ideal state each truncation captures.

use quipi::qumode::{build_resource, momentum_wavefunction, prepare_by_displacements};

pub fn run_example() -> quipi::Result<()> {
    let s = 5.0;
    for cut in [4, 8, 12, 20] {
        let res = build_resource(s, cut)?;
        let prep = prepare_by_displacements(&res.fock_coefficients)?;
        println!(
            "cut {cut:>2}: {} stages, max |alpha| {:.3}, fidelity {:.12}, retained weight {:.4}",
            prep.sequence.alphas.len(),
            prep.sequence.alphas.iter().map(|a| a.norm()).fold(0.0, f64::max),
            prep.fidelity,
            res.retained_weight()
        );
    }
    let res = build_resource(s, 20)?;
    for p in [-4.0, -1.0, 0.0, 1.0, 4.0, 8.0] {
        let psi = momentum_wavefunction(&res.fock_coefficients, p);
        println!("|psi({p:>4})|^2 = {:.5}", psi.norm_sqr());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> quipi::Result<()> {
    run_example()
}
