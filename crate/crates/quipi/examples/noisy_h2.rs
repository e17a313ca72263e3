// Density-matrix run with boson loss, then qubit depolarization mitigated by
// zero-noise extrapolation.

use quipi::hamiltonians::{build_h2, h2_initial_state, H2CoefficientTable};
use quipi::noise::{noisy_quipi, DepolarizingChannel, LossChannel, ZneSchedule};
use quipi::quipi::{Backend, QuipiConfig};

pub fn run_example() -> quipi::Result<()> {
    let h = build_h2(0.75, &H2CoefficientTable::from_env()?)?.with_shift(1.37);
    let mut cfg = QuipiConfig::new(h2_initial_state());
    cfg.backend = Backend::Fock;
    cfg.cut = 20;
    cfg.fock_cut = 30;
    cfg.trotter_n = 8;
    cfg.iterations = 2;

    for p in [0.0, 1e-3] {
        let loss = LossChannel::new(p)?;
        let r = noisy_quipi(&h, &cfg, Some(&loss), None)?;
        let last = r.last().expect("iterations");
        println!("p_loss = {p:.0e}: error {:.3e}, fidelity {:.6}", last.energy_error, last.ground_fidelity);
    }

    let zne = ZneSchedule::default();
    let mut energies = Vec::new();
    for &scale in &zne.scale_factors {
        let dep = DepolarizingChannel::new(1e-4 * scale)?;
        let r = noisy_quipi(&h, &cfg, None, Some(&dep))?;
        let last = r.last().expect("iterations");
        println!("p_depol = {:.0e}: error {:.3e}", 1e-4 * scale, last.energy_error);
        energies.push(last.energy_error);
    }
    println!("extrapolated error: {:.3e}", zne.extrapolate(&energies)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> quipi::Result<()> {
    run_example()
}
