// One round of entangle, evolve and project, compared with the closed-form
// amplitude b_n f_s(E_n) for every eigencomponent.

use quipi::evolution::{evolve_exact, GateCache};
use quipi::hamiltonians::{diagonalize, tfim_initial_state, tfim_uniform};
use quipi::hilbert::{Grid, HybridState, Qumode};
use quipi::qumode::{analytic_amplitude, apply_projection, resource_on_grid, ProjectionKernel};
use std::sync::Arc;

pub fn run_example() -> quipi::Result<()> {
    let bare = tfim_uniform(3)?;
    let e0 = diagonalize(&bare)?.ground_energy();
    let h = bare.with_shift(-e0 + 0.5);
    let spec = diagonalize(&h)?;
    let b = tfim_initial_state(3);

    for s in [2.0, 5.0, 10.0] {
        let grid = Arc::new(Grid::half_line(s, 4096)?);
        let state = HybridState::product(&b, &Qumode::Grid(resource_on_grid(s, grid)))?;
        let evolved = evolve_exact(&state, &h, &GateCache::new())?;
        let residue = apply_projection(&evolved, &ProjectionKernel::grid(s))?.residue;

        let got = spec.coefficients(&residue);
        let mut worst: f64 = 0.0;
        for (n, bn) in spec.coefficients(&b).iter().enumerate() {
            let want = bn * analytic_amplitude(spec.eigenvalues[n], s);
            if want.norm() > 1e-8 {
                worst = worst.max((got[n] - want).norm() / want.norm());
            }
        }
        println!("s = {s:>4}: worst relative deviation {worst:.2e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> quipi::Result<()> {
    run_example()
}
