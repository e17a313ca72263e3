// The same round on the momentum grid and in the Fock basis, using the truncated
// resource on both.

use quipi::hamiltonians::{build_h2, h2_initial_state, H2CoefficientTable};
use quipi::linalg::fidelity;
use quipi::quipi::{Backend, Pipeline, QuipiConfig, ResourceModel};

pub fn run_example() -> quipi::Result<()> {
    let h = build_h2(0.75, &H2CoefficientTable::from_env()?)?.with_shift(1.37);
    let b = h2_initial_state();
    let mut cfg = QuipiConfig::new(b.clone());
    cfg.s = 5.0;
    cfg.resource = ResourceModel::Truncated;

    let grid = Pipeline::new(&h, &cfg)?;
    cfg.backend = Backend::Fock;
    let fock = Pipeline::new(&h, &cfg)?;

    let (bg, pg) = grid.round(&h, &b)?;
    let (bf, pf) = fock.round(&h, &b)?;
    println!("grid: P = {pg:.10}");
    println!("fock: P = {pf:.10}");
    println!("|dP| = {:.3e}", (pg - pf).abs());
    let diff = bg.iter().zip(&bf).fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
    println!("max amplitude difference = {diff:.3e}, 1 - fidelity = {:.3e}", 1.0 - fidelity(&bg, &bf));
    Ok(())
}

#[allow(dead_code)]
fn main() -> quipi::Result<()> {
    run_example()
}
