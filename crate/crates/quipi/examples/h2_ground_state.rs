// Ground energy of H2 at 0.75 Å, exact and with sampled expectation values.

use quipi::hamiltonians::{build_h2, diagonalize, h2_initial_state, H2CoefficientTable};
use quipi::quipi::{quipi_solve, QuipiConfig};

pub fn run_example() -> quipi::Result<()> {
    let table = H2CoefficientTable::from_env()?;
    // shift 1.37 puts E0'/E1' near 1/8
    let h = build_h2(0.75, &table)?.with_shift(1.37);
    let exact = diagonalize(&h)?.ground_energy() - h.shift();

    let cfg = QuipiConfig::new(h2_initial_state());
    let out = quipi_solve(&h, &cfg)?;
    println!("exact E0 = {exact:.10}");
    println!("{:>3} {:>14} {:>11} {:>9} {:>11}", "k", "energy", "error", "P", "cumulative");
    for r in &out.reports {
        println!(
            "{:>3} {:>14.10} {:>11.3e} {:>9.5} {:>11.3e}",
            r.k,
            r.energy,
            r.energy_error.unwrap_or(f64::NAN),
            r.success_probability,
            r.cumulative_success
        );
    }

    let mut sampled = cfg.clone();
    sampled.shots = 10_000;
    sampled.seed = 7;
    let r = quipi_solve(&h, &sampled)?.reports.pop().expect("three iterations");
    println!("with 10^4 shots per term: {:.6} ± {:.6}", r.energy, r.energy_std_error);
    Ok(())
}

#[allow(dead_code)]
fn main() -> quipi::Result<()> {
    run_example()
}
