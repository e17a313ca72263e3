// Inverse iteration without an ancilla: H^{-k} replaced by a discretized sum of
// e^{-iHjΔp}, compared with the exact inverse.

use quipi::hamiltonians::{build_h2, diagonalize, expectation, h2_initial_state, H2CoefficientTable};
use quipi::hybrid::{evolution_time_budget, hybrid_energy, HybridIPIConfig};
use quipi::quipi::oracle_inverse_iterate;

pub fn run_example() -> quipi::Result<()> {
    let h = build_h2(0.75, &H2CoefficientTable::from_env()?)?.with_shift(1.37);
    let b = h2_initial_state();
    let e0 = diagonalize(&h)?.ground_energy() - h.shift();

    print!("{:>3} {:>10}", "k", "exact");
    let phis = [2.5, 5.0, 10.0, 20.0];
    for phi in phis {
        print!(" {:>10}", format!("phi={phi}"));
    }
    println!();
    for k in 1..=6u32 {
        let ideal = oracle_inverse_iterate(&h, &b, k)?;
        print!("{k:>3} {:>10.2e}", (expectation(&h, &ideal)? - h.shift() - e0).abs());
        for phi in phis {
            let cfg = HybridIPIConfig::from_phi_max(0.1, phi, k)?;
            print!(" {:>10.2e}", (hybrid_energy(&h, &b, &cfg)? - e0).abs());
        }
        println!();
    }
    let budget = evolution_time_budget(&HybridIPIConfig::new(0.1, 100, 2)?);
    println!("M_j = 100, k = 2: longest evolution {:.1}, total {:.0}", budget.max_duration, budget.total_time);
    Ok(())
}

#[allow(dead_code)]
fn main() -> quipi::Result<()> {
    run_example()
}
