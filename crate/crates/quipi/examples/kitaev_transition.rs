// Field sweep of a three-site Kitaev ring through h = 1.

use quipi::hamiltonians::{build_kitaev_ring, diagonalize, kitaev_initial_state};
use quipi::quipi::{quipi_solve, QuipiConfig};

pub fn run_example() -> quipi::Result<()> {
    println!("{:>5} {:>12} {:>12} {:>12} {:>10}", "h", "QuIPI", "E0", "E1", "error");
    for i in 1..=10 {
        let field = 0.2 * i as f64;
        let bare = build_kitaev_ring(3, 1.0, field)?;
        let spec = diagonalize(&bare)?;
        let (e0, e1) = (spec.eigenvalues[0], spec.eigenvalues[1]);
        let h = bare.with_shift(-e0 + 0.5);
        let out = quipi_solve(&h, &QuipiConfig::new(kitaev_initial_state(3, field)))?;
        let e = out.reports.last().expect("iterations").energy;
        println!("{field:>5.2} {e:>12.6} {e0:>12.6} {e1:>12.6} {:>10.2e}", (e - e0).abs());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> quipi::Result<()> {
    run_example()
}
