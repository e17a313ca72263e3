// A Hamiltonian written as Pauli strings, and its excited levels reached by moving
// the shift so the wanted level has the smallest magnitude.

use quipi::hamiltonians::{diagonalize, LocalHamiltonian};
use quipi::linalg::c;
use quipi::quipi::{quipi_solve, QuipiConfig};

pub fn run_example() -> quipi::Result<()> {
    let bare = LocalHamiltonian::from_terms(&[(0.5, "ZI"), (0.3, "IZ"), (0.2, "XX"), (0.1, "ZZ")], 0.0)?;
    let spec = diagonalize(&bare)?;
    println!("spectrum: {:?}", spec.eigenvalues.iter().map(|e| format!("{e:.4}")).collect::<Vec<_>>());

    let mut cfg = QuipiConfig::new(vec![c(0.5, 0.0); 4]);
    cfg.iterations = 5;
    // levels below the target turn negative, so positivity has to be waived
    cfg.allow_indefinite = true;
    for (level, &e) in spec.eigenvalues.iter().enumerate() {
        let h = bare.with_shift(-e + 0.05);
        let r = quipi_solve(&h, &cfg)?.reports.pop().expect("iterations");
        println!("level {level}: exact {e:>8.5}, found {:>8.5}, overlap {:.6}", r.energy, r.ground_fidelity.unwrap_or(f64::NAN));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> quipi::Result<()> {
    run_example()
}
