// Compiles the coupled evolution into H, S, CNOT and e^{-iθX⊗p} gates and checks
// it against the dense exponential.

use quipi::evolution::{circuit_matrix, compile_trotter, coupled_exponential, Circuit, GateCache};
use quipi::hamiltonians::LocalHamiltonian;
use quipi::linalg::max_abs;

pub fn run_example() -> quipi::Result<()> {
    let h = LocalHamiltonian::from_terms(&[(0.4, "ZI"), (0.25, "XX"), (-0.3, "YY")], 0.8)?;
    let one = compile_trotter(&h, 1)?;
    print!("{}", one.to_text());
    let back = Circuit::parse(&one.to_text())?;
    assert_eq!(back, one);

    let cut = 12;
    let cache = GateCache::new();
    let exact = coupled_exponential(&h, cut, 1.0)?;
    for n in [1, 2, 4, 8, 16] {
        let c = compile_trotter(&h, n)?;
        let dev = max_abs(&(circuit_matrix(&c, cut, &cache)? - &exact));
        println!("n = {n:>2}: {:>4} gates, max |U_n - U| = {dev:.3e}", c.gates.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> quipi::Result<()> {
    run_example()
}
