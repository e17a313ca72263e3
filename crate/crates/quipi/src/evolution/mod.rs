//! Coupled evolution `exp(-i H ⊗ p)`: exact, Trotterized, and compiled to gates.

mod compile;
mod gate;
mod sim;

pub use compile::compile_trotter;
pub use gate::{Circuit, Gate};
pub use sim::{apply_gate, circuit_matrix, coupled_exponential, evolve_exact, run_circuit, GateCache, DENSE_DIM_LIMIT};

#[cfg(test)]
mod tests;
