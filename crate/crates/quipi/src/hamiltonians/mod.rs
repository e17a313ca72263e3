//! Pauli-string Hamiltonians, benchmark models and the dense diagonalization oracle.

mod local;
mod models;
mod pauli;

pub use local::{diagonalize, expectation, validate_shift, LocalHamiltonian, Spectrum, Term, DENSE_QUBIT_LIMIT};
pub use models::{
    build_h2, build_kitaev_ring, build_tfim, h2_initial_state, kitaev_initial_state, tfim_initial_state, tfim_random,
    tfim_uniform, H2CoefficientTable, BOND_TOLERANCE, H2_TABLE_FILE,
};
pub use pauli::{Pauli, PauliString};
