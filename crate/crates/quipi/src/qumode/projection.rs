use super::resource::{KernelRepr, ProjectionKernel};
use crate::error::{Error, Result};
use crate::hilbert::{qubit_marginal, HybridState, ModeBasis};
use crate::linalg::{C64, ZERO};

/// Result of post-selecting the qumode on `|q=0,s⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    /// Normalized qubit state.
    pub qubits: Vec<C64>,
    /// Unnormalized residue `⟨q=0,s|ψ⟩`.
    pub residue: Vec<C64>,
    pub success_probability: f64,
}

/// Contracts the qumode axis with the kernel, leaving a collapsed state.
pub fn project(state: &HybridState, kernel: &ProjectionKernel) -> Result<HybridState> {
    let m = state.mode_dim();
    let residue: Vec<C64> = match (&state.basis, &kernel.repr) {
        (ModeBasis::Fock { cut }, KernelRepr::Fock(k)) => {
            if k.len() < cut + 1 {
                return Err(Error::DimensionMismatch { expected: cut + 1, got: k.len() });
            }
            state.amplitudes.chunks(m).map(|b| b.iter().zip(k).map(|(a, kn)| kn.conj() * a).sum()).collect()
        }
        (ModeBasis::Grid(g), KernelRepr::Grid) => {
            let kw: Vec<f64> = (0..g.points()).map(|i| g.weights()[i] * kernel.value(g.p(i))).collect();
            state.amplitudes.chunks(m).map(|b| b.iter().zip(&kw).map(|(a, w)| a * *w).sum()).collect()
        }
        (ModeBasis::Collapsed, _) => return Err(Error::InvalidArgument("qumode already projected".into())),
        _ => return Err(Error::Unsupported("kernel representation does not match the state backend".into())),
    };
    let p: f64 = residue.iter().map(|z| z.norm_sqr()).sum();
    Ok(HybridState {
        qubit_count: state.qubit_count,
        basis: ModeBasis::Collapsed,
        amplitudes: residue,
        norm_tracking: state.norm_tracking * p.sqrt(),
    })
}

/// Projects and renormalizes. A vanishing residue is reported as [`Error::ProjectionFailure`].
pub fn apply_projection(state: &HybridState, kernel: &ProjectionKernel) -> Result<Projection> {
    let collapsed = project(state, kernel)?;
    if collapsed.amplitudes.iter().all(|z| *z == ZERO) {
        return Err(Error::ProjectionFailure);
    }
    let (qubits, success_probability) = qubit_marginal(&collapsed)?;
    Ok(Projection { qubits, residue: collapsed.amplitudes, success_probability })
}
