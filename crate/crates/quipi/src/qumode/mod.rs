//! The squeezed resource state, the finite-squeezed projector, the closed-form
//! amplitude oracle and the displacement-based preparation protocol.

mod analytic;
mod prep;
mod projection;
mod resource;

pub use analytic::{analytic_amplitude, asymptotic_amplitude};
pub use prep::{displacement_sequence, polynomial_roots, prepare_by_displacements, Preparation, PreparationSequence, PREP_CUT_LIMIT};
pub use projection::{apply_projection, project, Projection};
pub use resource::{
    build_resource, fock_state_on_grid, momentum_wavefunction, resource_on_grid, KernelRepr, ProjectionKernel,
    SqueezedResource,
};
