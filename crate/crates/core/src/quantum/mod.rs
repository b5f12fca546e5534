//! Finite-dimensional substrate: operators, states, tensor structure,
//! entropies, distances and Fisher information.

mod hamiltonian;
pub mod linalg;
mod ops;
pub mod random;
mod state;

pub use hamiltonian::{default_grouping_tol, Hamiltonian};
pub use linalg::{CMatrix, CVector, C64};
pub use ops::{
    fidelity, moments, partial_trace, partial_trace_matrix, qfi, random_energy_preserving_unitary, tensor,
    trace_distance, von_neumann_entropy, Tensor,
};
pub use state::{CompositeLabel, DensityOperator, PureState};
