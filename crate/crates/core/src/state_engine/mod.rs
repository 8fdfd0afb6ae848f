//! Labeled multi-qubit density matrices, tensor operations, channels and
//! spectral routines.

pub mod catalog;
pub mod io;
pub mod linalg;
pub mod ops;
pub mod state;

pub use catalog::{ket, named_state, pauli, Pauli};
pub use io::{read_state, state_from_json, state_to_json, write_state};
pub use linalg::{
    expm_hermitian, hermitian_eigensystem, kron, kron_all, CMatrix, CVector, Eigensystem, C64,
};
pub use ops::{
    apply_channel, apply_unitary, controlled, dephase, dephasing_channel, embed_product,
    embed_single, QuantumChannel, QubitBasis, UnitaryOperator,
};
pub use state::{fidelity, marginal, owned_labels, partial_trace, partial_transpose, Bipartition, DensityMatrix};
