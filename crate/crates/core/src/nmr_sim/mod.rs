//! Pulse-level model of the three-spin NMR experiment: the ZZ-coupled
//! molecule, compiled refocusing sequences, gradient dephasing, RF
//! inhomogeneity and the pseudopure ensemble.

mod molecule;
mod pseudopure;
mod rfi;
mod sequence;
mod simulate;

pub use molecule::{molecular_hamiltonian, MoleculeSpec};
pub use pseudopure::{embed_pseudopure, extract_deviation, PseudopureModel};
pub use rfi::RfiModel;
pub use sequence::{
    compile_half, compile_sequence, dephasing_block, evolution_delay, Phase, PulseEvent, PulseSequence,
};
pub use simulate::{
    choi_fidelity, choi_state, echo_residual, event_unitary, free_evolution, ideal_channel, rotation_matrix,
    sequence_channel, sequence_unitary, simulate_sequence,
};
