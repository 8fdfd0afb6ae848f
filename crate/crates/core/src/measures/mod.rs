//! Correlation functionals (entropies, mutual information, negativity,
//! discord, relative entropy of entanglement) and the localisation-bound
//! checks built from them.

pub mod bound;
pub mod discord;
pub mod entropy;
pub mod mediator;
pub mod negativity;
pub mod ree;
pub mod report;

pub use bound::{verify_localisation_bound, BoundReport, TrajectoryPoint, Violation, ViolationKind};
pub use discord::{discord_along, discord_on_qubit, DiscordOptions, DiscordResult};
pub use entropy::{mutual_information, relative_entropy, von_neumann_entropy, RelativeEntropy};
pub use mediator::{
    random_classical_mediator_state, random_two_qubit_state, ree_classical_mediator, ClassicalMediatorState,
    MediatorRee, PROBE_LABELS, TRIPARTITE_LABELS,
};
pub use negativity::{is_ppt, min_partial_transpose_eigenvalue, negativity};
pub use ree::{ree_two_qubit, ReeOptions, ReeResult};
pub use report::{measure_state, read_csv, write_csv, CorrelationReport, MeasureOptions, MeasuredState, CSV_HEADER};
