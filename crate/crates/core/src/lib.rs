//! Simulation and measurement of entanglement localisation through a
//! classical mediator qubit.
//!
//! Three qubits are labeled `A`, `B` (the probes) and `M` (the mediator).
//! The crate provides the ideal model ([`dynamics`]), an NMR pulse-level
//! realization ([`nmr_sim`]) and the correlation functionals used to check
//! the localisation bound ([`measures`]).

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod measures;
pub mod nmr_sim;
pub mod optim;
pub mod policy;
pub mod state_engine;

pub use error::{Error, Result};
pub use policy::{NumericPolicy, POLICY};
