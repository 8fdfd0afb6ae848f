use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use super::labels;
use crate::error::Result;
use crate::state_engine::linalg::{from_real_rows, identity, projector};
use crate::state_engine::{apply_unitary, controlled, embed_single, ket, kron, DensityMatrix, Pauli, UnitaryOperator};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "snake_case")]
pub enum Gate {
    Hadamard { target: String },
    /// CNOT; with `open = true` it fires when the control is `|0⟩`.
    Cnot {
        control: String,
        target: String,
        #[serde(default)]
        open: bool,
    },
}

impl Gate {
    pub fn hadamard(target: &str) -> Self {
        Gate::Hadamard { target: target.into() }
    }

    pub fn cnot(control: &str, target: &str) -> Self {
        Gate::Cnot {
            control: control.into(),
            target: target.into(),
            open: false,
        }
    }

    pub fn open_cnot(control: &str, target: &str) -> Self {
        Gate::Cnot {
            control: control.into(),
            target: target.into(),
            open: true,
        }
    }

    pub fn unitary(&self, labels: &[String]) -> Result<UnitaryOperator> {
        match self {
            Gate::Hadamard { target } => {
                let h = from_real_rows(2, &[FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2]);
                UnitaryOperator::new(labels.to_vec(), embed_single(labels, target, &h)?)
            }
            Gate::Cnot { control, target, open } => controlled(labels, control, !open, target, &Pauli::X.matrix()),
        }
    }
}

/// `|00⟩⟨00|_AB ⊗ I/2`: the mediator starts maximally mixed.
pub fn circuit_input() -> DensityMatrix {
    let p = projector(&ket("00").expect("catalog"));
    let m = kron(&p, &identity(2).scale(0.5));
    DensityMatrix::from_trusted(labels(), m)
}

/// Gate list that maps [`circuit_input`] onto [`super::initial_state`]:
/// Hadamard on `A`, CNOT `A → B`, open-control CNOT `M → B`, Hadamard on `M`.
pub fn preparation_circuit() -> Vec<Gate> {
    vec![
        Gate::hadamard("A"),
        Gate::cnot("A", "B"),
        Gate::open_cnot("M", "B"),
        Gate::hadamard("M"),
    ]
}

pub fn run_circuit(gates: &[Gate], input: &DensityMatrix) -> Result<DensityMatrix> {
    let mut rho = input.clone();
    for g in gates {
        rho = apply_unitary(&rho, &g.unitary(rho.labels())?)?;
    }
    Ok(rho)
}

pub fn prepare_via_circuit() -> DensityMatrix {
    run_circuit(&preparation_circuit(), &circuit_input()).expect("fixed circuit on fixed labels")
}
