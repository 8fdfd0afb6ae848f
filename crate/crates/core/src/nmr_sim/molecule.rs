use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::TRIPARTITE_LABELS;
use crate::state_engine::linalg::CMatrix;
use crate::state_engine::{embed_product, owned_labels, Pauli};

/// Scalar couplings of the three spins, in Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoleculeSpec {
    pub j_am: f64,
    pub j_bm: f64,
    pub j_ab: f64,
}

impl Default for MoleculeSpec {
    fn default() -> Self {
        Self {
            j_am: 224.5,
            j_bm: -310.9,
            j_ab: 49.7,
        }
    }
}

impl MoleculeSpec {
    pub fn new(j_am: f64, j_bm: f64, j_ab: f64) -> Result<Self> {
        let m = Self { j_am, j_bm, j_ab };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if [self.j_am, self.j_bm, self.j_ab].iter().all(|j| j.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("non-finite coupling in {self:?}")))
        }
    }

    /// Diagonal of [`molecular_hamiltonian`] in the computational basis.
    pub fn diagonal(&self) -> [f64; 8] {
        let mut d = [0.0; 8];
        for (idx, v) in d.iter_mut().enumerate() {
            let z = |q: usize| if (idx >> (2 - q)) & 1 == 0 { 1.0 } else { -1.0 };
            let (a, b, m) = (z(0), z(1), z(2));
            *v = FRAC_PI_2 * (self.j_am * a * m + self.j_bm * b * m + self.j_ab * a * b);
        }
        d
    }
}

/// `(π/2)(J_AM σz^A σz^M + J_BM σz^B σz^M + J_AB σz^A σz^B)` in rad/s on
/// `A, B, M`.
pub fn molecular_hamiltonian(m: &MoleculeSpec) -> CMatrix {
    let z = Pauli::Z.matrix();
    let l = owned_labels(&TRIPARTITE_LABELS);
    let zz = |p: &str, q: &str| embed_product(&l, &[(p, &z), (q, &z)]).expect("fixed labels");
    (zz("A", "M").scale(m.j_am) + zz("B", "M").scale(m.j_bm) + zz("A", "B").scale(m.j_ab)).scale(FRAC_PI_2)
}
