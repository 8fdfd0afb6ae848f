//! Named kets, states and Pauli operators with exact entries.

use std::f64::consts::FRAC_1_SQRT_2;

use super::linalg::{basis_vector, CMatrix, CVector, C64, ONE, ZERO};
use super::state::DensityMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> CMatrix {
        let i = C64::new(0.0, 1.0);
        let entries = match self {
            Pauli::I => [ONE, ZERO, ZERO, ONE],
            Pauli::X => [ZERO, ONE, ONE, ZERO],
            Pauli::Y => [ZERO, -i, i, ZERO],
            Pauli::Z => [ONE, ZERO, ZERO, -ONE],
        };
        CMatrix::from_row_slice(2, 2, &entries)
    }

    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
}

pub fn pauli(name: &str) -> Result<CMatrix> {
    match name {
        "I" | "id" => Ok(Pauli::I.matrix()),
        "X" | "sx" | "sigma_x" => Ok(Pauli::X.matrix()),
        "Y" | "sy" | "sigma_y" => Ok(Pauli::Y.matrix()),
        "Z" | "sz" | "sigma_z" => Ok(Pauli::Z.matrix()),
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

fn from_amplitudes(amps: &[f64]) -> CVector {
    CVector::from_iterator(amps.len(), amps.iter().map(|&a| C64::new(a, 0.0)))
}

/// Catalog kets: `0`, `1`, `plus`/`+`, `minus`/`-`, the four Bell states
/// (`phi_plus`, `phi_minus`, `psi_plus`, `psi_minus`) and any bit string
/// such as `010`.
pub fn ket(name: &str) -> Result<CVector> {
    let s = FRAC_1_SQRT_2;
    let v = match name {
        "plus" | "+" => from_amplitudes(&[s, s]),
        "minus" | "-" => from_amplitudes(&[s, -s]),
        "phi_plus" => from_amplitudes(&[s, 0.0, 0.0, s]),
        "phi_minus" => from_amplitudes(&[s, 0.0, 0.0, -s]),
        "psi_plus" => from_amplitudes(&[0.0, s, s, 0.0]),
        "psi_minus" => from_amplitudes(&[0.0, s, -s, 0.0]),
        bits if !bits.is_empty() && bits.len() <= 16 && bits.chars().all(|c| c == '0' || c == '1') => {
            let index = usize::from_str_radix(bits, 2).expect("validated bit string");
            basis_vector(1 << bits.len(), index)
        }
        _ => return Err(Error::UnknownName(name.to_string())),
    };
    Ok(v)
}

/// Default labels for `n` qubits: `Q` for one, `A,B` for two, `A,B,M` for three.
pub fn default_labels(n: usize) -> Result<Vec<&'static str>> {
    match n {
        1 => Ok(vec!["Q"]),
        2 => Ok(vec!["A", "B"]),
        3 => Ok(vec!["A", "B", "M"]),
        _ => Err(Error::InvalidParameter(format!("no default labels for {n} qubits"))),
    }
}

/// Pure catalog state as a density matrix with default labels.
pub fn named_state(name: &str) -> Result<DensityMatrix> {
    let v = ket(name)?;
    let n = v.len().trailing_zeros() as usize;
    DensityMatrix::pure(&default_labels(n)?, &v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state_engine::linalg::max_abs_diff;

    #[test]
    fn phi_plus_entries() {
        let v = ket("phi_plus").unwrap();
        assert_eq!(v[0], C64::new(FRAC_1_SQRT_2, 0.0));
        assert_eq!(v[3], C64::new(FRAC_1_SQRT_2, 0.0));
        assert_eq!(v[1], ZERO);
        assert_eq!(v[2], ZERO);
    }

    #[test]
    fn plus_is_sigma_x_eigenvector() {
        let v = ket("plus").unwrap();
        let xv = Pauli::X.matrix() * &v;
        assert!((xv - v).norm() < 1e-15);
        let m = ket("minus").unwrap();
        let xm = Pauli::X.matrix() * &m;
        assert!((xm + m).norm() < 1e-15);
    }

    #[test]
    fn bell_states_are_orthogonal() {
        let names = ["phi_plus", "phi_minus", "psi_plus", "psi_minus"];
        for a in names {
            for b in names {
                let overlap = ket(a).unwrap().dotc(&ket(b).unwrap()).norm();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((overlap - expected).abs() < 1e-15, "{a} {b}");
            }
        }
    }

    #[test]
    fn pauli_algebra() {
        let (x, y, z) = (Pauli::X.matrix(), Pauli::Y.matrix(), Pauli::Z.matrix());
        let iz = z.clone() * C64::new(0.0, 1.0);
        assert!(max_abs_diff(&(&x * &y), &iz) < 1e-15);
        for p in [&x, &y, &z] {
            assert!(max_abs_diff(&(p * p), &Pauli::I.matrix()) < 1e-15);
        }
    }

    #[test]
    fn bit_strings_and_unknown_names() {
        let v = ket("101").unwrap();
        assert_eq!(v.len(), 8);
        assert_eq!(v[5], ONE);
        assert!(matches!(ket("phi"), Err(Error::UnknownName(_))));
        assert!(named_state("nonsense").is_err());
        assert_eq!(named_state("psi_minus").unwrap().labels(), &["A".to_string(), "B".to_string()]);
    }
}
