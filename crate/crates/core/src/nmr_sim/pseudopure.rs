use crate::error::{Error, Result};
use crate::state_engine::linalg::identity;
use crate::state_engine::DensityMatrix;

/// Thermal NMR ensemble `(1 − ε) I/d + ε ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PseudopureModel {
    epsilon: f64,
}

impl PseudopureModel {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::InvalidParameter(format!("purity factor {epsilon} outside (0, 1]")));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

impl Default for PseudopureModel {
    fn default() -> Self {
        Self { epsilon: 1e-5 }
    }
}

pub fn embed_pseudopure(rho: &DensityMatrix, p: &PseudopureModel) -> Result<DensityMatrix> {
    let d = rho.dim();
    let m = identity(d).scale((1.0 - p.epsilon) / d as f64) + rho.matrix().scale(p.epsilon);
    DensityMatrix::new(rho.labels().to_vec(), m)
}

/// Deviation density matrix `ρ` of a pseudopure ensemble.
pub fn extract_deviation(full: &DensityMatrix, p: &PseudopureModel) -> Result<DensityMatrix> {
    let d = full.dim();
    let m = (full.matrix() - identity(d).scale((1.0 - p.epsilon) / d as f64)).unscale(p.epsilon);
    DensityMatrix::new(full.labels().to_vec(), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::initial_state;
    use crate::measures::negativity;
    use crate::state_engine::linalg::max_abs_diff;
    use crate::state_engine::{named_state, Bipartition};

    #[test]
    fn round_trip() {
        let rho = initial_state();
        for eps in [1e-5, 0.3, 1.0] {
            let p = PseudopureModel::new(eps).unwrap();
            let back = extract_deviation(&embed_pseudopure(&rho, &p).unwrap(), &p).unwrap();
            assert!(max_abs_diff(back.matrix(), rho.matrix()) < 1e-12, "{eps}");
        }
    }

    #[test]
    fn unit_purity_is_identity() {
        let rho = initial_state();
        let e = embed_pseudopure(&rho, &PseudopureModel::new(1.0).unwrap()).unwrap();
        assert!(max_abs_diff(e.matrix(), rho.matrix()) < 1e-15);
    }

    #[test]
    fn low_purity_masks_entanglement() {
        let rho = named_state("phi_plus")
            .unwrap()
            .tensor(&crate::state_engine::DensityMatrix::maximally_mixed(&["M"]))
            .unwrap();
        let e = embed_pseudopure(&rho, &PseudopureModel::default()).unwrap();
        for cut in ["A", "B", "M"] {
            let n = negativity(&e, &Bipartition::new(e.labels(), &[cut]).unwrap()).unwrap();
            assert!(n < 1e-12, "{cut}: {n}");
        }
    }

    #[test]
    fn epsilon_range() {
        assert!(PseudopureModel::new(0.0).is_err());
        assert!(PseudopureModel::new(1.5).is_err());
        assert!(PseudopureModel::new(f64::NAN).is_err());
    }
}
