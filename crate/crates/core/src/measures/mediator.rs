//! States of flag form `Σ_m p_m ρ_AB|m ⊗ |m⟩⟨m|`, where the mediator is
//! classically correlated with the probes.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::ree::{ree_two_qubit, ReeOptions, ReeResult};
use crate::error::{Error, Result};
use crate::policy::POLICY;
use crate::state_engine::linalg::{max_abs_diff, projector, CMatrix, CVector, C64};
use crate::state_engine::{dephase, kron, DensityMatrix, QubitBasis};

pub const PROBE_LABELS: [&str; 2] = ["A", "B"];
pub const TRIPARTITE_LABELS: [&str; 3] = ["A", "B", "M"];

#[derive(Debug, Clone)]
pub struct ClassicalMediatorState {
    weights: [f64; 2],
    branches: [DensityMatrix; 2],
    basis: QubitBasis,
}

impl ClassicalMediatorState {
    pub fn new(weights: [f64; 2], branches: [DensityMatrix; 2], basis: QubitBasis) -> Result<Self> {
        if weights.iter().any(|&w| !(0.0..=1.0).contains(&w)) {
            return Err(Error::InvalidParameter(format!("weights {weights:?} outside [0, 1]")));
        }
        if (weights[0] + weights[1] - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("weights {weights:?} do not sum to 1")));
        }
        for b in &branches {
            if b.labels() != PROBE_LABELS {
                return Err(Error::InvalidParameter(format!(
                    "branch labels {:?}, expected [A, B]",
                    b.labels()
                )));
            }
        }
        Ok(Self {
            weights,
            branches,
            basis,
        })
    }

    pub fn weights(&self) -> [f64; 2] {
        self.weights
    }

    pub fn branches(&self) -> &[DensityMatrix; 2] {
        &self.branches
    }

    pub fn basis(&self) -> &QubitBasis {
        &self.basis
    }

    /// The tripartite state on `A, B, M`.
    pub fn assemble(&self) -> DensityMatrix {
        let mut m = CMatrix::zeros(8, 8);
        for ((w, branch), v) in self.weights.iter().zip(&self.branches).zip(self.basis.vectors()) {
            m += kron(branch.matrix(), &projector(v)).scale(*w);
        }
        DensityMatrix::from_trusted(crate::state_engine::owned_labels(&TRIPARTITE_LABELS), m)
    }

    /// Probe marginal `Σ_m p_m ρ_AB|m`.
    pub fn probe_marginal(&self) -> DensityMatrix {
        let m = self.branches[0].matrix().scale(self.weights[0]) + self.branches[1].matrix().scale(self.weights[1]);
        DensityMatrix::from_trusted(crate::state_engine::owned_labels(&PROBE_LABELS), m)
    }

    /// Reads off the flag decomposition of `rho` (labels `A, B, M`) in
    /// `basis`. The second value is `‖ρ − D(ρ)‖_max` where `D` dephases `M`
    /// in `basis`; it vanishes exactly when `rho` has flag form there.
    pub fn decompose(rho: &DensityMatrix, basis: &QubitBasis) -> Result<(Self, f64)> {
        let rho = rho.permuted(&TRIPARTITE_LABELS)?;
        let dephased = dephase(&rho, "M", basis)?;
        let residual = max_abs_diff(rho.matrix(), dephased.matrix());
        let mut weights = [0.0; 2];
        let mut blocks: Vec<DensityMatrix> = Vec::with_capacity(2);
        for (k, v) in basis.vectors().iter().enumerate() {
            let block = super::discord::conditional_block(rho.matrix(), 3, 2, v);
            let p: f64 = block.diagonal().iter().map(|z| z.re).sum();
            weights[k] = p.max(0.0);
            let branch = if p > POLICY.eigenvalue_clamp {
                DensityMatrix::new(crate::state_engine::owned_labels(&PROBE_LABELS), block)?
            } else {
                DensityMatrix::maximally_mixed(&PROBE_LABELS)
            };
            blocks.push(branch);
        }
        let total = weights[0] + weights[1];
        weights = [weights[0] / total, weights[1] / total];
        let branches: [DensityMatrix; 2] = blocks.try_into().expect("two branches");
        Ok((Self::new(weights, branches, basis.clone())?, residual))
    }
}

fn haar_ket(rng: &mut ChaCha8Rng, dim: usize) -> CVector {
    let v = CVector::from_fn(dim, |_, _| {
        C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let norm = v.norm();
    v.unscale(norm)
}

/// Mixture of between one and four Haar-random pure two-qubit states with
/// uniformly drawn weights.
pub fn random_two_qubit_state(rng: &mut ChaCha8Rng) -> DensityMatrix {
    let rank = rng.gen_range(1..=4);
    let raw: Vec<f64> = (0..rank).map(|_| rng.gen::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    let mut m = CMatrix::zeros(4, 4);
    for w in raw {
        m += projector(&haar_ket(rng, 4)).scale(w / total);
    }
    DensityMatrix::from_trusted(crate::state_engine::owned_labels(&PROBE_LABELS), m)
}

/// Deterministic per seed: random weights, random branch states and a
/// uniformly random mediator basis direction.
pub fn random_classical_mediator_state(seed: u64) -> ClassicalMediatorState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p: f64 = rng.gen_range(0.02..0.98);
    let branches = [random_two_qubit_state(&mut rng), random_two_qubit_state(&mut rng)];
    let theta = (1.0 - 2.0 * rng.gen::<f64>()).acos();
    let phi = 2.0 * PI * rng.gen::<f64>();
    ClassicalMediatorState::new([p, 1.0 - p], branches, QubitBasis::from_angles(theta, phi))
        .expect("generated weights are valid")
}

#[derive(Debug, Clone)]
pub struct MediatorRee {
    /// `Σ_m p_m E(ρ_AB|m)` in bits.
    pub bits: f64,
    /// Per-branch results; `None` for branches with zero weight.
    pub branches: Vec<Option<ReeResult>>,
    pub converged: bool,
}

/// REE across `A:BM` of a flag-form state, through the weighted sum of the
/// branch REEs.
pub fn ree_classical_mediator(state: &ClassicalMediatorState, opts: &ReeOptions) -> Result<MediatorRee> {
    let mut bits = 0.0;
    let mut converged = true;
    let mut branches = Vec::with_capacity(2);
    for (w, branch) in state.weights.iter().zip(&state.branches) {
        if *w <= 0.0 {
            branches.push(None);
            continue;
        }
        let r = ree_two_qubit(branch, opts)?;
        bits += w * r.bits;
        converged &= r.converged;
        branches.push(Some(r));
    }
    Ok(MediatorRee {
        bits,
        branches,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state_engine::named_state;

    #[test]
    fn same_seed_same_state() {
        let a = random_classical_mediator_state(42).assemble();
        let b = random_classical_mediator_state(42).assemble();
        assert_eq!(a.matrix(), b.matrix());
        let c = random_classical_mediator_state(43).assemble();
        assert_ne!(a.matrix(), c.matrix());
    }

    #[test]
    fn weights_sum_to_one_and_state_is_valid() {
        for seed in 0..20 {
            let s = random_classical_mediator_state(seed);
            assert!((s.weights()[0] + s.weights()[1] - 1.0).abs() < 1e-12);
            s.assemble().validate().unwrap();
        }
    }

    #[test]
    fn decomposition_recovers_the_flags() {
        let s = random_classical_mediator_state(7);
        let (d, residual) = ClassicalMediatorState::decompose(&s.assemble(), s.basis()).unwrap();
        assert!(residual < 1e-14);
        for k in 0..2 {
            assert!((d.weights()[k] - s.weights()[k]).abs() < 1e-12);
            assert!(max_abs_diff(d.branches()[k].matrix(), s.branches()[k].matrix()) < 1e-12);
        }
    }

    #[test]
    fn decomposition_flags_non_classical_states() {
        let rho = DensityMatrix::pure(&TRIPARTITE_LABELS, &crate::state_engine::ket("000").unwrap()).unwrap();
        let (_, residual) = ClassicalMediatorState::decompose(&rho, &QubitBasis::x()).unwrap();
        assert!(residual > 0.1);
    }

    #[test]
    fn product_branches_have_zero_ree() {
        let s = ClassicalMediatorState::new(
            [0.4, 0.6],
            [named_state("01").unwrap(), named_state("10").unwrap()],
            QubitBasis::z(),
        )
        .unwrap();
        let r = ree_classical_mediator(&s, &ReeOptions::default()).unwrap();
        assert!(r.bits < 1e-6, "{}", r.bits);
    }

    #[test]
    fn invalid_weights_rejected() {
        let b = || named_state("00").unwrap();
        assert!(ClassicalMediatorState::new([0.5, 0.6], [b(), b()], QubitBasis::z()).is_err());
        assert!(ClassicalMediatorState::new([1.5, -0.5], [b(), b()], QubitBasis::z()).is_err());
    }
}
