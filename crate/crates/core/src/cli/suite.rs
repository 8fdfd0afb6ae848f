//! Seeded property checks on random classical-mediator states.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::hamiltonian_along;
use crate::error::Result;
use crate::measures::{
    discord_along, is_ppt, measure_state, mutual_information, negativity, random_classical_mediator_state,
    ree_classical_mediator, ree_two_qubit, verify_localisation_bound, BoundReport, ClassicalMediatorState,
    MeasureOptions, TrajectoryPoint, PROBE_LABELS, TRIPARTITE_LABELS,
};
use crate::state_engine::{apply_unitary, marginal, Bipartition, DensityMatrix, UnitaryOperator};

pub const FLAGS_TOLERANCE: f64 = 1e-9;
pub const INEQUALITY_TOLERANCE: f64 = 1e-3;
pub const REE_ZERO_THRESHOLD: f64 = 1e-3;
pub const DISCORD_TOLERANCE: f64 = 1e-6;
/// Partial-transpose eigenvalues above `−PPT_TOLERANCE` count as nonnegative.
pub const PPT_TOLERANCE: f64 = 1e-10;

/// Times (`ωt`) at which random instances are evolved for the chain check.
pub const CHAIN_TIMES: [f64; 3] = [PI / 16.0, PI / 8.0, PI / 4.0];

/// `|N_A:BM − Σ p_m N_A:B(ρ_AB|m)|`.
pub fn flags_additivity_error(state: &ClassicalMediatorState) -> Result<f64> {
    let rho = state.assemble();
    let whole = negativity(&rho, &Bipartition::new(rho.labels(), &["A"])?)?;
    let mut sum = 0.0;
    for (w, b) in state.weights().iter().zip(state.branches()) {
        sum += w * negativity(b, &Bipartition::new(b.labels(), &["A"])?)?;
    }
    Ok((whole - sum).abs())
}

/// `E_A:BM − E_A:B − I_AB:M`; nonpositive when the inequality holds.
pub fn inequality_excess(state: &ClassicalMediatorState, opts: &MeasureOptions) -> Result<f64> {
    let rho = state.assemble();
    let a_bm = ree_classical_mediator(state, &opts.ree)?.bits;
    let a_b = ree_two_qubit(&state.probe_marginal(), &opts.ree)?.bits;
    let info = mutual_information(&rho, &Bipartition::new(rho.labels(), &PROBE_LABELS)?)?;
    Ok(a_bm - a_b - info)
}

/// Evolves a flag state under `ω (σx^A + σx^B) ⊗ n·σ`, with `n` the flag
/// axis, so the mediator stays classical in the flag basis.
pub fn evolve_flag_state(state: &ClassicalMediatorState, omega_t: f64) -> Result<DensityMatrix> {
    let (theta, phi) = state.basis().bloch_angles();
    let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
    let u = UnitaryOperator::evolution(&TRIPARTITE_LABELS, &hamiltonian_along(1.0, n), omega_t)?;
    apply_unitary(&state.assemble(), &u)
}

/// Localisation bound and chain along [`CHAIN_TIMES`].
pub fn bound_chain(state: &ClassicalMediatorState, opts: &MeasureOptions) -> Result<BoundReport> {
    let trajectory = CHAIN_TIMES
        .iter()
        .map(|&t| {
            let rho = evolve_flag_state(state, t)?;
            Ok(TrajectoryPoint {
                report: measure_state(&rho, t, opts)?.report,
                state: rho,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    verify_localisation_bound(&trajectory, &state.assemble(), state.basis(), &opts.ree)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PptCheck {
    pub ppt: bool,
    pub ree: f64,
    pub negativity: f64,
}

impl PptCheck {
    /// PPT exactly when the REE is below [`REE_ZERO_THRESHOLD`].
    pub fn agrees(&self) -> bool {
        self.ppt == (self.ree < REE_ZERO_THRESHOLD)
    }
}

pub fn ppt_check(rho: &DensityMatrix, opts: &MeasureOptions) -> Result<PptCheck> {
    let cut = Bipartition::new(rho.labels(), &["A"])?;
    Ok(PptCheck {
        ppt: is_ppt(rho, &cut, PPT_TOLERANCE)?,
        ree: ree_two_qubit(rho, &opts.ree)?.bits,
        negativity: negativity(rho, &cut)?,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceReport {
    pub seed: u64,
    pub flags_error: f64,
    pub inequality_excess: f64,
    pub discord_along_flags: f64,
    pub chain_passed: bool,
    pub chain_min_slack: f64,
    /// Two branches and the probe marginal.
    pub ppt: [PptCheck; 3],
}

pub fn check_instance(seed: u64, opts: &MeasureOptions) -> Result<InstanceReport> {
    let state = random_classical_mediator_state(seed);
    let rho = state.assemble();
    let (theta, phi) = state.basis().bloch_angles();
    let chain = bound_chain(&state, opts)?;
    let [b0, b1] = state.branches();
    Ok(InstanceReport {
        seed,
        flags_error: flags_additivity_error(&state)?,
        inequality_excess: inequality_excess(&state, opts)?,
        discord_along_flags: discord_along(&rho, "M", theta, phi)?,
        chain_passed: chain.passed(),
        chain_min_slack: chain.min_slack,
        ppt: [
            ppt_check(b0, opts)?,
            ppt_check(b1, opts)?,
            ppt_check(&marginal(&rho, &PROBE_LABELS)?, opts)?,
        ],
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub instances: Vec<InstanceReport>,
}

impl SuiteReport {
    pub fn flags_failures(&self) -> Vec<u64> {
        self.failing(|i| i.flags_error > FLAGS_TOLERANCE)
    }

    pub fn inequality_failures(&self) -> Vec<u64> {
        self.failing(|i| i.inequality_excess > INEQUALITY_TOLERANCE)
    }

    pub fn chain_failures(&self) -> Vec<u64> {
        self.failing(|i| !i.chain_passed)
    }

    pub fn discord_failures(&self) -> Vec<u64> {
        self.failing(|i| i.discord_along_flags.abs() > DISCORD_TOLERANCE)
    }

    /// `(agreeing, total)` over every checked two-qubit state.
    pub fn ppt_agreement(&self) -> (usize, usize) {
        let all = self.instances.iter().flat_map(|i| i.ppt.iter());
        let total = self.instances.len() * 3;
        (all.filter(|c| c.agrees()).count(), total)
    }

    pub fn ppt_disagreements(&self) -> Vec<(u64, PptCheck)> {
        self.instances
            .iter()
            .flat_map(|i| i.ppt.iter().filter(|c| !c.agrees()).map(move |c| (i.seed, *c)))
            .collect()
    }

    /// Gated properties: flags additivity, the REE inequality, the chain and zero
    /// discord along the flag basis.
    pub fn passed(&self) -> bool {
        self.flags_failures().is_empty()
            && self.inequality_failures().is_empty()
            && self.chain_failures().is_empty()
            && self.discord_failures().is_empty()
    }

    fn failing(&self, bad: impl Fn(&InstanceReport) -> bool) -> Vec<u64> {
        self.instances.iter().filter(|i| bad(i)).map(|i| i.seed).collect()
    }
}

/// Runs [`check_instance`] for `count` consecutive seeds from `first_seed`.
pub fn property_suite(first_seed: u64, count: usize, opts: &MeasureOptions) -> Result<SuiteReport> {
    let instances = (0..count as u64)
        .into_par_iter()
        .map(|k| check_instance(first_seed.wrapping_add(k), opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport { instances })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::ClassicalMediatorState;
    use crate::state_engine::{named_state, QubitBasis};

    #[test]
    fn evolution_keeps_flag_form() {
        let s = random_classical_mediator_state(11);
        let rho = evolve_flag_state(&s, 0.6).unwrap();
        let (_, residual) = ClassicalMediatorState::decompose(&rho, s.basis()).unwrap();
        assert!(residual < 1e-12);
    }

    #[test]
    fn initial_example_saturates_the_inequality() {
        let s = ClassicalMediatorState::new(
            [0.5, 0.5],
            [named_state("psi_plus").unwrap(), named_state("phi_plus").unwrap()],
            QubitBasis::x(),
        )
        .unwrap();
        assert!(flags_additivity_error(&s).unwrap() < 1e-12);
        let excess = inequality_excess(&s, &MeasureOptions::default()).unwrap();
        assert!(excess.abs() < 1e-6, "{excess}");
    }

    #[test]
    fn one_instance_passes() {
        let r = check_instance(5, &MeasureOptions::default()).unwrap();
        assert!(r.flags_error < FLAGS_TOLERANCE);
        assert!(r.inequality_excess < INEQUALITY_TOLERANCE);
        assert!(r.chain_passed);
        assert!(r.discord_along_flags.abs() < DISCORD_TOLERANCE);
    }
}
