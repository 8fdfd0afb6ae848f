//! Numerical check of the localisation bound
//! `E_A:B(t) − E_A:B(0) ≤ I_AB:M(0)` and of the chain
//! `E_A:B(t) ≤ E_A:BM(t) ≤ E_A:BM(0)` along a trajectory whose mediator stays
//! classical in a fixed basis.

use std::fmt;

use rayon::prelude::*;

use super::mediator::{ree_classical_mediator, ClassicalMediatorState, PROBE_LABELS};
use super::ree::{ree_two_qubit, ReeOptions};
use super::report::CorrelationReport;
use super::entropy::mutual_information;
use crate::error::Result;
use crate::state_engine::{marginal, Bipartition, DensityMatrix, QubitBasis};

/// Tolerance on the bound itself.
pub const BOUND_TOLERANCE: f64 = 1e-6;
/// Tolerance on each link of the chain (REE optimizer accuracy).
pub const CHAIN_TOLERANCE: f64 = 1e-3;
/// Gain within this distance of the bound counts as saturation.
pub const SATURATION_TOLERANCE: f64 = 1e-3;
/// Largest `‖ρ − D_M(ρ)‖_max` accepted as a classical mediator.
pub const CLASSICALITY_TOLERANCE: f64 = 1e-9;

/// One sampled time of a trajectory.
#[derive(Debug, Clone)]
pub struct TrajectoryPoint {
    pub report: CorrelationReport,
    pub state: DensityMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// `E_A:B(t) − E_A:B(0) > I_AB:M(0)`.
    Bound,
    /// `E_A:B(t) > E_A:BM(t)`.
    TraceOutMonotonicity,
    /// `E_A:BM(t) > E_A:BM(0)`.
    ProbeRestGrowth,
    /// The state is not of flag form in the mediator basis.
    MediatorNotClassical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub time: f64,
    pub kind: ViolationKind,
    /// How far past the tolerance-free inequality the point lies.
    pub excess: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainPoint {
    pub time: f64,
    pub ree_a_b: f64,
    pub ree_a_bm: f64,
    pub classicality_residual: f64,
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    /// `I_AB:M(0)` in bits.
    pub bound: f64,
    pub initial_ree_a_b: f64,
    pub initial_ree_a_bm: f64,
    /// Largest `E_A:B(t) − E_A:B(0)` along the trajectory.
    pub max_gain: f64,
    pub max_gain_time: f64,
    /// `min_t (bound − gain(t))`; negative means the bound is exceeded.
    pub min_slack: f64,
    pub saturated: bool,
    pub chain: Vec<ChainPoint>,
    pub violations: Vec<Violation>,
    pub optimizer_converged: bool,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "bound I_AB:M(0)     = {:.6} bit", self.bound)?;
        writeln!(f, "max gain            = {:.6} bit at t = {:.6}", self.max_gain, self.max_gain_time)?;
        writeln!(f, "min slack           = {:.3e} bit", self.min_slack)?;
        writeln!(f, "E_A:BM(0)           = {:.6} bit", self.initial_ree_a_bm)?;
        writeln!(f, "saturated           = {}", self.saturated)?;
        for v in &self.violations {
            writeln!(f, "VIOLATION {:?} at t = {:.6} by {:.3e}", v.kind, v.time, v.excess)?;
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Checks the bound and the chain at every trajectory point.
///
/// `reports[i].ree_A_B` is taken as `E_A:B(t_i)`; `E_A:BM(t)` is computed
/// from the flag decomposition of each state in `mediator_basis`.
pub fn verify_localisation_bound(
    trajectory: &[TrajectoryPoint],
    initial: &DensityMatrix,
    mediator_basis: &QubitBasis,
    opts: &ReeOptions,
) -> Result<BoundReport> {
    let abm = initial.permuted(&super::mediator::TRIPARTITE_LABELS)?;
    let bound = mutual_information(&abm, &Bipartition::new(abm.labels(), &PROBE_LABELS)?)?;
    let initial_ab = ree_two_qubit(&marginal(&abm, &PROBE_LABELS)?, opts)?;
    let (initial_flags, initial_residual) = ClassicalMediatorState::decompose(&abm, mediator_basis)?;
    let initial_a_bm = ree_classical_mediator(&initial_flags, opts)?;

    let mut violations = Vec::new();
    let mut converged = initial_ab.converged && initial_a_bm.converged;
    if initial_residual > CLASSICALITY_TOLERANCE {
        violations.push(Violation {
            time: 0.0,
            kind: ViolationKind::MediatorNotClassical,
            excess: initial_residual,
        });
    }

    let per_point: Vec<Result<(ChainPoint, bool)>> = trajectory
        .par_iter()
        .map(|p| {
            let (flags, residual) = ClassicalMediatorState::decompose(&p.state, mediator_basis)?;
            let a_bm = ree_classical_mediator(&flags, opts)?;
            Ok((
                ChainPoint {
                    time: p.report.time,
                    ree_a_b: p.report.ree_A_B,
                    ree_a_bm: a_bm.bits,
                    classicality_residual: residual,
                },
                a_bm.converged,
            ))
        })
        .collect();

    let mut chain = Vec::with_capacity(trajectory.len());
    let mut max_gain = f64::NEG_INFINITY;
    let mut max_gain_time = 0.0;
    let mut min_slack = f64::INFINITY;
    for item in per_point {
        let (point, ok) = item?;
        converged &= ok;
        let gain = point.ree_a_b - initial_ab.bits;
        if gain > max_gain {
            max_gain = gain;
            max_gain_time = point.time;
        }
        min_slack = min_slack.min(bound - gain);
        let mut flag = |kind, excess: f64, tol: f64| {
            if excess > tol {
                violations.push(Violation {
                    time: point.time,
                    kind,
                    excess,
                });
            }
        };
        flag(ViolationKind::Bound, gain - bound, BOUND_TOLERANCE);
        flag(ViolationKind::TraceOutMonotonicity, point.ree_a_b - point.ree_a_bm, CHAIN_TOLERANCE);
        flag(ViolationKind::ProbeRestGrowth, point.ree_a_bm - initial_a_bm.bits, CHAIN_TOLERANCE);
        flag(
            ViolationKind::MediatorNotClassical,
            point.classicality_residual,
            CLASSICALITY_TOLERANCE,
        );
        chain.push(point);
    }
    if chain.is_empty() {
        max_gain = 0.0;
        min_slack = bound;
    }

    Ok(BoundReport {
        bound,
        initial_ree_a_b: initial_ab.bits,
        initial_ree_a_bm: initial_a_bm.bits,
        max_gain,
        max_gain_time,
        min_slack,
        saturated: min_slack.abs() <= SATURATION_TOLERANCE,
        chain,
        violations,
        optimizer_converged: converged,
    })
}
