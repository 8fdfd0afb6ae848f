use rayon::prelude::*;

use super::molecule::MoleculeSpec;
use super::rfi::RfiModel;
use super::sequence::{compile_half, PulseEvent, PulseSequence};
use crate::dynamics::term_propagator;
use crate::error::{Error, Result};
use crate::measures::TRIPARTITE_LABELS;
use crate::state_engine::linalg::{identity, CMatrix, CVector, C64};
use crate::state_engine::{
    apply_unitary, dephase, dephasing_channel, embed_product, owned_labels, DensityMatrix, Pauli, QuantumChannel,
    QubitBasis, UnitaryOperator,
};

/// `exp(−i θ/2 (cos φ σx + sin φ σy))`.
pub fn rotation_matrix(angle: f64, azimuth: f64) -> CMatrix {
    let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    let axis = Pauli::X.matrix().scale(azimuth.cos()) + Pauli::Y.matrix().scale(azimuth.sin());
    identity(2).scale(c) - axis * C64::new(0.0, s)
}

/// `exp(−i H t)` for the (diagonal) molecular Hamiltonian.
pub fn free_evolution(m: &MoleculeSpec, t: f64) -> CMatrix {
    let diag = CVector::from_iterator(8, m.diagonal().iter().map(|&e| C64::from_polar(1.0, -e * t)));
    CMatrix::from_diagonal(&diag)
}

/// Unitary of one event with every rotation angle scaled by `kappa`;
/// `None` for the gradient dephasing.
pub fn event_unitary(event: &PulseEvent, m: &MoleculeSpec, kappa: f64) -> Option<CMatrix> {
    let labels = owned_labels(&TRIPARTITE_LABELS);
    match event {
        PulseEvent::Rotation {
            targets,
            angle,
            phase,
            kappa: k,
        } => {
            let r = rotation_matrix(angle * k * kappa, phase.azimuth());
            let ops: Vec<(&str, &CMatrix)> = targets.iter().map(|t| (t.as_str(), &r)).collect();
            Some(embed_product(&labels, &ops).expect("validated targets"))
        }
        PulseEvent::Delay { duration_s } => Some(free_evolution(m, *duration_s)),
        PulseEvent::PfgDephaseM => None,
    }
}

/// Product of all event unitaries. Fails if the sequence dephases.
pub fn sequence_unitary(seq: &PulseSequence, kappa: f64) -> Result<UnitaryOperator> {
    let mut u = identity(8);
    for e in seq.events() {
        let step = event_unitary(e, seq.molecule(), kappa)
            .ok_or_else(|| Error::InvalidSequence("sequence contains a dephasing event".into()))?;
        u = step * u;
    }
    UnitaryOperator::new(owned_labels(&TRIPARTITE_LABELS), u)
}

/// Kraus representation of the whole sequence at amplitude scale `kappa`.
pub fn sequence_channel(seq: &PulseSequence, kappa: f64) -> Result<QuantumChannel> {
    let labels = owned_labels(&TRIPARTITE_LABELS);
    let z = QubitBasis::z().projectors();
    let pz: Vec<CMatrix> = z
        .iter()
        .map(|p| embed_product(&labels, &[("M", p)]).expect("fixed labels"))
        .collect();
    let mut kraus = vec![identity(8)];
    let mut pending = identity(8);
    for e in seq.events() {
        match event_unitary(e, seq.molecule(), kappa) {
            Some(u) => pending = u * pending,
            None => {
                let pending_ref = &pending;
                kraus = kraus
                    .iter()
                    .flat_map(|k| pz.iter().map(move |p| p * pending_ref * k))
                    .collect();
                pending = identity(8);
            }
        }
    }
    let kraus = kraus.iter().map(|k| &pending * k).collect();
    QuantumChannel::new(labels, kraus)
}

fn run_branch(seq: &PulseSequence, rho: &DensityMatrix, kappa: f64) -> Result<DensityMatrix> {
    let z = QubitBasis::z();
    let mut state = rho.clone();
    let mut pending = identity(8);
    for e in seq.events() {
        match event_unitary(e, seq.molecule(), kappa) {
            Some(u) => pending = u * pending,
            None => {
                state = apply_unitary(&state, &UnitaryOperator::from_trusted(state.labels().to_vec(), pending))?;
                state = dephase(&state, "M", &z)?;
                pending = identity(8);
            }
        }
    }
    apply_unitary(&state, &UnitaryOperator::from_trusted(state.labels().to_vec(), pending))
}

/// Final state of the sequence from `rho0` (labels `A, B, M` in any order;
/// the result is ordered `A, B, M`). With an RF model, the output is the
/// weighted mixture of the runs at each amplitude scale.
pub fn simulate_sequence(seq: &PulseSequence, rho0: &DensityMatrix, rfi: Option<&RfiModel>) -> Result<DensityMatrix> {
    if rho0.dim() != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            found: rho0.dim(),
        });
    }
    let rho = rho0.permuted(&TRIPARTITE_LABELS)?;
    let Some(rfi) = rfi else {
        return run_branch(seq, &rho, 1.0);
    };
    let branches: Vec<Result<DensityMatrix>> = rfi
        .points()
        .par_iter()
        .map(|&(kappa, _)| run_branch(seq, &rho, kappa))
        .collect();
    let mut acc: Option<CMatrix> = None;
    for (b, &(_, w)) in branches.into_iter().zip(rfi.points()) {
        let term = b?.into_matrix().scale(w);
        acc = Some(match acc {
            None => term,
            Some(a) => a + term,
        });
    }
    Ok(DensityMatrix::from_trusted(rho.labels().to_vec(), acc.expect("nonempty model")))
}

/// `exp(−iωt σx^A σx^M)`, then `exp(−iωt σx^B σx^M)`, each followed by an
/// `σx`-basis dephasing of `M` when `dephase` is set.
pub fn ideal_channel(omega_t: f64, dephase: bool) -> QuantumChannel {
    let am = QuantumChannel::from_unitary(&term_propagator("A", omega_t));
    let bm = QuantumChannel::from_unitary(&term_propagator("B", omega_t));
    if !dephase {
        return am.then(&bm).expect("same labels");
    }
    let d = dephasing_channel(&owned_labels(&TRIPARTITE_LABELS), "M", &QubitBasis::x()).expect("fixed labels");
    am.then(&d)
        .and_then(|c| c.then(&bm))
        .and_then(|c| c.then(&d))
        .expect("same labels")
}

/// Normalized Choi state `(E ⊗ id)(|Ω⟩⟨Ω|)` on the system labels followed
/// by `<label>_ref` copies.
pub fn choi_state(ch: &QuantumChannel) -> DensityMatrix {
    let d = ch.dim();
    let mut m = CMatrix::zeros(d * d, d * d);
    for k in ch.kraus() {
        // vec(K)[i·d + j] = K[i, j] pairs system index i with reference index j.
        let v = CVector::from_fn(d * d, |r, _| k[(r / d, r % d)]);
        m += &v * v.adjoint();
    }
    let mut labels = ch.labels().to_vec();
    labels.extend(ch.labels().iter().map(|l| format!("{l}_ref")));
    DensityMatrix::from_trusted(labels, m.unscale(d as f64))
}

pub fn choi_fidelity(a: &QuantumChannel, b: &QuantumChannel) -> Result<f64> {
    crate::state_engine::fidelity(&choi_state(a), &choi_state(b))
}

/// Largest deviation from the identity (up to global phase) of either
/// compiled half when only the probe–probe coupling is present.
pub fn echo_residual(omega_t: f64, m: &MoleculeSpec) -> Result<f64> {
    let only_ab = MoleculeSpec {
        j_am: 0.0,
        j_bm: 0.0,
        j_ab: m.j_ab,
    };
    let mut worst: f64 = 0.0;
    for probe in ["A", "B"] {
        // Delays come from the full molecule; the unitary is evaluated with J_AB alone.
        let seq = PulseSequence::new(only_ab, compile_half(probe, omega_t, m)?)?;
        let u = sequence_unitary(&seq, 1.0)?;
        worst = worst.max(u.distance_up_to_phase(&UnitaryOperator::identity(&TRIPARTITE_LABELS)));
    }
    Ok(worst)
}
