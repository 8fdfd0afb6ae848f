use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::molecule::MoleculeSpec;
use crate::dynamics::EvolutionParams;
use crate::error::{Error, Result};
use crate::measures::TRIPARTITE_LABELS;

/// Transverse axis of an RF pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    #[serde(rename = "x")]
    X,
    #[serde(rename = "y")]
    Y,
    #[serde(rename = "-x")]
    MinusX,
    #[serde(rename = "-y")]
    MinusY,
}

impl Phase {
    /// Azimuth of the rotation axis in the xy plane.
    pub fn azimuth(self) -> f64 {
        match self {
            Phase::X => 0.0,
            Phase::Y => FRAC_PI_2,
            Phase::MinusX => PI,
            Phase::MinusY => 3.0 * FRAC_PI_2,
        }
    }

    pub fn inverted(self) -> Phase {
        match self {
            Phase::X => Phase::MinusX,
            Phase::Y => Phase::MinusY,
            Phase::MinusX => Phase::X,
            Phase::MinusY => Phase::Y,
        }
    }
}

fn unit() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PulseEvent {
    /// Hard pulse `exp(−i κθ/2 (cos φ σx + sin φ σy))` on every target.
    Rotation {
        targets: Vec<String>,
        angle: f64,
        phase: Phase,
        #[serde(default = "unit")]
        kappa: f64,
    },
    /// Free evolution under the molecular Hamiltonian.
    Delay { duration_s: f64 },
    /// Gradient dephasing of `M` in its `σz` eigenbasis.
    PfgDephaseM,
}

impl PulseEvent {
    pub fn rotation(targets: &[&str], angle: f64, phase: Phase) -> Self {
        PulseEvent::Rotation {
            targets: targets.iter().map(|s| s.to_string()).collect(),
            angle,
            phase,
            kappa: 1.0,
        }
    }

    pub fn delay(duration_s: f64) -> Self {
        PulseEvent::Delay { duration_s }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PulseEvent::Rotation {
                targets,
                angle,
                kappa,
                ..
            } => {
                if targets.is_empty() {
                    return Err(Error::InvalidSequence("rotation without targets".into()));
                }
                for (i, t) in targets.iter().enumerate() {
                    if !TRIPARTITE_LABELS.contains(&t.as_str()) {
                        return Err(Error::UnknownLabel(t.clone()));
                    }
                    if targets[..i].contains(t) {
                        return Err(Error::InvalidSequence(format!("target `{t}` repeated")));
                    }
                }
                if !(angle.is_finite() && *angle > 0.0) {
                    return Err(Error::InvalidSequence(format!("rotation angle {angle} must be positive")));
                }
                if !(kappa.is_finite() && *kappa > 0.0) {
                    return Err(Error::InvalidSequence(format!("amplitude scale {kappa} must be positive")));
                }
            }
            PulseEvent::Delay { duration_s } => {
                if !(duration_s.is_finite() && *duration_s >= 0.0) {
                    return Err(Error::InvalidSequence(format!("delay {duration_s} s must be nonnegative")));
                }
            }
            PulseEvent::PfgDephaseM => {}
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    molecule: MoleculeSpec,
    events: Vec<PulseEvent>,
}

impl PulseSequence {
    pub fn new(molecule: MoleculeSpec, events: Vec<PulseEvent>) -> Result<Self> {
        molecule.validate()?;
        for e in &events {
            e.validate()?;
        }
        Ok(Self { molecule, events })
    }

    pub fn molecule(&self) -> &MoleculeSpec {
        &self.molecule
    }

    pub fn events(&self) -> &[PulseEvent] {
        &self.events
    }

    pub fn total_delay(&self) -> f64 {
        self.events
            .iter()
            .map(|e| match e {
                PulseEvent::Delay { duration_s } => *duration_s,
                _ => 0.0,
            })
            .sum()
    }

    /// The event list as JSON.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.events)?)
    }

    pub fn from_json(text: &str, molecule: MoleculeSpec) -> Result<Self> {
        Self::new(molecule, serde_json::from_str(text)?)
    }
}

/// Free-evolution time that accumulates `ωt` of `σz σz` phase under a
/// coupling of `j` Hz.
pub fn evolution_delay(omega_t: f64, j: f64) -> Result<f64> {
    if omega_t == 0.0 {
        return Ok(0.0);
    }
    if j == 0.0 {
        return Err(Error::InvalidSequence("cannot reach a nonzero ωt with a zero coupling".into()));
    }
    Ok(2.0 * omega_t / (PI * j.abs()))
}

/// `exp(−i ωt σx^P σx^M)` for probe `P`, with the other probe refocused by
/// a pair of π pulses. A negative coupling is absorbed by inverting the
/// phases of the basis-change pulses on `M`.
pub fn compile_half(probe: &str, omega_t: f64, m: &MoleculeSpec) -> Result<Vec<PulseEvent>> {
    let (other, j) = match probe {
        "A" => ("B", m.j_am),
        "B" => ("A", m.j_bm),
        _ => return Err(Error::UnknownLabel(probe.to_string())),
    };
    let d = evolution_delay(omega_t, j)?;
    let open = Phase::MinusY;
    let open_m = if j < 0.0 { open.inverted() } else { open };
    let mut events = Vec::with_capacity(8);
    if open_m == open {
        events.push(PulseEvent::rotation(&[probe, "M"], FRAC_PI_2, open));
    } else {
        events.push(PulseEvent::rotation(&[probe], FRAC_PI_2, open));
        events.push(PulseEvent::rotation(&["M"], FRAC_PI_2, open_m));
    }
    events.push(PulseEvent::delay(d / 2.0));
    events.push(PulseEvent::rotation(&[other], PI, Phase::X));
    events.push(PulseEvent::delay(d / 2.0));
    events.push(PulseEvent::rotation(&[other], PI, Phase::X));
    if open_m == open {
        events.push(PulseEvent::rotation(&[probe, "M"], FRAC_PI_2, open.inverted()));
    } else {
        events.push(PulseEvent::rotation(&[probe], FRAC_PI_2, open.inverted()));
        events.push(PulseEvent::rotation(&["M"], FRAC_PI_2, open_m.inverted()));
    }
    Ok(events)
}

/// Gradient pair around a π pulse on `M`, between basis changes: an
/// `σx`-basis dephasing of `M`. The second π pulse undoes the first.
pub fn dephasing_block() -> Vec<PulseEvent> {
    vec![
        PulseEvent::rotation(&["M"], FRAC_PI_2, Phase::Y),
        PulseEvent::PfgDephaseM,
        PulseEvent::rotation(&["M"], PI, Phase::X),
        PulseEvent::PfgDephaseM,
        PulseEvent::rotation(&["M"], PI, Phase::X),
        PulseEvent::rotation(&["M"], FRAC_PI_2, Phase::MinusY),
    ]
}

/// Pulse sequence realizing `ωt` of `AM` coupling then `ωt` of `BM`
/// coupling, with the dephasing block after each half when `dephase` is set.
pub fn compile_sequence(target: &EvolutionParams, dephase: bool, m: &MoleculeSpec) -> Result<PulseSequence> {
    let omega_t = target.omega_t();
    if omega_t > PI + 1e-12 {
        return Err(Error::InvalidSequence(format!("ωt = {omega_t} exceeds one period (π)")));
    }
    let mut events = compile_half("A", omega_t, m)?;
    if dephase {
        events.extend(dephasing_block());
    }
    events.extend(compile_half("B", omega_t, m)?);
    if dephase {
        events.extend(dephasing_block());
    }
    PulseSequence::new(*m, events)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delays_follow_the_coupling() {
        let m = MoleculeSpec::default();
        let seq = compile_sequence(&EvolutionParams::from_omega_t(PI / 8.0).unwrap(), false, &m).unwrap();
        let expected = 2.0 * (PI / 8.0) / PI * (1.0 / m.j_am + 1.0 / m.j_bm.abs());
        assert!((seq.total_delay() - expected).abs() < 1e-15);
    }

    #[test]
    fn negative_coupling_inverts_mediator_phases() {
        let m = MoleculeSpec::default();
        let half = compile_half("B", 0.3, &m).unwrap();
        assert_eq!(half[1], PulseEvent::rotation(&["M"], FRAC_PI_2, Phase::Y));
        let pos = compile_half("A", 0.3, &m).unwrap();
        assert_eq!(pos[0], PulseEvent::rotation(&["A", "M"], FRAC_PI_2, Phase::MinusY));
    }

    #[test]
    fn overlong_target_rejected() {
        let p = EvolutionParams::from_omega_t(4.0).unwrap();
        assert!(compile_sequence(&p, false, &MoleculeSpec::default()).is_err());
        let zero = MoleculeSpec::new(0.0, 1.0, 0.0).unwrap();
        assert!(compile_sequence(&EvolutionParams::from_omega_t(0.1).unwrap(), false, &zero).is_err());
    }

    #[test]
    fn events_round_trip_through_json() {
        let m = MoleculeSpec::default();
        let seq = compile_sequence(&EvolutionParams::from_omega_t(0.2).unwrap(), true, &m).unwrap();
        let back = PulseSequence::from_json(&seq.to_json().unwrap(), m).unwrap();
        assert_eq!(back, seq);
        let e: PulseEvent =
            serde_json::from_str(r#"{"kind":"rotation","targets":["A"],"angle":1.0,"phase":"-y"}"#).unwrap();
        assert_eq!(e, PulseEvent::rotation(&["A"], 1.0, Phase::MinusY));
        assert_eq!(
            serde_json::from_str::<PulseEvent>(r#"{"kind":"pfg_dephase_m"}"#).unwrap(),
            PulseEvent::PfgDephaseM
        );
    }

    #[test]
    fn invalid_events_rejected() {
        let m = MoleculeSpec::default();
        for bad in [
            PulseEvent::delay(-1.0),
            PulseEvent::rotation(&["A"], 0.0, Phase::X),
            PulseEvent::rotation(&["Q"], 1.0, Phase::X),
            PulseEvent::rotation(&["A", "A"], 1.0, Phase::X),
            PulseEvent::rotation(&[], 1.0, Phase::X),
        ] {
            assert!(PulseSequence::new(m, vec![bad]).is_err());
        }
    }
}
