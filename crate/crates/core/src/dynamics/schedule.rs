//! Evolution interleaved with projective dephasing of the mediator.
//!
//! Time is measured in units of `ωt`. A sample that falls on a boundary
//! between events is taken after every instantaneous event at that boundary.

use serde::{Deserialize, Serialize};

use super::{hamiltonian, term_propagator};
use crate::error::{Error, Result};
use crate::state_engine::{apply_unitary, dephase, DensityMatrix, QubitBasis, UnitaryOperator};

const BOUNDARY_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    /// Both couplings.
    #[default]
    Full,
    /// Only `σx^A σx^M`.
    Am,
    /// Only `σx^B σx^M`.
    Bm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ScheduleEvent {
    Evolve {
        omega_t: f64,
        #[serde(default)]
        term: Term,
    },
    /// Complete dephasing of `M` in the `σx` eigenbasis.
    DephaseM,
}

impl ScheduleEvent {
    pub fn evolve(omega_t: f64) -> Self {
        ScheduleEvent::Evolve {
            omega_t,
            term: Term::Full,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MonitoringSchedule {
    pub events: Vec<ScheduleEvent>,
    /// Sample times in units of `ωt`, ascending.
    #[serde(default)]
    pub samples: Vec<f64>,
}

impl MonitoringSchedule {
    /// `AM` coupling for `ωt`, optional dephasing, `BM` coupling for `ωt`,
    /// optional dephasing. Samples at the start, midpoint and end.
    pub fn two_step(omega_t: f64, dephase: bool) -> Self {
        let mut events = vec![ScheduleEvent::Evolve {
            omega_t,
            term: Term::Am,
        }];
        if dephase {
            events.push(ScheduleEvent::DephaseM);
        }
        events.push(ScheduleEvent::Evolve {
            omega_t,
            term: Term::Bm,
        });
        if dephase {
            events.push(ScheduleEvent::DephaseM);
        }
        Self {
            events,
            samples: vec![0.0, omega_t, 2.0 * omega_t],
        }
    }

    /// Full coupling, dephased after every grid step, sampled on the grid.
    pub fn stroboscopic(grid: &[f64]) -> Result<Self> {
        check_samples(grid)?;
        let mut events = Vec::new();
        let mut clock = 0.0;
        for &t in grid {
            if t > clock {
                events.push(ScheduleEvent::evolve(t - clock));
                events.push(ScheduleEvent::DephaseM);
                clock = t;
            }
        }
        Ok(Self {
            events,
            samples: grid.to_vec(),
        })
    }

    /// Unmonitored evolution sampled on the grid.
    pub fn free(grid: &[f64]) -> Result<Self> {
        check_samples(grid)?;
        let end = grid.last().copied().unwrap_or(0.0);
        Ok(Self {
            events: if end > 0.0 { vec![ScheduleEvent::evolve(end)] } else { vec![] },
            samples: grid.to_vec(),
        })
    }

    pub fn duration(&self) -> f64 {
        self.events
            .iter()
            .map(|e| match e {
                ScheduleEvent::Evolve { omega_t, .. } => *omega_t,
                ScheduleEvent::DephaseM => 0.0,
            })
            .sum()
    }

    pub fn validate(&self) -> Result<()> {
        for e in &self.events {
            if let ScheduleEvent::Evolve { omega_t, .. } = e {
                if !(omega_t.is_finite() && *omega_t >= 0.0) {
                    return Err(Error::InvalidSequence(format!("evolution length {omega_t} must be nonnegative")));
                }
            }
        }
        check_samples(&self.samples)?;
        if let Some(&last) = self.samples.last() {
            if last > self.duration() + BOUNDARY_EPS {
                return Err(Error::InvalidSequence(format!(
                    "sample at {last} is past the end of the schedule ({})",
                    self.duration()
                )));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }
}

fn check_samples(samples: &[f64]) -> Result<()> {
    if samples.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::InvalidSequence("sample times must be finite and nonnegative".into()));
    }
    if samples.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidSequence("sample times must be ascending".into()));
    }
    Ok(())
}

fn step(term: Term, omega_t: f64) -> UnitaryOperator {
    match term {
        Term::Full => UnitaryOperator::evolution(
            &crate::measures::TRIPARTITE_LABELS,
            &hamiltonian(1.0),
            omega_t,
        )
        .expect("Hermitian generator"),
        Term::Am => term_propagator("A", omega_t),
        Term::Bm => term_propagator("B", omega_t),
    }
}

/// Runs the schedule from `rho0` (labels `A, B, M`) and returns
/// `(ωt, ρ)` at each sample time.
pub fn run_monitored(schedule: &MonitoringSchedule, rho0: &DensityMatrix) -> Result<Vec<(f64, DensityMatrix)>> {
    schedule.validate()?;
    let mut state = rho0.permuted(&crate::measures::TRIPARTITE_LABELS)?;
    let x = QubitBasis::x();
    let mut out = Vec::with_capacity(schedule.samples.len());
    let mut next = 0;
    let mut clock = 0.0;
    let samples = &schedule.samples;

    for event in &schedule.events {
        match *event {
            ScheduleEvent::DephaseM => state = dephase(&state, "M", &x)?,
            ScheduleEvent::Evolve { omega_t, term } => {
                while next < samples.len() && samples[next] <= clock + BOUNDARY_EPS {
                    out.push((samples[next], state.clone()));
                    next += 1;
                }
                let end = clock + omega_t;
                while next < samples.len() && samples[next] < end - BOUNDARY_EPS {
                    let partial = apply_unitary(&state, &step(term, samples[next] - clock))?;
                    out.push((samples[next], partial));
                    next += 1;
                }
                state = apply_unitary(&state, &step(term, omega_t))?;
                clock = end;
            }
        }
    }
    while next < samples.len() {
        out.push((samples[next], state.clone()));
        next += 1;
    }
    Ok(out)
}

/// Final state of the schedule.
pub fn run_schedule(schedule: &MonitoringSchedule, rho0: &DensityMatrix) -> Result<DensityMatrix> {
    let s = MonitoringSchedule {
        events: schedule.events.clone(),
        samples: vec![schedule.duration()],
    };
    Ok(run_monitored(&s, rho0)?.pop().expect("one sample").1)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_8;

    use super::*;
    use crate::dynamics::{default_grid, evolve, initial_state, EvolutionParams};
    use crate::state_engine::linalg::max_abs_diff;

    #[test]
    fn dephasing_commutes_with_the_ideal_dynamics() {
        let rho0 = initial_state();
        let grid = default_grid();
        let monitored = run_monitored(&MonitoringSchedule::stroboscopic(&grid).unwrap(), &rho0).unwrap();
        let free = run_monitored(&MonitoringSchedule::free(&grid).unwrap(), &rho0).unwrap();
        assert_eq!(monitored.len(), grid.len());
        for ((t1, a), (t2, b)) in monitored.iter().zip(&free) {
            assert_eq!(t1, t2);
            assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-12);
        }
    }

    #[test]
    fn free_samples_match_direct_evolution() {
        let rho0 = initial_state();
        let out = run_monitored(&MonitoringSchedule::free(&[0.0, 0.3, 0.9]).unwrap(), &rho0).unwrap();
        for (t, rho) in out {
            let direct = evolve(&rho0, &EvolutionParams::from_omega_t(t).unwrap()).unwrap();
            assert!(max_abs_diff(rho.matrix(), direct.matrix()) < 1e-12);
        }
    }

    #[test]
    fn two_step_equals_full_evolution() {
        let rho0 = initial_state();
        for dephase in [false, true] {
            let out = run_schedule(&MonitoringSchedule::two_step(FRAC_PI_8, dephase), &rho0).unwrap();
            let direct = evolve(&rho0, &EvolutionParams::from_omega_t(FRAC_PI_8).unwrap()).unwrap();
            assert!(max_abs_diff(out.matrix(), direct.matrix()) < 1e-12);
        }
    }

    #[test]
    fn boundary_samples_follow_instantaneous_events() {
        let rho0 = DensityMatrix::pure(&["A", "B", "M"], &crate::state_engine::ket("000").unwrap()).unwrap();
        let s = MonitoringSchedule {
            events: vec![ScheduleEvent::DephaseM, ScheduleEvent::evolve(0.5)],
            samples: vec![0.0],
        };
        let out = run_monitored(&s, &rho0).unwrap();
        let expected = dephase(&rho0, "M", &QubitBasis::x()).unwrap();
        assert!(max_abs_diff(out[0].1.matrix(), expected.matrix()) < 1e-15);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let s = MonitoringSchedule::two_step(0.4, true);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(MonitoringSchedule::from_json(&text).unwrap(), s);
        let parsed = MonitoringSchedule::from_json(
            r#"{"events":[{"op":"evolve","omega_t":0.2},{"op":"dephase_m"},{"op":"evolve","omega_t":0.1,"term":"bm"}],"samples":[0.3]}"#,
        )
        .unwrap();
        assert_eq!(parsed.events[0], ScheduleEvent::evolve(0.2));
        assert!(MonitoringSchedule::from_json(r#"{"events":[{"op":"evolve","omega_t":-1}]}"#).is_err());
        assert!(MonitoringSchedule::from_json(r#"{"events":[],"samples":[1.0]}"#).is_err());
        assert!(MonitoringSchedule::from_json(r#"{"events":[{"op":"spin"}]}"#).is_err());
    }
}
