//! Ideal three-qubit model: the initial probe–mediator state, its
//! preparation circuit, evolution under `ω (σx^A + σx^B) ⊗ σx^M` and
//! monitored (dephased) evolution schedules.

mod circuit;
mod schedule;

pub use circuit::{circuit_input, preparation_circuit, prepare_via_circuit, run_circuit, Gate};
pub use schedule::{run_monitored, run_schedule, MonitoringSchedule, ScheduleEvent, Term};

use crate::error::{Error, Result};
use crate::measures::TRIPARTITE_LABELS;
use crate::state_engine::linalg::{identity, CMatrix, C64};
use crate::state_engine::{apply_unitary, embed_product, ket, owned_labels, DensityMatrix, Pauli, UnitaryOperator};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionParams {
    omega: f64,
    t: f64,
}

impl EvolutionParams {
    pub fn new(omega: f64, t: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParameter(format!("coupling ω = {omega} must be positive")));
        }
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter(format!("time t = {t} must be nonnegative")));
        }
        Ok(Self { omega, t })
    }

    /// Parameters with ω = 1 rad/s reaching the given `ωt`.
    pub fn from_omega_t(omega_t: f64) -> Result<Self> {
        Self::new(1.0, omega_t)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn omega_t(&self) -> f64 {
        self.omega * self.t
    }
}

fn labels() -> Vec<String> {
    owned_labels(&TRIPARTITE_LABELS)
}

/// `½ |ψ+⟩⟨ψ+| ⊗ |+⟩⟨+| + ½ |φ+⟩⟨φ+| ⊗ |−⟩⟨−|` on `A, B, M`.
pub fn initial_state() -> DensityMatrix {
    let psi = ket("psi_plus").expect("catalog");
    let phi = ket("phi_plus").expect("catalog");
    let plus = ket("plus").expect("catalog");
    let minus = ket("minus").expect("catalog");
    let a = psi.kronecker(&plus);
    let b = phi.kronecker(&minus);
    let m = (&a * a.adjoint() + &b * b.adjoint()).scale(0.5);
    DensityMatrix::from_trusted(labels(), m)
}

/// `ω (σx^A + σx^B) ⊗ σx^M`.
pub fn hamiltonian(omega: f64) -> CMatrix {
    let x = Pauli::X.matrix();
    let l = labels();
    let am = embed_product(&l, &[("A", &x), ("M", &x)]).expect("fixed labels");
    let bm = embed_product(&l, &[("B", &x), ("M", &x)]).expect("fixed labels");
    (am + bm).scale(omega)
}

/// Same coupling with the mediator observable replaced by `n·σ`, for a
/// mediator that is classical in the eigenbasis of `n·σ`.
pub fn hamiltonian_along(omega: f64, mediator_axis: [f64; 3]) -> CMatrix {
    let [nx, ny, nz] = mediator_axis;
    let m_op = Pauli::X.matrix().scale(nx) + Pauli::Y.matrix().scale(ny) + Pauli::Z.matrix().scale(nz);
    let x = Pauli::X.matrix();
    let l = labels();
    let am = embed_product(&l, &[("A", &x), ("M", &m_op)]).expect("fixed labels");
    let bm = embed_product(&l, &[("B", &x), ("M", &m_op)]).expect("fixed labels");
    (am + bm).scale(omega)
}

/// `exp(−i ωt σx^P σx^M)` for a single probe `P`, in closed form
/// (the generator squares to the identity).
pub fn term_propagator(probe: &str, omega_t: f64) -> UnitaryOperator {
    let x = Pauli::X.matrix();
    let l = labels();
    let xx = embed_product(&l, &[(probe, &x), ("M", &x)]).expect("fixed labels");
    let u = identity(8).scale(omega_t.cos()) - xx * C64::new(0.0, omega_t.sin());
    UnitaryOperator::new(l, u).expect("closed form is unitary")
}

/// `exp(−i H t)` from the eigendecomposition of the full generator.
pub fn propagator(p: &EvolutionParams) -> UnitaryOperator {
    UnitaryOperator::evolution(&TRIPARTITE_LABELS, &hamiltonian(p.omega()), p.t())
        .expect("Hermitian generator")
}

/// The same propagator as the product of the commuting `AM` and `BM`
/// factors.
pub fn propagator_factored(p: &EvolutionParams) -> UnitaryOperator {
    let am = term_propagator("A", p.omega_t());
    let bm = term_propagator("B", p.omega_t());
    bm.compose(&am).expect("same labels")
}

/// State after evolving `rho` (labels `A, B, M`) under the full coupling.
pub fn evolve(rho: &DensityMatrix, p: &EvolutionParams) -> Result<DensityMatrix> {
    apply_unitary(rho, &propagator(p))
}

/// `points` uniformly spaced values of `ωt` over `[0, max]`.
pub fn uniform_grid(max_omega_t: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::InvalidParameter(format!("grid needs at least 2 points, got {points}")));
    }
    if !(max_omega_t.is_finite() && max_omega_t > 0.0) {
        return Err(Error::InvalidParameter(format!("grid end {max_omega_t} must be positive")));
    }
    Ok((0..points)
        .map(|i| max_omega_t * i as f64 / (points - 1) as f64)
        .collect())
}

/// 33 points over `ωt ∈ [0, π/2]`.
pub fn default_grid() -> Vec<f64> {
    uniform_grid(std::f64::consts::FRAC_PI_2, 33).expect("valid defaults")
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_8, PI};

    use super::*;
    use crate::measures::{discord_on_qubit, negativity, DiscordOptions};
    use crate::state_engine::linalg::{max_abs_diff, trace};
    use crate::state_engine::{marginal, Bipartition};

    #[test]
    fn initial_state_is_rank_two() {
        let rho = initial_state();
        rho.validate().unwrap();
        let ev = rho.eigenvalues();
        assert_eq!(ev.iter().filter(|&&l| l > 1e-12).count(), 2);
        assert!((trace(rho.matrix()).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn propagator_at_zero_is_identity() {
        let u = propagator(&EvolutionParams::new(1.0, 0.0).unwrap());
        assert!(max_abs_diff(u.matrix(), &identity(8)) < 1e-14);
    }

    #[test]
    fn factors_commute_and_agree_with_direct_exponential() {
        for &wt in &[0.0, 0.1, FRAC_PI_8, 1.3, 3.0] {
            let am = term_propagator("A", wt);
            let bm = term_propagator("B", wt);
            let ab = am.compose(&bm).unwrap();
            let ba = bm.compose(&am).unwrap();
            assert!(max_abs_diff(ab.matrix(), ba.matrix()) < 1e-12);
            let p = EvolutionParams::new(2.0, wt / 2.0).unwrap();
            assert!(max_abs_diff(propagator(&p).matrix(), propagator_factored(&p).matrix()) < 1e-12);
        }
    }

    #[test]
    fn probes_maximally_entangled_at_pi_over_8() {
        let rho = evolve(&initial_state(), &EvolutionParams::from_omega_t(FRAC_PI_8).unwrap()).unwrap();
        let ab = marginal(&rho, &["A", "B"]).unwrap();
        let n = negativity(&ab, &Bipartition::new(ab.labels(), &["A"]).unwrap()).unwrap();
        assert!((n - 0.5).abs() < 1e-9, "{n}");
    }

    #[test]
    fn mediator_marginal_is_stationary_and_classical() {
        let rho0 = initial_state();
        let m0 = marginal(&rho0, &["M"]).unwrap();
        for &wt in &[0.2, 0.7, 1.4] {
            let rho = evolve(&rho0, &EvolutionParams::from_omega_t(wt).unwrap()).unwrap();
            let m = marginal(&rho, &["M"]).unwrap();
            assert!(max_abs_diff(m.matrix(), m0.matrix()) < 1e-12);
            let d = discord_on_qubit(&rho, "M", &DiscordOptions::default()).unwrap();
            assert!(d.bits < 1e-6);
        }
    }

    #[test]
    fn energy_is_conserved() {
        let h = hamiltonian(1.0);
        let rho0 = initial_state();
        let e0 = trace(&(rho0.matrix() * &h)).re;
        for &wt in &[0.3, 1.1, 2.5] {
            let rho = evolve(&rho0, &EvolutionParams::from_omega_t(wt).unwrap()).unwrap();
            assert!((trace(&(rho.matrix() * &h)).re - e0).abs() < 1e-10);
        }
    }

    #[test]
    fn propagator_has_period_pi() {
        let a = propagator(&EvolutionParams::from_omega_t(0.4).unwrap());
        let b = propagator(&EvolutionParams::from_omega_t(0.4 + PI).unwrap());
        assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-12);
    }

    #[test]
    fn params_validation() {
        assert!(EvolutionParams::new(0.0, 1.0).is_err());
        assert!(EvolutionParams::new(1.0, -1.0).is_err());
        assert!(EvolutionParams::new(f64::NAN, 1.0).is_err());
        assert!(uniform_grid(1.0, 1).is_err());
        let g = default_grid();
        assert_eq!(g.len(), 33);
        assert!((g[8] - FRAC_PI_8).abs() < 1e-15);
    }
}
