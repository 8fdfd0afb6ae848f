use std::f64::consts::PI;

use qmed::dynamics::{
    default_grid, evolve, initial_state, prepare_via_circuit, propagator, propagator_factored, run_monitored,
    run_schedule, EvolutionParams, MonitoringSchedule,
};
use qmed::measures::negativity;
use qmed::state_engine::{fidelity, marginal, Bipartition, DensityMatrix};

fn neg_ab(rho: &DensityMatrix) -> f64 {
    let ab = marginal(rho, &["A", "B"]).unwrap();
    negativity(&ab, &Bipartition::parse(ab.labels(), "A:B").unwrap()).unwrap()
}

#[test]
fn probe_negativity_follows_closed_form() {
    // Each flag branch rotates its Bell pair by exp(∓iωt X_A X_B); the pair
    // mixture then has negativity |sin 4ωt| / 2.
    let rho0 = initial_state();
    for wt in default_grid() {
        let rho = evolve(&rho0, &EvolutionParams::from_omega_t(wt).unwrap()).unwrap();
        let oracle = 0.5 * (4.0 * wt).sin().abs();
        assert!((neg_ab(&rho) - oracle).abs() < 1e-12, "ωt = {wt}");
    }
}

#[test]
fn only_the_product_omega_t_matters() {
    let rho0 = initial_state();
    let a = evolve(&rho0, &EvolutionParams::new(2.0, 0.25).unwrap()).unwrap();
    let b = evolve(&rho0, &EvolutionParams::new(0.5, 1.0).unwrap()).unwrap();
    assert!(fidelity(&a, &b).unwrap() > 1.0 - 1e-12);
}

#[test]
fn terms_commute() {
    for wt in [0.1, PI / 8.0, 1.3] {
        let p = EvolutionParams::from_omega_t(wt).unwrap();
        assert!(propagator(&p).distance_up_to_phase(&propagator_factored(&p)) < 1e-12);
    }
}

#[test]
fn circuit_prepares_the_initial_state() {
    assert!(fidelity(&prepare_via_circuit(), &initial_state()).unwrap() > 1.0 - 1e-12);
}

#[test]
fn two_step_schedule_matches_evolution() {
    let rho0 = initial_state();
    let wt = PI / 8.0;
    let direct = evolve(&rho0, &EvolutionParams::from_omega_t(wt).unwrap()).unwrap();
    for dephase in [false, true] {
        let scheduled = run_schedule(&MonitoringSchedule::two_step(wt, dephase), &rho0).unwrap();
        assert!(fidelity(&scheduled, &direct).unwrap() > 1.0 - 1e-12);
    }
}

#[test]
fn monitored_samples_cover_the_grid() {
    let grid = default_grid();
    let out = run_monitored(&MonitoringSchedule::stroboscopic(&grid).unwrap(), &initial_state()).unwrap();
    assert_eq!(out.len(), grid.len());
    for ((t, _), g) in out.iter().zip(&grid) {
        assert!((t - g).abs() < 1e-12);
    }
}
