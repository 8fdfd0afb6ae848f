use std::f64::consts::PI;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qmed::cli::suite::flags_additivity_error;
use qmed::dynamics::{evolve, initial_state, EvolutionParams};
use qmed::measures::{
    discord_along, mutual_information, negativity, random_classical_mediator_state, random_two_qubit_state,
    relative_entropy,
};
use qmed::nmr_sim::{compile_sequence, simulate_sequence, MoleculeSpec, RfiModel};
use qmed::state_engine::{
    apply_unitary, kron_all, marginal, partial_trace, partial_transpose, pauli, Bipartition, DensityMatrix, UnitaryOperator,
};

fn two_qubit(seed: u64) -> DensityMatrix {
    random_two_qubit_state(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn three_qubit(seed: u64) -> DensityMatrix {
    random_classical_mediator_state(seed).assemble()
}

fn sorted_spectrum(rho: &DensityMatrix) -> Vec<f64> {
    let mut v = rho.eigenvalues();
    v.sort_by(f64::total_cmp);
    v
}

fn local_unitary(labels: &[&str], target: &str, n: [f64; 3], angle: f64) -> UnitaryOperator {
    let h = pauli("X").unwrap().scale(n[0]) + pauli("Y").unwrap().scale(n[1]) + pauli("Z").unwrap().scale(n[2]);
    let local = UnitaryOperator::evolution(&[target], &h, angle).unwrap();
    let eye = pauli("I").unwrap();
    let ops: Vec<_> = labels
        .iter()
        .map(|l| if *l == target { local.matrix().clone() } else { eye.clone() })
        .collect();
    UnitaryOperator::from_labels(labels, kron_all(ops.iter())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn evolution_preserves_the_spectrum(seed in any::<u64>(), wt in 0.0..PI) {
        let rho = three_qubit(seed);
        let out = evolve(&rho, &EvolutionParams::from_omega_t(wt).unwrap()).unwrap();
        for (a, b) in sorted_spectrum(&rho).iter().zip(sorted_spectrum(&out)) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn partial_trace_of_product(s1 in any::<u64>(), s2 in any::<u64>()) {
        let ab = two_qubit(s1);
        let cd = two_qubit(s2).permuted(&["A", "B"]).unwrap();
        let cd = DensityMatrix::from_labels(&["C", "D"], cd.into_matrix()).unwrap();
        let joint = ab.tensor(&cd).unwrap();
        let back = partial_trace(&joint, &["C", "D"]).unwrap();
        prop_assert!((back.matrix() - ab.matrix()).iter().all(|z| z.norm() < 1e-12));
        let kept = marginal(&joint, &["C", "D"]).unwrap();
        prop_assert!((kept.matrix() - cd.matrix()).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn partial_transpose_swaps_indices(seed in any::<u64>()) {
        // Oracle: ⟨a b|ρ^{T_A}|a' b'⟩ = ⟨a' b|ρ|a b'⟩ with A the leading qubit.
        let rho = two_qubit(seed);
        let pt = partial_transpose(&rho, &Bipartition::new(rho.labels(), &["A"]).unwrap()).unwrap();
        let m = rho.matrix();
        for i in 0..4 {
            for j in 0..4 {
                let (a, b, a2, b2) = (i >> 1, i & 1, j >> 1, j & 1);
                let oracle = m[((a2 << 1) | b, (a << 1) | b2)];
                prop_assert!((pt[(i, j)] - oracle).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn mutual_information_is_locally_invariant(
        seed in any::<u64>(),
        n in prop::array::uniform3(-1.0f64..1.0),
        angle in 0.0..PI,
        target in prop::sample::select(vec!["A", "B", "M"]),
    ) {
        let rho = three_qubit(seed);
        let u = local_unitary(&["A", "B", "M"], target, n, angle);
        let out = apply_unitary(&rho, &u).unwrap();
        let cut = Bipartition::new(rho.labels(), &["A", "B"]).unwrap();
        let before = mutual_information(&rho, &cut).unwrap();
        let after = mutual_information(&out, &cut).unwrap();
        prop_assert!((before - after).abs() < 1e-9);
        let a = Bipartition::new(rho.labels(), &["A"]).unwrap();
        prop_assert!((negativity(&rho, &a).unwrap() - negativity(&out, &a).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn relative_entropy_vanishes_only_on_equal_states(s1 in any::<u64>(), s2 in any::<u64>(), mix in 0.1f64..0.9) {
        let rho = two_qubit(s1);
        prop_assert!(relative_entropy(&rho, &rho).unwrap().bits.abs() < 1e-9);
        let noise = DensityMatrix::maximally_mixed(&["A", "B"]);
        let sigma = DensityMatrix::mixture(&[(mix, &two_qubit(s2)), (1.0 - mix, &noise)]).unwrap();
        let d = relative_entropy(&rho, &sigma).unwrap().bits;
        let gap = (rho.matrix() - sigma.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(d >= -1e-12);
        if gap > 1e-3 {
            prop_assert!(d > 0.0);
        }
    }

    #[test]
    fn flag_states_are_additive_and_classical(seed in any::<u64>()) {
        let s = random_classical_mediator_state(seed);
        prop_assert!(flags_additivity_error(&s).unwrap() < 1e-9);
        let (theta, phi) = s.basis().bloch_angles();
        prop_assert!(discord_along(&s.assemble(), "M", theta, phi).unwrap().abs() < 1e-6);
    }

    #[test]
    fn rfi_models_validate(raw in prop::collection::vec((0.5f64..1.5, 0.01f64..1.0), 1..6)) {
        let total: f64 = raw.iter().map(|p| p.1).sum();
        let points: Vec<(f64, f64)> = raw.iter().map(|&(k, w)| (k, w / total)).collect();
        let model = RfiModel::new(points.clone()).unwrap();
        prop_assert!((model.mean() - points.iter().map(|(k, w)| k * w).sum::<f64>()).abs() < 1e-12);
        let text = model.to_string();
        prop_assert_eq!(text.parse::<RfiModel>().unwrap().points().len(), points.len());
        let mut bad = points;
        bad[0].1 += 0.1;
        prop_assert!(RfiModel::new(bad).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn rfi_keeps_states_valid_and_wider_spread_hurts(s1 in 0.0f64..0.08, extra in 0.01f64..0.08, dephase in any::<bool>()) {
        let m = MoleculeSpec::default();
        let seq = compile_sequence(&EvolutionParams::from_omega_t(PI / 8.0).unwrap(), dephase, &m).unwrap();
        let rho0 = initial_state();
        let peak = |s: f64| {
            let out = simulate_sequence(&seq, &rho0, Some(&RfiModel::symmetric(s).unwrap())).unwrap();
            out.validate().unwrap();
            let ab = marginal(&out, &["A", "B"]).unwrap();
            negativity(&ab, &Bipartition::new(ab.labels(), &["A"]).unwrap()).unwrap()
        };
        let (narrow, wide) = (peak(s1), peak(s1 + extra));
        prop_assert!(wide <= narrow + 1e-12, "{} -> {}", narrow, wide);
        prop_assert!(wide < 0.5);
    }
}
