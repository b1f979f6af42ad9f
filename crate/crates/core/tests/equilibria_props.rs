mod common;

use powerflow_core::equilibria::{implied_scale, scale_spread, EQUILIBRIUM_TOL, TIE_TOL};
use powerflow_core::spectral::SPECTRAL_TOL;
use powerflow_core::{
    centrality_profile, classify, dominant_left_eigenvector, fixed_point_residual, predict_limit,
    simulate, solve_interior_equilibrium, Model, Prediction, RelativeInteractionMatrix,
    SelfWeightVector, SimulationOptions, Status,
};
use proptest::prelude::*;

fn check_ordering(x: &[f64], c: &[f64]) -> Result<(), TestCaseError> {
    for i in 0..c.len() {
        for j in 0..c.len() {
            if (c[i] - c[j]).abs() < TIE_TOL {
                prop_assert!((x[i] - x[j]).abs() < 10.0 * TIE_TOL);
            } else if c[i] > c[j] {
                prop_assert!(x[i] > x[j]);
                prop_assert!(x[i] / c[i] > x[j] / c[j], "accumulation fails for {i},{j}");
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solved_equilibria_are_consistent(seed in any::<u64>(), n in 3usize..9) {
        let c = common::random_irreducible_non_star(n, &mut common::rng(seed));
        let cv = dominant_left_eigenvector(&c, SPECTRAL_TOL).unwrap();
        let x = solve_interior_equilibrium(&cv, 1.0, EQUILIBRIUM_TOL).unwrap();
        prop_assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-13);
        let xs = SelfWeightVector::new(x.clone()).unwrap();
        prop_assert!(fixed_point_residual(&c, &xs) < 10.0 * EQUILIBRIUM_TOL);
        prop_assert!(scale_spread(&x, &cv) < 10.0 * EQUILIBRIUM_TOL);
        check_ordering(&x, &cv)?;
    }

    #[test]
    fn partial_mass_equilibria_are_consistent(
        seed in any::<u64>(), n in 3usize..9, mass in 0.05f64..0.999,
    ) {
        let mut rng = common::rng(seed);
        let c = common::random_irreducible(n, &mut rng);
        let cv = dominant_left_eigenvector(&c, SPECTRAL_TOL).unwrap();
        let x = solve_interior_equilibrium(&cv, mass, EQUILIBRIUM_TOL).unwrap();
        prop_assert!((x.iter().sum::<f64>() - mass).abs() < 1e-13);
        prop_assert!(scale_spread(&x, &cv) < 10.0 * EQUILIBRIUM_TOL);
        check_ordering(&x, &cv)?;
    }
}

fn st_limit(c: &RelativeInteractionMatrix, x0: &SelfWeightVector, max_steps: usize) -> SelfWeightVector {
    let opts = SimulationOptions { max_steps, record_every: 1000, ..Default::default() };
    simulate(Model::SingleTimescale, c, x0, &opts).unwrap().final_state().clone()
}

/// Wherever the prediction is a single point, simulation lands on it.
#[test]
fn predictions_match_simulation() {
    let mut checked = [0usize; 3];
    for seed in 0..300u64 {
        let mut rng = common::rng(seed);
        let n = 3 + (seed as usize % 6);
        let c = match seed % 3 {
            0 => common::random_valid(n, &mut rng),
            1 => common::random_irreducible(n, &mut rng),
            _ => {
                let r = 3.max(n - 2);
                common::random_with_sinks(n, &[(0..r).collect()], 0.3, &mut rng)
            }
        };
        let structure = classify(&c);
        let profile = centrality_profile(&c, &structure).unwrap();
        let x0 = common::random_interior(n, &mut rng);
        let pred = predict_limit(&c, &structure, &profile, &x0).unwrap();
        match &pred.kind {
            Prediction::UniqueInterior { x, alpha } => {
                let sim = st_limit(&c, &x0, 1_000_000);
                assert!(sim.distance(x) < 1e-6, "seed {seed}: {:?} vs {:?}", sim, x);
                let sink = &profile.sinks[0];
                let xs: Vec<f64> = sink.iter().map(|&i| x[i]).collect();
                for a in implied_scale(&xs, &profile.per_sink[0]) {
                    assert!((a - alpha).abs() < 1e-12);
                }
                checked[0] += 1;
            }
            Prediction::StarAutocrat { center } => {
                let sim = st_limit(&c, &x0, 200_000);
                assert!(sim.distance(&SelfWeightVector::vertex(n, *center)) < 1e-3);
                checked[1] += 1;
            }
            Prediction::TwoNodeFamily { support } => {
                let sim = st_limit(&c, &x0, 1_000_000);
                let on: f64 = support.iter().map(|&i| sim[i]).sum();
                assert!((on - 1.0).abs() < 1e-9, "seed {seed}");
                checked[2] += 1;
            }
            Prediction::Vertex { .. } | Prediction::MultiSinkFamily { .. } => {}
        }
    }
    assert!(checked[0] > 100, "too few interior cases: {checked:?}");
}

#[test]
fn star_predictions_match_simulation() {
    for seed in 0..12u64 {
        let mut rng = common::rng(seed);
        let n = 3 + (seed as usize % 6);
        let h = seed as usize % n;
        let c = common::random_star(n, h, &mut rng);
        let structure = classify(&c);
        let profile = centrality_profile(&c, &structure).unwrap();
        let x0 = common::random_interior(n, &mut rng);
        let pred = predict_limit(&c, &structure, &profile, &x0).unwrap();
        assert_eq!(pred.kind, Prediction::StarAutocrat { center: h });
        let sim = st_limit(&c, &x0, 200_000);
        assert!(sim.distance(&SelfWeightVector::vertex(n, h)) < 1e-3, "seed {seed}: {sim:?}");
    }
}

/// Every three-node `C` with row weights on a quarter grid: irreducible
/// non-star cases converge to the solver's fixed point.
#[test]
fn three_node_grid_oracle() {
    let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut cases = 0;
    for &p in &grid {
        for &q in &grid {
            for &r in &grid {
                let c = RelativeInteractionMatrix::from_rows(&[
                    [0.0, p, 1.0 - p],
                    [q, 0.0, 1.0 - q],
                    [r, 1.0 - r, 0.0],
                ])
                .unwrap();
                let s = classify(&c);
                if !s.is_irreducible() || s.star_center().is_some() {
                    continue;
                }
                let cv = dominant_left_eigenvector(&c, SPECTRAL_TOL).unwrap();
                let want = solve_interior_equilibrium(&cv, 1.0, EQUILIBRIUM_TOL).unwrap();
                let opts = SimulationOptions::default();
                let tr = simulate(Model::SingleTimescale, &c, &SelfWeightVector::uniform(3), &opts)
                    .unwrap();
                assert!(matches!(tr.status, Status::Converged { .. }), "{p} {q} {r}: {}", tr.status);
                assert!(common::sup(tr.final_state().values(), &want) < 1e-6, "{p} {q} {r}");
                cases += 1;
            }
        }
    }
    assert!(cases > 20, "only {cases} grid cases");
}
